#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "d2d/streams.hpp"

namespace d2d {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// Lines starting with '#' are comments; `comment` (may be empty) is written
/// first, verbatim, and should already carry the leading '#'.
void write_stream_csv(std::ostream& os, const std::vector<LabeledRound>& rounds,
                      const std::string& comment = "");
std::vector<LabeledRound> read_stream_csv(std::istream& is);

void write_truth_csv(std::ostream& os, const ComparatorPath& truth, const std::string& comment = "");
ComparatorPath read_truth_csv(std::istream& is);

/// "dir/name.csv" -> "dir/name.truth.csv"; other extensions get ".truth.csv" appended.
std::string truth_path_for(const std::string& stream_path);

/// Minimal CSV row writer using format_double for every number.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header, const std::string& comment = "");
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
  std::size_t width_;
};

}  // namespace d2d
