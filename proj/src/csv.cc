#include "d2d/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace d2d {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

// Returns data rows (header checked by the caller) with their line numbers.
std::vector<std::pair<int, std::vector<std::string>>> read_rows(std::istream& is,
                                                                std::vector<std::string>& header) {
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      header = split(line);
      have_header = true;
      continue;
    }
    rows.emplace_back(line_no, split(line));
  }
  if (!have_header) throw std::runtime_error("csv: missing header");
  return rows;
}

void write_comment(std::ostream& os, const std::string& comment) {
  if (comment.empty()) return;
  os << comment;
  if (comment.back() != '\n') os << '\n';
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_stream_csv(std::ostream& os, const std::vector<LabeledRound>& rounds, const std::string& comment) {
  write_comment(os, comment);
  const long d = rounds.empty() ? 0 : rounds.front().z.size();
  os << "t,y";
  for (long i = 0; i < d; ++i) os << ",z_" << i;
  os << '\n';
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    if (rounds[t].z.size() != d) throw std::invalid_argument("write_stream_csv: ragged features");
    os << (t + 1) << ',' << format_double(rounds[t].y);
    for (long i = 0; i < d; ++i) os << ',' << format_double(rounds[t].z[i]);
    os << '\n';
  }
}

std::vector<LabeledRound> read_stream_csv(std::istream& is) {
  std::vector<std::string> header;
  auto rows = read_rows(is, header);
  if (header.size() < 3 || header[0] != "t" || header[1] != "y") {
    throw std::runtime_error("stream csv: header must be t,y,z_0,...");
  }
  const std::size_t d = header.size() - 2;
  for (std::size_t i = 0; i < d; ++i) {
    if (header[i + 2] != "z_" + std::to_string(i)) throw std::runtime_error("stream csv: bad column " + header[i + 2]);
  }
  std::vector<LabeledRound> rounds;
  for (auto& [line_no, cells] : rows) {
    if (cells.size() != header.size()) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields");
    }
    LabeledRound r;
    r.y = parse_double(cells[1], line_no);
    r.z.resize(static_cast<long>(d));
    for (std::size_t i = 0; i < d; ++i) r.z[static_cast<long>(i)] = parse_double(cells[i + 2], line_no);
    if (!std::isfinite(r.y) || !r.z.allFinite()) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": non-finite value");
    }
    rounds.push_back(std::move(r));
  }
  return rounds;
}

void write_truth_csv(std::ostream& os, const ComparatorPath& truth, const std::string& comment) {
  write_comment(os, comment);
  const long d = truth.empty() ? 0 : truth.front().size();
  os << 't';
  for (long i = 0; i < d; ++i) os << ",u_" << i;
  os << '\n';
  for (std::size_t t = 0; t < truth.size(); ++t) {
    os << (t + 1);
    for (long i = 0; i < d; ++i) os << ',' << format_double(truth[t][i]);
    os << '\n';
  }
}

ComparatorPath read_truth_csv(std::istream& is) {
  std::vector<std::string> header;
  auto rows = read_rows(is, header);
  if (header.size() < 2 || header[0] != "t") throw std::runtime_error("truth csv: header must be t,u_0,...");
  const std::size_t d = header.size() - 1;
  ComparatorPath path;
  for (auto& [line_no, cells] : rows) {
    if (cells.size() != header.size()) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields");
    }
    Eigen::VectorXd u(static_cast<long>(d));
    for (std::size_t i = 0; i < d; ++i) u[static_cast<long>(i)] = parse_double(cells[i + 1], line_no);
    path.push_back(std::move(u));
  }
  return path;
}

std::string truth_path_for(const std::string& stream_path) {
  const std::string ext = ".csv";
  if (stream_path.size() > ext.size() && stream_path.compare(stream_path.size() - ext.size(), ext.size(), ext) == 0) {
    return stream_path.substr(0, stream_path.size() - ext.size()) + ".truth.csv";
  }
  return stream_path + ".truth.csv";
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header, const std::string& comment)
    : os_(os), width_(header.size()) {
  write_comment(os_, comment);
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::invalid_argument("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_double(values[i]);
  os_ << '\n';
}

}  // namespace d2d
