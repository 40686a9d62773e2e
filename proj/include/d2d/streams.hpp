#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace d2d {

struct LabeledRound {
  Eigen::VectorXd z;
  double y = 0.0;
};

enum class StreamKind { PiecewiseConstantTarget, RotatingTarget, LogisticDrift };

std::string to_string(StreamKind kind);
StreamKind stream_kind_from_string(const std::string& name);

struct StreamSpec {
  int d = 1;
  int T = 1;
  StreamKind kind = StreamKind::PiecewiseConstantTarget;
  int segments = 1;
  double noise = 0.0;
  std::uint64_t seed = 0;
  double R = 1.0;  // features lie on the sphere of this radius
  double B = 1.0;  // targets lie on the sphere of this radius

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

using ComparatorPath = std::vector<Eigen::VectorXd>;

struct Stream {
  std::vector<LabeledRound> rounds;
  ComparatorPath truth;
};

/// First round (1-based) of segment k, k = 0..segments-1: ceil(T*k/segments) + 1.
int segment_start(int T, int segments, int k);

/// Index of the segment (0-based) containing round t (1-based).
int segment_of(int T, int segments, int t);

/// Draws a stream. Targets, features and noise use separate counter streams of
/// the same seed, so changing `noise` does not move the features.
Stream gen_stream(const StreamSpec& spec);

/// Labels fixed features against a fixed target path. Linear kinds give
/// y = u.z + noise*N(0,1); the logistic kind keeps the sign (+1 on ties).
std::vector<LabeledRound> label_rounds(const std::vector<Eigen::VectorXd>& features,
                                       const ComparatorPath& truth, StreamKind kind,
                                       double noise, std::uint64_t seed);

/// p_{t,s} = beta^{t-s} / sum_{tau=0..t} beta^{t-tau} for s = 0..t.
std::vector<double> geometric_weights(double beta, int t);

}  // namespace d2d
