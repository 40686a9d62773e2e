#include "d2d/streams.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "d2d/rng.hpp"

namespace d2d {

namespace {

constexpr std::uint64_t kTargetStream = 1;
constexpr std::uint64_t kFeatureStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

}  // namespace

std::string to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::PiecewiseConstantTarget:
      return "piecewise-constant-target";
    case StreamKind::RotatingTarget:
      return "rotating-target";
    case StreamKind::LogisticDrift:
      return "logistic-drift";
  }
  throw std::invalid_argument("unknown stream kind");
}

StreamKind stream_kind_from_string(const std::string& name) {
  if (name == "piecewise-constant-target") return StreamKind::PiecewiseConstantTarget;
  if (name == "rotating-target") return StreamKind::RotatingTarget;
  if (name == "logistic-drift") return StreamKind::LogisticDrift;
  throw std::invalid_argument("kind: unknown stream kind '" + name + "'");
}

void StreamSpec::validate() const {
  if (d < 1) throw std::invalid_argument("d: dimension must be >= 1");
  if (T < 1) throw std::invalid_argument("T: horizon must be >= 1");
  if (segments < 1) throw std::invalid_argument("segments: must be >= 1");
  if (segments > T) throw std::invalid_argument("segments: must not exceed T");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw std::invalid_argument("noise: must be finite and >= 0");
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R: must be finite and > 0");
  if (!(B >= 0.0) || !std::isfinite(B)) throw std::invalid_argument("B: must be finite and >= 0");
}

int segment_start(int T, int segments, int k) {
  const long long num = static_cast<long long>(T) * k;
  return static_cast<int>((num + segments - 1) / segments) + 1;
}

int segment_of(int T, int segments, int t) {
  int k = 0;
  while (k + 1 < segments && t >= segment_start(T, segments, k + 1)) ++k;
  return k;
}

std::vector<LabeledRound> label_rounds(const std::vector<Eigen::VectorXd>& features,
                                       const ComparatorPath& truth, StreamKind kind,
                                       double noise, std::uint64_t seed) {
  if (features.size() != truth.size()) {
    throw std::invalid_argument("label_rounds: features and truth differ in length");
  }
  CounterRng rng(seed, kNoiseStream);
  std::vector<LabeledRound> rounds;
  rounds.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != truth[i].size()) {
      throw std::invalid_argument("label_rounds: dimension mismatch at round " + std::to_string(i + 1));
    }
    double y = truth[i].dot(features[i]);
    if (noise > 0.0) y += noise * rng.normal();
    if (kind == StreamKind::LogisticDrift) y = y >= 0.0 ? 1.0 : -1.0;
    rounds.push_back({features[i], y});
  }
  return rounds;
}

Stream gen_stream(const StreamSpec& spec) {
  spec.validate();
  const int d = spec.d;
  CounterRng target_rng(spec.seed, kTargetStream);
  CounterRng feature_rng(spec.seed, kFeatureStream);

  Stream out;
  out.truth.reserve(spec.T);

  if (spec.kind == StreamKind::RotatingTarget) {
    // Target turns `segments` full circles in the plane of two random
    // orthonormal directions (d = 1 reduces to B*cos).
    Eigen::VectorXd e1 = target_rng.unit_sphere(d);
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(d);
    if (d > 1) {
      do {
        e2 = target_rng.unit_sphere(d);
        e2 -= e2.dot(e1) * e1;
      } while (e2.norm() < 1e-8);
      e2.normalize();
    }
    for (int t = 1; t <= spec.T; ++t) {
      const double theta = 2.0 * std::numbers::pi * spec.segments * (t - 1) / spec.T;
      out.truth.push_back(spec.B * (std::cos(theta) * e1 + std::sin(theta) * e2));
    }
  } else {
    std::vector<Eigen::VectorXd> targets;
    for (int k = 0; k < spec.segments; ++k) targets.push_back(spec.B * target_rng.unit_sphere(d));
    for (int t = 1; t <= spec.T; ++t) out.truth.push_back(targets[segment_of(spec.T, spec.segments, t)]);
  }

  std::vector<Eigen::VectorXd> features;
  features.reserve(spec.T);
  for (int t = 1; t <= spec.T; ++t) features.push_back(spec.R * feature_rng.unit_sphere(d));

  out.rounds = label_rounds(features, out.truth, spec.kind, spec.noise, spec.seed);
  return out;
}

std::vector<double> geometric_weights(double beta, int t) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta: must lie in (0, 1]");
  if (t < 0) throw std::invalid_argument("t: must be >= 0");
  std::vector<double> w(t + 1);
  double p = 1.0;
  double total = 0.0;
  for (int s = t; s >= 0; --s) {
    w[s] = p;
    total += p;
    p *= beta;
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace d2d
