#include "d2d/o2nc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace d2d {

namespace {

constexpr std::uint64_t kScaleStream = 11;
constexpr std::uint64_t kNoiseStream = 12;
constexpr std::uint64_t kReturnStream = 13;

}  // namespace

Objective clamped_quadratic(int d, double G) {
  Objective o;
  o.name = "clamped-quadratic";
  o.dim = d;
  o.G = G;
  o.smooth = true;
  o.value = [G](const Eigen::VectorXd& x) {
    const double n = x.norm();
    return n <= G ? 0.5 * n * n : G * n - 0.5 * G * G;
  };
  o.grad = [G](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double n = x.norm();
    return n <= G ? Eigen::VectorXd(x) : Eigen::VectorXd((G / n) * x);
  };
  return o;
}

Objective scaled_norm(int d, double G) {
  Objective o;
  o.name = "norm";
  o.dim = d;
  o.G = G;
  o.value = [G](const Eigen::VectorXd& x) { return G * x.norm(); };
  o.grad = [G](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double n = x.norm();
    if (n == 0.0) return Eigen::VectorXd::Zero(x.size());
    return (G / n) * x;
  };
  return o;
}

Objective max_of_affines(int d, double G) {
  Objective o;
  o.name = "max-affine";
  o.dim = d;
  o.G = G;
  o.value = [G](const Eigen::VectorXd& x) { return G * x.cwiseAbs().maxCoeff(); };
  o.grad = [G](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::Index j = 0;
    x.cwiseAbs().maxCoeff(&j);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    g[j] = x[j] >= 0.0 ? G : -G;
    return g;
  };
  return o;
}

Objective make_objective(const std::string& name, int d, double G) {
  if (d < 1) throw std::invalid_argument("dim: must be >= 1");
  if (!(G > 0.0)) throw std::invalid_argument("G: must be > 0");
  if (name == "clamped-quadratic") return clamped_quadratic(d, G);
  if (name == "norm") return scaled_norm(d, G);
  if (name == "max-affine") return max_of_affines(d, G);
  throw std::invalid_argument("objective: unknown objective '" + name + "'");
}

StochasticOracle::StochasticOracle(const Objective& objective, double sigma, std::uint64_t seed)
    : objective_(objective), sigma_(sigma), rng_(seed, kNoiseStream) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma: must be >= 0");
}

Eigen::VectorXd StochasticOracle::sample(const Eigen::VectorXd& x, Eigen::VectorXd* true_grad) {
  Eigen::VectorXd g = objective_.grad(x);
  if (true_grad) *true_grad = g;
  if (sigma_ > 0.0) {
    const Eigen::VectorXd dir = rng_.unit_sphere(static_cast<int>(x.size()));
    const double cap = std::max(objective_.G - g.norm(), 0.0);
    g += std::min(sigma_ * std::abs(rng_.normal()), cap) * dir;
  }
  return g;
}

double exp_from_uniform(double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("exp_from_uniform: u must lie in (0, 1]");
  return -std::log(u);
}

double exp_sample(CounterRng& rng) { return exp_from_uniform(rng.uniform_open_closed()); }

Eigen::VectorXd ema_update(const Eigen::VectorXd& xbar_prev, const Eigen::VectorXd& x, double beta, int t) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta: must lie in (0, 1)");
  if (t < 1) throw std::invalid_argument("t: must be >= 1");
  const double bt = std::pow(beta, t);
  const double denom = 1.0 - bt;
  return ((beta - bt) / denom) * xbar_prev + ((1.0 - beta) / denom) * x;
}

ComparatorPath comparator_path(const std::vector<Eigen::VectorXd>& grads, double beta, double D, int* zero_count) {
  ComparatorPath path;
  if (zero_count) *zero_count = 0;
  if (grads.empty()) return path;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(grads.front().size());
  for (const auto& g : grads) {
    a = beta * a + g;
    const double n = a.norm();
    if (n == 0.0) {
      path.push_back(Eigen::VectorXd::Zero(a.size()));
      if (zero_count) ++*zero_count;
    } else {
      path.push_back((-D / n) * a);
    }
  }
  return path;
}

double O2ncTrace::tail_mean_grad(double fraction) const {
  if (grad_norm_xbar.empty()) return 0.0;
  const std::size_t n = grad_norm_xbar.size();
  const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * n)));
  double total = 0.0;
  for (std::size_t i = n - k; i < n; ++i) total += grad_norm_xbar[i];
  return total / static_cast<double>(k);
}

O2ncTrace run_o2nc(const AdamConfig& cfg, const Objective& objective, double sigma, const Eigen::VectorXd& x0, int T,
                   std::uint64_t seed) {
  cfg.validate();
  if (T < 1) throw std::invalid_argument("T: must be >= 1");
  if (x0.size() != objective.dim) throw std::invalid_argument("x0: dimension does not match objective");
  const double beta = cfg.beta1;
  const double D = cfg.D;
  const bool composite = cfg.variant == AdamVariant::ClipFree;
  // Clip-free runs still use D as the comparator radius.

  CounterRng scale_rng(seed, kScaleStream);
  StochasticOracle oracle(objective, sigma, seed);
  AdamState state = make_adam_state(objective.dim);

  O2ncTrace trace;
  trace.initial_grad_norm = objective.grad(x0).norm();
  Eigen::VectorXd x = x0;
  Eigen::VectorXd xbar = x0;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(objective.dim);
  double beta_t = 1.0;
  for (int t = 1; t <= T; ++t) {
    const Eigen::VectorXd delta = adam_delta(cfg, state);
    const double s = exp_sample(scale_rng);
    x += s * delta;
    Eigen::VectorXd true_grad;
    const Eigen::VectorXd g = oracle.sample(x, &true_grad);
    if (g.norm() > objective.G * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "run_o2nc: gradient bound violated at t=" << t << " (|g|=" << g.norm() << " > G=" << objective.G << ")";
      throw std::runtime_error(msg.str());
    }
    state = adam_accumulate(std::move(state), cfg, g);

    beta_t *= beta;
    const double denom = 1.0 - beta_t;
    xbar = ((beta - beta_t) / denom) * xbar + ((1.0 - beta) / denom) * x;

    acc = beta * acc + true_grad;
    const double an = acc.norm();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(objective.dim);
    if (an > 0.0) {
      u = (-D / an) * acc;
    } else {
      ++trace.zero_comparators;
    }
    double term = g.dot(delta - u);
    if (composite) term += 0.5 * cfg.mu * (delta.squaredNorm() - u.squaredNorm());

    trace.x.push_back(x);
    trace.xbar.push_back(xbar);
    trace.s.push_back(s);
    trace.delta_norm.push_back(delta.norm());
    trace.grad_norm_xbar.push_back(objective.grad(xbar).norm());
    trace.regret_terms.push_back(term);
    trace.comparator_norm.push_back(u.norm());
  }
  CounterRng pick(seed, kReturnStream);
  trace.sampled_index = 1 + static_cast<int>(pick.uniform() * T);
  return trace;
}

double stationarity_surrogate(const Objective& objective, const Eigen::VectorXd& xbar, double radius, double c,
                              int samples, std::uint64_t seed) {
  if (!(radius >= 0.0)) throw std::invalid_argument("radius: must be >= 0");
  if (samples < 1) throw std::invalid_argument("samples: must be >= 1");
  if (radius == 0.0) return objective.grad(xbar).norm();
  CounterRng rng(seed, 0);
  const int d = static_cast<int>(xbar.size());
  Eigen::VectorXd mean_grad = Eigen::VectorXd::Zero(d);
  double mean_sq = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double r = radius * std::pow(rng.uniform(), 1.0 / d);
    const Eigen::VectorXd delta = r * rng.unit_sphere(d);
    mean_grad += objective.grad(xbar + delta);
    mean_sq += delta.squaredNorm();
  }
  mean_grad /= samples;
  mean_sq /= samples;
  return mean_grad.norm() + c * mean_sq;
}

}  // namespace d2d
