#include "d2d/adam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace d2d {

std::string to_string(AdamVariant v) { return v == AdamVariant::Clipped ? "clipped" : "clipfree"; }

AdamVariant adam_variant_from_string(const std::string& name) {
  if (name == "clipped") return AdamVariant::Clipped;
  if (name == "clipfree" || name == "clip-free") return AdamVariant::ClipFree;
  throw std::invalid_argument("variant: expected clipped or clipfree, got '" + name + "'");
}

void AdamConfig::validate() const {
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw std::invalid_argument("beta1: must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw std::invalid_argument("beta2: must lie in (0, 1)");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma: must be > 0");
  if (!(nu > 0.0)) throw std::invalid_argument("nu: must be > 0");
  if (variant == AdamVariant::Clipped && !(D > 0.0)) throw std::invalid_argument("D: must be > 0 for clipped Adam");
  if (variant == AdamVariant::ClipFree && !(mu >= 0.0)) throw std::invalid_argument("mu: must be >= 0");
}

AdamState make_adam_state(int d) {
  if (d < 1) throw std::invalid_argument("d: must be >= 1");
  AdamState s;
  s.m = Eigen::VectorXd::Zero(d);
  return s;
}

AdamState adam_accumulate(AdamState s, const AdamConfig& cfg, const Eigen::VectorXd& g) {
  if (g.size() != s.m.size()) throw std::invalid_argument("adam_accumulate: dimension mismatch");
  s.m = cfg.beta1 * s.m + g;
  s.v = cfg.beta2 * s.v + g.squaredNorm();
  s.t += 1;
  s.beta1_t *= cfg.beta1;
  return s;
}

double adam_denominator(const AdamConfig& cfg, const AdamState& s) {
  return cfg.nu + std::sqrt((1.0 - cfg.beta2) * s.v);
}

double eta_t(const AdamConfig& cfg, const AdamState& s) {
  return cfg.gamma * (1.0 - cfg.beta1) * s.beta1_t / adam_denominator(cfg, s);
}

Eigen::VectorXd clip_to_ball(const Eigen::VectorXd& a, double D) {
  const double n = a.norm();
  if (n == 0.0 || n <= D) return a;
  return (D / n) * a;
}

Eigen::VectorXd clipped_delta(const AdamConfig& cfg, const AdamState& s) {
  const Eigen::VectorXd raw = (-cfg.gamma * (1.0 - cfg.beta1) / adam_denominator(cfg, s)) * s.m;
  return clip_to_ball(raw, cfg.D);
}

Eigen::VectorXd clipfree_delta(const AdamConfig& cfg, const AdamState& s) {
  const double den = adam_denominator(cfg, s) + cfg.gamma * cfg.mu * (1.0 - s.beta1_t);
  return (-cfg.gamma * (1.0 - cfg.beta1) / den) * s.m;
}

Eigen::VectorXd adam_delta(const AdamConfig& cfg, const AdamState& s) {
  return cfg.variant == AdamVariant::Clipped ? clipped_delta(cfg, s) : clipfree_delta(cfg, s);
}

Eigen::VectorXd ftrl_argmin(const AdamConfig& cfg, const std::vector<Eigen::VectorXd>& history) {
  cfg.validate();
  if (history.empty()) throw std::invalid_argument("ftrl_argmin: empty history");
  const int t = static_cast<int>(history.size());
  const long d = history.front().size();
  // Objective times beta1^t: Q/2 |x|^2 + <lin, x>.
  Eigen::VectorXd lin = Eigen::VectorXd::Zero(d);
  double V = 0.0;
  double geo = 0.0;
  for (int s = 1; s <= t; ++s) {
    lin += std::pow(cfg.beta1, t - s) * history[s - 1];
    V += std::pow(cfg.beta2, t - s) * history[s - 1].squaredNorm();
    geo += std::pow(cfg.beta1, t - s);
  }
  double Q = (cfg.nu + std::sqrt((1.0 - cfg.beta2) * V)) / (cfg.gamma * (1.0 - cfg.beta1));
  if (cfg.variant == AdamVariant::ClipFree) Q += cfg.mu * geo;

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  auto solve_with = [&](double shift) -> Eigen::VectorXd { return ((Q + shift) * I).ldlt().solve(-lin); };
  Eigen::VectorXd x = solve_with(0.0);
  if (cfg.variant == AdamVariant::ClipFree || x.norm() <= cfg.D) return x;

  // Ball constraint active: find the multiplier with |x(shift)| = D.
  double lo = 0.0;
  double hi = 1.0;
  while (solve_with(hi).norm() > cfg.D) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (solve_with(mid).norm() > cfg.D ? lo : hi) = mid;
  }
  return solve_with(hi);
}

double ftrl_equivalence_residual(const AdamConfig& cfg, const std::vector<Eigen::VectorXd>& history) {
  AdamState s = make_adam_state(static_cast<int>(history.front().size()));
  for (const auto& g : history) s = adam_accumulate(std::move(s), cfg, g);
  return (adam_delta(cfg, s) - ftrl_argmin(cfg, history)).norm();
}

RhoResult rho_of(double beta1, double beta2) {
  RhoResult r;
  const double b1sq = beta1 * beta1;
  r.rho = std::abs(beta2 - 0.5 * (1.0 + b1sq)) / (0.5 * (1.0 - b1sq));
  r.feasible = beta1 > 0.0 && beta1 < 1.0 && beta2 > b1sq && beta2 < 1.0;
  r.factor = r.rho < 1.0 ? 1.0 / std::sqrt(1.0 - r.rho * r.rho) : std::numeric_limits<double>::infinity();
  return r;
}

namespace {

bool check_inputs(const TuningInputs& in, TuningReport& rep) {
  auto fail = [&rep](const std::string& why) {
    rep.feasible = false;
    rep.reason = why;
    return false;
  };
  if (!(in.eps > 0.0)) return fail("eps must be > 0");
  if (!(in.c > 0.0)) return fail("c must be > 0");
  if (!(in.G > 0.0)) return fail("G must be > 0");
  if (!(in.sigma >= 0.0)) return fail("sigma must be >= 0");
  if (!(in.Fstar >= 0.0)) return fail("Fstar must be >= 0");
  if (!(in.nu > 0.0)) return fail("nu must be > 0");
  if (in.nu > in.G + in.sigma) return fail("nu must not exceed G + sigma");
  if (in.rho && !(*in.rho >= 0.0 && *in.rho < 1.0)) return fail("rho must lie in [0, 1)");
  return true;
}

bool set_beta1(double ratio, TuningReport& rep) {
  rep.beta1 = 1.0 - ratio * ratio;
  if (!(rep.beta1 > 0.0 && rep.beta1 < 1.0)) {
    rep.feasible = false;
    rep.reason = "eps too large: beta1 falls outside (0, 1)";
    return false;
  }
  return true;
}

void set_margin_interval(double rho, TuningReport& rep) {
  const double b1sq = rep.beta1 * rep.beta1;
  const double m = 0.5 * (1.0 - rho) * (1.0 - b1sq);
  rep.rho = rho;
  rep.margin = m;
  rep.beta2_lo = b1sq + m;
  rep.beta2_hi = 1.0 - m;
  rep.beta2_hi_inclusive = true;
  rep.beta2 = rep.beta2_lo;
}

TuningReport tune_margin(const TuningInputs& in, bool clipfree) {
  TuningReport rep;
  rep.rule = clipfree ? "clipfree-margin" : "clipped-margin";
  if (!check_inputs(in, rep)) return rep;
  if (!in.rho) {
    rep.reason = "rho required";
    return rep;
  }
  const double rho = *in.rho;
  const double Gs = in.G + in.sigma;
  const double root = std::sqrt(1.0 - rho * rho);
  if (!set_beta1(in.eps * root / (64.0 * Gs), rep)) return rep;
  set_margin_interval(rho, rep);
  const double one_m = 1.0 - rep.beta1;
  const double cc = clipfree ? 96.0 * in.c : 48.0 * in.c;
  rep.D = one_m * std::sqrt(in.eps) / std::sqrt(cc);
  rep.gamma = rep.beta1 * rep.D / std::sqrt(one_m);
  const double e15 = std::pow(in.eps, 1.5);
  double lead;
  double log_arg;
  if (clipfree) {
    rep.mu = 24.0 * in.c * rep.D / (one_m * one_m);
    lead = std::max(32.0 * in.Fstar * std::sqrt(96.0 * in.c) / e15, 48.0 * Gs / in.eps) / one_m;
    log_arg = (rep.gamma * rep.mu + in.G) / in.nu;
  } else {
    lead = std::max(32.0 * in.Fstar * std::sqrt(in.c) / e15, 16.0 * Gs / in.eps) / one_m;
    log_arg = in.G / in.nu;
  }
  const double scale_free = 32.0 * in.G / (in.eps * std::sqrt(one_m) * root) * std::log1p(log_arg);
  rep.T_min = std::max({lead, scale_free, std::numbers::ln2 / (1.0 - rep.beta2)});
  rep.feasible = rep.beta2_lo <= rep.beta2_hi;
  if (!rep.feasible) rep.reason = "empty beta2 interval";
  return rep;
}

}  // namespace

TuningReport tune_clipped(const TuningInputs& in) {
  TuningReport rep;
  rep.rule = "clipped";
  if (!check_inputs(in, rep)) return rep;
  const double Gs = in.G + in.sigma;
  if (!set_beta1(in.eps / (16.0 * Gs), rep)) return rep;
  const double one_m = 1.0 - rep.beta1;
  rep.D = one_m * std::sqrt(in.eps) / std::sqrt(48.0 * in.c);
  rep.gamma = rep.beta1 * rep.D / std::sqrt(one_m);
  rep.beta2_lo = std::max(1.0 - in.nu / Gs, std::pow(rep.beta1, 4));
  rep.beta2_hi = 1.0;
  rep.beta2 = rep.beta2_lo;
  const double lead = std::max(16.0 * in.Fstar * std::sqrt(48.0 * in.c) / std::pow(in.eps, 1.5), 16.0 * Gs / in.eps) / one_m;
  rep.T_min = std::max(lead, std::numbers::ln2 / (1.0 - rep.beta2));
  rep.feasible = rep.beta2_lo < 1.0;
  if (!rep.feasible) rep.reason = "empty beta2 range";
  return rep;
}

TuningReport tune_clipped_margin(const TuningInputs& in) { return tune_margin(in, false); }

TuningReport tune_clipfree(const TuningInputs& in) {
  if (in.rho) return tune_margin(in, true);
  TuningReport rep;
  rep.rule = "clipfree";
  if (!check_inputs(in, rep)) return rep;
  const double Gs = in.G + in.sigma;
  if (!set_beta1(in.eps / (16.0 * Gs), rep)) return rep;
  const double one_m = 1.0 - rep.beta1;
  rep.D = one_m * std::sqrt(in.eps) / std::sqrt(96.0 * in.c);
  rep.gamma = rep.beta1 * rep.D / std::sqrt(one_m);
  rep.mu = 24.0 * in.c * rep.D / (one_m * one_m);
  rep.beta2_lo = std::max(1.0 - in.nu / Gs, rep.beta1 * rep.beta1);
  rep.beta2_hi = 1.0;
  rep.beta2 = rep.beta2_lo;
  const double lead = std::max(16.0 * in.Fstar * std::sqrt(96.0 * in.c) / std::pow(in.eps, 1.5), 48.0 * Gs / in.eps) / one_m;
  rep.T_min = std::max(lead, std::numbers::ln2 / (1.0 - rep.beta2));
  rep.feasible = rep.beta2_lo < 1.0;
  if (!rep.feasible) rep.reason = "empty beta2 range";
  return rep;
}

AdamConfig config_from_report(const TuningReport& report, double nu) {
  if (!report.feasible) throw std::invalid_argument("config_from_report: infeasible tuning (" + report.reason + ")");
  AdamConfig cfg;
  cfg.beta1 = report.beta1;
  cfg.beta2 = report.beta2;
  cfg.gamma = report.gamma;
  cfg.nu = nu;
  cfg.D = report.D;
  cfg.mu = report.mu;
  cfg.variant = report.rule.rfind("clipfree", 0) == 0 ? AdamVariant::ClipFree : AdamVariant::Clipped;
  return cfg;
}

}  // namespace d2d
