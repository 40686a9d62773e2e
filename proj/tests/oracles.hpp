#pragma once

// Slow reference computations used by the unit tests and the acceptance
// binary. They evaluate the defining formulas directly (explicit powers,
// rebuilt matrices) and never call the library routine they check.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "d2d/adam.hpp"
#include "d2d/regret.hpp"
#include "d2d/streams.hpp"

namespace oracle {

using Vec = Eigen::VectorXd;
using Loss = std::function<double(int, const Vec&)>;  // (t, u) -> f_t(u), t is 1-based

/// Random quadratic-loss instance: f_t(u) = 1/2 (u.z_t - y_t)^2 with plays x_t and a jumping path.
struct QuadInstance {
  int T = 0;
  int d = 0;
  std::vector<Vec> z;
  std::vector<double> y;
  std::vector<Vec> x;
  d2d::ComparatorPath path;

  double f(int t, const Vec& u) const;
  std::vector<double> play_losses() const;
};

QuadInstance random_quad_instance(int T, int d, std::uint64_t seed, std::uint64_t stream = 0);

/// Ledger over a QuadInstance with phi = lambda/2 |u|^2 and zero stability terms.
d2d::RegretLedger quad_ledger(const QuadInstance& inst, double beta, double lambda = 1.0);

double dynamic_regret(const std::vector<double>& play, const Loss& f, const d2d::ComparatorPath& path);

/// sum_{s<=t} beta^{t-s} (play_s - f_s(u)) with explicit powers.
double discounted_regret(const std::vector<double>& play, const Loss& f, double beta, int t, const Vec& u);

/// Right-hand side of the discounted-to-dynamic identity, explicit powers.
double d2d_rhs(const std::vector<double>& play, const Loss& f, double beta, const d2d::ComparatorPath& path);

/// Modular bound with raw stability Lambda_t (not pre-discounted):
/// beta phi_1(u_1) + sum beta^t Lambda_t + beta sum_{t<T} (F_t(u_{t+1}) - F_t(u_t))
/// + beta sum_{t<T} beta^t (phi_{t+1}(u_{t+1}) - phi_t(u_{t+1})).
double modular_rhs(const Loss& f, const Loss& phi, const std::vector<double>& raw_stability, double beta,
                   const d2d::ComparatorPath& path);

/// Path variation with explicit normalized weights p_{t,s} = gamma^{t-s} / sum_tau gamma^{t-tau}; f0 may be empty.
double path_variation(const Loss& f, const std::function<double(const Vec&)>& f0, double gamma,
                      const d2d::ComparatorPath& path);

/// Discounted VAW prediction rebuilt from scratch: minimizer of
/// lambda beta^t/2 |x|^2 + 1/2 (x.z_t)^2 + 1/2 sum_{s<t} beta^{t-s} (x.z_s - y_s)^2.
std::vector<Vec> vaw_plays(const std::vector<d2d::LabeledRound>& rounds, double beta, double lambda);

/// Minimizer of the discounted FTRL objective for Adam by projected gradient descent, coefficients
/// summed from the raw history with explicit powers.
Vec adam_ftrl_argmin(const d2d::AdamConfig& cfg, const std::vector<Vec>& history);

/// Violated tuning conditions (empty when the report satisfies its theorem).
std::vector<std::string> tuning_violations(const d2d::TuningInputs& in, const d2d::TuningReport& r);

/// Exact rho of the margin geometry, evaluated independently.
double rho_value(double beta1, double beta2);

/// Decimal truncation of x to `digits` places.
double truncate_to(double x, int digits);

}  // namespace oracle
