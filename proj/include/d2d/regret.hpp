#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "d2d/streams.hpp"

namespace d2d {

/// Round-indexed evaluator (t, u) -> value, t is 1-based.
using RoundEval = std::function<double(int, const Eigen::VectorXd&)>;

/// Bookkeeping for one learner run. `phi_eval(0, u)` doubles as f_0(u) in the
/// path variation. `stability[t-1]` holds the already discounted stability
/// term beta^t * Lambda_t.
struct RegretLedger {
  std::vector<double> losses_at_play;
  RoundEval loss_eval;
  double beta = 1.0;
  RoundEval phi_eval;
  std::vector<double> stability;

  int T() const { return static_cast<int>(losses_at_play.size()); }
  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

struct PathVariation {
  double value = 0.0;
  double beta = 1.0;
  bool includes_f0 = true;
};

double dynamic_regret(const RegretLedger& ledger, const ComparatorPath& path);

/// sum_{s<=t} beta^{t-s} (f_s(x_s) - f_s(u)).
double discounted_regret(const RegretLedger& ledger, int t, const Eigen::VectorXd& u);

/// |dynamic regret - discounted decomposition| for the ledger's beta.
double d2d_identity_gap(const RegretLedger& ledger, const ComparatorPath& path);

/// Loss-based path variation with normalized geometric weights over s = 0..t.
/// Without f_0 (or without phi_eval) the s = 0 term is zero.
PathVariation path_variation(const RegretLedger& ledger, const ComparatorPath& path, double gamma,
                             bool include_f0 = true);

/// beta * sum_{t<T} (F_t(u_{t+1}) - F_t(u_t)) with F_t(u) = beta^t phi_t(u) + sum_{s<=t} beta^{t-s} f_s(u).
double discounted_path_term(const RegretLedger& ledger, const ComparatorPath& path);

/// Modular reduction right-hand side: beta phi_1(u_1) + sum_t beta^t Lambda_t
/// + discounted_path_term + beta sum_{t<T} beta^t (phi_{t+1}(u_{t+1}) - phi_t(u_{t+1})).
double modular_bound_rhs(const RegretLedger& ledger, const ComparatorPath& path);

struct PathLengthCheck {
  double lhs = 0.0;  // discounted_path_term with discount beta, phi as f_0
  double rhs = 0.0;  // gamma / (1 - gamma) * P^gamma
  bool holds = true;
};

/// Compares the discounted path term at `beta` with the path variation at `gamma`.
PathLengthCheck check_path_length_lemma(const RegretLedger& ledger, const ComparatorPath& path, double beta,
                                        double gamma);

struct TraceRow {
  double loss_play;
  double loss_comp;
  double cum_dynreg;
};
std::vector<TraceRow> regret_trace(const RegretLedger& ledger, const ComparatorPath& path);

}  // namespace d2d
