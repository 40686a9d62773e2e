#include "d2d/regret.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2d {

namespace {

void require_path(const RegretLedger& ledger, const ComparatorPath& path) {
  ledger.validate();
  if (static_cast<int>(path.size()) != ledger.T()) {
    throw std::invalid_argument("comparator path length " + std::to_string(path.size()) +
                                " does not match T = " + std::to_string(ledger.T()));
  }
}

bool same_point(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

double f0(const RegretLedger& ledger, const Eigen::VectorXd& u) {
  return ledger.phi_eval ? ledger.phi_eval(0, u) : 0.0;
}

}  // namespace

void RegretLedger::validate() const {
  if (!loss_eval) throw std::invalid_argument("ledger: loss_eval missing");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta: must lie in (0, 1]");
  if (!stability.empty() && static_cast<int>(stability.size()) != T()) {
    throw std::invalid_argument("ledger: stability length does not match T");
  }
  for (double v : stability) {
    if (!(v >= 0.0)) throw std::invalid_argument("ledger: stability terms must be >= 0");
  }
}

double dynamic_regret(const RegretLedger& ledger, const ComparatorPath& path) {
  require_path(ledger, path);
  double total = 0.0;
  for (int t = 1; t <= ledger.T(); ++t) total += ledger.losses_at_play[t - 1] - ledger.loss_eval(t, path[t - 1]);
  return total;
}

double discounted_regret(const RegretLedger& ledger, int t, const Eigen::VectorXd& u) {
  ledger.validate();
  if (t < 1 || t > ledger.T()) throw std::invalid_argument("t: out of range [1, T]");
  double acc = 0.0;
  for (int s = 1; s <= t; ++s) acc = ledger.beta * acc + (ledger.losses_at_play[s - 1] - ledger.loss_eval(s, u));
  return acc;
}

double d2d_identity_gap(const RegretLedger& ledger, const ComparatorPath& path) {
  require_path(ledger, path);
  const int T = ledger.T();
  const double beta = ledger.beta;
  const double lhs = dynamic_regret(ledger, path);

  double jumps = 0.0;
  double own = 0.0;
  for (int t = 1; t <= T; ++t) {
    const double reg_own = discounted_regret(ledger, t, path[t - 1]);
    own += reg_own;
    if (t < T) jumps += reg_own - discounted_regret(ledger, t, path[t]);
  }
  const double rhs = beta * jumps + (1.0 - beta) * own + beta * discounted_regret(ledger, T, path[T - 1]);
  return std::abs(lhs - rhs);
}

PathVariation path_variation(const RegretLedger& ledger, const ComparatorPath& path, double gamma,
                             bool include_f0) {
  require_path(ledger, path);
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma: must lie in (0, 1)");
  const int T = ledger.T();
  PathVariation out{0.0, gamma, include_f0};
  // Normalizer sum_{tau=0..t} gamma^{t-tau}, carried forward.
  double norm = 1.0;
  for (int t = 1; t < T; ++t) {
    norm = gamma * norm + 1.0;
    const Eigen::VectorXd& a = path[t - 1];
    const Eigen::VectorXd& b = path[t];
    if (same_point(a, b)) continue;
    // Horner over s = 0..t with weights gamma^{t-s}.
    double acc = include_f0 ? std::max(f0(ledger, b) - f0(ledger, a), 0.0) : 0.0;
    for (int s = 1; s <= t; ++s) acc = gamma * acc + std::max(ledger.loss_eval(s, b) - ledger.loss_eval(s, a), 0.0);
    out.value += acc / norm;
  }
  return out;
}

double discounted_path_term(const RegretLedger& ledger, const ComparatorPath& path) {
  require_path(ledger, path);
  const int T = ledger.T();
  const double beta = ledger.beta;
  double total = 0.0;
  double beta_t = 1.0;
  for (int t = 1; t < T; ++t) {
    beta_t *= beta;
    const Eigen::VectorXd& a = path[t - 1];
    const Eigen::VectorXd& b = path[t];
    if (same_point(a, b)) continue;
    double acc = 0.0;
    for (int s = 1; s <= t; ++s) acc = beta * acc + (ledger.loss_eval(s, b) - ledger.loss_eval(s, a));
    if (ledger.phi_eval) acc += beta_t * (ledger.phi_eval(t, b) - ledger.phi_eval(t, a));
    total += acc;
  }
  return beta * total;
}

double modular_bound_rhs(const RegretLedger& ledger, const ComparatorPath& path) {
  require_path(ledger, path);
  if (!ledger.phi_eval) throw std::invalid_argument("modular_bound_rhs: phi_eval missing");
  if (static_cast<int>(ledger.stability.size()) != ledger.T()) {
    throw std::invalid_argument("modular_bound_rhs: stability terms missing");
  }
  const int T = ledger.T();
  const double beta = ledger.beta;
  double rhs = beta * ledger.phi_eval(1, path[0]);
  for (double v : ledger.stability) rhs += v;
  rhs += discounted_path_term(ledger, path);
  double drift = 0.0;
  double beta_t = 1.0;
  for (int t = 1; t < T; ++t) {
    beta_t *= beta;
    drift += beta_t * (ledger.phi_eval(t + 1, path[t]) - ledger.phi_eval(t, path[t]));
  }
  return rhs + beta * drift;
}

PathLengthCheck check_path_length_lemma(const RegretLedger& ledger, const ComparatorPath& path, double beta,
                                        double gamma) {
  if (!(beta > 0.0 && beta <= gamma && gamma < 1.0)) {
    throw std::invalid_argument("check_path_length_lemma: need 0 < beta <= gamma < 1");
  }
  RegretLedger at_beta = ledger;
  at_beta.beta = beta;
  // F_t here uses f_0 = phi(0, .) with weight beta^t, so phi_t is frozen at t = 0.
  RoundEval frozen;
  if (ledger.phi_eval) {
    frozen = [phi = ledger.phi_eval](int, const Eigen::VectorXd& u) { return phi(0, u); };
  }
  at_beta.phi_eval = frozen;
  PathLengthCheck out;
  out.lhs = discounted_path_term(at_beta, path);
  out.rhs = gamma / (1.0 - gamma) * path_variation(ledger, path, gamma, true).value;
  out.holds = out.lhs - out.rhs <= 1e-9 * (1.0 + std::abs(out.rhs));
  return out;
}

std::vector<TraceRow> regret_trace(const RegretLedger& ledger, const ComparatorPath& path) {
  require_path(ledger, path);
  std::vector<TraceRow> rows;
  rows.reserve(path.size());
  double cum = 0.0;
  for (int t = 1; t <= ledger.T(); ++t) {
    const double play = ledger.losses_at_play[t - 1];
    const double comp = ledger.loss_eval(t, path[t - 1]);
    cum += play - comp;
    rows.push_back({play, comp, cum});
  }
  return rows;
}

}  // namespace d2d
