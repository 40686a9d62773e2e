#include "d2d/linreg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2d {

namespace {

void check_params(double beta, double lambda) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta: must lie in (0, 1]");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda: must be finite and > 0");
}

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs, const char* who) {
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(std::string(who) +
                             ": system is singular (lambda*beta^t underflowed); use a larger lambda or a shorter horizon");
  }
  return llt.solve(rhs);
}

}  // namespace

VawState make_vaw(int d, double beta, double lambda) {
  check_params(beta, lambda);
  if (d < 1) throw std::invalid_argument("d: must be >= 1");
  VawState s;
  s.beta = beta;
  s.lambda = lambda;
  s.M = Eigen::MatrixXd::Zero(d, d);
  s.b = Eigen::VectorXd::Zero(d);
  s.reg = lambda;
  return s;
}

Prediction dvaw_predict(const VawState& state, const Eigen::VectorXd& z) {
  if (z.size() != state.b.size()) throw std::invalid_argument("dvaw_predict: dimension mismatch");
  if (!z.allFinite()) throw std::invalid_argument("dvaw_predict: non-finite feature");
  Eigen::MatrixXd A = state.beta * state.M + z * z.transpose();
  A.diagonal().array() += state.reg * state.beta;
  Prediction p;
  p.x = spd_solve(A, state.beta * state.b, "dvaw_predict");
  p.yhat = p.x.dot(z);
  return p;
}

VawState dvaw_update(VawState s, const LabeledRound& round) {
  if (round.z.size() != s.b.size()) throw std::invalid_argument("dvaw_update: dimension mismatch");
  s.M = s.beta * s.M + round.z * round.z.transpose();
  s.b = s.beta * s.b + round.y * round.z;
  s.t += 1;
  s.reg *= s.beta;
  if (s.reg == 0.0) s.reg_underflow = true;
  s.maxy2 = std::max(s.maxy2, round.y * round.y);
  Eigen::MatrixXd A = s.M;
  A.diagonal().array() += s.reg;
  const double y2 = round.y * round.y;
  s.last_potential = y2 == 0.0 ? 0.0 : y2 * round.z.dot(spd_solve(A, round.z, "dvaw_update"));
  s.potential += s.last_potential;
  return s;
}

double square_loss(const Eigen::VectorXd& u, const LabeledRound& round) {
  const double r = u.dot(round.z) - round.y;
  return 0.5 * r * r;
}

VawRun run_vaw(const std::vector<LabeledRound>& rounds, double beta, double lambda) {
  if (rounds.empty()) throw std::invalid_argument("run_vaw: empty stream");
  VawRun run;
  run.final_state = make_vaw(static_cast<int>(rounds.front().z.size()), beta, lambda);
  for (const auto& r : rounds) {
    Prediction p = dvaw_predict(run.final_state, r.z);
    run.losses.push_back(0.5 * (p.yhat - r.y) * (p.yhat - r.y));
    run.predictions.push_back(std::move(p));
    run.final_state = dvaw_update(std::move(run.final_state), r);
    run.potentials.push_back(run.final_state.last_potential);
  }
  return run;
}

RegretLedger vaw_ledger(const std::vector<LabeledRound>& rounds, const VawRun& run) {
  RegretLedger ledger;
  ledger.losses_at_play = run.losses;
  ledger.beta = run.final_state.beta;
  ledger.loss_eval = [&rounds](int t, const Eigen::VectorXd& u) { return square_loss(u, rounds[t - 1]); };
  const double lambda = run.final_state.lambda;
  ledger.phi_eval = [lambda](int, const Eigen::VectorXd& u) { return 0.5 * lambda * u.squaredNorm(); };
  ledger.stability.reserve(run.potentials.size());
  for (double p : run.potentials) ledger.stability.push_back(0.5 * p);
  return ledger;
}

std::vector<double> vaw_static_potentials(const std::vector<LabeledRound>& rounds, double lambda) {
  check_params(1.0, lambda);
  std::vector<double> sums{0.0};
  if (rounds.empty()) return sums;
  const long d = rounds.front().z.size();
  Eigen::MatrixXd A = lambda * Eigen::MatrixXd::Identity(d, d);
  for (const auto& r : rounds) {
    A += r.z * r.z.transpose();
    const double term = 0.5 * r.y * r.y * r.z.dot(spd_solve(A, r.z, "vaw_static_potentials"));
    sums.push_back(sums.back() + term);
  }
  return sums;
}

double vaw_static_bound(const std::vector<LabeledRound>& rounds, double lambda, int t, const Eigen::VectorXd& u) {
  if (t < 0 || t > static_cast<int>(rounds.size())) throw std::invalid_argument("t: out of range [0, T]");
  std::vector<LabeledRound> prefix(rounds.begin(), rounds.begin() + t);
  return 0.5 * lambda * u.squaredNorm() + vaw_static_potentials(prefix, lambda).back();
}

VawDynamicBound dvaw_dynamic_bound(const std::vector<LabeledRound>& rounds, const ComparatorPath& path,
                                   double beta, double lambda, double gamma) {
  check_params(beta, lambda);
  if (!(beta <= gamma && gamma < 1.0)) throw std::invalid_argument("gamma: need beta <= gamma < 1");
  if (rounds.empty() || path.size() != rounds.size()) throw std::invalid_argument("dvaw_dynamic_bound: length mismatch");
  const double d = static_cast<double>(rounds.front().z.size());

  double maxy2 = 0.0;
  double sumy2 = 0.0;
  double weighted_z2 = 0.0;
  for (const auto& r : rounds) {
    maxy2 = std::max(maxy2, r.y * r.y);
    sumy2 += r.y * r.y;
    weighted_z2 = beta * weighted_z2 + r.z.squaredNorm();
  }

  RegretLedger ledger;
  ledger.losses_at_play.assign(rounds.size(), 0.0);
  ledger.beta = beta;
  ledger.loss_eval = [&rounds](int t, const Eigen::VectorXd& u) { return square_loss(u, rounds[t - 1]); };
  ledger.phi_eval = [lambda](int, const Eigen::VectorXd& u) { return 0.5 * lambda * u.squaredNorm(); };

  VawDynamicBound out;
  out.initial = beta * 0.5 * lambda * path.front().squaredNorm();
  out.log_term = 0.5 * d * maxy2 * std::log1p(weighted_z2 / (lambda * d));
  out.path_exact = discounted_path_term(ledger, path);
  out.path_gamma = gamma / (1.0 - gamma) * path_variation(ledger, path, gamma, true).value;
  out.drift = (1.0 - beta) / beta * 0.5 * d * sumy2;
  return out;
}

}  // namespace d2d
