#include "d2d/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace d2d {

namespace {

double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void check_aioli_params(double beta, double lambda, double B, double R) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta: must lie in (0, 1)");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda: must be finite and > 0");
  if (!(B > 0.0) || !std::isfinite(B)) throw std::invalid_argument("B: must be finite and > 0");
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R: must be finite and > 0");
}

Eigen::LLT<Eigen::MatrixXd> factor(const Eigen::MatrixXd& A, const char* who) {
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(std::string(who) + ": curvature matrix is not positive definite");
  }
  return llt;
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double log_sigmoid(double x) { return -softplus(-x); }

double logistic_loss(double yhat, double y) { return softplus(-y * yhat); }

Eigen::VectorXd logistic_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& z, double y) {
  return -y * sigmoid(-y * x.dot(z)) * z;
}

AioliState make_aioli(int d, double beta, double lambda, double B, double R) {
  check_aioli_params(beta, lambda, B, R);
  if (d < 1) throw std::invalid_argument("d: must be >= 1");
  AioliState s;
  s.beta = beta;
  s.lambda = lambda;
  s.B = B;
  s.R = R;
  s.H = Eigen::MatrixXd::Zero(d, d);
  s.w = Eigen::VectorXd::Zero(d);
  s.reg = lambda;
  return s;
}

double solve_tanh_root(double p, double q) {
  if (!(q >= 0.0) || !std::isfinite(p) || !std::isfinite(q)) throw std::invalid_argument("solve_tanh_root: bad input");
  auto g = [p, q](double u) { return u + q * std::tanh(0.5 * u) - p; };
  double lo = p - q;
  double hi = p + q;
  double u = p;
  constexpr double kTol = 1e-12;
  for (int it = 0; it < 200; ++it) {
    u = 0.5 * (lo + hi);
    const double gu = g(u);
    if (std::abs(gu) <= kTol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(u))) break;
    (gu > 0.0 ? hi : lo) = u;
  }
  for (int it = 0; it < 5; ++it) {
    const double th = std::tanh(0.5 * u);
    const double gu = g(u);
    if (gu == 0.0) break;
    const double next = u - gu / (1.0 + 0.5 * q * (1.0 - th * th));
    if (!(next >= lo && next <= hi)) break;
    if (std::abs(g(next)) >= std::abs(gu)) break;
    u = next;
  }
  return u;
}

AioliPrediction aioli_predict(const AioliState& state, const Eigen::VectorXd& z) {
  if (z.size() != state.w.size()) throw std::invalid_argument("aioli_predict: dimension mismatch");
  const double beta = state.beta;
  Eigen::MatrixXd A = beta * state.H;
  A.diagonal().array() += state.reg * beta;
  const Eigen::VectorXd wt = -beta * state.w;
  auto llt = factor(A, "aioli_predict");
  const Eigen::VectorXd Ainv_z = llt.solve(z);
  const Eigen::VectorXd Ainv_w = llt.solve(wt);
  const double q = std::max(z.dot(Ainv_z), 0.0);
  const double p = z.dot(Ainv_w);
  const double u = solve_tanh_root(p, q);
  AioliPrediction out;
  out.x = Ainv_w - std::tanh(0.5 * u) * Ainv_z;
  out.yhat = out.x.dot(z);
  out.residual = (A * out.x - wt + std::tanh(0.5 * out.yhat) * z).cwiseAbs().maxCoeff();
  return out;
}

AioliState aioli_update(AioliState s, const Eigen::VectorXd& z, double y, double yhat) {
  if (z.size() != s.w.size()) throw std::invalid_argument("aioli_update: dimension mismatch");
  if (y != 1.0 && y != -1.0) throw std::invalid_argument("aioli_update: label must be +1 or -1");
  const double scale = 1.0 + s.B * s.R;
  const double b = y * yhat;
  // eta g g^T and eta g through bounded sigmoid products; eta itself is never formed.
  const double kappa = sigmoid(b) * sigmoid(-b) / scale;
  const Eigen::VectorXd lin = (-sigmoid(-b) * y - kappa * yhat) * z;
  s.H = s.beta * s.H + kappa * z * z.transpose();
  s.w = s.beta * s.w + lin;
  s.t += 1;
  s.reg *= s.beta;
  Eigen::MatrixXd A = s.H;
  A.diagonal().array() += s.reg;
  s.last_term = kappa == 0.0 ? 0.0 : kappa * z.dot(factor(A, "aioli_update").solve(z));
  return s;
}

AioliRun run_aioli(const std::vector<LabeledRound>& rounds, double beta, double lambda, double B, double R) {
  if (rounds.empty()) throw std::invalid_argument("run_aioli: empty stream");
  AioliRun run;
  run.final_state = make_aioli(static_cast<int>(rounds.front().z.size()), beta, lambda, B, R);
  double S = 0.0;
  for (const auto& r : rounds) {
    AioliPrediction p = aioli_predict(run.final_state, r.z);
    run.max_residual = std::max(run.max_residual, p.residual);
    run.losses.push_back(logistic_loss(p.yhat, r.y));
    run.final_state = aioli_update(std::move(run.final_state), r.z, r.y, p.yhat);
    run.terms.push_back(run.final_state.last_term);
    S = beta * S + run.final_state.last_term;
    run.discounted.push_back(S);
    run.predictions.push_back(std::move(p));
  }
  return run;
}

RegretLedger aioli_ledger(const std::vector<LabeledRound>& rounds, const AioliRun& run) {
  RegretLedger ledger;
  ledger.losses_at_play = run.losses;
  ledger.beta = run.final_state.beta;
  ledger.loss_eval = [&rounds](int t, const Eigen::VectorXd& u) {
    return logistic_loss(u.dot(rounds[t - 1].z), rounds[t - 1].y);
  };
  const double lambda = run.final_state.lambda;
  ledger.phi_eval = [lambda](int, const Eigen::VectorXd& u) { return 0.5 * lambda * u.squaredNorm(); };
  const double scale = 1.0 + run.final_state.B * run.final_state.R;
  for (double v : run.terms) ledger.stability.push_back(scale * v);
  return ledger;
}

double aioli_rescaled_bound(const AioliRun& run, int t, const Eigen::VectorXd& u) {
  if (t < 1 || t > static_cast<int>(run.discounted.size())) throw std::invalid_argument("t: out of range [1, T]");
  const AioliState& s = run.final_state;
  const double beta_t = std::pow(s.beta, t);
  return beta_t * 0.5 * s.lambda * u.squaredNorm() + (1.0 + s.B * s.R) * run.discounted[t - 1];
}

AioliDynamicBound aioli_dynamic_bound(const std::vector<LabeledRound>& rounds, const ComparatorPath& path,
                                      double beta, double lambda, double B, double R, double gamma) {
  check_aioli_params(beta, lambda, B, R);
  if (!(beta <= gamma && gamma < 1.0)) throw std::invalid_argument("gamma: need beta <= gamma < 1");
  if (rounds.empty() || path.size() != rounds.size()) throw std::invalid_argument("aioli_dynamic_bound: length mismatch");
  const double d = static_cast<double>(rounds.front().z.size());
  const double T = static_cast<double>(rounds.size());
  const double scale = 1.0 + B * R;
  double geo = 0.0;
  for (std::size_t t = 0; t < rounds.size(); ++t) geo = beta * geo + 1.0;

  RegretLedger ledger;
  ledger.losses_at_play.assign(rounds.size(), 0.0);
  ledger.beta = beta;
  ledger.loss_eval = [&rounds](int t, const Eigen::VectorXd& u) {
    return logistic_loss(u.dot(rounds[t - 1].z), rounds[t - 1].y);
  };
  ledger.phi_eval = [lambda](int, const Eigen::VectorXd& u) { return 0.5 * lambda * u.squaredNorm(); };

  AioliDynamicBound out;
  out.initial = beta * 0.5 * lambda * path.front().squaredNorm();
  out.log_term = d * scale * std::log1p(R * R * geo / (d * lambda * scale));
  out.path_exact = discounted_path_term(ledger, path);
  out.path_gamma = gamma / (1.0 - gamma) * path_variation(ledger, path, gamma, true).value;
  out.drift = (1.0 - beta) / beta * d * scale * T;
  return out;
}

double mix_predict(const std::vector<double>& yhats, const std::vector<double>& p) {
  if (yhats.empty() || yhats.size() != p.size()) throw std::invalid_argument("mix_predict: size mismatch");
  std::vector<double> pos(yhats.size());
  std::vector<double> neg(yhats.size());
  for (std::size_t i = 0; i < yhats.size(); ++i) {
    if (!(p[i] >= 0.0)) throw std::invalid_argument("mix_predict: negative weight");
    const double lp = std::log(p[i]);
    pos[i] = lp + log_sigmoid(yhats[i]);
    neg[i] = lp + log_sigmoid(-yhats[i]);
  }
  const double a = log_sum_exp(pos);
  const double b = log_sum_exp(neg);
  // Only infinite expert predictions can make a side vanish.
  if (!std::isfinite(a) || !std::isfinite(b)) {
    constexpr double kClamp = 745.0;
    if (!std::isfinite(a) && !std::isfinite(b)) throw std::invalid_argument("mix_predict: all weights zero");
    return std::isfinite(a) ? kClamp : -kClamp;
  }
  return a - b;
}

EnsembleState make_ensemble(int d, const std::vector<double>& betas, double lambda, double B, double R) {
  if (betas.empty()) throw std::invalid_argument("betas: ensemble needs at least one base learner");
  EnsembleState s;
  s.betas = betas;
  s.B = B;
  s.R = R;
  s.lambda = lambda;
  s.log_q.assign(betas.size(), 0.0);
  for (double beta : betas) s.bases.push_back(make_aioli(d, beta, lambda, B, R));
  return s;
}

std::vector<double> ensemble_weights(const EnsembleState& state) {
  const double lse = log_sum_exp(state.log_q);
  std::vector<double> p(state.log_q.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(state.log_q[i] - lse);
  return p;
}

EnsembleStep ensemble_predict(const EnsembleState& state, const Eigen::VectorXd& z) {
  EnsembleStep step;
  step.p = ensemble_weights(state);
  for (const auto& base : state.bases) {
    AioliPrediction pred = aioli_predict(base, z);
    step.max_residual = std::max(step.max_residual, pred.residual);
    step.base_yhats.push_back(pred.yhat);
  }
  step.yhat = mix_predict(step.base_yhats, step.p);
  return step;
}

EnsembleState ensemble_update(EnsembleState state, const EnsembleStep& step, const Eigen::VectorXd& z, double y) {
  for (std::size_t i = 0; i < state.bases.size(); ++i) {
    state.log_q[i] -= logistic_loss(step.base_yhats[i], y);
    state.bases[i] = aioli_update(std::move(state.bases[i]), z, y, step.base_yhats[i]);
  }
  // Renormalize in the log domain; the mixture only depends on differences.
  const double top = *std::max_element(state.log_q.begin(), state.log_q.end());
  for (double& v : state.log_q) v -= top;
  return state;
}

EnsembleRun run_ensemble(const std::vector<LabeledRound>& rounds, const std::vector<double>& betas, double lambda,
                         double B, double R) {
  if (rounds.empty()) throw std::invalid_argument("run_ensemble: empty stream");
  EnsembleState state = make_ensemble(static_cast<int>(rounds.front().z.size()), betas, lambda, B, R);
  EnsembleRun run;
  run.base_losses.assign(betas.size(), {});
  for (const auto& r : rounds) {
    EnsembleStep step = ensemble_predict(state, r.z);
    run.max_residual = std::max(run.max_residual, step.max_residual);
    run.losses.push_back(logistic_loss(step.yhat, r.y));
    for (double y : {1.0, -1.0}) {
      std::vector<double> terms(betas.size());
      for (std::size_t i = 0; i < betas.size(); ++i) terms[i] = std::log(step.p[i]) - logistic_loss(step.base_yhats[i], y);
      const double gap = logistic_loss(step.yhat, y) + log_sum_exp(terms);
      run.max_mixability_gap = std::max(run.max_mixability_gap, gap);
    }
    for (std::size_t i = 0; i < betas.size(); ++i) run.base_losses[i].push_back(logistic_loss(step.base_yhats[i], r.y));
    state = ensemble_update(std::move(state), step, r.z, r.y);
    run.steps.push_back(std::move(step));
  }
  double mix_total = 0.0;
  for (double v : run.losses) mix_total += v;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ls : run.base_losses) {
    double total = 0.0;
    for (double v : ls) total += v;
    best = std::min(best, total);
  }
  run.meta_regret = mix_total - best;
  return run;
}

Grid build_grid(double B, double R, int d, int T) {
  if (!(B > 0.0) || !(R > 0.0) || d < 1 || T < 1) throw std::invalid_argument("build_grid: B, R, d, T must be positive");
  const double C = std::max(1.0, 2.0 * R);
  Grid g;
  g.eta_min = std::sqrt(d * (1.0 + B * R) / (C * B));
  g.eta_max = static_cast<double>(d) * T;
  g.lambda = 1.0 / (B * B);
  int N = 1;
  if (g.eta_max < g.eta_min) {
    g.degenerate = true;
  } else {
    N = static_cast<int>(std::ceil(std::log2(g.eta_max / g.eta_min))) + 1;
  }
  double eta = g.eta_min;
  for (int i = 0; i < N; ++i) {
    g.betas.push_back(eta / (1.0 + eta));
    eta *= 2.0;
  }
  return g;
}

}  // namespace d2d
