#pragma once

#include <vector>

#include <Eigen/Dense>

#include "d2d/linreg.hpp"
#include "d2d/regret.hpp"
#include "d2d/streams.hpp"

namespace d2d {

double sigmoid(double x);
double log_sigmoid(double x);
/// ln(1 + e^x) without overflow.
double softplus(double x);

/// ln(1 + exp(-y * yhat)).
double logistic_loss(double yhat, double y);
/// Gradient in x of logistic_loss(x.z, y).
Eigen::VectorXd logistic_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& z, double y);

struct AioliState {
  double beta = 0.5;
  double lambda = 1.0;
  double B = 1.0;
  double R = 1.0;
  Eigen::MatrixXd H;  // sum beta^{t-s} eta_s g_s g_s^T
  Eigen::VectorXd w;  // sum beta^{t-s} (linear coefficient of the surrogate)
  int t = 0;
  double reg = 1.0;  // lambda * beta^t
  double last_term = 0.0;  // eta_t g_t^T (lambda beta^t I + H_t)^{-1} g_t
};

AioliState make_aioli(int d, double beta, double lambda, double B, double R);

/// Root of u + q tanh(u/2) = p (q >= 0); safeguarded bisection then Newton.
double solve_tanh_root(double p, double q);

struct AioliPrediction {
  Eigen::VectorXd x;
  double yhat = 0.0;
  double residual = 0.0;  // |A x - w~ + tanh(x.z/2) z|_inf
};

AioliPrediction aioli_predict(const AioliState& state, const Eigen::VectorXd& z);

AioliState aioli_update(AioliState state, const Eigen::VectorXd& z, double y, double yhat);

struct AioliRun {
  std::vector<AioliPrediction> predictions;
  std::vector<double> losses;
  std::vector<double> terms;       // per-round eta g^T A~^{-1} g
  std::vector<double> discounted;  // S_t = beta S_{t-1} + terms[t-1]
  AioliState final_state;
  double max_residual = 0.0;
};

AioliRun run_aioli(const std::vector<LabeledRound>& rounds, double beta, double lambda, double B, double R);

/// Logistic losses, phi(u) = lambda/2 |u|^2, stability (1+BR) * terms.
RegretLedger aioli_ledger(const std::vector<LabeledRound>& rounds, const AioliRun& run);

/// Discounted form of the rescaled guarantee at prefix t:
/// beta^t lambda/2 |u|^2 + (1+BR) S_t.
double aioli_rescaled_bound(const AioliRun& run, int t, const Eigen::VectorXd& u);

struct AioliDynamicBound {
  double initial = 0.0;     // beta lambda/2 |u_1|^2
  double log_term = 0.0;    // d(1+BR) ln(1 + R^2 sum beta^{T-t} / (d lambda (1+BR)))
  double path_exact = 0.0;  // beta sum_{t<T} (F_t(u_{t+1}) - F_t(u_t))
  double path_gamma = 0.0;  // gamma/(1-gamma) P^gamma
  double drift = 0.0;       // (1-beta)/beta d(1+BR) T
  double exact_form() const { return initial + log_term + path_exact + drift; }
  double variation_form() const { return initial + log_term + path_gamma + drift; }
};

AioliDynamicBound aioli_dynamic_bound(const std::vector<LabeledRound>& rounds, const ComparatorPath& path,
                                      double beta, double lambda, double B, double R, double gamma);

/// Mixture prediction of log-loss experts: log-odds of sum p_i sigma(yhat_i).
double mix_predict(const std::vector<double>& yhats, const std::vector<double>& p);

struct EnsembleState {
  std::vector<double> log_q;
  std::vector<double> betas;
  std::vector<AioliState> bases;
  double B = 1.0;
  double R = 1.0;
  double lambda = 1.0;
};

EnsembleState make_ensemble(int d, const std::vector<double>& betas, double lambda, double B, double R);

std::vector<double> ensemble_weights(const EnsembleState& state);

struct EnsembleStep {
  double yhat = 0.0;
  std::vector<double> base_yhats;
  std::vector<double> p;
  double max_residual = 0.0;
};

/// Predict phase: every base predicts and the mixture is formed.
EnsembleStep ensemble_predict(const EnsembleState& state, const Eigen::VectorXd& z);
/// Update phase once y is revealed.
EnsembleState ensemble_update(EnsembleState state, const EnsembleStep& step, const Eigen::VectorXd& z, double y);

struct EnsembleRun {
  std::vector<EnsembleStep> steps;
  std::vector<double> losses;                   // mixture losses
  std::vector<std::vector<double>> base_losses;  // [i][t]
  double meta_regret = 0.0;
  double max_mixability_gap = 0.0;  // max over rounds and y of lhs - rhs
  double max_residual = 0.0;
};

EnsembleRun run_ensemble(const std::vector<LabeledRound>& rounds, const std::vector<double>& betas, double lambda,
                         double B, double R);

struct Grid {
  std::vector<double> betas;
  double eta_min = 0.0;
  double eta_max = 0.0;
  double lambda = 1.0;
  bool degenerate = false;  // eta_max < eta_min, single element
};

Grid build_grid(double B, double R, int d, int T);

}  // namespace d2d
