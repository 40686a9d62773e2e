#pragma once

#include <vector>

#include <Eigen/Dense>

#include "d2d/regret.hpp"
#include "d2d/streams.hpp"

namespace d2d {

/// Discounted sufficient statistics of the VAW forecaster.
struct VawState {
  double beta = 1.0;
  double lambda = 1.0;
  Eigen::MatrixXd M;  // sum_{s<=t} beta^{t-s} z_s z_s^T
  Eigen::VectorXd b;  // sum_{s<=t} beta^{t-s} y_s z_s
  int t = 0;
  double reg = 1.0;  // lambda * beta^t by iterated multiplication
  double maxy2 = 0.0;
  double potential = 0.0;  // sum of y_s^2 z_s^T (lambda beta^s I + M_s)^{-1} z_s
  double last_potential = 0.0;
  bool reg_underflow = false;
};

VawState make_vaw(int d, double beta, double lambda);

struct Prediction {
  Eigen::VectorXd x;
  double yhat = 0.0;
};

/// Solves (lambda beta^t I + beta M + z z^T) x = beta b for the next round t.
Prediction dvaw_predict(const VawState& state, const Eigen::VectorXd& z);

VawState dvaw_update(VawState state, const LabeledRound& round);

double square_loss(const Eigen::VectorXd& u, const LabeledRound& round);

struct VawRun {
  std::vector<Prediction> predictions;
  std::vector<double> losses;
  std::vector<double> potentials;  // per-round y^2 z^T (lambda beta^t I + M_t)^{-1} z
  VawState final_state;
};

VawRun run_vaw(const std::vector<LabeledRound>& rounds, double beta, double lambda);

/// Ledger with squared losses, phi(u) = lambda/2 |u|^2 and stability potential/2.
RegretLedger vaw_ledger(const std::vector<LabeledRound>& rounds, const VawRun& run);

/// Prefix sums S_t = 1/2 sum_{s<=t} y_s^2 z_s^T A_s^{-1} z_s with A_s = lambda I + sum_{tau<=s} z z^T.
std::vector<double> vaw_static_potentials(const std::vector<LabeledRound>& rounds, double lambda);

/// lambda/2 |u|^2 + S_t (t in 0..T; t = 0 gives lambda/2 |u|^2).
double vaw_static_bound(const std::vector<LabeledRound>& rounds, double lambda, int t, const Eigen::VectorXd& u);

struct VawDynamicBound {
  double initial = 0.0;     // beta lambda/2 |u_1|^2
  double log_term = 0.0;    // d/2 max y^2 ln(1 + sum beta^{T-t}|z_t|^2/(lambda d))
  double path_exact = 0.0;  // beta sum_{t<T} (F_t(u_{t+1}) - F_t(u_t))
  double path_gamma = 0.0;  // gamma/(1-gamma) P^gamma
  double drift = 0.0;       // (1-beta)/beta d/2 sum y^2
  double exact_form() const { return initial + log_term + path_exact + drift; }
  double variation_form() const { return initial + log_term + path_gamma + drift; }
};

VawDynamicBound dvaw_dynamic_bound(const std::vector<LabeledRound>& rounds, const ComparatorPath& path,
                                   double beta, double lambda, double gamma);

}  // namespace d2d
