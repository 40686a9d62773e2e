#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "d2d/adam.hpp"
#include "d2d/rng.hpp"
#include "d2d/streams.hpp"

namespace d2d {

struct Objective {
  std::string name;
  int dim = 1;
  double G = 1.0;  // Lipschitz constant
  bool smooth = false;
  double inf_value = 0.0;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
};

/// 1/2 |x|^2 inside the ball of radius G, continued linearly outside (Huber).
Objective clamped_quadratic(int d, double G);
/// G |x|_2.
Objective scaled_norm(int d, double G);
/// max_i <a_i, x> over a_i = +-G e_j, i.e. G |x|_inf.
Objective max_of_affines(int d, double G);
/// Names: clamped-quadratic, norm, max-affine.
Objective make_objective(const std::string& name, int d, double G);

/// g = grad F(x) + xi with xi uniform in direction and magnitude
/// min(sigma |N(0,1)|, G - |grad F(x)|), so |g| <= G.
class StochasticOracle {
 public:
  StochasticOracle(const Objective& objective, double sigma, std::uint64_t seed);
  Eigen::VectorXd sample(const Eigen::VectorXd& x, Eigen::VectorXd* true_grad = nullptr);

 private:
  const Objective& objective_;
  double sigma_;
  CounterRng rng_;
};

/// -ln U for U uniform on (0, 1].
double exp_sample(CounterRng& rng);
double exp_from_uniform(double u);

/// ((beta - beta^t) xbar + (1 - beta) x) / (1 - beta^t), beta in (0, 1), t >= 1.
Eigen::VectorXd ema_update(const Eigen::VectorXd& xbar_prev, const Eigen::VectorXd& x, double beta, int t);

/// u_t = -D a_t/|a_t| with a_t = sum_{s<=t} beta^{t-s} grads[s]; zero accumulators give u_t = 0.
ComparatorPath comparator_path(const std::vector<Eigen::VectorXd>& grads, double beta, double D,
                               int* zero_count = nullptr);

struct O2ncTrace {
  std::vector<Eigen::VectorXd> x;     // x_1..x_T
  std::vector<Eigen::VectorXd> xbar;  // xbar_1..xbar_T
  std::vector<double> s;
  std::vector<double> delta_norm;
  std::vector<double> grad_norm_xbar;  // |grad F(xbar_t)|
  std::vector<double> regret_terms;
  std::vector<double> comparator_norm;
  int zero_comparators = 0;
  int sampled_index = 0;  // 1-based index of the returned average
  double initial_grad_norm = 0.0;

  /// Mean of grad_norm_xbar over the final `fraction` of rounds.
  double tail_mean_grad(double fraction) const;
};

/// Runs the exponentiated conversion with Adam as the online learner.
O2ncTrace run_o2nc(const AdamConfig& cfg, const Objective& objective, double sigma, const Eigen::VectorXd& x0, int T,
                   std::uint64_t seed);

/// |mean_k grad F(xbar + delta_k)| + c mean_k |delta_k|^2 for delta_k uniform in the ball of `radius`.
double stationarity_surrogate(const Objective& objective, const Eigen::VectorXd& xbar, double radius, double c,
                              int samples, std::uint64_t seed);

}  // namespace d2d
