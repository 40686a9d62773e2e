#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace d2d {

struct LemmaVerdict {
  std::string id;
  int instances = 0;
  int violations = 0;
  double worst_slack = 0.0;  // min over instances of rhs - lhs

  bool passed() const { return violations == 0; }
};

/// One inequality evaluation lhs <= rhs.
struct Comparison {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Violation rule shared by all suites: lhs - rhs > 1e-9 (1 + |rhs|).
bool violates(const Comparison& c);

// Single-instance oracles. Each returns lhs and rhs of its inequality
// (identities report |lhs - rhs| against a relative tolerance instead).

/// sum_t V_t versus sum_t (1 - beta^{T+1-t}) a_t, V_t = (1-beta) sum_{s<=t} beta^{t-s} a_s.
Comparison abel_sum(double beta, const std::vector<double>& a);

/// Self-confident bound for an exponential moving average; `current` uses V_t
/// in the denominator (and drops the A/eps term), otherwise V_{t-1}.
Comparison ema_self_confident(double beta, double eps, double A, const std::vector<double>& a, bool current);

/// max_t of [beta1/alpha_{t-1} - 1/alpha_t]_+ - [beta1 - sqrt(beta2)]_+ sqrt(V_{t-1}), reported as lhs/rhs
/// of the tightest round.
Comparison beta_coupling(double beta1, double beta2, const std::vector<double>& eps_seq,
                         const std::vector<double>& g_norms);

/// sum_{t=1}^{T-1} beta1^t (1/eta_t - 1/eta_{t-1}) versus its closed-form bound; T = g_norms.size() + 1.
Comparison lr_deviation(double beta1, double beta2, double gamma, double eps, double mu,
                        const std::vector<double>& g_norms);

/// Worst round t >= 2 of the step-size deviation bound, both sides divided by gamma (1-beta1) beta1^{t-1}.
Comparison min_self_confident(double beta1, double beta2, double gamma, double nu, double mu,
                              const std::vector<Eigen::VectorXd>& g);

/// sum_t c_t^2 z_t^T A_t^{-1} z_t with A_t = z z^T + beta A_{t-1}, A_0 = lambda I.
Comparison discounted_potential(double beta, double lambda, const std::vector<Eigen::VectorXd>& z,
                                const std::vector<double>& c);

/// f(a) >= f(b) + f'(b)(a-b) + e^b f'(b)^2 (a-b)^2 / (2(1+C)), f(x) = ln(1 + e^{-x}); returned as rhs >= lhs.
Comparison logistic_surrogate(double C, double a, double b);

/// Worst label of l(mix, y) <= -ln sum p_i e^{-l(yhat_i, y)}.
Comparison mixability(const std::vector<double>& yhats, const std::vector<double>& p);

/// sum a_t / sqrt(delta + sum_{s<=t} a_s) <= 2 (sqrt(delta + sum a) - sqrt(delta)); 0/0 counts as 0.
Comparison self_confident(const std::vector<double>& a, double delta);

/// sum_t a_t f(sum_{s<t} a_s) <= B f(a0) + int_{a0}^{S} f with f(u) = u^{-1/2}, a holds a_1..a_T in [0, B].
Comparison self_confident_int(double a0, const std::vector<double>& a, double B);

/// Discounted path term at beta versus gamma/(1-gamma) times the path variation, on
/// random nonnegative quadratic losses.
Comparison path_length(double beta, double gamma, int T, int d, std::uint64_t seed);

/// Suite ids in run order.
std::vector<std::string> lemma_ids();

/// Runs the fuzz suite `id` with `instances` seeded instances.
LemmaVerdict run_lemma_suite(const std::string& id, int instances, std::uint64_t seed);

}  // namespace d2d
