#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace d2d {

enum class AdamVariant { Clipped, ClipFree };

std::string to_string(AdamVariant v);
AdamVariant adam_variant_from_string(const std::string& name);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double gamma = 1.0;
  double nu = 1e-8;
  double D = 1.0;   // clip radius (clipped)
  double mu = 0.0;  // composite weight (clip-free)
  AdamVariant variant = AdamVariant::Clipped;

  void validate() const;
};

/// m = sum beta1^{t-s} g_s, v = sum beta2^{t-s} |g_s|^2 (unnormalized).
struct AdamState {
  Eigen::VectorXd m;
  double v = 0.0;
  int t = 0;
  double beta1_t = 1.0;  // beta1^t by iterated product
};

AdamState make_adam_state(int d);
AdamState adam_accumulate(AdamState state, const AdamConfig& cfg, const Eigen::VectorXd& g);

/// nu + sqrt((1 - beta2) v).
double adam_denominator(const AdamConfig& cfg, const AdamState& state);

/// gamma (1-beta1) beta1^t / (nu + sqrt((1-beta2) v)).
double eta_t(const AdamConfig& cfg, const AdamState& state);

/// Clip_D[a] = min(|a|, D) a/|a|, Clip_D[0] = 0.
Eigen::VectorXd clip_to_ball(const Eigen::VectorXd& a, double D);

Eigen::VectorXd clipped_delta(const AdamConfig& cfg, const AdamState& state);
Eigen::VectorXd clipfree_delta(const AdamConfig& cfg, const AdamState& state);
Eigen::VectorXd adam_delta(const AdamConfig& cfg, const AdamState& state);

/// Solves the discounted FTRL program directly from the raw gradient history
/// (folded by beta1^t so no negative powers appear) and returns the distance
/// to the closed-form update.
double ftrl_equivalence_residual(const AdamConfig& cfg, const std::vector<Eigen::VectorXd>& history);

/// Numeric FTRL argmin used by ftrl_equivalence_residual.
Eigen::VectorXd ftrl_argmin(const AdamConfig& cfg, const std::vector<Eigen::VectorXd>& history);

struct RhoResult {
  double rho = 0.0;
  double factor = 0.0;  // 1/sqrt(1 - rho^2)
  bool feasible = false;
};

/// |beta2 - (1+beta1^2)/2| / ((1-beta1^2)/2).
RhoResult rho_of(double beta1, double beta2);

struct TuningInputs {
  double eps = 0.1;
  double c = 1.0;
  double G = 1.0;
  double sigma = 0.0;
  double Fstar = 1.0;
  double nu = 1.0;
  std::optional<double> rho;
};

struct TuningReport {
  std::string rule;  // clipped, clipped-margin, clipfree, clipfree-margin
  double beta1 = 0.0;
  double beta2_lo = 0.0;
  double beta2_hi = 1.0;
  bool beta2_hi_inclusive = false;
  double beta2 = 0.0;  // recommended value inside the range
  double D = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double T_min = 0.0;
  std::optional<double> rho;
  std::optional<double> margin;
  bool feasible = false;
  std::string reason;
};

TuningReport tune_clipped(const TuningInputs& in);
TuningReport tune_clipped_margin(const TuningInputs& in);
/// Uses the margin rule when in.rho is set.
TuningReport tune_clipfree(const TuningInputs& in);

/// Adam configuration implied by a feasible report.
AdamConfig config_from_report(const TuningReport& report, double nu);

}  // namespace d2d
