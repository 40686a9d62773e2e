#include "d2d/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "d2d/logreg.hpp"
#include "d2d/rng.hpp"

namespace d2d {

namespace {

double pos(double x) { return std::max(x, 0.0); }

double log_uniform(CounterRng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

double uniform_in(CounterRng& rng, double lo, double hi) { return lo + rng.uniform() * (hi - lo); }

int int_in(CounterRng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

// Nonnegative sequence in [0, A] with occasional zeros and spikes at A.
std::vector<double> bounded_sequence(CounterRng& rng, int T, double A) {
  std::vector<double> a(T);
  for (double& v : a) {
    const double r = rng.uniform();
    v = r < 0.1 ? 0.0 : (r < 0.2 ? A : A * rng.uniform());
  }
  return a;
}

Comparison worse(const Comparison& x, const Comparison& y) {
  return (x.rhs - x.lhs) <= (y.rhs - y.lhs) ? x : y;
}

double lse(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

bool violates(const Comparison& c) { return !(c.lhs - c.rhs <= 1e-9 * (1.0 + std::abs(c.rhs))); }

Comparison abel_sum(double beta, const std::vector<double>& a) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta: must lie in (0, 1]");
  const int T = static_cast<int>(a.size());
  Comparison c;
  double V = 0.0;
  for (int t = 1; t <= T; ++t) {
    V = beta * V + (1.0 - beta) * a[t - 1];
    c.lhs += V;
    c.rhs += (1.0 - std::pow(beta, T + 1 - t)) * a[t - 1];
  }
  return c;
}

Comparison ema_self_confident(double beta, double eps, double A, const std::vector<double>& a, bool current) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta: must lie in (0, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("eps: must be > 0");
  const double T = static_cast<double>(a.size());
  Comparison c;
  double V = 0.0;
  double total = 0.0;
  for (double at : a) {
    if (at < 0.0 || at > A) throw std::invalid_argument("ema_self_confident: a_t outside [0, A]");
    const double V_prev = V;
    V = beta * V + (1.0 - beta) * at;
    c.lhs += at / (eps + std::sqrt(current ? V : V_prev));
    total += at;
  }
  const double k = T * (1.0 - beta) / std::numbers::ln2 + 1.0;
  const double lead = 2.0 / std::sqrt((1.0 - beta) * std::exp2(-1.0 / beta));
  c.rhs = lead * std::sqrt(k * total);
  if (!current) c.rhs += k * A / eps;
  return c;
}

Comparison beta_coupling(double beta1, double beta2, const std::vector<double>& eps_seq,
                         const std::vector<double>& g_norms) {
  if (eps_seq.size() != g_norms.size() + 1) throw std::invalid_argument("beta_coupling: need eps_0..eps_T");
  for (std::size_t i = 0; i < eps_seq.size(); ++i) {
    if (eps_seq[i] < 0.0 || (i > 0 && eps_seq[i] < eps_seq[i - 1])) {
      throw std::invalid_argument("beta_coupling: eps must be nonnegative and nondecreasing");
    }
  }
  Comparison worst{0.0, std::numeric_limits<double>::infinity()};
  double S = 0.0;  // sum beta2^{t-s} |g_s|^2
  double root_prev = 0.0;
  for (std::size_t t = 1; t <= g_norms.size(); ++t) {
    S = beta2 * S + g_norms[t - 1] * g_norms[t - 1];
    const double root = std::sqrt((1.0 - beta2) * S);
    const Comparison c{pos(beta1 * (eps_seq[t - 1] + root_prev) - (eps_seq[t] + root)),
                       pos(beta1 - std::sqrt(beta2)) * root_prev};
    worst = worse(worst, c);
    root_prev = root;
  }
  if (g_norms.empty()) worst = {0.0, 0.0};
  return worst;
}

Comparison lr_deviation(double beta1, double beta2, double gamma, double eps, double mu,
                        const std::vector<double>& g_norms) {
  if (g_norms.empty()) throw std::invalid_argument("lr_deviation: need T >= 2");
  const int T = static_cast<int>(g_norms.size()) + 1;
  const double scale = gamma * (1.0 - beta1);
  Comparison c;
  double S = 0.0;
  double A_prev = eps;
  double b1t = 1.0;
  double sum_roots = 0.0;
  double root = 0.0;
  for (int t = 1; t <= T - 1; ++t) {
    S = beta2 * S + g_norms[t - 1] * g_norms[t - 1];
    root = std::sqrt((1.0 - beta2) * S);
    b1t *= beta1;
    const double A = eps + gamma * mu * (1.0 - b1t) + root;
    // beta1^t (1/eta_t - 1/eta_{t-1}) with 1/eta_t = A_t / (gamma (1-beta1) beta1^t).
    c.lhs += (A - beta1 * A_prev) / scale;
    A_prev = A;
    if (t <= T - 2) sum_roots += root;
  }
  c.rhs = root / scale + sum_roots / gamma + (T - 1) * eps / gamma + mu * (T - 1);
  return c;
}

Comparison min_self_confident(double beta1, double beta2, double gamma, double nu, double mu,
                              const std::vector<Eigen::VectorXd>& g) {
  if (!(beta2 > beta1 * beta1)) throw std::invalid_argument("min_self_confident: requires beta2 > beta1^2");
  const double k = std::sqrt(beta2 / ((beta2 - beta1 * beta1) * (1.0 - beta2)));
  Comparison worst{0.0, std::numeric_limits<double>::infinity()};
  if (g.size() < 2) return {0.0, 0.0};
  Eigen::VectorXd m = Eigen::VectorXd::Zero(g.front().size());
  double S = 0.0;
  double b1t = 1.0;
  double A_prev = 0.0;
  for (std::size_t t = 1; t <= g.size(); ++t) {
    const Eigen::VectorXd m_prev = m;
    m = beta1 * m + g[t - 1];
    S = beta2 * S + g[t - 1].squaredNorm();
    b1t *= beta1;
    const double A = nu + gamma * mu * (1.0 - b1t) + std::sqrt((1.0 - beta2) * S);
    if (t >= 2) {
      const Comparison c{std::abs(1.0 / A_prev - beta1 / A) * m_prev.norm(), (A - beta1 * A_prev) / A * k};
      worst = worse(worst, c);
    }
    A_prev = A;
  }
  return worst;
}

Comparison discounted_potential(double beta, double lambda, const std::vector<Eigen::VectorXd>& z,
                                const std::vector<double>& c) {
  if (z.empty() || z.size() != c.size()) throw std::invalid_argument("discounted_potential: size mismatch");
  const long d = z.front().size();
  Eigen::MatrixXd A = lambda * Eigen::MatrixXd::Identity(d, d);
  Comparison out;
  double sum_c2 = 0.0;
  double max_c2 = 0.0;
  double weighted = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    A = z[t] * z[t].transpose() + beta * A;
    const double c2 = c[t] * c[t];
    out.lhs += c2 * z[t].dot(A.ldlt().solve(z[t]));
    sum_c2 += c2;
    max_c2 = std::max(max_c2, c2);
    weighted = beta * weighted + z[t].squaredNorm();
  }
  const double dd = static_cast<double>(d);
  out.rhs = dd * std::log(1.0 / beta) * sum_c2 + max_c2 * dd * std::log1p(weighted / (lambda * dd));
  return out;
}

Comparison logistic_surrogate(double C, double a, double b) {
  if (std::abs(a) > C) throw std::invalid_argument("logistic_surrogate: |a| must be <= C");
  const double fb = softplus(-b);
  const double dfb = -sigmoid(-b);
  // e^b f'(b)^2 = sigma(b) sigma(-b).
  const double curv = sigmoid(b) * sigmoid(-b);
  const double diff = a - b;
  return {fb + dfb * diff + curv * diff * diff / (2.0 * (1.0 + C)), softplus(-a)};
}

Comparison mixability(const std::vector<double>& yhats, const std::vector<double>& p) {
  const double mix = mix_predict(yhats, p);
  Comparison worst{0.0, std::numeric_limits<double>::infinity()};
  for (double y : {1.0, -1.0}) {
    std::vector<double> terms(yhats.size());
    for (std::size_t i = 0; i < yhats.size(); ++i) terms[i] = std::log(p[i]) - logistic_loss(yhats[i], y);
    worst = worse(worst, {logistic_loss(mix, y), -lse(terms)});
  }
  return worst;
}

Comparison self_confident(const std::vector<double>& a, double delta) {
  Comparison c;
  double S = 0.0;
  for (double at : a) {
    S += at;
    const double den = std::sqrt(delta + S);
    if (at > 0.0) c.lhs += at / den;
  }
  c.rhs = 2.0 * (std::sqrt(delta + S) - std::sqrt(delta));
  return c;
}

Comparison self_confident_int(double a0, const std::vector<double>& a, double B) {
  if (!(a0 > 0.0)) throw std::invalid_argument("self_confident_int: a0 must be > 0");
  Comparison c;
  double S = a0;
  for (double at : a) {
    if (at < 0.0 || at > B) throw std::invalid_argument("self_confident_int: a_t outside [0, B]");
    c.lhs += at / std::sqrt(S);
    S += at;
  }
  c.rhs = B / std::sqrt(a0) + 2.0 * (std::sqrt(S) - std::sqrt(a0));
  return c;
}

Comparison path_length(double beta, double gamma, int T, int d, std::uint64_t seed) {
  if (!(beta > 0.0 && beta <= gamma && gamma < 1.0)) throw std::invalid_argument("path_length: need 0 < beta <= gamma < 1");
  CounterRng rng(seed, 7);
  const double lambda = log_uniform(rng, 0.01, 10.0);
  std::vector<Eigen::VectorXd> z(T + 1);
  std::vector<double> y(T + 1);
  for (int s = 1; s <= T; ++s) {
    z[s] = rng.unit_sphere(d) * uniform_in(rng, 0.1, 2.0);
    y[s] = 2.0 * rng.normal();
  }
  // f_0 = lambda/2 |u|^2, f_s = 1/2 (u.z_s - y_s)^2.
  auto f = [&](int s, const Eigen::VectorXd& u) {
    if (s == 0) return 0.5 * lambda * u.squaredNorm();
    const double r = u.dot(z[s]) - y[s];
    return 0.5 * r * r;
  };
  std::vector<Eigen::VectorXd> u(T + 1);
  u[1] = rng.unit_sphere(d) * uniform_in(rng, 0.0, 3.0);
  for (int t = 2; t <= T; ++t) {
    u[t] = rng.uniform() < 0.3 ? Eigen::VectorXd(rng.unit_sphere(d) * uniform_in(rng, 0.0, 3.0)) : u[t - 1];
  }
  Comparison c;
  for (int t = 1; t <= T - 1; ++t) {
    double F_next = 0.0;
    double F_cur = 0.0;
    double norm = 0.0;
    double P_t = 0.0;
    for (int s = 0; s <= t; ++s) {
      F_next += std::pow(beta, t - s) * f(s, u[t + 1]);
      F_cur += std::pow(beta, t - s) * f(s, u[t]);
      norm += std::pow(gamma, t - s);
    }
    for (int s = 0; s <= t; ++s) P_t += std::pow(gamma, t - s) / norm * pos(f(s, u[t + 1]) - f(s, u[t]));
    c.lhs += beta * (F_next - F_cur);
    c.rhs += gamma / (1.0 - gamma) * P_t;
  }
  return c;
}

std::vector<std::string> lemma_ids() {
  return {"abel-sum",          "ema-self-confident", "ema-self-confident-curr", "beta-coupling",
          "lr-deviation",      "min-self-confident", "discounted-potential",    "logistic-surrogate",
          "mixability",        "self-confident",     "self-confident-int",      "path-length"};
}

LemmaVerdict run_lemma_suite(const std::string& id, int instances, std::uint64_t seed) {
  if (instances < 1) throw std::invalid_argument("instances: must be >= 1");
  const auto ids = lemma_ids();
  const auto pos_it = std::find(ids.begin(), ids.end(), id);
  if (pos_it == ids.end()) throw std::invalid_argument("only: unknown lemma id '" + id + "'");
  LemmaVerdict verdict;
  verdict.id = id;
  verdict.worst_slack = std::numeric_limits<double>::infinity();
  const auto suite_no = static_cast<std::uint64_t>(pos_it - ids.begin());

  for (int k = 0; k < instances; ++k) {
    CounterRng rng(seed, (suite_no << 32) | static_cast<std::uint64_t>(k));
    Comparison c;
    bool identity = false;
    double identity_scale = 1.0;
    if (id == "abel-sum") {
      const double beta = rng.uniform() < 0.1 ? 1.0 : uniform_in(rng, 0.01, 0.999);
      std::vector<double> a(int_in(rng, 1, 200));
      for (double& v : a) {
        v = rng.normal() * 10.0;
        identity_scale += std::abs(v);
      }
      c = abel_sum(beta, a);
      identity = true;
    } else if (id == "ema-self-confident" || id == "ema-self-confident-curr") {
      const double beta = uniform_in(rng, 0.05, 0.999);
      const double eps = log_uniform(rng, 1e-3, 10.0);
      const double A = log_uniform(rng, 1e-2, 100.0);
      c = ema_self_confident(beta, eps, A, bounded_sequence(rng, int_in(rng, 1, 300), A),
                             id == "ema-self-confident-curr");
    } else if (id == "beta-coupling") {
      const double beta1 = uniform_in(rng, 0.01, 0.999);
      const double beta2 = uniform_in(rng, 0.01, 0.999);
      const int T = int_in(rng, 1, 100);
      std::vector<double> eps(T + 1);
      eps[0] = rng.uniform() < 0.2 ? 0.0 : log_uniform(rng, 1e-4, 1.0);
      for (int t = 1; t <= T; ++t) eps[t] = eps[t - 1] + (rng.uniform() < 0.5 ? 0.0 : 0.1 * rng.uniform());
      const double scale = log_uniform(rng, 1e-3, 1e3);
      std::vector<double> g(T);
      for (double& v : g) v = rng.uniform() < 0.1 ? 0.0 : scale * rng.uniform();
      c = beta_coupling(beta1, beta2, eps, g);
    } else if (id == "lr-deviation") {
      const double beta1 = uniform_in(rng, 0.01, 0.999);
      const double beta2 = uniform_in(rng, 0.01, 0.999);
      const double gamma = log_uniform(rng, 1e-3, 10.0);
      const double eps = log_uniform(rng, 1e-4, 1.0);
      const double mu = k % 2 == 0 ? 0.0 : log_uniform(rng, 1e-3, 10.0);
      const double scale = log_uniform(rng, 1e-3, 1e3);
      std::vector<double> g(int_in(rng, 1, 199));
      for (double& v : g) v = scale * std::abs(rng.normal());
      c = lr_deviation(beta1, beta2, gamma, eps, mu, g);
    } else if (id == "min-self-confident") {
      const double beta1 = uniform_in(rng, 0.01, 0.99);
      const double b1sq = beta1 * beta1;
      const double beta2 = b1sq + (1.0 - b1sq) * uniform_in(rng, 1e-3, 0.999);
      const double gamma = log_uniform(rng, 1e-3, 10.0);
      const double nu = log_uniform(rng, 1e-4, 1.0);
      const double mu = rng.uniform() < 0.5 ? 0.0 : log_uniform(rng, 1e-3, 10.0);
      const double scale = log_uniform(rng, 1e-3, 1e3);
      std::vector<Eigen::VectorXd> g(int_in(rng, 2, 100));
      for (auto& v : g) v = rng.unit_sphere(3) * scale * std::abs(rng.normal());
      c = min_self_confident(beta1, beta2, gamma, nu, mu, g);
    } else if (id == "discounted-potential") {
      const int dims[] = {1, 2, 5};
      const int d = dims[k % 3];
      const double beta = rng.uniform() < 0.1 ? 1.0 : uniform_in(rng, 0.01, 0.999);
      const double lambda = log_uniform(rng, 1e-2, 10.0);
      const int T = int_in(rng, 1, 100);
      std::vector<Eigen::VectorXd> z(T);
      std::vector<double> cs(T);
      for (int t = 0; t < T; ++t) {
        z[t] = rng.unit_sphere(d) * log_uniform(rng, 1e-2, 10.0);
        cs[t] = rng.normal() * 3.0;
      }
      c = discounted_potential(beta, lambda, z, cs);
    } else if (id == "logistic-surrogate") {
      const double C = log_uniform(rng, 0.1, 20.0);
      c = logistic_surrogate(C, uniform_in(rng, -C, C), uniform_in(rng, -40.0, 40.0));
    } else if (id == "mixability") {
      const int N = int_in(rng, 1, 16);
      std::vector<double> yhats(N);
      std::vector<double> p(N);
      double total = 0.0;
      for (int i = 0; i < N; ++i) {
        yhats[i] = 5.0 * rng.normal();
        p[i] = -std::log(rng.uniform_open_closed());
        total += p[i];
      }
      for (double& v : p) v /= total;
      c = mixability(yhats, p);
    } else if (id == "self-confident") {
      const double delta = rng.uniform() < 0.3 ? 0.0 : log_uniform(rng, 1e-3, 10.0);
      std::vector<double> a(int_in(rng, 1, 200));
      for (double& v : a) v = rng.uniform() < 0.2 ? 0.0 : log_uniform(rng, 1e-3, 10.0);
      c = self_confident(a, delta);
    } else if (id == "self-confident-int") {
      const double a0 = log_uniform(rng, 1e-3, 10.0);
      const double B = log_uniform(rng, 1e-2, 10.0);
      c = self_confident_int(a0, bounded_sequence(rng, int_in(rng, 1, 200), B), B);
    } else {
      const double gamma = uniform_in(rng, 0.05, 0.99);
      const double beta = rng.uniform() < 0.3 ? gamma : uniform_in(rng, 0.01, gamma);
      c = path_length(beta, gamma, int_in(rng, 2, 40), int_in(rng, 1, 3), rng());
    }

    ++verdict.instances;
    double slack;
    bool bad;
    if (identity) {
      slack = -std::abs(c.lhs - c.rhs);
      bad = std::abs(c.lhs - c.rhs) > 1e-10 * identity_scale;
    } else {
      slack = c.rhs - c.lhs;
      bad = violates(c);
    }
    if (bad) ++verdict.violations;
    verdict.worst_slack = std::min(verdict.worst_slack, slack);
  }
  return verdict;
}

}  // namespace d2d
