// Acceptance runner: one PASS/FAIL line per criterion.
//   d2d_acceptance            run all criteria
//   d2d_acceptance --only N   run criterion N (exit code reflects it alone)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "d2d/adam.hpp"
#include "d2d/lemmas.hpp"
#include "d2d/linreg.hpp"
#include "d2d/logreg.hpp"
#include "d2d/o2nc.hpp"
#include "d2d/regret.hpp"
#include "d2d/rng.hpp"
#include "d2d/streams.hpp"
#include "oracles.hpp"

using namespace d2d;
using Vec = Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

std::string fix(double x, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << x;
  return os.str();
}

double uniform_in(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

int int_in(CounterRng& rng, int lo, int hi) { return lo + static_cast<int>(rng.uniform() * (hi - lo + 1)); }

Stream drifting_stream(int d, int T, StreamKind kind, int segments, double noise, std::uint64_t seed) {
  StreamSpec spec;
  spec.d = d;
  spec.T = T;
  spec.kind = kind;
  spec.segments = segments;
  spec.noise = noise;
  spec.seed = seed;
  return gen_stream(spec);
}

// 1. Discounted-to-dynamic identity.
Outcome c1() {
  const std::vector<double> betas{0.1, 0.3, 0.5, 0.9, 0.99, 1.0};
  CounterRng rng(1, 0);
  double worst_lib = 0.0, worst_oracle = 0.0;
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const int T = int_in(rng, 1, 100);
    const int d = int_in(rng, 1, 4);
    const double beta = betas[k % betas.size()];
    const auto inst = oracle::random_quad_instance(T, d, static_cast<std::uint64_t>(k), 1);
    const auto ledger = oracle::quad_ledger(inst, beta);
    const oracle::Loss f = [&](int t, const Vec& u) { return inst.f(t, u); };
    const double dyn = oracle::dynamic_regret(inst.play_losses(), f, inst.path);
    const double scale = 1.0 + std::abs(dyn);
    const double lib = d2d_identity_gap(ledger, inst.path) / scale;
    const double orc = std::abs(oracle::d2d_rhs(inst.play_losses(), f, beta, inst.path) - dyn) / scale;
    worst_lib = std::max(worst_lib, lib);
    worst_oracle = std::max(worst_oracle, orc);
    if (!(lib <= 1e-9 && orc <= 1e-9)) ++bad;
  }
  return {bad == 0, "1000 instances, max rel gap " + sci(worst_lib) + " (direct oracle " + sci(worst_oracle) + "), " +
                        std::to_string(bad) + " violations"};
}

// 2. Static VAW bound at every prefix.
Outcome c2() {
  CounterRng rng(2, 0);
  long checks = 0;
  int bad = 0;
  double worst_slack = INFINITY, worst_pot = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int d = int_in(rng, 1, 5);
    const int T = int_in(rng, 1, 200);
    const double lambda = uniform_in(rng, 0.1, 2.0);
    const auto kind = k % 2 == 0 ? StreamKind::PiecewiseConstantTarget : StreamKind::RotatingTarget;
    const auto s = drifting_stream(d, T, kind, std::min(T, int_in(rng, 1, 4)), uniform_in(rng, 0.0, 1.0), 200 + k);
    const auto run = run_vaw(s.rounds, 1.0, lambda);
    const auto lib_pot = vaw_static_potentials(s.rounds, lambda);

    // Independent potentials: A_t = lambda I + sum_{s<=t} z z^T, rebuilt and factorized each round.
    Eigen::MatrixXd A = lambda * Eigen::MatrixXd::Identity(d, d);
    std::vector<double> S(T + 1, 0.0);
    for (int t = 1; t <= T; ++t) {
      const auto& r = s.rounds[t - 1];
      A += r.z * r.z.transpose();
      S[t] = S[t - 1] + 0.5 * r.y * r.y * r.z.dot(A.ldlt().solve(r.z));
      worst_pot = std::max(worst_pot, std::abs(S[t] - lib_pot[t]) / (1.0 + S[t]));
    }

    // Comparators: full-horizon ridge solution, final truth, a random point, the origin.
    Eigen::MatrixXd M = lambda * Eigen::MatrixXd::Identity(d, d);
    Vec b = Vec::Zero(d);
    for (const auto& r : s.rounds) {
      M += r.z * r.z.transpose();
      b += r.y * r.z;
    }
    const std::vector<Vec> comparators{M.ldlt().solve(b), s.truth.back(), rng.unit_sphere(d) * uniform_in(rng, 0, 3),
                                       Vec::Zero(d)};
    for (const auto& u : comparators) {
      double regret = 0.0;
      for (int t = 1; t <= T; ++t) {
        regret += run.losses[t - 1] - square_loss(u, s.rounds[t - 1]);
        const double bound = 0.5 * lambda * u.squaredNorm() + S[t];
        const double lib_bound = t == T ? vaw_static_bound(s.rounds, lambda, t, u)
                                        : 0.5 * lambda * u.squaredNorm() + lib_pot[t];
        worst_slack = std::min(worst_slack, bound - regret);
        ++checks;
        if (violates({regret, bound}) || violates({regret, lib_bound})) ++bad;
      }
    }
  }
  const bool pot_ok = worst_pot <= 1e-9;
  return {bad == 0 && pot_ok, "200 streams, " + std::to_string(checks) + " prefix checks, " + std::to_string(bad) +
                                  " violations, worst slack " + sci(worst_slack) + ", potential mismatch " +
                                  sci(worst_pot)};
}

// 3. Discounted VAW dynamic bound plus the drift advantage.
Outcome c3() {
  CounterRng rng(3, 0);
  int bad = 0, checks = 0;
  double worst_slack = INFINITY;
  for (int k = 0; k < 50; ++k) {
    const int d = int_in(rng, 1, 5);
    const int T = int_in(rng, 50, 400);
    const auto kind = k % 2 == 0 ? StreamKind::PiecewiseConstantTarget : StreamKind::RotatingTarget;
    const auto s = drifting_stream(d, T, kind, int_in(rng, 2, 5), uniform_in(rng, 0.0, 0.5), 300 + k);
    for (double beta : {0.5, 0.9, 0.99}) {
      const auto run = run_vaw(s.rounds, beta, 1.0);
      const auto ledger = vaw_ledger(s.rounds, run);
      const oracle::Loss f = [&](int t, const Vec& u) { return square_loss(u, s.rounds[t - 1]); };
      const double dyn = oracle::dynamic_regret(run.losses, f, s.truth);
      if (std::abs(dyn - dynamic_regret(ledger, s.truth)) > 1e-9 * (1.0 + std::abs(dyn))) ++bad;
      for (double gamma : {beta, 0.95, 0.99, 0.999}) {
        if (gamma < beta) continue;
        const auto b = dvaw_dynamic_bound(s.rounds, s.truth, beta, 1.0, gamma);
        for (double rhs : {b.exact_form(), b.variation_form()}) {
          ++checks;
          worst_slack = std::min(worst_slack, rhs - dyn);
          if (violates({dyn, rhs})) ++bad;
        }
      }
    }
  }
  const auto s = drifting_stream(5, 2000, StreamKind::PiecewiseConstantTarget, 4, 0.1, 3);
  auto dynreg = [&](double beta) {
    const auto run = run_vaw(s.rounds, beta, 1.0);
    return dynamic_regret(vaw_ledger(s.rounds, run), s.truth);
  };
  const double static_reg = dynreg(1.0);
  double best = INFINITY, best_beta = 0.0;
  for (double beta : {0.5, 0.9, 0.99}) {
    const double r = dynreg(beta);
    if (r < best) best = r, best_beta = beta;
  }
  const bool advantage = best <= 0.8 * static_reg;
  return {bad == 0 && advantage, std::to_string(checks) + " bound checks, " + std::to_string(bad) +
                                     " violations, worst slack " + sci(worst_slack) + "; drift stream: best beta " +
                                     fix(best_beta, 2) + " dynreg " + fix(best, 2) + " vs beta=1 " + fix(static_reg, 2) +
                                     " (ratio " + fix(best / static_reg, 3) + ")"};
}

// 4. Discounted AIOLI: prefix guarantee, dynamic bound, first-order residual.
Outcome c4() {
  const std::vector<double> betas{0.9, 0.95, 0.99};
  const double B = 1.0, R = 1.0, lambda = 1.0;
  int bad_prefix = 0, bad_dyn = 0;
  long checks = 0;
  double max_residual = 0.0, worst_slack = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const double beta = betas[k % 3];
    StreamSpec spec;
    spec.d = 3;
    spec.T = 500;
    spec.kind = StreamKind::LogisticDrift;
    spec.segments = 1 + k % 4;
    spec.noise = 0.1 * (k % 5);
    spec.seed = 400 + k;
    spec.B = B;
    spec.R = R;
    const auto s = gen_stream(spec);
    const auto run = run_aioli(s.rounds, beta, lambda, B, R);
    max_residual = std::max(max_residual, run.max_residual);

    CounterRng rng(spec.seed, 9);
    const std::vector<Vec> comparators{s.truth.back(), s.truth.front(), rng.unit_sphere(3) * rng.uniform() * B};
    for (const auto& u : comparators) {
      double disc = 0.0;  // independent recurrence of the discounted regret
      for (int t = 1; t <= 500; ++t) {
        const auto& r = s.rounds[t - 1];
        disc = beta * disc + logistic_loss(run.predictions[t - 1].x.dot(r.z), r.y) - logistic_loss(u.dot(r.z), r.y);
        const double rhs = aioli_rescaled_bound(run, t, u);
        worst_slack = std::min(worst_slack, rhs - disc);
        ++checks;
        if (violates({disc, rhs})) ++bad_prefix;
      }
    }
    for (int t = 50; t <= 500; t += 50) {
      const std::vector<LabeledRound> rounds(s.rounds.begin(), s.rounds.begin() + t);
      const ComparatorPath path(s.truth.begin(), s.truth.begin() + t);
      double dyn = 0.0;
      for (int q = 0; q < t; ++q) dyn += run.losses[q] - logistic_loss(path[q].dot(rounds[q].z), rounds[q].y);
      const auto b = aioli_dynamic_bound(rounds, path, beta, lambda, B, R, beta);
      checks += 2;
      if (violates({dyn, b.exact_form()}) || violates({dyn, b.variation_form()})) ++bad_dyn;
    }
  }
  const bool pass = bad_prefix == 0 && bad_dyn == 0 && max_residual <= 1e-9;
  return {pass, "100 streams, " + std::to_string(checks) + " checks, prefix violations " + std::to_string(bad_prefix) +
                    ", dynamic-bound violations " + std::to_string(bad_dyn) + ", worst prefix slack " +
                    sci(worst_slack) + ", max residual " + sci(max_residual)};
}

// 5. Ensemble meta-regret and mixability.
Outcome c5() {
  int bad = 0, runs = 0;
  double worst_margin = INFINITY, worst_mix = -INFINITY;
  for (int k = 0; k < 30; ++k) {
    const int d = 1 + k % 3;
    const int T = 200 + 100 * (k % 4);
    const double B = k % 2 == 0 ? 1.0 : 2.0, R = 1.0;
    StreamSpec spec;
    spec.d = d;
    spec.T = T;
    spec.kind = StreamKind::LogisticDrift;
    spec.segments = 1 + k % 3;
    spec.noise = 0.2;
    spec.seed = 500 + k;
    spec.B = B;
    spec.R = R;
    const auto s = gen_stream(spec);
    std::vector<double> betas;
    double lambda;
    if (k % 2 == 0) {
      const auto grid = build_grid(B, R, d, T);
      betas = grid.betas;
      lambda = grid.lambda;
    } else {
      betas = {0.5, 0.8, 0.95, 0.99};
      lambda = 1.0;
    }
    const auto run = run_ensemble(s.rounds, betas, lambda, B, R);
    ++runs;
    const std::size_t N = betas.size();
    double mix_total = 0.0;
    std::vector<double> base_total(N, 0.0);
    for (int t = 0; t < T; ++t) {
      const auto& st = run.steps[t];
      const double y = s.rounds[t].y;
      mix_total += logistic_loss(st.yhat, y);
      for (std::size_t i = 0; i < N; ++i) base_total[i] += logistic_loss(st.base_yhats[i], y);
      for (double label : {1.0, -1.0}) {
        double rhs = 0.0;
        for (std::size_t i = 0; i < N; ++i) rhs += st.p[i] * std::exp(-logistic_loss(st.base_yhats[i], label));
        const double gap = logistic_loss(st.yhat, label) + std::log(rhs);
        worst_mix = std::max(worst_mix, gap);
        if (gap > 1e-9) ++bad;
      }
    }
    const double meta = mix_total - *std::min_element(base_total.begin(), base_total.end());
    worst_margin = std::min(worst_margin, std::log(static_cast<double>(N)) - meta);
    if (meta > std::log(static_cast<double>(N)) + 1e-9) ++bad;
    if (std::abs(meta - run.meta_regret) > 1e-9 * (1.0 + std::abs(meta))) ++bad;
  }
  return {bad == 0, std::to_string(runs) + " runs, " + std::to_string(bad) + " violations, min (ln N - meta) " +
                        sci(worst_margin) + ", max mixability gap " + sci(worst_mix)};
}

// 6. Adam closed forms versus the discounted FTRL argmin.
Outcome c6() {
  CounterRng rng(6, 0);
  int bad = 0;
  double worst_lib = 0.0, worst_oracle = 0.0;
  for (auto variant : {AdamVariant::Clipped, AdamVariant::ClipFree}) {
    for (int k = 0; k < 500; ++k) {
      AdamConfig cfg;
      cfg.variant = variant;
      cfg.beta1 = uniform_in(rng, 0.5, 0.999);
      cfg.beta2 = uniform_in(rng, cfg.beta1 * cfg.beta1, 0.9999);
      cfg.gamma = std::exp(uniform_in(rng, -5.0, 1.0));
      cfg.nu = std::exp(uniform_in(rng, -6.0, 0.0));
      cfg.D = std::exp(uniform_in(rng, -6.0, 1.0));
      cfg.mu = variant == AdamVariant::ClipFree ? std::exp(uniform_in(rng, -3.0, 3.0)) : 0.0;
      const int t = int_in(rng, 1, 50);
      const int d = int_in(rng, 1, 5);
      std::vector<Vec> history;
      for (int s = 0; s < t; ++s) history.push_back(rng.unit_sphere(d) * uniform_in(rng, 0.0, 5.0));
      AdamState st = make_adam_state(d);
      for (const auto& g : history) st = adam_accumulate(st, cfg, g);
      const Vec delta = adam_delta(cfg, st);
      const double lib = ftrl_equivalence_residual(cfg, history);
      const double orc = (oracle::adam_ftrl_argmin(cfg, history) - delta).norm();
      worst_lib = std::max(worst_lib, lib);
      worst_oracle = std::max(worst_oracle, orc);
      if (!(lib <= 1e-8 && orc <= 1e-8)) ++bad;
    }
  }
  return {bad == 0, "1000 histories (500 per variant), max residual " + sci(worst_lib) + " (independent argmin " +
                        sci(worst_oracle) + "), " + std::to_string(bad) + " violations"};
}

// 7. Margin arithmetic against the published rows, 0.5% relative.
Outcome c7() {
  struct Row {
    double b1, b2, rho, factor;
  };
  const std::vector<Row> rows{{0.9, 0.999, 0.989, 6.9}, {0.9, 0.95, 0.473, 1.13}, {0.95, 0.95, 0.025, 1.0}};
  bool pass = true;
  std::string detail;
  for (const auto& r : rows) {
    const auto got = rho_of(r.b1, r.b2);
    const double e_rho = std::abs(got.rho - r.rho) / r.rho;
    const double e_fac = std::abs(got.factor - r.factor) / r.factor;
    const bool ok = e_rho <= 0.005 && e_fac <= 0.005;
    pass = pass && ok;
    detail += "(" + fix(r.b1, 2) + "," + fix(r.b2, 3) + "): rho " + fix(got.rho, 6) + " vs " + fix(r.rho, 3) + " [" +
              fix(100 * e_rho, 2) + "%], factor " + fix(got.factor, 4) + " vs " + fix(r.factor, 2) + " [" +
              fix(100 * e_fac, 2) + "%], truncation " + fix(oracle::truncate_to(got.rho, 3), 3) +
              (ok ? " ok; " : " OFF; ");
  }
  return {pass, detail};
}

// 8. Tuning reports re-substituted into their conditions.
Outcome c8() {
  CounterRng rng(8, 0);
  int bad = 0, reports = 0;
  std::string first;
  for (int k = 0; k < 100; ++k) {
    TuningInputs in;
    in.eps = std::exp(uniform_in(rng, -5.0, 0.0));
    in.c = std::exp(uniform_in(rng, -6.0, 3.0));
    in.G = std::exp(uniform_in(rng, -2.0, 2.0));
    in.sigma = uniform_in(rng, 0.0, 2.0) * in.G;
    in.Fstar = std::exp(uniform_in(rng, -3.0, 3.0));
    in.nu = (in.G + in.sigma) * uniform_in(rng, 0.001, 1.0);
    TuningInputs with_rho = in;
    with_rho.rho = uniform_in(rng, 0.0, 0.999);
    const std::vector<std::pair<TuningInputs, TuningReport>> all{{in, tune_clipped(in)},
                                                                  {with_rho, tune_clipped_margin(with_rho)},
                                                                  {in, tune_clipfree(in)},
                                                                  {with_rho, tune_clipfree(with_rho)}};
    for (const auto& [inputs, report] : all) {
      ++reports;
      const auto v = oracle::tuning_violations(inputs, report);
      if (!v.empty()) {
        ++bad;
        if (first.empty()) first = report.rule + ": " + v.front();
      }
    }
  }
  return {bad == 0, "100 inputs x 4 rules = " + std::to_string(reports) + " reports, " + std::to_string(bad) +
                        " violations" + (first.empty() ? "" : " (first: " + first + ")")};
}

// 9. O2NC with tuned Adam drives the gradient norm down.
Outcome c9() {
  const int d = 10, T = 20000;
  const double G = 1.0, sigma = 0.1 * G;
  const auto obj = make_objective("clamped-quadratic", d, G);
  const Vec x0 = Vec::Constant(d, 5.0 / std::sqrt(static_cast<double>(d)));
  TuningInputs in;
  in.G = G;
  in.sigma = sigma;
  in.nu = G + sigma;
  in.c = 1e-4;
  in.eps = 0.3 * obj.grad(x0).norm();
  in.Fstar = obj.value(x0) - obj.inf_value;
  bool pass = true;
  std::string detail;
  for (const auto& report : {tune_clipped(in), tune_clipfree(in)}) {
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = config_from_report(report, in.nu);
    const auto tr = run_o2nc(cfg, obj, sigma, x0, T, 9);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double tail = tr.tail_mean_grad(0.1);
    const bool ok = tail < 0.1 * tr.initial_grad_norm && secs < 60.0;
    pass = pass && ok;
    detail += report.rule + ": tail mean " + fix(tail, 4) + " vs limit " + fix(0.1 * tr.initial_grad_norm, 4) + " in " +
              fix(secs, 2) + " s; ";
  }
  return {pass, detail};
}

// 10. Lemma fuzz suites.
Outcome c10() {
  bool pass = true;
  std::string detail;
  for (const auto& id : lemma_ids()) {
    const auto v = run_lemma_suite(id, 1000, 10);
    pass = pass && v.passed() && v.instances >= 1000;
    detail += id + " " + std::to_string(v.violations) + "/" + std::to_string(v.instances) + " slack " +
              sci(v.worst_slack) + "; ";
  }
  return {pass, detail};
}

// 11. Byte-identical CLI artifacts across two invocations.
Outcome c11() {
  const fs::path dir = fs::temp_directory_path() / "d2d_acceptance_c11";
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> commands{
      {"gen", "--d", "3", "--T", "300", "--segments", "3", "--noise", "0.2", "--seed", "11", "--out", p("lin.csv")},
      {"gen", "--d", "2", "--T", "200", "--kind", "rotating-target", "--seed", "12", "--out", p("rot.csv")},
      {"gen", "--d", "3", "--T", "300", "--kind", "logistic-drift", "--segments", "2", "--noise", "0.3", "--seed", "13",
       "--out", p("log.csv")},
      {"run-vaw", "--beta", "0.9", "--stream", p("lin.csv"), "--out", p("vaw.csv"), "--summary", p("vaw.json")},
      {"run-aioli", "--beta", "0.95", "--stream", p("log.csv"), "--out", p("aioli.csv"), "--summary", p("aioli.json")},
      {"run-ensemble", "--grid", "--stream", p("log.csv"), "--out", p("ens.csv"), "--summary", p("ens.json")},
      {"tune-adam", "--variant", "clipped", "--rho", "0.5", "--summary", p("tune.json")},
      {"run-o2nc", "--T", "2000", "--variant", "clipfree", "--seed", "5", "--out", p("o2nc.csv"), "--summary",
       p("o2nc.json")},
      {"verify-lemmas", "--instances", "200", "--seed", "3", "--summary", p("lemmas.json")},
  };
  auto snapshot = [&]() {
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::map<std::string, std::string> files;
    std::string stdout_all;
    for (const auto& cmd : commands) {
      std::ostringstream out, err;
      const int code = cli::run_cli(cmd, out, err);
      stdout_all += cmd[0] + ":" + std::to_string(code) + "\n" + out.str();
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
      std::ifstream in(entry.path(), std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      files[entry.path().filename().string()] = ss.str();
    }
    files["<stdout>"] = stdout_all;
    return files;
  };
  const auto a = snapshot();
  const auto b = snapshot();
  fs::remove_all(dir);
  int differing = 0;
  std::string names;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) {
      ++differing;
      names += " " + name;
    }
  }
  if (a.size() != b.size()) ++differing;
  return {differing == 0 && a.size() > commands.size(),
          std::to_string(commands.size()) + " commands, " + std::to_string(a.size()) + " artifacts compared, " +
              std::to_string(differing) + " differ" + names};
}

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // 0 means no runtime limit
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "d2d-identity", 5.0, c1},         {2, "vaw-static-bound", 10.0, c2},
      {3, "vaw-dynamic-bound", 30.0, c3},   {4, "aioli-discounted", 60.0, c4},
      {5, "ensemble-meta-regret", 30.0, c5}, {6, "adam-ftrl-equivalence", 0.0, c6},
      {7, "rho-arithmetic", 0.0, c7},       {8, "tuning-calculators", 0.0, c8},
      {9, "o2nc-convergence", 120.0, c9},   {10, "lemma-suites", 60.0, c10},
      {11, "cli-determinism", 0.0, c11},
  };
  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_s == 0.0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  c" << c.id << " " << c.name << " (" << fix(secs, 2) << " s"
              << (c.limit_s > 0.0 ? " / " + fix(c.limit_s, 0) + " s" : "") << ")  " << o.detail
              << (in_time ? "" : " [over time limit]") << "\n";
  }
  return all ? 0 : 1;
}
