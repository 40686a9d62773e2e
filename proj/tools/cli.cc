#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "d2d/adam.hpp"
#include "d2d/csv.hpp"
#include "d2d/lemmas.hpp"
#include "d2d/linreg.hpp"
#include "d2d/logreg.hpp"
#include "d2d/o2nc.hpp"
#include "d2d/regret.hpp"
#include "d2d/streams.hpp"

namespace d2d::cli {

using json = nlohmann::ordered_json;

std::uint64_t default_seed() {
  const char* env = std::getenv("D2D_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("D2D_SEED: not an unsigned integer '") + env + "'");
  }
}

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = trim(s.substr(eq + 1));
  }
  return kv;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Param {
  std::string key;
  std::function<std::optional<std::string>()> show;
  bool hashed = true;
};

/// A subcommand plus a registry of its keys, so configs can be emitted and re-read.
class Command {
 public:
  Command(CLI::App& root, const std::string& name, const std::string& desc) : app_(root.add_subcommand(name, desc)) {
    app_->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app_->add_option("--config", config_path_, "Flat key=value file; flags given later override it");
    app_->add_flag("--emit-config", emit_, "Print the resolved config and exit");
    add("summary", summary_, "JSON summary path (default: stdout)", false);
    seed_ = default_seed();
    add("seed", seed_, "Seed (default: $D2D_SEED or 0)");
  }

  template <class T>
  CLI::Option* add(const std::string& key, T& ref, const std::string& desc, bool hashed = true) {
    CLI::Option* opt = app_->add_option("--" + key, ref, desc);
    params_.push_back({key, [&ref]() -> std::optional<std::string> { return show(ref); }, hashed});
    return opt;
  }

  CLI::Option* add_flag(const std::string& key, bool& ref, const std::string& desc) {
    CLI::Option* opt = app_->add_flag("--" + key, ref, desc);
    params_.push_back({key, [&ref]() -> std::optional<std::string> { return ref ? "true" : "false"; }, true});
    return opt;
  }

  CLI::App* app() const { return app_; }
  bool emit() const { return emit_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& summary_path() const { return summary_; }

  bool has_key(const std::string& key) const {
    return std::any_of(params_.begin(), params_.end(), [&](const Param& p) { return p.key == key; });
  }

  std::string emit_config(bool hashed_only) const {
    std::string text;
    for (const auto& p : params_) {
      if (hashed_only && !p.hashed) continue;
      if (auto v = p.show()) text += p.key + "=" + *v + "\n";
    }
    return text;
  }

  std::string header() const {
    return "# d2d " + app_->get_name() + " config_hash=" + fnv1a_hex(emit_config(true)) +
           " seed=" + std::to_string(seed_);
  }

 private:
  static std::optional<std::string> show(const double& v) { return format_double(v); }
  static std::optional<std::string> show(const int& v) { return std::to_string(v); }
  static std::optional<std::string> show(const std::uint64_t& v) { return std::to_string(v); }
  static std::optional<std::string> show(const std::string& v) {
    if (v.empty()) return std::nullopt;
    return v;
  }
  static std::optional<std::string> show(const std::optional<double>& v) {
    if (!v) return std::nullopt;
    return format_double(*v);
  }

  CLI::App* app_;
  std::vector<Param> params_;
  std::string config_path_;
  std::string summary_;
  std::uint64_t seed_ = 0;
  bool emit_ = false;
};

CLI::Validator open_closed_unit() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        const double v = std::stod(s);
        return (v > 0.0 && v <= 1.0) ? "" : "must lie in (0, 1], got " + s;
      },
      "(0,1]");
}

CLI::Validator open_unit() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        const double v = std::stod(s);
        return (v > 0.0 && v < 1.0) ? "" : "must lie in (0, 1), got " + s;
      },
      "(0,1)");
}

CLI::Validator positive() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        const double v = std::stod(s);
        return (v > 0.0 && std::isfinite(v)) ? "" : "must be finite and > 0, got " + s;
      },
      "POSITIVE");
}

CLI::Validator nonnegative() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        const double v = std::stod(s);
        return (v >= 0.0 && std::isfinite(v)) ? "" : "must be finite and >= 0, got " + s;
      },
      "NONNEGATIVE");
}

/// Accumulates named lhs <= rhs checks for the JSON summary.
class Checks {
 public:
  void add(const std::string& name, double lhs, double rhs) {
    add_raw(name, lhs, rhs, !violates({lhs, rhs}));
  }
  void add_raw(const std::string& name, double lhs, double rhs, bool pass) {
    list_.push_back({{"name", name}, {"lhs", lhs}, {"rhs", rhs}, {"pass", pass}});
    ok_ = ok_ && pass;
  }
  bool ok() const { return ok_; }
  const json& list() const { return list_; }

 private:
  json list_ = json::array();
  bool ok_ = true;
};

std::ofstream open_out(const std::string& key, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(key + ": cannot open '" + path + "' for writing");
  return os;
}

void emit_json(const Command& cmd, const json& doc, std::ostream& out) {
  if (cmd.summary_path().empty()) {
    out << doc.dump(2) << "\n";
  } else {
    auto os = open_out("summary", cmd.summary_path());
    os << doc.dump(2) << "\n";
  }
}

json summary_head(const Command& cmd) {
  json doc;
  doc["subcommand"] = cmd.app()->get_name();
  doc["config_hash"] = fnv1a_hex(cmd.emit_config(true));
  doc["seed"] = cmd.seed();
  return doc;
}

struct LoadedStream {
  std::vector<LabeledRound> rounds;
  ComparatorPath truth;
  bool has_truth = false;
};

LoadedStream load_stream(const std::string& path) {
  if (path.empty()) throw std::invalid_argument("stream: path is required");
  std::ifstream is(path);
  if (!is) throw std::runtime_error("stream: cannot open '" + path + "'");
  LoadedStream s;
  s.rounds = read_stream_csv(is);
  if (s.rounds.empty()) throw std::invalid_argument("stream: '" + path + "' has no rounds");
  const std::string truth_path = truth_path_for(path);
  if (std::filesystem::exists(truth_path)) {
    std::ifstream ts(truth_path);
    s.truth = read_truth_csv(ts);
    if (s.truth.size() != s.rounds.size()) {
      throw std::invalid_argument("stream: truth file '" + truth_path + "' has " + std::to_string(s.truth.size()) +
                                  " rows, stream has " + std::to_string(s.rounds.size()));
    }
    s.has_truth = true;
  } else {
    s.truth.assign(s.rounds.size(), Eigen::VectorXd::Zero(s.rounds.front().z.size()));
  }
  return s;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument(key + ": bad number '" + item + "'");
    }
  }
  return v;
}

void write_regret_trace(const std::string& path, const Command& cmd, const std::vector<TraceRow>& rows) {
  if (path.empty()) return;
  auto os = open_out("out", path);
  CsvWriter w(os, {"t", "loss_play", "loss_comp", "cum_dynreg"}, cmd.header());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    w.row({static_cast<double>(t + 1), rows[t].loss_play, rows[t].loss_comp, rows[t].cum_dynreg});
  }
}

// ---- gen ----

struct GenArgs {
  int d = 5;
  int T = 1000;
  std::string kind = "piecewise-constant-target";
  int segments = 4;
  double noise = 0.1;
  double R = 1.0;
  double B = 1.0;
  std::string out;
};

int run_gen(const Command& cmd, const GenArgs& a, std::ostream& out) {
  StreamSpec spec;
  spec.d = a.d;
  spec.T = a.T;
  spec.kind = stream_kind_from_string(a.kind);
  spec.segments = a.segments;
  spec.noise = a.noise;
  spec.seed = cmd.seed();
  spec.R = a.R;
  spec.B = a.B;
  spec.validate();
  const Stream s = gen_stream(spec);
  {
    auto os = open_out("out", a.out);
    write_stream_csv(os, s.rounds, cmd.header());
  }
  {
    auto os = open_out("out", truth_path_for(a.out));
    write_truth_csv(os, s.truth, cmd.header());
  }
  json doc = summary_head(cmd);
  doc["kind"] = to_string(spec.kind);
  doc["d"] = spec.d;
  doc["T"] = spec.T;
  json starts = json::array();
  for (int k = 0; k < spec.segments; ++k) starts.push_back(segment_start(spec.T, spec.segments, k));
  doc["segment_starts"] = starts;
  doc["pass"] = true;
  emit_json(cmd, doc, out);
  return kExitOk;
}

// ---- run-vaw ----

struct VawArgs {
  double beta = 1.0;
  double lambda = 1.0;
  std::optional<double> gamma;
  std::string stream;
  std::string out;
};

int run_vaw_cmd(const Command& cmd, const VawArgs& a, std::ostream& out) {
  const LoadedStream s = load_stream(a.stream);
  const VawRun run = run_vaw(s.rounds, a.beta, a.lambda);
  const RegretLedger ledger = vaw_ledger(s.rounds, run);
  const double dynreg = dynamic_regret(ledger, s.truth);
  const double gap = d2d_identity_gap(ledger, s.truth);
  const double modular = modular_bound_rhs(ledger, s.truth);

  write_regret_trace(a.out, cmd, regret_trace(ledger, s.truth));

  Checks checks;
  checks.add_raw("d2d-identity", gap, 1e-9 * std::max(1.0, std::abs(dynreg)), gap <= 1e-9 * std::max(1.0, std::abs(dynreg)));
  checks.add("modular-bound", dynreg, modular);
  json doc = summary_head(cmd);
  doc["T"] = ledger.T();
  doc["beta"] = a.beta;
  doc["lambda"] = a.lambda;
  doc["comparator"] = s.has_truth ? "truth" : "zero";
  doc["dynamic_regret"] = dynreg;
  doc["modular_rhs"] = modular;
  if (a.beta < 1.0) {
    const double gamma = a.gamma.value_or(a.beta);
    const VawDynamicBound b = dvaw_dynamic_bound(s.rounds, s.truth, a.beta, a.lambda, gamma);
    doc["gamma"] = gamma;
    doc["bound"] = {{"initial", b.initial},         {"log_term", b.log_term}, {"path_exact", b.path_exact},
                    {"path_gamma", b.path_gamma},   {"drift", b.drift},       {"exact_form", b.exact_form()},
                    {"variation_form", b.variation_form()}};
    checks.add("dynamic-bound-exact", dynreg, b.exact_form());
    checks.add("dynamic-bound-variation", dynreg, b.variation_form());
  }
  doc["checks"] = checks.list();
  doc["pass"] = checks.ok();
  emit_json(cmd, doc, out);
  return checks.ok() ? kExitOk : kExitViolation;
}

// ---- run-aioli ----

struct AioliArgs {
  double beta = 0.9;
  double lambda = 1.0;
  double B = 1.0;
  double R = 1.0;
  std::optional<double> gamma;
  std::string stream;
  std::string out;
};

int run_aioli_cmd(const Command& cmd, const AioliArgs& a, std::ostream& out) {
  const LoadedStream s = load_stream(a.stream);
  const AioliRun run = run_aioli(s.rounds, a.beta, a.lambda, a.B, a.R);
  const RegretLedger ledger = aioli_ledger(s.rounds, run);
  const double dynreg = dynamic_regret(ledger, s.truth);
  const double gap = d2d_identity_gap(ledger, s.truth);
  const double modular = modular_bound_rhs(ledger, s.truth);
  const double gamma = a.gamma.value_or(a.beta);
  const AioliDynamicBound b = aioli_dynamic_bound(s.rounds, s.truth, a.beta, a.lambda, a.B, a.R, gamma);

  write_regret_trace(a.out, cmd, regret_trace(ledger, s.truth));

  const int T = ledger.T();
  const Eigen::VectorXd& u = s.truth.back();
  Checks checks;
  checks.add_raw("d2d-identity", gap, 1e-9 * std::max(1.0, std::abs(dynreg)), gap <= 1e-9 * std::max(1.0, std::abs(dynreg)));
  checks.add_raw("optimality-residual", run.max_residual, 1e-9, run.max_residual <= 1e-9);
  checks.add("discounted-regret-final-comparator", discounted_regret(ledger, T, u), aioli_rescaled_bound(run, T, u));
  checks.add("modular-bound", dynreg, modular);
  checks.add("dynamic-bound-exact", dynreg, b.exact_form());
  checks.add("dynamic-bound-variation", dynreg, b.variation_form());

  json doc = summary_head(cmd);
  doc["T"] = T;
  doc["beta"] = a.beta;
  doc["gamma"] = gamma;
  doc["lambda"] = a.lambda;
  doc["comparator"] = s.has_truth ? "truth" : "zero";
  doc["dynamic_regret"] = dynreg;
  doc["modular_rhs"] = modular;
  doc["bound"] = {{"initial", b.initial},       {"log_term", b.log_term}, {"path_exact", b.path_exact},
                  {"path_gamma", b.path_gamma}, {"drift", b.drift},       {"exact_form", b.exact_form()},
                  {"variation_form", b.variation_form()}};
  doc["checks"] = checks.list();
  doc["pass"] = checks.ok();
  emit_json(cmd, doc, out);
  return checks.ok() ? kExitOk : kExitViolation;
}

// ---- run-ensemble ----

struct EnsembleArgs {
  std::optional<double> lambda;
  double B = 1.0;
  double R = 1.0;
  std::string betas;
  bool grid = false;
  std::string stream;
  std::string out;
};

int run_ensemble_cmd(const Command& cmd, const EnsembleArgs& a, std::ostream& out) {
  if (a.grid && !a.betas.empty()) throw std::invalid_argument("grid: cannot be combined with betas");
  const LoadedStream s = load_stream(a.stream);
  const int d = static_cast<int>(s.rounds.front().z.size());
  const int T = static_cast<int>(s.rounds.size());
  const Grid grid = build_grid(a.B, a.R, d, T);
  const std::vector<double> betas = a.betas.empty() ? grid.betas : parse_list("betas", a.betas);
  for (double b : betas) {
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("betas: every entry must lie in (0, 1)");
  }
  const double lambda = a.lambda.value_or(grid.lambda);
  const EnsembleRun run = run_ensemble(s.rounds, betas, lambda, a.B, a.R);

  double comp_loss = 0.0;
  double mix_loss = 0.0;
  for (int t = 0; t < T; ++t) {
    comp_loss += logistic_loss(s.truth[t].dot(s.rounds[t].z), s.rounds[t].y);
    mix_loss += run.losses[t];
  }
  if (!a.out.empty()) {
    auto os = open_out("out", a.out);
    CsvWriter w(os, {"t", "yhat", "loss_mix", "cum_meta_regret"}, cmd.header());
    std::vector<double> cum(betas.size(), 0.0);
    double cum_mix = 0.0;
    for (int t = 0; t < T; ++t) {
      cum_mix += run.losses[t];
      for (std::size_t i = 0; i < betas.size(); ++i) cum[i] += run.base_losses[i][t];
      w.row({static_cast<double>(t + 1), run.steps[t].yhat, run.losses[t],
             cum_mix - *std::min_element(cum.begin(), cum.end())});
    }
  }

  const double lnN = std::log(static_cast<double>(betas.size()));
  Checks checks;
  checks.add_raw("meta-regret", run.meta_regret, lnN, run.meta_regret <= lnN + 1e-9);
  checks.add_raw("mixability", run.max_mixability_gap, 0.0, run.max_mixability_gap <= 1e-9);
  checks.add_raw("optimality-residual", run.max_residual, 1e-9, run.max_residual <= 1e-9);

  json doc = summary_head(cmd);
  doc["T"] = T;
  doc["betas"] = betas;
  doc["lambda"] = lambda;
  doc["grid_degenerate"] = a.betas.empty() && grid.degenerate;
  doc["comparator"] = s.has_truth ? "truth" : "zero";
  doc["dynamic_regret"] = mix_loss - comp_loss;
  doc["meta_regret"] = run.meta_regret;
  doc["checks"] = checks.list();
  doc["pass"] = checks.ok();
  emit_json(cmd, doc, out);
  return checks.ok() ? kExitOk : kExitViolation;
}

// ---- tune-adam / run-o2nc ----

struct TuneArgs {
  std::string variant = "clipped";
  double eps = 0.3;
  double c = 1e-4;
  double G = 1.0;
  double sigma = 0.1;
  std::optional<double> Fstar;
  std::optional<double> nu;
  std::optional<double> rho;
};

TuningInputs tuning_inputs(const TuneArgs& a, double default_Fstar) {
  TuningInputs in;
  in.eps = a.eps;
  in.c = a.c;
  in.G = a.G;
  in.sigma = a.sigma;
  in.Fstar = a.Fstar.value_or(default_Fstar);
  in.nu = a.nu.value_or(a.G + a.sigma);
  in.rho = a.rho;
  return in;
}

TuningReport tune(const TuneArgs& a, const TuningInputs& in) {
  const AdamVariant v = adam_variant_from_string(a.variant);
  if (v == AdamVariant::Clipped) return in.rho ? tune_clipped_margin(in) : tune_clipped(in);
  return tune_clipfree(in);
}

json report_json(const TuningReport& r) {
  json j;
  j["rule"] = r.rule;
  j["feasible"] = r.feasible;
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["beta1"] = r.beta1;
  j["beta2_lo"] = r.beta2_lo;
  j["beta2_hi"] = r.beta2_hi;
  j["beta2_hi_inclusive"] = r.beta2_hi_inclusive;
  j["beta2"] = r.beta2;
  j["D"] = r.D;
  j["gamma"] = r.gamma;
  j["mu"] = r.mu;
  j["T_min"] = r.T_min;
  if (r.rho) j["rho"] = *r.rho;
  if (r.margin) j["margin"] = *r.margin;
  return j;
}

int run_tune_cmd(const Command& cmd, const TuneArgs& a, std::ostream& out) {
  const TuningInputs in = tuning_inputs(a, 1.0);
  const TuningReport r = tune(a, in);
  json doc = summary_head(cmd);
  doc["report"] = report_json(r);
  doc["pass"] = true;
  emit_json(cmd, doc, out);
  return kExitOk;
}

struct O2ncArgs {
  TuneArgs tune;
  std::string objective = "clamped-quadratic";
  int dim = 10;
  int T = 20000;
  double x0_norm = 5.0;
  double radius = 0.0;
  int samples = 256;
  std::string out;
};

int run_o2nc_cmd(const Command& cmd, O2ncArgs a, std::ostream& out) {
  const Objective obj = make_objective(a.objective, a.dim, a.tune.G);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(a.dim, a.x0_norm / std::sqrt(static_cast<double>(a.dim)));
  const TuningInputs in = tuning_inputs(a.tune, obj.value(x0) - obj.inf_value);
  const TuningReport report = tune(a.tune, in);
  if (!report.feasible) throw std::invalid_argument("tuning infeasible: " + report.reason);
  const AdamConfig cfg = config_from_report(report, in.nu);
  const O2ncTrace trace = run_o2nc(cfg, obj, a.tune.sigma, x0, a.T, cmd.seed());

  if (!a.out.empty()) {
    auto os = open_out("out", a.out);
    CsvWriter w(os, {"t", "s_t", "||delta||", "||grad_at_xbar||", "dynreg_term"}, cmd.header());
    for (int t = 0; t < a.T; ++t) {
      w.row({static_cast<double>(t + 1), trace.s[t], trace.delta_norm[t], trace.grad_norm_xbar[t],
             trace.regret_terms[t]});
    }
  }

  Checks checks;
  if (cfg.variant == AdamVariant::Clipped) {
    const double max_delta = *std::max_element(trace.delta_norm.begin(), trace.delta_norm.end());
    checks.add_raw("clip-radius", max_delta, cfg.D, max_delta <= cfg.D * (1.0 + 1e-12));
  }
  double dynreg = 0.0;
  for (double v : trace.regret_terms) dynreg += v;
  const Eigen::VectorXd& returned = trace.xbar[trace.sampled_index - 1];

  json doc = summary_head(cmd);
  doc["objective"] = obj.name;
  doc["T"] = a.T;
  doc["report"] = report_json(report);
  doc["initial_grad_norm"] = trace.initial_grad_norm;
  doc["tail_mean_grad_norm"] = trace.tail_mean_grad(0.1);
  doc["converged"] = trace.tail_mean_grad(0.1) < 0.1 * trace.initial_grad_norm;
  doc["sampled_index"] = trace.sampled_index;
  doc["sampled_grad_norm"] = obj.grad(returned).norm();
  doc["stationarity_witness"] = stationarity_surrogate(obj, returned, a.radius, a.tune.c, a.samples, cmd.seed());
  doc["dynamic_regret"] = dynreg;
  doc["zero_comparators"] = trace.zero_comparators;
  doc["checks"] = checks.list();
  doc["pass"] = checks.ok();
  emit_json(cmd, doc, out);
  return checks.ok() ? kExitOk : kExitViolation;
}

// ---- verify-lemmas ----

struct LemmaArgs {
  std::string only;
  int instances = 1000;
};

int run_lemmas_cmd(const Command& cmd, const LemmaArgs& a, std::ostream& out) {
  std::vector<std::string> ids = a.only.empty() ? lemma_ids() : std::vector<std::string>{a.only};
  json suites = json::array();
  bool ok = true;
  for (const auto& id : ids) {
    const LemmaVerdict v = run_lemma_suite(id, a.instances, cmd.seed());
    suites.push_back({{"id", v.id},
                      {"instances", v.instances},
                      {"violations", v.violations},
                      {"worst_slack", v.worst_slack},
                      {"pass", v.passed()}});
    ok = ok && v.passed();
  }
  json doc = summary_head(cmd);
  doc["suites"] = suites;
  doc["pass"] = ok;
  emit_json(cmd, doc, out);
  return ok ? kExitOk : kExitViolation;
}

/// Splices --config contents in front of the remaining flags so flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::vector<Command*>& commands) {
  if (args.empty()) return args;
  const Command* cmd = nullptr;
  for (const Command* c : commands) {
    if (c->app()->get_name() == args[0]) cmd = c;
  }
  if (!cmd) return args;
  std::vector<std::string> rest;
  std::vector<std::string> paths;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config: expected a file path");
      paths.push_back(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      paths.push_back(args[i].substr(9));
    } else {
      rest.push_back(args[i]);
    }
  }
  std::vector<std::string> expanded{args[0]};
  for (const auto& path : paths) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << is.rdbuf();
    for (const auto& [key, value] : parse_flat_config(buf.str())) {
      if (!cmd->has_key(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
      if (value.empty()) throw std::invalid_argument("config: key '" + key + "' has an empty value");
      expanded.push_back("--" + key + "=" + value);
    }
  }
  expanded.insert(expanded.end(), rest.begin(), rest.end());
  return expanded;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Discounted-to-dynamic regret experiments", "d2d");
  app.require_subcommand(1);
  app.allow_config_extras(false);

  std::vector<std::unique_ptr<Command>> owned;
  auto make = [&](const std::string& name, const std::string& desc) {
    owned.push_back(std::make_unique<Command>(app, name, desc));
    return owned.back().get();
  };

  try {
    GenArgs gen;
    Command* c_gen = make("gen", "Generate a labelled stream and its comparator truth");
    c_gen->add("d", gen.d, "Dimension")->check(CLI::PositiveNumber);
    c_gen->add("T", gen.T, "Horizon")->check(CLI::PositiveNumber);
    c_gen->add("kind", gen.kind, "piecewise-constant-target | rotating-target | logistic-drift")
        ->check(CLI::IsMember({"piecewise-constant-target", "rotating-target", "logistic-drift"}));
    c_gen->add("segments", gen.segments, "Number of segments")->check(CLI::PositiveNumber);
    c_gen->add("noise", gen.noise, "Label noise scale")->check(nonnegative());
    c_gen->add("R", gen.R, "Feature radius")->check(positive());
    c_gen->add("B", gen.B, "Target radius")->check(nonnegative());
    c_gen->add("out", gen.out, "Stream CSV path (truth goes to the sibling .truth.csv)", false)->required();

    VawArgs vaw;
    Command* c_vaw = make("run-vaw", "Discounted VAW on a stream");
    c_vaw->add("beta", vaw.beta, "Discount factor")->check(open_closed_unit());
    c_vaw->add("lambda", vaw.lambda, "Regularization")->check(positive());
    c_vaw->add("gamma", vaw.gamma, "Path-variation discount, beta <= gamma < 1 (default beta)")->check(open_unit());
    c_vaw->add("stream", vaw.stream, "Stream CSV")->required();
    c_vaw->add("out", vaw.out, "Trace CSV path", false);

    AioliArgs aioli;
    Command* c_aioli = make("run-aioli", "Discounted AIOLI on a logistic stream");
    c_aioli->add("beta", aioli.beta, "Discount factor")->check(open_unit());
    c_aioli->add("lambda", aioli.lambda, "Regularization")->check(positive());
    c_aioli->add("B", aioli.B, "Comparator radius")->check(positive());
    c_aioli->add("R", aioli.R, "Feature radius")->check(positive());
    c_aioli->add("gamma", aioli.gamma, "Path-variation discount, beta <= gamma < 1 (default beta)")->check(open_unit());
    c_aioli->add("stream", aioli.stream, "Stream CSV")->required();
    c_aioli->add("out", aioli.out, "Trace CSV path", false);

    EnsembleArgs ens;
    Command* c_ens = make("run-ensemble", "Mixture of discounted AIOLI learners over a beta grid");
    c_ens->add("lambda", ens.lambda, "Regularization (default 1/B^2)")->check(positive());
    c_ens->add("B", ens.B, "Comparator radius")->check(positive());
    c_ens->add("R", ens.R, "Feature radius")->check(positive());
    c_ens->add("betas", ens.betas, "Comma-separated betas (default: the automatic grid)");
    c_ens->add_flag("grid", ens.grid, "Use the automatic grid (the default when betas is empty)");
    c_ens->add("stream", ens.stream, "Stream CSV")->required();
    c_ens->add("out", ens.out, "Trace CSV path", false);

    auto add_tune = [](Command* c, TuneArgs& t) {
      c->add("variant", t.variant, "clipped | clipfree")->check(CLI::IsMember({"clipped", "clipfree"}));
      c->add("eps", t.eps, "Target accuracy")->check(positive());
      c->add("c", t.c, "Stationarity weight")->check(positive());
      c->add("G", t.G, "Lipschitz constant")->check(positive());
      c->add("sigma", t.sigma, "Noise scale")->check(nonnegative());
      c->add("Fstar", t.Fstar, "Initial suboptimality (tune-adam: 1, run-o2nc: F(x0) - inf F)")->check(nonnegative());
      c->add("nu", t.nu, "Denominator floor, 0 < nu <= G + sigma (default G + sigma)")->check(positive());
      c->add("rho", t.rho, "Margin in [0, 1); selects the margin rule")
          ->check(CLI::Validator(
              [](std::string& s) -> std::string {
                const double v = std::stod(s);
                return (v >= 0.0 && v < 1.0) ? "" : "must lie in [0, 1), got " + s;
              },
              "[0,1)"));
    };

    TuneArgs tune_args;
    Command* c_tune = make("tune-adam", "Adam parameters for a target accuracy");
    add_tune(c_tune, tune_args);

    O2ncArgs o2nc;
    Command* c_o2nc = make("run-o2nc", "Exponentiated O2NC driven by tuned Adam");
    add_tune(c_o2nc, o2nc.tune);
    c_o2nc->add("objective", o2nc.objective, "clamped-quadratic | norm | max-affine")
        ->check(CLI::IsMember({"clamped-quadratic", "norm", "max-affine"}));
    c_o2nc->add("dim", o2nc.dim, "Dimension")->check(CLI::PositiveNumber);
    c_o2nc->add("T", o2nc.T, "Rounds")->check(CLI::PositiveNumber);
    c_o2nc->add("x0-norm", o2nc.x0_norm, "Start at x0 = x0-norm * (1,...,1)/sqrt(dim)")->check(nonnegative());
    c_o2nc->add("radius", o2nc.radius, "Perturbation radius of the stationarity witness")->check(nonnegative());
    c_o2nc->add("samples", o2nc.samples, "Samples of the stationarity witness")->check(CLI::PositiveNumber);
    c_o2nc->add("out", o2nc.out, "Trace CSV path", false);

    LemmaArgs lem;
    Command* c_lem = make("verify-lemmas", "Fuzz the inequality oracles");
    c_lem->add("only", lem.only, "Run a single suite")->check(CLI::IsMember(lemma_ids()));
    c_lem->add("instances", lem.instances, "Instances per suite")->check(CLI::PositiveNumber);

    std::vector<Command*> commands;
    for (auto& c : owned) commands.push_back(c.get());

    if (args.empty()) {
      err << app.help();
      return kExitError;
    }
    std::vector<std::string> argv = expand_config(args, commands);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);

    for (Command* c : commands) {
      if (!c->app()->parsed()) continue;
      if (c->emit()) {
        out << c->emit_config(false);
        return kExitOk;
      }
      if (c == c_gen) return run_gen(*c, gen, out);
      if (c == c_vaw) return run_vaw_cmd(*c, vaw, out);
      if (c == c_aioli) return run_aioli_cmd(*c, aioli, out);
      if (c == c_ens) return run_ensemble_cmd(*c, ens, out);
      if (c == c_tune) return run_tune_cmd(*c, tune_args, out);
      if (c == c_o2nc) return run_o2nc_cmd(*c, o2nc, out);
      if (c == c_lem) return run_lemmas_cmd(*c, lem, out);
    }
    err << app.help();
    return kExitError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace d2d::cli
