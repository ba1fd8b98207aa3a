#include "dsheat/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "dsheat/bounds.hpp"
#include "dsheat/config.hpp"
#include "dsheat/errors.hpp"
#include "dsheat/evolution.hpp"
#include "dsheat/experiments.hpp"
#include "dsheat/inequalities.hpp"
#include "dsheat/kernel.hpp"
#include "dsheat/snapshot.hpp"

namespace dsheat {

using nlohmann::json;

namespace {

std::string real_or_empty(double x) {
  return std::isfinite(x) ? format_real(x) : std::string();
}

json real_or_null(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

/// Tracks every file written under the output prefix for the manifest.
class Outputs {
 public:
  explicit Outputs(std::string prefix) : prefix_(std::move(prefix)) {}

  // Resolves a name under the prefix without recording it.
  std::filesystem::path location(const std::string& name) const {
    std::filesystem::path p(prefix_ + name);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p;
  }
  std::filesystem::path path(const std::string& name) {
    auto p = location(name);
    files_.push_back(p.string());
    return p;
  }
  void note(const std::filesystem::path& p) { files_.push_back(p.string()); }

  std::ofstream open(const std::string& name) {
    const auto p = path(name);
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  }

  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << "\n"; }

  void write_manifest(const std::string& command, const Config& cfg) {
    const auto p = path("manifest.json");
    json j;
    j["command"] = command;
    j["config"] = to_json(cfg);
    j["files"] = files_;
    std::ofstream out(p);
    out << j.dump(2) << "\n";
  }

 private:
  std::string prefix_;
  std::vector<std::string> files_;
};

json params_json(const Params& p) {
  json j;
  j["d"] = p.d;
  j["alpha"] = p.alpha;
  j["delta"] = optional_json(p.delta);
  j["variant"] = std::string(to_string(p.variant));
  j["lambda"] = p.naive_lambda;
  return j;
}

// --- run ----------------------------------------------------------------------

int cmd_run(const Config& cfg, Outputs& outputs, std::ostream& out) {
  const Field f0 = parse_init_spec(cfg.init, cfg.params.d);
  RunOptions opts;
  opts.cell_budget = cfg.cell_budget;
  if (cfg.dump_every > 0) {
    opts.on_state = [&](const EvolutionState& s) {
      if (s.tau % cfg.dump_every != 0) return;
      const auto [csv, side] = write_snapshot(outputs.location("snapshot_tau" + std::to_string(s.tau)), s.f, s.tau);
      outputs.note(csv);
      outputs.note(side);
    };
  }
  const RunRecord rec = run(cfg.params, f0, cfg.horizon, opts);
  {
    auto csv = outputs.open("run.csv");
    csv << "tau,sup_f,sup_g,l1_f,support_cells\n";
    for (const auto& r : rec.rows)
      csv << r.tau << ',' << format_real(r.sup_f) << ',' << real_or_empty(r.sup_g) << ',' << format_real(r.l1_f)
          << ',' << r.support_cells << '\n';
  }
  json s;
  s["outcome"] = std::string(to_string(rec.outcome));
  s["outcome_tau"] = rec.outcome_tau;
  s["blowup_tau"] = rec.blowup ? json(rec.blowup->at_tau) : json(nullptr);
  if (rec.blowup) {
    s["blowup"] = {{"witness", rec.blowup->witness}, {"g_value", real_or_null(rec.blowup->g_value)},
                   {"overflow", rec.blowup->overflow}};
  }
  s["params"] = params_json(cfg.params);
  s["horizon"] = cfg.horizon;
  s["final_l1"] = rec.rows.back().l1_f;
  s["warnings"] = rec.warnings;
  s["wall_seconds"] = rec.wall_seconds;
  outputs.write_json("summary.json", s);

  out << "outcome " << to_string(rec.outcome) << " at tau " << rec.outcome_tau << "\n";
  for (const auto& w : rec.warnings) out << "warning: " << w << "\n";
  return rec.outcome == Outcome::BudgetExhausted ? kExitBudget : kExitOk;
}

// --- sandwich -----------------------------------------------------------------

int cmd_sandwich(const Config& cfg, Outputs& outputs, std::ostream& out) {
  const Field f0 = parse_init_spec(cfg.init, cfg.params.d);
  SandwichState s = init_sandwich(cfg.params, f0);
  auto csv = outputs.open("sandwich.csv");
  csv << "tau,sup_h,l1_h,m_prefix,sub_exists,super_exists,sandwich_ok\n";
  bool all_ok = true;
  std::string first_failure;
  std::optional<std::int64_t> blowup_tau;
  for (;;) {
    const SandwichReport rep = check_sandwich(s);
    if (!rep.ok && all_ok) {
      all_ok = false;
      first_failure = rep.message;
    }
    csv << s.tau << ',' << format_real(sup_norm(s.h)) << ',' << format_real(l1_norm(s.h)) << ','
        << format_real(s.m_prefix) << ',' << (s.sub ? 1 : 0) << ',' << (s.super ? 1 : 0) << ',' << (rep.ok ? 1 : 0)
        << '\n';
    if (!s.f.alive()) {
      blowup_tau = s.f.blowup->at_tau;
      break;
    }
    if (s.tau == cfg.horizon) break;
    std::size_t cells = 1;
    for (auto e : s.h.box().extents) cells *= static_cast<std::size_t>(e + 2);
    if (cells > cfg.cell_budget) throw ResourceLimitError("sandwich: cell budget exhausted at tau " +
                                                          std::to_string(s.tau));
    s = advance_sandwich(s);
  }
  csv.close();
  json j;
  j["params"] = params_json(cfg.params);
  j["horizon"] = cfg.horizon;
  j["last_tau"] = s.tau;
  j["blowup_tau"] = optional_json(blowup_tau);
  j["sandwich_ok"] = all_ok;
  j["first_failure"] = all_ok ? json(nullptr) : json(first_failure);
  outputs.write_json("summary.json", j);
  out << "sandwich " << (all_ok ? "ok" : "FAILED: " + first_failure) << " through tau " << s.tau << "\n";
  return all_ok ? kExitOk : kExitVerificationFailed;
}

// --- kernel ---------------------------------------------------------------------

int cmd_kernel(const Config& cfg, Outputs& outputs, std::ostream& out) {
  const KernelAsymReport r = kernel_asymptotics_report(cfg.params.d, cfg.max_tau, cfg.cell_budget);
  {
    auto csv = outputs.open("kernel_asym.csv");
    csv << "tau,u_at_origin,l1_sum,ratio_paper_const,ratio_clt_const\n";
    for (const auto& row : r.rows)
      csv << row.tau << ',' << format_real(row.u_origin) << ',' << format_real(row.l1_sum) << ','
          << real_or_empty(row.ratio_4pi) << ',' << real_or_empty(row.ratio_clt) << '\n';
  }
  const KernelAsymRow& last = r.rows.back();
  json j;
  j["d"] = r.d;
  j["max_tau"] = r.max_tau;
  j["constant_4pi"] = r.constant_4pi;
  j["constant_clt"] = r.constant_clt;
  j["tail_change"] = r.tail_change;
  j["converged"] = r.converged;
  j["max_mass_error"] = r.max_mass_error;
  j["last_ratio_4pi"] = real_or_null(last.ratio_4pi);
  j["last_ratio_clt"] = real_or_null(last.ratio_clt);
  outputs.write_json("summary.json", j);
  out << "kernel d=" << r.d << " max_tau=" << r.max_tau << " tail_change=" << format_real(r.tail_change)
      << " ratio_clt=" << real_or_empty(last.ratio_clt) << " ratio_4pi=" << real_or_empty(last.ratio_4pi)
      << "\n";
  return kExitOk;
}

// --- sweep ----------------------------------------------------------------------

int cmd_sweep(const Config& cfg, Outputs& outputs, std::ostream& out) {
  SweepSpec spec;
  spec.d = cfg.params.d;
  spec.alphas = cfg.alphas;
  spec.epsilons = cfg.epsilons;
  spec.horizon = cfg.horizon;
  spec.init_shape = cfg.init_shape;
  spec.box_width = cfg.box_width;
  spec.cell_budget = cfg.cell_budget;
  spec.threads = cfg.threads;
  const SweepResult r = fujita_sweep(spec);

  bool budget_hit = false;
  {
    auto csv = outputs.open("sweep.csv");
    csv << "alpha,epsilon,outcome,blowup_tau,final_l1,peak_sup_g,sub_bound_tau,super_certificate\n";
    for (const auto& c : r.cells) {
      if (c.outcome == Outcome::BudgetExhausted) budget_hit = true;
      csv << format_real(c.alpha) << ',' << format_real(c.epsilon) << ',' << to_string(c.outcome) << ','
          << (c.blowup_tau ? std::to_string(*c.blowup_tau) : "") << ',' << format_real(c.final_l1) << ','
          << format_real(c.peak_sup_g) << ',' << (c.sub_bound_tau ? std::to_string(*c.sub_bound_tau) : "") << ','
          << to_string(c.super_certificate) << '\n';
    }
  }
  bool monotone = true;
  json j;
  j["monotone_in_epsilon"] = json::array();
  for (const auto& [alpha, ok] : r.monotone_in_epsilon) {
    monotone = monotone && ok;
    j["monotone_in_epsilon"].push_back({{"alpha", alpha}, {"ok", ok}});
  }
  j["phase_boundary"] = json::array();
  for (const auto& b : r.boundaries)
    j["phase_boundary"].push_back({{"epsilon", b.epsilon},
                                   {"largest_alpha_blown_up", optional_json(b.largest_alpha_blown_up)},
                                   {"smallest_alpha_survived", optional_json(b.smallest_alpha_survived)}});
  j["cells"] = json::array();
  for (const auto& c : r.cells)
    j["cells"].push_back({{"alpha", c.alpha},
                          {"epsilon", c.epsilon},
                          {"m_prefix", c.m_prefix},
                          {"m_tail_estimate", real_or_null(c.m_tail_estimate)},
                          {"error", c.error.empty() ? json(nullptr) : json(c.error)}});
  outputs.write_json("summary.json", j);
  out << "sweep " << r.cells.size() << " cells, monotone in epsilon: " << (monotone ? "yes" : "NO") << "\n";
  if (!monotone) return kExitVerificationFailed;
  return budget_hit ? kExitBudget : kExitOk;
}

// --- critical -------------------------------------------------------------------

int cmd_critical(const Config& cfg, Outputs& outputs, std::ostream& out) {
  const CriticalReport r =
      critical_case_study(cfg.params.d, cfg.epsilons, cfg.horizon, cfg.cell_budget, cfg.stop_at_exceedance);
  bool budget_hit = false;
  {
    auto csv = outputs.open("critical.csv");
    csv << "epsilon,event,blowup_tau,exceed_tau_4pi,exceed_tau_clt,last_tau,max_l1\n";
    const auto opt = [](const std::optional<std::int64_t>& t) { return t ? std::to_string(*t) : std::string(); };
    for (const auto& c : r.cases)
      csv << format_real(c.epsilon) << ',' << to_string(c.event) << ',' << opt(c.blowup_tau) << ','
          << opt(c.exceed_tau_4pi) << ',' << opt(c.exceed_tau_clt) << ',' << c.last_tau << ','
          << format_real(c.max_l1) << '\n';
  }
  {
    auto csv = outputs.open("critical_trajectory.csv");
    csv << "epsilon,tau,l1_f,sup_f,exceeds_4pi_bound,exceeds_clt_bound\n";
    for (const auto& c : r.cases)
      for (const auto& s : c.trajectory)
        csv << format_real(c.epsilon) << ',' << s.tau << ',' << format_real(s.l1) << ',' << format_real(s.sup_f)
            << ',' << (s.l1 > r.bound_4pi ? 1 : 0) << ',' << (s.l1 > r.bound_clt ? 1 : 0) << '\n';
  }
  json j;
  j["d"] = r.d;
  j["alpha"] = r.alpha;
  j["horizon"] = r.horizon;
  j["bound_4pi"] = r.bound_4pi;
  j["bound_clt"] = r.bound_clt;
  j["cases"] = json::array();
  for (const auto& c : r.cases) {
    if (c.event == CriticalEvent::BudgetExhausted) budget_hit = true;
    j["cases"].push_back({{"epsilon", c.epsilon},
                          {"event", std::string(to_string(c.event))},
                          {"blowup_tau", optional_json(c.blowup_tau)},
                          {"exceed_tau_4pi", optional_json(c.exceed_tau_4pi)},
                          {"exceed_tau_clt", optional_json(c.exceed_tau_clt)},
                          {"last_tau", c.last_tau},
                          {"max_l1", c.max_l1}});
    out << "epsilon " << format_real(c.epsilon) << ": " << to_string(c.event) << " (last tau " << c.last_tau
        << ")\n";
  }
  outputs.write_json("summary.json", j);
  return budget_hit ? kExitBudget : kExitOk;
}

// --- verify ---------------------------------------------------------------------

Field random_small_field(std::mt19937_64& rng, int max_support, double max_value) {
  std::uniform_int_distribution<int> count(1, max_support);
  std::uniform_int_distribution<std::int64_t> site(-max_support, max_support);
  std::uniform_real_distribution<double> value(0.0, max_value);
  std::vector<std::pair<Coord, double>> sites;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) sites.push_back({Coord{site(rng)}, max_value - value(rng)});
  return Field::from_sites(1, sites);
}

SuiteResult kernel_suite() {
  SuiteResult r{"kernel_mass_parity", 0, 0, 0.0, {}};
  for (int d = 1; d <= 3; ++d) {
    const KernelTable t = build_kernel(d, 40);
    for (std::int64_t tau = 0; tau <= t.max_tau; ++tau) {
      const Field& u = t.slice(tau);
      const double err = std::abs(l1_norm(u) - 1.0);
      bool parity_ok = true;
      u.for_each([&](std::span<const std::int64_t> n, double v) {
        std::int64_t s = tau;
        for (auto c : n) s += c;
        if ((s & 1) != 0 && v != 0.0) parity_ok = false;
      });
      ++r.samples;
      if (err > 1e-12 || !parity_ok) ++r.violations;
      if (-err < r.worst_margin) {
        r.worst_margin = -err;
        r.worst_case = "d=" + std::to_string(d) + " tau=" + std::to_string(tau);
      }
    }
  }
  return r;
}

SuiteResult sandwich_suite(std::uint64_t seed) {
  SuiteResult r{"sandwich", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  const double alphas[] = {0.5, 1.0, 3.0};
  for (int i = 0; i < 10; ++i) {
    Params p;
    p.alpha = alphas[i % 3];
    SandwichState s = init_sandwich(p, random_small_field(rng, 5, 0.1));
    bool ok = true;
    std::string msg;
    for (;;) {
      const SandwichReport rep = check_sandwich(s);
      if (!rep.ok) {
        ok = false;
        msg = rep.message;
        break;
      }
      if (!s.f.alive() || s.tau == 100) break;
      s = advance_sandwich(s);
    }
    ++r.samples;
    if (!ok) {
      ++r.violations;
      r.worst_margin = -1.0;
      r.worst_case = msg;
    }
  }
  return r;
}

SuiteResult duhamel_suite(std::uint64_t seed) {
  SuiteResult r{"duhamel", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  const KernelTable kernel = build_kernel(1, 30);
  for (int i = 0; i < 5; ++i) {
    Params p;
    p.alpha = 1.0 + i * 0.5;
    RunOptions opts;
    opts.capture_history = true;
    const Field f0 = random_small_field(rng, 5, 0.1);
    const RunRecord rec = run(p, f0, 30, opts);
    if (rec.outcome != Outcome::SurvivedHorizon) continue;
    const Field rebuilt = duhamel_reconstruct(kernel, f0, rec.g_history, rec.outcome_tau, p.alpha);
    const double rel = max_abs(add(rebuilt, rec.final_f, -1.0)) / max_abs(rec.final_f);
    ++r.samples;
    if (rel > 1e-9) ++r.violations;
    if (-rel < r.worst_margin) {
      r.worst_margin = -rel;
      r.worst_case = "instance " + std::to_string(i);
    }
  }
  return r;
}

int cmd_verify(const Config& cfg, Outputs& outputs, std::ostream& out) {
  std::vector<SuiteResult> suites = run_all_suites(cfg.seed, cfg.samples);
  suites.push_back(kernel_suite());
  suites.push_back(sandwich_suite(cfg.seed + 3));
  suites.push_back(duhamel_suite(cfg.seed + 4));

  bool ok = true;
  json j;
  j["seed"] = cfg.seed;
  j["suites"] = json::array();
  for (const auto& s : suites) {
    ok = ok && s.violations == 0;
    j["suites"].push_back({{"name", s.name},
                           {"samples", s.samples},
                           {"violations", s.violations},
                           {"worst_margin", s.worst_margin},
                           {"worst_case", s.worst_case}});
    out << (s.violations == 0 ? "PASS " : "FAIL ") << s.name << " samples=" << s.samples
        << " violations=" << s.violations << " worst_margin=" << format_real(s.worst_margin) << "\n";
  }
  j["ok"] = ok;
  outputs.write_json("verify.json", j);
  return ok ? kExitOk : kExitVerificationFailed;
}

// --- flag plumbing ----------------------------------------------------------------

struct FlagValues {
  std::string config_path;
  unsigned threads = 1;
  std::size_t cell_budget = 0;
  std::string out;
  std::uint64_t seed = 0;
  int d = 1;
  double alpha = 1.0;
  std::string variant;
  double delta = 0.0;
  double lambda = 0.0;
  std::string init;
  std::int64_t horizon = 0;
  std::int64_t dump_every = 0;
  std::int64_t max_tau = 0;
  std::vector<double> alphas;
  std::vector<double> epsilons;
  std::string init_shape;
  std::int64_t box_width = 1;
  bool stop_at_exceedance = false;
  std::int64_t samples = 0;
};

struct Override {
  CLI::Option* option;
  std::function<void(Config&)> apply;
};

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete semilinear heat equation simulator and verifier", "dsheat"};
  app.require_subcommand(1);
  FlagValues v;
  std::vector<Override> overrides;

  app.add_option("--config", v.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  overrides.push_back({app.add_option("--threads", v.threads, "worker threads")->check(CLI::PositiveNumber),
                       [&](Config& c) { c.threads = v.threads; }});
  overrides.push_back({app.add_option("--cell-budget", v.cell_budget, "maximum cells per field"),
                       [&](Config& c) { c.cell_budget = v.cell_budget; }});
  overrides.push_back({app.add_option("--out", v.out, "output path prefix"), [&](Config& c) { c.out = v.out; }});
  overrides.push_back({app.add_option("--seed", v.seed, "seed for property suites"),
                       [&](Config& c) { c.seed = v.seed; }});

  auto add_problem = [&](CLI::App* sub, bool with_init) {
    overrides.push_back({sub->add_option("--d", v.d, "lattice dimension"), [&](Config& c) { c.params.d = v.d; }});
    if (!with_init) return;
    overrides.push_back(
        {sub->add_option("--alpha", v.alpha, "nonlinearity exponent"), [&](Config& c) { c.params.alpha = v.alpha; }});
    overrides.push_back({sub->add_option("--variant", v.variant, "standard|signed|naive"),
                         [&](Config& c) { c.params.variant = parse_variant(v.variant); }});
    overrides.push_back({sub->add_option("--delta", v.delta, "scaled-form step, or naive time step"),
                         [&](Config& c) { c.params.delta = v.delta; }});
    overrides.push_back({sub->add_option("--lambda", v.lambda, "naive delta/xi^2"),
                         [&](Config& c) { c.params.naive_lambda = v.lambda; }});
    overrides.push_back({sub->add_option("--init", v.init, "delta:EPS | box:W:VAL | file:PATH"),
                         [&](Config& c) { c.init = v.init; }});
    overrides.push_back(
        {sub->add_option("--horizon", v.horizon, "last step"), [&](Config& c) { c.horizon = v.horizon; }});
  };

  CLI::App* run_cmd = app.add_subcommand("run", "evolve one initial field");
  add_problem(run_cmd, true);
  overrides.push_back({run_cmd->add_option("--dump-every", v.dump_every, "snapshot every N steps"),
                       [&](Config& c) { c.dump_every = v.dump_every; }});

  CLI::App* sandwich_cmd = app.add_subcommand("sandwich", "track sub- and supersolutions alongside a run");
  add_problem(sandwich_cmd, true);

  CLI::App* kernel_cmd = app.add_subcommand("kernel", "heat kernel normalization and asymptotics");
  add_problem(kernel_cmd, false);
  overrides.push_back(
      {kernel_cmd->add_option("--max-tau", v.max_tau, "last kernel step"), [&](Config& c) { c.max_tau = v.max_tau; }});

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "blow-up sweep over alpha and initial size");
  add_problem(sweep_cmd, false);
  overrides.push_back({sweep_cmd->add_option("--alphas", v.alphas, "exponents")->delimiter(','),
                       [&](Config& c) { c.alphas = v.alphas; }});
  overrides.push_back({sweep_cmd->add_option("--epsilons", v.epsilons, "initial sizes")->delimiter(','),
                       [&](Config& c) { c.epsilons = v.epsilons; }});
  overrides.push_back({sweep_cmd->add_option("--horizon", v.horizon, "last step"),
                       [&](Config& c) { c.horizon = v.horizon; }});
  overrides.push_back({sweep_cmd->add_option("--init-shape", v.init_shape, "point|box"),
                       [&](Config& c) { c.init_shape = parse_init_shape(v.init_shape); }});
  overrides.push_back({sweep_cmd->add_option("--box-width", v.box_width, "box side for --init-shape box"),
                       [&](Config& c) { c.box_width = v.box_width; }});

  CLI::App* critical_cmd = app.add_subcommand("critical", "l1 tracking at alpha = 2/d");
  add_problem(critical_cmd, false);
  overrides.push_back({critical_cmd->add_option("--epsilons", v.epsilons, "initial sizes")->delimiter(','),
                       [&](Config& c) { c.epsilons = v.epsilons; }});
  overrides.push_back({critical_cmd->add_option("--horizon", v.horizon, "last step"),
                       [&](Config& c) { c.horizon = v.horizon; }});
  overrides.push_back({critical_cmd->add_flag("--stop-at-exceedance", v.stop_at_exceedance,
                                              "end each run once the l1 bound is exceeded"),
                       [&](Config& c) { c.stop_at_exceedance = v.stop_at_exceedance; }});

  CLI::App* verify_cmd = app.add_subcommand("verify", "run every property suite");
  overrides.push_back({verify_cmd->add_option("--samples", v.samples, "samples per inequality suite"),
                       [&](Config& c) { c.samples = v.samples; }});

  for (CLI::App* sub : {run_cmd, sandwich_cmd, kernel_cmd, sweep_cmd, critical_cmd, verify_cmd}) sub->fallthrough();

  try {
    std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rev.begin(), rev.end());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  Config cfg;
  std::string command;
  try {
    if (!v.config_path.empty()) cfg = load_config_file(v.config_path);
    for (const auto& o : overrides)
      if (o.option->count() > 0) o.apply(cfg);
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  Outputs outputs(cfg.out);
  int code = kExitOk;
  try {
    if (run_cmd->parsed()) {
      command = "run";
      code = cmd_run(cfg, outputs, out);
    } else if (sandwich_cmd->parsed()) {
      command = "sandwich";
      code = cmd_sandwich(cfg, outputs, out);
    } else if (kernel_cmd->parsed()) {
      command = "kernel";
      code = cmd_kernel(cfg, outputs, out);
    } else if (sweep_cmd->parsed()) {
      command = "sweep";
      code = cmd_sweep(cfg, outputs, out);
    } else if (critical_cmd->parsed()) {
      command = "critical";
      code = cmd_critical(cfg, outputs, out);
    } else {
      command = "verify";
      code = cmd_verify(cfg, outputs, out);
    }
  } catch (const ResourceLimitError& e) {
    err << "budget exhausted: " << e.what() << "\n";
    code = kExitBudget;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  outputs.write_manifest(command, cfg);
  return code;
}

}  // namespace dsheat
