#include "inputsafe/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "inputsafe/config.hpp"
#include "inputsafe/error.hpp"
#include "inputsafe/scenario.hpp"
#include "inputsafe/sim.hpp"
#include "inputsafe/trace_io.hpp"

namespace inputsafe {

namespace {

constexpr double kSafetyTol = 1e-6;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scenario resolve_scenario(const std::string& name_or_path) {
  const auto names = builtin_scenario_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return builtin_scenario(name_or_path);
  }
  if (std::filesystem::is_regular_file(name_or_path)) {
    std::ifstream in(name_or_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
  }
  throw UsageError("unknown scenario '" + name_or_path + "'");
}

struct Overrides {
  std::optional<double> dt;
  std::optional<double> horizon;
  bool zoh = false;
};

void apply(Scenario& s, const Overrides& o) {
  if (o.horizon) s.run.horizon = *o.horizon;
  if (o.dt) s.run.dt = *o.dt;
  if (o.zoh) s.run.zoh = true;
  validate(s);
}

bool is_safe(const RunResult& r) {
  return !r.blowup && r.stats.n_infeasible == 0 && r.stats.min_h >= -kSafetyTol;
}

RunReport report_for(const Scenario& s, const RunResult& r, const std::string& csv) {
  RunReport rep = summarize(r.trace);
  rep.scenario = s.name;
  rep.variant = to_string(s.variant);
  rep.wall_time = r.wall_time;
  rep.csv_path = csv;
  return rep;
}

int cmd_run(const std::string& scenario_arg, const std::string& variant, const Overrides& o,
            std::string out_path, std::ostream& out, std::ostream& err) {
  Scenario s = resolve_scenario(scenario_arg);
  if (!variant.empty()) s.variant = parse_variant(variant);
  apply(s, o);
  if (out_path.empty()) out_path = "out/" + s.name + "_" + to_string(s.variant) + ".csv";

  const RunResult r = run(s);
  write_trace_csv(out_path, r.trace);
  out << report_for(s, r, out_path).to_line() << '\n';
  if (r.stats.n_kappa_rate_warnings > 0) {
    err << "warning: |dkappa/dt| exceeded pi_kappa on " << r.stats.n_kappa_rate_warnings
        << " steps (max " << format_double(r.stats.max_kappa_rate) << ")\n";
  }
  if (r.blowup) {
    err << "error: " << *r.blowup << '\n';
    return kExitBlowup;
  }
  return r.stats.n_infeasible > 0 ? kExitInfeasible : kExitOk;
}

int cmd_compare(const std::string& scenario_arg, const std::vector<std::string>& variants,
                const Overrides& o, const std::string& dir, std::ostream& out, std::ostream& err) {
  if (variants.empty()) throw UsageError("--variants must list at least one variant");
  const Scenario base = resolve_scenario(scenario_arg);
  std::vector<Scenario> runs;
  for (const auto& v : variants) {
    Scenario s = base;
    s.variant = parse_variant(v);
    apply(s, o);
    runs.push_back(std::move(s));
  }

  const auto results = run_many(runs);

  std::filesystem::create_directories(dir);
  std::ofstream summary(std::filesystem::path(dir) / "summary.csv", std::ios::binary);
  summary << "variant,min_h,final_x_norm,n_infeasible\n";
  int code = kExitOk;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& s = runs[i];
    const auto& r = results[i];
    const std::string csv =
        (std::filesystem::path(dir) / (s.name + "_" + to_string(s.variant) + ".csv")).string();
    write_trace_csv(csv, r.trace);
    const RunReport rep = report_for(s, r, csv);
    out << rep.to_line() << '\n';
    summary << rep.variant << ',' << format_double(rep.min_h) << ','
            << format_double(rep.final_x_norm) << ',' << rep.n_infeasible << '\n';
    if (r.blowup) err << "error: " << rep.variant << ": " << *r.blowup << '\n';
    if (s.variant == Variant::Proposed && !is_safe(r)) {
      code = r.blowup ? kExitBlowup : kExitInfeasible;
    }
  }
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Input-constrained safety filter simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string variant;
  std::string out_path;
  std::string variants_csv;
  std::optional<long long> seed;
  Overrides o;

  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write a CSV trace");
  run_cmd->add_option("--scenario", scenario, "Builtin name or config file")->required();
  run_cmd->add_option("--variant", variant, "proposed | nominal | clf-only");
  run_cmd->add_option("--dt", o.dt, "Step size override");
  run_cmd->add_option("--T", o.horizon, "Horizon override");
  run_cmd->add_option("--out", out_path, "CSV path (default out/<scenario>_<variant>.csv)");
  run_cmd->add_flag("--zoh", o.zoh, "Hold v constant over each step");
  run_cmd->add_option("--seed-unused", seed, "Reserved; rejected if set");

  auto* cmp_cmd = app.add_subcommand("compare", "Run several variants and write summary.csv");
  cmp_cmd->add_option("--scenario", scenario, "Builtin name or config file")->required();
  cmp_cmd->add_option("--variants", variants_csv, "Comma separated variants")->required();
  cmp_cmd->add_option("--out", out_path, "Output directory (default out)");
  cmp_cmd->add_option("--dt", o.dt, "Step size override");
  cmp_cmd->add_option("--T", o.horizon, "Horizon override");
  cmp_cmd->add_flag("--zoh", o.zoh, "Hold v constant over each step");

  auto* dump_cmd = app.add_subcommand("dump", "Print a scenario as config text");
  dump_cmd->add_option("--scenario", scenario, "Builtin name or config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) {
      if (seed) throw UsageError("--seed-unused is reserved: the simulator is deterministic");
      return cmd_run(scenario, variant, o, out_path, out, err);
    }
    if (*cmp_cmd) {
      std::vector<std::string> variants;
      std::stringstream ss(variants_csv);
      for (std::string v; std::getline(ss, v, ',');) {
        if (!v.empty()) variants.push_back(v);
      }
      return cmd_compare(scenario, variants, o, out_path.empty() ? "out" : out_path, out, err);
    }
    out << to_config_text(resolve_scenario(scenario));
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::NumericalBlowup ? kExitBlowup : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace inputsafe
