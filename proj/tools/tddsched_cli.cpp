// Command-line front end: run one scenario or sweep a parameter, export
// per-seed and aggregate metrics as CSV or JSON.

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tddsched/config.hpp"
#include "tddsched/errors.hpp"
#include "tddsched/export.hpp"
#include "tddsched/sweep.hpp"

namespace {

using namespace tddsched;

struct Overrides {
  std::string config_path;
  std::optional<double> fixed_tti;
  std::vector<std::uint64_t> seeds;
  std::optional<double> horizon;
  std::optional<double> eta;
  std::optional<double> beta_mcc;
  std::optional<double> budget;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--fixed-tti", o.fixed_tti, "restrict to one TTI length [s]");
  cmd->add_option("--seeds", o.seeds, "seed list, e.g. --seeds 1 2 3")->delimiter(',');
  cmd->add_option("--horizon", o.horizon, "simulated time per seed [s]");
  cmd->add_option("--eta", o.eta, "MCC arrival rate per UE [packets/s]");
  cmd->add_option("--beta-mcc", o.beta_mcc, "MCC latency weight");
  cmd->add_option("--budget", o.budget, "MCC latency budget [s]");
  cmd->add_option("-o,--out", o.out, "results file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

SimConfig resolve(const Overrides& o, std::vector<std::string>* defaults = nullptr) {
  ParsedConfig parsed = o.config_path.empty() ? parse_config_text("{}") : parse_config(o.config_path);
  SimConfig& c = parsed.config;
  std::vector<std::string> overridden;
  auto set = [&](bool given, const char* key, auto& field, const auto& value) {
    if (!given) return;
    field = value;
    overridden.push_back(key);
  };
  set(o.fixed_tti.has_value(), "fixed_tti", c.fixed_tti, o.fixed_tti);
  set(!o.seeds.empty(), "seeds", c.seeds, o.seeds);
  set(o.horizon.has_value(), "horizon", c.horizon, o.horizon.value_or(0.0));
  set(o.eta.has_value(), "traffic.eta", c.traffic.eta, o.eta.value_or(0.0));
  set(o.beta_mcc.has_value(), "traffic.weights.beta_mcc", c.traffic.mcc_weights.beta, o.beta_mcc.value_or(0.0));
  set(o.budget.has_value(), "traffic.mcc_latency_budget", c.traffic.mcc_latency_budget, o.budget.value_or(0.0));
  set(!o.out.empty(), "output.path", c.output_path, o.out);
  set(!o.format.empty(), "output.format", c.output_format, o.format);
  c.validate();
  if (defaults) {
    for (const auto& k : parsed.defaults_applied) {
      if (std::find(overridden.begin(), overridden.end(), k) == overridden.end()) defaults->push_back(k);
    }
  }
  return c;
}

void emit(const ResultTable& table, const SimConfig& c) {
  if (c.output_path.empty()) {
    std::cout << (c.output_format == "json" ? table_to_json(table) : table_to_csv(table));
  } else {
    write_table(table, c.output_format, c.output_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic TDD scheduler simulator with scalable TTI"};
  app.require_subcommand(1);

  Overrides run_opts;
  std::string trace_path;
  std::string cdf_path;
  double cdf_step = 0.05e-3;
  double cdf_max = 5e-3;
  auto* run_cmd = app.add_subcommand("run", "simulate one scenario over all seeds");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--trace", trace_path, "per-TTI trace CSV (first seed only)");
  run_cmd->add_option("--cdf-out", cdf_path, "MCC delay CDF pooled over seeds");
  run_cmd->add_option("--cdf-step", cdf_step, "CDF grid step [s]");
  run_cmd->add_option("--cdf-max", cdf_max, "CDF grid end [s]");

  Overrides sweep_opts;
  std::string param;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "vary one parameter over a value list");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--param", param, "eta, beta_mcc, latency_budget or fixed_tti")->required();
  sweep_cmd->add_option("--values", values, "comma separated values (fixed_tti 0 = scalable)")
      ->required()
      ->delimiter(',');

  Overrides show_opts;
  auto* show_cmd = app.add_subcommand("show-config", "print the resolved configuration");
  add_common(show_cmd, show_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) {
      const SimConfig c = resolve(run_opts);
      if (!trace_path.empty()) {
        TraceWriter writer(trace_path, config_hash(c), c.tau, c.channel.bandwidth);
        run(c, c.seeds.front(), std::ref(writer));
      }
      const ScenarioResult res = run_scenario(c);
      emit(res.table, c);
      if (!cdf_path.empty()) {
        if (!(cdf_step > 0) || !(cdf_max > 0)) throw ConfigError("CDF grid step and end must be > 0");
        MetricsRecord pooled;
        for (const auto& m : res.metrics) {
          pooled.packets.insert(pooled.packets.end(), m.packets.begin(), m.packets.end());
        }
        std::vector<double> grid;
        for (int k = 0; k * cdf_step <= cdf_max * (1 + 1e-12); ++k) grid.push_back(k * cdf_step);
        write_cdf(delay_cdf(pooled, grid), res.table.config_hash,
                  c.output_format, cdf_path);
      }
    } else if (*sweep_cmd) {
      const SimConfig c = resolve(sweep_opts);
      SweepSpec spec{parse_sweep_param(param), values};
      emit(run_sweep(c, spec), c);
    } else if (*show_cmd) {
      std::vector<std::string> defaults;
      const SimConfig c = resolve(show_opts, &defaults);
      std::cout << canonical_config(c) << "\n";
      std::cout << "config_hash " << config_hash(c) << "\n";
      for (const auto& k : defaults) std::cout << "default " << k << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "tddsched_cli: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
