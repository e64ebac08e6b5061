#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saginopt/cached_solver.hpp"
#include "saginopt/config_io.hpp"
#include "saginopt/fading.hpp"
#include "saginopt/harness.hpp"
#include "saginopt/noncached_solver.hpp"
#include "saginopt/optcore.hpp"

namespace {

using namespace saginopt;

int cmd_run(const std::string& config_path, const std::string& out_path,
            const std::string& summary_path) {
  ExperimentConfig config = experiment_from_file(config_path);
  std::vector<ResultRow> rows = ::saginopt::run(config);
  write_csv(rows, out_path);
  if (!summary_path.empty()) {
    std::ofstream out(summary_path);
    if (!out)
      throw std::runtime_error("cannot open output file '" + summary_path + "'");
    out << "experiment,sweep,scheme,mean_delay_s,stderr_s,seeds\n";
    out.precision(12);
    for (const auto& s : aggregate(rows))
      out << s.experiment << ',' << s.sweep << ',' << s.scheme << ','
          << s.mean_delay_s << ',' << s.stderr_s << ',' << s.seeds << '\n';
  }
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return 0;
}

int cmd_per(const std::string& out_path, int packet_bits, double db_lo,
            double db_hi, double db_step) {
  std::ofstream out(out_path);
  if (!out)
    throw std::runtime_error("cannot open output file '" + out_path + "'");
  const std::vector<PerModel> models = {
      ils_model(packet_bits), fhs_model(packet_bits), as_model(packet_bits),
      loo_model(packet_bits)};
  out << "scenario,snr_db,per_bound\n";
  out.precision(10);
  for (const PerModel& model : models)
    for (double db = db_lo; db <= db_hi + 1e-9; db += db_step)
      out << model.label << ',' << db << ','
          << per_upper_bound(db_to_linear(db), model) << '\n';
  std::cout << "wrote PER bounds to " << out_path << "\n";
  return 0;
}

int cmd_trace(const std::string& problem, const std::string& config_path,
              const std::string& out_path) {
  ScenarioSpec spec =
      config_path.empty() ? default_scenario() : scenario_from_file(config_path);
  const CachePlacement cache = place_cache(spec);
  std::ofstream out(out_path);
  if (!out)
    throw std::runtime_error("cannot open output file '" + out_path + "'");
  for (int t = 0; t < spec.num_slots; ++t) {
    NodePositions pos = propagate(spec, t);
    TimeSlotTopology topo = build_topology(pos, spec);
    topo.cache = cache;
    SlotProblems problems =
        build_slot_problems(spec, topo, generate_requests(spec, t));
    if (problem == "cached") {
      if (problems.cached.requesters.empty()) continue;
      AssociationSolution sol = epm_associate(problems.cached);
      out << "iteration,objective_s,residual,epsilon\n";
      out.precision(12);
      for (const auto& it : sol.trace)
        out << it.iteration << ',' << it.objective_s << ',' << it.residual
            << ',' << it.epsilon << '\n';
    } else {
      if (problems.noncached.case2.empty()) continue;
      NonCachedSolution sol = ao_solve(problems.noncached);
      out << "iteration,objective_s\n";
      out.precision(12);
      for (const auto& it : sol.outer_trace)
        out << it.iteration << ',' << it.objective_s << '\n';
    }
    std::cout << "wrote " << problem << " trace (slot " << t << ") to "
              << out_path << "\n";
    return 0;
  }
  std::cerr << "no slot produced a " << problem << " instance\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-air-ground content delivery simulator and solvers"};
  app.require_subcommand(1);

  std::string config_path, out_path, summary_path;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment sweep");
  run_cmd->add_option("--config", config_path, "experiment JSON")->required();
  run_cmd->add_option("--out", out_path, "output CSV path")->required();
  run_cmd->add_option("--summary", summary_path,
                      "optional per-sweep summary CSV");

  std::string per_out;
  int packet_bits = 1023;
  double db_lo = 0.0, db_hi = 24.0, db_step = 0.5;
  auto* per_cmd =
      app.add_subcommand("per", "Emit packet-error-rate bound curves");
  per_cmd->add_option("--out", per_out, "output CSV path")->required();
  per_cmd->add_option("--packet-bits", packet_bits, "packet length in bits");
  per_cmd->add_option("--from-db", db_lo, "grid start, dB");
  per_cmd->add_option("--to-db", db_hi, "grid end, dB");
  per_cmd->add_option("--step-db", db_step, "grid step, dB");

  std::string trace_problem, trace_config, trace_out;
  auto* trace_cmd =
      app.add_subcommand("trace", "Dump one solver convergence trace");
  trace_cmd->add_option("--problem", trace_problem, "cached or noncached")
      ->required()
      ->check(CLI::IsMember({"cached", "noncached"}));
  trace_cmd->add_option("--config", trace_config, "scenario JSON (optional)");
  trace_cmd->add_option("--out", trace_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, out_path, summary_path);
    if (per_cmd->parsed())
      return cmd_per(per_out, packet_bits, db_lo, db_hi, db_step);
    if (trace_cmd->parsed())
      return cmd_trace(trace_problem, trace_config, trace_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
