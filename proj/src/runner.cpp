#include "nsns/runner.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace nsns {

namespace {

std::string level_label(int n) { return std::to_string(n) + "x" + std::to_string(n); }

PhysicalParams cavity_params(const RunConfig& c) {
  PhysicalParams p;
  p.nu = c.re > 0.0 ? 1.0 / c.re : c.nu;
  p.beta = c.beta;
  p.gamma = c.gamma;
  return p;
}

void ensure_out_dir(const RunConfig& c) { std::filesystem::create_directories(c.out_dir); }

std::string out_path(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

}  // namespace

RateTable make_rate_table(const std::vector<ConvergenceRow>& rows) {
  RateTable t;
  for (size_t i = 0; i < rows.size(); ++i) {
    RateRow r;
    r.mesh_label = level_label(rows[i].level);
    r.dof = rows[i].dof;
    r.newton_its = rows[i].newton_iterations;
    r.p_l2 = rows[i].errors.pressure_l2;
    r.u_h1 = rows[i].errors.velocity_h1;
    r.u_l2 = rows[i].errors.velocity_l2;
    r.slip = rows[i].errors.slip;
    if (i > 0) {
      r.has_rates = true;
      r.rate_p = std::log2(rows[i - 1].errors.pressure_l2 / rows[i].errors.pressure_l2);
      r.rate_h1 = std::log2(rows[i - 1].errors.velocity_h1 / rows[i].errors.velocity_h1);
      r.rate_l2 = std::log2(rows[i - 1].errors.velocity_l2 / rows[i].errors.velocity_l2);
    }
    t.rows.push_back(r);
  }
  return t;
}

RateTable run_convergence(const RunConfig& config) {
  std::vector<int> levels = config.levels;
  if (levels.empty()) levels = {8, 16, 32, 64, 128};
  PhysicalParams params{config.nu, config.beta, config.gamma};
  RateTable table = make_rate_table(run_manufactured_convergence(levels, params));
  ensure_out_dir(config);
  write_rate_csv(out_path(config, "convergence.csv"), table);
  return table;
}

CavityResult run_cavity(const RunConfig& config) {
  const int n = config.mesh_n > 0 ? config.mesh_n : 32;
  Mesh mesh = generate_structured_square(n, {0.0, 0.0}, {1.0, 1.0}, cavity_tagger());
  MixedSpace space = build_taylor_hood(mesh);
  PhysicalParams params = cavity_params(config);
  ensure_out_dir(config);

  CavityResult result;
  if (config.problem == "cavity_steady") {
    SteadyProblem problem;
    problem.params = params;
    problem.dirichlet = cavity_lid();
    auto [state, report] = solve_navier_stokes(space, problem);
    result.newton = report;
    result.state = state;
    if (!report.converged)
      throw SolverError("steady cavity Newton did not converge at Re = " +
                        std::to_string(config.re > 0 ? config.re : 1.0 / params.nu) +
                        "; use problem = cavity_unsteady for high Reynolds numbers");
    write_vtk(out_path(config, "cavity.vtk"), space, state);
    write_raw_state(out_path(config, "cavity.state"), state);
    return result;
  }

  result.steady = false;
  UnsteadyProblem problem;
  problem.params = params;
  VectorField lid = cavity_lid();
  problem.dirichlet = [lid](Point2 p, double) { return lid(p); };
  TimeConfig tc;
  tc.dt = config.dt > 0 ? config.dt : 0.035;
  tc.t_end = config.t_end > 0 ? config.t_end : 35.0;
  tc.sigma = config.sigma;
  tc.c_tilde = config.c_tilde;

  std::ofstream diag(out_path(config, "diagnostics.csv"), std::ios::binary);
  diag << diagnostics_csv_header();
  auto on_step = [&](const StepDiagnostics& d, const SolutionState& st) {
    diag << format_diagnostics_row(d);
    if (config.snapshot_every > 0 && d.step % config.snapshot_every == 0) {
      std::string tag = "cavity_" + std::to_string(d.step);
      write_vtk(out_path(config, tag + ".vtk"), space, st);
      write_raw_state(out_path(config, tag + ".state"), st);
    }
  };
  UnsteadyResult ur = run_unsteady(space, problem, tc, on_step);
  result.diagnostics = ur.diagnostics;
  result.state = ur.final_state;
  write_vtk(out_path(config, "cavity_final.vtk"), space, ur.final_state);
  write_raw_state(out_path(config, "cavity_final.state"), ur.final_state);
  return result;
}

SolutionState run_custom(const RunConfig& config) {
  if (config.mesh_file.empty()) throw std::invalid_argument("custom problem requires mesh.file");
  Mesh mesh = load_mesh(read_text_file(config.mesh_file));
  MixedSpace space = build_taylor_hood(mesh);
  SteadyProblem problem;
  problem.params = {config.nu, config.beta, config.gamma};
  auto [state, report] = solve_navier_stokes(space, problem);
  if (!report.converged) throw SolverError("custom steady solve did not converge");
  ensure_out_dir(config);
  write_vtk(out_path(config, "custom.vtk"), space, state);
  write_raw_state(out_path(config, "custom.state"), state);
  return state;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Incompressible Navier-Stokes solver with weak slip boundary conditions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir_override;
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out-dir", out_dir_override, "override output directory");
  };
  CLI::App* conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
  CLI::App* cav = app.add_subcommand("cavity", "lid-driven cavity (steady or VMS-LES unsteady)");
  CLI::App* custom = app.add_subcommand("run", "steady solve on a mesh file");
  add_common(conv);
  add_common(cav);
  add_common(custom);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig config = parse_config(read_text_file(config_path));
    if (!out_dir_override.empty()) config.out_dir = out_dir_override;

    if (conv->parsed()) {
      if (config.problem != "convergence") throw std::invalid_argument("config problem must be 'convergence'");
      RateTable t = run_convergence(config);
      if (!quiet) std::cout << format_rate_csv(t);
    } else if (cav->parsed()) {
      if (config.problem != "cavity_steady" && config.problem != "cavity_unsteady")
        throw std::invalid_argument("config problem must be 'cavity_steady' or 'cavity_unsteady'");
      CavityResult r = run_cavity(config);
      if (!quiet) {
        if (r.steady)
          std::cout << "steady cavity converged in " << r.newton.iterations << " Newton iterations\n";
        else
          std::cout << "unsteady cavity completed " << r.diagnostics.size() << " steps\n";
      }
    } else if (custom->parsed()) {
      if (config.problem != "custom") throw std::invalid_argument("config problem must be 'custom'");
      run_custom(config);
      if (!quiet) std::cout << "custom run complete\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "nsns: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace nsns
