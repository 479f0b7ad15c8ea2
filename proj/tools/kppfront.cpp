// Command-line front for the KPP front-propagation laboratory: periodic
// eigenproblems, speed atlases, cell problems, direct simulation and the
// moving half-space runs, plus the aggregated verification suite.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>

#include "kpp/cell.hpp"
#include "kpp/config.hpp"
#include "kpp/eigenproblem.hpp"
#include "kpp/errors.hpp"
#include "kpp/frontsim.hpp"
#include "kpp/halfspace.hpp"
#include "kpp/io.hpp"
#include "kpp/speed.hpp"
#include "kpp/verify.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out = ".";
  int threads = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Path to the run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "Output directory")
      ->envname("APP_OUT");
  cmd->add_option("--threads", args.threads, "Worker threads (0 = auto)")
      ->envname("APP_THREADS");
  cmd->add_option("--seed", args.seed, "Seed for randomized checks");
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  return (std::filesystem::path(args.out) / name).string();
}

struct Loaded {
  kpp::ConfigFile cfg;
  std::string digest;
};

Loaded load(const CommonArgs& args, const std::string& command) {
  std::filesystem::create_directories(args.out);
  kpp::ConfigFile cfg = kpp::ConfigFile::parse_file(args.config);
  Loaded l{std::move(cfg), ""};
  l.digest = kpp::fnv1a_hex(l.cfg.raw_text());
  kpp::write_run_meta(out_path(args, "run_meta.json"), command, l.digest);
  return l;
}

int cmd_eigen(const CommonArgs& args) {
  Loaded l = load(args, "eigen");
  const kpp::MuSpec spec = kpp::parse_medium(l.cfg);
  const kpp::TorusGrid grid(spec.dim, kpp::parse_grid_points(l.cfg, spec.dim));
  const kpp::Vec e = kpp::parse_direction(l.cfg, "eigen", spec.dim, {1.0, 0.0});
  const double lambda = l.cfg.number("eigen", "lambda", 1.0);
  kpp::EigenOptions eo;
  eo.tol = l.cfg.number("eigen", "tol", 1e-9);
  l.cfg.reject_unknown();

  const kpp::PeriodicScalarField mu = kpp::build_field(spec, grid);
  const kpp::EigenPair pair = kpp::principal_eigenpair(mu, e, lambda, eo);
  kpp::write_eigenpair_json(out_path(args, "eigen.json"), pair, l.digest);
  std::printf("gamma(e, lambda=%.6g) = %.12g   residual %.3g   (%d iters)\n",
              lambda, pair.gamma, pair.residual, pair.iterations);
  return 0;
}

int cmd_speed(const CommonArgs& args) {
  Loaded l = load(args, "speed");
  const kpp::MuSpec spec = kpp::parse_medium(l.cfg);
  const kpp::TorusGrid grid(spec.dim, kpp::parse_grid_points(l.cfg, spec.dim));
  const kpp::Vec e = kpp::parse_direction(l.cfg, "speed", spec.dim, {1.0, 0.0});
  kpp::MinSpeedOptions so;
  so.eigen_tol = l.cfg.number("speed", "tol", 1e-9);
  so.lambda_rtol = l.cfg.number("speed", "lambda_rtol", 1e-8);
  l.cfg.reject_unknown();

  const kpp::PeriodicScalarField mu = kpp::build_field(spec, grid);
  const kpp::MinSpeedResult ms = kpp::minimal_speed(mu, e, so);
  kpp::write_speed_json(out_path(args, "speed.json"), ms, e, l.digest);
  std::printf("%-12s %-16s %-16s\n", "", "c_star", "lambda_star");
  std::printf("%-12s %-16.10g %-16.10g\n", "value", ms.c_star, ms.lambda_star);
  std::printf("stationarity %.3g, %d gamma evaluations\n", ms.stationarity,
              ms.gamma_evals);
  return 0;
}

int cmd_atlas(const CommonArgs& args) {
  Loaded l = load(args, "atlas");
  const kpp::MuSpec spec = kpp::parse_medium(l.cfg);
  const int points = kpp::parse_grid_points(l.cfg, spec.dim);
  const int directions = l.cfg.integer("atlas", "directions", 360);
  kpp::AtlasOptions ao;
  ao.speed.eigen_tol = l.cfg.number("atlas", "tol", 1e-9);
  ao.threads = resolve_threads(args.threads);
  l.cfg.reject_unknown();

  const kpp::Atlas atlas = kpp::build_atlas(spec, points, directions, ao);
  kpp::write_atlas_json(out_path(args, "atlas.json"), atlas, l.digest);
  kpp::write_atlas_csv(out_path(args, "atlas.csv"), atlas, l.digest);
  std::printf("atlas: %zu directions, grid N=%d\n", atlas.records.size(),
              atlas.grid_points);
  for (std::size_t i = 0; i < atlas.records.size();
       i += std::max<std::size_t>(1, atlas.records.size() / 8)) {
    const auto& r = atlas.records[i];
    std::printf("  theta %7.4f  c* %.8g  lambda* %.8g  w* %.8g  alpha %.8g\n",
                r.theta, r.c_star, r.lambda_star, r.w_star, r.alpha);
  }
  return 0;
}

int cmd_minimizer_check(const CommonArgs& args) {
  Loaded l = load(args, "minimizer-check");
  const kpp::MuSpec spec = kpp::parse_medium(l.cfg);
  const int points = kpp::parse_grid_points(l.cfg, spec.dim);
  const int directions = l.cfg.integer("atlas", "directions", 720);
  kpp::AtlasOptions ao;
  ao.threads = resolve_threads(args.threads);
  kpp::MinimizerCheckOptions mo;
  mo.uniqueness_margin_rel =
      l.cfg.number("minimizer", "uniqueness_margin_rel", 1e-3);
  mo.cluster_tol_deg = l.cfg.number("minimizer", "cluster_tol_deg", 1.0);
  mo.coverage_gap_steps = l.cfg.number("minimizer", "coverage_gap_steps", 3.0);
  mo.grad_step = l.cfg.number("minimizer", "grad_step", 5e-3);
  mo.grad_tol = l.cfg.number("minimizer", "grad_tol", 1e-2);
  mo.threads = ao.threads;
  l.cfg.reject_unknown();

  const kpp::Atlas atlas = kpp::build_atlas(spec, points, directions, ao);
  const kpp::TorusGrid grid(spec.dim, points);
  const kpp::PeriodicScalarField mu = kpp::build_field(spec, grid);
  const kpp::MinimizerReport rep = kpp::verify_minimizer_theory(mu, atlas, mo);
  kpp::write_minimizer_report_json(out_path(args, "minimizer_report.json"),
                                   rep, l.digest);
  std::printf("minimizer checks at %d directions (step %.4f deg):\n",
              rep.directions, rep.angle_step_deg);
  for (const auto& c : rep.checks) {
    std::printf("  %-18s %s   worst %.6g (threshold %.6g)\n", c.name.c_str(),
                c.pass ? "pass" : "FAIL", c.worst, c.threshold);
  }
  return 0;
}

int cmd_cell(const CommonArgs& args) {
  Loaded l = load(args, "cell");
  const kpp::MuSpec spec = kpp::parse_medium(l.cfg);
  const kpp::TorusGrid grid(spec.dim, kpp::parse_grid_points(l.cfg, spec.dim));
  const kpp::Vec e = kpp::parse_direction(l.cfg, "cell", spec.dim, {1.0, 0.0});
  kpp::CellOptions co;
  co.density.tol = l.cfg.number("cell", "density_tol", 1e-9);
  co.corrector.solvability_tol =
      l.cfg.number("cell", "solvability_tol", 1e-6);
  co.corrector.residual_tol = l.cfg.number("cell", "residual_tol", 1e-7);
  l.cfg.reject_unknown();

  const kpp::PeriodicScalarField mu = kpp::build_field(spec, grid);
  const kpp::CellSolution cs = kpp::solve_cell_problem(mu, e, co);
  kpp::write_cell_json(out_path(args, "cell.json"), cs, l.digest);
  std::printf("cell problem along e=(%.4f, %.4f):\n", cs.e[0], cs.e[1]);
  std::printf("  e' = (%.6f, %.6f), lambda* %.8g, w* %.8g\n", cs.e_prime[0],
              cs.e_prime[1], cs.lambda_star, cs.w_star);
  std::printf("  nu mass %.12g, |div F| %.3g, |mean F - w* e| %.3g\n",
              cs.identities.nu_mass, cs.identities.div_f_inf,
              cs.identities.f_mean_error);
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  Loaded l = load(args, "simulate");
  const kpp::MuSpec spec = kpp::parse_medium(l.cfg);
  kpp::SimConfig sc = kpp::parse_simulation(l.cfg, spec);
  const double fit_t_min =
      l.cfg.number("simulation", "fit_t_min", sc.t_final / 10.0);
  l.cfg.reject_unknown();

  const kpp::SimResult sim = kpp::run_simulation(sc);
  for (std::size_t k = 0; k < sim.traces.size(); ++k) {
    kpp::write_trace_csv(out_path(args, "front_" + std::to_string(k) + ".csv"),
                         sim.traces[k], l.digest);
  }
  const kpp::BramsonFit fit = kpp::fit_bramson(sim.traces[0], fit_t_min);
  kpp::write_bramson_fit_json(out_path(args, "fit.json"), fit, l.digest);
  for (std::size_t s = 0; s < sim.snapshots.size(); ++s) {
    const auto& snap = sim.snapshots[s];
    std::FILE* fp = std::fopen(
        out_path(args, "snapshot_" + std::to_string(s) + ".csv").c_str(), "w");
    if (!fp) throw kpp::IoError("cannot write snapshot");
    std::fprintf(fp, "# schema_version=1 config_digest=%s t=%.17g\n",
                 l.digest.c_str(), snap.t);
    if (sim.dim == 1) {
      std::fprintf(fp, "x,u\n");
      for (int i = 0; i < sim.interior_points; ++i) {
        std::fprintf(fp, "%.17g,%.17g\n", -sim.half_width + (i + 1) * sim.h,
                     snap.u[i]);
      }
    } else {
      std::fprintf(fp, "x,y,u\n");
      for (int i = 0; i < sim.interior_points; ++i) {
        for (int j = 0; j < sim.interior_points; ++j) {
          std::fprintf(
              fp, "%.17g,%.17g,%.17g\n", -sim.half_width + (i + 1) * sim.h,
              -sim.half_width + (j + 1) * sim.h,
              snap.u[static_cast<std::size_t>(i) * sim.interior_points + j]);
        }
      }
    }
    std::fclose(fp);
  }
  std::printf("simulate: %zu trace samples, fitted v %.8g alpha %.6g C %.6g "
              "(rms %.3g)\n",
              sim.traces[0].samples.size(), fit.v, fit.alpha, fit.c,
              fit.rms_residual);
  return 0;
}

int cmd_halfspace(const CommonArgs& args) {
  Loaded l = load(args, "halfspace");
  const kpp::MuSpec spec = kpp::parse_medium(l.cfg);
  const kpp::TorusGrid grid(spec.dim, kpp::parse_grid_points(l.cfg, spec.dim));
  const kpp::Vec e =
      kpp::parse_direction(l.cfg, "halfspace", spec.dim, {1.0, 0.0});
  kpp::HalfspaceConfig hc = kpp::parse_halfspace(l.cfg);
  const double fit_t_min = l.cfg.number("halfspace", "fit_t_min", 100.0);
  l.cfg.reject_unknown();

  const kpp::PeriodicScalarField mu = kpp::build_field(spec, grid);
  const kpp::FrameSetup fs = kpp::make_frame_setup(mu, e);
  if (hc.frame.kind == kpp::Frame::Kind::LogShifted) {
    if (hc.frame.alpha < 0.0) {
      hc.frame.alpha = kpp::bramson_coefficient(spec.dim, fs.lambda_star, 1.0);
    }
    if (hc.frame.T < 0.0) {
      hc.frame.T = 2.0 * hc.frame.alpha / fs.c_star;
    }
  }
  const kpp::HalfspaceResult hr = kpp::run_log_frame(fs, hc);

  kpp::write_probe_csv(out_path(args, "bulk_max.csv"), hr.bulk_max, l.digest);
  kpp::write_probe_csv(out_path(args, "fixed_offset_p.csv"), hr.fixed_offset_p,
                       l.digest);
  kpp::write_probe_csv(out_path(args, "w_probe.csv"), hr.w_probe, l.digest);
  kpp::write_probe_csv(out_path(args, "first_moment.csv"), hr.first_moment,
                       l.digest);

  std::vector<std::pair<std::string, kpp::PowerLawFit>> fits;
  fits.emplace_back("bulk_max_p",
                    kpp::fit_power_law(hr.bulk_max.samples, fit_t_min));
  fits.emplace_back("fixed_offset_p",
                    kpp::fit_power_law(hr.fixed_offset_p.samples, fit_t_min));
  const kpp::TailFit tail = kpp::check_exponential_tail(fs, hc, hr);
  kpp::write_power_law_json(out_path(args, "fits.json"), fits, &tail,
                            l.digest);

  if (hc.record_moments) {
    std::FILE* fp = std::fopen(out_path(args, "moments.csv").c_str(), "w");
    if (!fp) throw kpp::IoError("cannot write moments.csv");
    std::fprintf(fp, "# schema_version=1 config_digest=%s\n", l.digest.c_str());
    std::fprintf(fp, "t,mass,m_xixi,m_yy,m_xiy\n");
    for (const auto& m : hr.moments) {
      std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g\n", m.t, m.mass,
                   m.m_xixi, m.m_yy, m.m_xiy);
    }
    std::fclose(fp);
  }
  std::printf("halfspace: exponents %s %.6g, %s %.6g; tail rate %.6g "
              "(lambda* %.6g)\n",
              fits[0].first.c_str(), fits[0].second.exponent,
              fits[1].first.c_str(), fits[1].second.exponent, tail.rate,
              fs.lambda_star);
  return 0;
}

int cmd_verify_all(const CommonArgs& args) {
  Loaded l = load(args, "verify-all");
  kpp::VerifyOptions vo;
  vo.seed = args.seed;
  vo.threads = resolve_threads(args.threads);
  const std::string suite = l.cfg.string("verify", "suite", "quick");
  if (suite == "quick") {
    vo.quick = true;
  } else if (suite == "full") {
    vo.quick = false;
  } else {
    throw kpp::ConfigParse("[verify] suite must be quick or full");
  }
  // The verify suites run fixed scenarios; the medium sections are not
  // consulted, so only [verify] keys are accepted here.
  l.cfg.reject_unknown();

  const std::vector<kpp::CheckResult> checks = kpp::run_verification_suite(vo);
  kpp::write_checks_json(out_path(args, "verify_matrix.json"), checks,
                         l.digest);
  kpp::write_checks_csv(out_path(args, "verify_matrix.csv"), checks, l.digest);
  bool all = true;
  std::printf("%-5s %-55s %s\n", "id", "check", "result");
  for (const auto& c : checks) {
    all = all && c.pass;
    std::printf("%-5s %-55s %s\n", c.id.c_str(), c.name.c_str(),
                c.pass ? "PASS" : "FAIL");
  }
  std::printf("verify-all: %s\n", all ? "all checks passed" : "FAILURES");
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for KPP front propagation in periodic "
               "media"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* c_eigen = app.add_subcommand(
      "eigen", "Principal periodic eigenpair at (e, lambda)");
  CLI::App* c_speed =
      app.add_subcommand("speed", "Minimal pulsating-front speed c*(e)");
  CLI::App* c_atlas = app.add_subcommand(
      "atlas", "Sweep c*, lambda*, e', w*, alpha over directions");
  CLI::App* c_min = app.add_subcommand(
      "minimizer-check", "Sampled uniqueness/bijection/gradient checks");
  CLI::App* c_cell =
      app.add_subcommand("cell", "Cell problems: kappa, nu, F, chi, S");
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Direct simulation of the reaction-diffusion front");
  CLI::App* c_half = app.add_subcommand(
      "halfspace", "Linearized Dirichlet problem in a moving half-space");
  CLI::App* c_verify = app.add_subcommand(
      "verify-all", "Aggregated pass/fail verification matrix");
  for (CLI::App* cmd :
       {c_eigen, c_speed, c_atlas, c_min, c_cell, c_sim, c_half, c_verify}) {
    add_common(cmd, args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (c_eigen->parsed()) return cmd_eigen(args);
    if (c_speed->parsed()) return cmd_speed(args);
    if (c_atlas->parsed()) return cmd_atlas(args);
    if (c_min->parsed()) return cmd_minimizer_check(args);
    if (c_cell->parsed()) return cmd_cell(args);
    if (c_sim->parsed()) return cmd_simulate(args);
    if (c_half->parsed()) return cmd_halfspace(args);
    if (c_verify->parsed()) return cmd_verify_all(args);
  } catch (const kpp::ConfigParse& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const kpp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
