// Command line front end: each subcommand reads one config file, runs one
// study, and writes its outputs plus a reproducibility manifest into --out.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "lilab/config.hpp"
#include "lilab/errors.hpp"
#include "lilab/families.hpp"
#include "lilab/flow_solver.hpp"
#include "lilab/lil_lab.hpp"
#include "lilab/scale.hpp"
#include "lilab/serialize.hpp"
#include "lilab/skeleton.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

struct CliArgs {
  std::string config_path;
  std::string out_dir;
  int seeds_n = 0;
  std::string seed_list;
  std::vector<std::string> overrides;
};

struct RunContext {
  lilab::Config cfg;
  std::string subcommand;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;

  void write(const std::string& filename, const std::string& text) {
    lilab::write_text_file(out_dir + "/" + filename, text);
    outputs.push_back(filename);
  }

  void finish() {
    lilab::Json m;
    m["tool"] = "lilab";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["config_file"] = cfg.name();
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(lilab::fnv1a(cfg.text())));
    m["config_fnv1a"] = hash;
    m["overrides"] = overrides;
    m["seeds"] = seeds;
    m["outputs"] = outputs;
    lilab::Json echo;
    for (const auto& [section, kv] : cfg.tree()) {
      lilab::Json sec;
      for (const auto& [key, value] : kv) sec[key] = value;
      echo[section] = std::move(sec);
    }
    m["effective_config"] = std::move(echo);
    lilab::write_text_file(out_dir + "/manifest.json", m.dump(2) + "\n");
  }
};

std::vector<std::uint64_t> resolve_seeds(const CliArgs& args,
                                         const lilab::Config& cfg,
                                         std::vector<std::uint64_t> fallback) {
  if (!args.seed_list.empty()) {
    std::vector<std::uint64_t> seeds;
    std::string tok;
    std::istringstream in(args.seed_list);
    while (std::getline(in, tok, ',')) {
      try {
        seeds.push_back(std::stoull(tok));
      } catch (const std::exception&) {
        throw lilab::ConfigError("cannot parse seed '" + tok +
                                 "' in --seed-list");
      }
    }
    if (seeds.empty()) {
      throw lilab::ConfigError("--seed-list is empty");
    }
    return seeds;
  }
  if (args.seeds_n > 0) {
    std::vector<std::uint64_t> seeds;
    for (int i = 1; i <= args.seeds_n; ++i) {
      seeds.push_back(static_cast<std::uint64_t>(i));
    }
    return seeds;
  }
  if (cfg.has("run", "seeds")) {
    return cfg.get_u64s("run", "seeds");
  }
  return fallback;
}

lilab::SolveOptions solve_options(const lilab::Config& cfg) {
  lilab::SolveOptions opts;
  const std::string scheme = cfg.raw_or("run", "scheme", "heun");
  if (scheme == "heun") {
    opts.scheme = lilab::Scheme::kHeunStratonovich;
  } else if (scheme == "ito_euler") {
    opts.scheme = lilab::Scheme::kItoEuler;
  } else {
    throw lilab::ConfigError("unknown scheme '" + scheme +
                             "' (heun | ito_euler)");
  }
  return opts;
}

void cmd_simulate(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  lilab::CoefficientSystem system = lilab::build_system(cfg);
  lilab::GeometricGrid grid = lilab::build_grid_from_config(cfg);
  lilab::InitialConditionSpec init =
      lilab::build_initial(cfg, system.dim());
  const lilab::SolveOptions opts = solve_options(cfg);

  std::vector<double> scales;
  if (cfg.has("simulate", "u")) scales = cfg.get_doubles("simulate", "u");
  double horizon = cfg.get_double("simulate", "horizon", grid.horizon());
  for (double u : scales) horizon = std::max(horizon, u);
  const int cells = cfg.get_int("simulate", "output_cells", 256);
  const std::string route = cfg.raw_or("simulate", "route", "real");
  if (route != "real" && route != "direct" && route != "both") {
    throw lilab::ConfigError("unknown route '" + route +
                             "' (real | direct | both)");
  }

  for (std::uint64_t seed : ctx.seeds) {
    const std::string tag = "_seed" + std::to_string(seed);
    lilab::WienerPath path =
        lilab::WienerPath::sample(grid, system.noise_dim(), seed);
    if (cfg.get_bool("simulate", "write_path", true)) {
      ctx.write("path" + tag + ".csv", lilab::path_csv(path));
    }
    if (cfg.get_bool("simulate", "write_flow", true) || !scales.empty()) {
      lilab::FlowPath flow =
          lilab::solve_anticipating(system, path, init, horizon, opts);
      if (cfg.get_bool("simulate", "write_flow", true)) {
        ctx.write("flow" + tag + ".csv", lilab::flow_csv(flow));
      }
      if (!scales.empty()) {
        if (route == "real" || route == "both") {
          std::vector<lilab::SamplePath> paths;
          for (double u : scales) {
            paths.push_back(lilab::extract_rescaled(flow, u, cells));
          }
          ctx.write("rescaled" + tag + ".csv",
                    lilab::rescaled_csv(scales, paths));
        }
        if (route == "direct" || route == "both") {
          std::vector<lilab::SamplePath> paths;
          for (double u : scales) {
            paths.push_back(lilab::rescaled_solution_direct(
                system, path, init, u, cells, opts));
          }
          ctx.write("rescaled_direct" + tag + ".csv",
                    lilab::rescaled_csv(scales, paths));
        }
      }
    }
  }
}

void cmd_skeleton(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  lilab::FieldSystem fields = lilab::build_limit_or_system(cfg);
  const int cells = cfg.get_int("skeleton", "cells", 64);
  const int substeps = cfg.get_int("skeleton", "substeps", 4);
  lilab::Control control = lilab::build_control(
      cfg.raw("skeleton", "control"), cells, fields.noise_dim());

  lilab::Vec x0 = lilab::Vec::Zero(fields.dim());
  if (cfg.has("skeleton", "x0")) {
    const auto x = cfg.get_doubles("skeleton", "x0");
    if (static_cast<int>(x.size()) != fields.dim()) {
      throw lilab::ConfigError("[skeleton] x0 has the wrong dimension");
    }
    x0 = Eigen::Map<const lilab::Vec>(x.data(), fields.dim());
  }

  lilab::SkeletonOptions sopts;
  sopts.substeps = substeps;
  lilab::SamplePath g = lilab::integrate_skeleton(fields, control, x0, sopts);

  ctx.write("control.csv", lilab::control_csv(control));
  ctx.write("skeleton.csv", lilab::sample_path_csv(g));
  lilab::Json j;
  j["energy"] = lilab::json_number(control.energy());
  j["endpoint_norm"] = lilab::json_number(g.node(g.cells()).norm());
  ctx.write("skeleton.json", j.dump(2) + "\n");
}

void cmd_rate(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  lilab::FieldSystem fields = lilab::build_limit_or_system(cfg);
  lilab::RateOptions opts =
      lilab::build_rate_options(cfg, "rate", fields.dim());
  lilab::SamplePath target = lilab::build_target(cfg.raw("rate", "target"),
                                                 opts.cells, fields.dim());
  const std::string method = cfg.raw_or("rate", "method", "auto");

  lilab::RateResult result = [&] {
    if (method == "exact") {
      return lilab::rate_exact_full_rank(fields, target, opts);
    }
    if (method == "variational") {
      return lilab::rate_variational(fields, target, opts);
    }
    if (method != "auto") {
      throw lilab::ConfigError("unknown rate method '" + method +
                               "' (auto | exact | variational)");
    }
    try {
      return lilab::rate_exact_full_rank(fields, target, opts);
    } catch (const lilab::NumericalError&) {
      return lilab::rate_variational(fields, target, opts);
    }
  }();

  ctx.write("rate.jsonl", lilab::rate_json(result).dump() + "\n");
  ctx.write("control.csv", lilab::control_csv(result.control));
}

void cmd_dist(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  lilab::FieldSystem fields = lilab::build_limit_or_system(cfg);
  lilab::RateOptions opts =
      lilab::build_rate_options(cfg, "dist", fields.dim());
  lilab::SamplePath target = lilab::build_target(cfg.raw("dist", "target"),
                                                 opts.cells, fields.dim());

  lilab::ThetaQuery q = lilab::dist_to_theta(fields, target, opts);
  ctx.write("dist.jsonl", lilab::theta_json(q).dump() + "\n");
  ctx.write("argmin.csv", lilab::sample_path_csv(q.argmin));
  ctx.write("control.csv", lilab::control_csv(q.control));
}

void cmd_lil(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  lilab::LilConfig lil(lilab::build_system(cfg),
                       lilab::build_initial(cfg, lilab::config_dim(cfg)));
  lil.ratio = cfg.get_double("grid", "ratio", lil.ratio);
  lil.windows = cfg.get_int("grid", "windows", lil.windows);
  lil.delta = cfg.get_double("grid", "delta", lil.delta);
  lil.output_cells = cfg.get_int("lil", "output_cells", lil.output_cells);
  lil.burn_in = cfg.get_int("lil", "burn_in", lil.burn_in);
  lil.rho = cfg.get_double("lil", "rho", lil.rho);
  lil.subgrid = cfg.get_int("lil", "subgrid", lil.subgrid);
  lil.threads = cfg.get_int("run", "threads", lil.threads);
  lil.solve = solve_options(cfg);
  lil.seeds = ctx.seeds;

  lil.dist_options.cells = cfg.get_int("lil", "opt_cells", 64);
  lil.dist_options.substeps = cfg.get_int("lil", "opt_substeps", 2);
  lil.dist_options.iters_per_stage = cfg.get_int("lil", "opt_iters", 250);
  lil.dist_options.random_starts = cfg.get_int("lil", "opt_starts", 2);
  lil.dist_options.learning_rate = cfg.get_double("lil", "opt_lr", 0.05);
  lil.dist_options.match_tol =
      cfg.get_double("lil", "opt_match_tol", lil.dist_options.match_tol);
  if (cfg.has("lil", "opt_seed")) {
    lil.dist_options.seed = cfg.get_u64s("lil", "opt_seed").at(0);
  }

  for (int t = 1; cfg.has("lil", "target_" + std::to_string(t)); ++t) {
    lil.targets.push_back(
        lilab::build_control(cfg.raw("lil", "target_" + std::to_string(t)),
                             lil.dist_options.cells,
                             lil.system.noise_dim()));
  }

  const std::string mode = cfg.raw_or("lil", "mode", "convergence");
  lilab::LilReport report = [&] {
    if (mode == "convergence") return lilab::run_convergence(lil);
    if (mode == "recurrence") return lilab::run_recurrence(lil);
    if (mode == "gamma") return lilab::gamma_stat(lil);
    if (mode == "scan") {
      return lilab::lemma25_scan(lil, cfg.get_doubles("lil", "scan"));
    }
    throw lilab::ConfigError(
        "unknown lil mode '" + mode +
        "' (convergence | recurrence | gamma | scan)");
  }();

  ctx.write("lil.csv", lilab::lil_csv(report));
  ctx.write("lil_summary.json", lilab::lil_summary_json(report).dump(2) + "\n");
  ctx.write("lil_series.csv", lilab::lil_series_csv(report));
}

void cmd_check_h(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  lilab::CoefficientSystem system = lilab::build_system(cfg);
  const int d = system.dim();

  const auto lo = cfg.get_doubles("check_h", "box_lo");
  const auto hi = cfg.get_doubles("check_h", "box_hi");
  if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d) {
    throw lilab::ConfigError("[check_h] box needs " + std::to_string(d) +
                             " coordinates per corner");
  }
  lilab::Box box{Eigen::Map<const lilab::Vec>(lo.data(), d),
                 Eigen::Map<const lilab::Vec>(hi.data(), d)};

  lilab::HReport report = lilab::check_hypothesis_H(
      system, box, cfg.get_doubles("check_h", "scales"),
      cfg.get_int("check_h", "points", 21),
      cfg.get_double("check_h", "tol", 0.05));

  ctx.write("check_h.jsonl", lilab::h_report_jsonl(report));
  ctx.write("summary.json", lilab::h_verdict_json(report).dump(2) + "\n");
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
}

void cmd_check_c(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const int d = lilab::config_dim(cfg);
  lilab::InitialConditionSpec init = lilab::build_initial(cfg, d);

  lilab::CReport report = lilab::check_condition_C(
      init, d, cfg.get_doubles("check_c", "scales"),
      cfg.get_double("check_c", "delta", 1.0),
      cfg.get_int("check_c", "mc_samples", 100000),
      cfg.has("check_c", "mc_seed") ? cfg.get_u64s("check_c", "mc_seed").at(0)
                                    : 2718);

  ctx.write("check_c.jsonl", lilab::c_report_jsonl(report));
  ctx.write("summary.json", lilab::c_verdict_json(report).dump(2) + "\n");
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
}

int run(const std::string& subcommand, const CliArgs& args) {
  RunContext ctx{lilab::Config::parse_file(args.config_path), subcommand,
                 args.out_dir, args.overrides};
  for (const auto& o : args.overrides) {
    ctx.cfg.apply_override(o);
  }
  ctx.cfg.validate_for(subcommand);

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) {
    throw lilab::ConfigError("cannot create output directory '" +
                             args.out_dir + "': " + ec.message());
  }

  std::vector<std::uint64_t> fallback = {1};
  if (subcommand == "lil") fallback = {1, 2, 3, 4, 5, 6, 7, 8};
  ctx.seeds = resolve_seeds(args, ctx.cfg, fallback);

  if (subcommand == "simulate") {
    cmd_simulate(ctx);
  } else if (subcommand == "skeleton") {
    cmd_skeleton(ctx);
  } else if (subcommand == "rate") {
    cmd_rate(ctx);
  } else if (subcommand == "dist") {
    cmd_dist(ctx);
  } else if (subcommand == "lil") {
    cmd_lil(ctx);
  } else if (subcommand == "check-h") {
    cmd_check_h(ctx);
  } else if (subcommand == "check-c") {
    cmd_check_c(ctx);
  }
  ctx.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic flow rescaling laboratory"};
  app.require_subcommand(1);

  CliArgs args;
  const std::vector<std::string> names = {"simulate", "skeleton", "rate",
                                          "dist",     "lil",      "check-h",
                                          "check-c"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "config file (INI)")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory")->required();
    sub->add_option("--seeds", args.seeds_n, "use seeds 1..n");
    sub->add_option("--seed-list", args.seed_list,
                    "comma separated explicit seeds");
    sub->add_option("--set", args.overrides,
                    "override section.key=value (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), args);
  } catch (const lilab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lilab::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const lilab::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
