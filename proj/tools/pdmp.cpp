#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "pdmp/apps.hpp"
#include "pdmp/models/sir.hpp"

namespace {

void add_common(CLI::App* cmd, pdmp::AppCommon& c, double default_clock,
                double default_refresh) {
  c.clock = default_clock;
  c.refresh = default_refresh;
  cmd->add_option("--seed", c.seed, "RNG seed (runs with equal seed and flags are byte-identical)")
      ->required();
  cmd->add_option("--clock", c.clock, "final clock (total path time)")->capture_default_str();
  cmd->add_option("--out", c.out, "output path prefix")->capture_default_str();
  cmd->add_option("--format", c.format, "skeleton file format")
      ->check(CLI::IsMember({"ndjson", "csv"}))
      ->capture_default_str();
  cmd->add_option("--chains", c.chains, "independent chains run in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--refresh-rate", c.refresh, "velocity refreshment rate")
      ->capture_default_str();
}

// Parameter flags shared by the sir subcommands.  A --params file is applied
// first; any flag passed explicitly overrides it.  gamma has no safe default,
// so it is always required on the command line.
struct SirFlags {
  std::string params_file;
  double gamma = 0.5;
  int d = 50;
  double T = 5.0;
  double delay_beta = 0.3;
  double removal_beta = 0.5;
  int dist_band = 5;
  double dist_value = 0.4;
  std::uint64_t baseline_seed = 1;
  std::string clamp;

  void add(CLI::App* cmd) {
    cmd->add_option("--params", params_file, "key = value parameter file");
    cmd->add_option("--gamma", gamma, "infectivity reduction factor after notification, in (0,1)")
        ->required();
    cmd->add_option("--d", d, "population size")->capture_default_str();
    cmd->add_option("--T", T, "observation horizon")->capture_default_str();
    cmd->add_option("--delay-beta", delay_beta, "Exp rate of the infection -> notification delay")
        ->capture_default_str();
    cmd->add_option("--removal-beta", removal_beta,
                    "Exp rate of the notification -> removal delay (forward simulation)")
        ->capture_default_str();
    cmd->add_option("--dist-band", dist_band, "contact band |i-j| <= band")->capture_default_str();
    cmd->add_option("--dist-value", dist_value, "contact strength inside the band")
        ->capture_default_str();
    cmd->add_option("--baseline-seed", baseline_seed,
                    "seed of the infectivity/susceptibility baselines")
        ->capture_default_str();
    cmd->add_option("--clamp", clamp, "clamped coordinates, e.g. 24:0.0");
  }

  pdmp::SirParams resolve(const CLI::App* cmd) const {
    pdmp::SirParams p;
    if (!params_file.empty()) p = pdmp::sir_read_params(params_file);
    if (cmd->count("--gamma")) p.gamma = gamma;
    if (cmd->count("--d")) p.d = d;
    if (cmd->count("--T")) p.T = T;
    if (cmd->count("--delay-beta")) p.delay_beta = delay_beta;
    if (cmd->count("--removal-beta")) p.removal_beta = removal_beta;
    if (cmd->count("--dist-band")) p.dist_band = dist_band;
    if (cmd->count("--dist-value")) p.dist_value = dist_value;
    if (cmd->count("--baseline-seed")) p.baseline_seed = baseline_seed;
    if (cmd->count("--clamp")) p.clamps = pdmp::sir_parse_clamps(clamp);
    return p;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise deterministic samplers with boundary events"};
  app.require_subcommand(1);

  pdmp::Demo1dArgs demo;
  CLI::App* demo_cmd =
      app.add_subcommand("demo1d", "one-dimensional wall / soft-wall / sticky scenarios");
  add_common(demo_cmd, demo.common, 1e4, 0.0);
  demo_cmd
      ->add_option("--scenario", demo.scenario, "target layout")
      ->check(CLI::IsMember({"uniform-hardwall", "soft-wall", "sticky", "repelling"}))
      ->required();
  demo_cmd->add_option("--jump", demo.jump, "log density jump at 1/2 (soft-wall)")
      ->capture_default_str();
  demo_cmd->add_option("--kappa", demo.kappa, "atom weight (sticky)")->capture_default_str();
  demo_cmd->add_flag("--one-sided", demo.one_sided, "put the atom on the support end x = 1");
  demo_cmd->add_option("--bins", demo.bins, "histogram bins")->capture_default_str();
  demo_cmd->callback([&] { pdmp::app_demo1d(demo); });

  pdmp::ShowcaseArgs showcase;
  std::string showcase_trace = "0,1,2,3";
  CLI::App* showcase_cmd = app.add_subcommand(
      "showcase", "coupled box target with walls, jumps, atoms and repelling coordinates");
  add_common(showcase_cmd, showcase.common, 1e3, 0.0);
  showcase_cmd->add_option("--d", showcase.d, "dimension")->capture_default_str();
  showcase_cmd->add_option("--c", showcase.c, "log density jump at 1/2")->required();
  showcase_cmd->add_option("--gamma-seed", showcase.gamma_seed, "seed of the coupling matrix")
      ->required();
  showcase_cmd->add_option("--trace", showcase_trace, "coordinates to write t,x traces for")
      ->capture_default_str();
  showcase_cmd->callback([&] {
    showcase.trace = pdmp::parse_int_list(showcase_trace);
    pdmp::app_showcase(showcase);
  });

  CLI::App* sir_cmd = app.add_subcommand("sir", "latent infection times of a partially observed epidemic");
  sir_cmd->require_subcommand(1);

  pdmp::SirSimulateArgs sim;
  SirFlags sim_flags;
  CLI::App* sim_cmd = sir_cmd->add_subcommand("simulate", "forward-simulate a synthetic dataset");
  add_common(sim_cmd, sim.common, 0.0, 0.0);
  sim_flags.add(sim_cmd);
  sim_cmd->add_option("--seed-case", sim.seed_case, "0-based index infected at time 0")
      ->capture_default_str();
  sim_cmd->callback([&] {
    sim.params = sim_flags.resolve(sim_cmd);
    pdmp::app_sir_simulate(sim);
  });

  pdmp::SirSampleArgs sample;
  SirFlags sample_flags;
  std::string sample_marginals = "10,12,37,48";
  CLI::App* sample_cmd =
      sir_cmd->add_subcommand("sample", "sticky zig-zag over the latent infection times");
  add_common(sample_cmd, sample.common, 500.0, 0.0);
  sample_flags.add(sample_cmd);
  sample_cmd->add_option("--data", sample.data_path,
                         "dataset CSV (default: forward-simulate one first)");
  sample_cmd->add_option("--seed-case", sample.seed_case,
                         "0-based index infected at time 0 (inline simulation only)")
      ->capture_default_str();
  sample_cmd->add_option("--marginals", sample_marginals, "coordinates to write histograms for")
      ->capture_default_str();
  sample_cmd->add_option("--bins", sample.bins, "histogram bins")->capture_default_str();
  sample_cmd->callback([&] {
    sample.params = sample_flags.resolve(sample_cmd);
    sample.marginals.clear();
    for (int m : pdmp::parse_int_list(sample_marginals))
      if (m >= 0 && m < sample.params.d) sample.marginals.push_back(m);
    pdmp::app_sir_sample(sample);
  });

  pdmp::HardSphereArgs spheres;
  CLI::App* sphere_cmd =
      app.add_subcommand("hardsphere", "bouncy particle sampler over non-overlapping spheres");
  add_common(sphere_cmd, spheres.common, 2000.0, 0.01);
  sphere_cmd->add_option("--n", spheres.N, "number of spheres")->capture_default_str();
  sphere_cmd->add_option("--dim", spheres.dim, "ambient dimension per sphere")
      ->capture_default_str();
  sphere_cmd
      ->add_option("--teleport", spheres.rule, "boundary rule at sphere contacts")
      ->check(CLI::IsMember({"none", "swap", "move-small", "weighted"}))
      ->capture_default_str();
  sphere_cmd->callback([&] { pdmp::app_hardsphere(spheres); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
