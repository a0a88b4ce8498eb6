#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdmp/models/sir.hpp"
#include "pdmp/types.hpp"

namespace pdmp {

// Flags shared by every command.  out is a path prefix; each artifact gets a
// suffix (.skeleton.ndjson, .summary.json, ...).  With chains > 1 each chain
// derives its own seed and inserts .chainK into the file names.
struct AppCommon {
  std::uint64_t seed = 0;
  double clock = 1000.0;
  std::string out = "out";
  std::string format = "ndjson";
  int chains = 1;
  double refresh = 0.0;
};

struct Demo1dArgs {
  std::string scenario;  // uniform-hardwall | soft-wall | sticky | repelling
  double jump = 1.0;
  double kappa = 1.0;
  bool one_sided = false;
  int bins = 20;
  AppCommon common;
};

struct ShowcaseArgs {
  int d = 80;
  double c = 1.0;
  std::uint64_t gamma_seed = 1;
  std::vector<int> trace = {0, 1, 2, 3};
  AppCommon common;
};

struct SirSimulateArgs {
  SirParams params;
  int seed_case = 24;  // 0-based index of the individual infected at time 0
  AppCommon common;
};

struct SirSampleArgs {
  SirParams params;
  std::string data_path;        // empty: forward-simulate a dataset first
  int seed_case = 24;           // used only when simulating inline
  std::vector<int> marginals;   // coordinates to write histograms for
  int bins = 40;
  AppCommon common;
};

struct HardSphereArgs {
  int N = 6;
  int dim = 2;
  std::string rule = "none";
  AppCommon common;
};

void app_demo1d(const Demo1dArgs& args);
void app_showcase(const ShowcaseArgs& args);
void app_sir_simulate(const SirSimulateArgs& args);
void app_sir_sample(const SirSampleArgs& args);
void app_hardsphere(const HardSphereArgs& args);

// "1,5,9" -> {1, 5, 9}
std::vector<int> parse_int_list(const std::string& text);

}  // namespace pdmp
