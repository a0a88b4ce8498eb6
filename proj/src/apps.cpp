#include "pdmp/apps.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"

#include "pdmp/engine.hpp"
#include "pdmp/estimators.hpp"
#include "pdmp/io.hpp"
#include "pdmp/models/box.hpp"
#include "pdmp/models/hardsphere.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/sampler.hpp"

namespace pdmp {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  return os;
}

void write_skeleton_file(const std::string& prefix, const std::string& format,
                         const Skeleton& skel) {
  if (format == "ndjson") {
    auto os = open_out(prefix + ".skeleton.ndjson");
    write_skeleton_ndjson(os, skel);
  } else if (format == "csv") {
    auto os = open_out(prefix + ".skeleton.csv");
    write_skeleton_csv(os, skel);
  } else {
    throw std::invalid_argument("unknown format: " + format);
  }
}

void write_histogram_file(const std::string& path, const Histogram& h) {
  std::vector<Vec> rows;
  const double width = (h.hi - h.lo) / h.nbins;
  for (int b = 0; b < h.nbins; ++b) {
    const double lo = h.lo + b * width;
    rows.push_back({lo, lo + width, h.mass[static_cast<std::size_t>(b)],
                    h.total > 0.0 ? h.mass[static_cast<std::size_t>(b)] / h.total : 0.0});
  }
  auto os = open_out(path);
  write_series_csv(os, {"lo", "hi", "time", "fraction"}, rows);
}

json run_summary(const RunStats& stats, const ModelSpec& model) {
  json events;
  for (int t = 0; t < kTagCount; ++t)
    events[tag_name(static_cast<EventTag>(t))] = stats.tag_counts[static_cast<std::size_t>(t)];
  json facets = json::array();
  for (int c = 0; c < model.stat_class_count(); ++c) {
    const FacetClassStats& f = stats.facet[static_cast<std::size_t>(c)];
    json entry = {{"name", model.stat_class_name(c)},
                  {"hits", f.hits},
                  {"crossings", f.crossings}};
    if (f.hits > 0)
      entry["crossing_rate"] = static_cast<double>(f.crossings) / static_cast<double>(f.hits);
    facets.push_back(entry);
  }
  return json{{"events", events},
              {"facets", facets},
              {"thin_rejections", stats.thin_rejections},
              {"iterations", stats.iterations}};
}

void write_summary_file(const std::string& path, const json& summary) {
  auto os = open_out(path);
  os << summary.dump(2) << '\n';
}

json atoms_json(const Histogram& h) {
  json out = json::object();
  for (const auto& [pos, mass] : h.atoms)
    out[format_double(pos)] = h.total > 0.0 ? mass / h.total : 0.0;
  return out;
}

// Chains run in parallel, each with a derived seed and its own file prefix.
// A single chain keeps the plain seed and prefix.
void for_each_chain(const AppCommon& common,
                    const std::function<void(std::uint64_t, const std::string&)>& body) {
  if (common.chains <= 1) {
    body(common.seed, common.out);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(common.chains));
  for (int k = 0; k < common.chains; ++k) {
    threads.emplace_back([&, k] {
      try {
        body(chain_seed(common.seed, static_cast<std::uint64_t>(k)),
             common.out + ".chain" + std::to_string(k));
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    if (!item.empty()) {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument("bad integer list entry: " + item);
      out.push_back(v);
    }
    pos = comma + 1;
  }
  return out;
}

void app_demo1d(const Demo1dArgs& args) {
  BoxCoordSpec coord;
  if (args.scenario == "uniform-hardwall") {
  } else if (args.scenario == "soft-wall") {
    coord.jump = true;
    coord.jump_c = args.jump;
  } else if (args.scenario == "sticky") {
    coord.atom = true;
    coord.atom_kappa = args.kappa;
    if (args.one_sided) {
      coord.atom_one_sided = true;
      coord.atom_pos = 1.0;
    }
  } else if (args.scenario == "repelling") {
    coord.repelling = true;
  } else {
    throw std::invalid_argument("unknown scenario: " + args.scenario);
  }

  BoxConfig cfg;
  cfg.d = 1;
  cfg.coords = {coord};
  const BoxModel model(cfg);

  for_each_chain(args.common, [&](std::uint64_t seed, const std::string& prefix) {
    RngBundle rng(seed);
    PhasePoint z0;
    z0.x = {0.5};
    z0.v = {rng.init.sign()};
    z0.region = model.region_of(z0.x);

    const ZigZag kernel(args.common.refresh);
    RunStats stats;
    const Skeleton skel =
        run_sampler(model, kernel.boundary_policy(), kernel, z0, args.common.clock, rng, {}, &stats);

    write_skeleton_file(prefix, args.common.format, skel);
    const Histogram hist = occupation_histogram(skel, 0, 0.0, 1.0, args.bins);
    write_histogram_file(prefix + ".hist.csv", hist);

    json summary = run_summary(stats, model);
    summary["command"] = "demo1d";
    summary["scenario"] = args.scenario;
    summary["seed"] = seed;
    summary["clock"] = args.common.clock;
    summary["mean_x"] = time_average(skel, [](const PhasePoint& z) { return z.x[0]; });
    summary["atoms"] = atoms_json(hist);
    double stuck = 0.0;
    for (const auto& [pos, mass] : hist.atoms) stuck += mass;
    summary["stuck_fraction"] = hist.total > 0.0 ? stuck / hist.total : 0.0;
    write_summary_file(prefix + ".summary.json", summary);
  });
}

void app_showcase(const ShowcaseArgs& args) {
  const BoxModel model(make_showcase_config(args.d, args.c, args.gamma_seed));

  for_each_chain(args.common, [&](std::uint64_t seed, const std::string& prefix) {
    RngBundle rng(seed);
    PhasePoint z0;
    z0.x.assign(static_cast<std::size_t>(args.d), 0.5);
    z0.v.resize(static_cast<std::size_t>(args.d));
    for (double& vi : z0.v) vi = rng.init.sign();
    z0.region = model.region_of(z0.x);

    const ZigZag kernel(args.common.refresh);
    RunStats stats;
    const Skeleton skel =
        run_sampler(model, kernel.boundary_policy(), kernel, z0, args.common.clock, rng, {}, &stats);

    write_skeleton_file(prefix, args.common.format, skel);
    for (int c : args.trace) {
      if (c < 0 || c >= args.d) throw std::invalid_argument("trace coordinate out of range");
      std::vector<Vec> rows;
      rows.reserve(skel.records.size());
      for (const EventRecord& r : skel.records)
        rows.push_back({r.t, r.z.x[static_cast<std::size_t>(c)]});
      auto os = open_out(prefix + ".trace" + std::to_string(c) + ".csv");
      write_series_csv(os, {"t", "x"}, rows);
    }

    // support audit: all coordinates inside [0,1], repelling ones positive
    bool support_ok = true;
    double min_repelling = kInf;
    const BoxConfig& cfg = model.config();
    for (const EventRecord& r : skel.records)
      for (int i = 0; i < args.d; ++i) {
        const double xi = r.z.x[static_cast<std::size_t>(i)];
        if (xi < 0.0 || xi > 1.0) support_ok = false;
        if (cfg.coords[static_cast<std::size_t>(i)].repelling) {
          min_repelling = std::min(min_repelling, xi);
          if (xi <= 0.0) support_ok = false;
        }
      }

    json summary = run_summary(stats, model);
    summary["command"] = "showcase";
    summary["seed"] = seed;
    summary["clock"] = args.common.clock;
    summary["d"] = args.d;
    summary["c"] = args.c;
    summary["gamma_seed"] = args.gamma_seed;
    summary["support_ok"] = support_ok;
    summary["min_repelling_x"] = min_repelling;
    write_summary_file(prefix + ".summary.json", summary);
  });
}

void app_sir_simulate(const SirSimulateArgs& args) {
  const SirData params = sir_params_to_data(args.params);
  RngStream rng(args.common.seed, 7);
  const SirSimOutcome outcome =
      sir_forward_simulate(params, args.seed_case, args.params.removal_beta, rng);

  sir_write_dataset_csv(args.common.out + ".dataset.csv", outcome.data);
  std::vector<Vec> rows;
  for (int i = 0; i < outcome.data.d; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    rows.push_back({static_cast<double>(i), outcome.x_true[ii], outcome.data.tau_star[ii],
                    outcome.data.tau_circ[ii]});
  }
  auto os = open_out(args.common.out + ".truth.csv");
  write_series_csv(os, {"id", "x_true", "tau_star", "tau_circ"}, rows);

  const json summary = {{"command", "sir-simulate"}, {"seed", args.common.seed},
                        {"d", outcome.data.d},       {"T", outcome.data.T},
                        {"seed_case", args.seed_case}, {"infected", outcome.infected},
                        {"notified", outcome.notified_count}, {"removed", outcome.removed}};
  write_summary_file(args.common.out + ".summary.json", summary);
}

void app_sir_sample(const SirSampleArgs& args) {
  SirData data = sir_params_to_data(args.params);
  if (!args.data_path.empty()) {
    sir_read_dataset_csv(args.data_path, data);
  } else {
    RngStream sim(args.common.seed, 7);
    const SirSimOutcome outcome =
        sir_forward_simulate(data, args.seed_case, args.params.removal_beta, sim);
    data.tau_star = outcome.data.tau_star;
    data.tau_circ = outcome.data.tau_circ;
    sir_write_dataset_csv(args.common.out + ".dataset.csv", data);
  }

  const SirModel model(data, args.params.clamps);
  for (int m : args.marginals)
    if (m < 0 || m >= data.d) throw std::invalid_argument("marginal coordinate out of range");

  for_each_chain(args.common, [&](std::uint64_t seed, const std::string& prefix) {
    RngBundle rng(seed);
    const PhasePoint z0 = model.initial_state(rng.init);

    const ZigZag kernel(args.common.refresh);
    RunStats stats;
    const Skeleton skel =
        run_sampler(model, kernel.boundary_policy(), kernel, z0, args.common.clock, rng, {}, &stats);

    write_skeleton_file(prefix, args.common.format, skel);

    json marginals = json::array();
    for (int m : args.marginals) {
      const Histogram hist = occupation_histogram(skel, m, 0.0, data.T, args.bins);
      write_histogram_file(prefix + ".marginal" + std::to_string(m) + ".csv", hist);
      const auto mm = static_cast<std::size_t>(m);
      const MeanSe est =
          weighted_mean_se(skel, [mm](const PhasePoint& z) { return z.x[mm]; }, false);
      double atom_time = 0.0;
      for (const auto& [pos, mass] : hist.atoms) atom_time += mass;
      marginals.push_back({{"coordinate", m},
                           {"mean", est.mean},
                           {"se", est.se},
                           {"atom_fraction", hist.total > 0.0 ? atom_time / hist.total : 0.0}});
    }

    json summary = run_summary(stats, model);
    summary["command"] = "sir-sample";
    summary["seed"] = seed;
    summary["clock"] = args.common.clock;
    summary["d"] = data.d;
    summary["marginals"] = marginals;
    write_summary_file(prefix + ".summary.json", summary);
  });
}

void app_hardsphere(const HardSphereArgs& args) {
  const SphereConfig cfg =
      make_sphere_config(args.N, args.dim, teleport_rule_from(args.rule), args.common.seed);
  const HardSphereModel model(cfg);
  const Vec x0 = initial_sphere_configuration(cfg);
  const auto [big_a, big_b] = largest_pair(cfg.radii);

  for_each_chain(args.common, [&](std::uint64_t seed, const std::string& prefix) {
    RngBundle rng(seed);
    PhasePoint z0;
    z0.x = x0;
    z0.v.resize(x0.size());
    for (double& vi : z0.v) vi = rng.init.normal();

    const Bps kernel(args.common.refresh);
    RunStats stats;
    const Skeleton skel =
        run_sampler(model, kernel.boundary_policy(), kernel, z0, args.common.clock, rng, {}, &stats);

    write_skeleton_file(prefix, args.common.format, skel);

    std::vector<Vec> rows;
    rows.reserve(skel.records.size());
    for (const EventRecord& r : skel.records) {
      double dot = 0.0;
      for (int k = 0; k < args.dim; ++k)
        dot += r.z.x[static_cast<std::size_t>(big_a * args.dim + k)] *
               r.z.x[static_cast<std::size_t>(big_b * args.dim + k)];
      rows.push_back({r.t, dot});
    }
    auto os = open_out(prefix + ".trace.csv");
    write_series_csv(os, {"t", "inner_product"}, rows);

    json summary = run_summary(stats, model);
    summary["command"] = "hardsphere";
    summary["seed"] = seed;
    summary["clock"] = args.common.clock;
    summary["teleport"] = args.rule;
    summary["radii"] = cfg.radii;
    summary["traced_pair"] = {big_a, big_b};
    summary["min_gap"] = min_path_gap(skel, cfg.radii, args.dim);
    write_summary_file(prefix + ".summary.json", summary);
  });
}

}  // namespace pdmp
