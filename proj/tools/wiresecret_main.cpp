// Command line front end. JSON configs in, CSV tables out, human-readable
// summaries on stdout. Every run with the same inputs and seeds produces
// byte-identical output files.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure,
// 3 numerical failure or non-convergence.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wiresecret/access_structure.hpp"
#include "wiresecret/binning.hpp"
#include "wiresecret/channels.hpp"
#include "wiresecret/common.hpp"
#include "wiresecret/compound.hpp"
#include "wiresecret/io.hpp"
#include "wiresecret/miso.hpp"
#include "wiresecret/region.hpp"

namespace {

using namespace wiresecret;

std::string fmt(double v) { return format_double(v); }

nlohmann::json load_json(const std::string& path, const char* what) {
  return parse_json_text(read_text_file(path), what);
}

// CSV comment line for output files: the seed that shaped the run (or "none")
// plus a hash of the raw input config bytes, concatenated in option order.
std::string comment_line(const std::string& seed_text, const std::string& config_bytes) {
  return csv_comment(seed_text, fnv1a64(config_bytes));
}

void write_csv(const std::string& path, const CsvBuilder& csv) {
  write_file_atomic(path, csv.text());
  std::printf("wrote %s\n", path.c_str());
}

struct CompoundOpts {
  std::string structure_path;
  std::string channel_path;
  std::string out;
  int grid = 16;
  int refine = 3;
  int aux = 0;
};

int run_compound(const CompoundOpts& o) {
  const std::string structure_text = read_text_file(o.structure_path);
  const std::string channel_text = read_text_file(o.channel_path);
  const AccessStructure s = parse_structure(parse_json_text(structure_text, "structure file"));
  const ChannelSpec spec = parse_channel(parse_json_text(channel_text, "channel file"));
  if (spec.kind != ChannelSpec::Kind::dmc)
    throw ValidationError("compound bounds need a dmc channel; threshold structures over scalar Gaussian receivers are covered by capacity kk");
  if (spec.receiver_count() != s.participants)
    throw ValidationError("channel has " + std::to_string(spec.receiver_count()) + " receivers but structure has " +
                          std::to_string(s.participants) + " participants");

  const CompoundWiretapSpec cw = build_compound(s);
  GridSearchConfig cfg;
  cfg.step = o.grid;
  cfg.refine_rounds = o.refine;
  cfg.aux_size = o.aux;
  const BoundReport lower = lower_bound_dmc(cw, spec.dmc, cfg);
  const UpperBoundReport upper = upper_bound_dmc(cw, spec.dmc, cfg);

  std::printf("participants          %d\n", cw.participants);
  std::printf("virtual receivers     %zu\n", cw.legitimate.size());
  std::printf("virtual eavesdroppers %zu\n", cw.eavesdroppers.size());
  if (cw.trivially_zero)
    std::printf("note: some qualified set lies inside a forbidden set, the capacity is zero\n");
  std::printf("lower bound           %s bits (raw %s)\n", fmt(lower.value).c_str(), fmt(lower.raw).c_str());
  std::printf("upper bound           %s bits (raw %s) at pair (%s, %s)\n", fmt(upper.value).c_str(),
              fmt(upper.raw).c_str(), subset_to_string(upper.arg_legitimate).c_str(),
              subset_to_string(upper.arg_eavesdropper).c_str());
  if (lower.boundary)
    std::printf("note: the lower bound maximizer sits on the grid simplex boundary, consider a finer --grid\n");

  if (!o.out.empty()) {
    std::vector<PairBound> pairs = upper.pairs;
    std::sort(pairs.begin(), pairs.end(), [](const PairBound& a, const PairBound& b) {
      return std::make_pair(a.legitimate, a.eavesdropper) < std::make_pair(b.legitimate, b.eavesdropper);
    });
    CsvBuilder csv({"row", "legitimate", "eavesdropper", "value_bits", "raw_bits"},
                   comment_line("none", structure_text + channel_text));
    csv.add_row({"lower", "", "", fmt(lower.value), fmt(lower.raw)});
    for (const PairBound& p : pairs)
      csv.add_row({"pair", subset_to_string(p.legitimate), subset_to_string(p.eavesdropper), fmt(p.value),
                   fmt(p.raw)});
    csv.add_row({"upper", subset_to_string(upper.arg_legitimate), subset_to_string(upper.arg_eavesdropper),
                 fmt(upper.value), fmt(upper.raw)});
    write_csv(o.out, csv);
  }
  return 0;
}

struct RegionSisoOpts {
  std::string channel_path;
  std::string out;
  std::vector<double> weights;
  int grid = 32;
  int refine = 3;
};

int run_region_siso(const RegionSisoOpts& o) {
  const std::string channel_text = read_text_file(o.channel_path);
  const ChannelSpec spec = parse_channel(parse_json_text(channel_text, "channel file"));
  if (spec.kind != ChannelSpec::Kind::siso) throw ValidationError("region siso needs a channel of type siso");
  const int K = spec.receiver_count();

  std::vector<std::string> header;
  for (int k = 1; k <= K; ++k) header.push_back("P_" + std::to_string(k));
  for (int k = 1; k <= K; ++k) header.push_back("R_" + std::to_string(k));
  auto sample_row = [K](const std::vector<double>& allocation, const RateTuple& rates) {
    std::vector<std::string> row;
    for (int k = 0; k < K; ++k) row.push_back(fmt(allocation[k]));
    for (int k = 0; k < K; ++k) row.push_back(fmt(rates.rates[k]));
    return row;
  };

  if (!o.weights.empty()) {
    const SisoBoundaryResult res = weighted_boundary_search(spec.siso, o.weights, o.grid, o.refine);
    std::printf("weighted rate sum %s bits\n", fmt(res.value).c_str());
    for (int k = 0; k < K; ++k)
      std::printf("receiver %d  power %s  rate %s\n", k + 1, fmt(res.allocation[k]).c_str(),
                  fmt(res.rates.rates[k]).c_str());
    if (!o.out.empty()) {
      CsvBuilder csv(header, comment_line("none", channel_text));
      csv.add_row(sample_row(res.allocation, res.rates));
      write_csv(o.out, csv);
    }
    return 0;
  }

  std::vector<SisoSample> samples = siso_region_samples(spec.siso, o.grid);
  std::sort(samples.begin(), samples.end(),
            [](const SisoSample& a, const SisoSample& b) { return a.allocation < b.allocation; });
  double best_sum = 0.0;
  for (const SisoSample& s : samples) best_sum = std::max(best_sum, s.rates.sum());
  std::printf("sampled %zu power allocations on a 1/%d grid, best sum rate %s bits\n", samples.size(), o.grid,
              fmt(best_sum).c_str());
  if (!o.out.empty()) {
    CsvBuilder csv(header, comment_line("none", channel_text));
    for (const SisoSample& s : samples) csv.add_row(sample_row(s.allocation, s.rates));
    write_csv(o.out, csv);
  }
  return 0;
}

struct RegionMimoOpts {
  std::string channel_path;
  std::string out;
  std::vector<double> weights;
  int alpha_grid = 10;
  int perturbations = 200;
  std::uint64_t seed = 1;
};

int run_region_mimo(const RegionMimoOpts& o) {
  const std::string channel_text = read_text_file(o.channel_path);
  const ChannelSpec spec = parse_channel(parse_json_text(channel_text, "channel file"));
  if (spec.kind != ChannelSpec::Kind::mimo) throw ValidationError("region mimo needs a channel of type mimo");
  const int K = spec.receiver_count();

  MimoBoundaryConfig cfg;
  cfg.alpha_grid = o.alpha_grid;
  cfg.perturbations = o.perturbations;
  cfg.seed = o.seed;
  const MimoBoundaryResult res = weighted_boundary_search(spec.mimo, o.weights, cfg);

  std::printf("weighted rate sum %s bits (heuristic search, inner point of the region)\n", fmt(res.value).c_str());
  for (int k = 0; k < K; ++k) std::printf("receiver %d  rate %s\n", k + 1, fmt(res.rates.rates[k]).c_str());
  for (std::size_t l = 0; l < res.chain.layers.size(); ++l) {
    std::printf("layer %zu cumulative covariance:\n", l + 1);
    const Eigen::MatrixXd& m = res.chain.layers[l];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::printf(" ");
      for (Eigen::Index c = 0; c < m.cols(); ++c) std::printf(" %s", fmt(m(r, c)).c_str());
      std::printf("\n");
    }
  }
  if (!o.out.empty()) {
    CsvBuilder csv({"receiver", "rate_bits", "raw_bits"}, comment_line(std::to_string(o.seed), channel_text));
    for (int k = 0; k < K; ++k)
      csv.add_row({std::to_string(k + 1), fmt(res.rates.rates[k]), fmt(res.rates.raw[k])});
    write_csv(o.out, csv);
  }
  return 0;
}

struct MisoOpts {
  std::string instance_path;
  std::string chain_path;
  std::string out;
};

int run_miso(const MisoOpts& o) {
  const std::string instance_text = read_text_file(o.instance_path);
  const std::string chain_text = read_text_file(o.chain_path);
  const MisoSharingInstance inst = parse_miso_instance(parse_json_text(instance_text, "instance file"));
  const CovarianceChain chain = parse_covariance_chain(parse_json_text(chain_text, "chain file"));

  const MisoLimitResult res = limit_rate_tuple(inst, chain);
  const int K = inst.receiver_count();

  std::printf("virtual receiver scale steps %zu, converged %s\n", res.trace.size(), res.converged ? "yes" : "no");
  for (int k = 0; k < K; ++k) std::printf("receiver %d  rate %s\n", k + 1, fmt(res.limit.rates[k]).c_str());

  if (!o.out.empty()) {
    std::vector<std::string> header{"scale"};
    for (int k = 1; k <= K; ++k) header.push_back("R_" + std::to_string(k));
    CsvBuilder csv(header, comment_line("none", instance_text + chain_text));
    for (const MisoLimitStep& step : res.trace) {
      std::vector<std::string> row{fmt(step.scale)};
      for (int k = 0; k < K; ++k) row.push_back(fmt(step.rates.rates[k]));
      csv.add_row(row);
    }
    write_csv(o.out, csv);
  }
  if (!res.converged) {
    std::fprintf(stderr, "error: rate tuples did not settle within %s across the scale doubling budget\n",
                 fmt(kVirtualConvergenceTol).c_str());
    return 3;
  }
  return 0;
}

struct SimulateOpts {
  std::string config_path;
  std::string out;
  std::vector<int> block_lengths{1};
  int seeds = 1;
};

int run_simulate(const SimulateOpts& o) {
  const std::string config_text = read_text_file(o.config_path);
  const BinningConfig cfg = parse_sim_config(parse_json_text(config_text, "simulation config"));
  if (o.seeds < 1) throw ValidationError("need at least one seed");
  if (o.block_lengths.empty()) throw ValidationError("need at least one block length");
  for (std::size_t i = 0; i < o.block_lengths.size(); ++i) {
    if (o.block_lengths[i] < 1) throw ValidationError("block lengths must be positive");
    if (i > 0 && o.block_lengths[i] <= o.block_lengths[i - 1])
      throw ValidationError("block lengths must be strictly increasing");
  }

  const DegradednessReport deg = check_degraded_chain(cfg.channel);
  if (!deg.degraded) {
    std::fprintf(stderr,
                 "error: channel is not degraded along the receiver order, best intermediate channel leaves "
                 "residual %s (tolerance %s)\n",
                 fmt(deg.residual).c_str(), fmt(kDegradedFeasibilityTol).c_str());
    return 2;
  }

  const LeakageTrendResult trend = leakage_trend(cfg, o.block_lengths, o.seeds);
  const int K = cfg.channel.receiver_count();
  for (int k = 0; k < K; ++k)
    std::printf("receiver %d  mean leakage nonincreasing across fraction %s of adjacent block length pairs\n",
                k + 1, fmt(trend.nonincreasing_fraction[static_cast<std::size_t>(k)]).c_str());

  if (!o.out.empty()) {
    CsvBuilder csv({"n", "seed", "receiver", "error_prob", "leakage_bits_per_symbol"},
                   comment_line(std::to_string(cfg.seed), config_text));
    for (const SimulationRow& row : trend.rows)
      csv.add_row({std::to_string(row.block_length), std::to_string(row.seed_index), std::to_string(row.receiver),
                   fmt(row.error_prob), fmt(row.leakage_bits_per_symbol)});
    write_csv(o.out, csv);
  }
  return 0;
}

struct CapacityKkOpts {
  double power = 0.0;
  std::vector<double> noise;
  int k = 1;
};

int run_capacity_kk(const CapacityKkOpts& o) {
  std::printf("%s\n", fmt(capacity_kK(o.power, o.noise, o.k)).c_str());
  return 0;
}

struct ValidateOpts {
  std::string structure_path;
  std::string channel_path;
  std::string config_path;
};

int run_validate(const ValidateOpts& o) {
  if (o.structure_path.empty() && o.channel_path.empty() && o.config_path.empty()) {
    std::fprintf(stderr, "error: validate needs --structure, --channel, or --config\n");
    return 1;
  }
  bool ok = true;

  if (!o.structure_path.empty()) {
    try {
      const AccessStructure s = parse_structure(load_json(o.structure_path, "structure file"));
      const StructureReport report = validate(s);
      if (report.valid) {
        std::printf("structure: ok, %d participants\n", s.participants);
        std::printf("  minimal qualified:");
        for (SubsetMask m : minimal_qualified(s.qualified)) std::printf(" %s", subset_to_string(m).c_str());
        std::printf("\n  maximal forbidden:");
        for (SubsetMask m : maximal_forbidden(s.forbidden)) std::printf(" %s", subset_to_string(m).c_str());
        std::printf("\n");
      } else {
        ok = false;
        std::printf("structure: invalid\n");
        for (const auto& issue : report.issues) std::printf("  %s\n", issue.c_str());
        for (const auto& [q, f] : report.conflicts)
          std::printf("  conflict: qualified %s inside forbidden %s\n", subset_to_string(q).c_str(),
                      subset_to_string(f).c_str());
      }
    } catch (const ValidationError& e) {
      ok = false;
      std::printf("structure: invalid\n  %s\n", e.what());
    }
  }

  if (!o.channel_path.empty()) {
    try {
      const ChannelSpec spec = parse_channel(load_json(o.channel_path, "channel file"));
      switch (spec.kind) {
        case ChannelSpec::Kind::dmc: {
          std::printf("channel: ok, dmc with %d receivers, %d inputs\n", spec.receiver_count(),
                      static_cast<int>(spec.dmc.input_size()));
          const DegradednessReport deg = check_degraded_chain(spec.dmc);
          std::printf("  degraded along receiver order: %s (residual %s)\n", deg.degraded ? "yes" : "no",
                      fmt(deg.residual).c_str());
          break;
        }
        case ChannelSpec::Kind::siso:
          std::printf("channel: ok, scalar Gaussian with %d receivers, power %s\n", spec.receiver_count(),
                      fmt(spec.siso.power).c_str());
          break;
        case ChannelSpec::Kind::mimo:
          std::printf("channel: ok, vector Gaussian with %d receivers, dimension %d\n", spec.receiver_count(),
                      static_cast<int>(spec.mimo.dimension()));
          break;
      }
    } catch (const ValidationError& e) {
      ok = false;
      std::printf("channel: invalid\n  %s\n", e.what());
    }
  }

  if (!o.config_path.empty()) {
    try {
      const BinningConfig cfg = parse_sim_config(load_json(o.config_path, "simulation config"));
      const RateValidationReport report = validate_rates(cfg);
      std::printf("simulation config: %s at block length %d\n",
                  report.admissible ? "admissible" : "not admissible", cfg.block_length);
      for (std::size_t k = 0; k < report.counts.size(); ++k)
        std::printf("  layer %zu  messages %llu  codewords %llu  bins %llu\n", k + 1,
                    static_cast<unsigned long long>(report.counts[k].messages),
                    static_cast<unsigned long long>(report.counts[k].codewords),
                    static_cast<unsigned long long>(report.counts[k].bins));
      for (std::size_t k = 0; k < report.decode_slack.size(); ++k)
        std::printf("  decode slack layer %zu: %s\n", k + 1, fmt(report.decode_slack[k]).c_str());
      for (Eigen::Index j = 1; j < report.secrecy_slack.rows(); ++j)
        for (Eigen::Index r = 0; r < j; ++r)
          std::printf("  secrecy slack layer %d against receiver %d: %s\n", static_cast<int>(j) + 1,
                      static_cast<int>(r) + 1, fmt(report.secrecy_slack(j, r)).c_str());
      for (const auto& issue : report.issues) std::printf("  %s\n", issue.c_str());
      if (!report.admissible) ok = false;
    } catch (const ValidationError& e) {
      ok = false;
      std::printf("simulation config: invalid\n  %s\n", e.what());
    }
  }

  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secrecy capacity bounds and layered secrecy rate regions over noisy broadcast channels"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  std::function<int()> action;

  auto* compound = app.add_subcommand("compound", "capacity bounds for an access structure over a dmc");
  {
    auto o = std::make_shared<CompoundOpts>();
    compound->add_option("--structure", o->structure_path, "access structure JSON file")->required();
    compound->add_option("--channel", o->channel_path, "broadcast channel JSON file")->required();
    compound->add_option("--grid", o->grid, "simplex grid resolution for the input law search");
    compound->add_option("--refine", o->refine, "refinement rounds after the grid sweep");
    compound->add_option("--aux", o->aux, "auxiliary alphabet size, 0 means input size plus one");
    compound->add_option("--out", o->out, "CSV output path for the per-pair bounds");
    compound->callback([o, &action] { action = [o] { return run_compound(*o); }; });
  }

  auto* region = app.add_subcommand("region", "layered secrecy rate regions");
  region->require_subcommand(1);
  {
    auto o = std::make_shared<RegionSisoOpts>();
    auto* siso = region->add_subcommand("siso", "scalar Gaussian region over power allocations");
    siso->add_option("--channel", o->channel_path, "siso channel JSON file")->required();
    siso->add_option("--grid", o->grid, "power grid resolution");
    siso->add_option("--refine", o->refine, "refinement rounds for the weighted search");
    siso->add_option("--weights", o->weights, "per-receiver weights, maximize the weighted rate sum")
        ->delimiter(',');
    siso->add_option("--out", o->out, "CSV output path");
    siso->callback([o, &action] { action = [o] { return run_region_siso(*o); }; });
  }
  {
    auto o = std::make_shared<RegionMimoOpts>();
    auto* mimo = region->add_subcommand("mimo", "vector Gaussian region via covariance chain search");
    mimo->add_option("--channel", o->channel_path, "mimo channel JSON file")->required();
    mimo->add_option("--weights", o->weights, "per-receiver weights, maximize the weighted rate sum")
        ->required()
        ->delimiter(',');
    mimo->add_option("--alpha-grid", o->alpha_grid, "scaled-cap composition grid resolution");
    mimo->add_option("--perturbations", o->perturbations, "random chain perturbations to try");
    mimo->add_option("--seed", o->seed, "seed for the perturbation search");
    mimo->add_option("--out", o->out, "CSV output path");
    mimo->callback([o, &action] { action = [o] { return run_region_mimo(*o); }; });
  }

  auto* miso = app.add_subcommand("miso", "virtual receiver limit rates for a single-antenna-receiver instance");
  {
    auto o = std::make_shared<MisoOpts>();
    miso->add_option("--instance", o->instance_path, "instance JSON file")->required();
    miso->add_option("--chain", o->chain_path, "covariance chain JSON file")->required();
    miso->add_option("--out", o->out, "CSV output path for the scale trace");
    miso->callback([o, &action] { action = [o] { return run_miso(*o); }; });
  }

  auto* simulate = app.add_subcommand("simulate", "layered binning simulation over a degraded dmc");
  {
    auto o = std::make_shared<SimulateOpts>();
    simulate->add_option("--config", o->config_path, "simulation config JSON file")->required();
    simulate->add_option("--n", o->block_lengths, "block lengths, strictly increasing")->delimiter(',');
    simulate->add_option("--seeds", o->seeds, "codebook seeds per block length");
    simulate->add_option("--out", o->out, "CSV output path for the per-run rows");
    simulate->callback([o, &action] { action = [o] { return run_simulate(*o); }; });
  }

  auto* capacity = app.add_subcommand("capacity", "closed-form capacities");
  capacity->require_subcommand(1);
  {
    auto o = std::make_shared<CapacityKkOpts>();
    auto* kk = capacity->add_subcommand("kk", "k-of-K threshold capacity over scalar Gaussian receivers");
    kk->add_option("--power,-P", o->power, "transmit power")->required();
    kk->add_option("--noise,-N", o->noise, "per-receiver noise variances")->required()->delimiter(',');
    kk->add_option("--k,-k", o->k, "threshold")->required();
    kk->callback([o, &action] { action = [o] { return run_capacity_kk(*o); }; });
  }

  auto* validate_cmd = app.add_subcommand("validate", "check inputs and report certificates");
  {
    auto o = std::make_shared<ValidateOpts>();
    validate_cmd->add_option("--structure", o->structure_path, "access structure JSON file");
    validate_cmd->add_option("--channel", o->channel_path, "channel JSON file");
    validate_cmd->add_option("--config", o->config_path, "simulation config JSON file");
    validate_cmd->callback([o, &action] { action = [o] { return run_validate(*o); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    return action ? action() : 0;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
