// Acceptance gate. Runs every shipped guarantee end to end at its stated
// tolerance and time budget and prints exactly one [PASS]/[FAIL] line per
// criterion. The single argument is the path to the command line binary,
// exercised by the reproducibility criterion. Exits 0 only when every
// criterion passes.

#include <sys/wait.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wiresecret/access_structure.hpp"
#include "wiresecret/binning.hpp"
#include "wiresecret/channels.hpp"
#include "wiresecret/common.hpp"
#include "wiresecret/compound.hpp"
#include "wiresecret/linalg.hpp"
#include "wiresecret/miso.hpp"
#include "wiresecret/region.hpp"

namespace ws = wiresecret;

namespace {

struct Outcome {
  bool pass = false;
  std::string note;
};

Eigen::MatrixXd bsc(double p) {
  Eigen::MatrixXd w(2, 2);
  w << 1 - p, p, p, 1 - p;
  return w;
}

Eigen::MatrixXd bec(double e) {
  Eigen::MatrixXd w(2, 3);
  w << 1 - e, e, 0, 0, e, 1 - e;
  return w;
}

Eigen::MatrixXd random_stochastic(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    double sum = 0;
    for (int c = 0; c < cols; ++c) sum += (m(r, c) = unif(rng));
    m.row(r) /= sum;
  }
  return m;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Criterion 1: at dimension one the vector Gaussian rate tuple must reproduce
// the scalar closed forms on random powers, noises, and allocations.
Outcome scalar_consistency() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.1, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int K = 1 + static_cast<int>(rng() % 4);
    std::vector<double> noise(K), alloc(K);
    double scale = 2.0 + unif(rng);
    for (int k = 0; k < K; ++k) {
      noise[k] = scale;
      scale *= 0.3 + 0.2 * unif(rng);
      alloc[k] = unif(rng);
    }
    ws::GaussianSisoBroadcast siso{noise, 0.0};
    for (double p : alloc) siso.power += p;

    ws::GaussianMimoBroadcast mimo;
    for (int k = 0; k < K; ++k) mimo.noise_covariances.push_back(Eigen::MatrixXd::Constant(1, 1, noise[k]));
    mimo.input_cap = Eigen::MatrixXd::Constant(1, 1, siso.power);
    ws::CovarianceChain chain;
    chain.cap = mimo.input_cap;
    double tail = siso.power;
    for (int k = 0; k < K - 1; ++k) {
      tail -= alloc[k];
      chain.layers.push_back(Eigen::MatrixXd::Constant(1, 1, tail));
    }
    const ws::RateTuple ts = ws::siso_rate_tuple(siso, alloc);
    const ws::RateTuple tm = ws::mimo_rate_tuple(mimo, chain);
    for (int k = 0; k < K; ++k) worst = std::max(worst, std::abs(ts.rates[k] - tm.rates[k]));
  }
  if (worst > 1e-10) return {false, "max rate difference " + fmt3(worst)};
  return {true, ""};
}

// Criterion 2: with unit noises the threshold capacity depends on the
// threshold alone, bitwise identically across the participant count.
Outcome threshold_k_independence() {
  for (double power : {0.5, 1.0, 2.0})
    for (int k = 1; k <= 3; ++k) {
      const double reference = ws::capacity_kK(power, std::vector<double>(k, 1.0), k);
      for (int K = k; K <= k + 3; ++K) {
        const double value = ws::capacity_kK(power, std::vector<double>(K, 1.0), k);
        if (value != reference)
          return {false, "P=" + fmt3(power) + " k=" + std::to_string(k) + " K=" + std::to_string(K) +
                             " differs by " + fmt3(value - reference)};
      }
    }
  return {true, ""};
}

// Criterion 3: the equivalent virtual receiver covariances must decrease
// along the receiver order at every boost scale.
Outcome virtual_ordering() {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int K = 2 + static_cast<int>(rng() % 3);
    ws::MisoSharingInstance inst;
    do {
      inst.channel = Eigen::MatrixXd::Identity(K, K);
      for (int r = 0; r < K; ++r)
        for (int c = 0; c < K; ++c) inst.channel(r, c) += 0.3 * (unif(rng) - 0.5);
    } while (ws::condition_number(inst.channel) >= 1e6);
    Eigen::MatrixXd a(K, K);
    for (int r = 0; r < K; ++r)
      for (int c = 0; c < K; ++c) a(r, c) = unif(rng) - 0.5;
    inst.noise = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(K, K);
    inst.input_cap = Eigen::MatrixXd::Identity(K, K);
    for (int k = 0; k < K - 1; ++k) inst.boost_variances.push_back(0.5 + 1.5 * unif(rng));

    for (double scale : {1.0, 10.0, 100.0}) {
      const ws::VirtualCovariances vc = ws::build_virtual(inst, scale);
      const ws::OrderingReport report = ws::check_ordering(vc, 1e-8);
      for (double eig : report.min_eigenvalues) worst = std::min(worst, eig);
      if (!report.ordered)
        return {false, "trial " + std::to_string(trial) + " scale " + fmt3(scale) + " min eigenvalue " +
                           fmt3(*std::min_element(report.min_eigenvalues.begin(), report.min_eigenvalues.end()))};
    }
  }
  return {true, "min eigenvalue " + fmt3(worst)};
}

// Criterion 4: on the diagonal two-receiver instance the scale limit must
// converge and land on the per-component closed form.
Outcome miso_limit_oracle() {
  ws::MisoSharingInstance inst;
  inst.channel = Eigen::MatrixXd::Identity(2, 2);
  inst.noise = Eigen::MatrixXd::Identity(2, 2);
  inst.input_cap = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  inst.boost_variances = {1.0};
  ws::CovarianceChain chain;
  chain.cap = inst.input_cap;
  chain.layers = {Eigen::MatrixXd::Identity(2, 2)};

  const ws::MisoLimitResult result = ws::limit_rate_tuple(inst, chain);
  if (!result.converged) return {false, "limit did not converge"};
  const double r1 = 0.5 * std::log2(1.5);  // component 1: (1+2)/(1+1)
  const double r2 = 0.5;                   // component 2: (1+1)/(1+0)
  const double d1 = std::abs(result.limit.rates[0] - r1);
  const double d2 = std::abs(result.limit.rates[1] - r2);
  if (d1 > 1e-5 || d2 > 1e-5) return {false, "limit off by " + fmt3(std::max(d1, d2))};
  return {true, ""};
}

// Criterion 5: the worst-case lower bound never exceeds the pairwise upper
// bound, and the independent erasure pair lands on 1/4 at a fine grid.
Outcome compound_sandwich() {
  std::mt19937_64 rng(5);
  double worst_slack = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    const int K = 2 + static_cast<int>(rng() % 2);
    const int inputs = 2 + static_cast<int>(rng() % 2);
    ws::DmcBroadcast ch;
    for (int k = 0; k < K; ++k) ch.transitions.push_back(random_stochastic(rng, inputs, 2 + rng() % 2));
    const int m = 1 + static_cast<int>(rng() % K);
    const ws::CompoundWiretapSpec spec = ws::build_compound(ws::threshold_structure(m, K));
    ws::GridSearchConfig cfg;
    cfg.step = inputs == 2 ? 8 : 4;
    const ws::BoundReport lower = ws::lower_bound_dmc(spec, ch, cfg);
    const ws::UpperBoundReport upper = ws::upper_bound_dmc(spec, ch, cfg);
    worst_slack = std::min(worst_slack, upper.raw - lower.raw);
    if (upper.raw - lower.raw < -1e-6)
      return {false, "trial " + std::to_string(trial) + " lower exceeds upper by " + fmt3(lower.raw - upper.raw)};
  }

  const ws::CompoundWiretapSpec pair = ws::build_compound(ws::threshold_structure(2, 2));
  ws::DmcBroadcast erasure{{bec(0.5), bec(0.5)}};
  ws::GridSearchConfig fine;
  fine.step = 64;
  const ws::BoundReport lower = ws::lower_bound_dmc(pair, erasure, fine);
  const ws::UpperBoundReport upper = ws::upper_bound_dmc(pair, erasure, fine);
  if (std::abs(lower.value - 0.25) > 2e-3 || std::abs(upper.value - 0.25) > 2e-3)
    return {false, "erasure pair bounds " + fmt3(lower.value) + ", " + fmt3(upper.value) + " off 0.25"};
  if (upper.raw - lower.raw < -1e-6) return {false, "erasure pair lower exceeds upper"};
  return {true, "min pair slack " + fmt3(worst_slack)};
}

// Criterion 6: the degradation program must recover the cascade crossover of
// two binary symmetric channels and reject the reversed order.
Outcome degradedness_checker() {
  ws::DmcBroadcast forward{{bsc(0.2), bsc(0.1)}};
  const ws::DegradednessReport good = ws::check_degraded_dmc(forward, 2);
  if (!good.degraded) return {false, "cascade declared infeasible, residual " + fmt3(good.residual)};
  const double q01 = good.intermediate(0, 1);
  const double q10 = good.intermediate(1, 0);
  if (std::abs(q01 - 0.125) > 1e-6 || std::abs(q10 - 0.125) > 1e-6)
    return {false, "recovered crossover " + fmt3(q01) + ", " + fmt3(q10) + " off 0.125"};

  ws::DmcBroadcast reversed{{bsc(0.1), bsc(0.2)}};
  const ws::DegradednessReport bad = ws::check_degraded_dmc(reversed, 2);
  if (bad.degraded) return {false, "reversed order declared feasible"};
  return {true, ""};
}

// Independent maximum likelihood enumeration for a one-layer codebook,
// following the shared documented conventions: per-pair transition counts
// multiplied in row-major order, outputs enumerated with the last symbol as
// the fastest digit, ties to the smallest index, one running error sum.
double oracle_single_layer_error(const ws::LayeredCodebook& cb, const Eigen::MatrixXd& w) {
  const int n = cb.block_length();
  const std::uint64_t m = cb.rows(1);
  const int ysize = static_cast<int>(w.cols());
  std::uint64_t outputs = 1;
  for (int i = 0; i < n; ++i) outputs *= static_cast<std::uint64_t>(ysize);

  std::vector<int> y(static_cast<std::size_t>(n), 0);
  double err = 0.0;
  for (std::uint64_t flat = 0; flat < outputs; ++flat) {
    std::vector<double> likes(m);
    for (std::uint64_t cw = 0; cw < m; ++cw) {
      Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(w.rows(), w.cols());
      for (int i = 0; i < n; ++i) counts(cb.symbol(1, cw, i), y[i]) += 1;
      double like = 1.0;
      for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c)
          for (int t = 0; t < counts(r, c); ++t) like *= w(r, c);
      likes[cw] = like;
    }
    std::uint64_t best = 0;
    for (std::uint64_t cw = 1; cw < m; ++cw)
      if (likes[cw] > likes[best]) best = cw;
    for (std::uint64_t cw = 0; cw < m; ++cw)
      if (cw != best) err += likes[cw];
    int i = n - 1;
    while (i >= 0 && ++y[i] == ysize) y[i--] = 0;
  }
  return err / static_cast<double>(m);
}

// Criterion 7: the exact block error matches the enumeration oracle bitwise
// and a Monte Carlo estimate stays inside the binomial three sigma band.
Outcome simulator_exactness() {
  ws::BinningConfig cfg;
  cfg.chain.first = Eigen::VectorXd::Constant(2, 0.5);
  cfg.channel.transitions = {bsc(0.1)};
  cfg.block_length = 6;
  cfg.message_rates = {std::log2(4.0) / 6.0};
  cfg.codebook_rates = {std::log2(4.0) / 6.0};
  cfg.seed = 5;
  const ws::LayeredCodebook cb(cfg);

  const double exact = cb.exact_error_probability(1);
  const double oracle = oracle_single_layer_error(cb, cfg.channel.transitions[0]);
  if (exact != oracle) return {false, "exact " + fmt3(exact) + " differs from oracle " + fmt3(oracle)};

  const auto mc = cb.mc_error_probability(1, 100000, 99);
  const double sigma = std::sqrt(exact * (1.0 - exact) / 100000.0);
  if (std::abs(mc.estimate - exact) > 3.0 * sigma)
    return {false, "Monte Carlo " + fmt3(mc.estimate) + " outside 3 sigma of " + fmt3(exact)};
  return {true, "error probability " + fmt3(exact)};
}

// Criterion 8: exact-zero leakage through an independent output, exact
// full-rate leakage through a noiseless unbinned block, and a nonincreasing
// mean leakage trend on a conforming two-receiver configuration.
Outcome leakage_properties() {
  ws::BinningConfig base;
  base.chain.first = Eigen::VectorXd::Ones(1);
  base.chain.factors = {Eigen::MatrixXd::Constant(1, 2, 0.5)};
  base.block_length = 2;
  base.message_rates = {0.0, 0.5};
  base.codebook_rates = {0.0, 1.0};

  // Output independent of the input: exactly zero bits leak.
  ws::BinningConfig indep = base;
  indep.channel.transitions = {bsc(0.5), Eigen::MatrixXd::Identity(2, 2)};
  indep.seed = 3;
  const double zero_leak = ws::LayeredCodebook(indep).exact_leakage(1);
  if (zero_leak != 0.0) return {false, "independent output leaks " + fmt3(zero_leak)};

  // Injective noiseless block with no bin randomness: the full layer-two
  // message rate leaks, exactly.
  ws::BinningConfig noiseless = base;
  noiseless.channel.transitions = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  noiseless.codebook_rates = {0.0, 0.5};
  bool injective_found = false;
  for (std::uint64_t seed = 1; seed <= 64 && !injective_found; ++seed) {
    noiseless.seed = seed;
    const ws::LayeredCodebook cb(noiseless);
    bool distinct = false;
    for (int i = 0; i < cb.block_length(); ++i) distinct |= cb.symbol(2, 0, i) != cb.symbol(2, 1, i);
    if (!distinct) continue;
    injective_found = true;
    const double leak = cb.exact_leakage(1);
    if (leak != 0.5) return {false, "noiseless unbinned block leaks " + fmt3(leak) + " not 0.5"};
  }
  if (!injective_found) return {false, "no injective codebook seed found"};

  // Conforming configuration: admissible at every block length, and the mean
  // exact leakage over 20 seeds must not increase for at least 3 of the 4
  // adjacent block length pairs.
  ws::BinningConfig trend = base;
  trend.channel.transitions = {bsc(0.3), Eigen::MatrixXd::Identity(2, 2)};
  trend.seed = 1;
  const std::vector<int> lengths{2, 4, 6, 8};
  for (int n : lengths) {
    ws::BinningConfig probe = trend;
    probe.block_length = n;
    if (!ws::validate_rates(probe).admissible)
      return {false, "trend configuration not admissible at n=" + std::to_string(n)};
  }
  const ws::LeakageTrendResult result = ws::leakage_trend(trend, lengths, 20);
  if (result.nonincreasing_fraction[0] < 0.75)
    return {false, "mean leakage nonincreasing for only fraction " + fmt3(result.nonincreasing_fraction[0])};
  return {true, "trend fraction " + fmt3(result.nonincreasing_fraction[0])};
}

// Criterion 9: the residual interference rate 1/2 (logdet(A+B+tD) -
// logdet(A+tD)) must be nonincreasing in the boost t.
Outcome interference_monotone() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto random_psd = [&](int d) {
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = unif(rng);
    return Eigen::MatrixXd(m * m.transpose());
  };
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const Eigen::MatrixXd a = random_psd(d) + 0.3 * Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd b = random_psd(d);
    const Eigen::MatrixXd delta = random_psd(d);
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 100; ++j) {
      const double t = 0.1 * j;
      const double r = 0.5 * (ws::logdet2_pd(a + b + t * delta) - ws::logdet2_pd(a + t * delta));
      worst = std::max(worst, r - prev);
      if (r > prev + 1e-10)
        return {false, "trial " + std::to_string(trial) + " increases by " + fmt3(r - prev) + " at t=" + fmt3(t)};
      prev = r;
    }
  }
  return {true, "max increase " + fmt3(worst)};
}

// Full joint enumeration oracle for the layered rates over a discrete chain:
// builds the complete law of (U_1..U_{K-1}, X) and projects entropies
// directly, independent of the library's conditional factorization.
struct FullJointOracle {
  std::vector<std::vector<int>> tuples;
  std::vector<double> probs;

  FullJointOracle(const ws::MarkovChain& chain) {
    std::vector<Eigen::Index> sizes{chain.first.size()};
    for (const auto& f : chain.factors) sizes.push_back(f.cols());
    std::vector<int> tuple(sizes.size(), 0);
    build(chain, sizes, tuple, 0, 1.0);
  }

  void build(const ws::MarkovChain& chain, const std::vector<Eigen::Index>& sizes, std::vector<int>& tuple,
             std::size_t level, double p) {
    if (level == sizes.size()) {
      tuples.push_back(tuple);
      probs.push_back(p);
      return;
    }
    for (int v = 0; v < sizes[level]; ++v) {
      tuple[level] = v;
      const double step = level == 0 ? chain.first(v) : chain.factors[level - 1](tuple[level - 1], v);
      build(chain, sizes, tuple, level + 1, p * step);
    }
  }

  double entropy(const ws::DmcBroadcast& ch, int rec, const std::vector<int>& levels) const {
    std::map<std::vector<int>, double> table;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      const int x = tuples[i].back();
      std::vector<int> key;
      for (int l : levels) key.push_back(tuples[i][l]);
      if (rec < 0) {
        table[key] += probs[i];
      } else {
        for (int y = 0; y < ch.transitions[rec].cols(); ++y) {
          std::vector<int> with_y = key;
          with_y.push_back(y);
          table[with_y] += probs[i] * ch.transitions[rec](x, y);
        }
      }
    }
    double h = 0;
    for (const auto& [key, p] : table)
      if (p > 0) h -= p * std::log2(p);
    return h;
  }

  double cond_mi(const ws::DmcBroadcast& ch, int rec, int level_a, int level_b) const {
    std::vector<int> a{level_a}, ab{level_a, level_b};
    const double ha = entropy(ch, -1, a);
    return (entropy(ch, -1, ab) - ha) + (entropy(ch, rec, a) - ha) - (entropy(ch, rec, ab) - ha);
  }

  double first_rate(const ws::DmcBroadcast& ch) const {
    return entropy(ch, -1, {0}) + entropy(ch, 0, {}) - entropy(ch, 0, {0});
  }
};

// Criterion 10: layered discrete rates equal the full joint enumeration.
Outcome dmc_region_oracle() {
  std::mt19937_64 rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int K = 2 + static_cast<int>(rng() % 2);
    const int inputs = 2 + static_cast<int>(rng() % 2);
    std::vector<Eigen::MatrixXd> w(K);
    w[K - 1] = random_stochastic(rng, inputs, 2 + rng() % 2);
    for (int k = K - 2; k >= 0; --k) w[k] = w[k + 1] * random_stochastic(rng, w[k + 1].cols(), 2 + rng() % 2);
    ws::DmcBroadcast ch{w};

    ws::MarkovChain chain;
    const int u1 = 2 + static_cast<int>(rng() % 2);
    chain.first = random_stochastic(rng, 1, u1).row(0);
    int width = u1;
    for (int l = 0; l < K - 1; ++l) {
      const int next = (l == K - 2) ? inputs : 2 + static_cast<int>(rng() % 2);
      chain.factors.push_back(random_stochastic(rng, width, next));
      width = next;
    }

    const ws::RateTuple t = ws::dmc_rate_tuple(chain, ch);
    const FullJointOracle oracle(chain);
    worst = std::max(worst, std::abs(t.raw[0] - oracle.first_rate(ch)));
    for (int k = 2; k <= K; ++k) {
      const double expected = oracle.cond_mi(ch, k - 1, k - 2, k - 1) - oracle.cond_mi(ch, k - 2, k - 2, k - 1);
      worst = std::max(worst, std::abs(t.raw[k - 1] - expected));
    }
    if (worst > 1e-12) return {false, "trial " + std::to_string(trial) + " off by " + fmt3(worst)};
  }
  return {true, "max difference " + fmt3(worst)};
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

std::string read_file(const std::filesystem::path& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ok = false;
    return "";
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Criterion 11: every subcommand, run twice with identical configs and
// seeds, must produce byte-identical files and terminal output.
Outcome cli_reproducibility(const std::string& cli) {
  if (cli.empty()) return {false, "missing command line binary path argument"};
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "wiresecret_acceptance";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
  auto put = [&dir](const char* name, const char* text) { std::ofstream(dir / name) << text; };
  auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };

  put("structure.json", R"({"participants":2,"qualified":[[1,2]],"forbidden":"complement"})");
  put("channel.json",
      R"({"type":"dmc","transitions":[[[0.5,0.5,0.0],[0.0,0.5,0.5]],[[0.5,0.5,0.0],[0.0,0.5,0.5]]]})");
  put("siso.json", R"({"type":"siso","noise_variances":[4.0,2.0,1.0],"power":10.0})");
  put("mimo.json",
      R"({"type":"mimo","noise_covariances":[[[2.0,0.0],[0.0,2.0]],[[1.0,0.0],[0.0,1.0]]],"input_cap":[[2.0,0.0],[0.0,2.0]]})");
  put("instance.json",
      R"({"channel":[[1.0,0.2],[0.1,1.0]],"noise":[[1.0,0.0],[0.0,1.0]],"input_cap":[[2.0,0.0],[0.0,2.0]],"boost_variances":[1.0]})");
  put("chain.json", R"({"cap":[[2.0,0.0],[0.0,2.0]],"layers":[[[1.0,0.0],[0.0,1.0]]]})");
  put("sim.json",
      R"({"chain":{"first":[1.0],"factors":[[[0.5,0.5]]]},"channel":{"type":"dmc","transitions":[[[0.7,0.3],[0.3,0.7]],[[1.0,0.0],[0.0,1.0]]]},"message_rates":[0.0,0.5],"codebook_rates":[0.0,1.0],"block_length":2,"seed":1})");

  struct Job {
    std::string name;
    std::string args;
    bool writes_csv;
  };
  const std::vector<Job> jobs = {
      {"compound",
       "compound --structure " + q(dir / "structure.json") + " --channel " + q(dir / "channel.json") + " --grid 8",
       true},
      {"region_siso", "region siso --channel " + q(dir / "siso.json") + " --grid 4", true},
      {"region_mimo",
       "region mimo --channel " + q(dir / "mimo.json") + " --weights 1,1 --alpha-grid 6 --perturbations 25 --seed 5",
       true},
      {"miso", "miso --instance " + q(dir / "instance.json") + " --chain " + q(dir / "chain.json"), true},
      {"simulate", "simulate --config " + q(dir / "sim.json") + " --n 2,4 --seeds 3", true},
      {"capacity", "capacity kk -P 1 -N 1,1,1 -k 2", false},
      {"validate",
       "validate --structure " + q(dir / "structure.json") + " --channel " + q(dir / "channel.json") + " --config " +
           q(dir / "sim.json"),
       false},
  };

  for (const Job& job : jobs) {
    const fs::path csv = dir / (job.name + ".csv");
    std::string first_csv, first_txt;
    for (int pass = 0; pass < 2; ++pass) {
      const fs::path txt = dir / (job.name + "_" + std::to_string(pass) + ".txt");
      std::string cmd = q(cli) + " " + job.args;
      if (job.writes_csv) cmd += " --out " + q(csv);
      cmd += " > " + q(txt) + " 2>&1";
      const int rc = run_command(cmd);
      if (rc != 0) return {false, job.name + " exited with code " + std::to_string(rc)};
      bool ok = true;
      const std::string txt_bytes = read_file(txt, ok);
      const std::string csv_bytes = job.writes_csv ? read_file(csv, ok) : "";
      if (!ok) return {false, job.name + " output missing"};
      if (pass == 0) {
        first_csv = csv_bytes;
        first_txt = txt_bytes;
      } else if (csv_bytes != first_csv || txt_bytes != first_txt) {
        return {false, job.name + " outputs differ between runs"};
      }
    }
  }
  fs::remove_all(dir, ec);
  return {true, std::to_string(jobs.size()) + " subcommands byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Entry {
    int id;
    const char* name;
    double budget_seconds;  // 0 means no stated budget
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "scalar consistency of mimo and siso rate tuples", 5.0, scalar_consistency},
      {2, "threshold capacity depends on the threshold only", 1.0, threshold_k_independence},
      {3, "virtual receiver covariance ordering", 10.0, virtual_ordering},
      {4, "virtual receiver limit matches the diagonal closed form", 1.0, miso_limit_oracle},
      {5, "compound bound sandwich and erasure pair value", 60.0, compound_sandwich},
      {6, "degradedness checker recovers the cascade", 1.0, degradedness_checker},
      {7, "exact block error enumeration and Monte Carlo band", 30.0, simulator_exactness},
      {8, "leakage identities and decreasing trend", 300.0, leakage_properties},
      {9, "residual interference rate is nonincreasing", 5.0, interference_monotone},
      {10, "layered discrete rates match full joint enumeration", 30.0, dmc_region_oracle},
      {11, "command line reproducibility", 0.0, [&cli] { return cli_reproducibility(cli); }},
  };

  bool all_pass = true;
  for (const Entry& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.pass && entry.budget_seconds > 0 && seconds >= entry.budget_seconds) {
      outcome.pass = false;
      outcome.note = "exceeded " + fmt3(entry.budget_seconds) + " s budget";
    }
    all_pass = all_pass && outcome.pass;
    std::printf("[%s] %2d %s (%.2f s)%s%s\n", outcome.pass ? "PASS" : "FAIL", entry.id, entry.name, seconds,
                outcome.note.empty() ? "" : ": ", outcome.note.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
