#pragma once

// Layered random binning over an auxiliary chain. Layer 1 carries M_1
// messages with one codeword each; every layer k >= 2 places T_k codewords
// under each parent codeword, split into M_k bins of B_k = T_k / M_k. The bin
// index is the message, the position inside the bin is encoder randomness,
// and that leftover randomness is what hides the higher layers from the
// weaker receivers. Receiver k decodes the codeword prefix through layer k by
// maximum likelihood and keeps the bin indices.
//
// Everything random flows through one canonical recipe: 53-bit uniforms from
// mt19937_64 plus inverse-CDF walks in index order, so a seed pins down
// codebook, encoder draws, and simulated channel outputs exactly. Sequence
// likelihoods are products of per-pair transition probabilities taken from
// symbol counts and multiplied in row-major (input, output) order, so two
// sequences with equal empirical counts compare exactly equal and ML ties
// break deterministically toward the smaller index. Likelihood folding to a
// prefix layer sums children in ascending index order, one layer at a time.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "wiresecret/channels.hpp"
#include "wiresecret/common.hpp"
#include "wiresecret/discrete.hpp"
#include "wiresecret/region.hpp"

namespace wiresecret {

struct BinningConfig {
  MarkovChain chain;    // levels U_1 .. U_{K-1}, X
  DmcBroadcast channel;
  int block_length = 1;
  std::vector<double> message_rates;   // R_k in bits per symbol, one per layer
  std::vector<double> codebook_rates;  // full layer rates including bin randomness
  std::uint64_t seed = 1;
};

struct LayerCounts {
  std::uint64_t messages = 0;   // M_k = 2^(n R_k)
  std::uint64_t codewords = 0;  // T_k = 2^(n codebook rate)
  std::uint64_t bins = 0;       // B_k = T_k / M_k
};

struct RateValidationReport {
  bool integral = false;    // all counts resolve to whole numbers
  bool admissible = false;  // integral and every slack below is nonnegative
  std::vector<std::string> issues;
  std::vector<LayerCounts> counts;
  // decode_slack[k-1]: what receiver k can decode minus the layer-k codebook
  // rate, I(U_k; Y_k | U_{k-1}) - codebook_rate_k (layer 1 against R_1).
  std::vector<double> decode_slack;
  // secrecy_slack(j-1, k-1) for j >= 2, k < j: the layer-j bin randomness
  // minus what receiver k learns about layer j, (codebook_rate_j - R_j) -
  // I(U_j; Y_k | U_{j-1}). Meaningless entries are NaN.
  Eigen::MatrixXd secrecy_slack;
};

namespace detail {

inline double canonical_uniform(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

inline int sample_pmf(std::mt19937_64& rng, const Eigen::VectorXd& p) {
  const double u = canonical_uniform(rng);
  double cum = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    cum += p(j);
    if (u < cum) return static_cast<int>(j);
  }
  return static_cast<int>(p.size() - 1);
}

inline std::uint64_t sample_count(std::mt19937_64& rng, std::uint64_t count) {
  const double u = canonical_uniform(rng);
  return std::min<std::uint64_t>(count - 1, static_cast<std::uint64_t>(u * static_cast<double>(count)));
}

// Product of transition probabilities from per-pair counts, factors applied
// in row-major (input, output) order by repeated multiplication.
inline double canonical_likelihood(const int* x, const int* y, int n, const Eigen::MatrixXd& w) {
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(w.rows(), w.cols());
  for (int i = 0; i < n; ++i) counts(x[i], y[i]) += 1;
  double like = 1.0;
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (int m = 0; m < counts(r, c); ++m) like *= w(r, c);
  return like;
}

struct CountResolution {
  std::uint64_t count = 0;
  bool exact = false;
};

inline CountResolution resolve_count(double rate, int n) {
  CountResolution res;
  const double raw = std::exp2(rate * n);
  if (!(raw >= 1.0) || raw > 9e15) return res;
  const double rounded = std::nearbyint(raw);
  if (std::abs(raw - rounded) > 1e-9 * rounded) return res;
  res.count = static_cast<std::uint64_t>(rounded);
  res.exact = true;
  return res;
}

}  // namespace detail

// Structural problems (mismatched shapes, invalid laws) throw; questionable
// rate choices only show up in the report so inadmissible points can still be
// simulated on purpose.
inline RateValidationReport validate_rates(const BinningConfig& cfg) {
  check_channel(cfg.channel);
  check_chain(cfg.chain);
  const int K = cfg.channel.receiver_count();
  if (cfg.chain.level_count() != K)
    throw ValidationError("chain needs K-1 auxiliary levels plus the input for K receivers");
  const Eigen::Index last_width =
      cfg.chain.factors.empty() ? cfg.chain.first.size() : cfg.chain.factors.back().cols();
  if (last_width != cfg.channel.input_size())
    throw ValidationError("chain input level does not match the channel alphabet");
  if (cfg.block_length < 1) throw ValidationError("block length must be positive");
  if (static_cast<int>(cfg.message_rates.size()) != K || static_cast<int>(cfg.codebook_rates.size()) != K)
    throw ValidationError("need one message rate and one codebook rate per layer");
  for (int k = 0; k < K; ++k)
    if (!(cfg.message_rates[k] >= 0.0) || !(cfg.codebook_rates[k] >= 0.0))
      throw ValidationError("rates must be nonnegative");

  RateValidationReport report;
  report.integral = true;
  report.counts.resize(static_cast<std::size_t>(K));
  const int n = cfg.block_length;
  for (int k = 1; k <= K; ++k) {
    auto& c = report.counts[k - 1];
    const auto m = detail::resolve_count(cfg.message_rates[k - 1], n);
    const auto t = detail::resolve_count(cfg.codebook_rates[k - 1], n);
    if (!m.exact || !t.exact) {
      report.integral = false;
      const double bad = !m.exact ? cfg.message_rates[k - 1] : cfg.codebook_rates[k - 1];
      const double rounded = std::nearbyint(std::exp2(bad * n));
      std::string suggestion =
          rounded >= 1.0 && rounded <= 9e15
              ? "; nearest admissible rate is log2(" + std::to_string(static_cast<std::uint64_t>(rounded)) +
                    ")/" + std::to_string(n)
              : "";
      report.issues.push_back("layer " + std::to_string(k) + ": 2^(n rate) is not a whole number at n = " +
                              std::to_string(n) + suggestion);
      continue;
    }
    c.messages = m.count;
    c.codewords = t.count;
    if (k == 1 && c.codewords != c.messages) {
      report.integral = false;
      report.issues.push_back("layer 1 carries no bin randomness; its codebook rate must equal its message rate");
      continue;
    }
    if (c.codewords < c.messages || c.codewords % c.messages != 0) {
      report.integral = false;
      report.issues.push_back("layer " + std::to_string(k) +
                              ": codeword count is not a whole multiple of the message count");
      continue;
    }
    c.bins = c.codewords / c.messages;
  }

  // Decode and secrecy slacks from the chain information quantities.
  std::vector<Eigen::VectorXd> level_law{cfg.chain.first};
  for (const auto& f : cfg.chain.factors) level_law.push_back(f.transpose() * level_law.back());
  std::vector<Eigen::MatrixXd> to_input(static_cast<std::size_t>(K));
  to_input[K - 1] = Eigen::MatrixXd::Identity(cfg.channel.input_size(), cfg.channel.input_size());
  for (int level = K - 2; level >= 0; --level) to_input[level] = cfg.chain.factors[level] * to_input[level + 1];

  report.decode_slack.resize(static_cast<std::size_t>(K));
  report.decode_slack[0] =
      mutual_information_bits(level_law[0].asDiagonal() * (to_input[0] * cfg.channel.transitions[0])) -
      cfg.message_rates[0];
  report.secrecy_slack =
      Eigen::MatrixXd::Constant(K, K, std::numeric_limits<double>::quiet_NaN());
  for (int j = 2; j <= K; ++j) {
    const Eigen::MatrixXd joint = level_law[j - 2].asDiagonal() * cfg.chain.factors[j - 2];
    report.decode_slack[j - 1] =
        detail::conditional_mi_tables(joint, to_input[j - 1] * cfg.channel.transitions[j - 1]) -
        cfg.codebook_rates[j - 1];
    const double bin_rate = cfg.codebook_rates[j - 1] - cfg.message_rates[j - 1];
    for (int k = 1; k < j; ++k)
      report.secrecy_slack(j - 1, k - 1) =
          bin_rate - detail::conditional_mi_tables(joint, to_input[j - 1] * cfg.channel.transitions[k - 1]);
  }

  report.admissible = report.integral;
  for (double s : report.decode_slack)
    if (s < -1e-9) report.admissible = false;
  for (int j = 2; j <= K; ++j)
    for (int k = 1; k < j; ++k)
      if (report.secrecy_slack(j - 1, k - 1) < -1e-9) report.admissible = false;
  return report;
}

class LayeredCodebook {
 public:
  explicit LayeredCodebook(const BinningConfig& cfg) : cfg_(cfg) {
    RateValidationReport report = validate_rates(cfg);
    if (!report.integral) {
      std::string text = "rates do not produce whole codebook counts";
      for (const auto& issue : report.issues) text += "; " + issue;
      throw ValidationError(text);
    }
    counts_ = report.counts;
    const int K = layer_count();
    const int n = cfg_.block_length;
    rows_.resize(static_cast<std::size_t>(K));
    std::uint64_t rows = 1;
    for (int k = 1; k <= K; ++k) {
      if (rows > kMaxCodebookEntries / counts_[k - 1].codewords)
        throw NumericalError("codebook exceeds " + std::to_string(kMaxCodebookEntries) + " rows at layer " +
                             std::to_string(k));
      rows *= counts_[k - 1].codewords;
      if (rows > kMaxCodebookEntries / static_cast<std::uint64_t>(n))
        throw NumericalError("codebook exceeds " + std::to_string(kMaxCodebookEntries) + " symbols at layer " +
                             std::to_string(k));
      rows_[k - 1] = rows;
    }

    tables_.resize(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
      std::mt19937_64 rng(derive_seed(cfg_.seed, static_cast<std::uint64_t>(k)));
      tables_[k - 1].resize(rows_[k - 1] * static_cast<std::uint64_t>(n));
      for (std::uint64_t row = 0; row < rows_[k - 1]; ++row) {
        const std::uint64_t parent = row / counts_[k - 1].codewords;
        for (int i = 0; i < n; ++i) {
          int symbol;
          if (k == 1) {
            symbol = detail::sample_pmf(rng, cfg_.chain.first);
          } else {
            const int parent_symbol = tables_[k - 2][parent * static_cast<std::uint64_t>(n) + i];
            symbol = detail::sample_pmf(rng, cfg_.chain.factors[k - 2].row(parent_symbol).transpose());
          }
          tables_[k - 1][row * static_cast<std::uint64_t>(n) + i] = symbol;
        }
      }
    }
  }

  const BinningConfig& config() const { return cfg_; }
  int layer_count() const { return static_cast<int>(counts_.size()); }
  int block_length() const { return cfg_.block_length; }
  const std::vector<LayerCounts>& counts() const { return counts_; }
  std::uint64_t rows(int layer) const { return rows_[check_layer(layer) - 1]; }
  int symbol(int layer, std::uint64_t row, int i) const {
    return tables_[check_layer(layer) - 1][row * static_cast<std::uint64_t>(cfg_.block_length) + i];
  }

  struct Encoding {
    std::vector<std::uint64_t> locals;  // bin positions, entry 1 always 0
    std::uint64_t leaf = 0;             // row in the last layer
    std::vector<int> input;             // transmitted x^n
  };

  Encoding encode(const std::vector<std::uint64_t>& messages, std::mt19937_64& rng) const {
    const int K = layer_count();
    if (static_cast<int>(messages.size()) != K) throw ValidationError("need one message per layer");
    for (int k = 1; k <= K; ++k)
      if (messages[k - 1] >= counts_[k - 1].messages)
        throw ValidationError("message at layer " + std::to_string(k) + " is out of range");
    Encoding enc;
    enc.locals.assign(static_cast<std::size_t>(K), 0);
    std::uint64_t c = messages[0];
    for (int k = 2; k <= K; ++k) {
      const std::uint64_t bins = counts_[k - 1].bins;
      const std::uint64_t local = detail::sample_count(rng, bins);
      enc.locals[k - 1] = local;
      c = c * counts_[k - 1].codewords + messages[k - 1] * bins + local;
    }
    enc.leaf = c;
    enc.input.resize(static_cast<std::size_t>(cfg_.block_length));
    for (int i = 0; i < cfg_.block_length; ++i)
      enc.input[i] = tables_[K - 1][c * static_cast<std::uint64_t>(cfg_.block_length) + i];
    return enc;
  }

  std::vector<std::uint64_t> messages_of_leaf(std::uint64_t leaf) const {
    const int K = layer_count();
    std::vector<std::uint64_t> w(static_cast<std::size_t>(K));
    for (int k = K; k >= 2; --k) {
      const std::uint64_t t = leaf % counts_[k - 1].codewords;
      leaf /= counts_[k - 1].codewords;
      w[k - 1] = t / counts_[k - 1].bins;
    }
    w[0] = leaf;
    return w;
  }

  std::uint64_t prefix_of_leaf(std::uint64_t leaf, int layer) const {
    check_layer(layer);
    for (int k = layer_count(); k > layer; --k) leaf /= counts_[k - 1].codewords;
    return leaf;
  }

  // P(y^n | leaf codeword) for every leaf, canonical arithmetic.
  std::vector<double> leaf_likelihoods(int receiver, const std::vector<int>& output) const {
    const Eigen::MatrixXd& w = transition(receiver, output);
    const int n = cfg_.block_length;
    std::vector<double> likes(rows_.back());
    for (std::uint64_t leaf = 0; leaf < likes.size(); ++leaf)
      likes[leaf] = detail::canonical_likelihood(&tables_.back()[leaf * static_cast<std::uint64_t>(n)],
                                                 output.data(), n, w);
    return likes;
  }

  struct DecodeResult {
    std::uint64_t prefix = 0;                // ML codeword index through the receiver's layer
    std::vector<std::uint64_t> messages;     // bin indices along that prefix
  };

  DecodeResult decode(int receiver, const std::vector<int>& output) const {
    return decode_from_likes(receiver, fold_to_layer(leaf_likelihoods(receiver, output), receiver));
  }

  // Exact average error probability of receiver k over uniform messages, bin
  // positions, and channel noise: sum over outputs (last symbol fastest) and
  // leaves (ascending) of the likelihood mass landing on a wrong prefix.
  double exact_error_probability(int receiver) const {
    const Eigen::MatrixXd& w = cfg_.channel.transitions[check_layer(receiver) - 1];
    const int n = cfg_.block_length;
    const std::uint64_t leaves = rows_.back();
    const std::uint64_t outputs = checked_output_count(static_cast<std::uint64_t>(w.cols()), leaves);

    std::vector<std::uint64_t> true_index(leaves);
    for (std::uint64_t leaf = 0; leaf < leaves; ++leaf)
      true_index[leaf] = message_prefix_index(messages_of_leaf(leaf), receiver);

    std::vector<int> y(static_cast<std::size_t>(n), 0);
    double err = 0.0;
    for (std::uint64_t flat = 0; flat < outputs; ++flat) {
      const std::vector<double> likes = leaf_likelihoods(receiver, y);
      const DecodeResult dec = decode_from_likes(receiver, fold_to_layer(likes, receiver));
      const std::uint64_t decoded = message_prefix_index(dec.messages, receiver);
      for (std::uint64_t leaf = 0; leaf < leaves; ++leaf)
        if (true_index[leaf] != decoded) err += likes[leaf];
      advance_output(y, static_cast<int>(w.cols()));
    }
    return err / static_cast<double>(leaves);
  }

  struct McEstimate {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double estimate = 0.0;
  };

  McEstimate mc_error_probability(int receiver, std::uint64_t trials, std::uint64_t seed) const {
    check_layer(receiver);
    const Eigen::MatrixXd& w = cfg_.channel.transitions[receiver - 1];
    const int K = layer_count();
    std::mt19937_64 rng(seed);
    McEstimate est;
    est.trials = trials;
    std::vector<std::uint64_t> messages(static_cast<std::size_t>(K));
    std::vector<int> y(static_cast<std::size_t>(cfg_.block_length));
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      for (int k = 0; k < K; ++k) messages[k] = detail::sample_count(rng, counts_[k].messages);
      const Encoding enc = encode(messages, rng);
      for (int i = 0; i < cfg_.block_length; ++i)
        y[i] = detail::sample_pmf(rng, w.row(enc.input[i]).transpose());
      const DecodeResult dec = decode(receiver, y);
      for (int k = 0; k < receiver; ++k)
        if (dec.messages[k] != messages[k]) {
          est.errors += 1;
          break;
        }
    }
    est.estimate = trials == 0 ? 0.0 : static_cast<double>(est.errors) / static_cast<double>(trials);
    return est;
  }

  // I(W_secret; Y_receiver^n | W_known) in bits for the whole block, from the
  // exact joint law of the message groups and the output sequence.
  double exact_message_information(std::uint64_t secret_layers, std::uint64_t known_layers, int receiver) const {
    const int K = layer_count();
    check_layer(receiver);
    if (secret_layers == 0) throw ValidationError("need at least one secret layer");
    if ((secret_layers | known_layers) >> K) throw ValidationError("layer mask references missing layers");
    if ((secret_layers & known_layers) != 0) throw ValidationError("secret and known layers overlap");

    const Eigen::MatrixXd& w = cfg_.channel.transitions[receiver - 1];
    const int n = cfg_.block_length;
    const std::uint64_t leaves = rows_.back();
    const std::uint64_t outputs = checked_output_count(static_cast<std::uint64_t>(w.cols()), leaves);

    std::uint64_t secret_size = 1, known_size = 1;
    for (int k = 1; k <= K; ++k) {
      if (secret_layers & (std::uint64_t{1} << (k - 1))) secret_size *= counts_[k - 1].messages;
      if (known_layers & (std::uint64_t{1} << (k - 1))) known_size *= counts_[k - 1].messages;
    }
    if (secret_size * known_size > kMaxJointTable / outputs)
      throw NumericalError("joint law of messages and outputs exceeds the table limit");

    std::vector<std::uint64_t> secret_idx(leaves), known_idx(leaves);
    for (std::uint64_t leaf = 0; leaf < leaves; ++leaf) {
      const std::vector<std::uint64_t> msg = messages_of_leaf(leaf);
      std::uint64_t s = 0, c = 0;
      for (int k = 1; k <= K; ++k) {
        if (secret_layers & (std::uint64_t{1} << (k - 1))) s = s * counts_[k - 1].messages + msg[k - 1];
        if (known_layers & (std::uint64_t{1} << (k - 1))) c = c * counts_[k - 1].messages + msg[k - 1];
      }
      secret_idx[leaf] = s;
      known_idx[leaf] = c;
    }

    std::vector<double> joint(secret_size * known_size * outputs, 0.0);
    std::vector<int> y(static_cast<std::size_t>(n), 0);
    for (std::uint64_t flat = 0; flat < outputs; ++flat) {
      const std::vector<double> likes = leaf_likelihoods(receiver, y);
      for (std::uint64_t leaf = 0; leaf < leaves; ++leaf)
        joint[(secret_idx[leaf] * known_size + known_idx[leaf]) * outputs + flat] +=
            likes[leaf] / static_cast<double>(leaves);
      advance_output(y, static_cast<int>(w.cols()));
    }

    // I(S; Y | C) = sum_c p(c) (H(S|c) + H(Y|c) - H(S,Y|c))
    double info = 0.0;
    std::vector<double> y_marginal(outputs);
    std::vector<double> s_marginal(secret_size);
    for (std::uint64_t c = 0; c < known_size; ++c) {
      double pc = 0.0;
      std::fill(y_marginal.begin(), y_marginal.end(), 0.0);
      std::fill(s_marginal.begin(), s_marginal.end(), 0.0);
      double h_sy = 0.0;
      for (std::uint64_t s = 0; s < secret_size; ++s)
        for (std::uint64_t flat = 0; flat < outputs; ++flat) {
          const double p = joint[(s * known_size + c) * outputs + flat];
          if (p <= 0.0) continue;
          pc += p;
          y_marginal[flat] += p;
          s_marginal[s] += p;
          h_sy -= p * std::log2(p);
        }
      if (pc <= 0.0) continue;
      double h_s = 0.0, h_y = 0.0;
      for (double p : s_marginal)
        if (p > 0.0) h_s -= p * std::log2(p);
      for (double p : y_marginal)
        if (p > 0.0) h_y -= p * std::log2(p);
      // The three entropies above are unnormalized (mass pc). Normalizing
      // each adds log2(pc); weighting the conditional information by pc then
      // leaves (h_s + h_y - h_sy) + pc log2(pc).
      info += (h_s + h_y - h_sy) + pc * std::log2(pc);
    }
    return info;
  }

  // Bits per symbol that receiver k's block reveals about the layers above k
  // when it already knows layers 1..k.
  double exact_leakage(int receiver) const {
    const int K = layer_count();
    check_layer(receiver);
    if (receiver == K) return 0.0;
    const std::uint64_t all = (std::uint64_t{1} << K) - 1;
    const std::uint64_t known = (std::uint64_t{1} << receiver) - 1;
    return exact_message_information(all & ~known, known, receiver) / cfg_.block_length;
  }

 private:
  int check_layer(int layer) const {
    if (layer < 1 || layer > layer_count()) throw ValidationError("layer index out of range");
    return layer;
  }

  const Eigen::MatrixXd& transition(int receiver, const std::vector<int>& output) const {
    check_layer(receiver);
    const Eigen::MatrixXd& w = cfg_.channel.transitions[receiver - 1];
    if (static_cast<int>(output.size()) != cfg_.block_length)
      throw ValidationError("output sequence length does not match the block length");
    for (int v : output)
      if (v < 0 || v >= w.cols()) throw ValidationError("output symbol out of range");
    return w;
  }

  std::vector<double> fold_to_layer(std::vector<double> likes, int layer) const {
    for (int k = layer_count(); k > layer; --k) {
      const std::uint64_t t = counts_[k - 1].codewords;
      std::vector<double> folded(likes.size() / t, 0.0);
      for (std::uint64_t c = 0; c < folded.size(); ++c)
        for (std::uint64_t j = 0; j < t; ++j) folded[c] += likes[c * t + j];
      likes = std::move(folded);
    }
    return likes;
  }

  DecodeResult decode_from_likes(int receiver, const std::vector<double>& likes) const {
    std::uint64_t best = 0;
    for (std::uint64_t c = 1; c < likes.size(); ++c)
      if (likes[c] > likes[best]) best = c;
    DecodeResult res;
    res.prefix = best;
    res.messages.resize(static_cast<std::size_t>(receiver));
    std::uint64_t c = best;
    for (int k = receiver; k >= 2; --k) {
      const std::uint64_t t = c % counts_[k - 1].codewords;
      c /= counts_[k - 1].codewords;
      res.messages[k - 1] = t / counts_[k - 1].bins;
    }
    res.messages[0] = c;
    return res;
  }

  std::uint64_t message_prefix_index(const std::vector<std::uint64_t>& messages, int through_layer) const {
    std::uint64_t idx = messages[0];
    for (int k = 2; k <= through_layer; ++k) idx = idx * counts_[k - 1].messages + messages[k - 1];
    return idx;
  }

  std::uint64_t checked_output_count(std::uint64_t alphabet, std::uint64_t leaves) const {
    std::uint64_t outputs = 1;
    for (int i = 0; i < cfg_.block_length; ++i) {
      if (outputs > kMaxJointTable / alphabet)
        throw NumericalError("output sequence space exceeds the table limit");
      outputs *= alphabet;
    }
    if (leaves > kMaxJointTable / outputs)
      throw NumericalError("leaves times output sequences exceeds the table limit");
    return outputs;
  }

  static void advance_output(std::vector<int>& y, int alphabet) {
    int i = static_cast<int>(y.size()) - 1;
    while (i >= 0 && ++y[i] == alphabet) y[i--] = 0;
  }

  BinningConfig cfg_;
  std::vector<LayerCounts> counts_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::vector<int>> tables_;
};

struct SimulationRow {
  int block_length = 0;
  std::uint64_t seed_index = 0;
  int receiver = 0;
  double error_prob = 0.0;
  double leakage_bits_per_symbol = 0.0;
};

struct LeakageTrendResult {
  std::vector<SimulationRow> rows;
  // Per receiver: fraction of adjacent block-length pairs whose seed-averaged
  // leakage does not increase.
  std::vector<double> nonincreasing_fraction;
};

inline LeakageTrendResult leakage_trend(const BinningConfig& base, const std::vector<int>& block_lengths,
                                        int seed_count) {
  if (block_lengths.empty()) throw ValidationError("need at least one block length");
  if (seed_count < 1) throw ValidationError("need at least one seed");
  const int K = base.channel.receiver_count();
  LeakageTrendResult result;
  std::vector<std::vector<double>> mean(static_cast<std::size_t>(K),
                                        std::vector<double>(block_lengths.size(), 0.0));
  for (std::size_t ni = 0; ni < block_lengths.size(); ++ni) {
    for (int s = 0; s < seed_count; ++s) {
      BinningConfig cfg = base;
      cfg.block_length = block_lengths[ni];
      cfg.seed = derive_seed(derive_seed(base.seed, static_cast<std::uint64_t>(block_lengths[ni])),
                             static_cast<std::uint64_t>(s));
      const LayeredCodebook codebook(cfg);
      for (int k = 1; k <= K; ++k) {
        SimulationRow row;
        row.block_length = block_lengths[ni];
        row.seed_index = static_cast<std::uint64_t>(s);
        row.receiver = k;
        row.error_prob = codebook.exact_error_probability(k);
        row.leakage_bits_per_symbol = codebook.exact_leakage(k);
        mean[k - 1][ni] += row.leakage_bits_per_symbol / seed_count;
        result.rows.push_back(row);
      }
    }
  }
  result.nonincreasing_fraction.resize(static_cast<std::size_t>(K), 1.0);
  if (block_lengths.size() >= 2) {
    for (int k = 0; k < K; ++k) {
      int ok = 0;
      for (std::size_t ni = 0; ni + 1 < block_lengths.size(); ++ni)
        if (mean[k][ni + 1] <= mean[k][ni] + 1e-12) ok += 1;
      result.nonincreasing_fraction[k] =
          static_cast<double>(ok) / static_cast<double>(block_lengths.size() - 1);
    }
  }
  return result;
}

}  // namespace wiresecret
