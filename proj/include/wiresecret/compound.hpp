#pragma once

// Reduction of an access structure over a broadcast channel to a compound
// wiretap problem (virtual receivers from minimal qualified sets, virtual
// eavesdroppers from maximal forbidden sets) and grid-search evaluation of
// the secrecy capacity bounds.
//
// Lower bound: max over joint laws P_UX of
//   min_A I(U; Y_{group A}) - max_B I(U; Y_{group B}).
// Upper bound: min over pairs (A, B) of max over P_UX of
//   I(U; Y_{group A}) - I(U; Y_{group B}).
// Both searches share one grid sweep, and every pair search also evaluates
// its objective at the lower bound's refined maximizer, which keeps
// lower <= upper on coarse grids.

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "wiresecret/access_structure.hpp"
#include "wiresecret/channels.hpp"
#include "wiresecret/common.hpp"
#include "wiresecret/discrete.hpp"
#include "wiresecret/gridsearch.hpp"

namespace wiresecret {

struct CompoundWiretapSpec {
  int participants = 0;
  std::vector<SubsetMask> legitimate;     // minimal qualified antichain
  std::vector<SubsetMask> eavesdroppers;  // maximal forbidden antichain
  // Set when some legitimate group is contained in an eavesdropper group;
  // the secrecy capacity is trivially zero then. Never set for structures
  // that pass validation.
  bool trivially_zero = false;
};

inline CompoundWiretapSpec build_compound(const AccessStructure& s) {
  const StructureReport report = validate(s);
  if (!report.valid) {
    std::string msg = "access structure invalid";
    for (const auto& issue : report.issues) msg += "; " + issue;
    throw ValidationError(msg);
  }
  if (s.qualified.empty()) throw ValidationError("cannot build a compound problem without qualified sets");
  CompoundWiretapSpec spec;
  spec.participants = s.participants;
  spec.legitimate = minimal_qualified(s.qualified);
  spec.eavesdroppers = maximal_forbidden(s.forbidden);
  for (SubsetMask a : spec.legitimate)
    for (SubsetMask b : spec.eavesdroppers)
      if ((a & ~b) == 0) spec.trivially_zero = true;
  return spec;
}

struct GridSearchConfig {
  int step = 16;          // simplex grid resolution 1/step
  int refine_rounds = 3;  // coordinate-exchange rounds with step halving
  int aux_size = 0;       // auxiliary alphabet size, 0 means |X|+1
};

struct BoundReport {
  double value = 0.0;  // clamped at zero
  double raw = 0.0;
  Eigen::MatrixXd maximizer;  // joint P_UX, rows are auxiliary symbols
  bool boundary = false;      // maximizer lies on the simplex boundary
};

struct PairBound {
  SubsetMask legitimate = 0;
  SubsetMask eavesdropper = 0;
  double value = 0.0;
  double raw = 0.0;
};

struct UpperBoundReport {
  double value = 0.0;
  double raw = 0.0;
  SubsetMask arg_legitimate = 0;
  SubsetMask arg_eavesdropper = 0;
  std::vector<PairBound> pairs;  // sorted by (legitimate, eavesdropper) mask
};

namespace detail {

// Shared evaluation state for the P_UX searches: per-group product channel
// tables. Evaluation allocates its small temporaries per call so sweeps can
// run it from several threads.
struct PuxSearch {
  Eigen::Index aux = 0;
  Eigen::Index inputs = 0;
  std::vector<Eigen::MatrixXd> legit_w;
  std::vector<Eigen::MatrixXd> eaves_w;

  PuxSearch(const CompoundWiretapSpec& spec, const DmcBroadcast& ch, const GridSearchConfig& cfg) {
    check_channel(ch);
    if (spec.legitimate.empty()) throw ValidationError("compound problem has no legitimate receivers");
    if (cfg.step < 1 || cfg.refine_rounds < 0 || cfg.aux_size < 0)
      throw ValidationError("grid search configuration is out of range");
    inputs = ch.input_size();
    aux = cfg.aux_size > 0 ? cfg.aux_size : inputs + 1;
    for (SubsetMask a : spec.legitimate) legit_w.push_back(group_transition(ch, a));
    if (spec.eavesdroppers.empty()) {
      eaves_w.push_back(Eigen::MatrixXd::Ones(inputs, 1));  // blind eavesdropper
    } else {
      for (SubsetMask b : spec.eavesdroppers) eaves_w.push_back(group_transition(ch, b));
    }
  }

  int dims() const { return static_cast<int>(aux * inputs); }

  // Mutual informations I(U; Y_group) for every legitimate and eavesdropper
  // group at the joint law `p` (flattened row-major).
  void informations(const Eigen::VectorXd& p, std::vector<double>& legit_mi, std::vector<double>& eaves_mi) const {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> joint(
        p.data(), aux, inputs);
    legit_mi.resize(legit_w.size());
    eaves_mi.resize(eaves_w.size());
    for (std::size_t i = 0; i < legit_w.size(); ++i) legit_mi[i] = mutual_information_bits(joint * legit_w[i]);
    for (std::size_t i = 0; i < eaves_w.size(); ++i) eaves_mi[i] = mutual_information_bits(joint * eaves_w[i]);
  }

  double worst_case_objective(const Eigen::VectorXd& p) const {
    std::vector<double> legit_mi, eaves_mi;
    informations(p, legit_mi, eaves_mi);
    return *std::min_element(legit_mi.begin(), legit_mi.end()) -
           *std::max_element(eaves_mi.begin(), eaves_mi.end());
  }

  Eigen::MatrixXd as_matrix(const Eigen::VectorXd& p) const {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(p.data(), aux,
                                                                                                    inputs);
  }
};

// Grid sweep tracking the worst-case objective and every (A, B) pair
// objective at once, followed by per-objective refinement.
struct PuxSweepResult {
  SimplexPoint worst_case;
  std::vector<SimplexPoint> pairs;  // indexed by a * eaves_count + b
};

inline PuxSweepResult sweep_pux(const PuxSearch& search, const GridSearchConfig& cfg) {
  const std::size_t pair_count = search.legit_w.size() * search.eaves_w.size();
  auto eval = [&search](const Eigen::VectorXd& p, std::vector<double>& out) {
    std::vector<double> legit_mi, eaves_mi;
    search.informations(p, legit_mi, eaves_mi);
    out[0] = *std::min_element(legit_mi.begin(), legit_mi.end()) -
             *std::max_element(eaves_mi.begin(), eaves_mi.end());
    std::size_t slot = 1;
    for (double la : legit_mi)
      for (double eb : eaves_mi) out[slot++] = la - eb;
  };
  std::vector<SimplexPoint> best =
      sweep_simplex_grid(search.dims(), cfg.step, static_cast<int>(1 + pair_count), eval);
  PuxSweepResult result;
  result.worst_case = refine_on_simplex(best[0], cfg.step, cfg.refine_rounds,
                                        [&search](const Eigen::VectorXd& p) { return search.worst_case_objective(p); });
  result.pairs.resize(pair_count);
  for (std::size_t a = 0; a < search.legit_w.size(); ++a)
    for (std::size_t b = 0; b < search.eaves_w.size(); ++b) {
      const std::size_t slot = a * search.eaves_w.size() + b;
      auto pair_objective = [&search, a, b](const Eigen::VectorXd& p) {
        std::vector<double> legit_mi, eaves_mi;
        search.informations(p, legit_mi, eaves_mi);
        return legit_mi[a] - eaves_mi[b];
      };
      SimplexPoint refined = refine_on_simplex(best[slot + 1], cfg.step, cfg.refine_rounds, pair_objective);
      // Seed with the worst-case maximizer: the pair objective dominates the
      // worst-case objective pointwise, so this pins lower <= upper.
      const double at_worst_case = pair_objective(result.worst_case.point);
      if (at_worst_case > refined.value) {
        refined.value = at_worst_case;
        refined.point = result.worst_case.point;
      }
      result.pairs[slot] = std::move(refined);
    }
  return result;
}

}  // namespace detail

inline BoundReport lower_bound_dmc(const CompoundWiretapSpec& spec, const DmcBroadcast& ch,
                                   const GridSearchConfig& cfg = {}) {
  const detail::PuxSearch search(spec, ch, cfg);
  const detail::PuxSweepResult swept = detail::sweep_pux(search, cfg);
  BoundReport report;
  report.raw = swept.worst_case.value;
  report.value = std::max(report.raw, 0.0);
  report.maximizer = search.as_matrix(swept.worst_case.point);
  report.boundary = on_simplex_boundary(swept.worst_case.point);
  return report;
}

inline UpperBoundReport upper_bound_dmc(const CompoundWiretapSpec& spec, const DmcBroadcast& ch,
                                        const GridSearchConfig& cfg = {}) {
  const detail::PuxSearch search(spec, ch, cfg);
  const detail::PuxSweepResult swept = detail::sweep_pux(search, cfg);
  UpperBoundReport report;
  report.raw = std::numeric_limits<double>::infinity();
  const std::vector<SubsetMask> eaves_masks =
      spec.eavesdroppers.empty() ? std::vector<SubsetMask>{0} : spec.eavesdroppers;
  for (std::size_t a = 0; a < spec.legitimate.size(); ++a)
    for (std::size_t b = 0; b < eaves_masks.size(); ++b) {
      const SimplexPoint& p = swept.pairs[a * eaves_masks.size() + b];
      PairBound pair;
      pair.legitimate = spec.legitimate[a];
      pair.eavesdropper = eaves_masks[b];
      pair.raw = p.value;
      pair.value = std::max(p.value, 0.0);
      if (pair.raw < report.raw) {
        report.raw = pair.raw;
        report.arg_legitimate = pair.legitimate;
        report.arg_eavesdropper = pair.eavesdropper;
      }
      report.pairs.push_back(pair);
    }
  report.value = std::max(report.raw, 0.0);
  return report;
}

struct CapacityReport {
  double value = 0.0;
  double raw = 0.0;
  Eigen::VectorXd input_law;
  bool boundary = false;
};

// All-share capacity: every receiver cooperates to decode, any strict subset
// of receivers is treated as an eavesdropper coalition. Search over P_X; only
// the (K-1)-subsets matter among eavesdropper coalitions.
inline CapacityReport capacity_all_share(const DmcBroadcast& ch, const GridSearchConfig& cfg = {}) {
  check_channel(ch);
  if (cfg.step < 1 || cfg.refine_rounds < 0) throw ValidationError("grid search configuration is out of range");
  const int K = ch.receiver_count();
  const SubsetMask full = (K == 64) ? ~SubsetMask{0} : ((SubsetMask{1} << K) - 1);
  const Eigen::MatrixXd w_full = detail::group_transition(ch, full);
  std::vector<Eigen::MatrixXd> eaves_w;
  if (K == 1) {
    eaves_w.push_back(Eigen::MatrixXd::Ones(ch.input_size(), 1));
  } else {
    for (int k = 1; k <= K; ++k) eaves_w.push_back(detail::group_transition(ch, full & ~(SubsetMask{1} << (k - 1))));
  }
  auto objective = [&](const Eigen::VectorXd& px) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& w : eaves_w) worst = std::max(worst, mutual_information_bits(px.asDiagonal() * w));
    return mutual_information_bits(px.asDiagonal() * w_full) - worst;
  };
  auto eval = [&objective](const Eigen::VectorXd& px, std::vector<double>& out) { out[0] = objective(px); };
  SimplexPoint best = sweep_simplex_grid(static_cast<int>(ch.input_size()), cfg.step, 1, eval)[0];
  best = refine_on_simplex(best, cfg.step, cfg.refine_rounds, objective);
  CapacityReport report;
  report.raw = best.value;
  report.value = std::max(best.value, 0.0);
  report.input_law = best.point;
  report.boundary = on_simplex_boundary(best.point);
  return report;
}

// Two-participant case of the all-share capacity.
inline CapacityReport capacity_two(const DmcBroadcast& ch, const GridSearchConfig& cfg = {}) {
  check_channel(ch);
  if (ch.receiver_count() != 2) throw ValidationError("two-participant capacity needs exactly two receivers");
  return capacity_all_share(ch, cfg);
}

// k-of-K threshold capacity over scalar Gaussian receivers: the weakest
// k-group's combined channel gain against the strongest (k-1)-group's.
// Clamped at zero like every other rate output.
inline double capacity_kK(double power, const std::vector<double>& noise_variances, int k) {
  const int K = static_cast<int>(noise_variances.size());
  if (K < 1) throw ValidationError("need at least one receiver");
  if (k < 1 || k > K) throw ValidationError("threshold k must be in [1,K]");
  if (!(power >= 0.0)) throw ValidationError("power must be nonnegative");
  std::vector<double> snr(noise_variances.size());
  for (int l = 0; l < K; ++l) {
    if (!(noise_variances[l] > 0.0)) throw ValidationError("noise variances must be positive");
    snr[l] = power / noise_variances[l];
  }
  std::sort(snr.begin(), snr.end());
  double weakest_k = 0.0;
  for (int i = 0; i < k; ++i) weakest_k += snr[i];
  double strongest_k1 = 0.0;
  for (int i = 0; i < k - 1; ++i) strongest_k1 += snr[K - 1 - i];
  const double raw = 0.5 * std::log2((1.0 + weakest_k) / (1.0 + strongest_k1));
  return std::max(raw, 0.0);
}

}  // namespace wiresecret
