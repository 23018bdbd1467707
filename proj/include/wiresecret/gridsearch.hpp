#pragma once

// Deterministic maximization over probability simplices: an exhaustive grid
// sweep at resolution 1/step followed by coordinate-exchange refinement with
// step halving. Sweeps can fan out over threads; results are independent of
// the thread count because per-slice bests are merged in enumeration order
// with strict improvement.

#include <Eigen/Dense>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "wiresecret/common.hpp"

namespace wiresecret {

// Parallelism budget: WIRESECRET_THREADS when set (clamped to [1,64]),
// otherwise the hardware concurrency capped at 8.
inline int thread_budget() {
  if (const char* env = std::getenv("WIRESECRET_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) return static_cast<int>(parsed > 64 ? 64 : parsed);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(hw == 0 ? 1 : (hw > 8 ? 8 : hw));
}

namespace detail {

// Visits every way to write `total` as an ordered sum of `parts` nonnegative
// integers; digits are filled left to right in descending lexicographic
// order of the remaining budget.
template <typename Visitor>
void for_each_composition_rec(int total, int part, std::vector<int>& digits, Visitor&& visit) {
  const int parts = static_cast<int>(digits.size());
  if (part == parts - 1) {
    digits[part] = total;
    visit(const_cast<const std::vector<int>&>(digits));
    return;
  }
  for (int d = total; d >= 0; --d) {
    digits[part] = d;
    for_each_composition_rec(total - d, part + 1, digits, visit);
  }
}

}  // namespace detail

template <typename Visitor>
void for_each_composition(int total, int parts, Visitor&& visit) {
  if (parts < 1) throw ValidationError("composition needs at least one part");
  std::vector<int> digits(parts, 0);
  detail::for_each_composition_rec(total, 0, digits, visit);
}

inline double composition_count(int total, int parts) {
  double count = 1.0;
  for (int i = 1; i < parts; ++i) count *= static_cast<double>(total + i) / i;
  return count;
}

struct SimplexPoint {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd point;
};

// One pass over the grid evaluating a vector of objectives per point and
// keeping the per-objective maximizer. The evaluator receives the point and
// writes one value per objective into `out`.
template <typename Eval>
std::vector<SimplexPoint> sweep_simplex_grid(int dims, int step, int objectives, Eval&& eval) {
  if (dims < 1 || step < 1) throw ValidationError("grid sweep needs positive dimension and step count");
  const int threads = std::min(thread_budget(), step + 1);

  // Slice the sweep by the first digit; each slice is enumerated sequentially
  // and slices are merged in first-digit order, so the overall argmax (first
  // maximizer in enumeration order) does not depend on the thread count.
  std::vector<std::vector<SimplexPoint>> slice_best(static_cast<std::size_t>(step) + 1,
                                                    std::vector<SimplexPoint>(objectives));
  auto run_slice = [&](int first) {
    std::vector<SimplexPoint>& best = slice_best[first];
    Eigen::VectorXd p(dims);
    std::vector<double> out(objectives);
    std::vector<int> digits(std::max(dims - 1, 1), 0);
    auto handle = [&](const std::vector<int>& rest) {
      p(0) = static_cast<double>(first) / step;
      for (int i = 1; i < dims; ++i) p(i) = static_cast<double>(rest[i - 1]) / step;
      eval(const_cast<const Eigen::VectorXd&>(p), out);
      for (int o = 0; o < objectives; ++o)
        if (out[o] > best[o].value) {
          best[o].value = out[o];
          best[o].point = p;
        }
    };
    if (dims == 1) {
      if (first == step) handle(digits);
      return;
    }
    detail::for_each_composition_rec(step - first, 0, digits, handle);
  };

  if (threads <= 1) {
    for (int first = step; first >= 0; --first) run_slice(first);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int first = step - t; first >= 0; first -= threads) run_slice(first);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<SimplexPoint> best(objectives);
  for (int first = step; first >= 0; --first)
    for (int o = 0; o < objectives; ++o)
      if (slice_best[first][o].value > best[o].value) best[o] = slice_best[first][o];
  return best;
}

// Local refinement: rounds of full coordinate-pair exchange sweeps, halving
// the move size after each round. Accepts strict improvements only, so the
// path and result are deterministic.
template <typename Eval>
SimplexPoint refine_on_simplex(SimplexPoint start, int step, int rounds, Eval&& eval) {
  SimplexPoint best = std::move(start);
  const int dims = static_cast<int>(best.point.size());
  double delta = 0.5 / step;
  for (int round = 0; round < rounds; ++round, delta *= 0.5) {
    for (int sweep = 0; sweep < 64; ++sweep) {
      bool improved = false;
      for (int i = 0; i < dims; ++i) {
        if (best.point(i) < delta) continue;
        for (int j = 0; j < dims; ++j) {
          if (j == i) continue;
          Eigen::VectorXd candidate = best.point;
          candidate(i) -= delta;
          candidate(j) += delta;
          const double value = eval(const_cast<const Eigen::VectorXd&>(candidate));
          if (value > best.value) {
            best.value = value;
            best.point = candidate;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
  }
  return best;
}

// A maximizer sitting on the simplex boundary suggests the grid resolution
// or the auxiliary alphabet is binding.
inline bool on_simplex_boundary(const Eigen::VectorXd& point, double tol = 1e-12) {
  for (Eigen::Index i = 0; i < point.size(); ++i)
    if (point(i) <= tol) return true;
  return false;
}

}  // namespace wiresecret
