#pragma once

// Access structures over at most 64 participants, stored as bitmask families.
// The qualified family is read upward closed (supersets of a qualified set are
// qualified) and the forbidden family downward closed (subsets of a forbidden
// set are forbidden). Participant i occupies bit i-1.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wiresecret/common.hpp"

namespace wiresecret {

using SubsetMask = std::uint64_t;

struct AccessStructure {
  int participants = 0;                    // K
  std::vector<SubsetMask> qualified;       // generating family
  std::vector<SubsetMask> forbidden;       // generating family
};

struct StructureReport {
  bool valid = true;
  // Qualified/forbidden pairs (A, B) with A a subset of B. Any such pair makes
  // some set simultaneously qualified and forbidden under the closures.
  std::vector<std::pair<SubsetMask, SubsetMask>> conflicts;
  std::vector<std::string> issues;
};

inline SubsetMask mask_from_members(const std::vector<int>& members) {
  SubsetMask m = 0;
  for (int p : members) {
    if (p < 1 || p > 64) throw ValidationError("participant index out of range: " + std::to_string(p));
    m |= SubsetMask{1} << (p - 1);
  }
  return m;
}

inline std::vector<int> members_of(SubsetMask mask) {
  std::vector<int> out;
  for (int p = 1; p <= 64; ++p)
    if (mask & (SubsetMask{1} << (p - 1))) out.push_back(p);
  return out;
}

inline std::string subset_to_string(SubsetMask mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int p : members_of(mask)) {
    if (!first) os << ',';
    os << p;
    first = false;
  }
  os << '}';
  return os.str();
}

namespace detail {

inline std::vector<SubsetMask> sorted_unique(std::vector<SubsetMask> family) {
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  return family;
}

inline bool member_range_ok(SubsetMask mask, int participants) {
  if (participants >= 64) return mask != 0;
  return mask != 0 && (mask >> participants) == 0;
}

}  // namespace detail

// Structural validation. Member-range violations and qualified/forbidden
// conflicts clear `valid`; empty families are reported as anomalies only.
inline StructureReport validate(const AccessStructure& s) {
  StructureReport report;
  if (s.participants < 1 || s.participants > 64) {
    report.valid = false;
    report.issues.push_back("participant count must be in [1,64], got " + std::to_string(s.participants));
    return report;
  }
  for (const auto* family : {&s.qualified, &s.forbidden}) {
    for (SubsetMask m : *family) {
      if (!detail::member_range_ok(m, s.participants)) {
        report.valid = false;
        report.issues.push_back("set " + subset_to_string(m) + " is empty or exceeds participant count " +
                                std::to_string(s.participants));
      }
    }
  }
  if (!report.valid) return report;
  // A conflicts with B exactly when A is contained in B: then B is qualified
  // by upward closure of A and forbidden directly.
  for (SubsetMask a : detail::sorted_unique(s.qualified))
    for (SubsetMask b : detail::sorted_unique(s.forbidden))
      if ((a & ~b) == 0) report.conflicts.emplace_back(a, b);
  if (!report.conflicts.empty()) {
    report.valid = false;
    report.issues.push_back("qualified set " + subset_to_string(report.conflicts.front().first) +
                            " is contained in forbidden set " + subset_to_string(report.conflicts.front().second));
  }
  if (s.qualified.empty()) report.issues.push_back("anomaly: qualified family is empty");
  if (s.forbidden.empty()) report.issues.push_back("anomaly: forbidden family is empty");
  return report;
}

// Inclusion-minimal members of a family (the minimal antichain generating the
// same upward closure).
inline std::vector<SubsetMask> minimal_qualified(const std::vector<SubsetMask>& family) {
  std::vector<SubsetMask> sets = detail::sorted_unique(family);
  std::vector<SubsetMask> out;
  for (SubsetMask a : sets) {
    bool dominated = false;
    for (SubsetMask b : sets)
      if (b != a && (b & ~a) == 0) { dominated = true; break; }
    if (!dominated) out.push_back(a);
  }
  return out;
}

// Inclusion-maximal members of a family (the maximal antichain generating the
// same downward closure).
inline std::vector<SubsetMask> maximal_forbidden(const std::vector<SubsetMask>& family) {
  std::vector<SubsetMask> sets = detail::sorted_unique(family);
  std::vector<SubsetMask> out;
  for (SubsetMask a : sets) {
    bool dominated = false;
    for (SubsetMask b : sets)
      if (b != a && (a & ~b) == 0) { dominated = true; break; }
    if (!dominated) out.push_back(a);
  }
  return out;
}

// Forbidden family when everything not qualified is forbidden: the
// inclusion-maximal nonempty subsets outside the upward closure of
// `qualified`. Downward closure of the result is the full complement.
// Enumerates all 2^K subsets, so participants is capped at 20.
inline std::vector<SubsetMask> complement_forbidden(const std::vector<SubsetMask>& qualified, int participants) {
  if (participants < 1 || participants > 20)
    throw ValidationError("complement enumeration requires participant count in [1,20]");
  const std::vector<SubsetMask> gen = minimal_qualified(qualified);
  const SubsetMask full = (participants == 64) ? ~SubsetMask{0} : ((SubsetMask{1} << participants) - 1);
  std::vector<SubsetMask> complement;
  for (SubsetMask m = 1; m <= full; ++m) {
    bool is_qualified = false;
    for (SubsetMask a : gen)
      if ((a & ~m) == 0) { is_qualified = true; break; }
    if (!is_qualified) complement.push_back(m);
  }
  return maximal_forbidden(complement);
}

// (k, K) threshold structure: any k participants reconstruct, any k-1 learn
// nothing. Generating families are the size-k and size-(k-1) subsets.
inline AccessStructure threshold_structure(int k, int participants) {
  if (participants < 1 || participants > 64)
    throw ValidationError("participant count must be in [1,64]");
  if (k < 1 || k > participants) throw ValidationError("threshold k must be in [1,K]");
  AccessStructure s;
  s.participants = participants;
  // Gosper's hack enumerates fixed-popcount masks in increasing order.
  auto all_of_size = [participants](int size) {
    std::vector<SubsetMask> out;
    if (size == 0) return out;
    const SubsetMask limit = (participants == 64) ? ~SubsetMask{0} : ((SubsetMask{1} << participants) - 1);
    SubsetMask m = (SubsetMask{1} << size) - 1;
    while (m <= limit) {
      out.push_back(m);
      SubsetMask low = m & (~m + 1);
      SubsetMask ripple = m + low;
      if (ripple > limit || ripple < m) break;
      m = ripple | (((m ^ ripple) >> 2) / low);
    }
    return out;
  };
  s.qualified = all_of_size(k);
  s.forbidden = all_of_size(k - 1);
  return s;
}

}  // namespace wiresecret
