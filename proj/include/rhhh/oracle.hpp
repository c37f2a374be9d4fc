#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "rhhh/hierarchy.hpp"
#include "rhhh/sketch.hpp"

namespace rhhh {

// Exact per-key packet counts.
class ExactFrequencyTable {
 public:
  void add(PacketKey key, uint64_t count = 1) {
    counts_[key.packed()] += count;
    total_ += count;
  }
  uint64_t total() const { return total_; }
  size_t distinct() const { return counts_.size(); }
  const std::unordered_map<uint64_t, uint64_t>& counts() const { return counts_; }

 private:
  std::unordered_map<uint64_t, uint64_t> counts_;
  uint64_t total_ = 0;
};

inline constexpr size_t kOracleMaxDistinctKeys = 1'000'000;

// The deterministic baseline: every lattice node is updated for every packet.
inline void mst_update(Sketch& sketch, PacketKey key) { sketch.update_all_levels(key); }

// Straight from the definitions: scan every key.
uint64_t exact_frequency(const ExactFrequencyTable& table, const Hierarchy& h, const Prefix& p);
uint64_t exact_conditioned_frequency(const ExactFrequencyTable& table, const Hierarchy& h,
                                     const Prefix& p, std::span<const Prefix> selected);

struct ExactHhhResult {
  // added[l] holds the prefixes that enter at level l; HHH_l is the union of
  // added[0..l].
  std::vector<std::vector<Prefix>> added;
  std::vector<Prefix> hhh;

  std::vector<Prefix> level_set(size_t level) const;
};

/// Keys grouped under every lattice node, so that per-prefix sums only visit
/// the keys below that prefix. Built once per table; read-only afterwards.
class ExactIndex {
 public:
  // Throws std::length_error above kOracleMaxDistinctKeys distinct keys.
  ExactIndex(const ExactFrequencyTable& table, const Hierarchy& hierarchy);

  const Hierarchy& hierarchy() const { return hierarchy_; }
  uint64_t total() const { return total_; }
  size_t distinct() const { return keys_.size(); }

  // Every prefix with nonzero exact frequency, grouped by node.
  std::vector<Prefix> universe() const;
  size_t group_count(size_t node) const { return groups_[node].size(); }
  Prefix group_prefix(size_t node, size_t group) const {
    return Prefix{static_cast<uint16_t>(node), groups_[node][group].key};
  }

  uint64_t frequency(const Prefix& p) const;

  // Keys below any member of `selected`.
  std::vector<uint8_t> covered_by(std::span<const Prefix> selected) const;
  uint64_t conditioned(const Prefix& p, const std::vector<uint8_t>& covered) const;
  uint64_t conditioned(size_t node, size_t group, const std::vector<uint8_t>& covered) const;

 private:
  struct Group {
    uint64_t key;
    uint32_t begin;
    uint32_t end;
    uint64_t sum;
  };
  const Group* find_group(const Prefix& p) const;

  Hierarchy hierarchy_;
  uint64_t total_ = 0;
  std::vector<uint64_t> keys_;
  std::vector<uint64_t> counts_;
  // Per node: groups sorted by masked key, and member key indices.
  std::vector<std::vector<Group>> groups_;
  std::vector<std::vector<uint32_t>> members_;
};

// Level-by-level exact HHH over the grouped index; groups within a level are
// evaluated in parallel.
ExactHhhResult exact_hhh(const ExactIndex& index, double theta);
ExactHhhResult exact_hhh(const ExactFrequencyTable& table, const Hierarchy& h, double theta);

// Serial reference: enumerates the prefix universe and applies
// exact_conditioned_frequency literally.
ExactHhhResult exact_hhh_reference(const ExactFrequencyTable& table, const Hierarchy& h, double theta);

// Conditioned frequency of each prefix against `selected` (parallel).
std::vector<uint64_t> conditioned_frequencies(const ExactIndex& index, std::span<const Prefix> prefixes,
                                              std::span<const Prefix> selected);

// Compares the set evaluation of the conditioned frequency against
// f_q - sum f_h + sum f_glb(h, h') over the best generalized set.
bool exact_conditioned_2d_identity_check(const ExactFrequencyTable& table, const Hierarchy& h,
                                         const Prefix& q, std::span<const Prefix> selected);

}  // namespace rhhh
