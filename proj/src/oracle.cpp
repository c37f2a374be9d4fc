#include "rhhh/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace rhhh {

uint64_t exact_frequency(const ExactFrequencyTable& table, const Hierarchy& h, const Prefix& p) {
  uint64_t sum = 0;
  for (const auto& [key, count] : table.counts()) {
    if (h.generalizes_key(p, PacketKey::from_packed(key))) sum += count;
  }
  return sum;
}

uint64_t exact_conditioned_frequency(const ExactFrequencyTable& table, const Hierarchy& h,
                                     const Prefix& p, std::span<const Prefix> selected) {
  uint64_t sum = 0;
  for (const auto& [key, count] : table.counts()) {
    const PacketKey e = PacketKey::from_packed(key);
    if (!h.generalizes_key(p, e)) continue;
    const bool under_selected =
        std::any_of(selected.begin(), selected.end(), [&](const Prefix& s) { return h.generalizes_key(s, e); });
    if (!under_selected) sum += count;
  }
  return sum;
}

std::vector<Prefix> ExactHhhResult::level_set(size_t level) const {
  std::vector<Prefix> out;
  for (size_t l = 0; l <= level && l < added.size(); ++l) out.insert(out.end(), added[l].begin(), added[l].end());
  return out;
}

ExactIndex::ExactIndex(const ExactFrequencyTable& table, const Hierarchy& hierarchy)
    : hierarchy_(hierarchy), total_(table.total()) {
  if (table.distinct() > kOracleMaxDistinctKeys) {
    throw std::length_error("exact oracle is limited to " + std::to_string(kOracleMaxDistinctKeys) +
                            " distinct keys");
  }
  keys_.reserve(table.distinct());
  for (const auto& kv : table.counts()) keys_.push_back(kv.first);
  std::sort(keys_.begin(), keys_.end());
  counts_.reserve(keys_.size());
  for (uint64_t k : keys_) counts_.push_back(table.counts().at(k));

  const size_t nodes = hierarchy_.size();
  groups_.resize(nodes);
  members_.resize(nodes);
  std::vector<std::pair<uint64_t, uint32_t>> scratch(keys_.size());
  for (size_t node = 0; node < nodes; ++node) {
    const uint64_t mask = hierarchy_.mask(node);
    for (uint32_t i = 0; i < keys_.size(); ++i) scratch[i] = {keys_[i] & mask, i};
    std::sort(scratch.begin(), scratch.end());
    auto& groups = groups_[node];
    auto& members = members_[node];
    members.resize(scratch.size());
    for (uint32_t i = 0; i < scratch.size(); ++i) {
      members[i] = scratch[i].second;
      if (groups.empty() || groups.back().key != scratch[i].first) groups.push_back({scratch[i].first, i, i, 0});
      groups.back().end = i + 1;
      groups.back().sum += counts_[scratch[i].second];
    }
  }
}

std::vector<Prefix> ExactIndex::universe() const {
  std::vector<Prefix> out;
  for (size_t node = 0; node < groups_.size(); ++node) {
    for (const Group& g : groups_[node]) out.push_back({static_cast<uint16_t>(node), g.key});
  }
  return out;
}

const ExactIndex::Group* ExactIndex::find_group(const Prefix& p) const {
  const auto& groups = groups_[p.node];
  auto it = std::lower_bound(groups.begin(), groups.end(), p.key,
                             [](const Group& g, uint64_t key) { return g.key < key; });
  if (it == groups.end() || it->key != p.key) return nullptr;
  return &*it;
}

uint64_t ExactIndex::frequency(const Prefix& p) const {
  const Group* g = find_group(p);
  return g ? g->sum : 0;
}

std::vector<uint8_t> ExactIndex::covered_by(std::span<const Prefix> selected) const {
  std::vector<uint8_t> covered(keys_.size(), 0);
  for (const Prefix& s : selected) {
    const Group* g = find_group(s);
    if (!g) continue;
    const auto& members = members_[s.node];
    for (uint32_t i = g->begin; i < g->end; ++i) covered[members[i]] = 1;
  }
  return covered;
}

uint64_t ExactIndex::conditioned(size_t node, size_t group, const std::vector<uint8_t>& covered) const {
  const Group& g = groups_[node][group];
  const auto& members = members_[node];
  uint64_t sum = 0;
  for (uint32_t i = g.begin; i < g.end; ++i) {
    if (!covered[members[i]]) sum += counts_[members[i]];
  }
  return sum;
}

uint64_t ExactIndex::conditioned(const Prefix& p, const std::vector<uint8_t>& covered) const {
  const Group* g = find_group(p);
  if (!g) return 0;
  return conditioned(p.node, static_cast<size_t>(g - groups_[p.node].data()), covered);
}

ExactHhhResult exact_hhh(const ExactIndex& index, double theta) {
  const Hierarchy& h = index.hierarchy();
  const double threshold = theta * static_cast<double>(index.total());
  ExactHhhResult result;
  result.added.resize(h.nodes_by_level().size());
  std::vector<uint8_t> covered(index.distinct(), 0);
  std::vector<Prefix> selected;

  for (size_t level = 0; level < h.nodes_by_level().size(); ++level) {
    // Flatten the level's (node, group) pairs so one parallel loop covers them.
    std::vector<std::pair<uint16_t, uint32_t>> work;
    for (const uint16_t node : h.nodes_by_level()[level]) {
      for (uint32_t g = 0; g < index.group_count(node); ++g) work.emplace_back(node, g);
    }
    std::vector<uint8_t> heavy(work.size(), 0);
    const auto n = static_cast<std::ptrdiff_t>(work.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto [node, g] = work[i];
      heavy[i] = static_cast<double>(index.conditioned(node, g, covered)) >= threshold;
    }
    for (size_t i = 0; i < work.size(); ++i) {
      if (heavy[i]) result.added[level].push_back(index.group_prefix(work[i].first, work[i].second));
    }
    selected.insert(selected.end(), result.added[level].begin(), result.added[level].end());
    const auto newly = index.covered_by(result.added[level]);
    for (size_t k = 0; k < covered.size(); ++k) covered[k] |= newly[k];
  }
  result.hhh = std::move(selected);
  return result;
}

ExactHhhResult exact_hhh(const ExactFrequencyTable& table, const Hierarchy& h, double theta) {
  return exact_hhh(ExactIndex(table, h), theta);
}

ExactHhhResult exact_hhh_reference(const ExactFrequencyTable& table, const Hierarchy& h, double theta) {
  if (table.distinct() > kOracleMaxDistinctKeys) {
    throw std::length_error("exact oracle is limited to " + std::to_string(kOracleMaxDistinctKeys) +
                            " distinct keys");
  }
  const double threshold = theta * static_cast<double>(table.total());
  ExactHhhResult result;
  result.added.resize(h.nodes_by_level().size());
  std::vector<Prefix> selected;
  for (size_t level = 0; level < h.nodes_by_level().size(); ++level) {
    for (const uint16_t node : h.nodes_by_level()[level]) {
      std::vector<Prefix> candidates;
      for (const auto& kv : table.counts()) candidates.push_back(h.generalize(PacketKey::from_packed(kv.first), node));
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      for (const Prefix& p : candidates) {
        if (static_cast<double>(exact_conditioned_frequency(table, h, p, selected)) >= threshold) {
          result.added[level].push_back(p);
        }
      }
    }
    selected.insert(selected.end(), result.added[level].begin(), result.added[level].end());
  }
  result.hhh = std::move(selected);
  return result;
}

std::vector<uint64_t> conditioned_frequencies(const ExactIndex& index, std::span<const Prefix> prefixes,
                                              std::span<const Prefix> selected) {
  const std::vector<uint8_t> covered = index.covered_by(selected);
  std::vector<uint64_t> out(prefixes.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(prefixes.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = index.conditioned(prefixes[i], covered);
  return out;
}

bool exact_conditioned_2d_identity_check(const ExactFrequencyTable& table, const Hierarchy& h,
                                         const Prefix& q, std::span<const Prefix> selected) {
  const auto set_based = static_cast<int64_t>(exact_conditioned_frequency(table, h, q, selected));
  const std::vector<Prefix> best = h.best_generalized(q, selected);
  auto formula = static_cast<int64_t>(exact_frequency(table, h, q));
  for (const Prefix& p : best) formula -= static_cast<int64_t>(exact_frequency(table, h, p));
  for (size_t i = 0; i < best.size(); ++i) {
    for (size_t j = i + 1; j < best.size(); ++j) {
      if (const auto g = h.glb(best[i], best[j])) formula += static_cast<int64_t>(exact_frequency(table, h, *g));
    }
  }
  return set_based == formula;
}

}  // namespace rhhh
