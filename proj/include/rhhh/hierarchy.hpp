#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rhhh {

// A fully specified packet identity. 1D hierarchies ignore dst.
struct PacketKey {
  uint32_t src = 0;
  uint32_t dst = 0;

  constexpr uint64_t packed() const { return (uint64_t{src} << 32) | dst; }
  static constexpr PacketKey from_packed(uint64_t v) {
    return PacketKey{static_cast<uint32_t>(v >> 32), static_cast<uint32_t>(v)};
  }
  friend constexpr auto operator<=>(const PacketKey&, const PacketKey&) = default;
};

// One node of the prefix lattice. Lengths are in hierarchy units (bits or bytes).
struct PrefixPattern {
  uint8_t src_len = 0;
  uint8_t dst_len = 0;
  uint16_t node_index = 0;
};

// A prefix is a lattice node plus a packed (src << 32 | dst) key with every
// bit outside the node's mask cleared.
struct Prefix {
  uint16_t node = 0;
  uint64_t key = 0;

  PacketKey packet() const { return PacketKey::from_packed(key); }
  friend constexpr bool operator==(const Prefix&, const Prefix&) = default;
  friend constexpr auto operator<=>(const Prefix&, const Prefix&) = default;
};

struct PrefixHash {
  size_t operator()(const Prefix& p) const noexcept {
    return std::hash<uint64_t>{}(p.key * 0x9E3779B97F4A7C15ull ^ p.node);
  }
};

enum class HierarchyKind { OneDByte, OneDBit, TwoDByte, Custom };

class Hierarchy {
 public:
  static Hierarchy one_d_byte();
  static Hierarchy one_d_bit();
  static Hierarchy two_d_byte();
  // Accepts "1d-byte", "1d-bit" or "2d-byte"; throws std::invalid_argument otherwise.
  static Hierarchy from_name(std::string_view name);
  // Reduced lattices for exhaustive tests: `units` units of `unit_bits` bits
  // taken from the top of each address.
  static Hierarchy custom(int dims, int unit_bits, int units);

  HierarchyKind kind() const { return kind_; }
  std::string_view name() const { return name_; }
  int dims() const { return dims_; }
  int unit_bits() const { return unit_bits_; }
  int units() const { return units_; }

  // H: number of lattice nodes.
  size_t size() const { return nodes_.size(); }
  // L: level of the fully general node.
  int depth() const { return dims_ * units_; }

  const PrefixPattern& node(size_t index) const { return nodes_[index]; }
  uint64_t mask(size_t index) const { return masks_[index]; }
  int level(size_t index) const { return levels_of_[index]; }
  size_t fully_specified_node() const;
  size_t fully_general_node() const { return 0; }
  std::optional<size_t> node_for(int src_len, int dst_len) const;

  // Levels in ascending order, 0 = fully specified.
  const std::vector<std::vector<uint16_t>>& nodes_by_level() const { return by_level_; }

  Prefix generalize(PacketKey key, size_t node) const {
    return Prefix{static_cast<uint16_t>(node), key.packed() & masks_[node]};
  }
  Prefix generalize(const Prefix& p, size_t node) const {
    return Prefix{static_cast<uint16_t>(node), p.key & masks_[node]};
  }

  // True iff p is an ancestor of q or equal to it.
  bool generalizes(const Prefix& p, const Prefix& q) const {
    const PrefixPattern& a = nodes_[p.node];
    const PrefixPattern& b = nodes_[q.node];
    return a.src_len <= b.src_len && a.dst_len <= b.dst_len && (q.key & masks_[p.node]) == p.key;
  }
  bool strictly_generalizes(const Prefix& p, const Prefix& q) const {
    return p.node != q.node && generalizes(p, q);
  }
  bool generalizes_key(const Prefix& p, PacketKey key) const {
    return (key.packed() & masks_[p.node]) == p.key;
  }

  // Members of `set` strictly below p with no other member strictly between.
  std::vector<Prefix> best_generalized(const Prefix& p, std::span<const Prefix> set) const;

  // Most general common descendant; nullopt when the specified parts conflict.
  std::optional<Prefix> glb(const Prefix& a, const Prefix& b) const;

  // "181.7.0.0/16" in 1D, "181.7.0.0/16->8.8.8.8/32" in 2D. Lengths in bits.
  std::string format(const Prefix& p) const;
  std::string format_src(const Prefix& p) const;
  std::string format_dst(const Prefix& p) const;

 private:
  Hierarchy(HierarchyKind kind, std::string name, int dims, int unit_bits, int units);

  uint32_t dim_mask(int len) const;

  HierarchyKind kind_;
  std::string name_;
  int dims_;
  int unit_bits_;
  int units_;
  std::vector<PrefixPattern> nodes_;
  std::vector<uint64_t> masks_;
  std::vector<int> levels_of_;
  std::vector<std::vector<uint16_t>> by_level_;
};

std::string format_ipv4(uint32_t addr);

}  // namespace rhhh
