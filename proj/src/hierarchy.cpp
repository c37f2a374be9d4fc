#include "rhhh/hierarchy.hpp"

#include <algorithm>
#include <stdexcept>

namespace rhhh {

Hierarchy::Hierarchy(HierarchyKind kind, std::string name, int dims, int unit_bits, int units)
    : kind_(kind), name_(std::move(name)), dims_(dims), unit_bits_(unit_bits), units_(units) {
  if (dims != 1 && dims != 2) throw std::invalid_argument("hierarchy dims must be 1 or 2");
  if (unit_bits != 1 && unit_bits != 8) throw std::invalid_argument("unit_bits must be 1 or 8");
  if (units < 1 || units * unit_bits > 32) throw std::invalid_argument("units out of range");

  // node index: src_len in 1D, src_len * (units + 1) + dst_len in 2D.
  const int dst_span = dims == 2 ? units + 1 : 1;
  for (int s = 0; s <= units; ++s) {
    for (int d = 0; d < dst_span; ++d) {
      PrefixPattern pat;
      pat.src_len = static_cast<uint8_t>(s);
      pat.dst_len = static_cast<uint8_t>(d);
      pat.node_index = static_cast<uint16_t>(nodes_.size());
      nodes_.push_back(pat);
      masks_.push_back((uint64_t{dim_mask(s)} << 32) | (dims == 2 ? dim_mask(d) : 0u));
      levels_of_.push_back(dims == 2 ? (units - s) + (units - d) : units - s);
    }
  }
  by_level_.resize(static_cast<size_t>(depth()) + 1);
  for (const auto& pat : nodes_) by_level_[levels_of_[pat.node_index]].push_back(pat.node_index);
}

uint32_t Hierarchy::dim_mask(int len) const {
  const int bits = len * unit_bits_;
  if (bits == 0) return 0;
  return ~uint32_t{0} << (32 - bits);
}

Hierarchy Hierarchy::one_d_byte() { return Hierarchy(HierarchyKind::OneDByte, "1d-byte", 1, 8, 4); }
Hierarchy Hierarchy::one_d_bit() { return Hierarchy(HierarchyKind::OneDBit, "1d-bit", 1, 1, 32); }
Hierarchy Hierarchy::two_d_byte() { return Hierarchy(HierarchyKind::TwoDByte, "2d-byte", 2, 8, 4); }

Hierarchy Hierarchy::from_name(std::string_view name) {
  if (name == "1d-byte") return one_d_byte();
  if (name == "1d-bit") return one_d_bit();
  if (name == "2d-byte") return two_d_byte();
  throw std::invalid_argument("unknown hierarchy '" + std::string(name) +
                              "' (expected 1d-byte, 1d-bit or 2d-byte)");
}

Hierarchy Hierarchy::custom(int dims, int unit_bits, int units) {
  std::string name = std::to_string(dims) + "d-" + std::to_string(units) + "x" +
                     std::to_string(unit_bits) + "bit";
  return Hierarchy(HierarchyKind::Custom, std::move(name), dims, unit_bits, units);
}

size_t Hierarchy::fully_specified_node() const { return nodes_.size() - 1; }

std::optional<size_t> Hierarchy::node_for(int src_len, int dst_len) const {
  if (src_len < 0 || src_len > units_) return std::nullopt;
  if (dims_ == 1) {
    if (dst_len != 0) return std::nullopt;
    return static_cast<size_t>(src_len);
  }
  if (dst_len < 0 || dst_len > units_) return std::nullopt;
  return static_cast<size_t>(src_len * (units_ + 1) + dst_len);
}

std::vector<Prefix> Hierarchy::best_generalized(const Prefix& p, std::span<const Prefix> set) const {
  std::vector<Prefix> below;
  for (const Prefix& h : set) {
    if (strictly_generalizes(p, h)) below.push_back(h);
  }
  std::vector<Prefix> out;
  for (const Prefix& h : below) {
    bool shadowed = false;
    for (const Prefix& other : below) {
      if (strictly_generalizes(other, h)) {
        shadowed = true;
        break;
      }
    }
    if (!shadowed && std::find(out.begin(), out.end(), h) == out.end()) out.push_back(h);
  }
  return out;
}

std::optional<Prefix> Hierarchy::glb(const Prefix& a, const Prefix& b) const {
  const PrefixPattern& pa = nodes_[a.node];
  const PrefixPattern& pb = nodes_[b.node];
  const int src = std::max(pa.src_len, pb.src_len);
  const int dst = std::max(pa.dst_len, pb.dst_len);
  // Per dimension, the shorter side must be a prefix of the longer one. The
  // common bits under both masks must agree.
  const uint64_t common = masks_[a.node] & masks_[b.node];
  if ((a.key & common) != (b.key & common)) return std::nullopt;
  const size_t node = *node_for(src, dst);
  return Prefix{static_cast<uint16_t>(node), (a.key | b.key) & masks_[node]};
}

std::string format_ipv4(uint32_t addr) {
  return std::to_string(addr >> 24) + "." + std::to_string((addr >> 16) & 0xff) + "." +
         std::to_string((addr >> 8) & 0xff) + "." + std::to_string(addr & 0xff);
}

std::string Hierarchy::format_src(const Prefix& p) const {
  return format_ipv4(p.packet().src) + "/" + std::to_string(nodes_[p.node].src_len * unit_bits_);
}

std::string Hierarchy::format_dst(const Prefix& p) const {
  return format_ipv4(p.packet().dst) + "/" + std::to_string(nodes_[p.node].dst_len * unit_bits_);
}

std::string Hierarchy::format(const Prefix& p) const {
  if (dims_ == 1) return format_src(p);
  return format_src(p) + "->" + format_dst(p);
}

}  // namespace rhhh
