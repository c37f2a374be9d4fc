#include <doctest.h>

#include <algorithm>
#include <set>

#include "rhhh/hierarchy.hpp"

using namespace rhhh;

namespace {

PacketKey ip(uint32_t a, uint32_t b, uint32_t c, uint32_t d, uint32_t e = 0, uint32_t f = 0, uint32_t g = 0,
             uint32_t h = 0) {
  return {(a << 24) | (b << 16) | (c << 8) | d, (e << 24) | (f << 16) | (g << 8) | h};
}

Prefix at(const Hierarchy& h, PacketKey k, int src_len, int dst_len = 0) {
  return h.generalize(k, *h.node_for(src_len, dst_len));
}

// Every prefix of a reduced lattice: all nodes times all masked keys of a
// small key universe whose units take values in {1, 2}.
std::vector<Prefix> toy_prefixes(const Hierarchy& h) {
  std::vector<PacketKey> keys;
  const int u = h.units();
  const int dims = h.dims();
  const int total_units = u * dims;
  const int combos = 1 << total_units;
  for (int m = 0; m < combos; ++m) {
    uint32_t src = 0, dst = 0;
    for (int i = 0; i < u; ++i) src |= uint32_t((m >> i) & 1 ? 2 : 1) << (24 - 8 * i);
    if (dims == 2) {
      for (int i = 0; i < u; ++i) dst |= uint32_t((m >> (u + i)) & 1 ? 2 : 1) << (24 - 8 * i);
    }
    keys.push_back({src, dst});
  }
  std::set<Prefix> out;
  for (const auto& k : keys) {
    for (size_t n = 0; n < h.size(); ++n) out.insert(h.generalize(k, n));
  }
  return {out.begin(), out.end()};
}

std::vector<PacketKey> toy_keys(const Hierarchy& h) {
  std::vector<PacketKey> keys;
  for (const Prefix& p : toy_prefixes(h)) {
    if (p.node == h.fully_specified_node()) keys.push_back(p.packet());
  }
  return keys;
}

// Descendant check by enumeration: q is below p iff every fully specified
// key under q is also under p.
bool below_by_keys(const Hierarchy& h, const std::vector<PacketKey>& keys, const Prefix& p, const Prefix& q) {
  bool any = false;
  for (const auto& k : keys) {
    if (!h.generalizes_key(q, k)) continue;
    any = true;
    if (!h.generalizes_key(p, k)) return false;
  }
  return any && h.node(p.node).src_len <= h.node(q.node).src_len && h.node(p.node).dst_len <= h.node(q.node).dst_len;
}

}  // namespace

TEST_CASE("lattice sizes and depths") {
  CHECK(Hierarchy::one_d_byte().size() == 5);
  CHECK(Hierarchy::one_d_bit().size() == 33);
  CHECK(Hierarchy::two_d_byte().size() == 25);
  CHECK(Hierarchy::one_d_byte().depth() == 4);
  CHECK(Hierarchy::one_d_bit().depth() == 32);
  CHECK(Hierarchy::two_d_byte().depth() == 8);
  CHECK_THROWS_AS(Hierarchy::from_name("3d-byte"), std::invalid_argument);
  CHECK(Hierarchy::from_name("2d-byte").kind() == HierarchyKind::TwoDByte);
}

TEST_CASE("node index is a bijection onto [0, H)") {
  for (const auto& h : {Hierarchy::one_d_byte(), Hierarchy::one_d_bit(), Hierarchy::two_d_byte()}) {
    std::set<std::pair<int, int>> patterns;
    for (size_t i = 0; i < h.size(); ++i) {
      CHECK(h.node(i).node_index == i);
      patterns.insert({h.node(i).src_len, h.node(i).dst_len});
      CHECK(*h.node_for(h.node(i).src_len, h.node(i).dst_len) == i);
    }
    CHECK(patterns.size() == h.size());
    CHECK(h.level(h.fully_specified_node()) == 0);
    CHECK(h.level(h.fully_general_node()) == h.depth());
  }
}

TEST_CASE("nodes_by_level") {
  const auto one = Hierarchy::one_d_byte().nodes_by_level();
  REQUIRE(one.size() == 5);
  for (const auto& lvl : one) CHECK(lvl.size() == 1);
  CHECK(one[0][0] == 4);

  // Pairs (i, j) with i, j in 0..4 grouped by 8 - i - j.
  const auto two = Hierarchy::two_d_byte().nodes_by_level();
  REQUIRE(two.size() == 9);
  std::vector<size_t> counts;
  for (const auto& lvl : two) counts.push_back(lvl.size());
  CHECK(counts == std::vector<size_t>{1, 2, 3, 4, 5, 4, 3, 2, 1});

  CHECK(Hierarchy::one_d_bit().nodes_by_level().size() == 33);
}

TEST_CASE("generalize masks the key") {
  const auto h1 = Hierarchy::one_d_byte();
  const Prefix p = at(h1, ip(181, 7, 20, 6), 1);
  CHECK(p.packet().src == (181u << 24));
  CHECK(h1.format(p) == "181.0.0.0/8");

  const auto h2 = Hierarchy::two_d_byte();
  const Prefix q = at(h2, ip(1, 2, 3, 4, 5, 6, 7, 8), 2, 1);
  CHECK(h2.format(q) == "1.2.0.0/16->5.0.0.0/8");
  CHECK(at(h2, ip(9, 9, 9, 9, 8, 8, 8, 8), 0, 0).key == 0);

  const auto bit = Hierarchy::one_d_bit();
  CHECK(at(bit, ip(255, 255, 255, 255), 9).packet().src == 0xFF800000u);
}

TEST_CASE("masking is idempotent") {
  const auto h = Hierarchy::two_d_byte();
  const PacketKey k = ip(10, 20, 30, 40, 50, 60, 70, 80);
  for (size_t n = 0; n < h.size(); ++n) {
    const Prefix once = h.generalize(k, n);
    CHECK(h.generalize(once.packet(), n) == once);
  }
}

TEST_CASE("generalizes") {
  const auto h1 = Hierarchy::one_d_byte();
  const PacketKey k = ip(181, 7, 20, 6);
  CHECK(h1.generalizes(at(h1, k, 0), at(h1, k, 4)));
  CHECK(h1.generalizes(at(h1, k, 2), at(h1, k, 4)));
  CHECK_FALSE(h1.generalizes(at(h1, k, 4), at(h1, k, 2)));
  CHECK_FALSE(h1.generalizes(at(h1, ip(181, 8, 0, 0), 2), at(h1, k, 4)));

  const auto h2 = Hierarchy::two_d_byte();
  const PacketKey flow = ip(181, 7, 20, 6, 208, 67, 222, 222);
  CHECK(h2.generalizes(at(h2, flow, 3, 4), at(h2, flow, 4, 4)));
  CHECK(h2.generalizes(at(h2, flow, 4, 3), at(h2, flow, 4, 4)));
  CHECK_FALSE(h2.generalizes(at(h2, flow, 3, 4), at(h2, flow, 4, 3)));
}

TEST_CASE("generalizes is a partial order on toy lattices") {
  for (const auto& h : {Hierarchy::custom(1, 8, 2), Hierarchy::custom(2, 8, 2)}) {
    const auto all = toy_prefixes(h);
    const auto keys = toy_keys(h);
    for (const auto& a : all) {
      CHECK(h.generalizes(a, a));
      for (const auto& b : all) {
        CHECK(h.generalizes(a, b) == below_by_keys(h, keys, a, b));
        if (h.generalizes(a, b) && h.generalizes(b, a)) CHECK(a == b);
        if (!h.generalizes(a, b)) continue;
        for (const auto& c : all) {
          if (h.generalizes(b, c)) CHECK(h.generalizes(a, c));
        }
      }
    }
  }
}

TEST_CASE("best_generalized") {
  const auto h = Hierarchy::one_d_byte();
  const Prefix p = at(h, ip(142, 14, 0, 0), 2);
  const std::vector<Prefix> set = {at(h, ip(142, 14, 13, 0), 3), at(h, ip(142, 14, 13, 14), 4)};
  CHECK(h.best_generalized(p, set) == std::vector<Prefix>{set[0]});
  CHECK(h.best_generalized(p, {}).empty());

  const auto h2 = Hierarchy::two_d_byte();
  const Prefix root = at(h2, {}, 0, 0);
  const std::vector<Prefix> set2 = {at(h2, ip(1, 0, 0, 0), 1, 0), at(h2, ip(1, 2, 0, 0), 2, 0)};
  CHECK(h2.best_generalized(root, set2) == std::vector<Prefix>{set2[0]});
  // p itself is not strictly below p.
  CHECK(h2.best_generalized(set2[0], set2) == std::vector<Prefix>{set2[1]});
}

TEST_CASE("best_generalized returns an antichain") {
  const auto h = Hierarchy::custom(2, 8, 2);
  const auto all = toy_prefixes(h);
  uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state >> 33;
  };
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Prefix> set;
    const size_t n = next() % 8;
    for (size_t i = 0; i < n; ++i) set.push_back(all[next() % all.size()]);
    const Prefix p = all[next() % all.size()];
    const auto best = h.best_generalized(p, set);
    for (const auto& a : best) {
      CHECK(h.strictly_generalizes(p, a));
      for (const auto& b : best) {
        if (!(a == b)) CHECK_FALSE(h.generalizes(a, b));
      }
    }
  }
}

TEST_CASE("glb") {
  const auto h = Hierarchy::two_d_byte();
  const auto g = h.glb(at(h, ip(1, 2, 0, 0), 2, 0), at(h, ip(0, 0, 0, 0, 3, 4, 0, 0), 0, 2));
  REQUIRE(g);
  CHECK(h.format(*g) == "1.2.0.0/16->3.4.0.0/16");

  CHECK_FALSE(h.glb(at(h, ip(1, 0, 0, 0), 1, 0), at(h, ip(2, 0, 0, 0), 1, 0)));

  const auto g2 = h.glb(at(h, ip(1, 2, 0, 0, 5, 0, 0, 0), 2, 1), at(h, ip(1, 0, 0, 0, 5, 6, 0, 0), 1, 2));
  REQUIRE(g2);
  CHECK(h.format(*g2) == "1.2.0.0/16->5.6.0.0/16");
}

TEST_CASE("glb matches enumeration of common descendants on a 2x2-byte lattice") {
  const auto h = Hierarchy::custom(2, 8, 2);
  const auto all = toy_prefixes(h);
  for (const auto& a : all) {
    for (const auto& b : all) {
      std::vector<Prefix> common;
      for (const auto& c : all) {
        if (h.generalizes(a, c) && h.generalizes(b, c)) common.push_back(c);
      }
      const auto g = h.glb(a, b);
      if (common.empty()) {
        CHECK_FALSE(g);
        continue;
      }
      REQUIRE(g);
      // The glb is itself common, and every common descendant lies below it.
      CHECK(std::find(common.begin(), common.end(), *g) != common.end());
      for (const auto& c : common) CHECK(h.generalizes(*g, c));
    }
  }
}
