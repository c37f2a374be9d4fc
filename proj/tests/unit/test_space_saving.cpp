#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "rhhh/space_saving.hpp"

using namespace rhhh;

namespace {

constexpr uint64_t a = 0xA, b = 0xB, c = 0xC;

std::vector<CounterEntry> sorted_entries(const SpaceSaving& ss) {
  auto e = ss.heavy_entries();
  std::sort(e.begin(), e.end(), [](const CounterEntry& x, const CounterEntry& y) { return x.key < y.key; });
  return e;
}

}  // namespace

TEST_CASE("hand-simulated streams") {
  SUBCASE("capacity 2, a a b") {
    SpaceSaving ss(2);
    for (uint64_t k : {a, a, b}) ss.increment(k);
    CHECK(sorted_entries(ss) == std::vector<CounterEntry>{{a, 2, 2}, {b, 1, 1}});
    CHECK(ss.query(a) == CounterBounds{2, 2});
  }
  SUBCASE("capacity 2, a a b c evicts b") {
    SpaceSaving ss(2);
    for (uint64_t k : {a, a, b, c}) ss.increment(k);
    CHECK(sorted_entries(ss) == std::vector<CounterEntry>{{a, 2, 2}, {c, 2, 1}});
    CHECK(ss.query(c) == CounterBounds{2, 1});
    CHECK(ss.query(b) == CounterBounds{2, 0});
    CHECK(ss.min_count() == 2);
  }
  SUBCASE("capacity 1") {
    SpaceSaving ss(1);
    ss.increment(a);
    CHECK(sorted_entries(ss) == std::vector<CounterEntry>{{a, 1, 1}});
  }
  SUBCASE("absent key on a non-full table") {
    SpaceSaving ss(4);
    CHECK(ss.query(a) == CounterBounds{0, 0});
    CHECK(ss.heavy_entries().empty());
    ss.increment(b);
    CHECK(ss.query(a) == CounterBounds{0, 0});
  }
}

TEST_CASE("eviction takes the oldest entry of the minimum bucket") {
  SpaceSaving ss(3);
  for (uint64_t k : {1, 2, 3}) ss.increment(k);
  ss.increment(4);  // 1 is the oldest count-1 entry
  CHECK(ss.query(1) == CounterBounds{1, 0});
  CHECK(ss.query(4) == CounterBounds{2, 1});
  ss.increment(5);  // then 2
  CHECK(ss.query(5) == CounterBounds{2, 1});
  CHECK(ss.query(3) == CounterBounds{1, 1});
}

TEST_CASE("key zero is an ordinary key") {
  SpaceSaving ss(2);
  ss.increment(0);
  ss.increment(0);
  CHECK(ss.query(0) == CounterBounds{2, 2});
}

TEST_CASE("bounds bracket exact counts on random streams") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t capacity = 1 + rng() % 16;
    const uint64_t keys = 1 + rng() % 64;
    const size_t len = rng() % 2000;
    SpaceSaving ss(capacity);
    std::map<uint64_t, uint64_t> exact;
    for (size_t i = 0; i < len; ++i) {
      // Skewed keys so that some stay resident.
      const uint64_t k = (rng() % keys) * (rng() % keys) % keys;
      ss.increment(k);
      ++exact[k];
      REQUIRE(ss.count_sum() == ss.total_updates());
      REQUIRE(ss.size() <= capacity);
    }
    const double slack = static_cast<double>(ss.total_updates()) / capacity;
    for (uint64_t k = 0; k < keys; ++k) {
      const auto q = ss.query(k);
      const uint64_t f = exact.count(k) ? exact[k] : 0;
      CHECK(q.lower <= f);
      CHECK(f <= q.upper);
      CHECK(static_cast<double>(q.upper - f) <= slack);
    }
    if (ss.full()) CHECK(static_cast<double>(ss.min_count()) <= slack);
  }
}

TEST_CASE("index survives heavy churn") {
  // Many evictions exercise backward-shift deletion in the key index.
  SpaceSaving ss(64);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200000; ++i) ss.increment(rng() % 5000);
  for (const auto& e : ss.heavy_entries()) CHECK(ss.query(e.key) == CounterBounds{e.upper, e.lower});
  CHECK(ss.count_sum() == 200000);
}

TEST_CASE("rejects zero capacity") { CHECK_THROWS_AS(SpaceSaving(0), std::invalid_argument); }
