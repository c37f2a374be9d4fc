#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rhhh {

struct CounterBounds {
  uint64_t upper = 0;
  uint64_t lower = 0;
  friend constexpr bool operator==(const CounterBounds&, const CounterBounds&) = default;
};

struct CounterEntry {
  uint64_t key = 0;
  uint64_t upper = 0;
  uint64_t lower = 0;
  friend constexpr bool operator==(const CounterEntry&, const CounterEntry&) = default;
};

/// Space Saving over 64-bit keys with unit increments.
///
/// Counters live in a stream-summary: buckets of equal count form a doubly
/// linked chain in ascending count order, and each bucket holds a FIFO list
/// of its entries. A fixed-size open-addressing index maps keys to entries.
/// Every increment touches a constant number of nodes, independent of the
/// capacity. On eviction the oldest entry of the minimum bucket is replaced.
class SpaceSaving {
 public:
  explicit SpaceSaving(size_t capacity);

  void increment(uint64_t key);

  // (count, count - overestimation) for resident keys; (min_count, 0) for an
  // absent key when full; (0, 0) otherwise.
  CounterBounds query(uint64_t key) const;

  // Resident entries, in slot order.
  std::vector<CounterEntry> heavy_entries() const;

  size_t capacity() const { return capacity_; }
  size_t size() const { return size_; }
  bool full() const { return size_ == capacity_; }
  uint64_t total_updates() const { return total_; }
  uint64_t min_count() const { return head_ < 0 ? 0 : buckets_[head_].count; }

  // Sum of resident counts, walking the bucket chain. Test hook.
  uint64_t count_sum() const;

 private:
  struct Entry {
    uint64_t key;
    uint64_t overestimation;
    int32_t bucket;
    int32_t prev;
    int32_t next;
  };
  struct Bucket {
    uint64_t count;
    int32_t first;
    int32_t last;
    int32_t prev;
    int32_t next;
  };

  int32_t find(uint64_t key) const;
  void index_insert(uint64_t key, int32_t entry);
  void index_erase(uint64_t key);
  size_t slot_of(uint64_t key) const {
    return static_cast<size_t>((key * 0x9E3779B97F4A7C15ull) >> shift_);
  }

  int32_t new_bucket(uint64_t count, int32_t after);
  void release_bucket(int32_t b);
  void attach(int32_t e, int32_t b);
  void detach(int32_t e);
  void bump(int32_t e);

  size_t capacity_;
  size_t size_ = 0;
  uint64_t total_ = 0;

  std::vector<Entry> entries_;
  std::vector<Bucket> buckets_;
  std::vector<int32_t> free_buckets_;
  int32_t head_ = -1;

  std::vector<uint64_t> slot_keys_;
  std::vector<int32_t> slot_entries_;
  size_t slot_mask_ = 0;
  int shift_ = 0;
};

}  // namespace rhhh
