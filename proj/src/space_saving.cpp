#include "rhhh/space_saving.hpp"

#include <bit>
#include <stdexcept>

namespace rhhh {

SpaceSaving::SpaceSaving(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("space saving capacity must be positive");
  if (capacity > (size_t{1} << 30)) throw std::invalid_argument("space saving capacity too large");
  entries_.resize(capacity);
  // At most `capacity` distinct counts are live, plus one while an entry moves.
  buckets_.resize(capacity + 1);
  free_buckets_.reserve(capacity + 1);
  for (size_t i = capacity + 1; i-- > 0;) free_buckets_.push_back(static_cast<int32_t>(i));

  // Load factor stays at or below one half.
  const size_t slots = std::bit_ceil(capacity * 2);
  slot_keys_.assign(slots, 0);
  slot_entries_.assign(slots, -1);
  slot_mask_ = slots - 1;
  shift_ = 64 - std::countr_zero(slots);
}

int32_t SpaceSaving::find(uint64_t key) const {
  size_t i = slot_of(key) & slot_mask_;
  while (slot_entries_[i] >= 0) {
    if (slot_keys_[i] == key) return slot_entries_[i];
    i = (i + 1) & slot_mask_;
  }
  return -1;
}

void SpaceSaving::index_insert(uint64_t key, int32_t entry) {
  size_t i = slot_of(key) & slot_mask_;
  while (slot_entries_[i] >= 0) i = (i + 1) & slot_mask_;
  slot_keys_[i] = key;
  slot_entries_[i] = entry;
}

// Linear probing with backward-shift deletion, so no tombstones accumulate.
void SpaceSaving::index_erase(uint64_t key) {
  size_t i = slot_of(key) & slot_mask_;
  while (slot_keys_[i] != key || slot_entries_[i] < 0) i = (i + 1) & slot_mask_;
  size_t hole = i;
  size_t j = hole;
  for (;;) {
    j = (j + 1) & slot_mask_;
    if (slot_entries_[j] < 0) break;
    const size_t home = slot_of(slot_keys_[j]) & slot_mask_;
    // Move j into the hole unless its home lies cyclically in (hole, j].
    const bool home_in_range = hole <= j ? (home > hole && home <= j) : (home > hole || home <= j);
    if (!home_in_range) {
      slot_keys_[hole] = slot_keys_[j];
      slot_entries_[hole] = slot_entries_[j];
      hole = j;
    }
  }
  slot_entries_[hole] = -1;
}

int32_t SpaceSaving::new_bucket(uint64_t count, int32_t after) {
  const int32_t b = free_buckets_.back();
  free_buckets_.pop_back();
  Bucket& nb = buckets_[b];
  nb.count = count;
  nb.first = nb.last = -1;
  if (after < 0) {
    nb.prev = -1;
    nb.next = head_;
    if (head_ >= 0) buckets_[head_].prev = b;
    head_ = b;
  } else {
    nb.prev = after;
    nb.next = buckets_[after].next;
    if (nb.next >= 0) buckets_[nb.next].prev = b;
    buckets_[after].next = b;
  }
  return b;
}

void SpaceSaving::release_bucket(int32_t b) {
  Bucket& ob = buckets_[b];
  if (ob.prev >= 0) buckets_[ob.prev].next = ob.next;
  else head_ = ob.next;
  if (ob.next >= 0) buckets_[ob.next].prev = ob.prev;
  free_buckets_.push_back(b);
}

void SpaceSaving::attach(int32_t e, int32_t b) {
  Entry& en = entries_[e];
  Bucket& bk = buckets_[b];
  en.bucket = b;
  en.next = -1;
  en.prev = bk.last;
  if (bk.last >= 0) entries_[bk.last].next = e;
  else bk.first = e;
  bk.last = e;
}

void SpaceSaving::detach(int32_t e) {
  Entry& en = entries_[e];
  Bucket& bk = buckets_[en.bucket];
  if (en.prev >= 0) entries_[en.prev].next = en.next;
  else bk.first = en.next;
  if (en.next >= 0) entries_[en.next].prev = en.prev;
  else bk.last = en.prev;
}

void SpaceSaving::bump(int32_t e) {
  const int32_t b = entries_[e].bucket;
  Bucket& bk = buckets_[b];
  const uint64_t target = bk.count + 1;
  const int32_t nb = bk.next;
  if (nb >= 0 && buckets_[nb].count == target) {
    detach(e);
    attach(e, nb);
    if (buckets_[b].first < 0) release_bucket(b);
  } else if (bk.first == e && bk.last == e) {
    bk.count = target;
  } else {
    detach(e);
    attach(e, new_bucket(target, b));
  }
}

void SpaceSaving::increment(uint64_t key) {
  ++total_;
  int32_t e = find(key);
  if (e >= 0) {
    bump(e);
    return;
  }
  if (size_ < capacity_) {
    e = static_cast<int32_t>(size_++);
    entries_[e].key = key;
    entries_[e].overestimation = 0;
    index_insert(key, e);
    const int32_t b = (head_ >= 0 && buckets_[head_].count == 1) ? head_ : new_bucket(1, -1);
    attach(e, b);
    return;
  }
  e = buckets_[head_].first;
  Entry& victim = entries_[e];
  index_erase(victim.key);
  victim.key = key;
  victim.overestimation = buckets_[head_].count;
  index_insert(key, e);
  bump(e);
}

CounterBounds SpaceSaving::query(uint64_t key) const {
  const int32_t e = find(key);
  if (e >= 0) {
    const uint64_t count = buckets_[entries_[e].bucket].count;
    return {count, count - entries_[e].overestimation};
  }
  if (full()) return {min_count(), 0};
  return {0, 0};
}

std::vector<CounterEntry> SpaceSaving::heavy_entries() const {
  std::vector<CounterEntry> out;
  out.reserve(size_);
  for (size_t i = 0; i < size_; ++i) {
    const Entry& en = entries_[i];
    const uint64_t count = buckets_[en.bucket].count;
    out.push_back({en.key, count, count - en.overestimation});
  }
  return out;
}

uint64_t SpaceSaving::count_sum() const {
  uint64_t sum = 0;
  for (int32_t b = head_; b >= 0; b = buckets_[b].next) {
    for (int32_t e = buckets_[b].first; e >= 0; e = entries_[e].next) sum += buckets_[b].count;
  }
  return sum;
}

}  // namespace rhhh
