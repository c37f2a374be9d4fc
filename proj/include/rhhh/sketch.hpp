#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rhhh/calibration.hpp"
#include "rhhh/hierarchy.hpp"
#include "rhhh/space_saving.hpp"

namespace rhhh {

enum class UpdateMode {
  randomized,     // one uniform draw in [0, V) per update operation
  deterministic,  // every lattice node on every packet, no sampling correction
};

struct SketchConfig {
  UpdateMode mode = UpdateMode::randomized;
  uint64_t v = 0;  // 0 selects V = H
  uint32_t r = 1;
  size_t capacity = 0;
  uint64_t seed = 0;
  // The correction term uses Z_{1 - delta / quantile_divisor}.
  double quantile_divisor = 8.0;
};

// Frequency bounds in packets.
struct FrequencyEstimate {
  double upper = 0;
  double lower = 0;
};

struct HhhEntry {
  Prefix prefix;
  FrequencyEstimate estimate;
  double conditioned = 0;
};

struct HhhSet {
  std::vector<HhhEntry> entries;
  uint64_t packets = 0;
  double theta = 0;
  double delta = 0;
  uint64_t v = 0;
  uint32_t r = 1;
  size_t capacity = 0;
  bool deterministic = false;

  std::vector<Prefix> prefixes() const;
  bool contains(const Prefix& p) const;
};

// 64-bit generator with unbiased draws from [0, bound).
class UniformSource {
 public:
  // The seed goes through a salted seed_seq so that a trace generator given
  // the same user seed does not replay this exact sequence.
  explicit UniformSource(uint64_t seed) : engine_(seeded(seed)) {}

  // Lemire's multiply-shift with rejection of the biased low region.
  uint64_t below(uint64_t bound) {
    uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    uint64_t low = static_cast<uint64_t>(m);
    if (low < bound) {
      const uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  uint64_t next() { return engine_(); }

 private:
  static std::mt19937_64 seeded(uint64_t seed) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), 0x73616D70u};
    return std::mt19937_64(seq);
  }

  std::mt19937_64 engine_;
};

// 2 * Z_q * sqrt(N * V) with q = 1 - delta / quantile_divisor.
double correction(uint64_t packets, uint64_t v, double delta, double quantile_divisor = 8.0);

/// H Space Saving instances, one per lattice node, fed either by sampling
/// (randomized mode) or by updating every node (deterministic mode).
class Sketch {
 public:
  Sketch(Hierarchy hierarchy, const SketchConfig& config);

  static Sketch randomized(Hierarchy hierarchy, const Calibration& calibration, uint64_t seed,
                           double quantile_divisor = 8.0);
  static Sketch deterministic(Hierarchy hierarchy, size_t capacity);

  void update(PacketKey key) {
    ++packets_;
    if (mode_ == UpdateMode::deterministic) {
      increment_all(key);
      return;
    }
    const uint64_t packed = key.packed();
    for (uint32_t i = 0; i < r_; ++i) {
      const uint64_t d = rng_.below(v_);
      if (d < masks_.size()) instances_[d].increment(packed & masks_[d]);
    }
  }

  // Update-all-levels regardless of mode: H increments per packet.
  void update_all_levels(PacketKey key) {
    ++packets_;
    increment_all(key);
  }

  FrequencyEstimate frequency(const Prefix& p) const;

  // Throws std::invalid_argument unless 0 < theta <= 1 and 0 < delta < 1.
  HhhSet output(double theta, double delta) const;

  double correction(double delta) const;
  // Inclusion-exclusion adjustment applied to p's upper bound, given the
  // prefixes selected so far.
  double calc_pred(const Prefix& p, std::span<const Prefix> selected) const;
  double calc_pred_1d(const Prefix& p, std::span<const Prefix> selected) const;
  double calc_pred_2d(const Prefix& p, std::span<const Prefix> selected) const;

  const Hierarchy& hierarchy() const { return hierarchy_; }
  UpdateMode mode() const { return mode_; }
  uint64_t packets() const { return packets_; }
  uint64_t v() const { return v_; }
  uint32_t r() const { return r_; }
  double quantile_divisor() const { return quantile_divisor_; }
  size_t instance_count() const { return instances_.size(); }
  const SpaceSaving& instance(size_t node) const { return instances_[node]; }

 private:
  void increment_all(PacketKey key) {
    const uint64_t packed = key.packed();
    for (size_t d = 0; d < masks_.size(); ++d) instances_[d].increment(packed & masks_[d]);
  }
  FrequencyEstimate scale(CounterBounds b) const;

  Hierarchy hierarchy_;
  UpdateMode mode_;
  uint64_t v_;
  uint32_t r_;
  double quantile_divisor_;
  std::vector<uint64_t> masks_;
  std::vector<SpaceSaving> instances_;
  uint64_t packets_ = 0;
  UniformSource rng_;
};

}  // namespace rhhh
