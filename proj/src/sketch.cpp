#include "rhhh/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rhhh {

std::vector<Prefix> HhhSet::prefixes() const {
  std::vector<Prefix> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.prefix);
  return out;
}

bool HhhSet::contains(const Prefix& p) const {
  return std::any_of(entries.begin(), entries.end(), [&](const HhhEntry& e) { return e.prefix == p; });
}

double correction(uint64_t packets, uint64_t v, double delta, double quantile_divisor) {
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(quantile_divisor >= 1)) throw std::invalid_argument("quantile divisor must be at least 1");
  if (packets == 0) return 0.0;
  const double z = probit(1.0 - delta / quantile_divisor);
  return 2.0 * z * std::sqrt(static_cast<double>(packets) * static_cast<double>(v));
}

Sketch::Sketch(Hierarchy hierarchy, const SketchConfig& config)
    : hierarchy_(std::move(hierarchy)),
      mode_(config.mode),
      v_(config.v == 0 ? hierarchy_.size() : config.v),
      r_(config.r),
      quantile_divisor_(config.quantile_divisor),
      rng_(config.seed) {
  if (config.capacity == 0) throw std::invalid_argument("sketch capacity must be positive");
  if (v_ < hierarchy_.size()) throw std::invalid_argument("V must be at least the lattice size H");
  if (r_ < 1 || r_ > v_) throw std::invalid_argument("r must lie in [1, V]");
  if (!(quantile_divisor_ >= 1)) throw std::invalid_argument("quantile divisor must be at least 1");
  if (mode_ == UpdateMode::deterministic) {
    v_ = hierarchy_.size();
    r_ = 1;
  }
  masks_.reserve(hierarchy_.size());
  instances_.reserve(hierarchy_.size());
  for (size_t d = 0; d < hierarchy_.size(); ++d) {
    masks_.push_back(hierarchy_.mask(d));
    instances_.emplace_back(config.capacity);
  }
}

Sketch Sketch::randomized(Hierarchy hierarchy, const Calibration& calibration, uint64_t seed,
                          double quantile_divisor) {
  SketchConfig cfg;
  cfg.mode = UpdateMode::randomized;
  cfg.v = calibration.v;
  cfg.r = calibration.r;
  cfg.capacity = calibration.capacity;
  cfg.seed = seed;
  cfg.quantile_divisor = quantile_divisor;
  return Sketch(std::move(hierarchy), cfg);
}

Sketch Sketch::deterministic(Hierarchy hierarchy, size_t capacity) {
  SketchConfig cfg;
  cfg.mode = UpdateMode::deterministic;
  cfg.capacity = capacity;
  return Sketch(std::move(hierarchy), cfg);
}

FrequencyEstimate Sketch::scale(CounterBounds b) const {
  if (mode_ == UpdateMode::deterministic) {
    return {static_cast<double>(b.upper), static_cast<double>(b.lower)};
  }
  // Integer product first: exact whenever r divides it.
  const double r = static_cast<double>(r_);
  return {static_cast<double>(b.upper * v_) / r, static_cast<double>(b.lower * v_) / r};
}

FrequencyEstimate Sketch::frequency(const Prefix& p) const {
  return scale(instances_[p.node].query(p.key));
}

double Sketch::correction(double delta) const {
  if (mode_ == UpdateMode::deterministic) {
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0, 1)");
    return 0.0;
  }
  return rhhh::correction(packets_, v_, delta, quantile_divisor_);
}

double Sketch::calc_pred_1d(const Prefix& p, std::span<const Prefix> selected) const {
  double r = 0;
  for (const Prefix& h : hierarchy_.best_generalized(p, selected)) r -= frequency(h).lower;
  return r;
}

double Sketch::calc_pred_2d(const Prefix& p, std::span<const Prefix> selected) const {
  const std::vector<Prefix> best = hierarchy_.best_generalized(p, selected);
  double r = 0;
  for (const Prefix& h : best) r -= frequency(h).lower;
  for (size_t i = 0; i < best.size(); ++i) {
    for (size_t j = i + 1; j < best.size(); ++j) {
      const auto q = hierarchy_.glb(best[i], best[j]);
      if (!q) continue;
      bool covered_by_third = false;
      for (size_t k = 0; k < best.size() && !covered_by_third; ++k) {
        if (k != i && k != j && hierarchy_.generalizes(best[k], *q)) covered_by_third = true;
      }
      if (!covered_by_third) r += frequency(*q).upper;
    }
  }
  return r;
}

double Sketch::calc_pred(const Prefix& p, std::span<const Prefix> selected) const {
  return hierarchy_.dims() == 1 ? calc_pred_1d(p, selected) : calc_pred_2d(p, selected);
}

HhhSet Sketch::output(double theta, double delta) const {
  if (!(theta > 0 && theta <= 1)) throw std::invalid_argument("theta must lie in (0, 1]");
  const double corr = correction(delta);

  HhhSet out;
  out.packets = packets_;
  out.theta = theta;
  out.delta = delta;
  out.v = v_;
  out.r = r_;
  out.capacity = instances_.front().capacity();
  out.deterministic = mode_ == UpdateMode::deterministic;
  if (packets_ == 0) return out;

  const double threshold = theta * static_cast<double>(packets_);
  std::vector<Prefix> selected;
  for (const auto& level : hierarchy_.nodes_by_level()) {
    for (const uint16_t node : level) {
      std::vector<CounterEntry> candidates = instances_[node].heavy_entries();
      std::sort(candidates.begin(), candidates.end(),
                [](const CounterEntry& a, const CounterEntry& b) { return a.key < b.key; });
      for (const CounterEntry& c : candidates) {
        const Prefix p{node, c.key};
        const FrequencyEstimate est = scale({c.upper, c.lower});
        const double conditioned = est.upper + calc_pred(p, selected) + corr;
        if (conditioned >= threshold) {
          selected.push_back(p);
          out.entries.push_back({p, est, conditioned});
        }
      }
    }
  }
  return out;
}

}  // namespace rhhh
