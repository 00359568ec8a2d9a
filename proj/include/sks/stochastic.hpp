#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sks/types.hpp"

namespace sks {

/// Algorithm id recorded with every path: mt19937_64 bit stream, Box-Muller
/// (cosine branch only, one 53-bit uniform pair per draw), each increment
/// rounded to a multiple of 2^-44.
inline constexpr std::string_view kWienerGeneratorId = "mt19937_64/box-muller-cos/q44/v1";

/// Rounding grid of the stored increments. Every partial sum of increments of
/// magnitude below 2^8 is exactly representable on it, so aggregating the
/// path to any coarser step is exact and independent of summation order.
inline constexpr double kWienerQuantum = 0x1p-44;

/// One scalar Brownian path on [0, T], stored as increments over a fine
/// uniform step k0.
class WienerPath {
 public:
  /// Throws std::invalid_argument unless T / k0 is a positive integer
  /// (to 1e-12 relative).
  static WienerPath generate(std::uint64_t seed, double horizon, double resolution);

  std::uint64_t seed() const { return seed_; }
  double horizon() const { return horizon_; }
  double resolution() const { return resolution_; }
  const std::string& generator_id() const { return generator_id_; }
  const std::vector<double>& increments() const { return increments_; }
  Index size() const { return static_cast<Index>(increments_.size()); }

  /// W(t_b) - W(t_a). Both times must be multiples of the resolution.
  double increment(double t_a, double t_b) const;
  /// Sum of fine increments with indices in [first, last).
  double increment_steps(Index first, Index last) const;

  /// Fine steps per coarse step k; throws if k is not a multiple of k0.
  Index steps_per(double k) const;

  /// W(T).
  double terminal_value() const { return increment_steps(0, size()); }

  /// Binary dump: "SKSWPATH", u32 version, u64 seed, f64 T, f64 k0,
  /// u32 id length, id bytes, u64 count, count f64 increments; all little endian.
  void save(std::ostream& out) const;
  static WienerPath load(std::istream& in);

  bool operator==(const WienerPath&) const = default;

 private:
  WienerPath() = default;
  Index time_index(double t) const;

  std::uint64_t seed_ = 0;
  double horizon_ = 0.0;
  double resolution_ = 0.0;
  std::string generator_id_;
  std::vector<double> increments_;
};

/// Seed of Monte Carlo sample j.
inline std::uint64_t sample_seed(std::uint64_t base_seed, Index sample) {
  return base_seed + static_cast<std::uint64_t>(sample);
}

/// Positive integer ratio a / b, or throws std::invalid_argument.
Index integer_ratio(double a, double b, std::string_view what);

}  // namespace sks
