#include "sks/stochastic.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace sks {

namespace {

constexpr char kMagic[8] = {'S', 'K', 'S', 'W', 'P', 'A', 'T', 'H'};
constexpr std::uint32_t kFormatVersion = 1;

// Uniform on the open interval (0, 1) from the top 53 bits.
double open_uniform(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) throw std::runtime_error("WienerPath::load: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

Index integer_ratio(double a, double b, std::string_view what) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument(std::string(what) + ": values must be positive and finite");
  }
  const double r = a / b;
  const double n = std::round(r);
  if (n < 1.0 || std::abs(n * b - a) > 1e-12 * a) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(a) +
                                " is not an integer multiple of " + std::to_string(b));
  }
  return static_cast<Index>(n);
}

WienerPath WienerPath::generate(std::uint64_t seed, double horizon, double resolution) {
  const Index n = integer_ratio(horizon, resolution, "WienerPath::generate");
  WienerPath path;
  path.seed_ = seed;
  path.horizon_ = horizon;
  path.resolution_ = resolution;
  path.generator_id_ = std::string(kWienerGeneratorId);
  path.increments_.resize(static_cast<std::size_t>(n));

  std::mt19937_64 engine(seed);
  const double scale = std::sqrt(resolution);
  for (auto& dw : path.increments_) {
    const double u1 = open_uniform(engine());
    const double u2 = open_uniform(engine());
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    dw = std::round(scale * z / kWienerQuantum) * kWienerQuantum;
  }
  return path;
}

Index WienerPath::time_index(double t) const {
  if (t == 0.0) return 0;
  const double r = t / resolution_;
  const double n = std::round(r);
  if (!std::isfinite(r) || std::abs(n - r) > 1e-12 * std::max(1.0, std::abs(r))) {
    throw std::invalid_argument("WienerPath: time " + std::to_string(t) +
                                " is not aligned with the path resolution");
  }
  if (n < 0.0 || n > static_cast<double>(size())) {
    throw std::invalid_argument("WienerPath: time " + std::to_string(t) + " outside [0, T]");
  }
  return static_cast<Index>(n);
}

double WienerPath::increment(double t_a, double t_b) const {
  if (!(t_a < t_b)) throw std::invalid_argument("WienerPath::increment: requires t_a < t_b");
  return increment_steps(time_index(t_a), time_index(t_b));
}

double WienerPath::increment_steps(Index first, Index last) const {
  if (first < 0 || last > size() || first > last) {
    throw std::invalid_argument("WienerPath::increment_steps: index range out of bounds");
  }
  double sum = 0.0;
  for (Index i = first; i < last; ++i) sum += increments_[static_cast<std::size_t>(i)];
  return sum;
}

Index WienerPath::steps_per(double k) const { return integer_ratio(k, resolution_, "WienerPath::steps_per"); }

void WienerPath::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint64_t>(out, seed_);
  put_le<double>(out, horizon_);
  put_le<double>(out, resolution_);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(generator_id_.size()));
  out.write(generator_id_.data(), static_cast<std::streamsize>(generator_id_.size()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(increments_.size()));
  for (double dw : increments_) put_le<double>(out, dw);
}

WienerPath WienerPath::load(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("WienerPath::load: bad magic");
  }
  if (get_le<std::uint32_t>(in) != kFormatVersion) {
    throw std::runtime_error("WienerPath::load: unsupported format version");
  }
  WienerPath path;
  path.seed_ = get_le<std::uint64_t>(in);
  path.horizon_ = get_le<double>(in);
  path.resolution_ = get_le<double>(in);
  const auto id_len = get_le<std::uint32_t>(in);
  path.generator_id_.resize(id_len);
  if (!in.read(path.generator_id_.data(), id_len)) throw std::runtime_error("WienerPath::load: truncated input");
  const auto count = get_le<std::uint64_t>(in);
  if (count != static_cast<std::uint64_t>(integer_ratio(path.horizon_, path.resolution_, "WienerPath::load"))) {
    throw std::runtime_error("WienerPath::load: increment count does not match T / k0");
  }
  path.increments_.resize(count);
  for (auto& dw : path.increments_) dw = get_le<double>(in);
  return path;
}

}  // namespace sks
