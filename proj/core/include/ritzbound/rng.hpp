#pragma once

#include <cstdint>
#include <random>

namespace ritzbound {

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform and Gaussian variates are derived here rather than through
/// std::uniform_real_distribution / std::normal_distribution, whose algorithms
/// are implementation-defined; this keeps streams identical across standard
/// libraries for a given seed.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal variate (Marsaglia polar method).
  double gaussian() noexcept;

  /// Raw 64-bit draw, e.g. to derive child seeds.
  std::uint64_t next_u64() noexcept { return engine_(); }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace ritzbound
