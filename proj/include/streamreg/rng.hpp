#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace streamreg {

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All distributions are implemented here rather than taken from
/// <random>, since the standard distributions are implementation-defined and
/// would break cross-platform reproducibility. Sub-streams are keyed by
/// (seed, label) only, never by how many draws the parent has made.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  SeededRng substream(std::string_view label) const;
  SeededRng substream(std::string_view label, std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal via the Marsaglia polar method.
  double normal();
  /// Poisson(lambda) by sequential inversion; intended for small lambda.
  unsigned poisson(double lambda);
  /// Student-t with `dof` degrees of freedom (dof a positive integer).
  double student_t(unsigned dof);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

} // namespace streamreg
