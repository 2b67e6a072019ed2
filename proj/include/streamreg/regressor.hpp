#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>

namespace streamreg {

/// Running FNV-1a over the bit patterns of learner state. Used for determinism
/// checks, never for persistence.
class StateHasher {
public:
  void add(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (value >> (8 * i)) & 0xffU;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double value) { add(std::bit_cast<std::uint64_t>(value)); }
  void add(bool value) { add(static_cast<std::uint64_t>(value)); }
  std::uint64_t value() const { return hash_; }

private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

/// Test-then-train point regressor. predict() is const and must not change any
/// observable state; learn() consumes each labelled instance once. Before the
/// first learn() every implementation predicts 0.0.
class Regressor {
public:
  virtual ~Regressor() = default;
  virtual double predict(std::span<const double> x) const = 0;
  virtual void learn(std::span<const double> x, double y) = 0;
  virtual std::string_view name() const = 0;
  virtual std::uint64_t state_hash() const = 0;
};

} // namespace streamreg
