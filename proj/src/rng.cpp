#include "streamreg/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace streamreg {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

SeededRng SeededRng::substream(std::string_view label) const {
  return SeededRng(splitmix64(splitmix64(seed_) ^ fnv1a64(label)));
}

SeededRng SeededRng::substream(std::string_view label, std::uint64_t index) const {
  return SeededRng(splitmix64(substream(label).seed() ^ splitmix64(index + 1)));
}

double SeededRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

unsigned SeededRng::poisson(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("poisson: lambda must be non-negative");
  if (lambda == 0.0) return 0;
  double p = std::exp(-lambda);
  double cdf = p;
  const double u = uniform();
  unsigned k = 0;
  while (u > cdf && p > 0.0) {
    ++k;
    p *= lambda / k;
    cdf += p;
  }
  return k;
}

double SeededRng::student_t(unsigned dof) {
  if (dof == 0) throw std::invalid_argument("student_t: dof must be positive");
  const double z = normal();
  double chi2 = 0.0;
  for (unsigned i = 0; i < dof; ++i) {
    const double g = normal();
    chi2 += g * g;
  }
  return z / std::sqrt(chi2 / dof);
}

} // namespace streamreg
