#pragma once

#include "streamreg/rng.hpp"
#include "streamreg/schema.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <unistd.h>

namespace testing_support {

namespace fs = std::filesystem;

/// Scratch directory, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("streamreg_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

private:
  fs::path path_;
};

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// -- oracles -----------------------------------------------------------------

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Textbook two-pass Pearson, no clamping.
inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// O(n^2) mean ranks: rank = (#less) + (#equal + 1) / 2.
inline std::vector<double> rank_oracle(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      else if (w == v[i]) ++equal;
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

inline std::vector<double> column(const std::vector<streamreg::Instance>& rows, std::size_t f) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.features[f]);
  return out;
}

inline std::vector<double> targets(const std::vector<streamreg::Instance>& rows) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.target);
  return out;
}

inline std::vector<streamreg::Instance> random_rows(streamreg::SeededRng& rng, std::size_t n,
                                                    std::size_t d) {
  std::vector<streamreg::Instance> rows(n);
  for (auto& r : rows) {
    r.features.resize(d);
    for (auto& v : r.features) v = rng.uniform() * 10.0 - 5.0;
    r.target = rng.normal();
  }
  return rows;
}

inline streamreg::Schema numeric_schema(std::size_t d, const std::string& target = "y") {
  std::vector<streamreg::Column> cols;
  for (std::size_t i = 0; i < d; ++i) cols.push_back({"x" + std::to_string(i), {}, {}});
  cols.push_back({target, {}, {}});
  return streamreg::Schema(std::move(cols), d);
}

} // namespace testing_support
