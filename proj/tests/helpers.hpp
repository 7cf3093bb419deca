#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "nag/algebra.hpp"
#include "nag/parser.hpp"
#include "nag/polysys.hpp"

namespace testing {

inline nag::PolySystem system_of(const std::string& text) { return nag::parse_input_file(text).system; }

inline double dist(const nag::CVector& a, const nag::CVector& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Random dense polynomial of total degree `deg` in `n` variables.
inline nag::Polynomial random_dense(std::size_t n, std::uint32_t deg, nag::Rng& rng) {
  std::vector<nag::Term> terms;
  nag::Exponents e(n, 0);
  auto rec = [&](auto&& self, std::size_t k, std::uint32_t left) -> void {
    if (k == n) {
      terms.push_back({nag::Complex(2 * rng.uniform() - 1, 2 * rng.uniform() - 1), e});
      return;
    }
    for (std::uint32_t d = 0; d <= left; ++d) {
      e[k] = d;
      self(self, k + 1, left - d);
    }
    e[k] = 0;
  };
  rec(rec, 0, deg);
  return nag::Polynomial::from_terms(n, std::move(terms));
}

inline std::vector<std::string> names(std::size_t n) {
  static const char* base[] = {"x", "y", "z", "w", "u", "v"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(base[i]);
  return out;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("nag_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
