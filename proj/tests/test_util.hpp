// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#ifndef VOICESEP_TESTS_TEST_UTIL_HPP_
#define VOICESEP_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "voicesep/dense_net.hpp"
#include "voicesep/error.hpp"
#include "voicesep/rng.hpp"

namespace voicesep::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("voicesep_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

inline std::vector<double> RandomSignal(SplitMix64& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = scale * rng.Uniform(-1.0, 1.0);
  return x;
}

inline Matrix<double> RandomMatrix(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols,
                                   double lo = -1.0, double hi = 1.0) {
  Matrix<double> m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Uniform(lo, hi);
  return m;
}

// Runs `fn` and returns the kind of the voicesep::Error it throws.
template <typename Fn>
ErrorKind ErrorKindOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected a voicesep::Error");
}

}  // namespace voicesep::testing

#endif  // VOICESEP_TESTS_TEST_UTIL_HPP_
