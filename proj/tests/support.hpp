#ifndef SUBPOIS_TESTS_SUPPORT_HPP
#define SUBPOIS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace subpois::testing {

// Seeded generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // n sorted points in [a, b] with pairwise gaps >= min_gap.
  std::vector<double> separated_points(int n, double a, double b, double min_gap) {
    for (;;) {
      std::vector<double> p(n);
      for (double& x : p) x = uniform(a, b);
      std::sort(p.begin(), p.end());
      bool ok = true;
      for (int i = 1; i < n; ++i) ok = ok && p[i] - p[i - 1] >= min_gap;
      if (ok) return p;
    }
  }

  Eigen::MatrixXd skew(int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        m(i, j) = uniform(-1.0, 1.0);
        m(j, i) = -m(i, j);
      }
    return m;
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng_);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

inline int permutation_sign(std::vector<int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[p[i]]);
      sign = -sign;
    }
  return sign;
}

}  // namespace subpois::testing

#endif  // SUBPOIS_TESTS_SUPPORT_HPP
