#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "framelab/spectra.hpp"

using namespace framelab;

TEST_CASE("submatrix_eigenvalues") {
  SUBCASE("full identity frame") {
    Frame id{Eigen::MatrixXd::Identity(3, 3)};
    const auto ev = submatrix_eigenvalues(id, SamplingPattern{{0, 1, 2}, 3});
    for (double v : ev) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("simplex pair spectrum is {1/2, 3/2}") {
    const auto ev =
        submatrix_eigenvalues(make_simplex_etf(2), SamplingPattern{{0, 1}, 3});
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ev[1] == doctest::Approx(1.5).epsilon(1e-10));
  }
  SUBCASE("eigenvalue sum equals kept count, all nonnegative") {
    const Frame f = make_gaussian_frame(4, 10, 3);
    const SamplingPattern s = sample_pattern_fixed_k(10, 7, 2);
    const auto ev = submatrix_eigenvalues(f, s);
    double sum = 0.0;
    for (double v : ev) {
      CHECK(v >= -1e-10);
      sum += v;
    }
    CHECK(sum == doctest::Approx(7.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(
      submatrix_eigenvalues(make_simplex_etf(2), SamplingPattern{{}, 3}),
      EmptyPatternError);
}

TEST_CASE("empirical_spectrum") {
  SUBCASE("orthonormal square frame: mass only near 0 and 1") {
    Frame id{Eigen::MatrixXd::Identity(4, 4)};
    const SpectrumHistogram h = empirical_spectrum(id, 0.5, 400, 20, 1);
    long covered = 0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const bool contains0 = h.bin_edges[b] <= 0.0 && 0.0 <= h.bin_edges[b + 1];
      const bool contains1 = h.bin_edges[b] <= 1.0 && 1.0 <= h.bin_edges[b + 1];
      if (contains0 || contains1) covered += h.counts[b];
    }
    CHECK(covered == h.total_samples);
  }
  SUBCASE("near-ETF support stays bounded") {
    const Frame f = approximate_etf(8, 16, 300, 5);
    const SpectrumHistogram h = empirical_spectrum(f, 0.5, 500, 30, 2);
    CHECK(h.bin_edges.back() <= 4.0);
    CHECK(h.beta == 0.5);
    CHECK(h.gamma == doctest::Approx(0.5));
  }
  SUBCASE("seed-deterministic and thread invariant") {
    const Frame f = make_gaussian_frame(4, 9, 8);
    const SpectrumHistogram a = empirical_spectrum(f, 0.6, 200, 15, 3, 1);
    const SpectrumHistogram b = empirical_spectrum(f, 0.6, 200, 15, 3, 2);
    CHECK(a.counts == b.counts);
    CHECK(a.bin_edges == b.bin_edges);
  }
}

namespace {

// Test-side oracle: exact subset moment by direct pattern enumeration with
// explicit trace loops (no eigenvalues, no shared code path).
double enumerate_moment(const Frame& f, double p, int d) {
  const int n = f.n(), m = f.m();
  double total = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    double weight = 1.0;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        weight *= p;
        x += f.data.col(i) * f.data.col(i).transpose();
      } else {
        weight *= 1.0 - p;
      }
    }
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
    for (int k = 0; k < d; ++k) power = power * x;
    total += weight * power.trace() / n;
  }
  return total;
}

}  // namespace

TEST_CASE("moment_md_exhaustive") {
  SUBCASE("p=1 collapses to the full-frame moment") {
    const Frame f = make_simplex_etf(2);
    const Eigen::MatrixXd ffT = f.data * f.data.transpose();
    CHECK(moment_md_exhaustive(f, 1.0, 2) ==
          doctest::Approx((ffT * ffT).trace() / 3.0).epsilon(1e-12));
  }
  SUBCASE("p=0 is zero") {
    CHECK(moment_md_exhaustive(make_simplex_etf(2), 0.0, 3) == 0.0);
  }
  SUBCASE("agrees with the independent enumeration oracle") {
    const Frame f = make_conference_etf(5);
    for (int d = 1; d <= 4; ++d)
      CHECK(moment_md_exhaustive(f, 0.4, d) ==
            doctest::Approx(enumerate_moment(f, 0.4, d)).epsilon(1e-10));
  }
  SUBCASE("frozen analytic value: simplex m_2 at p=1/2 is 0.625") {
    // For an equiangular unit-norm frame, Tr(X^2) = |S| + sum of squared
    // off-diagonals, giving m_2 = p + p^2 (n-1) mu^2 = p + p^2/2 here.
    CHECK(moment_md_exhaustive(make_simplex_etf(2), 0.5, 2) ==
          doctest::Approx(0.625).epsilon(1e-12));
  }
  SUBCASE("n too large") {
    CHECK_THROWS_AS(moment_md_exhaustive(make_gaussian_frame(3, 21, 0), 0.5, 2),
                    TooLargeError);
  }
}

TEST_CASE("moment_md") {
  SUBCASE("m_1 equals p") {
    const Frame f = make_gaussian_frame(5, 12, 4);
    for (double p : {0.3, 0.7}) {
      const MomentEstimate est = moment_md(f, p, 1, 4000, 11);
      CHECK(std::abs(est.value - p) <= 3 * est.std_error + 1e-12);
    }
  }
  SUBCASE("converges to the exhaustive value") {
    const Frame f = make_simplex_etf(2);
    for (int d : {2, 3, 4}) {
      const double exact = moment_md_exhaustive(f, 0.5, d);
      const MomentEstimate est = moment_md(f, 0.5, d, 6000, 13);
      CHECK(std::abs(est.value - exact) <= 3 * est.std_error + 1e-12);
    }
  }
  SUBCASE("near-ETF fourth moment at most the Gaussian one") {
    const Frame etf = approximate_etf(8, 16, 400, 3);
    const Frame gauss = make_gaussian_frame(8, 16, 3);
    const MomentEstimate a = moment_md(etf, 0.5, 4, 4000, 17);
    const MomentEstimate b = moment_md(gauss, 0.5, 4, 4000, 17);
    CHECK(a.value <= b.value + 3 * (a.std_error + b.std_error));
  }
  SUBCASE("thread invariance") {
    const Frame f = make_gaussian_frame(4, 9, 2);
    const MomentEstimate a = moment_md(f, 0.5, 3, 500, 7, 1);
    const MomentEstimate b = moment_md(f, 0.5, 3, 500, 7, 2);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
  }
}
