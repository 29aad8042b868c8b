#include "framelab/frame.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "framelab/rng.hpp"

namespace framelab {

namespace {

constexpr double kZeroColumnTol = 1e-14;
constexpr double kDiagTol = 1e-8;

// Legendre symbol of a mod p (p odd prime) via Euler's criterion.
int legendre(std::int64_t a, std::int64_t p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  std::int64_t result = 1, base = a, e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result == 1 ? 1 : -1;
}

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; static_cast<std::int64_t>(d) * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// Factor a PSD unit-diagonal Gram candidate into an m x n frame using its
// top-m eigenpairs, then renormalize the columns.
Frame factor_rank_m(const Eigen::MatrixXd& g, int m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  const int n = static_cast<int>(g.rows());
  Eigen::MatrixXd f(m, n);
  for (int i = 0; i < m; ++i) {
    const int src = n - 1 - i;  // eigenvalues ascending; take the top m
    const double lam = std::max(eig.eigenvalues()(src), 0.0);
    f.row(i) = std::sqrt(lam) * eig.eigenvectors().col(src).transpose();
  }
  return normalize_columns(Frame{std::move(f)});
}

}  // namespace

Frame normalize_columns(const Frame& f) {
  Eigen::MatrixXd out = f.data;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm < kZeroColumnTol)
      throw ZeroColumnError("normalize_columns: column " + std::to_string(j) +
                            " has near-zero norm");
    out.col(j) /= norm;
  }
  return Frame{std::move(out)};
}

GramMatrix gram(const Frame& f) {
  return GramMatrix{f.data.transpose() * f.data};
}

double coherence(const Frame& f) {
  const Eigen::MatrixXd g = f.data.transpose() * f.data;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    if (std::abs(g(i, i) - 1.0) > kDiagTol)
      throw NotNormalizedError("coherence: column " + std::to_string(i) +
                               " is not unit norm");
  double best = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = i + 1; j < g.cols(); ++j)
      best = std::max(best, std::abs(g(i, j)));
  return best;
}

double equiangularity_spread(const Frame& f) {
  if (f.n() < 2) throw BadDimsError("equiangularity_spread: need n >= 2");
  const Eigen::MatrixXd g = f.data.transpose() * f.data;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = i + 1; j < g.cols(); ++j) {
      const double v = std::abs(g(i, j));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return hi - lo;
}

double welch_bound(int m, int n) {
  if (m < 1 || n < m) throw BadDimsError("welch_bound: need n >= m >= 1");
  if (n == m) return 0.0;
  return std::sqrt(static_cast<double>(n - m) /
                   (static_cast<double>(n - 1) * m));
}

GramMatrix etf_target_gram(int m, int n) {
  const double off = welch_bound(m, n);  // validates dims
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, off);
  g.diagonal().setOnes();
  return GramMatrix{std::move(g)};
}

std::optional<double> is_tight(const Frame& f, double tol) {
  const double c = static_cast<double>(f.n()) / f.m();
  const Eigen::MatrixXd s = f.data * f.data.transpose() -
                            c * Eigen::MatrixXd::Identity(f.m(), f.m());
  if (s.cwiseAbs().maxCoeff() <= tol) return c;
  return std::nullopt;
}

Frame make_simplex_etf(int m) {
  if (m < 1) throw BadDimsError("make_simplex_etf: need m >= 1");
  const int d = m + 1;
  // Simplex vertices v_i = e_i - 1/(m+1) in the hyperplane orthogonal to the
  // all-ones vector; a Householder reflection maps that hyperplane onto the
  // last m coordinates.
  Eigen::VectorXd u = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(double(d)));
  Eigen::VectorXd v = u - Eigen::VectorXd::Unit(d, 0);
  Eigen::MatrixXd h =
      Eigen::MatrixXd::Identity(d, d) - (2.0 / v.squaredNorm()) * v * v.transpose();
  Eigen::MatrixXd vertices =
      Eigen::MatrixXd::Identity(d, d) - Eigen::MatrixXd::Constant(d, d, 1.0 / d);
  Eigen::MatrixXd f = h.bottomRows(m) * vertices;
  return normalize_columns(Frame{std::move(f)});
}

Frame make_conference_etf(int q) {
  if (q % 4 != 1 || !is_prime(q))
    throw BadParameterError(
        "make_conference_etf: q must be a prime congruent to 1 mod 4");
  const int n = q + 1;
  const int m = n / 2;
  // Symmetric Paley conference matrix: border of ones around the Jacobsthal
  // matrix of quadratic-residue characters.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    c(0, i) = 1.0;
    c(i, 0) = 1.0;
  }
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      c(i + 1, j + 1) = static_cast<double>(legendre(i - j, q));
  // G = I + C/sqrt(q) has eigenvalues {0, 2}, each with multiplicity m; its
  // rank-m factor is a unit-norm frame with |<f_i, f_j>| = 1/sqrt(q).
  const Eigen::MatrixXd g =
      Eigen::MatrixXd::Identity(n, n) + c / std::sqrt(double(q));
  return factor_rank_m(g, m);
}

Frame make_gaussian_frame(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd f(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) f(i, j) = rng.normal();
  return normalize_columns(Frame{std::move(f)});
}

Frame approximate_etf(int m, int n, int iters, std::uint64_t seed) {
  if (m < 1 || n < m) throw BadDimsError("approximate_etf: need n >= m >= 1");
  if (iters < 1) throw BadParameterError("approximate_etf: need iters >= 1");
  const double mu = welch_bound(m, n);

  Frame best = make_gaussian_frame(m, n, seed);
  double best_coh = coherence(best);
  Eigen::MatrixXd g = best.data.transpose() * best.data;

  for (int it = 0; it < iters; ++it) {
    // Project onto matrices with unit diagonal and off-diagonal magnitudes
    // clipped at the Welch value.
    for (int i = 0; i < n; ++i) {
      g(i, i) = 1.0;
      for (int j = i + 1; j < n; ++j) {
        double v = g(i, j);
        if (v > mu) v = mu;
        if (v < -mu) v = -mu;
        g(i, j) = v;
        g(j, i) = v;
      }
    }
    // Project onto rank-m PSD matrices with unit diagonal: keep the top-m
    // eigenspace with the tight spectrum n/m, then renormalize columns.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    Eigen::MatrixXd factor(m, n);
    const double row_scale = std::sqrt(static_cast<double>(n) / m);
    for (int i = 0; i < m; ++i)
      factor.row(i) = row_scale * eig.eigenvectors().col(n - 1 - i).transpose();
    Frame cand = normalize_columns(Frame{std::move(factor)});
    const double coh = coherence(cand);
    if (coh < best_coh) {
      best_coh = coh;
      best = cand;
    }
    g = cand.data.transpose() * cand.data;
  }
  return best;
}

Frame make_lowpass_frame(int m, int n) {
  if (m < 1 || n < m) throw BadDimsError("make_lowpass_frame: need n >= m >= 1");
  const double two_pi = 6.283185307179586476925286766559;
  Eigen::MatrixXd f(m, n);
  int row = 0;
  auto put_dc = [&] {
    f.row(row++).setConstant(1.0 / std::sqrt(double(n)));
  };
  auto put_pair = [&](int k) {
    const double s = std::sqrt(2.0 / n);
    for (int t = 0; t < n; ++t) {
      f(row, t) = s * std::cos(two_pi * k * t / n);
      f(row + 1, t) = s * std::sin(two_pi * k * t / n);
    }
    row += 2;
  };
  if (m == n) {
    put_dc();
    const int pairs = (n - 1) / 2;
    for (int k = 1; k <= pairs; ++k) put_pair(k);
    if (n % 2 == 0) {  // Nyquist row
      for (int t = 0; t < n; ++t)
        f(row, t) = ((t & 1) ? -1.0 : 1.0) / std::sqrt(double(n));
      ++row;
    }
  } else if (m % 2 == 1) {
    put_dc();
    for (int k = 1; k <= (m - 1) / 2; ++k) put_pair(k);
  } else {
    for (int k = 1; k <= m / 2; ++k) put_pair(k);
  }
  return normalize_columns(Frame{std::move(f)});
}

}  // namespace framelab
