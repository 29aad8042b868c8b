#include "framelab/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "framelab/parallel.hpp"
#include "framelab/rng.hpp"

namespace framelab {

namespace {

void check_moment_args(const Frame& f, int d) {
  if (d < 1 || d > 4) throw BadParameterError("subset moment: d must be in 1..4");
  for (int j = 0; j < f.n(); ++j)
    if (std::abs(f.data.col(j).norm() - 1.0) > 1e-8)
      throw NotNormalizedError("subset moment: columns must be unit norm");
}

// Eigenvalues of F diag(b) F^T for the kept set; all-zero for empty draws.
Eigen::VectorXd masked_eigenvalues(const Frame& f, const std::vector<int>& kept) {
  const int m = f.m();
  if (kept.empty()) return Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd f_s(m, static_cast<int>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) f_s.col(j) = f.data.col(kept[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f_s * f_s.transpose(),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

}  // namespace

std::vector<double> submatrix_eigenvalues(const Frame& f,
                                          const SamplingPattern& s) {
  if (s.empty()) throw EmptyPatternError("submatrix_eigenvalues: empty pattern");
  if (s.n != f.n())
    throw DimMismatchError("submatrix_eigenvalues: pattern/frame mismatch");
  Eigen::VectorXd ev = masked_eigenvalues(f, s.kept);
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

SpectrumHistogram empirical_spectrum(const Frame& f, double p, int trials,
                                     int bins, std::uint64_t seed, int threads) {
  if (trials < 1) throw BadParameterError("empirical_spectrum: trials >= 1");
  if (bins < 2) throw BadParameterError("empirical_spectrum: bins >= 2");
  if (p < 0.0 || p > 1.0)
    throw BadParameterError("empirical_spectrum: need 0 <= p <= 1");
  const int m = f.m();
  std::vector<double> pooled(static_cast<std::size_t>(trials) * m);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = trial_rng(seed, t, StreamRole::Pattern);
    std::vector<int> kept;
    for (int i = 0; i < f.n(); ++i)
      if (rng.bernoulli(p)) kept.push_back(i);
    Eigen::VectorXd ev = masked_eigenvalues(f, kept);
    for (int i = 0; i < m; ++i) pooled[t * m + i] = ev(i);
  });

  double lo = 0.0, hi = 0.0;
  for (double v : pooled) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;

  SpectrumHistogram h;
  h.beta = p;
  h.gamma = static_cast<double>(m) / f.n();
  h.total_samples = static_cast<long>(pooled.size());
  h.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.bin_edges[b] = lo + width * b;
  h.counts.assign(bins, 0);
  for (double v : pooled) {
    int b = static_cast<int>((v - lo) / width);
    if (b < 0) b = 0;
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

MomentEstimate moment_md(const Frame& f, double p, int d, int trials,
                         std::uint64_t seed, int threads) {
  check_moment_args(f, d);
  if (trials < 1) throw BadParameterError("moment_md: trials >= 1");
  if (p < 0.0 || p > 1.0) throw BadParameterError("moment_md: need 0 <= p <= 1");
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = trial_rng(seed, t, StreamRole::Pattern);
    std::vector<int> kept;
    for (int i = 0; i < f.n(); ++i)
      if (rng.bernoulli(p)) kept.push_back(i);
    const Eigen::VectorXd ev = masked_eigenvalues(f, kept);
    double tr = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) tr += std::pow(ev(i), d);
    values[t] = tr / f.n();
  });
  MomentEstimate est;
  est.d = d;
  est.trials = trials;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.value = sum / trials;
  if (trials > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.value) * (v - est.value);
    est.std_error = std::sqrt(ss / (trials - 1) / trials);
  }
  return est;
}

double moment_md_exhaustive(const Frame& f, double p, int d) {
  check_moment_args(f, d);
  if (p < 0.0 || p > 1.0)
    throw BadParameterError("moment_md_exhaustive: need 0 <= p <= 1");
  const int n = f.n();
  if (n > 20) throw TooLargeError("moment_md_exhaustive: n > 20");
  const int m = f.m();
  const double q = 1.0 - p;
  double total = 0.0;
  // Trace of M^d computed from M and M^2 directly; independent of the
  // eigenvalue route used by the Monte-Carlo estimator.
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double weight = 1.0;
    Eigen::MatrixXd msum = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        weight *= p;
        msum.noalias() += f.data.col(i) * f.data.col(i).transpose();
      } else {
        weight *= q;
      }
    }
    if (weight == 0.0) continue;
    double tr = 0.0;
    switch (d) {
      case 1:
        tr = msum.trace();
        break;
      case 2:
        tr = msum.squaredNorm();
        break;
      case 3: {
        const Eigen::MatrixXd m2 = msum * msum;
        tr = (m2.array() * msum.array()).sum();
        break;
      }
      case 4: {
        const Eigen::MatrixXd m2 = msum * msum;
        tr = m2.squaredNorm();
        break;
      }
      default:
        break;
    }
    total += weight * tr / n;
  }
  return total;
}

}  // namespace framelab
