#include "framelab/channel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "framelab/parallel.hpp"
#include "framelab/rng.hpp"

namespace framelab {

namespace {

constexpr double kRankRatio = 1e-10;        // on singular values
constexpr double kRankRatioSq = 1e-20;      // same threshold on eigenvalues

SamplingPattern bernoulli_pattern(int n, double p, Rng& rng) {
  SamplingPattern s;
  s.n = n;
  for (int i = 0; i < n; ++i)
    if (rng.bernoulli(p)) s.kept.push_back(i);
  return s;
}

struct FullRankDraw {
  SamplingPattern pattern;
  Eigen::MatrixXd f_s;        // m x k
  Eigen::VectorXd eigvals;    // of F_s F_s^T, ascending
  Eigen::MatrixXd eigvecs;
};

// Draws Bernoulli(p) patterns until the kept submatrix has full row rank,
// counting discarded draws. Shared by the estimators so that matched seeds
// see matched pattern sequences.
FullRankDraw draw_full_rank(const Frame& f, double p, Rng& rng, int* skipped) {
  const int m = f.m();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    SamplingPattern s = bernoulli_pattern(f.n(), p, rng);
    if (s.k() < m) {
      ++*skipped;
      continue;
    }
    Eigen::MatrixXd f_s(m, s.k());
    for (int j = 0; j < s.k(); ++j) f_s.col(j) = f.data.col(s.kept[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f_s * f_s.transpose());
    const double lmax = eig.eigenvalues()(m - 1);
    if (!(lmax > 0.0) || eig.eigenvalues()(0) <= kRankRatioSq * lmax) {
      ++*skipped;
      continue;
    }
    return FullRankDraw{std::move(s), std::move(f_s), eig.eigenvalues(),
                        eig.eigenvectors()};
  }
  throw Error("draw_full_rank: no full-row-rank pattern found");
}

EstimateResult summarize(const std::vector<double>& values, int skipped,
                         std::uint64_t seed) {
  EstimateResult r;
  r.trials = static_cast<int>(values.size());
  r.skipped_singular = skipped;
  r.seed = seed;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.estimate = sum / r.trials;
  if (r.trials > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.estimate) * (v - r.estimate);
    r.std_error = std::sqrt(ss / (r.trials - 1) / r.trials);
  }
  return r;
}

}  // namespace

SamplingPattern sample_pattern_bernoulli(int n, double p, std::uint64_t seed) {
  if (!(p > 0.0) || p > 1.0)
    throw BadParameterError("sample_pattern_bernoulli: need 0 < p <= 1");
  Rng rng(seed);
  return bernoulli_pattern(n, p, rng);
}

SamplingPattern sample_pattern_fixed_k(int n, int k, std::uint64_t seed) {
  if (k < 0 || k > n)
    throw BadParameterError("sample_pattern_fixed_k: need 0 <= k <= n");
  Rng rng(seed);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  SamplingPattern s;
  s.n = n;
  s.kept.assign(idx.begin(), idx.begin() + k);
  std::sort(s.kept.begin(), s.kept.end());
  return s;
}

Frame submatrix(const Frame& f, const SamplingPattern& s) {
  if (s.n != f.n())
    throw DimMismatchError("submatrix: pattern ambient size != frame columns");
  Eigen::MatrixXd out(f.m(), s.k());
  for (int j = 0; j < s.k(); ++j) out.col(j) = f.data.col(s.kept[j]);
  return Frame{std::move(out)};
}

Eigen::VectorXd transmit(const Frame& f, const Eigen::VectorXd& x,
                         const SamplingPattern& s, double sigma_w,
                         std::uint64_t seed) {
  if (x.size() != f.m()) throw DimMismatchError("transmit: |x| != m");
  if (s.empty()) throw EmptyPatternError("transmit: empty pattern");
  const Frame f_s = submatrix(f, s);
  Eigen::VectorXd y = f_s.data.transpose() * x;
  if (sigma_w > 0.0) {
    Rng rng(seed);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += sigma_w * rng.normal();
  }
  return y;
}

Eigen::VectorXd decode_ls(const Frame& f_s, const Eigen::VectorXd& y) {
  if (y.size() != f_s.n()) throw DimMismatchError("decode_ls: |y| != k");
  if (f_s.n() < f_s.m())
    throw RankDeficientError("decode_ls: fewer measurements than unknowns");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      f_s.data.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(sv.size() - 1) < kRankRatio * sv(0))
    throw RankDeficientError("decode_ls: singular value ratio below 1e-10");
  return svd.solve(y);
}

double power_iteration_lmax_op(
    Eigen::Index dim,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    Eigen::VectorXd* warm, int max_iters, double tol) {
  Eigen::VectorXd v;
  if (warm != nullptr && warm->size() == dim && warm->norm() > 0.0) {
    v = *warm / warm->norm();
  } else {
    v.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      v(i) = 1.0 + 0.5 * double(i) / double(dim);
    v /= v.norm();
  }
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = apply(v);
    const double norm = w.norm();  // equals the eigenvalue at convergence
    if (!(norm > 0.0)) {
      lambda = 0.0;
      break;
    }
    v = w / norm;
    if (std::abs(norm - lambda) <= tol * std::max(1.0, norm)) {
      lambda = norm;
      break;
    }
    lambda = norm;
  }
  if (warm != nullptr) *warm = v;
  return lambda;
}

double power_iteration_lmax(const Eigen::MatrixXd& m, Eigen::VectorXd* warm,
                            int max_iters, double tol) {
  return power_iteration_lmax_op(
      m.rows(), [&m](const Eigen::VectorXd& v) { return Eigen::VectorXd(m * v); },
      warm, max_iters, tol);
}

Eigen::VectorXd decode_unrolled_gd(const Frame& f_s, const Eigen::VectorXd& y,
                                   int iters) {
  return decode_unrolled_gd_traced(f_s, y, iters).x_hat;
}

GdTrace decode_unrolled_gd_traced(const Frame& f_s, const Eigen::VectorXd& y,
                                  int iters) {
  if (f_s.n() == 0) throw EmptyPatternError("decode_unrolled_gd: empty F_s");
  if (y.size() != f_s.n())
    throw DimMismatchError("decode_unrolled_gd: |y| != k");
  if (iters < 1) throw BadParameterError("decode_unrolled_gd: need iters >= 1");
  const Eigen::MatrixXd& a = f_s.data;
  const double lmax = power_iteration_lmax(a * a.transpose());
  const double mu = lmax > 1e-30 ? 1.0 / lmax : 0.0;

  GdTrace trace;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(f_s.m());
  trace.residual_norms.push_back((a.transpose() * x - y).norm());
  for (int i = 0; i < iters; ++i) {
    x -= mu * (a * (a.transpose() * x - y));
    trace.residual_norms.push_back((a.transpose() * x - y).norm());
  }
  trace.x_hat = std::move(x);
  return trace;
}

EstimateResult mse_monte_carlo(const Frame& f, const ChannelConfig& cfg,
                               const DecoderSpec& decoder, int threads) {
  if (cfg.trials < 1) throw BadParameterError("mse_monte_carlo: trials >= 1");
  if (!(cfg.keep_prob > 0.0) || cfg.keep_prob > 1.0)
    throw BadParameterError("mse_monte_carlo: need 0 < p <= 1");
  const int m = f.m();
  std::vector<double> values(cfg.trials);
  std::vector<int> skipped(cfg.trials, 0);
  parallel_for(cfg.trials, threads, [&](std::size_t t) {
    Rng pat_rng = trial_rng(cfg.seed, t, StreamRole::Pattern);
    Rng sig_rng = trial_rng(cfg.seed, t, StreamRole::Signal);
    Rng noise_rng = trial_rng(cfg.seed, t, StreamRole::Noise);
    const FullRankDraw draw = draw_full_rank(f, cfg.keep_prob, pat_rng, &skipped[t]);

    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) x(i) = sig_rng.normal();
    Eigen::VectorXd y = draw.f_s.transpose() * x;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y(i) += cfg.sigma_w * noise_rng.normal();

    Eigen::VectorXd x_hat;
    if (decoder.kind == Decoder::Ls) {
      // Least-squares solve through the eigendecomposition already computed
      // for the rank check; identical solution to the pseudo-inverse route.
      x_hat = draw.eigvecs *
              draw.eigvals.cwiseInverse().asDiagonal() *
              (draw.eigvecs.transpose() * (draw.f_s * y));
    } else {
      const double mu = 1.0 / draw.eigvals(m - 1);
      x_hat = Eigen::VectorXd::Zero(m);
      for (int i = 0; i < decoder.iters; ++i)
        x_hat -= mu * (draw.f_s * (draw.f_s.transpose() * x_hat - y));
    }
    values[t] = (x - x_hat).squaredNorm();
  });
  int total_skipped = 0;
  for (int s : skipped) total_skipped += s;
  return summarize(values, total_skipped, cfg.seed);
}

EstimateResult expected_inverse_trace(const Frame& f, double p, int trials,
                                      std::uint64_t seed, int threads) {
  if (trials < 1) throw BadParameterError("expected_inverse_trace: trials >= 1");
  if (!(p > 0.0) || p > 1.0)
    throw BadParameterError("expected_inverse_trace: need 0 < p <= 1");
  // unit-norm columns required for the spectral identities downstream
  for (int j = 0; j < f.n(); ++j)
    if (std::abs(f.data.col(j).norm() - 1.0) > 1e-8)
      throw NotNormalizedError("expected_inverse_trace: columns must be unit norm");
  std::vector<double> values(trials);
  std::vector<int> skipped(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng pat_rng = trial_rng(seed, t, StreamRole::Pattern);
    const FullRankDraw draw = draw_full_rank(f, p, pat_rng, &skipped[t]);
    values[t] = draw.eigvals.cwiseInverse().sum();
  });
  int total_skipped = 0;
  for (int s : skipped) total_skipped += s;
  return summarize(values, total_skipped, seed);
}

}  // namespace framelab
