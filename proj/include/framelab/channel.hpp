#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "framelab/frame.hpp"

namespace framelab {

/// The kept-column index set of an erasure/dropout draw over n slots.
struct SamplingPattern {
  std::vector<int> kept;  // strictly increasing, unique, in [0, n)
  int n = 0;

  int k() const { return static_cast<int>(kept.size()); }
  bool empty() const { return kept.empty(); }
};

struct ChannelConfig {
  double keep_prob = 0.5;   // p
  double sigma_w = 1e-3;    // noise standard deviation
  int trials = 1000;
  std::uint64_t seed = 0;
};

enum class Decoder { Ls, UnrolledGd };

struct DecoderSpec {
  Decoder kind = Decoder::Ls;
  int iters = 10;  // used by UnrolledGd
};

/// Monte-Carlo estimate with its standard error and bookkeeping; serialized
/// as {estimate, std_error, trials, skipped_singular, seed}.
struct EstimateResult {
  double estimate = 0.0;
  double std_error = 0.0;
  int trials = 0;
  int skipped_singular = 0;
  std::uint64_t seed = 0;
};

/// Each index kept independently with probability p.
SamplingPattern sample_pattern_bernoulli(int n, double p, std::uint64_t seed);

/// Uniformly random k-subset of [0, n).
SamplingPattern sample_pattern_fixed_k(int n, int k, std::uint64_t seed);

/// Columns of f restricted to s.kept, order preserved.
Frame submatrix(const Frame& f, const SamplingPattern& s);

/// y = F_s^T x + w with w ~ N(0, sigma_w^2) i.i.d.; length |s.kept|.
Eigen::VectorXd transmit(const Frame& f, const Eigen::VectorXd& x,
                         const SamplingPattern& s, double sigma_w,
                         std::uint64_t seed);

/// Unique least-squares reconstruction y F_s^dagger. Throws RankDeficientError
/// when the smallest singular value of F_s is below 1e-10 times the largest.
Eigen::VectorXd decode_ls(const Frame& f_s, const Eigen::VectorXd& y);

/// iters gradient-descent steps on the least-squares objective from zero,
/// with step size 1/lambda_max(F_s F_s^T).
Eigen::VectorXd decode_unrolled_gd(const Frame& f_s, const Eigen::VectorXd& y,
                                   int iters);

struct GdTrace {
  Eigen::VectorXd x_hat;
  std::vector<double> residual_norms;  // ||F_s^T x_i - y||, i = 0..iters
};
GdTrace decode_unrolled_gd_traced(const Frame& f_s, const Eigen::VectorXd& y,
                                  int iters);

/// Largest eigenvalue of the symmetric PSD matrix m via power iteration
/// (at most max_iters steps, relative tolerance tol, deterministic ramp
/// start). If warm is non-null it supplies the start vector and receives the
/// final iterate.
double power_iteration_lmax(const Eigen::MatrixXd& m, Eigen::VectorXd* warm = nullptr,
                            int max_iters = 50, double tol = 1e-10);

/// Power iteration on an implicitly applied symmetric PSD operator.
double power_iteration_lmax_op(
    Eigen::Index dim,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    Eigen::VectorXd* warm = nullptr, int max_iters = 50, double tol = 1e-10);

/// Mean of ||x - x_hat||^2 over trials with x ~ N(0, I_m), Bernoulli(p)
/// patterns (rank-deficient draws resampled and counted) and AWGN.
EstimateResult mse_monte_carlo(const Frame& f, const ChannelConfig& cfg,
                               const DecoderSpec& decoder, int threads = 1);

/// Monte-Carlo mean of Tr((F_s F_s^T)^{-1}) over Bernoulli(p) patterns;
/// singular draws are resampled and counted. Requires unit-norm columns.
EstimateResult expected_inverse_trace(const Frame& f, double p, int trials,
                                      std::uint64_t seed, int threads = 1);

}  // namespace framelab
