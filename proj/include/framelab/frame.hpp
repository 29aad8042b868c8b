#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "framelab/errors.hpp"

namespace framelab {

/// An m x n matrix whose columns are the frame vectors (m <= n for proper
/// frames; square orthonormal matrices are the degenerate case). Also serves
/// as the linear encoder of the autoencoder experiments.
struct Frame {
  Eigen::MatrixXd data;

  Frame() = default;
  explicit Frame(Eigen::MatrixXd d) : data(std::move(d)) {}

  int m() const { return static_cast<int>(data.rows()); }
  int n() const { return static_cast<int>(data.cols()); }
};

/// Symmetric n x n Gram matrix F^T F of a frame.
struct GramMatrix {
  Eigen::MatrixXd data;
};

/// Scales every column to unit Euclidean norm. Throws ZeroColumnError if a
/// column norm is below 1e-14.
Frame normalize_columns(const Frame& f);

GramMatrix gram(const Frame& f);

/// Largest absolute off-diagonal Gram entry. Requires unit-norm columns
/// (diagonal Gram entries within 1e-8 of 1), else NotNormalizedError.
double coherence(const Frame& f);

/// max - min of the absolute off-diagonal Gram entries; 0 for exactly
/// equiangular frames. Requires n >= 2.
double equiangularity_spread(const Frame& f);

/// Universal lower bound sqrt((n-m)/((n-1)m)) on coherence; 0 when n == m.
double welch_bound(int m, int n);

/// The target Gram magnitude profile of an m x n equiangular tight frame:
/// unit diagonal, Welch-bound value elsewhere (identity when n == m).
GramMatrix etf_target_gram(int m, int n);

/// Returns c = n/m when ||FF^T - (n/m) I||_max <= tol, empty otherwise.
std::optional<double> is_tight(const Frame& f, double tol);

/// m x (m+1) regular-simplex frame; coherence exactly 1/m.
Frame make_simplex_etf(int m);

/// m x 2m frame from a Paley conference matrix of order q+1, m = (q+1)/2.
/// q must be a prime with q % 4 == 1. Coherence equals 1/sqrt(q).
Frame make_conference_etf(int q);

/// Alternating projections between Welch-clipped Gram matrices and rank-m
/// unit-diagonal PSD matrices, starting from a seeded Gaussian frame. The
/// best (lowest-coherence) iterate is returned, so the result is never worse
/// than the initialization.
Frame approximate_etf(int m, int n, int iters, std::uint64_t seed);

/// Column-normalized i.i.d. standard normal entries.
Frame make_gaussian_frame(int m, int n, std::uint64_t seed);

/// Low-frequency rows of the n x n real Fourier basis (complete cosine/sine
/// pairs, DC included for odd m), columns normalized. Tight for every (m, n).
Frame make_lowpass_frame(int m, int n);

}  // namespace framelab
