#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "framelab/errors.hpp"

namespace framelab {

/// Norm used to penalize the distance of |A^T A| from the ideal equiangular
/// Gram profile: the maximal entry, the entrywise l1, or the entrywise l2^2.
enum class EtfLossVariant { MaxAbs, SumAbs, SumSquares };

/// N x d batch of activations (rows are examples).
struct ActivationBatch {
  Eigen::MatrixXd data;
};

/// Distance of the column-normalized Gram of a from the equiangular target
/// (identity when a has at least as many rows as columns).
double etf_loss(const Eigen::MatrixXd& a, EtfLossVariant variant);

/// (Sub)gradient of etf_loss with respect to a, with gradient flow through
/// the internal column normalization. Ties of the MaxAbs variant within
/// 1e-12 of the maximum are averaged.
Eigen::MatrixXd etf_loss_grad(const Eigen::MatrixXd& a, EtfLossVariant variant);

/// Half the squared Frobenius norm of the off-diagonal feature covariance.
double decov_loss(const ActivationBatch& h);

/// Monte-Carlo estimate of E_{b,x}[||y - (1/p) B diag(b) A^T x||^2] over the
/// given sample columns and mask_trials Bernoulli(p) masks per sample.
double dropout_objective_mc(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            double p, const Eigen::MatrixXd& x_samples,
                            const Eigen::MatrixXd& y_samples, int mask_trials,
                            std::uint64_t seed);

/// Same objective averaged exactly over all 2^n masks (n <= 20).
double dropout_objective_exhaustive(const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& b, double p,
                                    const Eigen::MatrixXd& x_samples,
                                    const Eigen::MatrixXd& y_samples);

/// Closed form of the dropout objective from second-moment statistics:
/// cross_term + Tr(W C W^T) + lambda * sum_i ||b_i||^2 (a_i^T C a_i) with
/// W = B A^T, lambda = (1-p)/p, C = E[x x^T], and
/// cross_term = E||y||^2 - 2 E[y^T W x].
double dropout_objective_closed(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b, double p,
                                const Eigen::MatrixXd& x_cov,
                                double cross_term);

/// max_i - min_i of ||a_i|| * ||b_i|| over corresponding columns; zero iff
/// the pair is jointly equalized.
double joint_equalization_gap(const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b);

/// Mutual coherence of an arbitrary matrix: columns are normalized first,
/// zero columns are ignored.
double matrix_coherence(const Eigen::MatrixXd& mat);

/// Mutual coherence of the matrix whose columns are the normalized kernels.
double kernel_coherence(const std::vector<Eigen::VectorXd>& kernels);

enum class ConvPadding { Circular, Zero };

struct ToeplitzCoherence {
  double toeplitz_coh = 0.0;
  double stride_coh = 0.0;
  bool equal = false;
};

/// Builds the full 1-D convolution matrix (every shift of every kernel) and
/// its one-stride-period block, and compares their coherences. Equality is
/// exact under circular padding whenever signal_len >= 2 * kernel_len.
ToeplitzCoherence toeplitz_coherence_check(
    const std::vector<Eigen::VectorXd>& kernels, int signal_len,
    ConvPadding padding = ConvPadding::Circular);

}  // namespace framelab
