#include "framelab/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "framelab/frame.hpp"
#include "framelab/rng.hpp"

namespace framelab {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Columns scaled to unit norm; zero columns are left as-is (their Gram
// diagonal then reads 0 and the loss charges the full distance to 1).
Eigen::MatrixXd unit_columns(const Eigen::MatrixXd& a, Eigen::VectorXd* norms) {
  Eigen::MatrixXd u = a;
  norms->resize(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double r = a.col(j).norm();
    (*norms)(j) = r;
    if (r > 1e-14) u.col(j) /= r;
  }
  return u;
}

// Target profile for |G|: identity when the columns can be orthogonal.
Eigen::MatrixXd target_profile(Eigen::Index rows, Eigen::Index cols) {
  const int m = static_cast<int>(rows), n = static_cast<int>(cols);
  if (n <= m) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd t =
      Eigen::MatrixXd::Constant(n, n, welch_bound(m, n));
  t.diagonal().setOnes();
  return t;
}

// dLoss/dD for D = |G| - T, as a symmetric matrix.
Eigen::MatrixXd loss_wrt_deviation(const Eigen::MatrixXd& dev,
                                   EtfLossVariant variant) {
  const Eigen::Index n = dev.rows();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  switch (variant) {
    case EtfLossVariant::SumAbs:
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) w(i, j) = sign(dev(i, j));
      break;
    case EtfLossVariant::SumSquares:
      w = 2.0 * dev;
      break;
    case EtfLossVariant::MaxAbs: {
      const double peak = dev.cwiseAbs().maxCoeff();
      if (peak <= 0.0) break;
      int ties = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          if (std::abs(dev(i, j)) >= peak - 1e-12) ++ties;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          if (std::abs(dev(i, j)) >= peak - 1e-12)
            w(i, j) = sign(dev(i, j)) / ties;
      break;
    }
  }
  return w;
}

double coherence_of_columns(const Eigen::MatrixXd& mat) {
  Eigen::VectorXd norms;
  const Eigen::MatrixXd u = unit_columns(mat, &norms);
  const Eigen::MatrixXd g = u.transpose() * u;
  double best = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = i + 1; j < g.cols(); ++j)
      best = std::max(best, std::abs(g(i, j)));
  return best;
}

// Weight matrix of the stride-1 convolution layer: one row per (kernel,
// shift), one column per input position.
Eigen::MatrixXd conv_weight_matrix(const std::vector<Eigen::VectorXd>& kernels,
                                   int signal_len, ConvPadding padding) {
  const int klen = static_cast<int>(kernels[0].size());
  const int shifts =
      padding == ConvPadding::Circular ? signal_len : signal_len - klen + 1;
  Eigen::MatrixXd w(static_cast<Eigen::Index>(kernels.size()) * shifts,
                    signal_len);
  w.setZero();
  Eigen::Index r = 0;
  for (const auto& k : kernels) {
    for (int t = 0; t < shifts; ++t, ++r) {
      for (int i = 0; i < klen; ++i) {
        const int pos = padding == ConvPadding::Circular
                            ? (t + i) % signal_len
                            : t + i;
        if (pos < signal_len) w(r, pos) += k(i);
      }
    }
  }
  return w;
}

double masked_objective(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        double p, const Eigen::MatrixXd& x_samples,
                        const Eigen::MatrixXd& y_samples,
                        const Eigen::VectorXd& mask) {
  double total = 0.0;
  const Eigen::MatrixXd z = a.transpose() * x_samples;  // n x N
  const Eigen::MatrixXd pred =
      b * (mask / p).asDiagonal() * z;                  // m2 x N
  for (Eigen::Index s = 0; s < x_samples.cols(); ++s)
    total += (y_samples.col(s) - pred.col(s)).squaredNorm();
  return total / x_samples.cols();
}

void check_dropout_shapes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          const Eigen::MatrixXd& x_samples,
                          const Eigen::MatrixXd& y_samples) {
  if (a.cols() != b.cols())
    throw DimMismatchError("dropout objective: A and B column counts differ");
  if (x_samples.rows() != a.rows() || y_samples.rows() != b.rows() ||
      x_samples.cols() != y_samples.cols())
    throw DimMismatchError("dropout objective: sample shapes inconsistent");
}

}  // namespace

double etf_loss(const Eigen::MatrixXd& a, EtfLossVariant variant) {
  Eigen::VectorXd norms;
  const Eigen::MatrixXd u = unit_columns(a, &norms);
  const Eigen::MatrixXd dev =
      (u.transpose() * u).cwiseAbs() - target_profile(a.rows(), a.cols());
  switch (variant) {
    case EtfLossVariant::MaxAbs:
      return dev.cwiseAbs().maxCoeff();
    case EtfLossVariant::SumAbs:
      return dev.cwiseAbs().sum();
    case EtfLossVariant::SumSquares:
      return dev.squaredNorm();
  }
  return 0.0;
}

Eigen::MatrixXd etf_loss_grad(const Eigen::MatrixXd& a, EtfLossVariant variant) {
  Eigen::VectorXd norms;
  const Eigen::MatrixXd u = unit_columns(a, &norms);
  const Eigen::MatrixXd g = u.transpose() * u;
  const Eigen::MatrixXd dev = g.cwiseAbs() - target_profile(a.rows(), a.cols());

  // Chain: loss -> deviation -> Gram -> normalized columns -> columns.
  const Eigen::MatrixXd w_dev = loss_wrt_deviation(dev, variant);
  Eigen::MatrixXd w_gram(g.rows(), g.cols());
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      w_gram(i, j) = w_dev(i, j) * sign(g(i, j));

  const Eigen::MatrixXd grad_u = u * (w_gram + w_gram.transpose());
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (norms(j) <= 1e-14) continue;
    const Eigen::VectorXd uj = u.col(j);
    grad.col(j) = (grad_u.col(j) - uj * uj.dot(grad_u.col(j))) / norms(j);
  }
  return grad;
}

double decov_loss(const ActivationBatch& h) {
  const Eigen::Index n = h.data.rows();
  if (n < 2) throw BadDimsError("decov_loss: need at least two examples");
  const Eigen::RowVectorXd mean = h.data.colwise().mean();
  const Eigen::MatrixXd centered = h.data.rowwise() - mean;
  const Eigen::MatrixXd c = centered.transpose() * centered / double(n);
  return 0.5 * (c.squaredNorm() - c.diagonal().squaredNorm());
}

double dropout_objective_mc(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            double p, const Eigen::MatrixXd& x_samples,
                            const Eigen::MatrixXd& y_samples, int mask_trials,
                            std::uint64_t seed) {
  check_dropout_shapes(a, b, x_samples, y_samples);
  if (!(p > 0.0) || p > 1.0)
    throw BadParameterError("dropout_objective_mc: need 0 < p <= 1");
  const Eigen::Index n = a.cols();
  if (p == 1.0) {
    return masked_objective(a, b, 1.0, x_samples, y_samples,
                            Eigen::VectorXd::Ones(n));
  }
  if (mask_trials < 1)
    throw BadParameterError("dropout_objective_mc: mask_trials >= 1");
  double total = 0.0;
  const Eigen::MatrixXd z = a.transpose() * x_samples;
  for (Eigen::Index s = 0; s < x_samples.cols(); ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    double sample_total = 0.0;
    for (int t = 0; t < mask_trials; ++t) {
      Eigen::VectorXd masked = z.col(s);
      for (Eigen::Index i = 0; i < n; ++i)
        masked(i) = rng.bernoulli(p) ? masked(i) / p : 0.0;
      sample_total += (y_samples.col(s) - b * masked).squaredNorm();
    }
    total += sample_total / mask_trials;
  }
  return total / x_samples.cols();
}

double dropout_objective_exhaustive(const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& b, double p,
                                    const Eigen::MatrixXd& x_samples,
                                    const Eigen::MatrixXd& y_samples) {
  check_dropout_shapes(a, b, x_samples, y_samples);
  if (!(p > 0.0) || p > 1.0)
    throw BadParameterError("dropout_objective_exhaustive: need 0 < p <= 1");
  const int n = static_cast<int>(a.cols());
  if (n > 20) throw TooLargeError("dropout_objective_exhaustive: n > 20");
  double total = 0.0;
  for (std::uint32_t maskbits = 0; maskbits < (1u << n); ++maskbits) {
    double weight = 1.0;
    Eigen::VectorXd mask(n);
    for (int i = 0; i < n; ++i) {
      const bool on = maskbits & (1u << i);
      mask(i) = on ? 1.0 : 0.0;
      weight *= on ? p : 1.0 - p;
    }
    if (weight == 0.0) continue;
    total += weight * masked_objective(a, b, p, x_samples, y_samples, mask);
  }
  return total;
}

double dropout_objective_closed(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b, double p,
                                const Eigen::MatrixXd& x_cov,
                                double cross_term) {
  if (a.cols() != b.cols())
    throw DimMismatchError("dropout_objective_closed: column counts differ");
  if (x_cov.rows() != a.rows() || x_cov.cols() != a.rows())
    throw DimMismatchError("dropout_objective_closed: x_cov shape");
  if (!(p > 0.0) || p > 1.0)
    throw BadParameterError("dropout_objective_closed: need 0 < p <= 1");
  const Eigen::MatrixXd w = b * a.transpose();
  double value = cross_term + (w * x_cov * w.transpose()).trace();
  if (p < 1.0) {
    const double lambda = (1.0 - p) / p;
    double penalty = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      penalty += b.col(i).squaredNorm() * a.col(i).dot(x_cov * a.col(i));
    value += lambda * penalty;
  }
  return value;
}

double joint_equalization_gap(const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols())
    throw DimMismatchError("joint_equalization_gap: column counts differ");
  if (a.cols() == 0) throw BadDimsError("joint_equalization_gap: no columns");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const double v = a.col(i).norm() * b.col(i).norm();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

double matrix_coherence(const Eigen::MatrixXd& mat) {
  return coherence_of_columns(mat);
}

double kernel_coherence(const std::vector<Eigen::VectorXd>& kernels) {
  if (kernels.size() < 2)
    throw BadDimsError("kernel_coherence: need at least two kernels");
  const Eigen::Index len = kernels[0].size();
  Eigen::MatrixXd mat(len, static_cast<Eigen::Index>(kernels.size()));
  for (std::size_t j = 0; j < kernels.size(); ++j) {
    if (kernels[j].size() != len)
      throw DimMismatchError("kernel_coherence: kernel lengths differ");
    if (kernels[j].norm() < 1e-14)
      throw ZeroKernelError("kernel_coherence: zero kernel");
    mat.col(j) = kernels[j];
  }
  return coherence_of_columns(mat);
}

ToeplitzCoherence toeplitz_coherence_check(
    const std::vector<Eigen::VectorXd>& kernels, int signal_len,
    ConvPadding padding) {
  if (kernels.empty()) throw BadDimsError("toeplitz_coherence_check: no kernels");
  const int klen = static_cast<int>(kernels[0].size());
  if (klen < 1) throw BadDimsError("toeplitz_coherence_check: empty kernel");
  for (const auto& k : kernels) {
    if (k.size() != klen)
      throw DimMismatchError("toeplitz_coherence_check: kernel lengths differ");
    if (k.norm() < 1e-14)
      throw ZeroKernelError("toeplitz_coherence_check: zero kernel");
  }
  if (signal_len < 2 * klen)
    throw BadDimsError("toeplitz_coherence_check: need signal_len >= 2*kernel_len");

  // Under circular padding the column Gram is circulant in the position lag
  // and vanishes for lags >= kernel_len, so one stride period of columns
  // already exhibits every off-diagonal value of the full matrix.
  const Eigen::MatrixXd w = conv_weight_matrix(kernels, signal_len, padding);
  ToeplitzCoherence out;
  out.toeplitz_coh = coherence_of_columns(w);
  out.stride_coh = coherence_of_columns(w.leftCols(klen));
  out.equal = std::abs(out.toeplitz_coh - out.stride_coh) <= 1e-9;
  return out;
}

}  // namespace framelab
