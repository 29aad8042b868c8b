#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "framelab/channel.hpp"
#include "framelab/frame.hpp"
#include "framelab/regularizers.hpp"

namespace framelab {

/// Linear encoder trained under the dropout/erasure channel with an unrolled
/// gradient-descent decoder.
struct LinearDae {
  Frame encoder;          // m x n
  int decoder_iters = 10;
  double keep_prob = 0.5;
  double sigma_w = 1e-3;
};

enum class OptimizerKind { Sgd, Adam };
enum class TrainObjective { Mse, CoherenceOnly };

struct TrainConfig {
  double beta = 0.0;
  int batch_size = 100;
  int steps = 300;  // epochs (finite protocol) or batches (online)
  std::optional<int> train_set_size;
  int test_set_size = 5000;
  double learning_rate = 1e-3;
  double lr_decay = 1.0;  // multiplicative, per recorded step
  OptimizerKind optimizer = OptimizerKind::Adam;
  EtfLossVariant variant = EtfLossVariant::MaxAbs;
  std::uint64_t seed = 0;
  int eval_every = 50;  // online test-MSE cadence, in batches
  int threads = 1;
};

struct MetricRecord {
  long step = 0;
  double train_mse = 0.0;
  double test_mse = 0.0;  // NaN when not scheduled
  double cl = 0.0;
  double coherence = 0.0;
  double loss = 0.0;
};

struct MetricTrace {
  std::vector<MetricRecord> records;
};

struct TrainSummary {
  double beta = 0.0;
  double min_test_mse = 0.0;
  double final_test_mse = 0.0;
  double final_coherence = 0.0;
};

/// One corrupted-channel instance: clean signal, kept-coordinate pattern and
/// the additive noise on the kept coordinates.
struct DaeSample {
  Eigen::VectorXd x;
  SamplingPattern pattern;
  Eigen::VectorXd noise;  // length pattern.k()
};

/// Encode, erase, add noise, decode with the unrolled decoder.
Eigen::VectorXd dae_forward(const LinearDae& dae, const Eigen::VectorXd& x,
                            const SamplingPattern& pattern,
                            const Eigen::VectorXd& noise);

/// Decoder step sizes 1/lambda_max(A_s A_s^T) for each sample's pattern.
std::vector<double> dae_step_sizes(const Eigen::MatrixXd& encoder,
                                   const std::vector<DaeSample>& batch);

/// Mean reconstruction error plus beta * etf_loss(encoder). When mus is given
/// the decoder step sizes are frozen to it (finite-difference harness).
double dae_loss(const Eigen::MatrixXd& encoder,
                const std::vector<DaeSample>& batch, int iters, double beta,
                EtfLossVariant variant,
                const std::vector<double>* mus = nullptr);

struct DaeGradResult {
  Eigen::MatrixXd grad;
  double mse = 0.0;  // batch mean, without the beta term
};

/// Gradient of dae_loss with respect to the encoder, backpropagated through
/// all unrolled decoder steps with the step sizes treated as constants.
DaeGradResult dae_grad(const Eigen::MatrixXd& encoder,
                       const std::vector<DaeSample>& batch, int iters,
                       double beta, EtfLossVariant variant,
                       const std::vector<double>* mus = nullptr,
                       int threads = 1);

/// Fixed bank of corrupted-channel instances with per-sample warm starts for
/// the decoder step-size power iterations; used for test-MSE measurement.
class ChannelEvaluator {
 public:
  ChannelEvaluator(int m, int n, double keep_prob, double sigma_w, int count,
                   std::uint64_t seed);

  double mse_unrolled(const Eigen::MatrixXd& encoder, int iters, int threads);
  /// Pseudo-inverse (minimum-norm least-squares) decoding; the reference
  /// measurement for near-equiangular encoders.
  double mse_pinv(const Eigen::MatrixXd& encoder, int threads) const;

  const std::vector<DaeSample>& samples() const { return samples_; }

 private:
  std::vector<DaeSample> samples_;
  std::vector<Eigen::VectorXd> warm_;
};

/// Online protocol: fresh signals, patterns and noise every batch. Optimizes
/// either the reconstruction error or the coherence loss alone, recording
/// both either way.
MetricTrace train_online(LinearDae& dae, const TrainConfig& cfg,
                         TrainObjective objective);

struct FiniteRun {
  MetricTrace trace;
  TrainSummary summary;
};

/// Finite-data protocol: a fixed training set reused every epoch with fresh
/// patterns/noise per batch, and a fixed test set evaluated after each epoch.
FiniteRun train_finite(LinearDae& dae, const TrainConfig& cfg);

struct SweepResult {
  std::vector<TrainSummary> rows;
  double etf_mse = 0.0;        // reference: near-ETF encoder, pinv decoder
  double etf_coherence = 0.0;
};

/// One train_finite run per beta with shared data seeds, plus the
/// near-equiangular reference measured on the same test instances.
SweepResult sweep_beta(const LinearDae& dae, const TrainConfig& cfg,
                       const std::vector<double>& betas,
                       int etf_ref_iters = 2000);

}  // namespace framelab
