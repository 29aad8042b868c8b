#include "framelab/dae.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "framelab/parallel.hpp"
#include "framelab/rng.hpp"

namespace framelab {

namespace {

constexpr std::uint64_t kTagTrainData = 101;
constexpr std::uint64_t kTagEvalSet = 102;
constexpr std::uint64_t kTagDynamics = 103;
constexpr std::uint64_t kTagEtfRef = 104;

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) {
  return Rng(seed, tag).next();
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& a, const SamplingPattern& s) {
  Eigen::MatrixXd a_s(a.rows(), s.k());
  for (int j = 0; j < s.k(); ++j) a_s.col(j) = a.col(s.kept[j]);
  return a_s;
}

double lmax_factored(const Eigen::MatrixXd& a_s, Eigen::VectorXd* warm) {
  return power_iteration_lmax_op(
      a_s.rows(),
      [&a_s](const Eigen::VectorXd& v) {
        return Eigen::VectorXd(a_s * (a_s.transpose() * v));
      },
      warm);
}

Eigen::VectorXd unroll(const Eigen::MatrixXd& a_s, const Eigen::VectorXd& y,
                       int iters, double mu) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a_s.rows());
  for (int i = 0; i < iters; ++i)
    x -= mu * (a_s * (a_s.transpose() * x - y));
  return x;
}

// Channel instance with the pattern redrawn until nonempty.
DaeSample draw_sample(const Eigen::VectorXd& x, int n, double keep_prob,
                      double sigma_w, std::uint64_t seed, std::uint64_t index) {
  DaeSample s;
  s.x = x;
  Rng pat = trial_rng(seed, index, StreamRole::Pattern);
  do {
    s.pattern.kept.clear();
    s.pattern.n = n;
    for (int i = 0; i < n; ++i)
      if (pat.bernoulli(keep_prob)) s.pattern.kept.push_back(i);
  } while (s.pattern.empty());
  Rng noise = trial_rng(seed, index, StreamRole::Noise);
  s.noise.resize(s.pattern.k());
  for (int i = 0; i < s.pattern.k(); ++i) s.noise(i) = sigma_w * noise.normal();
  return s;
}

Eigen::VectorXd fresh_signal(int m, std::uint64_t seed, std::uint64_t index) {
  Rng rng = trial_rng(seed, index, StreamRole::Signal);
  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x(i) = rng.normal();
  return x;
}

struct SampleGrad {
  Eigen::MatrixXd d_a_s;
  double err = 0.0;
};

// Reverse pass through the unrolled decoder with the step size frozen.
SampleGrad sample_backward(const Eigen::MatrixXd& a_s, const DaeSample& s,
                           int iters, double mu) {
  const int cols = static_cast<int>(a_s.cols());
  const Eigen::VectorXd y = a_s.transpose() * s.x + s.noise;

  std::vector<Eigen::VectorXd> iterates(iters + 1);
  iterates[0] = Eigen::VectorXd::Zero(a_s.rows());
  for (int i = 0; i < iters; ++i)
    iterates[i + 1] =
        iterates[i] - mu * (a_s * (a_s.transpose() * iterates[i] - y));

  SampleGrad out;
  out.err = (s.x - iterates[iters]).squaredNorm();
  out.d_a_s = Eigen::MatrixXd::Zero(a_s.rows(), cols);
  Eigen::VectorXd g = 2.0 * (iterates[iters] - s.x);
  for (int i = iters - 1; i >= 0; --i) {
    const Eigen::VectorXd u = iterates[i] - s.x;
    const Eigen::VectorXd r = a_s.transpose() * u - s.noise;
    const Eigen::VectorXd ga = a_s.transpose() * g;
    out.d_a_s.noalias() -= mu * (g * r.transpose() + u * ga.transpose());
    g -= mu * (a_s * ga);
  }
  return out;
}

struct AdamState {
  Eigen::MatrixXd m1, m2;
  long t = 0;
};

void apply_update(Eigen::MatrixXd& a, const Eigen::MatrixXd& g, double lr,
                  OptimizerKind kind, AdamState& adam) {
  if (kind == OptimizerKind::Sgd) {
    a -= lr * g;
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (adam.t == 0) {
    adam.m1 = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    adam.m2 = adam.m1;
  }
  ++adam.t;
  adam.m1 = b1 * adam.m1 + (1.0 - b1) * g;
  adam.m2 = b2 * adam.m2 + (1.0 - b2) * g.cwiseProduct(g);
  const double c1 = 1.0 - std::pow(b1, double(adam.t));
  const double c2 = 1.0 - std::pow(b2, double(adam.t));
  a.array() -= lr * (adam.m1.array() / c1) /
               ((adam.m2.array() / c2).sqrt() + eps);
}

std::vector<DaeSample> draw_batch(const Eigen::MatrixXd* fixed_x, int m, int n,
                                  double keep_prob, double sigma_w,
                                  std::uint64_t seed, std::uint64_t base_index,
                                  int lo, int hi) {
  std::vector<DaeSample> batch;
  batch.reserve(hi - lo);
  for (int s = lo; s < hi; ++s) {
    const std::uint64_t idx = base_index + s;
    Eigen::VectorXd x = fixed_x != nullptr
                            ? Eigen::VectorXd(fixed_x->col(s % fixed_x->cols()))
                            : fresh_signal(m, seed, idx);
    batch.push_back(draw_sample(x, n, keep_prob, sigma_w, seed, idx));
  }
  return batch;
}

}  // namespace

Eigen::VectorXd dae_forward(const LinearDae& dae, const Eigen::VectorXd& x,
                            const SamplingPattern& pattern,
                            const Eigen::VectorXd& noise) {
  if (x.size() != dae.encoder.m())
    throw DimMismatchError("dae_forward: |x| != m");
  if (pattern.empty()) throw EmptyPatternError("dae_forward: empty pattern");
  if (noise.size() != pattern.k())
    throw DimMismatchError("dae_forward: |noise| != kept count");
  const Frame a_s = submatrix(dae.encoder, pattern);
  const Eigen::VectorXd y = a_s.data.transpose() * x + noise;
  return decode_unrolled_gd(a_s, y, dae.decoder_iters);
}

std::vector<double> dae_step_sizes(const Eigen::MatrixXd& encoder,
                                   const std::vector<DaeSample>& batch) {
  std::vector<double> mus(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Eigen::MatrixXd a_s = gather(encoder, batch[i].pattern);
    const double lmax = lmax_factored(a_s, nullptr);
    mus[i] = lmax > 1e-30 ? 1.0 / lmax : 0.0;
  }
  return mus;
}

double dae_loss(const Eigen::MatrixXd& encoder,
                const std::vector<DaeSample>& batch, int iters, double beta,
                EtfLossVariant variant, const std::vector<double>* mus) {
  if (batch.empty()) throw BadParameterError("dae_loss: empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const DaeSample& s = batch[i];
    const Eigen::MatrixXd a_s = gather(encoder, s.pattern);
    double mu;
    if (mus != nullptr) {
      mu = (*mus)[i];
    } else {
      const double lmax = lmax_factored(a_s, nullptr);
      mu = lmax > 1e-30 ? 1.0 / lmax : 0.0;
    }
    const Eigen::VectorXd y = a_s.transpose() * s.x + s.noise;
    total += (s.x - unroll(a_s, y, iters, mu)).squaredNorm();
  }
  double loss = total / batch.size();
  if (beta > 0.0) loss += beta * etf_loss(encoder, variant);
  return loss;
}

DaeGradResult dae_grad(const Eigen::MatrixXd& encoder,
                       const std::vector<DaeSample>& batch, int iters,
                       double beta, EtfLossVariant variant,
                       const std::vector<double>* mus, int threads) {
  if (batch.empty()) throw BadParameterError("dae_grad: empty batch");
  std::vector<SampleGrad> grads(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t i) {
    const DaeSample& s = batch[i];
    const Eigen::MatrixXd a_s = gather(encoder, s.pattern);
    double mu;
    if (mus != nullptr) {
      mu = (*mus)[i];
    } else {
      const double lmax = lmax_factored(a_s, nullptr);
      mu = lmax > 1e-30 ? 1.0 / lmax : 0.0;
    }
    grads[i] = sample_backward(a_s, s, iters, mu);
  });

  DaeGradResult out;
  out.grad = Eigen::MatrixXd::Zero(encoder.rows(), encoder.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& kept = batch[i].pattern.kept;
    for (std::size_t j = 0; j < kept.size(); ++j)
      out.grad.col(kept[j]) += grads[i].d_a_s.col(j);
    total += grads[i].err;
  }
  out.grad /= double(batch.size());
  out.mse = total / batch.size();
  if (beta > 0.0) out.grad += beta * etf_loss_grad(encoder, variant);
  return out;
}

ChannelEvaluator::ChannelEvaluator(int m, int n, double keep_prob,
                                   double sigma_w, int count,
                                   std::uint64_t seed) {
  samples_.reserve(count);
  for (int i = 0; i < count; ++i) {
    samples_.push_back(draw_sample(fresh_signal(m, seed, i), n, keep_prob,
                                   sigma_w, seed, i));
  }
  warm_.resize(count);
}

double ChannelEvaluator::mse_unrolled(const Eigen::MatrixXd& encoder,
                                      int iters, int threads) {
  std::vector<double> errs(samples_.size());
  parallel_for(samples_.size(), threads, [&](std::size_t i) {
    const DaeSample& s = samples_[i];
    const Eigen::MatrixXd a_s = gather(encoder, s.pattern);
    const double lmax = lmax_factored(a_s, &warm_[i]);
    const double mu = lmax > 1e-30 ? 1.0 / lmax : 0.0;
    const Eigen::VectorXd y = a_s.transpose() * s.x + s.noise;
    errs[i] = (s.x - unroll(a_s, y, iters, mu)).squaredNorm();
  });
  double total = 0.0;
  for (double e : errs) total += e;
  return total / errs.size();
}

double ChannelEvaluator::mse_pinv(const Eigen::MatrixXd& encoder,
                                  int threads) const {
  std::vector<double> errs(samples_.size());
  parallel_for(samples_.size(), threads, [&](std::size_t i) {
    const DaeSample& s = samples_[i];
    const Eigen::MatrixXd a_s = gather(encoder, s.pattern);
    const Eigen::VectorXd y = a_s.transpose() * s.x + s.noise;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a_s.transpose(),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    errs[i] = (s.x - svd.solve(y)).squaredNorm();
  });
  double total = 0.0;
  for (double e : errs) total += e;
  return total / errs.size();
}

MetricTrace train_online(LinearDae& dae, const TrainConfig& cfg,
                         TrainObjective objective) {
  if (cfg.train_set_size.has_value())
    throw BadParameterError("train_online: train_set_size must be absent");
  if (!(dae.keep_prob > 0.0) || dae.keep_prob > 1.0 || dae.sigma_w < 0.0)
    throw BadParameterError("train_online: need 0 < p <= 1 and sigma_w >= 0");
  if (cfg.steps < 1 || cfg.batch_size < 1)
    throw BadParameterError("train_online: positive steps and batch_size");
  const int m = dae.encoder.m(), n = dae.encoder.n();
  Eigen::MatrixXd a = dae.encoder.data;
  ChannelEvaluator eval(m, n, dae.keep_prob, dae.sigma_w, cfg.test_set_size,
                        sub_seed(cfg.seed, kTagEvalSet));
  const std::uint64_t dyn = sub_seed(cfg.seed, kTagDynamics);
  AdamState adam;
  MetricTrace trace;
  trace.records.reserve(cfg.steps);

  for (int b = 0; b < cfg.steps; ++b) {
    const std::vector<DaeSample> batch =
        draw_batch(nullptr, m, n, dae.keep_prob, dae.sigma_w, dyn,
                   std::uint64_t(b) * cfg.batch_size, 0, cfg.batch_size);
    MetricRecord rec;
    rec.step = b;
    rec.cl = etf_loss(a, cfg.variant);
    rec.coherence = matrix_coherence(a);

    Eigen::MatrixXd g;
    if (objective == TrainObjective::Mse) {
      DaeGradResult gr = dae_grad(a, batch, dae.decoder_iters, 0.0, cfg.variant,
                                  nullptr, cfg.threads);
      rec.train_mse = gr.mse;
      rec.loss = gr.mse;
      g = std::move(gr.grad);
    } else {
      rec.train_mse =
          dae_loss(a, batch, dae.decoder_iters, 0.0, cfg.variant);
      rec.loss = rec.cl;
      g = etf_loss_grad(a, cfg.variant);
    }
    rec.test_mse = (b % cfg.eval_every == 0 || b == cfg.steps - 1)
                       ? eval.mse_unrolled(a, dae.decoder_iters, cfg.threads)
                       : std::numeric_limits<double>::quiet_NaN();
    trace.records.push_back(rec);

    apply_update(a, g, cfg.learning_rate * std::pow(cfg.lr_decay, b),
                 cfg.optimizer, adam);
  }
  dae.encoder.data = std::move(a);
  return trace;
}

FiniteRun train_finite(LinearDae& dae, const TrainConfig& cfg) {
  if (!cfg.train_set_size.has_value())
    throw BadParameterError("train_finite: train_set_size required");
  if (!(dae.keep_prob > 0.0) || dae.keep_prob > 1.0 || dae.sigma_w < 0.0)
    throw BadParameterError("train_finite: need 0 < p <= 1 and sigma_w >= 0");
  if (cfg.steps < 1 || cfg.batch_size < 1 || *cfg.train_set_size < 1)
    throw BadParameterError("train_finite: positive sizes");
  const int m = dae.encoder.m(), n = dae.encoder.n();
  const int train_size = *cfg.train_set_size;

  Rng data_rng(sub_seed(cfg.seed, kTagTrainData));
  Eigen::MatrixXd train_x(m, train_size);
  for (int j = 0; j < train_size; ++j)
    for (int i = 0; i < m; ++i) train_x(i, j) = data_rng.normal();

  ChannelEvaluator eval(m, n, dae.keep_prob, dae.sigma_w, cfg.test_set_size,
                        sub_seed(cfg.seed, kTagEvalSet));
  const std::uint64_t dyn = sub_seed(cfg.seed, kTagDynamics);

  Eigen::MatrixXd a = dae.encoder.data;
  AdamState adam;
  MetricTrace trace;
  trace.records.reserve(cfg.steps);
  const int batches = (train_size + cfg.batch_size - 1) / cfg.batch_size;
  std::uint64_t draw_index = 0;

  for (int e = 0; e < cfg.steps; ++e) {
    double epoch_mse = 0.0;
    const double lr = cfg.learning_rate * std::pow(cfg.lr_decay, e);
    for (int bi = 0; bi < batches; ++bi) {
      const int lo = bi * cfg.batch_size;
      const int hi = std::min(train_size, lo + cfg.batch_size);
      const std::vector<DaeSample> batch =
          draw_batch(&train_x, m, n, dae.keep_prob, dae.sigma_w, dyn,
                     draw_index - lo, lo, hi);
      draw_index += hi - lo;
      DaeGradResult gr = dae_grad(a, batch, dae.decoder_iters, cfg.beta,
                                  cfg.variant, nullptr, cfg.threads);
      epoch_mse += gr.mse * (hi - lo);
      apply_update(a, gr.grad, lr, cfg.optimizer, adam);
    }
    MetricRecord rec;
    rec.step = e;
    rec.train_mse = epoch_mse / train_size;
    rec.test_mse = eval.mse_unrolled(a, dae.decoder_iters, cfg.threads);
    rec.cl = etf_loss(a, cfg.variant);
    rec.coherence = matrix_coherence(a);
    rec.loss = rec.train_mse + cfg.beta * rec.cl;
    trace.records.push_back(rec);
  }
  dae.encoder.data = std::move(a);

  FiniteRun run;
  run.summary.beta = cfg.beta;
  run.summary.final_test_mse = trace.records.back().test_mse;
  run.summary.final_coherence = trace.records.back().coherence;
  run.summary.min_test_mse = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records)
    run.summary.min_test_mse = std::min(run.summary.min_test_mse, r.test_mse);
  run.trace = std::move(trace);
  return run;
}

SweepResult sweep_beta(const LinearDae& dae, const TrainConfig& cfg,
                       const std::vector<double>& betas, int etf_ref_iters) {
  if (betas.empty()) throw BadParameterError("sweep_beta: empty beta list");
  SweepResult result;
  for (double beta : betas) {
    LinearDae run_dae = dae;
    TrainConfig run_cfg = cfg;
    run_cfg.beta = beta;
    result.rows.push_back(train_finite(run_dae, run_cfg).summary);
  }
  const Frame ref = approximate_etf(dae.encoder.m(), dae.encoder.n(),
                                    etf_ref_iters, sub_seed(cfg.seed, kTagEtfRef));
  ChannelEvaluator eval(dae.encoder.m(), dae.encoder.n(), dae.keep_prob,
                        dae.sigma_w, cfg.test_set_size,
                        sub_seed(cfg.seed, kTagEvalSet));
  result.etf_mse = eval.mse_pinv(ref.data, cfg.threads);
  result.etf_coherence = coherence(ref);
  return result;
}

}  // namespace framelab
