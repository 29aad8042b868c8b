// Experiment runner: frame construction/analysis, erasure-channel estimators,
// submatrix spectra/moments, and the linear-DAE training protocols. All
// randomness flows from --seed; outputs are CSV/JSON files in --out.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>

#include "framelab/dae.hpp"
#include "framelab/io.hpp"
#include "framelab/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace framelab;

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out = "out";
  int threads = 1;
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts* c) {
  cmd->add_option("--seed", c->seed, "Master seed; all randomness derives from it");
  cmd->add_option("--out", c->out, "Output directory");
  cmd->add_option("--threads", c->threads,
                  "Worker threads (results are independent of this)");
  cmd->add_option("--config", c->config_path,
                  "JSON config file; explicit flags take precedence");
}

// Config-file values act as defaults: for every key present in the file that
// matches an option's long name, inject it unless the flag was given.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  const ordered_json cfg = ordered_json::parse(read_file(path));
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    const std::string text =
        value.is_string() ? value.get<std::string>() : value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

void echo_config(const CommonOpts& c, ordered_json resolved) {
  resolved["seed"] = c.seed;
  resolved["out"] = c.out;
  resolved["threads"] = c.threads;
  fs::create_directories(c.out);
  write_file((fs::path(c.out) / "config.json").string(), resolved.dump(2) + "\n");
}

Frame build_frame(const std::string& kind, int m, int n, int q, int iters,
                  std::uint64_t seed) {
  if (kind == "simplex") return make_simplex_etf(m);
  if (kind == "conference") return make_conference_etf(q);
  if (kind == "gaussian") return make_gaussian_frame(m, n, seed);
  if (kind == "lowpass") return make_lowpass_frame(m, n);
  if (kind == "approx-etf") return approximate_etf(m, n, iters, seed);
  throw BadParameterError("unknown frame kind: " + kind);
}

EtfLossVariant parse_variant(const std::string& name) {
  if (name == "linf") return EtfLossVariant::MaxAbs;
  if (name == "l1") return EtfLossVariant::SumAbs;
  if (name == "l2") return EtfLossVariant::SumSquares;
  throw BadParameterError("unknown variant: " + name + " (linf|l1|l2)");
}

struct FrameSource {
  std::string file;
  std::string kind = "gaussian";
  int m = 8, n = 16, q = 5, iters = 2000;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--frame", file, "Load the frame from a CSV file");
    cmd->add_option("--kind", kind,
                    "Constructor: simplex|conference|gaussian|lowpass|approx-etf");
    cmd->add_option("--m", m, "Rows");
    cmd->add_option("--n", n, "Columns");
    cmd->add_option("--q", q, "Conference-matrix parameter (prime, 1 mod 4)");
    cmd->add_option("--iters", iters, "Alternating-projection iterations");
  }

  Frame resolve(std::uint64_t seed) const {
    if (!file.empty()) return frame_from_csv(read_file(file));
    return build_frame(kind, m, n, q, iters, seed);
  }

  ordered_json describe() const {
    return ordered_json{{"frame", file}, {"kind", kind}, {"m", m},
                        {"n", n},        {"q", q},       {"iters", iters}};
  }
};

int cmd_frame(const CommonOpts& c, const FrameSource& src) {
  echo_config(c, src.describe());
  const Frame f = src.resolve(c.seed);
  ordered_json analysis;
  analysis["m"] = f.m();
  analysis["n"] = f.n();
  analysis["coherence"] = coherence(normalize_columns(f));
  analysis["welch_bound"] = welch_bound(f.m(), f.n());
  const auto tight = is_tight(normalize_columns(f), 1e-9);
  analysis["tight_c"] =
      tight.has_value() ? ordered_json(*tight) : ordered_json(nullptr);
  analysis["equiangularity_spread"] =
      f.n() >= 2 ? ordered_json(equiangularity_spread(normalize_columns(f)))
                 : ordered_json(nullptr);
  fs::create_directories(c.out);
  write_file((fs::path(c.out) / "frame.csv").string(), frame_to_csv(f));
  write_file((fs::path(c.out) / "analysis.json").string(),
             analysis.dump(2) + "\n");
  std::cout << analysis.dump(2) << "\n";
  return 0;
}

int cmd_channel(const CommonOpts& c, const FrameSource& src, double p,
                double sigma_w, int trials, int gd_iters) {
  ordered_json cfg_echo = src.describe();
  cfg_echo["p"] = p;
  cfg_echo["sigma-w"] = sigma_w;
  cfg_echo["trials"] = trials;
  cfg_echo["gd-iters"] = gd_iters;
  echo_config(c, cfg_echo);
  const Frame f = normalize_columns(src.resolve(c.seed));
  ChannelConfig cfg;
  cfg.keep_prob = p;
  cfg.sigma_w = sigma_w;
  cfg.trials = trials;
  cfg.seed = c.seed;
  ordered_json out;
  out["mse_ls"] = estimate_to_json(
      mse_monte_carlo(f, cfg, DecoderSpec{Decoder::Ls, 0}, c.threads));
  out["mse_unrolled_gd"] = estimate_to_json(mse_monte_carlo(
      f, cfg, DecoderSpec{Decoder::UnrolledGd, gd_iters}, c.threads));
  out["expected_inverse_trace"] = estimate_to_json(
      expected_inverse_trace(f, p, trials, c.seed, c.threads));
  out["p"] = p;
  out["sigma_w"] = sigma_w;
  out["gd_iters"] = gd_iters;
  fs::create_directories(c.out);
  write_file((fs::path(c.out) / "channel.json").string(), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_spectra(const CommonOpts& c, const FrameSource& src, double p,
                int trials, int bins, bool exhaustive) {
  ordered_json cfg_echo = src.describe();
  cfg_echo["p"] = p;
  cfg_echo["trials"] = trials;
  cfg_echo["bins"] = bins;
  cfg_echo["exhaustive"] = exhaustive;
  echo_config(c, cfg_echo);
  const Frame f = normalize_columns(src.resolve(c.seed));
  const SpectrumHistogram h =
      empirical_spectrum(f, p, trials, bins, c.seed, c.threads);
  std::vector<MomentEstimate> moments;
  for (int d = 1; d <= 4; ++d)
    moments.push_back(moment_md(f, p, d, trials, c.seed, c.threads));
  fs::create_directories(c.out);
  write_file((fs::path(c.out) / "spectrum.csv").string(), histogram_to_csv(h));
  write_file((fs::path(c.out) / "moments.csv").string(), moments_to_csv(moments));
  if (exhaustive) {
    std::string exact = "d,value\n";
    for (int d = 1; d <= 4; ++d)
      exact += std::to_string(d) + "," +
               format_double(moment_md_exhaustive(f, p, d)) + "\n";
    write_file((fs::path(c.out) / "moments_exhaustive.csv").string(), exact);
  }
  std::cout << "spectrum: " << h.total_samples << " eigenvalues pooled, m_1="
            << format_double(moments[0].value) << "\n";
  return 0;
}

int cmd_train(const CommonOpts& c, const std::string& mode, int m, int n,
              double p, double sigma_w, double beta,
              const std::vector<double>& betas, int steps, int batch_size,
              int train_size, int test_size, double lr, double lr_decay,
              const std::string& optimizer, const std::string& variant,
              int decoder_iters, int eval_every) {
  LinearDae dae;
  dae.encoder = make_gaussian_frame(m, n, Rng(c.seed, 7).next());
  dae.decoder_iters = decoder_iters;
  dae.keep_prob = p;
  dae.sigma_w = sigma_w;

  TrainConfig cfg;
  cfg.beta = beta;
  cfg.batch_size = batch_size;
  cfg.steps = steps;
  cfg.test_set_size = test_size;
  cfg.learning_rate = lr;
  cfg.lr_decay = lr_decay;
  cfg.optimizer = optimizer == "sgd" ? OptimizerKind::Sgd : OptimizerKind::Adam;
  cfg.variant = parse_variant(variant);
  cfg.seed = c.seed;
  cfg.eval_every = eval_every;
  cfg.threads = c.threads;

  fs::create_directories(c.out);
  ordered_json cfg_echo{{"mode", mode},
                        {"m", m},
                        {"n", n},
                        {"p", p},
                        {"sigma-w", sigma_w},
                        {"beta", beta},
                        {"steps", steps},
                        {"batch-size", batch_size},
                        {"train-size", train_size},
                        {"test-size", test_size},
                        {"lr", lr},
                        {"lr-decay", lr_decay},
                        {"optimizer", optimizer},
                        {"variant", variant},
                        {"decoder-iters", decoder_iters},
                        {"eval-every", eval_every}};
  cfg_echo["betas"] = betas;
  echo_config(c, cfg_echo);

  if (mode == "online-mse" || mode == "online-coherence") {
    const MetricTrace trace = train_online(
        dae, cfg,
        mode == "online-mse" ? TrainObjective::Mse : TrainObjective::CoherenceOnly);
    write_file((fs::path(c.out) / "trace.csv").string(), trace_to_csv(trace));
    ordered_json summary{
        {"initial_coherence", trace.records.front().coherence},
        {"final_coherence", trace.records.back().coherence},
        {"initial_test_mse", trace.records.front().test_mse},
        {"final_test_mse", trace.records.back().test_mse}};
    write_file((fs::path(c.out) / "summary.json").string(),
               summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
  } else if (mode == "finite") {
    cfg.train_set_size = train_size;
    LinearDae run_dae = dae;
    const FiniteRun run = train_finite(run_dae, cfg);
    write_file((fs::path(c.out) / "trace.csv").string(), trace_to_csv(run.trace));
    write_file((fs::path(c.out) / "summary.json").string(),
               summary_to_json(run.summary).dump(2) + "\n");
    std::cout << summary_to_json(run.summary).dump(2) << "\n";
  } else if (mode == "sweep") {
    cfg.train_set_size = train_size;
    const SweepResult sweep = sweep_beta(dae, cfg, betas);
    write_file((fs::path(c.out) / "sweep.csv").string(), sweep_to_csv(sweep));
    ordered_json rows = ordered_json::array();
    for (const auto& row : sweep.rows) rows.push_back(summary_to_json(row));
    ordered_json summary{{"rows", rows},
                         {"etf_mse", sweep.etf_mse},
                         {"etf_coherence", sweep.etf_coherence}};
    write_file((fs::path(c.out) / "summary.json").string(),
               summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
  } else {
    throw BadParameterError(
        "unknown mode: " + mode + " (online-mse|online-coherence|finite|sweep)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame workbench: ETF construction and analysis, erasure-channel "
               "recovery, submatrix spectra, and dropout-trained linear DAEs"};
  app.require_subcommand(1);

  // frame
  CommonOpts frame_common;
  FrameSource frame_src;
  CLI::App* frame_cmd =
      app.add_subcommand(
          "frame",
          "Construct a frame. Writes frame.csv (header line m,n then the "
          "matrix row-major) and analysis.json {coherence, welch_bound, "
          "tight_c, equiangularity_spread}");
  frame_src.add_options(frame_cmd);
  add_common(frame_cmd, &frame_common);

  // channel
  CommonOpts chan_common;
  FrameSource chan_src;
  double chan_p = 0.5, chan_sigma = 1e-3;
  int chan_trials = 2000, chan_gd_iters = 10;
  CLI::App* chan_cmd = app.add_subcommand(
      "channel",
      "Erasure-channel recovery estimates. Writes channel.json with records "
      "{estimate, std_error, trials, skipped_singular, seed} for mse_ls, "
      "mse_unrolled_gd and expected_inverse_trace");
  chan_src.add_options(chan_cmd);
  chan_cmd->add_option("--p", chan_p, "Keep probability");
  chan_cmd->add_option("--sigma-w", chan_sigma, "Noise standard deviation");
  chan_cmd->add_option("--trials", chan_trials, "Monte-Carlo trials");
  chan_cmd->add_option("--gd-iters", chan_gd_iters, "Unrolled decoder steps");
  add_common(chan_cmd, &chan_common);

  // spectra
  CommonOpts spec_common;
  FrameSource spec_src;
  double spec_p = 0.5;
  int spec_trials = 2000, spec_bins = 40;
  bool spec_exhaustive = false;
  CLI::App* spec_cmd = app.add_subcommand(
      "spectra",
      "Submatrix eigenvalue histogram and subset moments. Writes spectrum.csv "
      "(bin_lo,bin_hi,count) and moments.csv (d,value,std_error,trials) for "
      "d=1..4, plus moments_exhaustive.csv (d,value) with --exhaustive");
  spec_src.add_options(spec_cmd);
  spec_cmd->add_option("--p", spec_p, "Keep probability");
  spec_cmd->add_option("--trials", spec_trials, "Monte-Carlo trials");
  spec_cmd->add_option("--bins", spec_bins, "Histogram bins");
  spec_cmd->add_flag("--exhaustive", spec_exhaustive,
                     "Also write exact moments (n <= 20)");
  add_common(spec_cmd, &spec_common);

  // train
  CommonOpts train_common;
  std::string train_mode = "finite";
  int train_m = 75, train_n = 150;
  double train_p = 0.5, train_sigma = 1e-3, train_beta = 0.0;
  std::vector<double> train_betas{0, 1e-4, 1e-3, 1e-2, 1e-1, 1, 10};
  int train_steps = 300, train_batch = 100, train_size = 100, test_size = 5000;
  double train_lr = 1e-3, train_lr_decay = 1.0;
  std::string train_opt = "adam", train_variant = "linf";
  int train_dec_iters = 10, train_eval_every = 50;
  CLI::App* train_cmd = app.add_subcommand(
      "train",
      "Train the linear DAE. Writes trace.csv (step,train_mse,test_mse,cl,"
      "coherence,loss; gnuplot-ready) and summary.json; sweep mode writes "
      "sweep.csv (beta,min_test_mse,final_test_mse,final_coherence,etf_mse,"
      "etf_coherence)");
  train_cmd->add_option("--mode", train_mode,
                        "online-mse|online-coherence|finite|sweep");
  train_cmd->add_option("--m", train_m, "Signal dimension");
  train_cmd->add_option("--n", train_n, "Code dimension");
  train_cmd->add_option("--p", train_p, "Keep probability");
  train_cmd->add_option("--sigma-w", train_sigma, "Noise standard deviation");
  train_cmd->add_option("--beta", train_beta, "Coherence-loss weight");
  train_cmd->add_option("--betas", train_betas, "Sweep grid")->delimiter(',');
  train_cmd->add_option("--steps", train_steps, "Epochs (finite) or batches (online)");
  train_cmd->add_option("--batch-size", train_batch, "Signals per batch");
  train_cmd->add_option("--train-size", train_size, "Training-set size (finite)");
  train_cmd->add_option("--test-size", test_size, "Test-set size");
  train_cmd->add_option("--lr", train_lr, "Learning rate");
  train_cmd->add_option("--lr-decay", train_lr_decay, "Per-step LR multiplier");
  train_cmd->add_option("--optimizer", train_opt, "adam|sgd");
  train_cmd->add_option("--variant", train_variant, "linf|l1|l2");
  train_cmd->add_option("--decoder-iters", train_dec_iters, "Unrolled steps");
  train_cmd->add_option("--eval-every", train_eval_every,
                        "Online test-MSE cadence (batches)");
  add_common(train_cmd, &train_common);

  try {
    CLI11_PARSE(app, argc, argv);
    if (frame_cmd->parsed()) {
      apply_config_file(frame_cmd, frame_common.config_path);
      return cmd_frame(frame_common, frame_src);
    }
    if (chan_cmd->parsed()) {
      apply_config_file(chan_cmd, chan_common.config_path);
      return cmd_channel(chan_common, chan_src, chan_p, chan_sigma, chan_trials,
                         chan_gd_iters);
    }
    if (spec_cmd->parsed()) {
      apply_config_file(spec_cmd, spec_common.config_path);
      return cmd_spectra(spec_common, spec_src, spec_p, spec_trials, spec_bins,
                         spec_exhaustive);
    }
    if (train_cmd->parsed()) {
      apply_config_file(train_cmd, train_common.config_path);
      return cmd_train(train_common, train_mode, train_m, train_n, train_p,
                       train_sigma, train_beta, train_betas, train_steps,
                       train_batch, train_size, test_size, train_lr,
                       train_lr_decay, train_opt, train_variant,
                       train_dec_iters, train_eval_every);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
