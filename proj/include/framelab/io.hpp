#pragma once

#include <string>
#include <vector>

#include "framelab/channel.hpp"
#include "framelab/dae.hpp"
#include "framelab/frame.hpp"
#include "framelab/spectra.hpp"

#include <nlohmann/json_fwd.hpp>

namespace framelab {

/// Shortest-exact decimal formatting ("%.17g"); round-trips bit-exactly.
std::string format_double(double v);

/// First line "m,n", then m rows of n comma-separated values.
std::string frame_to_csv(const Frame& f);
Frame frame_from_csv(const std::string& text);

/// bin_lo,bin_hi,count
std::string histogram_to_csv(const SpectrumHistogram& h);

/// d,value,std_error,trials
std::string moments_to_csv(const std::vector<MomentEstimate>& moments);

/// step,train_mse,test_mse,cl,coherence,loss (test_mse is "nan" when the
/// step had no scheduled evaluation)
std::string trace_to_csv(const MetricTrace& trace);

/// beta,min_test_mse,final_test_mse,final_coherence,etf_mse,etf_coherence
std::string sweep_to_csv(const SweepResult& sweep);

nlohmann::ordered_json estimate_to_json(const EstimateResult& e);
nlohmann::ordered_json summary_to_json(const TrainSummary& s);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace framelab
