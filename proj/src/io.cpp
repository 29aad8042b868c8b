#include "framelab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace framelab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string frame_to_csv(const Frame& f) {
  std::string out = std::to_string(f.m()) + "," + std::to_string(f.n()) + "\n";
  for (int i = 0; i < f.m(); ++i) {
    for (int j = 0; j < f.n(); ++j) {
      if (j) out += ',';
      out += format_double(f.data(i, j));
    }
    out += '\n';
  }
  return out;
}

Frame frame_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("frame_from_csv: empty input");
  int m = 0, n = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &m, &n) != 2 || m < 1 || n < 1)
    throw Error("frame_from_csv: bad header, expected m,n");
  Eigen::MatrixXd data(m, n);
  for (int i = 0; i < m; ++i) {
    if (!std::getline(in, line)) throw Error("frame_from_csv: missing rows");
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ','))
        throw Error("frame_from_csv: short row");
      data(i, j) = std::stod(cell);
    }
  }
  return Frame{std::move(data)};
}

std::string histogram_to_csv(const SpectrumHistogram& h) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out += format_double(h.bin_edges[b]) + "," +
           format_double(h.bin_edges[b + 1]) + "," +
           std::to_string(h.counts[b]) + "\n";
  }
  return out;
}

std::string moments_to_csv(const std::vector<MomentEstimate>& moments) {
  std::string out = "d,value,std_error,trials\n";
  for (const auto& m : moments) {
    out += std::to_string(m.d) + "," + format_double(m.value) + "," +
           format_double(m.std_error) + "," + std::to_string(m.trials) + "\n";
  }
  return out;
}

std::string trace_to_csv(const MetricTrace& trace) {
  std::string out = "step,train_mse,test_mse,cl,coherence,loss\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.step) + "," + format_double(r.train_mse) + "," +
           format_double(r.test_mse) + "," + format_double(r.cl) + "," +
           format_double(r.coherence) + "," + format_double(r.loss) + "\n";
  }
  return out;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::string out =
      "beta,min_test_mse,final_test_mse,final_coherence,etf_mse,etf_coherence\n";
  for (const auto& row : sweep.rows) {
    out += format_double(row.beta) + "," + format_double(row.min_test_mse) +
           "," + format_double(row.final_test_mse) + "," +
           format_double(row.final_coherence) + "," +
           format_double(sweep.etf_mse) + "," +
           format_double(sweep.etf_coherence) + "\n";
  }
  return out;
}

nlohmann::ordered_json estimate_to_json(const EstimateResult& e) {
  return nlohmann::ordered_json{{"estimate", e.estimate},
                                {"std_error", e.std_error},
                                {"trials", e.trials},
                                {"skipped_singular", e.skipped_singular},
                                {"seed", e.seed}};
}

nlohmann::ordered_json summary_to_json(const TrainSummary& s) {
  return nlohmann::ordered_json{{"beta", s.beta},
                                {"min_test_mse", s.min_test_mse},
                                {"final_test_mse", s.final_test_mse},
                                {"final_coherence", s.final_coherence}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_file: cannot open " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace framelab
