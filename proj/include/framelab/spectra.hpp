#pragma once

#include <cstdint>
#include <vector>

#include "framelab/channel.hpp"
#include "framelab/frame.hpp"

namespace framelab {

/// Pooled eigenvalue histogram of random submatrices. beta/gamma record the
/// aspect ratios (expected k/n and m/n) of the sampling experiment.
struct SpectrumHistogram {
  std::vector<double> bin_edges;  // bins+1, strictly increasing
  std::vector<long> counts;       // bins, sums to total_samples
  long total_samples = 0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct MomentEstimate {
  int d = 1;
  double value = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

/// Eigenvalues of F_s F_s^T, ascending. Throws EmptyPatternError.
std::vector<double> submatrix_eigenvalues(const Frame& f,
                                          const SamplingPattern& s);

/// Pooled histogram of submatrix eigenvalues over Bernoulli(p) patterns
/// (empty draws contribute an all-zero spectrum).
SpectrumHistogram empirical_spectrum(const Frame& f, double p, int trials,
                                     int bins, std::uint64_t seed,
                                     int threads = 1);

/// Monte-Carlo estimate of (1/n) E[Tr((F diag(b) F^T)^d)], b ~ Bernoulli(p).
/// d in {1,2,3,4}; unit-norm columns required.
MomentEstimate moment_md(const Frame& f, double p, int d, int trials,
                         std::uint64_t seed, int threads = 1);

/// Exact subset moment by enumerating all 2^n patterns (n <= 20).
double moment_md_exhaustive(const Frame& f, double p, int d);

}  // namespace framelab
