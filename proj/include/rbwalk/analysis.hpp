#ifndef RBWALK_ANALYSIS_HPP
#define RBWALK_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <vector>

// Observables extracted from survival-probability tensors: cumulative
// variance trajectories over noise averaging, reordering ensembles, error
// component fits, benchmarking decay fits, variance ratios, cross-qubit
// correlation matrices, and projection-noise bound curves.

namespace rbwalk::analysis {

// k x n survival probabilities for one (family, mode, qubit), row major.
struct SurvivalMatrix {
  int k = 0, n = 0;
  std::vector<double> p;

  double at(int ik, int in) const { return p[static_cast<std::size_t>(ik) * n + in]; }
  double& at(int ik, int in) { return p[static_cast<std::size_t>(ik) * n + in]; }
};

// V(n): variance over the k sequences of the mean of the first n realizations
// under `order` (a permutation of 0..n-1). Unbiased, k-1 divisor.
std::vector<double> cumulative_variance(const SurvivalMatrix& m,
                                        std::span<const int> order);

struct EnsembleTrajectory {
  std::vector<double> mean;            // per-n mean over reorderings
  std::vector<double> lo, hi;          // per-n min/max band
  std::vector<double> initial_values;  // V(1) of every ordering, for the SEM
};

EnsembleTrajectory shuffle_ensemble(const SurvivalMatrix& m, int reorderings,
                                    std::uint64_t seed);

struct ErrorComponentFit {
  double sigma_c2 = 0, sigma_u2 = 0;
  double se_c2 = 0, se_u2 = 0;  // rough standard errors from the curvature
  double residual = 0;          // rms log-space residual
  bool converged = false;
};

// Least squares of the mixed-regime variance model against an ensemble-mean
// trajectory, in log space, with both strengths bounded below by zero;
// multi-start to escape the shallow C/U valley.
ErrorComponentFit fit_error_components(std::span<const double> v_of_n, int J);

struct DecayFit {
  double p_rb = 0, kappa = 0;
  double se_p = 0, se_kappa = 0;
  double residual = 0;
  bool converged = false;
};

// Fit of mean survivals vs sequence length to 0.5 + (0.5 - kappa) e^{-p J}.
// Needs at least 3 distinct lengths.
DecayFit fit_rb_decay(std::span<const double> lengths,
                      std::span<const double> means);

struct VarianceRatio {
  double ratio = 0;        // V(1) / V(N), ensemble means
  double uncertainty = 0;  // SEM of the initial values / V(N)
};

VarianceRatio variance_ratio(const EnsembleTrajectory& ens);

// Pearson matrix between qubit columns; `rows` observations of `q` columns.
// Throws on a zero-variance column or fewer than 10 observations.
std::vector<double> cross_correlation(std::span<const double> data, int rows,
                                      int q);
double mean_off_diagonal(std::span<const double> corr, int q);

struct QpnBounds {
  double worst_case = 0;        // 0.25 / r
  std::vector<double> per_n;    // mean p(1-p)/r of n-averaged survivals
  std::vector<double> lower;    // per_n divided by n
};

QpnBounds qpn_bounds(const SurvivalMatrix& m, int r, int reorderings,
                     std::uint64_t seed);

// Least-squares slope of log(y) vs log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace rbwalk::analysis

#endif
