#ifndef RBWALK_THEORY_HPP
#define RBWALK_THEORY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rbwalk/noise.hpp"
#include "rbwalk/pulses.hpp"
#include "rbwalk/rotations.hpp"

// Analytic machinery connecting physical noise to sequence survival
// statistics: per-gate error maps, random-walk steps in Pauli-error space,
// closed-form step moments with a brute-force enumeration oracle, the
// survival-probability moment and Gamma-distribution predictions, and the
// long-form variance expressions for concurrent detuning noise.

namespace rbwalk::theory {

enum class Regime { kCorrelated, kUncorrelated, kMixed };

// Physical error model generating the walk steps.
enum class StepModel {
  kInterleavedDephasing,  // unit sigma_z kick accompanying every gate
  kConcurrentDetuning,    // off-resonance during the drive
  kOverRotation,          // fractional Rabi-rate error during the drive
};

// Rate at which the (uncorrelated) noise changes value.
enum class NoiseBandwidth {
  kPerGate,  // one value per virtual gate
  kPerPi2,   // one value per primitive pi/2-time of lab time
};

// ---------------------------------------------------------------------------
// Error maps

struct ErrorMap {
  Mat2 lambda;       // exact error operator: noisy gate = lambda * ideal gate
  Vec3 error_vector; // Pauli coefficients of the exact log, lambda=exp(i v.s)
  double angle;      // |v|, rotation half-angle of the error
};

// Exact error map of one Clifford under the given channel. `noise_values`
// holds one entry per pi/2 grid cell of the gate (2 for waits and pi cores, 1
// for pi/2 cores, 0 acceptable for pure-z); a single entry is broadcast as a
// static value. Throws std::domain_error if the error angle reaches pi/2
// (log branch ambiguity - noise far too strong for the walk picture).
ErrorMap error_map(const CliffordElement& g, std::span<const double> noise_values,
                   NoiseChannel channel);

// First-order error vector per unit noise for one static value across the
// gate (closed form).
Vec3 unit_noise_error(const CliffordElement& g, NoiseChannel channel);

// First-order error vector of an arbitrary compiled schedule under a static
// unit noise value, from numerical differentiation of the exact log.
// Accurate to ~1e-10; works for every gate family.
Vec3 static_first_order(const PulseSchedule& s, NoiseChannel channel);

// ---------------------------------------------------------------------------
// Random walks

// Deterministic per-gate walk steps of a sequence: the unit-noise first-order
// error of each gate, toggled into the frame in which the sequence error
// accumulates as a plain sum. Independent of the noise realization.
std::vector<Vec3> walk_steps(std::span<const int> sequence, NoiseChannel channel);

struct WalkRecord {
  Vec3 r3d;              // sum of eps_j * r_j
  double r2d_norm2 = 0;  // squared length of the xy-projection
};

WalkRecord accumulate_walk(std::span<const Vec3> steps,
                           std::span<const double> eps);

// Sequence-intrinsic walk (all eps = 1).
Vec3 intrinsic_walk(std::span<const Vec3> steps);

// P = 1 - <||R_2D||^2>_n ; accurate to O(sigma^4).
double survival_from_walk(std::span<const double> r2d_norm2_per_realization);

// ---------------------------------------------------------------------------
// Step moments (closed forms + enumeration oracle)

struct StepMoments {
  double e2 = 0;   // E ||r_j||^2 in the measurement plane
  double e4 = 0;   // E ||r_j||^4
  double cov = 0;  // Cov(||r_U,j||^2, ||r_C,j||^2), correlated part per-gate
};

StepMoments step_moments_closed_form(StepModel model, NoiseBandwidth bw);
// Enumerates the 24 Cliffords x 24 toggling orientations.
StepMoments step_moments_brute_force(StepModel model, NoiseBandwidth bw);

// ---------------------------------------------------------------------------
// Survival-probability statistics

struct GammaParams {
  double shape = 0;  // a
  double scale = 0;  // b
  double mean() const { return shape * scale; }
  double variance() const { return shape * scale * scale; }
};

struct MomentPrediction {
  Regime regime = Regime::kCorrelated;
  int sequence_length = 0;  // J
  int averages = 0;         // n
  double mean_error = 0;    // E[1 - P]
  double variance = 0;      // Var[P]
  GammaParams gamma;        // defined for the pure regimes
  bool strong_noise_warning = false;  // J * rho^2 > 0.1
};

// Moment table for a generic error model where sigma^4 == (sigma^2)^2; this
// is the shape used when fitting sigma_C^2, sigma_U^2 as free parameters.
MomentPrediction moments_from_sigma(Regime regime, int J, int n,
                                    double sigma_c2, double sigma_u2);

// Mixed-model variance as a function of n for fitting.
double variance_model(int J, int n, double sigma_c2, double sigma_u2);

struct NoiseTranslation {
  double sigma_c2 = 0, sigma_u2 = 0;  // enter the means
  double sigma_c4 = 0, sigma_u4 = 0;  // enter the variances
  double cross = 0;                   // sigma_C^2 sigma_U^2 cross term
};

NoiseTranslation noise_to_error(StepModel model, NoiseBandwidth uncorrelated_bw,
                                double rho_c2, double rho_u2, int J, int n);

// Full chain: physical noise -> error strengths -> survival moments.
MomentPrediction predict_from_noise(StepModel model, NoiseBandwidth bw,
                                    Regime regime, double rho_c2, double rho_u2,
                                    int J, int n);

// Generic limit-regime Gamma shapes.
GammaParams gamma_params(Regime regime, int J, int n, double sigma2);
// Concurrent-detuning Gamma shapes with the step-moment-corrected scale (the
// per-pi/2 bandwidth absorbs the sqrt(2) two-value correction).
GammaParams gamma_params_concurrent_detuning(Regime regime, int J, int n,
                                             double rho2, NoiseBandwidth bw);

// Long-form variance expressions for per-gate concurrent detuning noise;
// algebraically equal to the chained table route (asserted in tests).
double concurrent_detuning_variance(Regime regime, int J, int n, double rho2);

// ---------------------------------------------------------------------------
// Error-magnitude autocorrelation

struct AutocorrelationResult {
  std::vector<double> raw;  // E[ ||e_j|| ||e_j+lag|| ]
  std::vector<double> acf;  // mean-subtracted, acf[0] = 1
  int lag_one_over_e = 0;   // first lag with acf < 1/e
  int lag_support = 0;      // first lag with acf <= 0.05
};

// Primitive gates under block-correlated detuning noise; fresh sequence and
// noise per realization.
AutocorrelationResult error_autocorrelation(int gates, int block_gates,
                                            int max_lag, int realizations,
                                            std::uint64_t seed);

}  // namespace rbwalk::theory

#endif
