#ifndef RBWALK_ENGINE_HPP
#define RBWALK_ENGINE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rbwalk/noise.hpp"
#include "rbwalk/pulses.hpp"
#include "rbwalk/rotations.hpp"

// Exact Monte Carlo evolution of compiled randomized-benchmarking sequences
// under piecewise-constant noise traces. Work decomposes into independent
// (sequence, realization) cells; each cell is a pure function of the config,
// so the result tensor is bit-identical for any worker count.

namespace rbwalk::engine {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int k = 1;  // number of random sequences
  int J = 2;  // gates per sequence
  int n = 1;  // noise realizations per sequence
  int r = 0;  // shots per cell; 0 = report exact probabilities
  GateFamily family = GateFamily::kPrimitive;
  NoiseSpec noise;
  int qubits = 1;
  double amplitude_gradient = 0.0;      // g_q = 1 + (q-1) * gradient
  double detuning_offset_step = 0.0;    // optional per-qubit static detuning
  double spam_kappa = 0.0;              // symmetric prep/measure flip
  std::uint64_t seed = 1;
  std::uint64_t noise_stream = 0;  // separates noise modes sharing sequences
  int workers = 1;
  std::uint64_t budget_cells = 400'000'000ull;  // guard on k*J*n*qubits

  void validate() const;  // throws std::invalid_argument / BudgetExceeded
};

struct ExperimentResult {
  int k = 0, n = 0, qubits = 0, r = 0;
  GateFamily family = GateFamily::kPrimitive;
  std::vector<double> exact;    // survival probabilities, [k][n][q]
  std::vector<double> sampled;  // shot estimates when r > 0, else empty
  std::vector<std::vector<int>> sequences;
  double mean_sequence_duration = 0.0;  // wall-model units per sequence
  std::uint64_t seed = 0;

  std::size_t offset(int ik, int in, int iq) const {
    return (static_cast<std::size_t>(ik) * n + in) * qubits + iq;
  }
  double survival(int ik, int in, int iq) const {
    return (r > 0 ? sampled : exact)[offset(ik, in, iq)];
  }
};

// Per-qubit view of the noise during one cell.
struct NoiseContext {
  NoiseTrace trace;
  double amplitude_scale = 1.0;  // multiplies every drive angle
  double detuning_offset = 0.0;  // static detuning added to the trace
};

// Exact propagator of one schedule starting at lab time `t0`; segments are
// split on the pi/2 grid so the trace is constant per sub-segment.
Mat2 evolve(const PulseSchedule& schedule, const NoiseContext& ctx,
            int gate_index, double t0);

// Survival probability |<0| U_eff |0>|^2 of one compiled sequence.
// `schedules` maps Clifford index (1..24) to its compiled schedule.
double run_sequence(std::span<const int> sequence,
                    std::span<const PulseSchedule> schedules,
                    const NoiseContext& ctx);

// Schedules for all 24 Cliffords of one family (index 0 unused).
std::vector<PulseSchedule> compile_family(GateFamily family);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Binomial(r, p) / r with a counter-derived key.
double qpn_sample(double p, int r, std::uint64_t key);

}  // namespace rbwalk::engine

#endif
