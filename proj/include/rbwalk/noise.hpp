#ifndef RBWALK_NOISE_HPP
#define RBWALK_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

// Reproducible noise traces for the detuning and amplitude channels. A trace
// is a pure function of (spec, master seed, sequence index, realization
// index), evaluated lazily per grid cell, so any worker decomposition
// reproduces identical values.
//
// Correlation structure comes in three kinds:
//   full     - one value per (sequence, realization)
//   per_pi2  - fresh value every pi/2-time unit of lab time
//   block    - fresh value every M_n virtual gates (gate boundaries, not lab
//              time)
// A spec may sum several independent components (e.g. a correlated offset
// plus an uncorrelated dither).

namespace rbwalk {

enum class NoiseChannel { kDetuning, kAmplitude };

const char* channel_name(NoiseChannel c);
NoiseChannel channel_from_name(const std::string& name);

enum class CorrelationKind { kFull, kPerPi2, kBlock };

const char* correlation_name(CorrelationKind k);
CorrelationKind correlation_from_name(const std::string& name);

struct NoiseComponent {
  CorrelationKind kind = CorrelationKind::kFull;
  double rms = 0.0;     // fractional units (delta = Delta/Omega, or Rabi error)
  int block_gates = 1;  // block length in virtual gates (kBlock only)
};

struct NoiseSpec {
  NoiseChannel channel = NoiseChannel::kDetuning;
  std::vector<NoiseComponent> components;

  static NoiseSpec correlated(NoiseChannel ch, double rms);
  static NoiseSpec uncorrelated(NoiseChannel ch, double rms);
  static NoiseSpec block(NoiseChannel ch, double rms, int block_gates);
  static NoiseSpec mixed(NoiseChannel ch, double rms_correlated,
                         double rms_uncorrelated);
  // correlated component chopped into blocks of M_n virtual gates
  static NoiseSpec mixed_block(NoiseChannel ch, double rms_correlated,
                               int block_gates, double rms_uncorrelated);

  double total_variance() const;
  void validate() const;  // throws std::invalid_argument
};

// Per-qubit multipliers on the amplitude channel for simultaneous multi-qubit
// runs under one global control field. Qubit 1 is the calibration reference.
struct GradientProfile {
  std::vector<double> amplitude_scale;   // g_q = 1 + (q-1) * gamma
  std::vector<double> detuning_offset;   // optional static offsets, default 0

  int qubits() const { return static_cast<int>(amplitude_scale.size()); }
};

GradientProfile gradient_profile(int num_qubits, double gamma);

// Lazily evaluated noise trace bound to one (sequence, realization) cell.
class NoiseTrace {
 public:
  NoiseTrace() = default;
  NoiseTrace(const NoiseSpec* spec, std::uint64_t seed, std::uint64_t stream,
             std::uint64_t sequence_index, std::uint64_t realization)
      : spec_(spec),
        seed_(seed),
        stream_(stream),
        seq_(sequence_index),
        real_(realization) {}

  bool empty() const { return spec_ == nullptr || spec_->components.empty(); }
  NoiseChannel channel() const { return spec_->channel; }

  // Noise value while executing virtual gate `gate_index` during lab-time
  // cell `lab_cell` (integer pi/2-grid index).
  double value(int gate_index, std::int64_t lab_cell) const;

  std::uint64_t realization() const { return real_; }

 private:
  const NoiseSpec* spec_ = nullptr;
  std::uint64_t seed_ = 0, stream_ = 0, seq_ = 0, real_ = 0;
};

// (time, value) samples of the trace on the pi/2 grid of a sequence whose
// per-gate timing is given in `gate_durations`; for audits and CSV dumps.
struct TraceSample {
  double time;
  int gate_index;
  double value;
};
std::vector<TraceSample> materialize_trace(
    const NoiseTrace& trace, const std::vector<double>& gate_durations);

}  // namespace rbwalk

#endif
