#include "rbwalk/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "rbwalk/rng.hpp"

namespace rbwalk {

const char* channel_name(NoiseChannel c) {
  return c == NoiseChannel::kDetuning ? "detuning" : "amplitude";
}

NoiseChannel channel_from_name(const std::string& name) {
  if (name == "detuning") return NoiseChannel::kDetuning;
  if (name == "amplitude") return NoiseChannel::kAmplitude;
  throw std::invalid_argument("unknown noise channel: " + name);
}

const char* correlation_name(CorrelationKind k) {
  switch (k) {
    case CorrelationKind::kFull:
      return "full";
    case CorrelationKind::kPerPi2:
      return "per_pi2";
    case CorrelationKind::kBlock:
      return "block";
  }
  return "?";
}

CorrelationKind correlation_from_name(const std::string& name) {
  if (name == "full") return CorrelationKind::kFull;
  if (name == "per_pi2") return CorrelationKind::kPerPi2;
  if (name == "block") return CorrelationKind::kBlock;
  throw std::invalid_argument("unknown correlation kind: " + name);
}

NoiseSpec NoiseSpec::correlated(NoiseChannel ch, double rms) {
  NoiseSpec s;
  s.channel = ch;
  s.components.push_back({CorrelationKind::kFull, rms, 1});
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::uncorrelated(NoiseChannel ch, double rms) {
  NoiseSpec s;
  s.channel = ch;
  s.components.push_back({CorrelationKind::kPerPi2, rms, 1});
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::block(NoiseChannel ch, double rms, int block_gates) {
  NoiseSpec s;
  s.channel = ch;
  s.components.push_back({CorrelationKind::kBlock, rms, block_gates});
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::mixed(NoiseChannel ch, double rms_correlated,
                           double rms_uncorrelated) {
  NoiseSpec s;
  s.channel = ch;
  s.components.push_back({CorrelationKind::kFull, rms_correlated, 1});
  s.components.push_back({CorrelationKind::kPerPi2, rms_uncorrelated, 1});
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::mixed_block(NoiseChannel ch, double rms_correlated,
                                 int block_gates, double rms_uncorrelated) {
  NoiseSpec s;
  s.channel = ch;
  s.components.push_back({CorrelationKind::kBlock, rms_correlated, block_gates});
  s.components.push_back({CorrelationKind::kPerPi2, rms_uncorrelated, 1});
  s.validate();
  return s;
}

double NoiseSpec::total_variance() const {
  double v = 0.0;
  for (const auto& c : components) v += c.rms * c.rms;
  return v;
}

void NoiseSpec::validate() const {
  for (const auto& c : components) {
    if (c.rms < 0.0) throw std::invalid_argument("noise rms must be >= 0");
    if (c.kind == CorrelationKind::kBlock && c.block_gates < 1)
      throw std::invalid_argument("block length must be >= 1 virtual gate");
  }
}

GradientProfile gradient_profile(int num_qubits, double gamma) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  if (std::abs(gamma) >= 0.05)
    throw std::invalid_argument(
        "amplitude gradient outside the sub-percent regime (|gamma| < 0.05)");
  GradientProfile p;
  p.amplitude_scale.resize(num_qubits);
  p.detuning_offset.assign(num_qubits, 0.0);
  for (int q = 0; q < num_qubits; ++q)
    p.amplitude_scale[q] = 1.0 + static_cast<double>(q) * gamma;
  return p;
}

double NoiseTrace::value(int gate_index, std::int64_t lab_cell) const {
  if (empty()) return 0.0;
  double total = 0.0;
  for (std::size_t c = 0; c < spec_->components.size(); ++c) {
    const NoiseComponent& comp = spec_->components[c];
    if (comp.rms == 0.0) continue;
    std::uint64_t idx = 0;
    switch (comp.kind) {
      case CorrelationKind::kFull:
        idx = 0;  // same key as a block covering the whole sequence
        break;
      case CorrelationKind::kBlock:
        idx = static_cast<std::uint64_t>(gate_index / comp.block_gates);
        break;
      case CorrelationKind::kPerPi2:
        idx = static_cast<std::uint64_t>(lab_cell);
        break;
    }
    const std::uint64_t key = rng::derive(
        {seed_, rng::kStreamNoise, stream_, c, seq_, real_,
         static_cast<std::uint64_t>(comp.kind == CorrelationKind::kPerPi2), idx});
    total += comp.rms * rng::gaussian(key);
  }
  return total;
}

std::vector<TraceSample> materialize_trace(
    const NoiseTrace& trace, const std::vector<double>& gate_durations) {
  std::vector<TraceSample> out;
  double t = 0.0;
  for (std::size_t j = 0; j < gate_durations.size(); ++j) {
    double remaining = gate_durations[j];
    while (remaining > 1e-12) {
      const auto cell = static_cast<std::int64_t>(std::floor(t + 1e-12));
      const double step = std::min(remaining, static_cast<double>(cell + 1) - t);
      out.push_back({t, static_cast<int>(j), trace.value(static_cast<int>(j), cell)});
      t += step;
      remaining -= step;
    }
    if (gate_durations[j] == 0.0)
      out.push_back({t, static_cast<int>(j),
                     trace.value(static_cast<int>(j),
                                 static_cast<std::int64_t>(std::floor(t + 1e-12)))});
  }
  return out;
}

}  // namespace rbwalk
