#include "rbwalk/engine.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "rbwalk/rng.hpp"

namespace rbwalk::engine {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * kPi;
constexpr double kTimeEps = 1e-9;
constexpr int kRenormInterval = 256;  // gate products between re-unitarizations
}  // namespace

void ExperimentConfig::validate() const {
  if (k < 1 || J < 2 || n < 1 || r < 0 || qubits < 1 || workers < 1)
    throw std::invalid_argument("invalid experiment dimensions");
  if (spam_kappa < 0.0 || spam_kappa >= 0.5)
    throw std::invalid_argument("SPAM kappa must lie in [0, 0.5)");
  noise.validate();
  const std::uint64_t cells = static_cast<std::uint64_t>(k) * J * n * qubits;
  if (cells > budget_cells)
    throw BudgetExceeded("experiment size " + std::to_string(cells) +
                         " exceeds budget of " + std::to_string(budget_cells) +
                         " gate-cells");
}

Mat2 evolve(const PulseSchedule& schedule, const NoiseContext& ctx,
            int gate_index, double t0) {
  const bool amp_channel =
      !ctx.trace.empty() && ctx.trace.channel() == NoiseChannel::kAmplitude;
  const bool det_channel =
      !ctx.trace.empty() && ctx.trace.channel() == NoiseChannel::kDetuning;
  Mat2 u = Mat2::identity();
  double t = t0;
  for (const auto& seg : schedule.segments) {
    if (seg.duration <= 0.0) continue;
    const Vec3 axis{std::cos(seg.phi), std::sin(seg.phi), 0.0};
    const double theta_rate = seg.driven() ? seg.theta / seg.duration : 0.0;
    double remaining = seg.duration;
    while (remaining > kTimeEps) {
      const auto cell = static_cast<std::int64_t>(std::floor(t + kTimeEps));
      const double dt = std::min(remaining, static_cast<double>(cell + 1) - t);
      if (dt <= kTimeEps) {  // sitting on a boundary within rounding
        t = static_cast<double>(cell + 1);
        continue;
      }
      const double noise = ctx.trace.empty() ? 0.0 : ctx.trace.value(gate_index, cell);
      double detuning = ctx.detuning_offset;
      double amp = ctx.amplitude_scale;
      if (det_channel) detuning += noise;
      if (amp_channel) amp *= 1.0 + noise;
      Vec3 w{0, 0, 0};
      if (seg.driven()) w = axis * (theta_rate * dt * amp);
      w.z += kHalfPi * dt * detuning;  // detuning phase accrues with lab time
      u = su2_exp(w) * u;
      t += dt;
      remaining -= dt;
    }
  }
  return u;
}

double run_sequence(std::span<const int> sequence,
                    std::span<const PulseSchedule> schedules,
                    const NoiseContext& ctx) {
  const CliffordTable& table = clifford_table();
  Mat2 u = Mat2::identity();
  double t = 0.0;
  int since_renorm = 0;
  for (std::size_t j = 0; j < sequence.size(); ++j) {
    const CliffordElement& e = table.element(sequence[j]);
    const PulseSchedule& s = schedules[sequence[j]];
    if (e.phi_pre != 0.0) u = rot_z(e.phi_pre) * u;
    if (!s.segments.empty()) {
      u = evolve(s, ctx, static_cast<int>(j), t) * u;
      t += s.total_duration;
    }
    if (e.phi_post != 0.0) u = rot_z(e.phi_post) * u;
    if (++since_renorm == kRenormInterval) {
      u = reorthonormalize(u);
      since_renorm = 0;
    }
  }
  return std::norm(u.a);  // |<0|U|0>|^2
}

std::vector<PulseSchedule> compile_family(GateFamily family) {
  const CliffordTable& table = clifford_table();
  std::vector<PulseSchedule> out(25);
  for (const auto& e : table.elements) out[e.index] = compile(e, family);
  return out;
}

double qpn_sample(double p, int r, std::uint64_t key) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability outside [0,1]");
  if (r < 1) throw std::invalid_argument("shot count must be >= 1");
  int hits = 0;
  for (int i = 0; i < r; ++i)
    if (rng::u01(rng::derive({key, static_cast<std::uint64_t>(i)})) < p) ++hits;
  return static_cast<double>(hits) / static_cast<double>(r);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<PulseSchedule> schedules = compile_family(cfg.family);
  const GradientProfile grad = gradient_profile(cfg.qubits, cfg.amplitude_gradient);

  ExperimentResult res;
  res.k = cfg.k;
  res.n = cfg.n;
  res.qubits = cfg.qubits;
  res.r = cfg.r;
  res.family = cfg.family;
  res.seed = cfg.seed;
  res.exact.resize(static_cast<std::size_t>(cfg.k) * cfg.n * cfg.qubits);
  if (cfg.r > 0) res.sampled.resize(res.exact.size());

  res.sequences.reserve(cfg.k);
  double duration_sum = 0.0;
  for (int ik = 0; ik < cfg.k; ++ik) {
    CliffordSequence seq =
        generate_sequence(cfg.J, cfg.seed, static_cast<std::uint64_t>(ik));
    for (int idx : seq.indices) duration_sum += schedules[idx].total_duration;
    res.sequences.push_back(std::move(seq.indices));
  }
  res.mean_sequence_duration = duration_sum / cfg.k;

  const std::size_t total_cells = static_cast<std::size_t>(cfg.k) * cfg.n;
  auto run_cell = [&](std::size_t cell) {
    const int ik = static_cast<int>(cell / cfg.n);
    const int in = static_cast<int>(cell % cfg.n);
    const NoiseTrace trace(&cfg.noise, cfg.seed, cfg.noise_stream,
                           static_cast<std::uint64_t>(ik),
                           static_cast<std::uint64_t>(in));
    for (int iq = 0; iq < cfg.qubits; ++iq) {
      NoiseContext ctx;
      ctx.trace = trace;
      ctx.amplitude_scale = grad.amplitude_scale[iq];
      ctx.detuning_offset = cfg.detuning_offset_step * iq;
      double p = run_sequence(res.sequences[ik], schedules, ctx);
      if (p < 0.0) p = 0.0;
      if (p > 1.0) p = 1.0;
      if (cfg.spam_kappa > 0.0)
        p = cfg.spam_kappa + (1.0 - 2.0 * cfg.spam_kappa) * p;
      const std::size_t at = res.offset(ik, in, iq);
      res.exact[at] = p;
      if (cfg.r > 0) {
        const std::uint64_t key =
            rng::derive({cfg.seed, rng::kStreamShots, cfg.noise_stream,
                         static_cast<std::uint64_t>(ik),
                         static_cast<std::uint64_t>(in),
                         static_cast<std::uint64_t>(iq)});
        res.sampled[at] = qpn_sample(p, cfg.r, key);
      }
    }
  };

  const int workers = std::min<int>(cfg.workers, static_cast<int>(total_cells));
  if (workers <= 1) {
    for (std::size_t c = 0; c < total_cells; ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t c = next.fetch_add(1);
          if (c >= total_cells) return;
          run_cell(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return res;
}

}  // namespace rbwalk::engine
