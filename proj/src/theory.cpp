#include "rbwalk/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rbwalk/rng.hpp"

namespace rbwalk::theory {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * kPi;

Vec3 rotate_about_z(const Vec3& v, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

// Noisy core propagator with one static noise value; mirrors the engine's
// sub-segment evolution but restricted to primitive cores.
Mat2 noisy_core(const CliffordCore& core, std::span<const double> values,
                NoiseChannel channel) {
  const double duration = core.duration();
  if (duration == 0.0) return Mat2::identity();
  const int cells = static_cast<int>(std::lround(duration));  // 1 or 2
  auto value_at = [&](int c) -> double {
    if (values.empty()) return 0.0;
    if (values.size() == 1) return values[0];
    if (c >= static_cast<int>(values.size()))
      throw std::invalid_argument("noise values do not cover the gate grid");
    return values[c];
  };
  Vec3 axis{0, 0, 0};
  double theta_rate = 0.0;  // rotation angle per pi/2 cell
  if (core.kind == CoreKind::kX || core.kind == CoreKind::kY) {
    axis = core.kind == CoreKind::kX ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    theta_rate = core.angle / duration;
  }
  Mat2 u = Mat2::identity();
  for (int c = 0; c < cells; ++c) {
    const double delta = value_at(c);
    Vec3 w = axis * theta_rate;
    if (channel == NoiseChannel::kAmplitude)
      w = w * (1.0 + delta);
    else
      w.z += kHalfPi * delta;  // detuning phase accrues with lab time
    u = su2_exp(w) * u;
  }
  return u;
}

}  // namespace

ErrorMap error_map(const CliffordElement& g, std::span<const double> noise_values,
                   NoiseChannel channel) {
  const Mat2 noisy = rot_z(g.phi_post) * noisy_core(g.core, noise_values, channel) *
                     rot_z(g.phi_pre);
  ErrorMap out;
  out.lambda = noisy * g.u.adjoint();
  const PauliDecomposition p = pauli_decompose(out.lambda);
  out.angle = p.angle();
  if (out.angle >= kHalfPi)
    throw std::domain_error(
        "error rotation reached pi/2: log branch ambiguous, noise too strong "
        "for a first-order treatment");
  out.error_vector = p.log_vector();
  return out;
}

Vec3 unit_noise_error(const CliffordElement& g, NoiseChannel channel) {
  Vec3 core_vec{0, 0, 0};
  if (channel == NoiseChannel::kDetuning) {
    switch (g.core.kind) {
      case CoreKind::kWaitIdentity:
        core_vec = {0, 0, -kHalfPi};
        break;
      case CoreKind::kPureZ:
        break;
      case CoreKind::kX:
        if (g.core.is_pi())
          core_vec = {0, 1, 0};
        else
          core_vec = {0, (g.core.angle > 0 ? 0.5 : -0.5), -0.5};
        break;
      case CoreKind::kY:
        if (g.core.is_pi())
          core_vec = {-1, 0, 0};
        else
          core_vec = {(g.core.angle > 0 ? -0.5 : 0.5), 0, -0.5};
        break;
    }
  } else {
    // over-rotation: the extra rotation stays on the drive axis
    if (g.core.kind == CoreKind::kX || g.core.kind == CoreKind::kY) {
      const double mag = -0.5 * g.core.angle;
      core_vec = g.core.kind == CoreKind::kX ? Vec3{mag, 0, 0} : Vec3{0, mag, 0};
    }
  }
  return rotate_about_z(core_vec, g.phi_post);
}

Vec3 static_first_order(const PulseSchedule& s, NoiseChannel channel) {
  // central difference of the exact log in the noise strength
  const double h = 1e-5;
  auto log_at = [&](double delta) -> Vec3 {
    Mat2 u = Mat2::identity();
    for (const auto& seg : s.segments) {
      Vec3 w{0, 0, 0};
      if (seg.driven()) {
        const Vec3 axis{std::cos(seg.phi), std::sin(seg.phi), 0.0};
        w = axis * seg.theta;
        if (channel == NoiseChannel::kAmplitude) w = w * (1.0 + delta);
      }
      if (channel == NoiseChannel::kDetuning) w.z += kHalfPi * seg.duration * delta;
      u = su2_exp(w) * u;
    }
    const Mat2 lambda = u * ideal_unitary(s).adjoint();
    return pauli_decompose(lambda).log_vector();
  };
  const Vec3 plus = log_at(h), minus = log_at(-h);
  return (plus - minus) * (0.5 / h);
}

std::vector<Vec3> walk_steps(std::span<const int> sequence, NoiseChannel channel) {
  const CliffordTable& table = clifford_table();
  std::vector<Vec3> steps;
  steps.reserve(sequence.size());
  Mat2 prefix = Mat2::identity();  // ideal product including the current gate
  for (int idx : sequence) {
    const CliffordElement& g = table.element(idx);
    prefix = g.u * prefix;
    const auto frame = pauli_conjugation(prefix.adjoint());
    steps.push_back(apply_conjugation(frame, unit_noise_error(g, channel)));
  }
  return steps;
}

WalkRecord accumulate_walk(std::span<const Vec3> steps,
                           std::span<const double> eps) {
  if (steps.size() != eps.size())
    throw std::invalid_argument("walk steps and error values differ in length");
  WalkRecord rec;
  for (size_t j = 0; j < steps.size(); ++j) rec.r3d += steps[j] * eps[j];
  rec.r2d_norm2 = rec.r3d.norm2_xy();
  return rec;
}

Vec3 intrinsic_walk(std::span<const Vec3> steps) {
  Vec3 v;
  for (const auto& s : steps) v += s;
  return v;
}

double survival_from_walk(std::span<const double> r2d_norm2_per_realization) {
  double acc = 0.0;
  for (double v : r2d_norm2_per_realization) acc += v;
  return 1.0 - acc / static_cast<double>(r2d_norm2_per_realization.size());
}

// ---------------------------------------------------------------------------
// Step moments

StepMoments step_moments_closed_form(StepModel model, NoiseBandwidth bw) {
  const double pi2 = kPi * kPi;
  const double pi4 = pi2 * pi2;
  switch (model) {
    case StepModel::kInterleavedDephasing:
      return {2.0 / 3.0, 2.0 / 3.0, 2.0 / 9.0};
    case StepModel::kConcurrentDetuning: {
      const double e2_gate = (2.0 / 3.0) * (0.5 + pi2 / 96.0);
      if (bw == NoiseBandwidth::kPerGate) {
        const double e4 = (2.0 / 3.0) * (7.0 / 24.0 + pi4 / 384.0);
        return {e2_gate, e4, e4 - e2_gate * e2_gate};
      }
      const double e2 = (2.0 / 3.0) * (0.5 + pi2 / 192.0);
      const double e4 = (2.0 / 3.0) * (0.25 + pi4 / 1536.0);
      const double eprod = 17.0 / 108.0 + pi4 / 1152.0;
      return {e2, e4, eprod - e2 * e2_gate};
    }
    case StepModel::kOverRotation:
      if (bw == NoiseBandwidth::kPerGate)
        return {pi2 / 18.0, 5.0 * pi4 / 576.0, 29.0 * pi4 / 5184.0};
      return {pi2 / 36.0, 5.0 * pi4 / 2304.0, 29.0 * pi4 / 10368.0};
  }
  throw std::logic_error("unreachable");
}

namespace {

// Unit-noise step components of one gate. Components carry statistically
// independent noise values, so squared step lengths add. With per-pi/2
// bandwidth the two values seen by a pi-length gate combine pairwise into
// sqrt(2)-scaled effective values (delta_1 +- delta_2 ~ sqrt(2) N(0, rho^2)).
struct GateStepStructure {
  std::vector<Vec3> components;
  // Orientation of the correlated (gate-static) error relative to the
  // uncorrelated components: shared toggling frame or independent.
  bool shared_frame = true;
};

GateStepStructure step_structure(const CliffordElement& g, StepModel model,
                                 NoiseBandwidth bw) {
  GateStepStructure out;
  const bool pi_core = g.core.is_pi();
  const bool half_core = g.core.is_half_pi();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (model) {
    case StepModel::kInterleavedDephasing:
      out.components.push_back({0, 0, 1});
      break;
    case StepModel::kConcurrentDetuning:
      if (g.core.kind == CoreKind::kWaitIdentity) {
        out.components.push_back(
            {0, 0, bw == NoiseBandwidth::kPerGate ? kHalfPi : kHalfPi * inv_sqrt2});
      } else if (pi_core) {
        if (bw == NoiseBandwidth::kPerGate) {
          out.components.push_back({0, 1, 0});
        } else {
          out.components.push_back({0, inv_sqrt2, 0});
          out.components.push_back({0, 0, inv_sqrt2});
          out.shared_frame = false;
        }
      } else if (half_core) {
        out.components.push_back({0, 0.5, -0.5});
      }
      break;
    case StepModel::kOverRotation: {
      const double scale = bw == NoiseBandwidth::kPerGate ? 1.0 : inv_sqrt2;
      if (pi_core)
        out.components.push_back({scale * kHalfPi, 0, 0});
      else if (half_core)
        out.components.push_back({scale * kHalfPi * 0.5, 0, 0});
      break;
    }
  }
  return out;
}

Vec3 correlated_vector(const CliffordElement& g, StepModel model) {
  if (model == StepModel::kInterleavedDephasing) return {0, 0, 1};
  if (model == StepModel::kConcurrentDetuning) {
    if (g.core.kind == CoreKind::kWaitIdentity) return {0, 0, kHalfPi};
    if (g.core.is_pi()) return {0, 1, 0};
    if (g.core.is_half_pi()) return {0, 0.5, -0.5};
    return {0, 0, 0};
  }
  if (g.core.is_pi()) return {kHalfPi, 0, 0};
  if (g.core.is_half_pi()) return {0.5 * kHalfPi, 0, 0};
  return {0, 0, 0};
}

}  // namespace

StepMoments step_moments_brute_force(StepModel model, NoiseBandwidth bw) {
  const CliffordTable& table = clifford_table();
  // Toggling orientations: the conjugation action of every group element.
  std::vector<std::array<Vec3, 3>> frames;
  frames.reserve(24);
  for (const auto& e : table.elements) frames.push_back(pauli_conjugation(e.u));

  auto xy2 = [](const Vec3& v) { return v.norm2_xy(); };

  double e2 = 0, e4 = 0, eprod = 0, e2c = 0;
  for (const auto& g : table.elements) {
    const GateStepStructure s = step_structure(g, model, bw);
    const Vec3 vc = correlated_vector(g, model);
    double su2 = 0, su4 = 0, sc2 = 0, sprod = 0;
    for (const auto& f : frames) {
      double r2 = 0;
      for (const auto& c : s.components) r2 += xy2(apply_conjugation(f, c));
      const double rc2 = xy2(apply_conjugation(f, vc));
      su2 += r2;
      su4 += r2 * r2;
      sc2 += rc2;
      if (s.shared_frame) sprod += r2 * rc2;
    }
    su2 /= 24.0;
    su4 /= 24.0;
    sc2 /= 24.0;
    sprod = s.shared_frame ? sprod / 24.0 : su2 * sc2;
    e2 += su2;
    e4 += su4;
    e2c += sc2;
    eprod += sprod;
  }
  e2 /= 24.0;
  e4 /= 24.0;
  e2c /= 24.0;
  eprod /= 24.0;
  return {e2, e4, eprod - e2 * e2c};
}

// ---------------------------------------------------------------------------
// Survival statistics

MomentPrediction moments_from_sigma(Regime regime, int J, int n, double sigma_c2,
                                    double sigma_u2) {
  if (J < 1 || n < 1) throw std::invalid_argument("J and n must be >= 1");
  if (sigma_c2 < 0 || sigma_u2 < 0)
    throw std::invalid_argument("error strengths must be >= 0");
  MomentPrediction out;
  out.regime = regime;
  out.sequence_length = J;
  out.averages = n;
  const double dJ = J, dn = n;
  const double var_c =
      (2.0 / 9.0) * ((dn + 2.0) / dn) * dJ * (2.0 * dJ - 1.0) * sigma_c2 * sigma_c2;
  const double var_u =
      (2.0 / (9.0 * dn)) * dJ * (4.0 + 2.0 * dJ + dn) * sigma_u2 * sigma_u2;
  switch (regime) {
    case Regime::kCorrelated:
      out.mean_error = (2.0 / 3.0) * dJ * sigma_c2;
      out.variance = var_c;
      out.gamma = gamma_params(regime, J, n, sigma_c2);
      break;
    case Regime::kUncorrelated:
      out.mean_error = (2.0 / 3.0) * dJ * sigma_u2;
      out.variance = var_u;
      out.gamma = gamma_params(regime, J, n, sigma_u2);
      break;
    case Regime::kMixed:
      out.mean_error = (2.0 / 3.0) * dJ * (sigma_c2 + sigma_u2);
      out.variance = var_c + var_u + (4.0 / 9.0) * dJ * sigma_c2 * sigma_u2;
      break;
  }
  return out;
}

double variance_model(int J, int n, double sigma_c2, double sigma_u2) {
  return moments_from_sigma(Regime::kMixed, J, n, sigma_c2, sigma_u2).variance;
}

NoiseTranslation noise_to_error(StepModel model, NoiseBandwidth uncorrelated_bw,
                                double rho_c2, double rho_u2, int J, int n) {
  if (rho_c2 < 0 || rho_u2 < 0)
    throw std::invalid_argument("noise strengths must be >= 0");
  const StepMoments mc = step_moments_closed_form(model, NoiseBandwidth::kPerGate);
  const StepMoments mu = step_moments_closed_form(model, uncorrelated_bw);
  const double dJ = J, dn = n;
  NoiseTranslation t;
  t.sigma_c2 = 1.5 * mc.e2 * rho_c2;
  t.sigma_u2 = 1.5 * mu.e2 * rho_u2;
  t.sigma_c4 = 4.5 * (mc.e4 + (dJ - 2.0) * mc.e2 * mc.e2) / (2.0 * dJ - 1.0) *
               rho_c2 * rho_c2;
  t.sigma_u4 = 4.5 *
               ((2.0 + dn) * mu.e4 + (dJ - 1.0 - dn) * mu.e2 * mu.e2) /
               (4.0 + 2.0 * dJ + dn) * rho_u2 * rho_u2;
  t.cross = 4.5 * mu.cov * rho_c2 * rho_u2;
  return t;
}

MomentPrediction predict_from_noise(StepModel model, NoiseBandwidth bw,
                                    Regime regime, double rho_c2, double rho_u2,
                                    int J, int n) {
  const NoiseTranslation t = noise_to_error(model, bw, rho_c2, rho_u2, J, n);
  const double dJ = J, dn = n;
  const double var_c = (2.0 / 9.0) * ((dn + 2.0) / dn) * dJ * (2.0 * dJ - 1.0) *
                       t.sigma_c4;
  const double var_u =
      (2.0 / (9.0 * dn)) * dJ * (4.0 + 2.0 * dJ + dn) * t.sigma_u4;
  MomentPrediction out;
  out.regime = regime;
  out.sequence_length = J;
  out.averages = n;
  switch (regime) {
    case Regime::kCorrelated:
      out.mean_error = (2.0 / 3.0) * dJ * t.sigma_c2;
      out.variance = var_c;
      out.gamma = {1.0, out.mean_error};
      out.strong_noise_warning = dJ * rho_c2 > 0.1;
      break;
    case Regime::kUncorrelated:
      out.mean_error = (2.0 / 3.0) * dJ * t.sigma_u2;
      out.variance = var_u;
      out.gamma = {dn, out.mean_error / dn};
      out.strong_noise_warning = dJ * rho_u2 > 0.1;
      break;
    case Regime::kMixed:
      out.mean_error = (2.0 / 3.0) * dJ * (t.sigma_c2 + t.sigma_u2);
      out.variance = var_c + var_u + (4.0 / 9.0) * dJ * t.cross;
      out.strong_noise_warning = dJ * (rho_c2 + rho_u2) > 0.1;
      break;
  }
  return out;
}

GammaParams gamma_params(Regime regime, int J, int n, double sigma2) {
  if (sigma2 < 0) throw std::invalid_argument("sigma^2 must be >= 0");
  const double dJ = J, dn = n;
  switch (regime) {
    case Regime::kCorrelated:
      return {1.0, (2.0 / 3.0) * dJ * sigma2};
    case Regime::kUncorrelated:
      return {dn, (2.0 / (3.0 * dn)) * dJ * sigma2};
    default:
      throw std::invalid_argument("gamma shape is defined for pure regimes only");
  }
}

GammaParams gamma_params_concurrent_detuning(Regime regime, int J, int n,
                                             double rho2, NoiseBandwidth bw) {
  const StepMoments m = step_moments_closed_form(
      StepModel::kConcurrentDetuning,
      regime == Regime::kCorrelated ? NoiseBandwidth::kPerGate : bw);
  const double mean = static_cast<double>(J) * m.e2 * rho2;
  if (regime == Regime::kCorrelated) return {1.0, mean};
  if (regime == Regime::kUncorrelated)
    return {static_cast<double>(n), mean / static_cast<double>(n)};
  throw std::invalid_argument("gamma shape is defined for pure regimes only");
}

double concurrent_detuning_variance(Regime regime, int J, int n, double rho2) {
  const double pi2 = kPi * kPi;
  const double pi4 = pi2 * pi2;
  const double c2 = 0.5 + pi2 / 96.0;          // E||r||^2 = (2/3) c2
  const double q = 7.0 / 36.0 + pi4 / 576.0;   // E||r||^4
  const double dJ = J, dn = n;
  const double lead = dJ * dJ * rho2 * rho2 / dn;
  if (regime == Regime::kUncorrelated) {
    return lead * ((4.0 / 9.0) * c2 * c2 +
                   (1.0 / dJ) * (3.0 * q - (8.0 / 9.0) * c2 * c2) +
                   ((dn - 1.0) / dJ) * (q - (4.0 / 9.0) * c2 * c2));
  }
  if (regime == Regime::kCorrelated) {
    return lead *
           ((12.0 / 9.0) * c2 * c2 +
            (1.0 / dJ) * (3.0 * q - (8.0 / 3.0) * c2 * c2) +
            (dn - 1.0) * ((4.0 / 9.0) * c2 * c2 +
                          (1.0 / dJ) * (q - (8.0 / 9.0) * c2 * c2)));
  }
  throw std::invalid_argument("closed forms cover the pure regimes only");
}

AutocorrelationResult error_autocorrelation(int gates, int block_gates,
                                            int max_lag, int realizations,
                                            std::uint64_t seed) {
  if (block_gates < 1 || gates < 2 * max_lag)
    throw std::invalid_argument("bad autocorrelation parameters");
  AutocorrelationResult out;
  std::vector<double> sum(max_lag + 1, 0.0);
  std::vector<std::int64_t> count(max_lag + 1, 0);
  double mag_sum = 0.0;
  std::int64_t mag_count = 0;
  const CliffordTable& table = clifford_table();
  std::vector<double> mags(gates);
  for (int rep = 0; rep < realizations; ++rep) {
    const CliffordSequence seq =
        generate_sequence(gates, seed, static_cast<std::uint64_t>(rep));
    for (int j = 0; j < gates; ++j) {
      const std::uint64_t key =
          rng::derive({seed, rng::kStreamNoise, 0ull,
                       static_cast<std::uint64_t>(rep),
                       static_cast<std::uint64_t>(j / block_gates)});
      const double delta = rng::gaussian(key);
      mags[j] = std::abs(delta) *
                unit_noise_error(table.element(seq.indices[j]),
                                 NoiseChannel::kDetuning)
                    .norm();
      mag_sum += mags[j];
      ++mag_count;
    }
    for (int lag = 0; lag <= max_lag; ++lag) {
      for (int j = 0; j + lag < gates; ++j) {
        sum[lag] += mags[j] * mags[j + lag];
        ++count[lag];
      }
    }
  }
  const double mean = mag_sum / static_cast<double>(mag_count);
  out.raw.resize(max_lag + 1);
  out.acf.resize(max_lag + 1);
  for (int lag = 0; lag <= max_lag; ++lag)
    out.raw[lag] = sum[lag] / static_cast<double>(count[lag]);
  const double denom = out.raw[0] - mean * mean;
  for (int lag = 0; lag <= max_lag; ++lag)
    out.acf[lag] = (out.raw[lag] - mean * mean) / denom;
  out.lag_one_over_e = max_lag;
  out.lag_support = max_lag;
  const double inv_e = std::exp(-1.0);
  for (int lag = 1; lag <= max_lag; ++lag) {
    if (out.acf[lag] < inv_e) {
      out.lag_one_over_e = lag;
      break;
    }
  }
  for (int lag = 1; lag <= max_lag; ++lag) {
    if (out.acf[lag] <= 0.05) {
      out.lag_support = lag;
      break;
    }
  }
  return out;
}

}  // namespace rbwalk::theory
