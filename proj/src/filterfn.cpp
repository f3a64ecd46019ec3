#include "rbwalk/filterfn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rbwalk::filterfn {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * kPi;
using cxd = std::complex<double>;

// int_0^L exp(i c u) du, stable for small |c| L.
cxd phase_integral(double c, double L) {
  const double cl = c * L;
  if (std::abs(cl) < 1e-6) {
    // series in (cL): L (1 + i cL/2 - (cL)^2/6 - i (cL)^3/24)
    return L * cxd(1.0 - cl * cl / 6.0, 0.5 * cl - cl * cl * cl / 24.0);
  }
  return (std::exp(cxd(0.0, cl)) - 1.0) / cxd(0.0, c);
}

}  // namespace

TogglingTrajectory toggling_trajectory(const PulseSchedule& s, NoiseChannel ch) {
  TogglingTrajectory out;
  out.channel = ch;
  Mat2 u_control = Mat2::identity();
  double t = 0.0;
  for (const auto& seg : s.segments) {
    if (seg.duration <= 0.0) continue;
    TrajectorySegment ts;
    ts.t0 = t;
    ts.t1 = t + seg.duration;
    const auto inv_frame = pauli_conjugation(u_control.adjoint());
    if (ch == NoiseChannel::kDetuning) {
      const Vec3 r_start = apply_conjugation(inv_frame, {0, 0, 1});
      ts.weight = 0.25 * kPi;  // detuning phase rate per unit noise, halved
      if (seg.driven()) {
        const Vec3 axis{std::cos(seg.phi), std::sin(seg.phi), 0.0};
        const Vec3 m = apply_conjugation(inv_frame, axis);  // toggled drive axis
        ts.omega = seg.omega_rel * kHalfPi;
        ts.c0 = m * m.dot(r_start);
        ts.c1 = r_start - ts.c0;
        ts.c2 = m.cross(r_start) * -1.0;  // R precesses about m with rate -omega
      } else {
        ts.c0 = r_start;  // free evolution: coupling operator is static
      }
    } else {
      // Over-rotation couples along the toggled drive axis; constant within a
      // segment because the drive commutes with itself. Waits do not couple.
      if (seg.driven()) {
        const Vec3 axis{std::cos(seg.phi), std::sin(seg.phi), 0.0};
        ts.c0 = apply_conjugation(inv_frame, axis);
        ts.weight = 0.25 * kPi * seg.omega_rel;
      }
    }
    out.segments.push_back(ts);
    // advance the control propagator through the segment
    if (seg.driven()) {
      const Vec3 axis{std::cos(seg.phi), std::sin(seg.phi), 0.0};
      u_control = rotation_unitary(axis, seg.theta) * u_control;
    }
    t += seg.duration;
  }
  out.total_time = t;
  return out;
}

Vec3 TogglingTrajectory::value(double t) const {
  for (const auto& seg : segments) {
    if (t < seg.t0 - 1e-12 || t > seg.t1 + 1e-12) continue;
    const double u = std::min(std::max(t - seg.t0, 0.0), seg.duration());
    return seg.c0 + seg.c1 * std::cos(seg.omega * u) +
           seg.c2 * std::sin(seg.omega * u);
  }
  throw std::out_of_range("time outside the trajectory window");
}

std::array<cxd, 3> transfer_at(const TogglingTrajectory& traj, double omega) {
  std::array<cxd, 3> g{};
  for (const auto& seg : traj.segments) {
    if (seg.weight == 0.0) continue;
    const double L = seg.duration();
    const cxd lead = seg.weight * std::exp(cxd(0.0, omega * seg.t0));
    const cxd e0 = phase_integral(omega, L);
    cxd ec(0.0, 0.0), es(0.0, 0.0);
    if (seg.omega != 0.0) {
      const cxd ep = phase_integral(omega + seg.omega, L);
      const cxd em = phase_integral(omega - seg.omega, L);
      ec = 0.5 * (ep + em);
      es = cxd(0.0, -0.5) * (ep - em);
    } else {
      ec = e0;  // cos(0 u) term; sin term vanishes with c2 unused
    }
    const double* c0 = &seg.c0.x;
    const double* c1 = &seg.c1.x;
    const double* c2 = &seg.c2.x;
    for (int k = 0; k < 3; ++k)
      g[k] += lead * (c0[k] * e0 + (seg.omega != 0.0 ? c1[k] * ec + c2[k] * es
                                                     : cxd(0.0, 0.0)));
  }
  return g;
}

Spectrum filter_transfer(const TogglingTrajectory& traj,
                         std::span<const double> omega_grid) {
  Spectrum out;
  out.omega.assign(omega_grid.begin(), omega_grid.end());
  out.g.reserve(omega_grid.size());
  for (double w : omega_grid) out.g.push_back(transfer_at(traj, w));
  return out;
}

Vec3 dc_vector(const TogglingTrajectory& traj) {
  const auto g0 = transfer_at(traj, 0.0);
  return {g0[0].real(), g0[1].real(), g0[2].real()};
}

double time_domain_power(const TogglingTrajectory& traj) {
  double acc = 0.0;
  for (const auto& seg : traj.segments) {
    if (seg.weight == 0.0) continue;
    // ||R||^2 is constant within a segment: c1, c2 are orthogonal to c0 and
    // of equal length, so |R|^2 = |c0|^2 + |c1|^2.
    const double r2 = seg.c0.norm2() + seg.c1.norm2();
    acc += seg.weight * seg.weight * r2 * seg.duration();
  }
  return acc;
}

std::vector<double> one_over_f_spectrum(std::span<const double> omega_grid,
                                        double omega_min) {
  if (omega_min <= 0.0) throw std::invalid_argument("cutoff must be positive");
  std::vector<double> s;
  s.reserve(omega_grid.size());
  for (double w : omega_grid) s.push_back(1.0 / std::max(std::abs(w), omega_min));
  return s;
}

std::vector<double> effective_error_spectrum(const Spectrum& spec,
                                             std::span<const double> s_of_omega) {
  if (s_of_omega.size() != spec.omega.size())
    throw std::invalid_argument("spectrum grids differ in length");
  std::vector<double> e(spec.omega.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (s_of_omega[i] < 0.0)
      throw std::invalid_argument("noise power spectrum must be >= 0");
    e[i] = spec.abs2(i) * s_of_omega[i];
  }
  return e;
}

double flatness_metric(std::span<const double> effective_spectrum) {
  double lo = 1e300, hi = -1e300, mean = 0.0;
  for (double e : effective_spectrum) {
    if (e <= 0.0) throw std::invalid_argument("log flatness needs positive E");
    const double l = std::log(e);
    lo = std::min(lo, l);
    hi = std::max(hi, l);
    mean += l;
  }
  mean /= static_cast<double>(effective_spectrum.size());
  return (hi - lo) / std::abs(mean);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / (points - 1.0));
  return g;
}

}  // namespace rbwalk::filterfn
