#ifndef RBWALK_FILTERFN_HPP
#define RBWALK_FILTERFN_HPP

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "rbwalk/noise.hpp"
#include "rbwalk/pulses.hpp"

// First-order filter-transfer functions of piecewise-constant pulse
// schedules. The toggling-frame trajectory of the noise coupling operator is
// piecewise sinusoidal, so every Fourier integral is evaluated in closed form
// per segment. Normalization: G(0) equals the static first-order error
// vector of the schedule at unit noise.

namespace rbwalk::filterfn {

struct TrajectorySegment {
  double t0 = 0, t1 = 0;   // lab-time window, pi/2 units
  double omega = 0;        // precession rate within the segment (rad/unit)
  Vec3 c0, c1, c2;         // R(t0+u) = c0 + c1 cos(omega u) + c2 sin(omega u)
  double weight = 0;       // coupling rate multiplying R(t)
  double duration() const { return t1 - t0; }
};

struct TogglingTrajectory {
  NoiseChannel channel = NoiseChannel::kDetuning;
  std::vector<TrajectorySegment> segments;
  double total_time = 0;

  // R(t), weight excluded; piecewise evaluation for tests and audits.
  Vec3 value(double t) const;
};

TogglingTrajectory toggling_trajectory(const PulseSchedule& s, NoiseChannel ch);

struct Spectrum {
  std::vector<double> omega;
  std::vector<std::array<std::complex<double>, 3>> g;  // per Pauli quadrature

  double abs2(std::size_t i) const {
    return std::norm(g[i][0]) + std::norm(g[i][1]) + std::norm(g[i][2]);
  }
};

std::array<std::complex<double>, 3> transfer_at(const TogglingTrajectory& traj,
                                                double omega);
Spectrum filter_transfer(const TogglingTrajectory& traj,
                         std::span<const double> omega_grid);

// G(0): the static first-order error vector at unit noise.
Vec3 dc_vector(const TogglingTrajectory& traj);

// Time-domain side of Parseval: integral of weight(t)^2 ||R(t)||^2 dt.
double time_domain_power(const TogglingTrajectory& traj);

// 1/omega power spectrum with a low-frequency cutoff (flat below the cutoff).
std::vector<double> one_over_f_spectrum(std::span<const double> omega_grid,
                                        double omega_min);

// E(omega) = |G(omega)|^2 S(omega); throws if S is negative anywhere.
std::vector<double> effective_error_spectrum(const Spectrum& spec,
                                             std::span<const double> s_of_omega);

// (max - min) / |mean| of log E over the grid.
double flatness_metric(std::span<const double> effective_spectrum);

std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace rbwalk::filterfn

#endif
