#ifndef RBWALK_PULSES_HPP
#define RBWALK_PULSES_HPP

#include <string>
#include <vector>

#include "rbwalk/rotations.hpp"

// Compilation of Clifford core primitives into piecewise-constant pulse
// schedules: plain primitive pulses or one of three composite (dynamically
// corrected) constructions. CORPSE and WAMF suppress static detuning errors,
// BB1 suppresses over-/under-rotation errors. Durations are in pi/2-time
// units (a primitive pi/2 at full Rabi rate lasts exactly 1).

namespace rbwalk {

enum class GateFamily { kPrimitive, kCorpse, kWamf, kBb1 };

const char* family_name(GateFamily f);
GateFamily family_from_name(const std::string& name);

struct PulseSegment {
  double theta = 0.0;      // rotation angle, >= 0 (sign folded into phi)
  double omega_rel = 1.0;  // Rabi rate relative to maximum, 0 marks a wait
  double phi = 0.0;        // drive phase; rotation axis (cos phi, sin phi, 0)
  double duration = 0.0;   // pi/2-time units

  bool driven() const { return omega_rel > 0.0; }
};

struct PulseSchedule {
  GateFamily family = GateFamily::kPrimitive;
  int clifford_index = 0;
  std::vector<PulseSegment> segments;
  double total_duration = 0.0;

  std::string to_json() const;
};

// Schedule realizing the element's core rotation (z frame shifts excluded).
// Pure-z Cliffords compile to an empty schedule. The identity compiles to a
// pi-duration wait for the primitive family and to an X(pi) X(-pi) rotary
// spin echo for the composite families. Throws std::invalid_argument for a
// WAMF target angle outside {pi/4, pi/2, pi}.
PulseSchedule compile(const CliffordElement& clifford, GateFamily family);

// Schedule for a bare target rotation about an in-plane axis at angle
// `axis_phi`; used directly by tests and the filter-function tools.
PulseSchedule compile_rotation(double target_angle, double axis_phi,
                               GateFamily family);

double schedule_duration(const PulseSchedule& s);

// Noise-free product of the segment unitaries.
Mat2 ideal_unitary(const PulseSchedule& s);

}  // namespace rbwalk

#endif
