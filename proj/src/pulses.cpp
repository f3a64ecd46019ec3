#include "rbwalk/pulses.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rbwalk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * kPi;

PulseSegment driven(double theta, double omega_rel, double phi) {
  PulseSegment s;
  s.theta = theta;
  s.omega_rel = omega_rel;
  // keep phases in [0, 2pi) for readable serialization
  s.phi = std::fmod(phi, 2.0 * kPi);
  if (s.phi < 0.0) s.phi += 2.0 * kPi;
  s.duration = theta / (omega_rel * kHalfPi);
  return s;
}

PulseSegment wait(double duration) {
  PulseSegment s;
  s.theta = 0.0;
  s.omega_rel = 0.0;
  s.phi = 0.0;
  s.duration = duration;
  return s;
}

void finalize(PulseSchedule& s) {
  double total = 0.0;
  for (const auto& seg : s.segments) total += seg.duration;
  s.total_duration = total;
}

}  // namespace

const char* family_name(GateFamily f) {
  switch (f) {
    case GateFamily::kPrimitive:
      return "primitive";
    case GateFamily::kCorpse:
      return "corpse";
    case GateFamily::kWamf:
      return "wamf";
    case GateFamily::kBb1:
      return "bb1";
  }
  return "?";
}

GateFamily family_from_name(const std::string& name) {
  if (name == "primitive") return GateFamily::kPrimitive;
  if (name == "corpse") return GateFamily::kCorpse;
  if (name == "wamf") return GateFamily::kWamf;
  if (name == "bb1") return GateFamily::kBb1;
  throw std::invalid_argument("unknown gate family: " + name);
}

PulseSchedule compile_rotation(double target_angle, double axis_phi,
                               GateFamily family) {
  PulseSchedule out;
  out.family = family;
  if (target_angle == 0.0) {
    finalize(out);
    return out;
  }
  // A negative target is the same rotation about the opposite in-plane axis.
  double theta_t = target_angle;
  double base = axis_phi;
  if (theta_t < 0.0) {
    theta_t = -theta_t;
    base += kPi;
  }

  switch (family) {
    case GateFamily::kPrimitive:
      out.segments.push_back(driven(theta_t, 1.0, base));
      break;
    case GateFamily::kCorpse: {
      const double k = std::asin(0.5 * std::sin(0.5 * theta_t));
      out.segments.push_back(driven(2.0 * kPi + 0.5 * theta_t - k, 1.0, base));
      out.segments.push_back(driven(2.0 * kPi - 2.0 * k, 1.0, base + kPi));
      out.segments.push_back(driven(0.5 * theta_t - k, 1.0, base));
      break;
    }
    case GateFamily::kWamf: {
      double x0, x3;
      if (std::abs(theta_t - kPi / 4.0) < 1e-12) {
        x0 = 2.25 * kPi;
        x3 = 0.36 * kPi;
      } else if (std::abs(theta_t - kHalfPi) < 1e-12) {
        x0 = 2.5 * kPi;
        x3 = 0.64 * kPi;
      } else if (std::abs(theta_t - kPi) < 1e-12) {
        x0 = 3.0 * kPi;
        x3 = kPi;
      } else {
        throw std::invalid_argument(
            "WAMF construction is tabulated only for pi/4, pi/2 and pi");
      }
      out.segments.push_back(driven(0.25 * (x0 + x3), 1.0, base));
      out.segments.push_back(
          driven(0.5 * (x0 - x3), (x0 - x3) / (x0 + x3), base));
      out.segments.push_back(driven(0.25 * (x0 + x3), 1.0, base));
      break;
    }
    case GateFamily::kBb1: {
      const double phi_k = std::acos(-theta_t / (4.0 * kPi));
      out.segments.push_back(driven(theta_t, 1.0, base));
      out.segments.push_back(driven(kPi, 1.0, base + phi_k));
      out.segments.push_back(driven(2.0 * kPi, 1.0, base + 3.0 * phi_k));
      out.segments.push_back(driven(kPi, 1.0, base + phi_k));
      break;
    }
  }
  finalize(out);
  return out;
}

PulseSchedule compile(const CliffordElement& clifford, GateFamily family) {
  PulseSchedule out;
  switch (clifford.core.kind) {
    case CoreKind::kPureZ:
      out.family = family;
      break;
    case CoreKind::kWaitIdentity:
      out.family = family;
      if (family == GateFamily::kPrimitive) {
        out.segments.push_back(wait(2.0));
      } else {
        // rotary spin echo: X(pi) followed by X(-pi), net zero rotation but
        // first-order insensitive to detuning while idling
        out.segments.push_back(driven(kPi, 1.0, 0.0));
        out.segments.push_back(driven(kPi, 1.0, kPi));
      }
      break;
    case CoreKind::kX:
      out = compile_rotation(clifford.core.angle, 0.0, family);
      break;
    case CoreKind::kY:
      out = compile_rotation(clifford.core.angle, kHalfPi, family);
      break;
  }
  out.clifford_index = clifford.index;
  finalize(out);
  return out;
}

double schedule_duration(const PulseSchedule& s) {
  double total = 0.0;
  for (const auto& seg : s.segments) total += seg.duration;
  return total;
}

Mat2 ideal_unitary(const PulseSchedule& s) {
  Mat2 u = Mat2::identity();
  for (const auto& seg : s.segments) {
    if (!seg.driven()) continue;
    const Vec3 axis{std::cos(seg.phi), std::sin(seg.phi), 0.0};
    u = rotation_unitary(axis, seg.theta) * u;
  }
  return u;
}

std::string PulseSchedule::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"family\":\"" << family_name(family) << "\",\"clifford\":"
     << clifford_index << ",\"total_duration\":" << total_duration
     << ",\"segments\":[";
  for (size_t i = 0; i < segments.size(); ++i) {
    const auto& g = segments[i];
    os << (i ? "," : "") << "{\"theta\":" << g.theta
       << ",\"omega_rel\":" << g.omega_rel << ",\"phi\":" << g.phi
       << ",\"duration\":" << g.duration << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace rbwalk
