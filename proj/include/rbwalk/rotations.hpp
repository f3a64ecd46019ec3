#ifndef RBWALK_ROTATIONS_HPP
#define RBWALK_ROTATIONS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbwalk/linalg.hpp"

// The 24-element single-qubit Clifford group with a canonical decomposition of
// every element into (z-rotation, one non-z core primitive, z-rotation).
// z-rotations are instantaneous frame shifts with zero duration; all timing
// and noise coupling happens in the core. Durations are measured in units of
// a primitive pi/2 pulse at full Rabi rate.

namespace rbwalk {

struct Rotation {
  Vec3 axis;     // unit vector
  double angle;  // radians, in (-2*pi, 4*pi]

  Mat2 unitary() const;
};

// Exact exp(-i angle (axis.sigma) / 2); axis must be unit length.
Mat2 unitary_of(const Rotation& r);

enum class CoreKind {
  kWaitIdentity,  // pi-duration wait, no drive
  kPureZ,         // no core at all (frame shifts only)
  kX,             // rotation about +x by `angle`
  kY,             // rotation about +y by `angle`
};

struct CliffordCore {
  CoreKind kind = CoreKind::kPureZ;
  double angle = 0.0;  // +-pi/2 or pi for kX/kY, 0 otherwise

  // Duration in pi/2 units at full Rabi rate (waits last a pi-time).
  double duration() const;
  Mat2 unitary() const;
  bool is_pi() const;
  bool is_half_pi() const;
};

struct CliffordElement {
  int index = 0;        // 1..24
  double phi_pre = 0.0;   // z-rotation applied first
  CliffordCore core;
  double phi_post = 0.0;  // z-rotation applied last
  Mat2 u;                 // Rz(phi_post) * core * Rz(phi_pre)
  std::array<std::array<int, 3>, 3> axis_map{};  // signed-permutation action

  double duration() const { return core.duration(); }
};

struct CliffordTable {
  std::array<CliffordElement, 24> elements;         // elements[i] has index i+1
  std::array<std::array<int, 24>, 24> cayley{};     // [a-1][b-1] -> index(U_b U_a)
  std::array<int, 24> inverse{};                    // [g-1] -> index of g^-1
  int identity_index = 0;

  const CliffordElement& element(int index) const { return elements[index - 1]; }
  // Index of the element proportional to U_b * U_a (a acts on the state first).
  int compose(int a, int b) const { return cayley[a - 1][b - 1]; }
  int inverse_of(int g) const { return inverse[g - 1]; }
};

// Built once, then immutable; safe for concurrent reads. Throws
// std::logic_error if closure or the 1/4/16/3 core census fails.
const CliffordTable& clifford_table();

// Gate that closes a partial sequence back to the identity.
int inverting_gate(std::span<const int> prefix);

struct CliffordSequence {
  int length = 0;              // J
  std::vector<int> indices;    // size J, final entry inverts the prefix

  std::string to_json() const;
};

// J-1 uniform random Cliffords plus the inverting gate. Deterministic in
// (seed, sequence_index); requires J >= 2.
CliffordSequence generate_sequence(int J, std::uint64_t seed,
                                   std::uint64_t sequence_index = 0);

// Human/machine readable index <-> decomposition listing (one line per
// element) for reproducibility of serialized sequences.
std::string clifford_table_listing();

}  // namespace rbwalk

#endif
