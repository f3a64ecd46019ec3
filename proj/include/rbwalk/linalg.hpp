#ifndef RBWALK_LINALG_HPP
#define RBWALK_LINALG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

// Small fixed-size complex linear algebra for SU(2) work. Everything here is
// value-type and allocation-free; the simulator's hot loop lives on Mat2.

namespace rbwalk {

using cxd = std::complex<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  // squared length of the projection onto the xy-plane
  double norm2_xy() const { return x * x + y * y; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// 2x2 complex matrix, row major: [a b; c d].
struct Mat2 {
  cxd a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  static Mat2 identity() { return {}; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
            c * o.b + d * o.d};
  }
  Mat2 operator+(const Mat2& o) const {
    return {a + o.a, b + o.b, c + o.c, d + o.d};
  }
  Mat2 operator*(cxd s) const { return {a * s, b * s, c * s, d * s}; }
  Mat2 adjoint() const {
    return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
  }
  cxd trace() const { return a + d; }
  cxd det() const { return a * d - b * c; }
  double frobenius2() const {
    return std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  }
};

// exp(-i theta (n.sigma)/2) for a general (not necessarily unit) generator
// vector w = theta * n: exp(-i (w.sigma)/2).
inline Mat2 su2_exp(const Vec3& w) {
  const double t = w.norm();
  double co, si;  // cos(t/2), sin(t/2)/t  (sinc form, stable near t = 0)
  if (t < 1e-8) {
    const double t2 = t * t;
    co = 1.0 - t2 / 8.0;
    si = 0.5 - t2 / 48.0;
  } else {
    co = std::cos(0.5 * t);
    si = std::sin(0.5 * t) / t;
  }
  const cxd i(0.0, 1.0);
  return {co - i * (w.z * si), (-i * w.x - w.y) * si, (-i * w.x + w.y) * si,
          co + i * (w.z * si)};
}

// Rotation by angle about a unit axis.
inline Mat2 rotation_unitary(const Vec3& axis, double angle) {
  return su2_exp(axis * angle);
}

inline Mat2 rot_x(double a) { return rotation_unitary({1, 0, 0}, a); }
inline Mat2 rot_y(double a) { return rotation_unitary({0, 1, 0}, a); }
inline Mat2 rot_z(double a) { return rotation_unitary({0, 0, 1}, a); }

// Axis-angle content of a U(2) matrix: M = e^{i phase} exp(i v.sigma) with
// |v| in [0, pi]. `pauli` holds sin(|v|) * v/|v|, `cos_half` holds cos(|v|).
struct PauliDecomposition {
  Vec3 pauli;       // sin(|v|) * unit axis
  double cos_half;  // cos(|v|)
  double phase;     // global phase
  double angle() const { return std::atan2(pauli.norm(), cos_half); }
  // First-order-ready vector v (exact log divided out of the phase).
  Vec3 log_vector() const {
    const double s = pauli.norm();
    if (s < 1e-300) return {0, 0, 0};
    return pauli * (angle() / s);
  }
};

inline PauliDecomposition pauli_decompose(const Mat2& m) {
  PauliDecomposition out;
  out.phase = 0.5 * std::arg(m.det());
  const cxd ph = std::exp(cxd(0.0, -out.phase));
  const Mat2 u = m * ph;  // special-unitary part
  out.cos_half = 0.5 * (u.a + u.d).real();
  // u = cos I + i sin (a.sigma):
  //   u.a = cos + i sin a_z, u.b = i sin a_x + sin a_y, u.c = i sin a_x - sin a_y
  out.pauli.x = 0.5 * (u.b + u.c).imag();
  out.pauli.y = 0.5 * (u.b - u.c).real();
  out.pauli.z = 0.5 * (u.a - u.d).imag();
  return out;
}

// Trace fidelity |Tr(A^dag B)| / 2, insensitive to global phase.
inline double trace_fidelity(const Mat2& a, const Mat2& b) {
  return 0.5 * std::abs((a.adjoint() * b).trace());
}

// 1 - trace fidelity, computed without catastrophic cancellation so that
// infidelities down to ~1e-30 remain meaningful.
inline double infidelity(const Mat2& a, const Mat2& b) {
  const PauliDecomposition p = pauli_decompose(b * a.adjoint());
  const double s2 = p.pauli.norm2();
  const double c = std::abs(p.cos_half);
  return s2 / (1.0 + c);
}

// Distance from unitarity, ||U^dag U - I||_F.
inline double unitarity_defect(const Mat2& u) {
  Mat2 g = u.adjoint() * u;
  g.a -= 1.0;
  g.d -= 1.0;
  return std::sqrt(g.frobenius2());
}

// Closest unitary in Frobenius norm: U (U^dag U)^{-1/2}. Used to bound drift
// in long gate products.
Mat2 reorthonormalize(const Mat2& u);

// Conjugation action on the Pauli basis: columns are the images of
// sigma_x, sigma_y, sigma_z under v.sigma -> U (v.sigma) U^dag.
std::array<Vec3, 3> pauli_conjugation(const Mat2& u);

inline Vec3 apply_conjugation(const std::array<Vec3, 3>& o, const Vec3& v) {
  return o[0] * v.x + o[1] * v.y + o[2] * v.z;
}

}  // namespace rbwalk

#endif
