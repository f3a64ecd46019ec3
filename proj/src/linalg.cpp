#include "rbwalk/linalg.hpp"

namespace rbwalk {

Mat2 reorthonormalize(const Mat2& u) {
  // H = U^dag U is Hermitian positive definite and within rounding of I.
  // Compute H^{-1/2} analytically from its eigen-decomposition.
  const Mat2 h = u.adjoint() * u;
  const double p = h.a.real();
  const double q = h.d.real();
  const cxd r = h.b;  // h.c == conj(r)
  const double tr = p + q;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (p - q) * (p - q) + std::norm(r)));
  const double l1 = 0.5 * tr + disc;
  const double l2 = 0.5 * tr - disc;
  if (l2 <= 0.0) return u;  // degenerate input, leave untouched
  const double a1 = 1.0 / std::sqrt(l1);
  const double a2 = 1.0 / std::sqrt(l2);
  // H^{-1/2} = c0 I + c1 H with c0, c1 solving the two eigenvalue equations.
  double c1, c0;
  if (std::abs(l1 - l2) < 1e-30) {
    c1 = 0.0;
    c0 = a1;
  } else {
    c1 = (a1 - a2) / (l1 - l2);
    c0 = a1 - c1 * l1;
  }
  Mat2 hinvsqrt = h * c1;
  hinvsqrt.a += c0;
  hinvsqrt.d += c0;
  return u * hinvsqrt;
}

std::array<Vec3, 3> pauli_conjugation(const Mat2& u) {
  static const Mat2 sx{0, 1, 1, 0};
  static const Mat2 sy{0, cxd(0, -1), cxd(0, 1), 0};
  static const Mat2 sz{1, 0, 0, cxd(-1, 0)};
  const Mat2 ud = u.adjoint();
  std::array<Vec3, 3> out;
  const Mat2 basis[3] = {sx, sy, sz};
  for (int i = 0; i < 3; ++i) {
    const Mat2 m = u * basis[i] * ud;
    // Hermitian traceless: m = v.sigma
    out[i].x = m.b.real();
    out[i].y = -m.b.imag();
    out[i].z = m.a.real();
  }
  return out;
}

}  // namespace rbwalk
