#include "rbwalk/rotations.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rbwalk/rng.hpp"

namespace rbwalk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * kPi;
}  // namespace

Mat2 unitary_of(const Rotation& r) {
  if (std::abs(r.axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("rotation axis must be unit length");
  if (r.angle <= -2.0 * kPi || r.angle > 4.0 * kPi)
    throw std::invalid_argument("rotation angle outside (-2pi, 4pi]");
  return rotation_unitary(r.axis, r.angle);
}

Mat2 Rotation::unitary() const { return unitary_of(*this); }

double CliffordCore::duration() const {
  switch (kind) {
    case CoreKind::kWaitIdentity:
      return 2.0;  // a pi-time, matching the longest driven primitive
    case CoreKind::kPureZ:
      return 0.0;
    default:
      return std::abs(angle) / kHalfPi;
  }
}

Mat2 CliffordCore::unitary() const {
  switch (kind) {
    case CoreKind::kX:
      return rot_x(angle);
    case CoreKind::kY:
      return rot_y(angle);
    default:
      return Mat2::identity();
  }
}

bool CliffordCore::is_pi() const {
  return (kind == CoreKind::kX || kind == CoreKind::kY) &&
         std::abs(std::abs(angle) - kPi) < 1e-12;
}

bool CliffordCore::is_half_pi() const {
  return (kind == CoreKind::kX || kind == CoreKind::kY) &&
         std::abs(std::abs(angle) - kHalfPi) < 1e-12;
}

namespace {

using AxisMap = std::array<std::array<int, 3>, 3>;

AxisMap axis_map_of(const Mat2& u) {
  const auto conj = pauli_conjugation(u);
  AxisMap m{};
  const Vec3 cols[3] = {conj[0], conj[1], conj[2]};
  for (int c = 0; c < 3; ++c) {
    const double v[3] = {cols[c].x, cols[c].y, cols[c].z};
    for (int r = 0; r < 3; ++r) {
      const double rounded = std::round(v[r]);
      if (std::abs(v[r] - rounded) > 1e-9)
        throw std::logic_error("Clifford conjugation is not a signed permutation");
      m[r][c] = static_cast<int>(rounded);
    }
  }
  return m;
}

AxisMap axis_map_product(const AxisMap& lhs, const AxisMap& rhs) {
  AxisMap out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k) out[r][c] += lhs[r][k] * rhs[k][c];
  return out;
}

int axis_map_key(const AxisMap& m) {
  int key = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) key = key * 3 + (m[r][c] + 1);
  return key;
}

bool is_identity_map(const AxisMap& m) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (m[r][c] != (r == c ? 1 : 0)) return false;
  return true;
}

struct Candidate {
  double phi_pre, phi_post;
  CliffordCore core;
  Mat2 u;
  int rank;  // lower wins
};

// Candidate preference: undressed before dressed, short cores before long,
// x before y, positive before negative angle.
int core_order(const CliffordCore& c) {
  if (c.kind == CoreKind::kWaitIdentity) return 0;
  if (c.kind == CoreKind::kPureZ) return 1;
  const bool y = c.kind == CoreKind::kY;
  if (std::abs(std::abs(c.angle) - kHalfPi) < 1e-12)
    return 2 + (c.angle < 0 ? 1 : 0) + (y ? 2 : 0);
  return 6 + (y ? 1 : 0);  // pi cores
}

int phi_steps(double phi) { return static_cast<int>(std::round(phi / kHalfPi)); }

CliffordTable build_table() {
  const double phis[4] = {0.0, kHalfPi, kPi, 3.0 * kHalfPi};
  std::vector<CliffordCore> cores;
  cores.push_back({CoreKind::kWaitIdentity, 0.0});
  cores.push_back({CoreKind::kPureZ, 0.0});
  for (CoreKind k : {CoreKind::kX, CoreKind::kY})
    for (double a : {kHalfPi, -kHalfPi, kPi}) cores.push_back({k, a});

  // Enumerate all Rz(post) * core * Rz(pre) products and keep the
  // best-ranked realization of each distinct group element.
  struct Slot {
    Candidate best;
    bool filled = false;
    AxisMap map;
  };
  std::vector<int> keys;
  std::vector<Slot> slots;
  auto slot_of = [&](int key) -> Slot& {
    for (size_t i = 0; i < keys.size(); ++i)
      if (keys[i] == key) return slots[i];
    keys.push_back(key);
    slots.emplace_back();
    return slots.back();
  };

  for (const auto& core : cores) {
    for (double pre : phis) {
      for (double post : phis) {
        Candidate cand;
        cand.phi_pre = pre;
        cand.phi_post = post;
        cand.core = core;
        cand.u = rot_z(post) * core.unitary() * rot_z(pre);
        const int dressing = (pre != 0.0 ? 1 : 0) + (post != 0.0 ? 1 : 0);
        cand.rank = dressing * 100 + core_order(core) * 8 +
                    phi_steps(pre) * 2 + (post != 0.0 ? 1 : 0);
        const AxisMap m = axis_map_of(cand.u);
        // Identity must live on the wait core; non-identity must not.
        const bool ident = is_identity_map(m);
        if (ident && core.kind != CoreKind::kWaitIdentity) continue;
        if (!ident && core.kind == CoreKind::kWaitIdentity) continue;
        // Pure-z elements must be expressed with a single pre-rotation.
        if (core.kind == CoreKind::kPureZ && post != 0.0) continue;
        Slot& s = slot_of(axis_map_key(m));
        if (!s.filled || cand.rank < s.best.rank) {
          s.best = cand;
          s.filled = true;
          s.map = m;
        }
      }
    }
  }

  if (keys.size() != 24)
    throw std::logic_error("Clifford enumeration produced " +
                           std::to_string(keys.size()) + " elements, expected 24");

  // Stable ordering: identity first, then pure-z, half-pi cores, pi cores,
  // each sorted by their canonical decomposition rank.
  std::vector<size_t> order(24);
  for (size_t i = 0; i < 24; ++i) order[i] = i;
  auto klass = [&](const Slot& s) {
    switch (s.best.core.kind) {
      case CoreKind::kWaitIdentity:
        return 0;
      case CoreKind::kPureZ:
        return 1;
      default:
        return s.best.core.is_half_pi() ? 2 : 3;
    }
  };
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const int ka = klass(slots[a]), kb = klass(slots[b]);
    if (ka != kb) return ka < kb;
    return slots[a].best.rank < slots[b].best.rank;
  });

  CliffordTable table;
  std::vector<int> sorted_keys(24);
  for (int i = 0; i < 24; ++i) {
    const Slot& s = slots[order[i]];
    CliffordElement e;
    e.index = i + 1;
    e.phi_pre = s.best.phi_pre;
    e.phi_post = s.best.phi_post;
    e.core = s.best.core;
    e.u = s.best.u;
    e.axis_map = s.map;
    table.elements[i] = e;
    sorted_keys[i] = keys[order[i]];
    if (is_identity_map(s.map)) table.identity_index = e.index;
  }

  // Census check: 1 wait, 3 pure-z, 16 half-pi cores, 4 pi cores.
  int n_wait = 0, n_z = 0, n_half = 0, n_pi = 0;
  for (const auto& e : table.elements) {
    if (e.core.kind == CoreKind::kWaitIdentity)
      ++n_wait;
    else if (e.core.kind == CoreKind::kPureZ)
      ++n_z;
    else if (e.core.is_half_pi())
      ++n_half;
    else if (e.core.is_pi())
      ++n_pi;
  }
  if (n_wait != 1 || n_z != 3 || n_half != 16 || n_pi != 4)
    throw std::logic_error("Clifford core census mismatch");

  auto index_of_key = [&](int key) {
    for (int i = 0; i < 24; ++i)
      if (sorted_keys[i] == key) return i + 1;
    throw std::logic_error("Clifford group not closed under composition");
  };

  for (int a = 0; a < 24; ++a) {
    for (int b = 0; b < 24; ++b) {
      const AxisMap prod = axis_map_product(table.elements[b].axis_map,
                                            table.elements[a].axis_map);
      table.cayley[a][b] = index_of_key(axis_map_key(prod));
    }
  }
  for (int g = 0; g < 24; ++g) {
    int inv = 0;
    for (int h = 1; h <= 24; ++h) {
      if (table.cayley[g][h - 1] == table.identity_index) {
        if (inv != 0) throw std::logic_error("non-unique Clifford inverse");
        inv = h;
      }
    }
    if (inv == 0) throw std::logic_error("missing Clifford inverse");
    table.inverse[g] = inv;
  }
  return table;
}

}  // namespace

const CliffordTable& clifford_table() {
  static const CliffordTable table = build_table();
  return table;
}

int inverting_gate(std::span<const int> prefix) {
  if (prefix.empty()) throw std::invalid_argument("empty sequence prefix");
  const CliffordTable& t = clifford_table();
  int acc = t.identity_index;
  for (int g : prefix) acc = t.compose(acc, g);
  return t.inverse_of(acc);
}

CliffordSequence generate_sequence(int J, std::uint64_t seed,
                                   std::uint64_t sequence_index) {
  if (J < 2) throw std::invalid_argument("sequence length must be at least 2");
  CliffordSequence seq;
  seq.length = J;
  seq.indices.resize(J);
  for (int j = 0; j < J - 1; ++j) {
    const std::uint64_t key =
        rng::derive({seed, rng::kStreamSequence, sequence_index,
                     static_cast<std::uint64_t>(j)});
    seq.indices[j] = static_cast<int>(rng::bounded(key, 24)) + 1;
  }
  seq.indices[J - 1] =
      inverting_gate(std::span<const int>(seq.indices.data(), J - 1));
  return seq;
}

std::string CliffordSequence::to_json() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < indices.size(); ++i)
    os << (i ? "," : "") << indices[i];
  os << "]";
  return os.str();
}

std::string clifford_table_listing() {
  const CliffordTable& t = clifford_table();
  std::ostringstream os;
  os << "# index  phi_pre/ (pi/2)  core  phi_post/ (pi/2)  duration\n";
  for (const auto& e : t.elements) {
    std::string core;
    switch (e.core.kind) {
      case CoreKind::kWaitIdentity:
        core = "wait(pi-time)";
        break;
      case CoreKind::kPureZ:
        core = "none";
        break;
      case CoreKind::kX:
      case CoreKind::kY:
        core = (e.core.kind == CoreKind::kX ? "X(" : "Y(");
        core += std::to_string(e.core.angle / kHalfPi);
        core += " * pi/2)";
        break;
    }
    os << e.index << '\t' << phi_steps(e.phi_pre) << '\t' << core << '\t'
       << phi_steps(e.phi_post) << '\t' << e.duration() << '\n';
  }
  return os.str();
}

}  // namespace rbwalk
