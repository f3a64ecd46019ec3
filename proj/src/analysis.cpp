#include "rbwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "rbwalk/rng.hpp"
#include "rbwalk/theory.hpp"

namespace rbwalk::analysis {

namespace {

// Compact Nelder-Mead for the 2-parameter fits. Deterministic; restarts are
// the caller's job.
std::vector<double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step, int max_iter, double tol) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> pts(d + 1, x0);
  std::vector<double> val(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= d; ++i) val[i] = f(pts[i]);
  for (int it = 0; it < max_iter; ++it) {
    std::vector<std::size_t> idx(d + 1);
    for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = idx[0], worst = idx[d], second = idx[d - 1];
    if (std::abs(val[worst] - val[best]) <
        tol * (std::abs(val[best]) + 1e-300))
      break;
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j] / d;
    }
    auto blend = [&](double a) {
      std::vector<double> x(d);
      for (std::size_t j = 0; j < d; ++j)
        x[j] = centroid[j] + a * (pts[worst][j] - centroid[j]);
      return x;
    };
    const std::vector<double> refl = blend(-1.0);
    const double fr = f(refl);
    if (fr < val[best]) {
      const std::vector<double> exp_pt = blend(-2.0);
      const double fe = f(exp_pt);
      pts[worst] = fe < fr ? exp_pt : refl;
      val[worst] = std::min(fe, fr);
    } else if (fr < val[second]) {
      pts[worst] = refl;
      val[worst] = fr;
    } else {
      const std::vector<double> con = blend(0.5);
      const double fc = f(con);
      if (fc < val[worst]) {
        pts[worst] = con;
        val[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < d; ++j)
            pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          val[i] = f(pts[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (val[i] < val[best]) best = i;
  return pts[best];
}

std::vector<int> identity_order(int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  return order;
}

std::vector<int> permuted_order(int n, std::uint64_t seed, std::uint64_t which) {
  std::vector<int> order = identity_order(n);
  for (int i = n - 1; i > 0; --i) {
    const std::uint64_t key = rng::derive(
        {seed, rng::kStreamPermutation, which, static_cast<std::uint64_t>(i)});
    const int j = static_cast<int>(rng::bounded(key, i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

}  // namespace

std::vector<double> cumulative_variance(const SurvivalMatrix& m,
                                        std::span<const int> order) {
  if (m.k < 2) throw std::invalid_argument("need at least 2 sequences");
  if (static_cast<int>(order.size()) != m.n)
    throw std::invalid_argument("ordering length mismatch");
  std::vector<double> sums(m.k, 0.0);
  std::vector<double> v(m.n);
  for (int in = 0; in < m.n; ++in) {
    double mean = 0.0;
    for (int ik = 0; ik < m.k; ++ik) {
      sums[ik] += m.at(ik, order[in]);
      mean += sums[ik];
    }
    mean /= m.k;
    const double inv = 1.0 / (in + 1.0);
    double acc = 0.0;
    for (int ik = 0; ik < m.k; ++ik) {
      const double d = (sums[ik] - mean) * inv;
      acc += d * d;
    }
    v[in] = acc / (m.k - 1.0);
  }
  return v;
}

EnsembleTrajectory shuffle_ensemble(const SurvivalMatrix& m, int reorderings,
                                    std::uint64_t seed) {
  if (reorderings < 1) throw std::invalid_argument("need at least 1 reordering");
  EnsembleTrajectory ens;
  ens.mean.assign(m.n, 0.0);
  ens.lo.assign(m.n, std::numeric_limits<double>::infinity());
  ens.hi.assign(m.n, -std::numeric_limits<double>::infinity());
  ens.initial_values.reserve(reorderings);
  for (int w = 0; w < reorderings; ++w) {
    const std::vector<int> order =
        reorderings == 1 ? identity_order(m.n)
                         : permuted_order(m.n, seed, static_cast<std::uint64_t>(w));
    const std::vector<double> v = cumulative_variance(m, order);
    for (int in = 0; in < m.n; ++in) {
      ens.mean[in] += v[in];
      ens.lo[in] = std::min(ens.lo[in], v[in]);
      ens.hi[in] = std::max(ens.hi[in], v[in]);
    }
    ens.initial_values.push_back(v[0]);
  }
  for (double& x : ens.mean) x /= reorderings;
  return ens;
}

ErrorComponentFit fit_error_components(std::span<const double> v_of_n, int J) {
  const int N = static_cast<int>(v_of_n.size());
  if (N < 3) throw std::invalid_argument("trajectory too short to fit");
  std::vector<int> ns;
  std::vector<double> logv;
  for (int i = 0; i < N; ++i) {
    if (v_of_n[i] > 0.0) {
      ns.push_back(i + 1);
      logv.push_back(std::log(v_of_n[i]));
    }
  }
  if (ns.size() < 3) throw std::invalid_argument("not enough positive variances");

  auto loss = [&](const std::vector<double>& x) {
    const double sc2 = std::exp(std::clamp(x[0], -80.0, 20.0));
    const double su2 = std::exp(std::clamp(x[1], -80.0, 20.0));
    double acc = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double model = theory::variance_model(J, ns[i], sc2, su2);
      const double d = std::log(model) - logv[i];
      acc += d * d;
    }
    return acc;
  };

  // Data-implied scales: the n->inf plateau is dominated by the correlated
  // part, the n=1 value by the uncorrelated part.
  const double dJ = J;
  const double v_end = std::exp(logv.back());
  const double v_one = std::exp(logv.front());
  const double sc_scale =
      std::sqrt(std::max(v_end, 1e-30) * 4.5 / (dJ * (2.0 * dJ - 1.0)));
  const double su_scale =
      std::sqrt(std::max(v_one, 1e-30) * 4.5 / (dJ * (6.0 + 2.0 * dJ)));

  ErrorComponentFit best;
  double best_loss = std::numeric_limits<double>::infinity();
  const double factors[4] = {1.0, 1e-2, 1e-4, 1e2};  // log-spaced multi-start
  for (double fc : factors) {
    std::vector<double> x0 = {std::log(sc_scale * fc), std::log(su_scale)};
    const std::vector<double> xb = nelder_mead(loss, x0, 1.0, 600, 1e-14);
    const double lb = loss(xb);
    if (lb < best_loss) {
      best_loss = lb;
      best.sigma_c2 = std::exp(xb[0]);
      best.sigma_u2 = std::exp(xb[1]);
    }
  }
  best.residual = std::sqrt(best_loss / ns.size());
  best.converged = std::isfinite(best_loss);

  // Curvature-based standard errors in the sigma^2 coordinates.
  auto loss_sigma = [&](double sc2, double su2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double model = theory::variance_model(J, ns[i], sc2, su2);
      const double d = std::log(std::max(model, 1e-300)) - logv[i];
      acc += d * d;
    }
    return acc;
  };
  const double s2res =
      best_loss / std::max<std::size_t>(1, ns.size() - 2);
  auto curvature_se = [&](bool first) {
    const double base = first ? best.sigma_c2 : best.sigma_u2;
    const double h = std::max(base, 1e-12 * (best.sigma_c2 + best.sigma_u2)) * 1e-3;
    const double f0 = best_loss;
    const double fp = first ? loss_sigma(best.sigma_c2 + h, best.sigma_u2)
                            : loss_sigma(best.sigma_c2, best.sigma_u2 + h);
    const double fm = first ? loss_sigma(std::max(best.sigma_c2 - h, 0.0), best.sigma_u2)
                            : loss_sigma(best.sigma_c2, std::max(best.sigma_u2 - h, 0.0));
    const double second = (fp - 2.0 * f0 + fm) / (h * h);
    if (second <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 * s2res / second);
  };
  best.se_c2 = curvature_se(true);
  best.se_u2 = curvature_se(false);
  return best;
}

DecayFit fit_rb_decay(std::span<const double> lengths,
                      std::span<const double> means) {
  if (lengths.size() != means.size() || lengths.size() < 3)
    throw std::invalid_argument("need at least 3 sequence lengths");

  auto model = [](double p, double kappa, double J) {
    return 0.5 + (0.5 - kappa) * std::exp(-p * J);
  };
  auto unpack = [](const std::vector<double>& x, double& p, double& kappa) {
    p = std::exp(std::clamp(x[0], -60.0, 5.0));
    kappa = 0.5 / (1.0 + std::exp(-x[1]));
  };
  auto loss = [&](const std::vector<double>& x) {
    double p, kappa;
    unpack(x, p, kappa);
    double acc = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      const double d = model(p, kappa, lengths[i]) - means[i];
      acc += d * d;
    }
    return acc;
  };

  // heuristics: kappa from the shortest sequence, rate from the extremes
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (lengths[i] < lengths[imin]) imin = i;
    if (lengths[i] > lengths[imax]) imax = i;
  }
  const double kappa0 =
      std::clamp(1.0 - means[imin] - 1e-4, 1e-6, 0.49);
  const double a0 = std::clamp((means[imin] - 0.5) / (0.5 - kappa0), 1e-6, 1.0);
  const double a1 = std::clamp((means[imax] - 0.5) / (0.5 - kappa0), 1e-9, 1.0);
  double p0 = std::log(a0 / a1) / (lengths[imax] - lengths[imin]);
  if (!(p0 > 0.0) || !std::isfinite(p0)) p0 = 1e-4;

  DecayFit fit;
  double best_loss = std::numeric_limits<double>::infinity();
  for (double scale : {1.0, 0.1, 10.0}) {
    std::vector<double> x0 = {std::log(p0 * scale),
                              std::log(2.0 * kappa0 / (1.0 - 2.0 * kappa0))};
    std::vector<double> xb = nelder_mead(loss, x0, 0.5, 800, 1e-16);
    xb = nelder_mead(loss, xb, 0.05, 800, 1e-16);  // polish
    const double lb = loss(xb);
    if (lb < best_loss) {
      best_loss = lb;
      unpack(xb, fit.p_rb, fit.kappa);
    }
  }
  if (!std::isfinite(best_loss))
    throw std::runtime_error("benchmarking decay fit diverged");
  fit.residual = std::sqrt(best_loss / lengths.size());
  fit.converged = true;

  // curvature-based errors
  const double dof = std::max<double>(1.0, lengths.size() - 2.0);
  const double s2 = best_loss / dof;
  auto se = [&](bool first) {
    const double h = (first ? fit.p_rb : std::max(fit.kappa, 1e-6)) * 1e-4;
    auto at = [&](double dp, double dk) {
      double acc = 0.0;
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double d =
            model(fit.p_rb + dp, fit.kappa + dk, lengths[i]) - means[i];
        acc += d * d;
      }
      return acc;
    };
    const double fp = first ? at(h, 0) : at(0, h);
    const double fm = first ? at(-h, 0) : at(0, -h);
    const double second = (fp - 2.0 * best_loss + fm) / (h * h);
    if (second <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 * s2 / second);
  };
  fit.se_p = se(true);
  fit.se_kappa = se(false);
  return fit;
}

VarianceRatio variance_ratio(const EnsembleTrajectory& ens) {
  if (ens.mean.size() < 2) throw std::invalid_argument("trajectory too short");
  const double v_final = ens.mean.back();
  if (v_final <= 0.0) throw std::invalid_argument("zero final variance");
  VarianceRatio out;
  out.ratio = ens.mean.front() / v_final;
  double mean = 0.0, var = 0.0;
  for (double v : ens.initial_values) mean += v;
  mean /= ens.initial_values.size();
  for (double v : ens.initial_values) var += (v - mean) * (v - mean);
  var /= std::max<std::size_t>(1, ens.initial_values.size() - 1);
  out.uncertainty = std::sqrt(var / ens.initial_values.size()) / v_final;
  return out;
}

std::vector<double> cross_correlation(std::span<const double> data, int rows,
                                      int q) {
  if (q < 2) throw std::invalid_argument("need at least two qubits");
  if (rows < 10) throw std::invalid_argument("need at least 10 observations");
  if (static_cast<int>(data.size()) != rows * q)
    throw std::invalid_argument("data size mismatch");
  std::vector<double> mean(q, 0.0), sd(q, 0.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < q; ++j) mean[j] += data[i * q + j];
  for (double& m : mean) m /= rows;
  std::vector<double> cov(static_cast<std::size_t>(q) * q, 0.0);
  for (int i = 0; i < rows; ++i) {
    for (int a = 0; a < q; ++a) {
      const double da = data[i * q + a] - mean[a];
      for (int b = a; b < q; ++b)
        cov[a * q + b] += da * (data[i * q + b] - mean[b]);
    }
  }
  for (int a = 0; a < q; ++a) {
    if (cov[a * q + a] <= 0.0)
      throw std::invalid_argument("zero-variance qubit column");
    sd[a] = std::sqrt(cov[a * q + a]);
  }
  std::vector<double> corr(static_cast<std::size_t>(q) * q, 1.0);
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b) {
      const double c = cov[a * q + b] / (sd[a] * sd[b]);
      corr[a * q + b] = c;
      corr[b * q + a] = c;
    }
  return corr;
}

double mean_off_diagonal(std::span<const double> corr, int q) {
  double acc = 0.0;
  int cnt = 0;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      if (a != b) {
        acc += corr[a * q + b];
        ++cnt;
      }
  return acc / cnt;
}

QpnBounds qpn_bounds(const SurvivalMatrix& m, int r, int reorderings,
                     std::uint64_t seed) {
  if (r < 1) throw std::invalid_argument("shot count must be >= 1");
  QpnBounds out;
  out.worst_case = 0.25 / r;
  out.per_n.assign(m.n, 0.0);
  out.lower.assign(m.n, 0.0);
  std::vector<double> sums(m.k);
  for (int w = 0; w < reorderings; ++w) {
    const std::vector<int> order =
        reorderings == 1 ? identity_order(m.n)
                         : permuted_order(m.n, seed, static_cast<std::uint64_t>(w));
    std::fill(sums.begin(), sums.end(), 0.0);
    for (int in = 0; in < m.n; ++in) {
      double acc = 0.0;
      for (int ik = 0; ik < m.k; ++ik) {
        sums[ik] += m.at(ik, order[in]);
        const double pbar = sums[ik] / (in + 1.0);
        acc += pbar * (1.0 - pbar) / r;
      }
      out.per_n[in] += acc / m.k;
    }
  }
  for (int in = 0; in < m.n; ++in) {
    out.per_n[in] /= reorderings;
    out.lower[in] = out.per_n[in] / (in + 1.0);
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("need matching arrays of length >= 2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("not enough positive points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace rbwalk::analysis
