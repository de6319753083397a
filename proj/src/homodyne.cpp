#include "noon/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "noon/rng.hpp"

namespace noon {

MatC quadrature_operator(double theta, int cutoff) {
  const MatC a = annihilation_matrix(cutoff);
  const cd ph = std::exp(cd(0.0, theta));
  MatC x = (a * std::conj(ph) + a.adjoint() * ph) / std::sqrt(2.0);
  return x;
}

cd fock_wavefunction(int m, double x, double theta) {
  if (m < 0) throw ConfigError("negative Fock index");
  // physicists' Hermite recurrence, folded together with the normalization
  const double gauss = std::exp(-x * x / 2.0) * std::pow(std::numbers::pi, -0.25);
  double h_prev = 0.0, h = 1.0;  // H_0
  double norm = 1.0;             // 1/sqrt(2^m m!) accumulated
  for (int k = 1; k <= m; ++k) {
    const double h_next = 2.0 * x * h - 2.0 * (k - 1) * h_prev;
    h_prev = h;
    h = h_next;
    norm /= std::sqrt(2.0 * k);
  }
  return std::exp(cd(0.0, m * theta)) * gauss * h * norm;
}

VecC quad_eigenket(double x, double theta, int cutoff) {
  VecC w(cutoff + 1);
  const double gauss = std::exp(-x * x / 2.0) * std::pow(std::numbers::pi, -0.25);
  double h_prev = 0.0, h = 1.0, norm = 1.0;
  for (int m = 0; m <= cutoff; ++m) {
    if (m > 0) {
      const double h_next = 2.0 * x * h - 2.0 * (m - 1) * h_prev;
      h_prev = h;
      h = h_next;
      norm /= std::sqrt(2.0 * m);
    }
    w[m] = std::exp(cd(0.0, m * theta)) * gauss * h * norm;
  }
  return w;
}

namespace {

DensityOp embed_two_mode(const DensityOp& rho, int new_cutoff) {
  const auto& sp = rho.space();
  if (new_cutoff <= sp.cutoff) return rho;
  FockSpace big{2, new_cutoff};
  MatC out = MatC::Zero(big.dim(), big.dim());
  const int d = sp.level_count();
  auto map_idx = [&](std::int64_t i) {
    return big.index_of({static_cast<int>(i / d), static_cast<int>(i % d)});
  };
  for (std::int64_t i = 0; i < sp.dim(); ++i)
    for (std::int64_t j = 0; j < sp.dim(); ++j) out(map_idx(i), map_idx(j)) = rho.matrix()(i, j);
  return DensityOp(big, std::move(out));
}

MatC matrix_power(const MatC& m, int p) {
  MatC out = MatC::Identity(m.rows(), m.cols());
  for (int i = 0; i < p; ++i) out = m * out;
  return out;
}

}  // namespace

double joint_moment(const DensityOp& two_mode, const QuadratureSetting& s, int p, int q) {
  if (two_mode.space().modes != 2) throw ConfigError("joint_moment expects a two-mode state");
  if (p < 0 || q < 0) throw ConfigError("moment powers must be nonnegative");
  // widen the cutoff so truncated operator powers act exactly on the support
  DensityOp rho = embed_two_mode(two_mode, two_mode.space().cutoff + p + q);
  const int cut = rho.space().cutoff;
  MatC xa = matrix_power(quadrature_operator(s.theta_a, cut), p);
  MatC xb = matrix_power(quadrature_operator(s.theta_b, cut), q);
  MatC t = apply_one_mode_left(rho.space(), rho.matrix(), xa, 0);
  t = apply_one_mode_left(rho.space(), t, xb, 1);
  const cd tr = t.trace();
  if (std::abs(tr.imag()) > 1e-9)
    throw NumericalGuard("joint moment acquired an imaginary part; state is not Hermitian");
  return tr.real();
}

double marginal_density(const DensityOp& single_mode, double x, double theta) {
  if (single_mode.space().modes != 1)
    throw ConfigError("marginal_density expects a single-mode state");
  VecC w = quad_eigenket(x, theta, single_mode.space().cutoff);
  return std::max(0.0, (w.adjoint() * single_mode.matrix() * w).value().real());
}

namespace {

// cumulative trapezoid CDF of the marginal over the grid
std::vector<double> marginal_cdf(const DensityOp& rho, double theta, const QuadGrid& grid) {
  std::vector<double> pdf(grid.points);
  for (int i = 0; i < grid.points; ++i) pdf[i] = marginal_density(rho, grid.x(i), theta);
  std::vector<double> cdf(grid.points, 0.0);
  const double h = grid.step();
  for (int i = 1; i < grid.points; ++i) cdf[i] = cdf[i - 1] + 0.5 * h * (pdf[i] + pdf[i - 1]);
  return cdf;
}

double invert_cdf(const std::vector<double>& cdf, const QuadGrid& grid, double u) {
  const double target = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.begin()) return grid.x(0);
  if (it == cdf.end()) return grid.x(grid.points - 1);
  const auto i = static_cast<int>(it - cdf.begin());
  const double lo = cdf[i - 1], hi = cdf[i];
  const double frac = hi > lo ? (target - lo) / (hi - lo) : 0.5;
  return grid.x(i - 1) + frac * grid.step();
}

constexpr std::size_t kChunk = 4096;

}  // namespace

QuadratureDataset sample_homodyne(const DensityOp& single_mode, int mode_id, double theta,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const QuadGrid& grid) {
  if (n_samples < 1) throw ConfigError("need at least one sample");
  const double tr = single_mode.trace();
  if (std::abs(tr - 1.0) > 1e-6) throw ConfigError("state must be normalized before sampling");
  const auto cdf = marginal_cdf(single_mode, theta, grid);
  QuadratureDataset out;
  out.seed = seed;
  out.records.reserve(n_samples);
  for (std::size_t start = 0; start < n_samples; start += kChunk) {
    Rng rng(chunk_seed(seed, start / kChunk));
    const std::size_t end = std::min(n_samples, start + kChunk);
    for (std::size_t i = start; i < end; ++i)
      out.records.push_back({mode_id, theta, invert_cdf(cdf, grid, rng.uniform01())});
  }
  return out;
}

QuadratureDataset sample_homodyne_phases(const DensityOp& single_mode, int mode_id,
                                         const std::vector<double>& thetas,
                                         std::size_t n_per_phase, std::uint64_t seed,
                                         const QuadGrid& grid) {
  QuadratureDataset out;
  out.seed = seed;
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    auto part = sample_homodyne(single_mode, mode_id, thetas[t], n_per_phase,
                                chunk_seed(seed, 0xC0FFEEull + t), grid);
    out.records.insert(out.records.end(), part.records.begin(), part.records.end());
  }
  return out;
}

namespace {

// Pi_bin[m,n] = int_bin <m|x><x|n> dx by trapezoid over `sub + 1` points
MatC bin_projector(double x_lo, double x_hi, double theta, int cutoff, int sub) {
  const int d = cutoff + 1;
  MatC out = MatC::Zero(d, d);
  const double h = (x_hi - x_lo) / sub;
  for (int i = 0; i <= sub; ++i) {
    const double w = (i == 0 || i == sub) ? 0.5 * h : h;
    VecC v = quad_eigenket(x_lo + i * h, theta, cutoff);
    out.noalias() += w * (v * v.adjoint());
  }
  return out;
}

}  // namespace

JointQuadratureDataset sample_homodyne_joint(const DensityOp& two_mode,
                                             const std::vector<QuadratureSetting>& settings,
                                             std::size_t n_total, std::uint64_t seed,
                                             double bin_width, const QuadGrid& grid) {
  if (two_mode.space().modes != 2) throw ConfigError("joint sampling expects a two-mode state");
  if (settings.empty()) throw ConfigError("need at least one phase setting");
  if (n_total < settings.size()) throw ConfigError("fewer samples than phase settings");
  const int d = two_mode.space().level_count();
  const int per_bin_steps = std::max(1, static_cast<int>(std::lround(bin_width / grid.step())));
  const int n_bins = (grid.points - 1) / per_bin_steps;

  // Q[(m' d + m), (n' d + n)] = rho[(m,n),(m',n')]
  MatC q(d * d, d * d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int mp = 0; mp < d; ++mp)
        for (int np = 0; np < d; ++np)
          q(mp * d + m, np * d + n) = two_mode.matrix()(m * d + n, mp * d + np);

  JointQuadratureDataset out;
  out.seed = seed;
  out.records.reserve(n_total);
  const std::size_t base = n_total / settings.size();
  const std::size_t rem = n_total % settings.size();
  for (std::size_t si = 0; si < settings.size(); ++si) {
    const auto& s = settings[si];
    Eigen::MatrixXcd ta(n_bins, d * d), tb(n_bins, d * d);
    for (int b = 0; b < n_bins; ++b) {
      const double lo = grid.x(b * per_bin_steps), hi = grid.x((b + 1) * per_bin_steps);
      MatC pa = bin_projector(lo, hi, s.theta_a, d - 1, per_bin_steps);
      MatC pb = bin_projector(lo, hi, s.theta_b, d - 1, per_bin_steps);
      for (int mp = 0; mp < d; ++mp)
        for (int m = 0; m < d; ++m) {
          ta(b, mp * d + m) = pa(mp, m);
          tb(b, mp * d + m) = pb(mp, m);
        }
    }
    Eigen::MatrixXcd cells = ta * q * tb.transpose();  // n_bins x n_bins, Tr[rho Pi_a (x) Pi_b]
    std::vector<double> cdf(static_cast<std::size_t>(n_bins) * n_bins);
    double acc = 0.0;
    for (int ia = 0; ia < n_bins; ++ia)
      for (int ib = 0; ib < n_bins; ++ib) {
        acc += std::max(0.0, cells(ia, ib).real());
        cdf[static_cast<std::size_t>(ia) * n_bins + ib] = acc;
      }
    const std::size_t n_here = base + (si < rem ? 1 : 0);
    Rng rng(chunk_seed(seed, 0xBEEFull + si));
    for (std::size_t i = 0; i < n_here; ++i) {
      const double target = rng.uniform01() * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
      const auto cell = static_cast<std::size_t>(
          it == cdf.end() ? static_cast<long>(cdf.size()) - 1 : it - cdf.begin());
      const int ia = static_cast<int>(cell) / n_bins, ib = static_cast<int>(cell) % n_bins;
      const double xa = grid.x(ia * per_bin_steps) + rng.uniform01() * per_bin_steps * grid.step();
      const double xb = grid.x(ib * per_bin_steps) + rng.uniform01() * per_bin_steps * grid.step();
      out.records.push_back({s.theta_a, xa, s.theta_b, xb});
    }
  }
  return out;
}

ConditionResult remote_condition(const DensityOp& two_mode, int alice_mode, double theta,
                                 double x_center, double window, const QuadGrid& grid) {
  if (two_mode.space().modes != 2) throw ConfigError("remote_condition expects a two-mode state");
  if (alice_mode != 0 && alice_mode != 1) throw ConfigError("alice_mode must be 0 or 1");
  if (window < 0.0) throw ConfigError("window must be nonnegative");
  const int cut = two_mode.space().cutoff;
  const int d = cut + 1;
  const int bob = 1 - alice_mode;

  std::vector<std::pair<double, double>> nodes;  // (x, quadrature weight)
  if (window == 0.0) {
    nodes.emplace_back(x_center, 1.0);  // sharp conditioning: result is a density
  } else {
    const int sub = std::max(8, static_cast<int>(std::ceil(window / grid.step())));
    const double h = window / sub;
    for (int i = 0; i <= sub; ++i)
      nodes.emplace_back(x_center - window / 2.0 + i * h, (i == 0 || i == sub) ? 0.5 * h : h);
  }

  MatC bob_mat = MatC::Zero(d, d);
  const auto& sp = two_mode.space();
  const std::int64_t sa = sp.stride(alice_mode), sb = sp.stride(bob);
  for (const auto& [x, wq] : nodes) {
    VecC w = quad_eigenket(x, theta, cut);
    for (int n = 0; n < d; ++n)
      for (int np = 0; np < d; ++np) {
        cd acc = 0.0;
        for (int m = 0; m < d; ++m)
          for (int mp = 0; mp < d; ++mp)
            acc += std::conj(w[m]) * two_mode.matrix()(m * sa + n * sb, mp * sa + np * sb) * w[mp];
        bob_mat(n, np) += wq * acc;
      }
  }
  DensityOp unnorm(FockSpace{1, cut}, std::move(bob_mat));
  const double p = unnorm.trace();
  if (!(p > 1e-300)) return ConditionResult{DensityOp(FockSpace{1, cut}), 0.0, true};
  return ConditionResult{DensityOp(FockSpace{1, cut}, unnorm.matrix() / p), p, false};
}

double squeezing_db(const DensityOp& single_mode, double theta) {
  if (single_mode.space().modes != 1)
    throw ConfigError("squeezing_db expects a single-mode state");
  if (std::abs(single_mode.trace() - 1.0) > 1e-6)
    throw ConfigError("state must be normalized");
  // widen the cutoff so X^2 acts exactly on the support
  const int cut = single_mode.space().cutoff + 2;
  FockSpace big{1, cut};
  MatC rho = MatC::Zero(big.dim(), big.dim());
  rho.topLeftCorner(single_mode.space().dim(), single_mode.space().dim()) = single_mode.matrix();
  MatC x = quadrature_operator(theta, cut);
  const double mean = (x * rho).trace().real();
  const double second = (x * x * rho).trace().real();
  const double var = second - mean * mean;
  return 10.0 * std::log10(var / 0.5);
}

std::pair<double, double> optimal_squeezing(const DensityOp& single_mode, int scan_points) {
  double best_theta = 0.0, best = squeezing_db(single_mode, 0.0);
  for (int i = 1; i < scan_points; ++i) {
    const double th = std::numbers::pi * i / scan_points;
    const double s = squeezing_db(single_mode, th);
    if (s < best) {
      best = s;
      best_theta = th;
    }
  }
  // golden-section refinement around the best scan point
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_theta - std::numbers::pi / scan_points;
  double b = best_theta + std::numbers::pi / scan_points;
  double c = b - gr * (b - a), dpt = a + gr * (b - a);
  double fc = squeezing_db(single_mode, c), fd = squeezing_db(single_mode, dpt);
  for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
    if (fc < fd) {
      b = dpt;
      dpt = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = squeezing_db(single_mode, c);
    } else {
      a = c;
      c = dpt;
      fc = fd;
      dpt = a + gr * (b - a);
      fd = squeezing_db(single_mode, dpt);
    }
  }
  const double theta = (a + b) / 2.0;
  return {theta, squeezing_db(single_mode, theta)};
}

}  // namespace noon
