#include "noon/cat.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace noon {

FockKet coherent_ket(cd alpha, int cutoff) {
  FockSpace sp{1, cutoff};
  VecC amp(sp.dim());
  cd c = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    amp[n] = c;
    c *= alpha / std::sqrt(n + 1.0);
  }
  amp /= amp.norm();
  return FockKet(sp, std::move(amp));
}

MatC squeeze_operator(double z, int cutoff) {
  const int d = cutoff + 1;
  const MatC a = annihilation_matrix(cutoff);
  const MatC a2 = a * a;
  MatC h = cd(0.0, 0.5 * z) * (a2 - a2.adjoint());  // i G, Hermitian
  Eigen::SelfAdjointEigenSolver<MatC> es((h + h.adjoint()) / 2.0);
  VecC ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::exp(cd(0.0, -es.eigenvalues()[i]));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

FockKet squeezed_css_state(const CssParams& p, int cutoff) {
  if (p.parity != 1 && p.parity != -1) throw ConfigError("parity must be +1 or -1");
  const int wide = cutoff + 16;
  VecC plus = coherent_ket(p.alpha, wide).amplitudes();
  VecC minus = coherent_ket(-p.alpha, wide).amplitudes();
  VecC cat = plus + static_cast<double>(p.parity) * minus;
  const double n = cat.norm();
  if (n < 1e-12) throw ConfigError("degenerate superposition");
  cat /= n;
  if (p.z != 0.0) cat = squeeze_operator(p.z, wide) * cat;
  double tail = 0.0;
  for (int k = cutoff + 1; k <= wide; ++k) tail += std::norm(cat[k]);
  if (tail > 1e-6)
    throw NumericalGuard("cat-state truncation leakage above 1e-6; raise the cutoff");
  VecC out = cat.head(cutoff + 1);
  out /= out.norm();
  return FockKet(FockSpace{1, cutoff}, std::move(out));
}

namespace {

// <m|D(alpha)|n> via associated Laguerre polynomials
MatC displacement_matrix(cd alpha, int cutoff) {
  const int d = cutoff + 1;
  const double x = std::norm(alpha);
  const double gauss = std::exp(-x / 2.0);
  // factorial-ratio sqrt table
  std::vector<double> logfact(d, 0.0);
  for (int n = 1; n < d; ++n) logfact[n] = logfact[n - 1] + std::log(static_cast<double>(n));
  MatC out(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const int lo = std::min(m, n), k = std::abs(m - n);
      // L_lo^{(k)}(x)
      double l_prev = 0.0, l = 1.0;
      for (int i = 1; i <= lo; ++i) {
        const double l_next = ((2.0 * i - 1.0 + k - x) * l - (i - 1.0 + k) * l_prev) / i;
        l_prev = l;
        l = l_next;
      }
      const double ratio = std::exp(0.5 * (logfact[lo] - logfact[std::max(m, n)]));
      const cd pref = m >= n ? std::pow(alpha, m - n) : std::pow(-std::conj(alpha), n - m);
      out(m, n) = gauss * ratio * pref * l;
    }
  return out;
}

}  // namespace

double wigner_at(const DensityOp& rho, double q, double p) {
  if (rho.space().modes != 1) throw ConfigError("wigner expects a single-mode state");
  const int cutoff = rho.space().cutoff;
  const cd alpha = cd(q, p) / std::sqrt(2.0);
  MatC dm = displacement_matrix(alpha, cutoff);
  // (1/pi) sum_k (-1)^k <k| D^dag rho D |k>
  double acc = 0.0;
  for (int k = 0; k <= cutoff; ++k) {
    const VecC col = dm.col(k);
    const double v = (col.adjoint() * rho.matrix() * col).value().real();
    acc += (k % 2 == 0 ? v : -v);
  }
  return acc / std::numbers::pi;
}

WignerGrid wigner(const DensityOp& rho, double q_min, double q_max, int nq, double p_min,
                  double p_max, int np, int threads) {
  if (rho.space().modes != 1) throw ConfigError("wigner expects a single-mode state");
  if (nq < 2 || np < 2) throw ConfigError("grid needs at least 2 points per axis");
  WignerGrid g{q_min, q_max, p_min, p_max, nq, np, Eigen::MatrixXd(nq, np), 0.0};
  auto fill_rows = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i)
      for (int j = 0; j < np; ++j) g.values(i, j) = wigner_at(rho, g.q(i), g.p(j));
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    fill_rows(0, nq);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (nq + threads - 1) / threads;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(fill_rows, std::min(nq, t * chunk), std::min(nq, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  const double hq = (q_max - q_min) / (nq - 1), hp = (p_max - p_min) / (np - 1);
  double acc = 0.0;
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < np; ++j) {
      double w = 1.0;
      if (i == 0 || i == nq - 1) w *= 0.5;
      if (j == 0 || j == np - 1) w *= 0.5;
      acc += w * g.values(i, j);
    }
  g.integral = acc * hq * hp;
  return g;
}

double wigner_origin_parity(const DensityOp& rho) {
  double parity = 0.0;
  for (std::int64_t n = 0; n < rho.space().dim(); ++n)
    parity += (n % 2 == 0 ? 1.0 : -1.0) * rho.matrix()(n, n).real();
  return parity / std::numbers::pi;
}

namespace {

double css_fidelity(const DensityOp& rho_wide, double alpha, double z, int cutoff) {
  FockKet cat = squeezed_css_state({alpha, z, +1}, cutoff);
  return (cat.amplitudes().adjoint() * rho_wide.matrix() * cat.amplitudes()).value().real();
}

}  // namespace

CssFit best_css_fit(const DensityOp& rho, double alpha_max, double z_max, double coarse_step,
                    int fit_cutoff) {
  if (rho.space().modes != 1) throw ConfigError("best_css_fit expects a single-mode state");
  // widen the state to the fit cutoff
  const int d_in = rho.space().level_count();
  const int d = fit_cutoff + 1;
  if (d < d_in) throw ConfigError("fit cutoff below the state cutoff");
  MatC wide = MatC::Zero(d, d);
  wide.topLeftCorner(d_in, d_in) = rho.matrix();
  DensityOp rho_wide(FockSpace{1, fit_cutoff}, std::move(wide));

  double best_a = 0.0, best_z = 0.0, best_f = -1.0;
  const int na = static_cast<int>(std::lround(alpha_max / coarse_step)) + 1;
  const int nz = 2 * static_cast<int>(std::lround(z_max / coarse_step)) + 1;
  for (int ia = 0; ia < na; ++ia) {
    const double a = ia * coarse_step;
    for (int iz = 0; iz < nz; ++iz) {
      const double z = -z_max + iz * coarse_step;
      const double f = css_fidelity(rho_wide, a, z, fit_cutoff);
      if (f > best_f + 1e-15) {
        best_f = f;
        best_a = a;
        best_z = z;
      }
    }
  }

  // golden-section refinement, alternating axes
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  auto refine = [&](double lo, double hi, auto eval) {
    double c = hi - gr * (hi - lo), d2 = lo + gr * (hi - lo);
    double fc = eval(c), fd = eval(d2);
    while (hi - lo > 1e-4) {
      if (fc > fd) {
        hi = d2;
        d2 = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = eval(c);
      } else {
        lo = c;
        c = d2;
        fc = fd;
        d2 = lo + gr * (hi - lo);
        fd = eval(d2);
      }
    }
    return (lo + hi) / 2.0;
  };
  for (int round = 0; round < 4; ++round) {
    best_a = refine(std::max(0.0, best_a - coarse_step), std::min(alpha_max, best_a + coarse_step),
                    [&](double a) { return css_fidelity(rho_wide, a, best_z, fit_cutoff); });
    best_z = refine(std::max(-z_max, best_z - coarse_step), std::min(z_max, best_z + coarse_step),
                    [&](double z) { return css_fidelity(rho_wide, best_a, z, fit_cutoff); });
  }
  best_f = css_fidelity(rho_wide, best_a, best_z, fit_cutoff);
  return CssFit{{best_a, best_z, +1}, best_f};
}

}  // namespace noon
