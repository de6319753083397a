#pragma once

#include <Eigen/Dense>

#include "noon/fock.hpp"

namespace noon {

/// Squeezed coherent-state superposition S(z)(|alpha> + parity |-alpha>).
/// z > 0 squeezes the theta = 0 quadrature: Var(X_0) of S(z)|0> is e^{-2z}/2.
struct CssParams {
  double alpha = 0.0;
  double z = 0.0;
  int parity = +1;  // +1 even, -1 odd
};

/// Coherent ket truncated at the cutoff (renormalized).
FockKet coherent_ket(cd alpha, int cutoff);

/// exp((z/2)(a^2 - a^dag^2)) on the truncated space; exactly unitary there.
MatC squeeze_operator(double z, int cutoff);

/// Normalized squeezed cat. The construction runs on an internally widened
/// space; throws NumericalGuard if the weight above the requested cutoff
/// exceeds 1e-6.
FockKet squeezed_css_state(const CssParams& p, int cutoff);

struct WignerGrid {
  double q_min, q_max, p_min, p_max;
  int nq, np;
  Eigen::MatrixXd values;  // values(i, j) = W(q_i, p_j)
  double integral = 0.0;   // trapezoid estimate of the total mass

  double q(int i) const { return q_min + (q_max - q_min) * i / (nq - 1); }
  double p(int j) const { return p_min + (p_max - p_min) * j / (np - 1); }
};

/// Wigner function in the convention matching X = (a + a^dag)/sqrt2:
/// vacuum gives W(0,0) = 1/pi and the function integrates to 1 over (q,p).
double wigner_at(const DensityOp& single_mode, double q, double p);
WignerGrid wigner(const DensityOp& single_mode, double q_min = -4.0, double q_max = 4.0,
                  int nq = 161, double p_min = -4.0, double p_max = 4.0, int np = 161,
                  int threads = 1);

/// W(0,0) from mean photon-number parity, <(-1)^n>/pi; cross-check for grids.
double wigner_origin_parity(const DensityOp& single_mode);

struct CssFit {
  CssParams params;
  double fidelity = 0.0;
};

/// Best squeezed even CSS approximation over alpha in [0, alpha_max],
/// z in [-z_max, z_max]: coarse grid then golden-section refinement per axis.
/// Ties break toward smaller alpha.
CssFit best_css_fit(const DensityOp& single_mode, double alpha_max = 3.0, double z_max = 1.0,
                    double coarse_step = 0.02, int fit_cutoff = 40);

}  // namespace noon
