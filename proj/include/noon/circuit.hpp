#pragma once

#include <cmath>
#include <complex>

#include "noon/fock.hpp"

namespace noon {

/// Two-mode squeezed vacuum source, amplitudes proportional to gamma^n on |n,n>.
struct SourceParams {
  cd gamma;
  int cutoff = 6;
};

/// Gaussian temporal-mode overlap between two pulses of equal coherence time.
struct DistinguishabilityModel {
  double delay_ps = 0.0;
  double coherence_time_ps = 1.6;

  /// xi = exp(-delay^2 / (2 tau^2)): 1 at zero delay, ->0 for large delay.
  double overlap() const {
    const double t = coherence_time_ps;
    return std::exp(-delay_ps * delay_ps / (2.0 * t * t));
  }
};

/// Normalized sum_n gamma^n |n,n> truncated at the cutoff.
/// Throws ConfigError for |gamma| >= 1 and NumericalGuard if the discarded
/// weight of the untruncated state exceeds 1e-6.
FockKet tmsv_state(const SourceParams& p);

/// Lift of a 2x2 mode unitary V to the two-mode truncated Fock space,
/// exactly unitary on the truncated space. Creation operators transform as
/// a_k^dag -> sum_j V(j,k) a_j^dag.
MatC lift_two_mode_unitary(const Eigen::Matrix2cd& v, int cutoff);

/// 2x2 matrix of the beam splitter family used everywhere in this project:
///   [ t          sqrt(r) e^{-i phi} ]
///   [ sqrt(r) e^{i phi}        -t   ]   with t = sqrt(1-r).
/// The symmetric splitter (r=1/2, phi=0) maps (c,d) -> ((c+d)/sqrt2, (c-d)/sqrt2).
Eigen::Matrix2cd beam_splitter_matrix(double reflectivity, double phase);

FockKet beam_splitter(const FockKet& psi, int mode_i, int mode_j, double reflectivity,
                      double phase = 0.0);
DensityOp beam_splitter(const DensityOp& rho, int mode_i, int mode_j, double reflectivity,
                        double phase = 0.0);

/// e^{i n phi} on one mode.
FockKet phase_shift(const FockKet& psi, int mode, double phi);
DensityOp phase_shift(const DensityOp& rho, int mode, double phi);

/// Generic linear element: a beam splitter for r > 0; the degenerate case
/// r = 0 is a phase shift by phi on mode_i alone.
FockKet linear_element(const FockKet& psi, int mode_i, int mode_j, double reflectivity,
                       double phase);
DensityOp linear_element(const DensityOp& rho, int mode_i, int mode_j, double reflectivity,
                         double phase);

/// Bosonic attenuation channel with transmission eta: K_k removes k photons,
/// K_k|n> = sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k>. Trace preserving on the
/// truncated space (pure loss never raises the photon number).
KrausChannel loss_channel(double eta, int cutoff);

/// dB -> power transmission, 10 dB -> 0.1.
inline double db_to_transmission(double db) { return std::pow(10.0, -db / 10.0); }

/// Splits `mode` into a matched temporal component (amplitude xi, stays in place)
/// and an orthogonal one (amplitude sqrt(1-xi^2), appended as the last mode).
FockKet delay_embedding(const FockKet& psi, int mode, const DistinguishabilityModel& model);

}  // namespace noon
