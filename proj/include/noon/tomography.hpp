#pragma once

#include <cstdint>
#include <vector>

#include "noon/fock.hpp"
#include "noon/homodyne.hpp"

namespace noon {

struct TomographySettings {
  int cutoff = 6;
  double eta = 1.0;          // detection efficiency compensated by the POVMs
  double bin_width = 0.05;
  int max_iterations = 5000;
  double convergence_tol = 1e-10;  // on the relative log-likelihood change
  int bootstrap_resamples = 50;
  std::uint64_t bootstrap_seed = 1;
  QuadGrid grid{};
};

/// Quadrature-bin POVM element at phase theta, pre-composed with the adjoint of
/// the transmission-eta loss channel, so reconstructions report the pre-loss state.
MatC binned_povm(double theta, double x_lo, double x_hi, double eta, int cutoff,
                 const QuadGrid& grid = {});

struct TomographyResult {
  DensityOp rho;
  int iterations = 0;
  double final_loglik = 0.0;
  bool converged = false;
  bool monotone = true;
  int dilution_steps = 0;  // fallback damped iterations taken
  std::vector<double> loglik_trace;
};

/// Iterative maximum-likelihood reconstruction (R rho R with normalization),
/// single mode. Requires at least two distinct phases.
TomographyResult maxlik_reconstruct(const QuadratureDataset& data,
                                    const TomographySettings& settings);

/// Two-mode reconstruction from joint records; the efficiency correction is
/// applied per mode.
TomographyResult maxlik_reconstruct(const JointQuadratureDataset& data,
                                    const TomographySettings& settings);

/// Elementwise standard deviation of the reconstructed density matrix under
/// resampling of the dataset with replacement. Deterministic for a fixed
/// settings.bootstrap_seed.
Eigen::MatrixXd bootstrap_errors(const QuadratureDataset& data,
                                 const TomographySettings& settings);
Eigen::MatrixXd bootstrap_errors(const JointQuadratureDataset& data,
                                 const TomographySettings& settings);

}  // namespace noon
