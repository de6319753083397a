#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noon/fock.hpp"

namespace noon {

/// Homodyne phases of the two parties; only the difference enters the moments.
struct QuadratureSetting {
  double theta_a = 0.0;
  double theta_b = 0.0;
  double delta() const { return theta_a - theta_b; }
};

/// X_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2); vacuum variance 1/2.
MatC quadrature_operator(double theta, int cutoff);

/// Fock component <m|x_theta> of the quadrature eigenket:
///   e^{i m theta} pi^{-1/4} e^{-x^2/2} H_m(x) / sqrt(2^m m!)
/// with H_m the physicists' Hermite polynomials. Normalized: int |.|^2 dx = 1.
cd fock_wavefunction(int m, double x, double theta);

/// All components <m|x_theta> for m = 0..cutoff.
VecC quad_eigenket(double x, double theta, int cutoff);

/// Uniform quadrature grid used for marginals, projectors and sampling.
struct QuadGrid {
  double x_min = -6.0;
  double x_max = 6.0;
  int points = 1201;

  double step() const { return (x_max - x_min) / (points - 1); }
  double x(int i) const { return x_min + i * step(); }
};

/// Tr[rho X_a^p (x) X_b^q] for a two-mode state; the result is real.
double joint_moment(const DensityOp& two_mode, const QuadratureSetting& s, int p, int q);

/// p(x | theta) = <x_theta| rho |x_theta> for a single-mode state.
double marginal_density(const DensityOp& single_mode, double x, double theta);

struct QuadratureRecord {
  int mode_id;
  double theta;
  double x;
};

struct QuadratureDataset {
  std::vector<QuadratureRecord> records;
  std::uint64_t seed = 0;
  std::string source_state_id;
};

/// i.i.d. samples of the rotated-quadrature marginal via inverse-CDF on the
/// grid. Deterministic for a fixed seed, independent of worker count.
QuadratureDataset sample_homodyne(const DensityOp& single_mode, int mode_id, double theta,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const QuadGrid& grid = {});

/// Convenience: equal sample counts at each phase, all in one dataset.
QuadratureDataset sample_homodyne_phases(const DensityOp& single_mode, int mode_id,
                                         const std::vector<double>& thetas,
                                         std::size_t n_per_phase, std::uint64_t seed,
                                         const QuadGrid& grid = {});

struct JointQuadratureRecord {
  double theta_a;
  double x_a;
  double theta_b;
  double x_b;
};

struct JointQuadratureDataset {
  std::vector<JointQuadratureRecord> records;
  std::uint64_t seed = 0;
  std::string source_state_id;
};

/// Joint two-mode homodyne samples at the given phase pairs. Cells of width
/// `bin_width` carry the exact joint probabilities Tr[rho (Pi_a (x) Pi_b)];
/// sample positions are uniform within a cell.
JointQuadratureDataset sample_homodyne_joint(const DensityOp& two_mode,
                                             const std::vector<QuadratureSetting>& settings,
                                             std::size_t n_total, std::uint64_t seed,
                                             double bin_width = 0.05, const QuadGrid& grid = {});

struct ConditionResult {
  DensityOp state;         // remaining party's mode, normalized
  double probability = 0;  // window acceptance probability (density for window = 0)
  bool null_result = false;
};

/// Projects one mode onto the quadrature window [x_center +- window/2] at phase
/// theta, traces it out and normalizes. window = 0 performs sharp conditioning.
ConditionResult remote_condition(const DensityOp& two_mode, int alice_mode, double theta,
                                 double x_center, double window, const QuadGrid& grid = {});

/// 10 log10( Var(X_theta) / (1/2) ): negative below the vacuum level.
double squeezing_db(const DensityOp& single_mode, double theta);

/// Minimizes squeezing_db over theta (scan plus local refinement).
/// Returns {theta_opt, squeezing_db(theta_opt)}.
std::pair<double, double> optimal_squeezing(const DensityOp& single_mode, int scan_points = 180);

}  // namespace noon
