#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "noon/errors.hpp"

namespace noon {

using cd = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

/// Truncated multimode Fock space: `modes` bosonic modes, each holding 0..cutoff photons.
///
/// Basis index layout is row-major with the first mode slowest-varying:
///   index(n_0,...,n_{M-1}) = sum_m n_m * (cutoff+1)^(M-1-m)
/// This layout is fixed so serialized operators are bit-comparable across runs.
struct FockSpace {
  int modes = 1;
  int cutoff = 6;

  int level_count() const { return cutoff + 1; }

  std::int64_t dim() const {
    std::int64_t d = 1;
    for (int m = 0; m < modes; ++m) d *= level_count();
    return d;
  }

  std::int64_t stride(int mode) const {
    check_mode(mode);
    std::int64_t s = 1;
    for (int m = mode + 1; m < modes; ++m) s *= level_count();
    return s;
  }

  int occupation(std::int64_t index, int mode) const {
    return static_cast<int>((index / stride(mode)) % level_count());
  }

  std::int64_t index_of(const std::vector<int>& occ) const;

  void check_mode(int mode) const {
    if (mode < 0 || mode >= modes) throw ConfigError("mode index out of range");
  }

  bool operator==(const FockSpace&) const = default;
};

/// Pure state over a truncated Fock space.
class FockKet {
 public:
  explicit FockKet(FockSpace space);  // vacuum
  FockKet(FockSpace space, VecC amplitudes);

  static FockKet basis(FockSpace space, const std::vector<int>& occ);

  const FockSpace& space() const { return space_; }
  const VecC& amplitudes() const { return amp_; }
  VecC& amplitudes() { return amp_; }

  cd amplitude(const std::vector<int>& occ) const { return amp_[space_.index_of(occ)]; }
  double norm() const { return amp_.norm(); }
  double squared_norm() const { return amp_.squaredNorm(); }

  /// Scales to unit norm. Throws on (numerically) zero vectors.
  FockKet normalized() const;

 private:
  FockSpace space_;
  VecC amp_;
};

/// Mixed state over a truncated Fock space.
class DensityOp {
 public:
  DensityOp() : DensityOp(FockSpace{0, 0}) {}     // trivial zero-mode operator
  explicit DensityOp(FockSpace space);  // zero operator
  DensityOp(FockSpace space, MatC matrix);

  static DensityOp from_ket(const FockKet& psi);

  const FockSpace& space() const { return space_; }
  const MatC& matrix() const { return mat_; }
  MatC& matrix() { return mat_; }

  double trace() const { return mat_.trace().real(); }
  cd element(const std::vector<int>& bra, const std::vector<int>& ket) const {
    return mat_(space_.index_of(bra), space_.index_of(ket));
  }
  double population(const std::vector<int>& occ) const {
    auto i = space_.index_of(occ);
    return mat_(i, i).real();
  }

  DensityOp normalized() const;

  /// max |rho - rho^dagger| over entries
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  double purity() const { return (mat_ * mat_).trace().real(); }

  /// Explicit positivity repair: clips eigenvalues below zero and renormalizes.
  /// Throws NumericalGuard if the clipped weight exceeds `tol`.
  DensityOp clipped_to_positive(double tol = 1e-8) const;

 private:
  FockSpace space_;
  MatC mat_;
};

/// Completely positive map on a single mode, as explicit Kraus operators.
struct KrausChannel {
  std::vector<MatC> operators;  // each (cutoff+1) x (cutoff+1)
  int cutoff = 6;

  /// max |sum_j K_j^dag K_j - I| over entries of the truncated space
  double completeness_defect() const;
};

// ---- spec'd operations -------------------------------------------------

FockKet tensor_product(const FockKet& a, const FockKet& b);
DensityOp tensor_product(const DensityOp& a, const DensityOp& b);

DensityOp apply_channel(const DensityOp& rho, const KrausChannel& ch, int mode);

/// Trace out all modes not in `keep`. Kept modes stay in their original relative order.
DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep);

/// Uhlmann fidelity F(a,b) = (Tr sqrt(sqrt(a) b sqrt(a)))^2, in [0,1].
/// Equals |<psi|phi>|^2 for pure inputs.
double fidelity(const DensityOp& a, const DensityOp& b);

// ---- mode-local operator application (building blocks) ------------------

/// Applies a (cutoff+1)^2 single-mode operator to one mode of a ket.
VecC apply_one_mode(const FockSpace& space, const VecC& amp, const MatC& op, int mode);

/// Applies a two-mode operator, indexed as (n_i * levels + n_j), to modes i and j.
VecC apply_two_mode(const FockSpace& space, const VecC& amp, const MatC& op, int mode_i,
                    int mode_j);

/// rho -> (K_i (x) I) rho (K_i (x) I)^dag style maps, one side at a time.
MatC apply_one_mode_left(const FockSpace& space, const MatC& rho, const MatC& op, int mode);
MatC apply_one_mode_right_dag(const FockSpace& space, const MatC& rho, const MatC& op, int mode);
MatC apply_two_mode_left(const FockSpace& space, const MatC& rho, const MatC& op, int i, int j);
MatC apply_two_mode_right_dag(const FockSpace& space, const MatC& rho, const MatC& op, int i,
                              int j);

/// Single-mode annihilation operator on the truncated space.
MatC annihilation_matrix(int cutoff);
MatC number_matrix(int cutoff);

/// <n_mode> for a ket / density operator.
double mean_photon_number(const FockKet& psi, int mode);
double mean_photon_number(const DensityOp& rho, int mode);

}  // namespace noon
