#include "noon/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace noon {

std::int64_t FockSpace::index_of(const std::vector<int>& occ) const {
  if (static_cast<int>(occ.size()) != modes)
    throw ConfigError("occupation list has wrong number of modes");
  std::int64_t idx = 0;
  for (int m = 0; m < modes; ++m) {
    if (occ[m] < 0 || occ[m] > cutoff) throw ConfigError("occupation exceeds cutoff");
    idx = idx * level_count() + occ[m];
  }
  return idx;
}

FockKet::FockKet(FockSpace space) : space_(space), amp_(VecC::Zero(space.dim())) {
  amp_[0] = 1.0;
}

FockKet::FockKet(FockSpace space, VecC amplitudes) : space_(space), amp_(std::move(amplitudes)) {
  if (amp_.size() != space_.dim()) throw ConfigError("amplitude vector does not match space");
}

FockKet FockKet::basis(FockSpace space, const std::vector<int>& occ) {
  VecC amp = VecC::Zero(space.dim());
  amp[space.index_of(occ)] = 1.0;
  return FockKet(space, std::move(amp));
}

FockKet FockKet::normalized() const {
  double n = norm();
  if (n < 1e-300) throw NumericalGuard("cannot normalize a zero ket");
  return FockKet(space_, amp_ / n);
}

DensityOp::DensityOp(FockSpace space) : space_(space), mat_(MatC::Zero(space.dim(), space.dim())) {}

DensityOp::DensityOp(FockSpace space, MatC matrix) : space_(space), mat_(std::move(matrix)) {
  if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim())
    throw ConfigError("matrix does not match space");
}

DensityOp DensityOp::from_ket(const FockKet& psi) {
  return DensityOp(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOp DensityOp::normalized() const {
  double t = trace();
  if (std::abs(t) < 1e-300) throw NumericalGuard("cannot normalize a zero-trace operator");
  return DensityOp(space_, mat_ / t);
}

double DensityOp::hermiticity_defect() const {
  return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOp::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatC> es((mat_ + mat_.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

DensityOp DensityOp::clipped_to_positive(double tol) const {
  Eigen::SelfAdjointEigenSolver<MatC> es((mat_ + mat_.adjoint()) / 2.0);
  Eigen::VectorXd ev = es.eigenvalues();
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < 0) {
      clipped += -ev[i];
      ev[i] = 0;
    }
  }
  if (clipped > tol) throw NumericalGuard("positivity repair would clip weight above tolerance");
  MatC repaired =
      es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
  return DensityOp(space_, std::move(repaired)).normalized();
}

double KrausChannel::completeness_defect() const {
  const int d = cutoff + 1;
  MatC sum = MatC::Zero(d, d);
  for (const auto& k : operators) sum += k.adjoint() * k;
  return (sum - MatC::Identity(d, d)).cwiseAbs().maxCoeff();
}

FockKet tensor_product(const FockKet& a, const FockKet& b) {
  if (a.space().cutoff != b.space().cutoff)
    throw ConfigError("tensor_product requires equal cutoffs");
  FockSpace out{a.space().modes + b.space().modes, a.space().cutoff};
  const auto da = a.space().dim(), db = b.space().dim();
  VecC amp(da * db);
  for (std::int64_t i = 0; i < da; ++i)
    for (std::int64_t j = 0; j < db; ++j) amp[i * db + j] = a.amplitudes()[i] * b.amplitudes()[j];
  return FockKet(out, std::move(amp));
}

DensityOp tensor_product(const DensityOp& a, const DensityOp& b) {
  if (a.space().cutoff != b.space().cutoff)
    throw ConfigError("tensor_product requires equal cutoffs");
  FockSpace out{a.space().modes + b.space().modes, a.space().cutoff};
  const auto da = a.space().dim(), db = b.space().dim();
  MatC m(da * db, da * db);
  for (std::int64_t i = 0; i < da; ++i)
    for (std::int64_t j = 0; j < da; ++j)
      m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return DensityOp(out, std::move(m));
}

VecC apply_one_mode(const FockSpace& space, const VecC& amp, const MatC& op, int mode) {
  const int d = space.level_count();
  if (op.rows() != d || op.cols() != d) throw ConfigError("operator does not match level count");
  const std::int64_t s = space.stride(mode);
  const std::int64_t dim = space.dim(), block = s * d;
  VecC out = VecC::Zero(dim);
  for (std::int64_t base = 0; base < dim; base += block) {
    for (std::int64_t i = 0; i < s; ++i) {
      const std::int64_t off = base + i;
      for (int np = 0; np < d; ++np) {
        cd acc = 0.0;
        for (int n = 0; n < d; ++n) acc += op(np, n) * amp[off + n * s];
        out[off + np * s] = acc;
      }
    }
  }
  return out;
}

VecC apply_two_mode(const FockSpace& space, const VecC& amp, const MatC& op, int mode_i,
                    int mode_j) {
  if (mode_i == mode_j) throw ConfigError("two-mode operator needs distinct modes");
  const int d = space.level_count();
  if (op.rows() != d * d || op.cols() != d * d)
    throw ConfigError("operator does not match two-mode dimension");
  const std::int64_t si = space.stride(mode_i), sj = space.stride(mode_j);
  const std::int64_t dim = space.dim();
  VecC out = VecC::Zero(dim);
  VecC gather(d * d), local(d * d);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    if (space.occupation(idx, mode_i) != 0 || space.occupation(idx, mode_j) != 0) continue;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) gather[a * d + b] = amp[idx + a * si + b * sj];
    local.noalias() = op * gather;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out[idx + a * si + b * sj] = local[a * d + b];
  }
  return out;
}

MatC apply_one_mode_left(const FockSpace& space, const MatC& rho, const MatC& op, int mode) {
  MatC out(rho.rows(), rho.cols());
  for (Eigen::Index c = 0; c < rho.cols(); ++c)
    out.col(c) = apply_one_mode(space, rho.col(c), op, mode);
  return out;
}

MatC apply_one_mode_right_dag(const FockSpace& space, const MatC& rho, const MatC& op, int mode) {
  // rho K^dag == (K rho^dag)^dag
  MatC tmp = apply_one_mode_left(space, rho.adjoint(), op, mode);
  return tmp.adjoint();
}

MatC apply_two_mode_left(const FockSpace& space, const MatC& rho, const MatC& op, int i, int j) {
  MatC out(rho.rows(), rho.cols());
  for (Eigen::Index c = 0; c < rho.cols(); ++c)
    out.col(c) = apply_two_mode(space, rho.col(c), op, i, j);
  return out;
}

MatC apply_two_mode_right_dag(const FockSpace& space, const MatC& rho, const MatC& op, int i,
                              int j) {
  MatC tmp = apply_two_mode_left(space, rho.adjoint(), op, i, j);
  return tmp.adjoint();
}

DensityOp apply_channel(const DensityOp& rho, const KrausChannel& ch, int mode) {
  rho.space().check_mode(mode);
  if (ch.cutoff != rho.space().cutoff) throw ConfigError("channel cutoff does not match state");
  MatC acc = MatC::Zero(rho.space().dim(), rho.space().dim());
  for (const auto& k : ch.operators) {
    MatC left = apply_one_mode_left(rho.space(), rho.matrix(), k, mode);
    acc += apply_one_mode_right_dag(rho.space(), left, k, mode);
  }
  return DensityOp(rho.space(), std::move(acc));
}

DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw ConfigError("partial_trace requires a nonempty keep set");
  const auto& sp = rho.space();
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  if (std::adjacent_find(k.begin(), k.end()) != k.end())
    throw ConfigError("duplicate mode in keep set");
  for (int m : k) sp.check_mode(m);

  std::vector<int> traced;
  for (int m = 0; m < sp.modes; ++m)
    if (!std::binary_search(k.begin(), k.end(), m)) traced.push_back(m);

  const int d = sp.level_count();
  // enumerate offsets of kept and traced sub-indices within the full index
  auto offsets = [&](const std::vector<int>& ms) {
    std::vector<std::int64_t> off(1, 0);
    for (int m : ms) {
      std::vector<std::int64_t> next;
      next.reserve(off.size() * d);
      for (std::int64_t o : off)
        for (int n = 0; n < d; ++n) next.push_back(o + n * sp.stride(m));
      off = std::move(next);
    }
    return off;
  };
  const auto keep_off = offsets(k);
  const auto tr_off = offsets(traced);

  FockSpace out_space{static_cast<int>(k.size()), sp.cutoff};
  MatC out = MatC::Zero(keep_off.size(), keep_off.size());
  for (std::size_t a = 0; a < keep_off.size(); ++a)
    for (std::size_t b = 0; b < keep_off.size(); ++b) {
      cd acc = 0.0;
      for (std::int64_t t : tr_off) acc += rho.matrix()(keep_off[a] + t, keep_off[b] + t);
      out(a, b) = acc;
    }
  return DensityOp(out_space, std::move(out));
}

namespace {

MatC matrix_sqrt_psd(const MatC& m, double tol) {
  Eigen::SelfAdjointEigenSolver<MatC> es((m + m.adjoint()) / 2.0);
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol * scale)
      throw NumericalGuard("fidelity input is not positive semidefinite within tolerance");
    ev[i] = std::sqrt(std::max(0.0, ev[i]));
  }
  return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityOp& a, const DensityOp& b) {
  if (a.space().dim() != b.space().dim()) throw ConfigError("fidelity requires equal dimensions");
  constexpr double kPosTol = 1e-8;
  // pure-state shortcut: F = <psi| b |psi>
  if (a.purity() > 1.0 - 1e-12) {
    Eigen::SelfAdjointEigenSolver<MatC> es(a.matrix());
    VecC psi = es.eigenvectors().col(es.eigenvalues().size() - 1);
    double f = (psi.adjoint() * b.matrix() * psi).value().real();
    return std::clamp(f, 0.0, 1.0);
  }
  MatC ra = matrix_sqrt_psd(a.matrix(), kPosTol);
  MatC inner = ra * b.matrix() * ra;
  Eigen::SelfAdjointEigenSolver<MatC> es((inner + inner.adjoint()) / 2.0);
  double f = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()[i];
    if (ev < -kPosTol) throw NumericalGuard("fidelity inner operator lost positivity");
    f += std::sqrt(std::max(0.0, ev));
  }
  return std::clamp(f * f, 0.0, 1.0);
}

MatC annihilation_matrix(int cutoff) {
  const int d = cutoff + 1;
  MatC a = MatC::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

MatC number_matrix(int cutoff) {
  const int d = cutoff + 1;
  MatC n = MatC::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = k;
  return n;
}

double mean_photon_number(const FockKet& psi, int mode) {
  const auto& sp = psi.space();
  sp.check_mode(mode);
  double acc = 0.0;
  for (std::int64_t i = 0; i < sp.dim(); ++i)
    acc += sp.occupation(i, mode) * std::norm(psi.amplitudes()[i]);
  return acc;
}

double mean_photon_number(const DensityOp& rho, int mode) {
  const auto& sp = rho.space();
  sp.check_mode(mode);
  double acc = 0.0;
  for (std::int64_t i = 0; i < sp.dim(); ++i)
    acc += sp.occupation(i, mode) * rho.matrix()(i, i).real();
  return acc;
}

}  // namespace noon
