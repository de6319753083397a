#include "noon/circuit.hpp"

#include <Eigen/Eigenvalues>

namespace noon {

FockKet tmsv_state(const SourceParams& p) {
  const double g = std::abs(p.gamma);
  if (g >= 1.0) throw ConfigError("two-mode squeezing amplitude must satisfy |gamma| < 1");
  // discarded weight of the untruncated normalized state is |gamma|^{2(cutoff+1)}
  const double discarded = std::pow(g, 2 * (p.cutoff + 1));
  if (discarded > 1e-6)
    throw NumericalGuard("tmsv truncation leakage above 1e-6; raise the cutoff");
  FockSpace sp{2, p.cutoff};
  VecC amp = VecC::Zero(sp.dim());
  cd coeff = 1.0;
  for (int n = 0; n <= p.cutoff; ++n) {
    amp[sp.index_of({n, n})] = coeff;
    coeff *= p.gamma;
  }
  amp /= amp.norm();
  return FockKet(sp, std::move(amp));
}

Eigen::Matrix2cd beam_splitter_matrix(double reflectivity, double phase) {
  if (reflectivity < 0.0 || reflectivity > 1.0)
    throw ConfigError("beam splitter reflectivity must lie in [0,1]");
  const double t = std::sqrt(1.0 - reflectivity);
  const double r = std::sqrt(reflectivity);
  Eigen::Matrix2cd v;
  v << t, r * std::exp(cd(0.0, -phase)), r * std::exp(cd(0.0, phase)), -t;
  return v;
}

MatC lift_two_mode_unitary(const Eigen::Matrix2cd& v, int cutoff) {
  if ((v * v.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("mode matrix is not unitary");
  // A = i log V (Hermitian), lifted to sum_{jk} A_jk a_j^dag a_k; U = exp(-i A_lift).
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(v);
  Eigen::Matrix2cd logv = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i) {
    cd lambda = es.eigenvalues()[i];
    logv += std::log(lambda) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  Eigen::Matrix2cd a = cd(0.0, 1.0) * logv;

  const int d = cutoff + 1;
  FockSpace two{2, cutoff};
  MatC gen = MatC::Zero(d * d, d * d);
  // a_j^dag a_k matrix elements on |n_0, n_1>, index n_0*d + n_1
  for (int n0 = 0; n0 < d; ++n0)
    for (int n1 = 0; n1 < d; ++n1) {
      const int col = n0 * d + n1;
      // diagonal terms
      gen(col, col) += a(0, 0) * static_cast<double>(n0) + a(1, 1) * static_cast<double>(n1);
      // a_0^dag a_1
      if (n0 + 1 < d && n1 >= 1)
        gen((n0 + 1) * d + (n1 - 1), col) += a(0, 1) * std::sqrt((n0 + 1.0) * n1);
      // a_1^dag a_0
      if (n1 + 1 < d && n0 >= 1)
        gen((n0 - 1) * d + (n1 + 1), col) += a(1, 0) * std::sqrt((n1 + 1.0) * n0);
    }
  Eigen::SelfAdjointEigenSolver<MatC> ges((gen + gen.adjoint()) / 2.0);
  VecC phases(ges.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases[i] = std::exp(cd(0.0, -ges.eigenvalues()[i]));
  return ges.eigenvectors() * phases.asDiagonal() * ges.eigenvectors().adjoint();
}

FockKet beam_splitter(const FockKet& psi, int mode_i, int mode_j, double reflectivity,
                      double phase) {
  MatC u = lift_two_mode_unitary(beam_splitter_matrix(reflectivity, phase), psi.space().cutoff);
  return FockKet(psi.space(), apply_two_mode(psi.space(), psi.amplitudes(), u, mode_i, mode_j));
}

DensityOp beam_splitter(const DensityOp& rho, int mode_i, int mode_j, double reflectivity,
                        double phase) {
  MatC u = lift_two_mode_unitary(beam_splitter_matrix(reflectivity, phase), rho.space().cutoff);
  MatC left = apply_two_mode_left(rho.space(), rho.matrix(), u, mode_i, mode_j);
  return DensityOp(rho.space(), apply_two_mode_right_dag(rho.space(), left, u, mode_i, mode_j));
}

namespace {

MatC phase_matrix(int cutoff, double phi) {
  const int d = cutoff + 1;
  MatC p = MatC::Zero(d, d);
  for (int n = 0; n < d; ++n) p(n, n) = std::exp(cd(0.0, n * phi));
  return p;
}

}  // namespace

FockKet phase_shift(const FockKet& psi, int mode, double phi) {
  return FockKet(psi.space(), apply_one_mode(psi.space(), psi.amplitudes(),
                                             phase_matrix(psi.space().cutoff, phi), mode));
}

DensityOp phase_shift(const DensityOp& rho, int mode, double phi) {
  MatC p = phase_matrix(rho.space().cutoff, phi);
  MatC left = apply_one_mode_left(rho.space(), rho.matrix(), p, mode);
  return DensityOp(rho.space(), apply_one_mode_right_dag(rho.space(), left, p, mode));
}

FockKet linear_element(const FockKet& psi, int mode_i, int mode_j, double reflectivity,
                       double phase) {
  psi.space().check_mode(mode_i);
  psi.space().check_mode(mode_j);
  if (reflectivity == 0.0) return phase_shift(psi, mode_i, phase);
  return beam_splitter(psi, mode_i, mode_j, reflectivity, phase);
}

DensityOp linear_element(const DensityOp& rho, int mode_i, int mode_j, double reflectivity,
                         double phase) {
  rho.space().check_mode(mode_i);
  rho.space().check_mode(mode_j);
  if (reflectivity == 0.0) return phase_shift(rho, mode_i, phase);
  return beam_splitter(rho, mode_i, mode_j, reflectivity, phase);
}

KrausChannel loss_channel(double eta, int cutoff) {
  if (eta < 0.0 || eta > 1.0) throw ConfigError("loss transmission must lie in [0,1]");
  const int d = cutoff + 1;
  KrausChannel ch;
  ch.cutoff = cutoff;
  for (int k = 0; k <= cutoff; ++k) {
    MatC op = MatC::Zero(d, d);
    for (int n = k; n <= cutoff; ++n) {
      double binom = 1.0;
      for (int j = 0; j < k; ++j) binom *= static_cast<double>(n - j) / (j + 1);
      op(n - k, n) = std::sqrt(binom * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
    }
    ch.operators.push_back(std::move(op));
  }
  return ch;
}

FockKet delay_embedding(const FockKet& psi, int mode, const DistinguishabilityModel& model) {
  psi.space().check_mode(mode);
  const double xi = model.overlap();
  // append a vacuum mode, then rotate (mode, new) by the xi / sqrt(1-xi^2) splitter
  FockKet vac(FockSpace{1, psi.space().cutoff});
  FockKet extended = tensor_product(psi, vac);
  const int ortho = extended.space().modes - 1;
  const double r = std::clamp(1.0 - xi * xi, 0.0, 1.0);
  if (r == 0.0) return extended;
  return beam_splitter(extended, mode, ortho, r, 0.0);
}

}  // namespace noon
