#include <doctest.h>

#include <numbers>

#include "noon/circuit.hpp"
#include "noon/fock.hpp"
#include "oracles.hpp"

using namespace noon;

TEST_SUITE_BEGIN("circuit");

TEST_CASE("squeezed-pair source: gamma = 0 gives the two-mode vacuum") {
  FockKet psi = tmsv_state({cd(0.0, 0.0), 4});
  CHECK(std::abs(psi.amplitude({0, 0}) - 1.0) < 1e-15);
}

TEST_CASE("squeezed-pair source amplitudes follow the geometric series") {
  FockKet psi = tmsv_state({cd(0.1, 0.0), 2});
  const cd a0 = psi.amplitude({0, 0});
  CHECK(std::abs(psi.amplitude({1, 1}) / a0 - 0.1) < 1e-14);
  CHECK(std::abs(psi.amplitude({2, 2}) / a0 - 0.01) < 1e-14);
  CHECK(std::abs(psi.amplitude({1, 0})) < 1e-15);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-14);
}

TEST_CASE("squeezed-pair source at the working amplitude") {
  // gamma^2 ~ 0.007: weight of |1,1> is gamma^2 over the norm factor
  const double gamma = 0.0836660026534076;
  FockKet psi = tmsv_state({cd(gamma, 0.0), 6});
  const double w11 = std::norm(psi.amplitude({1, 1}));
  const double expected = 0.007 * (1.0 - 0.007);  // gamma^2 (1 - gamma^2), cutoff tail < 1e-8
  CHECK(w11 == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("squeezed-pair source guards") {
  CHECK_THROWS_AS((void)tmsv_state({cd(1.0, 0.0), 6}), ConfigError);
  CHECK_THROWS_AS((void)tmsv_state({cd(0.9, 0.0), 2}), NumericalGuard);
}

TEST_CASE("symmetric splitter on |1,0> gives (|1,0>+|0,1>)/sqrt2") {
  FockKet psi = FockKet::basis(FockSpace{2, 3}, {1, 0});
  FockKet out = beam_splitter(psi, 0, 1, 0.5, 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(out.amplitude({1, 0}) - s) < 1e-12);
  CHECK(std::abs(out.amplitude({0, 1}) - s) < 1e-12);
  // second input column picks up the relative minus sign
  FockKet psi2 = FockKet::basis(FockSpace{2, 3}, {0, 1});
  FockKet out2 = beam_splitter(psi2, 0, 1, 0.5, 0.0);
  CHECK(std::abs(out2.amplitude({1, 0}) - s) < 1e-12);
  CHECK(std::abs(out2.amplitude({0, 1}) + s) < 1e-12);
}

TEST_CASE("photon bunching: |1,1> in, no |1,1> out") {
  FockKet psi = FockKet::basis(FockSpace{2, 3}, {1, 1});
  FockKet out = beam_splitter(psi, 0, 1, 0.5, 0.0);
  CHECK(std::abs(out.amplitude({1, 1})) < 1e-12);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(out.amplitude({2, 0}) - s) < 1e-12);
  CHECK(std::abs(out.amplitude({0, 2}) + s) < 1e-12);
}

TEST_CASE("reverse bunching: the matched-phase two-photon state maps onto |1,1>") {
  FockSpace two{2, 3};
  VecC amp = VecC::Zero(two.dim());
  amp[two.index_of({2, 0})] = 1.0 / std::sqrt(2.0);
  amp[two.index_of({0, 2})] = -1.0 / std::sqrt(2.0);
  FockKet out = beam_splitter(FockKet(two, amp), 0, 1, 0.5, 0.0);
  CHECK(std::norm(out.amplitude({1, 1})) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("splitter matrix elements match the binomial-expansion values") {
  const int cutoff = 5;
  for (double r : {0.05, 0.5, 0.73}) {
    for (double phase : {0.0, 0.4, -1.3}) {
      Eigen::Matrix2cd v = beam_splitter_matrix(r, phase);
      MatC u = lift_two_mode_unitary(v, cutoff);
      const int d = cutoff + 1;
      for (int m = 0; m <= cutoff; ++m)
        for (int n = 0; m + n <= cutoff; ++n)
          for (int mp = 0; mp <= cutoff; ++mp)
            for (int np = 0; mp + np <= cutoff; ++np) {
              const cd expected = oracle::bs_element(v, mp, np, m, n);
              CHECK(std::abs(u(mp * d + np, m * d + n) - expected) < 1e-10);
            }
    }
  }
}

TEST_CASE("every linear element is unitary on the truncated space") {
  const int cutoff = 4;
  FockSpace two{2, cutoff};
  for (double r : {0.0, 0.3, 0.5, 1.0}) {
    FockKet psi(two, oracle::random_ket(two.dim(), 555 + static_cast<int>(100 * r)));
    FockKet out = linear_element(psi, 0, 1, r, 0.7);
    CHECK(std::abs(out.norm() - 1.0) < 1e-10);
  }
  MatC u = lift_two_mode_unitary(beam_splitter_matrix(0.5, 0.3), cutoff);
  CHECK((u.adjoint() * u - MatC::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("r = 0 degenerates to a single-mode phase shift") {
  FockKet psi = FockKet::basis(FockSpace{2, 4}, {3, 1});
  FockKet out = linear_element(psi, 0, 1, 0.0, 0.25);
  CHECK(std::abs(out.amplitude({3, 1}) - std::exp(cd(0.0, 3 * 0.25))) < 1e-12);
}

TEST_CASE("splitter reflectivity is range-checked") {
  FockKet psi(FockSpace{2, 2});
  CHECK_THROWS_AS((void)beam_splitter(psi, 0, 1, 1.2, 0.0), ConfigError);
  CHECK_THROWS_AS((void)beam_splitter(psi, 0, 1, -0.1, 0.0), ConfigError);
}

TEST_CASE("loss channel: eta = 1 is the identity") {
  KrausChannel ch = loss_channel(1.0, 4);
  DensityOp rho(FockSpace{1, 4}, oracle::random_density(5, 77));
  DensityOp out = apply_channel(rho, ch, 0);
  CHECK((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("loss channel on |2><2| gives the frozen binomial weights") {
  DensityOp rho = DensityOp::from_ket(FockKet::basis(FockSpace{1, 4}, {2}));
  DensityOp out = apply_channel(rho, loss_channel(0.55, 4), 0);
  CHECK(out.population({0}) == doctest::Approx(0.2025).epsilon(1e-12));
  CHECK(out.population({1}) == doctest::Approx(0.4950).epsilon(1e-12));
  CHECK(out.population({2}) == doctest::Approx(0.3025).epsilon(1e-12));
}

TEST_CASE("5 dB per arm is a transmission of about 0.316") {
  CHECK(db_to_transmission(5.0) == doctest::Approx(0.3162277660168379).epsilon(1e-12));
  CHECK(db_to_transmission(10.0) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("loss channel is trace preserving and complete") {
  for (double eta : {0.0, 0.25, 0.9, 1.0}) {
    CHECK(loss_channel(eta, 6).completeness_defect() < 1e-12);
  }
  CHECK_THROWS_AS((void)loss_channel(1.0001, 4), ConfigError);
}

TEST_CASE("loss channels compose as a semigroup") {
  const int cutoff = 5;
  DensityOp rho(FockSpace{1, cutoff}, oracle::random_density(cutoff + 1, 13));
  DensityOp a = apply_channel(apply_channel(rho, loss_channel(0.8, cutoff), 0),
                              loss_channel(0.6, cutoff), 0);
  DensityOp b = apply_channel(rho, loss_channel(0.48, cutoff), 0);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("photon-number expectation scales by eta under loss") {
  const int cutoff = 6;
  DensityOp rho(FockSpace{1, cutoff}, oracle::random_density(cutoff + 1, 21));
  const double before = mean_photon_number(rho, 0);
  for (double eta : {0.3, 0.55, 1.0}) {
    DensityOp out = apply_channel(rho, loss_channel(eta, cutoff), 0);
    CHECK(mean_photon_number(out, 0) == doctest::Approx(eta * before).epsilon(1e-9));
  }
}

TEST_CASE("temporal overlap model") {
  DistinguishabilityModel zero{0.0, 1.6};
  CHECK(zero.overlap() == doctest::Approx(1.0));
  DistinguishabilityModel huge{1e6, 1.6};
  CHECK(huge.overlap() == doctest::Approx(0.0));
  DistinguishabilityModel five{5.0, 1.6};
  CHECK(five.overlap() == doctest::Approx(std::exp(-25.0 / 5.12)).epsilon(1e-12));
  CHECK(five.overlap() == doctest::Approx(0.0076).epsilon(2e-2));
  // monotone decreasing in |delay|
  double prev = 1.0;
  for (double tau : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double xi = DistinguishabilityModel{tau, 1.6}.overlap();
    CHECK(xi < prev);
    prev = xi;
  }
}

TEST_CASE("delay embedding splits a photon between temporal modes") {
  FockKet psi = FockKet::basis(FockSpace{2, 3}, {0, 1});
  DistinguishabilityModel model{1.2, 1.6};
  const double xi = model.overlap();
  FockKet out = delay_embedding(psi, 1, model);
  CHECK(out.space().modes == 3);
  CHECK(std::abs(out.amplitude({0, 1, 0}) - xi) < 1e-12);
  CHECK(std::abs(out.amplitude({0, 0, 1}) - std::sqrt(1 - xi * xi)) < 1e-12);
}

TEST_CASE("zero delay leaves the state in the matched temporal mode") {
  FockSpace two{2, 3};
  FockKet psi(two, oracle::random_ket(two.dim(), 888));
  FockKet out = delay_embedding(psi, 1, {0.0, 1.6});
  for (std::int64_t i = 0; i < two.dim(); ++i) {
    const int n0 = two.occupation(i, 0), n1 = two.occupation(i, 1);
    CHECK(std::abs(out.amplitude({n0, n1, 0}) - psi.amplitudes()[i]) < 1e-12);
  }
}

TEST_CASE("infinite delay moves a photon entirely to the orthogonal mode") {
  FockKet psi = FockKet::basis(FockSpace{2, 3}, {0, 1});
  FockKet out = delay_embedding(psi, 1, {1e9, 1.6});
  CHECK(std::norm(out.amplitude({0, 0, 1})) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();
