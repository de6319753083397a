#include <doctest.h>

#include "noon/circuit.hpp"
#include "noon/fock.hpp"
#include "oracles.hpp"

using namespace noon;

TEST_SUITE_BEGIN("fock");

TEST_CASE("basis indexing is row-major with the first mode slowest") {
  FockSpace sp{3, 2};
  CHECK(sp.dim() == 27);
  CHECK(sp.index_of({0, 0, 0}) == 0);
  CHECK(sp.index_of({0, 0, 1}) == 1);
  CHECK(sp.index_of({1, 0, 0}) == 9);
  CHECK(sp.occupation(9, 0) == 1);
  CHECK(sp.occupation(9, 1) == 0);
  CHECK(sp.stride(0) == 9);
  CHECK(sp.stride(2) == 1);
}

TEST_CASE("tensor product of vacua is the two-mode vacuum") {
  FockKet a(FockSpace{1, 4});
  FockKet b(FockSpace{1, 4});
  FockKet ab = tensor_product(a, b);
  CHECK(ab.space().modes == 2);
  CHECK(std::abs(ab.amplitude({0, 0}) - 1.0) < 1e-15);
  CHECK(std::abs(ab.norm() - 1.0) < 1e-15);
}

TEST_CASE("tensor product |1> x |1> = |1,1>") {
  FockKet a = FockKet::basis(FockSpace{1, 3}, {1});
  FockKet ab = tensor_product(a, a);
  CHECK(std::abs(ab.amplitude({1, 1}) - 1.0) < 1e-15);
}

TEST_CASE("tensor product matches the direct outer product") {
  // (|0>+|1>)/sqrt2 (x) |2> -> (|0,2>+|1,2>)/sqrt2
  FockSpace one{1, 3};
  VecC sup = VecC::Zero(4);
  sup[0] = sup[1] = 1.0 / std::sqrt(2.0);
  FockKet a(one, sup);
  FockKet b = FockKet::basis(one, {2});
  FockKet ab = tensor_product(a, b);
  CHECK(std::abs(ab.amplitude({0, 2}) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(ab.amplitude({1, 2}) - 1.0 / std::sqrt(2.0)) < 1e-15);
  // norm multiplies
  CHECK(std::abs(ab.norm() - a.norm() * b.norm()) < 1e-14);
  // full outer-product check against independently computed amplitudes
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j)
      CHECK(std::abs(ab.amplitude({i, j}) - a.amplitudes()[i] * b.amplitudes()[j]) < 1e-15);
}

TEST_CASE("tensor product rejects mismatched cutoffs") {
  FockKet a(FockSpace{1, 3});
  FockKet b(FockSpace{1, 4});
  CHECK_THROWS_AS((void)tensor_product(a, b), ConfigError);
}

TEST_CASE("identity channel leaves states untouched") {
  KrausChannel id;
  id.cutoff = 4;
  id.operators.push_back(MatC::Identity(5, 5));
  DensityOp rho(FockSpace{2, 4}, oracle::random_density(25, 7));
  DensityOp out = apply_channel(rho, id, 1);
  CHECK((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("full attenuation maps |1><1| to vacuum") {
  DensityOp rho = DensityOp::from_ket(FockKet::basis(FockSpace{1, 3}, {1}));
  DensityOp out = apply_channel(rho, loss_channel(0.0, 3), 0);
  CHECK(std::abs(out.population({0}) - 1.0) < 1e-12);
  CHECK(std::abs(out.trace() - 1.0) < 1e-12);
}

TEST_CASE("eta=0.55 on |1><1| splits 0.45 / 0.55") {
  DensityOp rho = DensityOp::from_ket(FockKet::basis(FockSpace{1, 3}, {1}));
  DensityOp out = apply_channel(rho, loss_channel(0.55, 3), 0);
  CHECK(out.population({0}) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(out.population({1}) == doctest::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("apply_channel agrees with the direct binomial-loss summation") {
  const int cutoff = 5;
  for (double eta : {0.0, 0.3162277660168379, 0.55, 0.9, 1.0}) {
    MatC single = oracle::random_density(cutoff + 1, 99);
    DensityOp rho(FockSpace{1, cutoff}, single);
    DensityOp out = apply_channel(rho, loss_channel(eta, cutoff), 0);
    MatC expected = oracle::lossy_single_mode(single, eta);
    CHECK((out.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(out.trace() - 1.0) < 1e-9);
  }
}

TEST_CASE("channels act on the addressed mode of a register") {
  // embed a random two-mode state, apply loss on mode 1, compare against the
  // direct summation applied on the second index
  const int cutoff = 3, d = cutoff + 1;
  MatC rho2 = oracle::random_density(d * d, 1234);
  DensityOp rho(FockSpace{2, cutoff}, rho2);
  DensityOp out = apply_channel(rho, loss_channel(0.55, cutoff), 1);
  // oracle: apply loss to the second factor by reshaping
  MatC expected = MatC::Zero(d * d, d * d);
  for (int ma = 0; ma < d; ++ma)
    for (int na = 0; na < d; ++na) {
      MatC block(d, d);
      for (int mb = 0; mb < d; ++mb)
        for (int nb = 0; nb < d; ++nb) block(mb, nb) = rho2(ma * d + mb, na * d + nb);
      MatC lossy = oracle::lossy_single_mode(block, 0.55);
      for (int mb = 0; mb < d; ++mb)
        for (int nb = 0; nb < d; ++nb) expected(ma * d + mb, na * d + nb) = lossy(mb, nb);
    }
  CHECK((out.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_channel rejects out-of-range modes") {
  DensityOp rho(FockSpace{2, 3});
  CHECK_THROWS_AS((void)apply_channel(rho, loss_channel(0.5, 3), 2), ConfigError);
}

TEST_CASE("partial trace of |0,0><0,0| is |0><0|") {
  DensityOp rho = DensityOp::from_ket(tensor_product(FockKet(FockSpace{1, 3}),
                                                     FockKet(FockSpace{1, 3})));
  DensityOp r = partial_trace(rho, {0});
  CHECK(r.space().modes == 1);
  CHECK(std::abs(r.population({0}) - 1.0) < 1e-14);
}

TEST_CASE("partial trace of the two-photon path-entangled state is an equal mixture") {
  FockSpace two{2, 3};
  VecC amp = VecC::Zero(two.dim());
  amp[two.index_of({2, 0})] = 1.0 / std::sqrt(2.0);
  amp[two.index_of({0, 2})] = 1.0 / std::sqrt(2.0);
  DensityOp rho = DensityOp::from_ket(FockKet(two, amp));
  DensityOp r = partial_trace(rho, {0});
  CHECK(r.population({2}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.population({0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(r.element({2}, {0})) < 1e-14);
}

TEST_CASE("partial trace of the squeezed-pair state keeps the geometric weights") {
  // gamma = 0.1, cutoff 2: reduced diagonal proportional to (1, 0.01, 0.0001)
  FockKet psi = tmsv_state({cd(0.1, 0.0), 2});
  DensityOp r = partial_trace(DensityOp::from_ket(psi), {0});
  const double w0 = r.population({0});
  CHECK(r.population({1}) / w0 == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(r.population({2}) / w0 == doctest::Approx(0.0001).epsilon(1e-10));
  CHECK(std::abs(r.trace() - 1.0) < 1e-10);
}

TEST_CASE("partial trace matches direct summation on random states") {
  const int cutoff = 3, d = cutoff + 1;
  MatC rho2 = oracle::random_density(d * d, 4321);
  DensityOp rho(FockSpace{2, cutoff}, rho2);
  DensityOp r = partial_trace(rho, {0});
  CHECK((r.matrix() - oracle::trace_out_second(rho2, d)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(r.trace() - rho.trace()) < 1e-10);
}

TEST_CASE("partial trace rejects an empty keep set") {
  DensityOp rho(FockSpace{2, 2});
  CHECK_THROWS_AS((void)partial_trace(rho, {}), ConfigError);
}

TEST_CASE("fidelity of a state with itself is 1") {
  DensityOp rho(FockSpace{1, 4}, oracle::random_density(5, 5));
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fidelity of orthogonal number states is 0") {
  DensityOp a = DensityOp::from_ket(FockKet::basis(FockSpace{1, 3}, {0}));
  DensityOp b = DensityOp::from_ket(FockKet::basis(FockSpace{1, 3}, {1}));
  CHECK(fidelity(a, b) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fidelity against a diagonal mixture follows the closed form") {
  DensityOp pure = DensityOp::from_ket(FockKet::basis(FockSpace{1, 3}, {0}));
  MatC m = MatC::Zero(4, 4);
  m(0, 0) = 0.45;
  m(1, 1) = 0.55;
  DensityOp mix(FockSpace{1, 3}, m);
  CHECK(fidelity(pure, mix) == doctest::Approx(0.45).epsilon(1e-12));
  // symmetric in its arguments
  CHECK(fidelity(mix, pure) == doctest::Approx(0.45).epsilon(1e-12));
  // general diagonal pair against the closed form
  MatC m2 = MatC::Zero(4, 4);
  m2(0, 0) = 0.2;
  m2(1, 1) = 0.5;
  m2(2, 2) = 0.3;
  DensityOp mix2(FockSpace{1, 3}, m2);
  CHECK(fidelity(mix, mix2) ==
        doctest::Approx(oracle::diagonal_fidelity({0.45, 0.55, 0, 0}, {0.2, 0.5, 0.3, 0}))
            .epsilon(1e-10));
}

TEST_CASE("fidelity of pure kets reduces to the squared overlap") {
  VecC a = oracle::random_ket(6, 11), b = oracle::random_ket(6, 12);
  DensityOp ra(FockSpace{1, 5}, a * a.adjoint());
  DensityOp rb(FockSpace{1, 5}, b * b.adjoint());
  const double expected = std::norm((a.adjoint() * b).value());
  CHECK(fidelity(ra, rb) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("fidelity rejects inputs that lost positivity") {
  MatC bad = MatC::Zero(3, 3);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  DensityOp a(FockSpace{1, 2}, bad);
  DensityOp b = DensityOp::from_ket(FockKet::basis(FockSpace{1, 2}, {0}));
  CHECK_THROWS_AS((void)fidelity(a, b), NumericalGuard);
}

TEST_CASE("positivity repair is explicit and guarded") {
  MatC slightly = MatC::Zero(3, 3);
  slightly(0, 0) = 1.0 + 1e-10;
  slightly(1, 1) = -1e-10;
  DensityOp a(FockSpace{1, 2}, slightly);
  DensityOp fixed = a.clipped_to_positive(1e-8);
  CHECK(fixed.min_eigenvalue() >= -1e-15);
  CHECK(std::abs(fixed.trace() - 1.0) < 1e-12);
  MatC very = MatC::Zero(3, 3);
  very(0, 0) = 1.5;
  very(1, 1) = -0.5;
  CHECK_THROWS_AS((void)DensityOp(FockSpace{1, 2}, very).clipped_to_positive(1e-8),
                  NumericalGuard);
}

TEST_CASE("channel application commutes with partial trace over unaffected modes") {
  const int cutoff = 3, d = cutoff + 1;
  DensityOp rho(FockSpace{2, cutoff}, oracle::random_density(d * d, 2025));
  KrausChannel loss = loss_channel(0.7, cutoff);
  DensityOp a = partial_trace(apply_channel(rho, loss, 0), {0});
  DensityOp b = apply_channel(partial_trace(rho, {0}), loss, 0);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("tracing out the second factor of a product recovers the first factor") {
  FockSpace one{1, 3};
  FockKet a(one, oracle::random_ket(4, 31));
  FockKet b(one, oracle::random_ket(4, 32));
  DensityOp joint = DensityOp::from_ket(tensor_product(a, b));
  DensityOp ra = partial_trace(joint, {0});
  DensityOp expected = DensityOp::from_ket(a);
  CHECK((ra.matrix() - expected.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operations preserve hermiticity and positivity") {
  const int cutoff = 3, d = cutoff + 1;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    DensityOp rho(FockSpace{2, cutoff}, oracle::random_density(d * d, seed));
    DensityOp out = partial_trace(apply_channel(rho, loss_channel(0.4, cutoff), 1), {0, 1});
    CHECK(out.hermiticity_defect() < 1e-10);
    CHECK(out.min_eigenvalue() > -1e-8);
  }
}

TEST_SUITE_END();

TEST_SUITE_END();
