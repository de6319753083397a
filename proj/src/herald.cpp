#include "noon/herald.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace noon {

namespace {

constexpr double kNullThreshold = 1e-300;

double group_weight(int total_photons, const DetectorModel& d, ClickOutcome outcome) {
  const double miss = std::pow(1.0 - d.efficiency, total_photons);
  if (outcome == ClickOutcome::NoClick) return miss;
  if (!d.number_resolving) return 1.0 - miss;
  // efficiency-smeared one-photon projector
  if (total_photons == 0) return 0.0;
  return total_photons * d.efficiency * std::pow(1.0 - d.efficiency, total_photons - 1);
}

struct ConditionSetup {
  std::vector<std::int64_t> keep_off;
  std::vector<std::int64_t> traced_off;
  std::vector<double> weights;  // aligned with traced_off
  FockSpace keep_space;
};

ConditionSetup build_setup(const FockSpace& sp, const std::vector<DetectorGroup>& groups,
                           const std::vector<ClickOutcome>& pattern,
                           const std::vector<DetectorModel>& models,
                           const std::vector<int>& keep) {
  if (groups.size() != pattern.size() || groups.size() != models.size())
    throw ConfigError("detector groups, pattern and models must align");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end())
    throw ConfigError("duplicate mode in keep set");
  std::vector<int> group_of(sp.modes, -1);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (int m : groups[g].modes) {
      sp.check_mode(m);
      if (group_of[m] != -1) throw ConfigError("mode assigned to two detector groups");
      if (std::binary_search(keep_sorted.begin(), keep_sorted.end(), m))
        throw ConfigError("detector modes must be disjoint from kept modes");
      group_of[m] = static_cast<int>(g);
    }
  for (int m : keep_sorted) sp.check_mode(m);

  std::vector<int> traced;
  for (int m = 0; m < sp.modes; ++m)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), m)) traced.push_back(m);

  const int d = sp.level_count();
  ConditionSetup out;
  out.keep_space = FockSpace{static_cast<int>(keep_sorted.size()), sp.cutoff};
  out.keep_off.push_back(0);
  for (int m : keep_sorted) {
    std::vector<std::int64_t> next;
    next.reserve(out.keep_off.size() * d);
    for (std::int64_t o : out.keep_off)
      for (int n = 0; n < d; ++n) next.push_back(o + n * sp.stride(m));
    out.keep_off = std::move(next);
  }

  // walk traced occupations with a mixed-radix counter, tracking group totals
  std::vector<int> occ(traced.size(), 0);
  const std::size_t n_traced = traced.size();
  std::vector<int> totals(groups.size(), 0);
  while (true) {
    std::int64_t off = 0;
    std::fill(totals.begin(), totals.end(), 0);
    for (std::size_t i = 0; i < n_traced; ++i) {
      off += occ[i] * sp.stride(traced[i]);
      int g = group_of[traced[i]];
      if (g >= 0) totals[g] += occ[i];
    }
    double w = 1.0;
    for (std::size_t g = 0; g < groups.size(); ++g)
      w *= group_weight(totals[g], models[g], pattern[g]);
    out.traced_off.push_back(off);
    out.weights.push_back(w);
    // increment
    std::size_t i = 0;
    for (; i < n_traced; ++i) {
      if (++occ[i] <= sp.cutoff) break;
      occ[i] = 0;
    }
    if (i == n_traced) break;
    if (n_traced == 0) break;
  }
  return out;
}

HeraldOutcome finish(const ConditionSetup& s, MatC cond) {
  DensityOp unnorm(s.keep_space, std::move(cond));
  const double p = unnorm.trace();
  if (!(p > kNullThreshold))
    return HeraldOutcome{DensityOp(s.keep_space), std::max(p, 0.0), true};
  return HeraldOutcome{DensityOp(s.keep_space, unnorm.matrix() / p), p, false};
}

}  // namespace

std::pair<MatC, MatC> spcm_povm(const DetectorModel& d, int cutoff) {
  if (d.efficiency < 0.0 || d.efficiency > 1.0)
    throw ConfigError("detector efficiency must lie in [0,1]");
  const int n_levels = cutoff + 1;
  MatC no_click = MatC::Zero(n_levels, n_levels);
  MatC click = MatC::Zero(n_levels, n_levels);
  for (int n = 0; n < n_levels; ++n) {
    no_click(n, n) = group_weight(n, d, ClickOutcome::NoClick);
    click(n, n) = group_weight(n, d, ClickOutcome::Click);
  }
  return {no_click, click};
}

HeraldOutcome herald_pattern(const DensityOp& rho, const std::vector<DetectorGroup>& groups,
                             const std::vector<ClickOutcome>& pattern, const DetectorModel& d,
                             const std::vector<int>& keep) {
  std::vector<DetectorModel> models(groups.size(), d);
  auto s = build_setup(rho.space(), groups, pattern, models, keep);
  const auto nk = static_cast<Eigen::Index>(s.keep_off.size());
  MatC cond = MatC::Zero(nk, nk);
  for (std::size_t t = 0; t < s.traced_off.size(); ++t) {
    const double w = s.weights[t];
    if (w == 0.0) continue;
    const std::int64_t to = s.traced_off[t];
    for (Eigen::Index a = 0; a < nk; ++a)
      for (Eigen::Index b = 0; b < nk; ++b)
        cond(a, b) += w * rho.matrix()(s.keep_off[a] + to, s.keep_off[b] + to);
  }
  return finish(s, std::move(cond));
}

namespace {

HeraldOutcome herald_ket_impl(const FockKet& psi, const std::vector<DetectorGroup>& groups,
                              const std::vector<ClickOutcome>& pattern,
                              const std::vector<DetectorModel>& models,
                              const std::vector<int>& keep) {
  auto s = build_setup(psi.space(), groups, pattern, models, keep);
  const auto nk = static_cast<Eigen::Index>(s.keep_off.size());
  MatC cond = MatC::Zero(nk, nk);
  VecC col(nk);
  for (std::size_t t = 0; t < s.traced_off.size(); ++t) {
    const double w = s.weights[t];
    if (w == 0.0) continue;
    const std::int64_t to = s.traced_off[t];
    for (Eigen::Index a = 0; a < nk; ++a) col[a] = psi.amplitudes()[s.keep_off[a] + to];
    cond.noalias() += w * (col * col.adjoint());
  }
  return finish(s, std::move(cond));
}

}  // namespace

HeraldOutcome herald_pattern(const FockKet& psi, const std::vector<DetectorGroup>& groups,
                             const std::vector<ClickOutcome>& pattern, const DetectorModel& d,
                             const std::vector<int>& keep) {
  std::vector<DetectorModel> models(groups.size(), d);
  return herald_ket_impl(psi, groups, pattern, models, keep);
}

HeraldOutcome herald_coincidence(const DensityOp& rho,
                                 const std::pair<DetectorGroup, DetectorGroup>& detectors,
                                 const DetectorModel& d, const std::vector<int>& keep) {
  return herald_pattern(rho, {detectors.first, detectors.second},
                        {ClickOutcome::Click, ClickOutcome::Click}, d, keep);
}

HeraldOutcome herald_coincidence(const FockKet& psi,
                                 const std::pair<DetectorGroup, DetectorGroup>& detectors,
                                 const DetectorModel& d, const std::vector<int>& keep) {
  return herald_pattern(psi, {detectors.first, detectors.second},
                        {ClickOutcome::Click, ClickOutcome::Click}, d, keep);
}

SubtractionResult photon_subtract(const FockKet& psi, int mode) {
  psi.space().check_mode(mode);
  VecC out = apply_one_mode(psi.space(), psi.amplitudes(),
                            annihilation_matrix(psi.space().cutoff), mode);
  const double w = out.squaredNorm();
  return SubtractionResult{FockKet(psi.space(), std::move(out)), w, w < 1e-30};
}

namespace {

MatC kron2(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MatC mode_power(const MatC& a, int n) {
  MatC out = MatC::Identity(a.rows(), a.cols());
  for (int i = 0; i < n; ++i) out = a * out;
  return out;
}

}  // namespace

NoonFactorization noon_factorization(int n, int cutoff) {
  if (n < 2 || n % 2 != 0) throw ConfigError("factorization requires even N >= 2");
  if (cutoff < n) throw ConfigError("cutoff too small for N");
  const int d = cutoff + 1;
  const MatC a = annihilation_matrix(cutoff);
  const MatC id = MatC::Identity(d, d);
  const MatC c2 = kron2(mode_power(a, 2), id);
  const MatC d2 = kron2(id, mode_power(a, 2));
  const MatC target_plus = kron2(mode_power(a, n), id) + kron2(id, mode_power(a, n));
  const MatC target_minus = kron2(mode_power(a, n), id) - kron2(id, mode_power(a, n));

  NoonFactorization out;
  out.n = n;
  const int m = n / 2;
  auto product_of = [&](const std::vector<double>& phases) {
    MatC prod = MatC::Identity(d * d, d * d);
    for (double psi : phases) prod = (c2 + std::exp(cd(0.0, psi)) * d2) * prod;
    return prod;
  };
  for (int k = 1; k <= m; ++k) out.phases.push_back(std::numbers::pi * (1.0 - (2.0 * k - 1.0) / m));
  out.residual = (product_of(out.phases) - target_plus).norm();

  for (int k = 1; k <= m; ++k) out.naive_phases.push_back(4.0 * std::numbers::pi * k / n);
  MatC naive = product_of(out.naive_phases);
  out.naive_residual_plus = (naive - target_plus).norm();
  out.naive_residual_minus = (naive - target_minus).norm();
  out.naive_target =
      out.naive_residual_plus <= out.naive_residual_minus ? "c^N + d^N" : "c^N - d^N";
  return out;
}

FockKet two_pair_ket(double gamma, int cutoff, int extra_vacuum_modes) {
  const double discarded = std::pow(std::abs(gamma), 2 * (cutoff + 1));
  if (std::abs(gamma) >= 1.0) throw ConfigError("|gamma| must be below 1");
  if (discarded > 1e-6)
    throw NumericalGuard("source truncation leakage above 1e-6; raise the cutoff");
  FockSpace sp{4 + extra_vacuum_modes, cutoff};
  VecC amp = VecC::Zero(sp.dim());
  std::vector<int> occ(sp.modes, 0);
  for (int na = 0; na <= cutoff; ++na)
    for (int nb = 0; nb <= cutoff; ++nb) {
      occ[0] = na;
      occ[1] = nb;
      occ[2] = na;
      occ[3] = nb;
      amp[sp.index_of(occ)] = std::pow(gamma, na + nb);
    }
  amp /= amp.norm();
  return FockKet(sp, std::move(amp));
}

FockKet noon_ket(int n, int cutoff, int sign) {
  if (n > cutoff) throw ConfigError("cutoff too small for N");
  FockSpace sp{2, cutoff};
  VecC amp = VecC::Zero(sp.dim());
  const double s = 1.0 / std::sqrt(2.0);
  amp[sp.index_of({n, 0})] = s;
  amp[sp.index_of({0, n})] = sign >= 0 ? s : -s;
  return FockKet(sp, std::move(amp));
}

namespace {

DetectorModel arm_detector(const ProtocolParams& p, double loss_db) {
  DetectorModel d = p.detector;
  d.efficiency *= db_to_transmission(loss_db);
  return d;
}

}  // namespace

HeraldOutcome herald_two_photon(const ProtocolParams& p) {
  const DetectorModel det_c = arm_detector(p, p.loss_db_c);
  const DetectorModel det_d = arm_detector(p, p.loss_db_d);
  if (!p.delay || p.delay->overlap() == 1.0) {
    FockKet psi = two_pair_ket(p.gamma, p.cutoff);
    psi = beam_splitter(psi, 2, 3, 0.5, 0.0);
    return herald_ket_impl(psi, {{{2}}, {{3}}}, {ClickOutcome::Click, ClickOutcome::Click},
                           {det_c, det_d}, {0, 1});
  }
  // Temporal mismatch: mode D splits into matched (3) and orthogonal (4)
  // components; the orthogonal part meets a vacuum partner (5) on the splitter.
  FockKet psi = two_pair_ket(p.gamma, p.cutoff);
  psi = delay_embedding(psi, 3, *p.delay);
  psi = tensor_product(psi, FockKet(FockSpace{1, p.cutoff}));
  psi = beam_splitter(psi, 2, 3, 0.5, 0.0);
  psi = beam_splitter(psi, 5, 4, 0.5, 0.0);
  return herald_ket_impl(psi, {{{2, 5}}, {{3, 4}}}, {ClickOutcome::Click, ClickOutcome::Click},
                         {det_c, det_d}, {0, 1});
}

HeraldOutcome higher_order_herald(int n, const ProtocolParams& p, double r_tap) {
  if (n == 2) return herald_two_photon(p);
  if (n != 4) throw ConfigError("full-state cascade supports N in {2,4}");
  if (p.cutoff < 4) throw ConfigError("cutoff too small for N=4");
  if (r_tap <= 0.0 || r_tap >= 1.0) throw ConfigError("tap reflectivity must lie in (0,1)");
  const DetectorModel det_c = arm_detector(p, p.loss_db_c);
  const DetectorModel det_d = arm_detector(p, p.loss_db_d);

  FockKet psi = two_pair_ket(p.gamma, p.cutoff, 2);  // [A,B,C,D,T1,T2]
  psi = beam_splitter(psi, 2, 3, 0.5, 0.0);
  psi = beam_splitter(psi, 2, 4, r_tap, 0.0);
  psi = beam_splitter(psi, 3, 5, r_tap, 0.0);
  // interferometric alignment of the second splitter stage; pins the heralded
  // output to the photon-number-balanced (|4,0> - |0,4>)/sqrt2 component
  psi = phase_shift(psi, 3, std::numbers::pi / 2.0);
  psi = beam_splitter(psi, 2, 3, 0.5, 0.0);
  return herald_ket_impl(
      psi, {{{4}}, {{5}}, {{2}}, {{3}}},
      {ClickOutcome::Click, ClickOutcome::Click, ClickOutcome::Click, ClickOutcome::Click},
      {det_c, det_d, det_c, det_d}, {0, 1});
}

double higher_order_probability(int n, double gamma, const DetectorModel& d, double r_tap,
                                int cutoff) {
  if (n < 2 || n % 2 != 0) throw ConfigError("cascade requires even N >= 2");
  if (cutoff < n) throw ConfigError("cutoff too small for N");
  if (r_tap <= 0.0 || r_tap >= 1.0) throw ConfigError("tap reflectivity must lie in (0,1)");
  const int dlev = cutoff + 1;
  const FockSpace two{2, cutoff};
  const FockSpace four{4, cutoff};

  // unconditioned reduced state of the detected pair is a diagonal mixture
  MatC rho = MatC::Zero(two.dim(), two.dim());
  {
    double norm = 0.0;
    for (int a = 0; a <= cutoff; ++a)
      for (int b = 0; b <= cutoff; ++b) norm += std::pow(gamma, 2 * (a + b));
    for (int a = 0; a <= cutoff; ++a)
      for (int b = 0; b <= cutoff; ++b)
        rho(two.index_of({a, b}), two.index_of({a, b})) = std::pow(gamma, 2 * (a + b)) / norm;
  }

  // factor phases for c^N + d^N; the tap gadget realizes c^2 - e^{i chi} d^2
  // with shifter setting chi, so chi_k = psi_k - pi
  const int m = n / 2;
  double probability = 1.0;
  for (int k = 1; k <= m; ++k) {
    const double psi_k = std::numbers::pi * (1.0 - (2.0 * k - 1.0) / m);
    const double chi = psi_k - std::numbers::pi;
    // stage Kraus operators M_t = <t1,t2| U_stage |0,0>_taps on the pair
    std::vector<MatC> kraus;
    std::vector<double> weights;
    std::vector<VecC> evolved(two.dim());
    for (std::int64_t col = 0; col < two.dim(); ++col) {
      std::vector<int> occ{two.occupation(col, 0), two.occupation(col, 1), 0, 0};
      FockKet basis = FockKet::basis(four, occ);
      FockKet s = beam_splitter(basis, 0, 2, r_tap, 0.0);
      s = beam_splitter(s, 1, 3, r_tap, 0.0);
      s = phase_shift(s, 3, chi / 2.0);
      s = beam_splitter(s, 2, 3, 0.5, 0.0);
      evolved[col] = s.amplitudes();
    }
    for (int t1 = 0; t1 <= cutoff; ++t1)
      for (int t2 = 0; t2 <= cutoff; ++t2) {
        const double w = group_weight(t1, d, ClickOutcome::Click) *
                         group_weight(t2, d, ClickOutcome::Click);
        if (w == 0.0) continue;
        MatC mt(two.dim(), two.dim());
        for (std::int64_t col = 0; col < two.dim(); ++col)
          for (std::int64_t row = 0; row < two.dim(); ++row) {
            std::vector<int> occ{two.occupation(row, 0), two.occupation(row, 1), t1, t2};
            mt(row, col) = evolved[col][four.index_of(occ)];
          }
        kraus.push_back(std::move(mt));
        weights.push_back(w);
      }
    MatC next = MatC::Zero(two.dim(), two.dim());
    for (std::size_t i = 0; i < kraus.size(); ++i)
      next += weights[i] * (kraus[i] * rho * kraus[i].adjoint());
    const double p_stage = next.trace().real();
    if (!(p_stage > kNullThreshold)) return 0.0;
    probability *= p_stage;
    rho = next / p_stage;
    (void)dlev;
  }
  return probability;
}

RateModel coincidence_rate_model(double gamma, double eta_spcm, double per_arm_loss_db,
                                 double rep_rate_hz, int cutoff) {
  if (per_arm_loss_db < 0.0) throw ConfigError("loss must be nonnegative");
  ProtocolParams p;
  p.gamma = gamma;
  p.cutoff = cutoff;
  p.detector = DetectorModel{eta_spcm, false};
  p.loss_db_c = per_arm_loss_db;
  p.loss_db_d = per_arm_loss_db;
  if (gamma == 0.0) return RateModel{0.0, 0.0};
  HeraldOutcome h = herald_two_photon(p);
  return RateModel{h.probability, h.probability * rep_rate_hz};
}

}  // namespace noon
