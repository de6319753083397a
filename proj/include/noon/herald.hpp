#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "noon/circuit.hpp"
#include "noon/fock.hpp"

namespace noon {

/// Click detector (SPCM). Non-number-resolving by default; the resolving mode
/// replaces the click element by the efficiency-smeared one-photon projector.
struct DetectorModel {
  double efficiency = 0.15;
  bool number_resolving = false;
};

/// Conditioned state of the kept modes plus the per-pulse probability of the
/// detection pattern. `null_herald` tags patterns of vanishing probability.
struct HeraldOutcome {
  DensityOp state;
  double probability = 0.0;
  bool null_herald = false;
};

/// {E_noclick, E_click} on a single mode.
///   E_noclick = sum_n (1-eta)^n |n><n|,  E_click = I - E_noclick
/// (resolving: E_click = sum_n n eta (1-eta)^{n-1} |n><n|).
std::pair<MatC, MatC> spcm_povm(const DetectorModel& d, int cutoff);

/// One physical detector watching one or more modes (temporal sublabels of the
/// same spatial output land in a group; the detector fires if any of them does).
struct DetectorGroup {
  std::vector<int> modes;
};

enum class ClickOutcome { NoClick, Click };

/// Conditions on an arbitrary click/no-click pattern across detector groups,
/// traces the detector modes (and any other non-kept mode) out, and normalizes.
HeraldOutcome herald_pattern(const DensityOp& rho, const std::vector<DetectorGroup>& groups,
                             const std::vector<ClickOutcome>& pattern, const DetectorModel& d,
                             const std::vector<int>& keep);
HeraldOutcome herald_pattern(const FockKet& psi, const std::vector<DetectorGroup>& groups,
                             const std::vector<ClickOutcome>& pattern, const DetectorModel& d,
                             const std::vector<int>& keep);

/// Coincidence click of two detectors.
HeraldOutcome herald_coincidence(const DensityOp& rho,
                                 const std::pair<DetectorGroup, DetectorGroup>& detectors,
                                 const DetectorModel& d, const std::vector<int>& keep);
HeraldOutcome herald_coincidence(const FockKet& psi,
                                 const std::pair<DetectorGroup, DetectorGroup>& detectors,
                                 const DetectorModel& d, const std::vector<int>& keep);

struct SubtractionResult {
  FockKet ket;      // unnormalized
  double weight;    // squared norm
  bool vanished;    // true when the input had no photon in the mode
};

/// Applies the annihilation operator to one mode.
SubtractionResult photon_subtract(const FockKet& psi, int mode);

/// Factorization of c^N + d^N into N/2 two-photon-subtraction factors
/// (c^2 + e^{i psi_k} d^2), with the residuals of both the corrected phase set
/// and the literal phase set 4 pi k / N evaluated on a truncated space.
struct NoonFactorization {
  int n = 0;
  std::vector<double> phases;        // psi_k = pi - pi (2k-1) / (N/2)
  double residual = 0.0;             // ||prod - (c^N + d^N)||_F with `phases`
  std::vector<double> naive_phases;  // 4 pi k / N
  double naive_residual_plus = 0.0;  // vs c^N + d^N
  double naive_residual_minus = 0.0; // vs c^N - d^N
  std::string naive_target;          // "c^N + d^N" or "c^N - d^N"
};

NoonFactorization noon_factorization(int n, int cutoff = 8);

/// Two two-mode-squeezed pairs (A,C) and (B,D), optionally followed by extra
/// vacuum modes, as one pure ket with mode order [A, B, C, D, extras...].
FockKet two_pair_ket(double gamma, int cutoff, int extra_vacuum_modes = 0);

/// (|N,0> + sign |0,N>)/sqrt(2) over two modes.
FockKet noon_ket(int n, int cutoff, int sign = +1);

/// The N00N phase this project's beam-splitter convention heralds: sign -1.
inline FockKet heralded_noon_target(int n, int cutoff) { return noon_ket(n, cutoff, -1); }

/// Parameters of the coincidence-heralding pipeline. Channel losses are folded
/// into the detector efficiencies (exactly equivalent for balanced arms).
struct ProtocolParams {
  double gamma = 0.0836660026534076;  // gamma^2 ~ 0.007
  int cutoff = 6;
  DetectorModel detector{0.15, false};
  double loss_db_c = 0.0;
  double loss_db_d = 0.0;
  std::optional<DistinguishabilityModel> delay;  // temporal mismatch of mode D
};

/// Full two-photon pipeline: mix C and D on the symmetric splitter, condition
/// on the double click, return the state of A and B.
HeraldOutcome herald_two_photon(const ProtocolParams& p);

/// Cascade for even N (N = 2 degenerates to herald_two_photon; N = 4 adds the
/// per-arm photon-subtraction taps and the second splitter stage).
HeraldOutcome higher_order_herald(int n, const ProtocolParams& p, double r_tap = 0.05);

/// Per-pulse success probability of the general N-photon cascade, computed by
/// composing the conditioned two-mode maps stage by stage (no full register).
double higher_order_probability(int n, double gamma, const DetectorModel& d, double r_tap,
                                int cutoff);

struct RateModel {
  double per_pulse = 0.0;
  double rate_hz = 0.0;
};

/// Exact double-coincidence probability of the two-photon pipeline times the
/// pulse repetition rate.
RateModel coincidence_rate_model(double gamma, double eta_spcm, double per_arm_loss_db,
                                 double rep_rate_hz, int cutoff = 6);

}  // namespace noon
