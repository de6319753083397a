#include "noon/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "noon/circuit.hpp"
#include "noon/rng.hpp"

namespace noon {

namespace {

// Pi_bin = int_bin |x><x| dx, trapezoid at the grid resolution
MatC raw_bin_povm(double theta, double x_lo, double x_hi, int cutoff, const QuadGrid& grid) {
  const int sub = std::max(2, static_cast<int>(std::lround((x_hi - x_lo) / grid.step())));
  const int d = cutoff + 1;
  MatC out = MatC::Zero(d, d);
  const double h = (x_hi - x_lo) / sub;
  for (int i = 0; i <= sub; ++i) {
    const double w = (i == 0 || i == sub) ? 0.5 * h : h;
    VecC v = quad_eigenket(x_lo + i * h, theta, cutoff);
    out.noalias() += w * (v * v.adjoint());
  }
  return out;
}

MatC loss_adjoint(const MatC& op, double eta, int cutoff) {
  if (eta == 1.0) return op;
  KrausChannel ch = loss_channel(eta, cutoff);
  MatC out = MatC::Zero(op.rows(), op.cols());
  for (const auto& k : ch.operators) out += k.adjoint() * op * k;
  return out;
}

struct Binning {
  int per_bin_steps;
  int n_bins;

  explicit Binning(const TomographySettings& s)
      : per_bin_steps(std::max(1, static_cast<int>(std::lround(s.bin_width / s.grid.step())))),
        n_bins((s.grid.points - 1) / per_bin_steps) {}

  int index(double x, const QuadGrid& g) const {
    const double w = per_bin_steps * g.step();
    auto i = static_cast<int>(std::floor((x - g.x_min) / w));
    return std::clamp(i, 0, n_bins - 1);
  }
  double lo(int i, const QuadGrid& g) const { return g.x(i * per_bin_steps); }
  double hi(int i, const QuadGrid& g) const { return g.x((i + 1) * per_bin_steps); }
};

struct Cell {
  MatC povm;      // single-mode element, or factored pair for two-mode data
  MatC povm_b;    // second factor (two-mode only)
  double count;
};

struct IterationSpace {
  std::vector<Cell> cells;
  double total = 0.0;
  Eigen::Index dim = 0;
  bool two_mode = false;
  int d = 0;  // levels per mode
};

double loglik(const IterationSpace& sp, const std::vector<double>& probs) {
  double l = 0.0;
  for (std::size_t j = 0; j < sp.cells.size(); ++j)
    l += (sp.cells[j].count / sp.total) * std::log(std::max(probs[j], 1e-300));
  return l;
}

std::vector<double> cell_probs(const IterationSpace& sp, const MatC& rho) {
  std::vector<double> p(sp.cells.size());
  if (!sp.two_mode) {
    for (std::size_t j = 0; j < sp.cells.size(); ++j)
      p[j] = std::max(0.0, (sp.cells[j].povm * rho).trace().real());
    return p;
  }
  const int d = sp.d;
  for (std::size_t j = 0; j < sp.cells.size(); ++j) {
    const auto& c = sp.cells[j];
    cd acc = 0.0;
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        for (int mp = 0; mp < d; ++mp)
          for (int np = 0; np < d; ++np)
            acc += rho(m * d + n, mp * d + np) * c.povm(mp, m) * c.povm_b(np, n);
    p[j] = std::max(0.0, acc.real());
  }
  return p;
}

MatC build_r(const IterationSpace& sp, const std::vector<double>& probs) {
  MatC r = MatC::Zero(sp.dim, sp.dim);
  for (std::size_t j = 0; j < sp.cells.size(); ++j) {
    const double f = sp.cells[j].count / sp.total;
    const double coeff = f / std::max(probs[j], 1e-300);
    if (!sp.two_mode) {
      r.noalias() += coeff * sp.cells[j].povm;
    } else {
      const int d = sp.d;
      const auto& c = sp.cells[j];
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
          for (int mp = 0; mp < d; ++mp)
            for (int np = 0; np < d; ++np)
              r(m * d + n, mp * d + np) += coeff * c.povm(m, mp) * c.povm_b(n, np);
    }
  }
  return r;
}

TomographyResult iterate(const IterationSpace& sp, const TomographySettings& settings,
                         FockSpace state_space) {
  TomographyResult res;
  MatC rho = MatC::Identity(sp.dim, sp.dim) / static_cast<double>(sp.dim);
  auto probs = cell_probs(sp, rho);
  double l = loglik(sp, probs);
  res.loglik_trace.push_back(l);

  for (int it = 0; it < settings.max_iterations; ++it) {
    MatC r = build_r(sp, probs);
    MatC next = r * rho * r;
    next = (next + next.adjoint()) / 2.0;
    next /= next.trace().real();
    auto next_probs = cell_probs(sp, next);
    double next_l = loglik(sp, next_probs);

    // R rho R occasionally overshoots; fall back to a damped step that keeps
    // the likelihood non-decreasing
    double eps = 1.0;
    while (next_l < l - 1e-12 * std::abs(l) && eps > 1.0 / 128.0) {
      eps /= 2.0;
      MatC d = MatC::Identity(sp.dim, sp.dim) + eps * r;
      next = d * rho * d.adjoint();
      next = (next + next.adjoint()) / 2.0;
      next /= next.trace().real();
      next_probs = cell_probs(sp, next);
      next_l = loglik(sp, next_probs);
      ++res.dilution_steps;
    }
    if (next_l < l - 1e-12 * std::abs(l)) {
      res.monotone = false;
      break;
    }
    rho = std::move(next);
    probs = std::move(next_probs);
    res.loglik_trace.push_back(next_l);
    ++res.iterations;
    const double rel = std::abs(next_l - l) / std::max(1.0, std::abs(next_l));
    l = next_l;
    if (rel < settings.convergence_tol) {
      res.converged = true;
      break;
    }
  }
  res.final_loglik = l;
  res.rho = DensityOp(state_space, std::move(rho));
  return res;
}

}  // namespace

MatC binned_povm(double theta, double x_lo, double x_hi, double eta, int cutoff,
                 const QuadGrid& grid) {
  if (eta <= 0.0 || eta > 1.0) throw ConfigError("efficiency must lie in (0,1]");
  return loss_adjoint(raw_bin_povm(theta, x_lo, x_hi, cutoff, grid), eta, cutoff);
}

TomographyResult maxlik_reconstruct(const QuadratureDataset& data,
                                    const TomographySettings& settings) {
  if (data.records.empty()) throw ConfigError("empty dataset");
  std::set<double> phases;
  for (const auto& r : data.records) phases.insert(r.theta);
  if (phases.size() < 2) throw ConfigError("need at least two distinct phases");

  const Binning binning(settings);
  std::map<std::pair<double, int>, double> counts;
  for (const auto& r : data.records) ++counts[{r.theta, binning.index(r.x, settings.grid)}];

  IterationSpace sp;
  sp.dim = settings.cutoff + 1;
  sp.d = settings.cutoff + 1;
  sp.total = static_cast<double>(data.records.size());
  for (const auto& [key, count] : counts) {
    Cell c;
    c.povm = binned_povm(key.first, binning.lo(key.second, settings.grid),
                         binning.hi(key.second, settings.grid), settings.eta, settings.cutoff,
                         settings.grid);
    c.count = count;
    sp.cells.push_back(std::move(c));
  }
  return iterate(sp, settings, FockSpace{1, settings.cutoff});
}

TomographyResult maxlik_reconstruct(const JointQuadratureDataset& data,
                                    const TomographySettings& settings) {
  if (data.records.empty()) throw ConfigError("empty dataset");
  std::set<std::pair<double, double>> pairs;
  for (const auto& r : data.records) pairs.insert({r.theta_a, r.theta_b});
  if (pairs.size() < 2) throw ConfigError("need at least two distinct phase pairs");

  const Binning binning(settings);
  std::map<std::tuple<double, double, int, int>, double> counts;
  for (const auto& r : data.records)
    ++counts[{r.theta_a, r.theta_b, binning.index(r.x_a, settings.grid),
              binning.index(r.x_b, settings.grid)}];

  // dedup single-mode POVM factors per (theta, bin)
  std::map<std::pair<double, int>, MatC> factors;
  auto factor = [&](double theta, int bin) -> const MatC& {
    auto it = factors.find({theta, bin});
    if (it == factors.end())
      it = factors
               .emplace(std::make_pair(theta, bin),
                        binned_povm(theta, binning.lo(bin, settings.grid),
                                    binning.hi(bin, settings.grid), settings.eta,
                                    settings.cutoff, settings.grid))
               .first;
    return it->second;
  };

  IterationSpace sp;
  sp.two_mode = true;
  sp.d = settings.cutoff + 1;
  sp.dim = static_cast<Eigen::Index>(sp.d) * sp.d;
  sp.total = static_cast<double>(data.records.size());
  for (const auto& [key, count] : counts) {
    Cell c;
    c.povm = factor(std::get<0>(key), std::get<2>(key));
    c.povm_b = factor(std::get<1>(key), std::get<3>(key));
    c.count = count;
    sp.cells.push_back(std::move(c));
  }
  return iterate(sp, settings, FockSpace{2, settings.cutoff});
}

namespace {

template <typename Dataset>
Eigen::MatrixXd bootstrap_impl(const Dataset& data, const TomographySettings& settings) {
  if (settings.bootstrap_resamples < 10)
    throw ConfigError("bootstrap needs at least 10 resamples");
  const std::size_t n = data.records.size();
  std::vector<MatC> replicas;
  for (int r = 0; r < settings.bootstrap_resamples; ++r) {
    Rng rng(chunk_seed(settings.bootstrap_seed, r));
    Dataset resampled;
    resampled.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      resampled.records.push_back(data.records[rng.below(n)]);
    replicas.push_back(maxlik_reconstruct(resampled, settings).rho.matrix());
  }
  const auto rows = replicas.front().rows(), cols = replicas.front().cols();
  Eigen::MatrixXd sd(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      cd mean = 0.0;
      for (const auto& m : replicas) mean += m(i, j);
      mean /= static_cast<double>(replicas.size());
      double var = 0.0;
      for (const auto& m : replicas) var += std::norm(m(i, j) - mean);
      sd(i, j) = std::sqrt(var / replicas.size());
    }
  return sd;
}

}  // namespace

Eigen::MatrixXd bootstrap_errors(const QuadratureDataset& data,
                                 const TomographySettings& settings) {
  return bootstrap_impl(data, settings);
}

Eigen::MatrixXd bootstrap_errors(const JointQuadratureDataset& data,
                                 const TomographySettings& settings) {
  return bootstrap_impl(data, settings);
}

}  // namespace noon
