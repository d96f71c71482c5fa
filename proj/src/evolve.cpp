// Copyright 2026 The fwmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fwm/evolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "fwm/errors.hpp"
#include "fwm/liouvillian.hpp"

namespace fwm {

DensityMatrix::DensityMatrix(const FockBasis& basis, DenseMatrix data)
    : basis_(basis), data_(std::move(data)) {
  const auto n = static_cast<Eigen::Index>(basis_.dim());
  if (data_.rows() != n || data_.cols() != n) {
    throw std::invalid_argument("density matrix data does not match basis dimension");
  }
}

DensityMatrix make_fock_state(const FockBasis& basis, const Occupation& occ) {
  const auto i = static_cast<Eigen::Index>(basis.index(occ));
  DensityMatrix rho(basis);
  rho.data()(i, i) = 1.0;
  return rho;
}

std::vector<double> uniform_grid(double t_max, double dt) {
  if (!(t_max > 0.0) || !(dt > 0.0)) throw std::invalid_argument("grid needs t_max > 0 and dt > 0");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid[i] = static_cast<double>(i) * dt;
  return grid;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double hermiticity_residual(const DenseMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

void symmetrize(BlockState& blocks) {
  for (auto& b : blocks) {
    const Eigen::Index n = b.rows();
    for (Eigen::Index c = 0; c < n; ++c) {
      b(c, c) = Complex(b(c, c).real(), 0.0);
      for (Eigen::Index r = 0; r < c; ++r) {
        const Complex avg = 0.5 * (b(r, c) + std::conj(b(c, r)));
        b(r, c) = avg;
        b(c, r) = std::conj(avg);
      }
    }
  }
}

double trace_of(const BlockState& blocks) {
  double t = 0.0;
  for (const auto& b : blocks) t += b.diagonal().real().sum();
  return t;
}

double max_abs(const BlockState& blocks) {
  double m = 0.0;
  for (const auto& b : blocks) {
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  }
  return m;
}

double min_eigenvalue(const BlockState& blocks) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    if (b.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, solver.eigenvalues().minCoeff());
  }
  return lo;
}

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty() || grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("time grid must increase strictly");
  }
}

}  // namespace

EvolveStats evolve(const DensityMatrix& rho0, const ModelSpec& spec, const std::vector<double>& t_grid,
                   const EvolveOptions& options, const SnapshotSink& sink) {
  spec.validate();
  validate_grid(t_grid);
  if (rho0.basis().n_max() != spec.n_max) throw std::invalid_argument("initial state cutoff differs from n_max");
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (hermiticity_residual(rho0.data()) > 1e-10) throw std::invalid_argument("initial state is not Hermitian");

  const FockBasis& basis = rho0.basis();
  const HamiltonianParts parts = build_hamiltonian_parts(spec, basis);
  std::optional<LindbladGenerator> gen;
  if (options.use_sectors) {
    gen.emplace(spec, parts, conserved_charges(spec));
    if (!gen->layout().supports(rho0)) gen.reset();
  }
  if (!gen) gen.emplace(spec, parts);
  const SectorLayout& layout = gen->layout();

  EvolveStats stats;
  stats.sectors = layout.sector_count();
  stats.stored_elements = layout.stored_elements();

  BlockState y = to_blocks(layout, rho0);
  symmetrize(y);
  const double expected_trace = trace_of(y);

  auto emit = [&](double t) {
    std::optional<double> lowest;
    if (options.audit_positivity) {
      lowest = min_eigenvalue(y);
      if (*lowest < options.eigenvalue_abort) {
        throw NumericalError("density matrix lost positivity (min eigenvalue " + std::to_string(*lowest) + ")", t);
      }
    }
    const DensityMatrix rho = to_dense(layout, y);
    sink(Snapshot{t, rho, lowest});
  };

  std::vector<double> breaks;
  for (double b : envelope_breakpoints(spec.envelope)) {
    if (b > 0.0) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());

  BlockState k1 = gen->zero_state(), k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1;
  BlockState stage = k1, y_new = k1;
  const std::size_t sectors = y.size();

  double t = 0.0;
  double segment_start = 0.0;
  auto eval = [&](double s, const BlockState& x, BlockState& out) {
    gen->apply(envelope_value_in_segment(spec.envelope, s, segment_start), x, out, true);
    ++stats.rhs_evaluations;
  };

  // Single pass per block: out = y + h * sum(coef * k).
  auto combine = [&](BlockState& out, double h, std::initializer_list<std::pair<double, const BlockState*>> terms) {
    std::array<double, 6> c{};
    std::array<const BlockState*, 6> src{};
    std::size_t count = 0;
    for (const auto& [coef, k] : terms) {
      if (coef == 0.0) continue;
      c[count] = h * coef;
      src[count++] = k;
    }
    for (std::size_t s = 0; s < sectors; ++s) {
      const auto n = static_cast<std::size_t>(2 * y[s].size());
      const double* base = reinterpret_cast<const double*>(y[s].data());
      double* dst = reinterpret_cast<double*>(out[s].data());
      std::array<const double*, 6> p{};
      for (std::size_t j = 0; j < count; ++j) p[j] = reinterpret_cast<const double*>((*src[j])[s].data());
      switch (count) {
        case 1:
          for (std::size_t i = 0; i < n; ++i) dst[i] = base[i] + c[0] * p[0][i];
          break;
        case 2:
          for (std::size_t i = 0; i < n; ++i) dst[i] = base[i] + (c[0] * p[0][i] + c[1] * p[1][i]);
          break;
        case 3:
          for (std::size_t i = 0; i < n; ++i) dst[i] = base[i] + (c[0] * p[0][i] + c[1] * p[1][i] + c[2] * p[2][i]);
          break;
        case 4:
          for (std::size_t i = 0; i < n; ++i) {
            dst[i] = base[i] + (c[0] * p[0][i] + c[1] * p[1][i] + c[2] * p[2][i] + c[3] * p[3][i]);
          }
          break;
        case 5:
          for (std::size_t i = 0; i < n; ++i) {
            dst[i] = base[i] + (c[0] * p[0][i] + c[1] * p[1][i] + c[2] * p[2][i] + c[3] * p[3][i] + c[4] * p[4][i]);
          }
          break;
        default:
          for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < count; ++j) acc += c[j] * p[j][i];
            dst[i] = base[i] + acc;
          }
          break;
      }
    }
  };

  eval(t, y, k1);
  double h = std::min(t_grid.size() > 1 ? t_grid[1] : 1.0, 1e-2);
  {
    const double scale_y = std::max(max_abs(y), 1e-6);
    const double scale_f = max_abs(k1);
    if (scale_f > 0.0) h = std::min(h, 0.01 * scale_y / scale_f);
    h = std::max(h, 1e-6);
  }

  emit(0.0);
  std::size_t next_break = 0;
  for (std::size_t gi = 1; gi < t_grid.size(); ++gi) {
    const double target = t_grid[gi];
    while (t < target) {
      while (next_break < breaks.size() && breaks[next_break] <= t) ++next_break;
      double stop = target;
      bool at_break = false;
      if (next_break < breaks.size() && breaks[next_break] < target) {
        stop = breaks[next_break];
        at_break = true;
      }
      if (stop >= target) at_break = next_break < breaks.size() && breaks[next_break] == target;

      const double remaining = stop - t;
      const bool lands = h >= remaining * (1.0 - 1e-12);
      const double h_try = lands ? remaining : h;

      combine(stage, h_try, {{a21, &k1}});
      eval(t + c2 * h_try, stage, k2);
      combine(stage, h_try, {{a31, &k1}, {a32, &k2}});
      eval(t + c3 * h_try, stage, k3);
      combine(stage, h_try, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
      eval(t + c4 * h_try, stage, k4);
      combine(stage, h_try, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
      eval(t + c5 * h_try, stage, k5);
      combine(stage, h_try, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
      eval(t + h_try, stage, k6);
      combine(y_new, h_try, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      eval(t + h_try, y_new, k7);

      double err = 0.0;
      for (std::size_t s = 0; s < sectors; ++s) {
        const Eigen::Index size = y[s].size();
        const Complex *p1 = k1[s].data(), *p3 = k3[s].data(), *p4 = k4[s].data(), *p5 = k5[s].data(),
                      *p6 = k6[s].data(), *p7 = k7[s].data(), *py = y[s].data(), *pn = y_new[s].data();
        for (Eigen::Index i = 0; i < size; ++i) {
          const Complex e = h_try * (e1 * p1[i] + e3 * p3[i] + e4 * p4[i] + e5 * p5[i] + e6 * p6[i] + e7 * p7[i]);
          const double scale = options.tol * (1.0 + std::sqrt(std::max(std::norm(py[i]), std::norm(pn[i]))));
          err = std::max(err, std::norm(e) / (scale * scale));
        }
      }
      err = std::sqrt(err);
      if (!std::isfinite(err)) throw NumericalError("non-finite error estimate", t);

      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        ++stats.accepted;
        t = lands ? stop : t + h_try;
        std::swap(y, y_new);
        symmetrize(y);
        const double h_next = h_try * factor;
        h = lands ? std::max(h, h_next) : h_next;
        if (lands && at_break) {
          segment_start = t;
          eval(t, y, k1);
        } else {
          std::swap(k1, k7);
        }
        if (std::abs(trace_of(y) - expected_trace) > options.trace_abort) {
          throw NumericalError("trace drifted to " + std::to_string(trace_of(y)), t);
        }
      } else {
        ++stats.rejected;
        h = h_try * std::max(0.2, factor);
        if (h < options.min_step) throw NumericalError("step size underflow", t);
      }
    }
    emit(target);
  }
  return stats;
}

Trajectory evolve(const DensityMatrix& rho0, const ModelSpec& spec, const std::vector<double>& t_grid,
                  const EvolveOptions& options) {
  Trajectory traj;
  evolve(rho0, spec, t_grid, options, [&](const Snapshot& snap) {
    traj.times.push_back(snap.t);
    traj.states.push_back(snap.rho);
    traj.min_eigenvalues.push_back(snap.min_eigenvalue);
  });
  return traj;
}

}  // namespace fwm
