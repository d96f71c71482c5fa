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

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fwm/density.hpp"
#include "fwm/model.hpp"

namespace fwm {

struct EvolveOptions {
  /// Relative and absolute tolerance of the embedded 4(5) error estimate.
  double tol = 1e-9;
  /// Smallest step before the run is declared stiff or broken.
  double min_step = 1e-12;
  /// Eigenvalue audit at every output time. Block-wise, so cheap on sectors.
  bool audit_positivity = false;
  /// Abort thresholds: 10x the trace / positivity invariants.
  double trace_abort = 1e-7;
  double eigenvalue_abort = -1e-7;
  /// Split the state into conserved-charge sectors when the initial state allows it.
  bool use_sectors = true;
};

struct Snapshot {
  double t = 0.0;
  const DensityMatrix& rho;
  std::optional<double> min_eigenvalue;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

struct EvolveStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  std::size_t sectors = 1;
  std::size_t stored_elements = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<std::optional<double>> min_eigenvalues;
};

/// Integrates the master equation with a Dormand-Prince 5(4) pair, stepping
/// exactly onto every output time and onto pulse discontinuities. The state
/// is re-symmetrised after each accepted step. `t_grid` must start at 0 and
/// increase strictly; `sink` sees one snapshot per grid time.
EvolveStats evolve(const DensityMatrix& rho0, const ModelSpec& spec, const std::vector<double>& t_grid,
                   const EvolveOptions& options, const SnapshotSink& sink);

/// Same as above, keeping every snapshot. Memory grows as grid size x dim^2.
Trajectory evolve(const DensityMatrix& rho0, const ModelSpec& spec, const std::vector<double>& t_grid,
                  const EvolveOptions& options = {});

/// Uniform grid 0, dt, 2 dt, ... up to t_max (inclusive within rounding).
std::vector<double> uniform_grid(double t_max, double dt);

}  // namespace fwm
