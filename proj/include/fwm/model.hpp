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

#include <array>
#include <string>
#include <vector>

#include "fwm/density.hpp"
#include "fwm/fock.hpp"

namespace fwm {

enum class PumpScheme { kNone, kPump0, kPump12 };
enum class PulseShape { kConstantStep, kRect, kHalfGaussian, kCenteredGaussian };

std::string to_string(PumpScheme scheme);
std::string to_string(PulseShape shape);
PumpScheme parse_pump_scheme(const std::string& text);
PulseShape parse_pulse_shape(const std::string& text);

/// Pump amplitude f(t) in units of u; tau in units of 1/u.
///
///   constant_step     f0                      (switched on at t = 0)
///   rect              f0 for 0 <= t <= tau, else 0
///   half_gaussian     f0 exp(-t^2 / tau^2)
///   centered_gaussian f0 exp(-4 (t - tau)^2 / tau^2)
struct PulseEnvelope {
  PulseShape shape = PulseShape::kConstantStep;
  double f0 = 0.0;
  double tau = 1.0;

  void validate() const;
  bool operator==(const PulseEnvelope&) const = default;
};

double envelope_value(const PulseEnvelope& env, double t);

/// Times where the envelope is discontinuous. Integrators must not step across them.
std::vector<double> envelope_breakpoints(const PulseEnvelope& env);

/// Envelope value for a time inside the smooth segment that starts at
/// `segment_start`. Identical to envelope_value except at a breakpoint, where
/// the value belongs to the segment on the right.
double envelope_value_in_segment(const PulseEnvelope& env, double t, double segment_start);

/// Physical parameters, all in units of the coupling u (times in 1/u).
///
/// The frame rotates at the pump (or bare mode) frequencies. The four-wave
/// mixing mismatch delta = w1 + w2 - 2 w0 is carried as a static +delta/2
/// detuning on modes 1 and 2; pump_detunings add per-mode offsets on top.
struct ModelSpec {
  double u = 1.0;
  double gamma = 0.0;
  double delta = 0.0;
  std::array<double, 3> pump_detunings{0.0, 0.0, 0.0};  // indexed by mode 0, 1, 2
  PumpScheme scheme = PumpScheme::kNone;
  PulseEnvelope envelope;
  int n_max = 10;

  void validate() const;
  bool operator==(const ModelSpec&) const = default;
};

/// Time-independent pieces of the rotating-frame Hamiltonian
/// H(t) = detune + nonlinear + f(t) * sum(pump_ops).
struct HamiltonianParts {
  SparseOperator detune;
  SparseOperator nonlinear;
  std::vector<SparseOperator> pump_ops;
};

HamiltonianParts build_hamiltonian_parts(const ModelSpec& spec, const FockBasis& basis);

/// d(rho)/dt = -i[H(t), rho] + gamma sum_i (2 a_i rho a_i^+ - a_i^+ a_i rho - rho a_i^+ a_i).
/// Valid for any square input, Hermitian or not.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, double t, const ModelSpec& spec,
                           const HamiltonianParts& parts);

}  // namespace fwm
