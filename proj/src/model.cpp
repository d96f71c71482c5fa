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

#include "fwm/model.hpp"

#include <cmath>
#include <stdexcept>

#include "fwm/liouvillian.hpp"

namespace fwm {

std::string to_string(PumpScheme scheme) {
  switch (scheme) {
    case PumpScheme::kNone: return "none";
    case PumpScheme::kPump0: return "pump0";
    case PumpScheme::kPump12: return "pump12";
  }
  return "?";
}

std::string to_string(PulseShape shape) {
  switch (shape) {
    case PulseShape::kConstantStep: return "constant_step";
    case PulseShape::kRect: return "rect";
    case PulseShape::kHalfGaussian: return "half_gaussian";
    case PulseShape::kCenteredGaussian: return "centered_gaussian";
  }
  return "?";
}

PumpScheme parse_pump_scheme(const std::string& text) {
  if (text == "none") return PumpScheme::kNone;
  if (text == "pump0") return PumpScheme::kPump0;
  if (text == "pump12") return PumpScheme::kPump12;
  throw std::invalid_argument("unknown pump scheme '" + text + "' (expected none, pump0, pump12)");
}

PulseShape parse_pulse_shape(const std::string& text) {
  if (text == "constant_step") return PulseShape::kConstantStep;
  if (text == "rect") return PulseShape::kRect;
  if (text == "half_gaussian") return PulseShape::kHalfGaussian;
  if (text == "centered_gaussian") return PulseShape::kCenteredGaussian;
  throw std::invalid_argument("unknown pulse shape '" + text +
                              "' (expected constant_step, rect, half_gaussian, centered_gaussian)");
}

void PulseEnvelope::validate() const {
  if (!std::isfinite(f0) || f0 < 0.0) throw std::invalid_argument("envelope f0 must be >= 0");
  if (shape != PulseShape::kConstantStep && !(std::isfinite(tau) && tau > 0.0)) {
    throw std::invalid_argument("envelope tau must be > 0 for shape " + to_string(shape));
  }
}

double envelope_value(const PulseEnvelope& env, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("envelope evaluated at negative time");
  switch (env.shape) {
    case PulseShape::kConstantStep: return env.f0;
    case PulseShape::kRect: return t <= env.tau ? env.f0 : 0.0;
    case PulseShape::kHalfGaussian: return env.f0 * std::exp(-(t * t) / (env.tau * env.tau));
    case PulseShape::kCenteredGaussian: {
      const double x = (t - env.tau) / env.tau;
      return env.f0 * std::exp(-4.0 * x * x);
    }
  }
  throw std::invalid_argument("invalid pulse shape");
}

std::vector<double> envelope_breakpoints(const PulseEnvelope& env) {
  if (env.shape == PulseShape::kRect) return {env.tau};
  return {};
}

double envelope_value_in_segment(const PulseEnvelope& env, double t, double segment_start) {
  if (env.shape == PulseShape::kRect) {
    if (!(t >= 0.0)) throw std::invalid_argument("envelope evaluated at negative time");
    return segment_start < env.tau ? env.f0 : 0.0;
  }
  return envelope_value(env, t);
}

void ModelSpec::validate() const {
  if (!std::isfinite(u) || u < 0.0) throw std::invalid_argument("u must be >= 0");
  if (!std::isfinite(gamma) || gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
  for (double d : pump_detunings) {
    if (!std::isfinite(d)) throw std::invalid_argument("pump detunings must be finite");
  }
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  envelope.validate();
}

HamiltonianParts build_hamiltonian_parts(const ModelSpec& spec, const FockBasis& basis) {
  spec.validate();
  if (basis.n_max() != spec.n_max) {
    throw std::invalid_argument("basis cutoff does not match the model n_max");
  }

  std::vector<SparseEntry> diag;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const Occupation occ = basis.occupations(i);
    const double e = spec.pump_detunings[0] * occ.m0 + spec.pump_detunings[1] * occ.m1 +
                     spec.pump_detunings[2] * occ.m2 + 0.5 * spec.delta * (occ.m1 + occ.m2);
    if (e != 0.0) diag.push_back({i, i, Complex(e, 0.0)});
  }

  const auto a0 = annihilation(basis, Mode::kZero);
  const auto a1 = annihilation(basis, Mode::kOne);
  const auto a2 = annihilation(basis, Mode::kTwo);
  const auto pair_creation = a1.adjoint() * a2.adjoint() * a0 * a0;
  const auto nonlinear = (pair_creation + pair_creation.adjoint()).scaled(spec.u);

  HamiltonianParts parts{SparseOperator(basis, std::move(diag)), nonlinear, {}};
  auto quadrature = [](const SparseOperator& a) { return a + a.adjoint(); };
  switch (spec.scheme) {
    case PumpScheme::kNone: break;
    case PumpScheme::kPump0: parts.pump_ops.push_back(quadrature(a0)); break;
    case PumpScheme::kPump12:
      parts.pump_ops.push_back(quadrature(a1));
      parts.pump_ops.push_back(quadrature(a2));
      break;
  }
  return parts;
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, double t, const ModelSpec& spec,
                           const HamiltonianParts& parts) {
  if (!(rho.basis() == parts.nonlinear.basis())) {
    throw std::invalid_argument("density matrix and Hamiltonian dimensions differ");
  }
  const LindbladGenerator generator(spec, parts);
  const SectorLayout& layout = generator.layout();
  BlockState out = generator.zero_state();
  generator.apply(envelope_value(spec.envelope, t), to_blocks(layout, rho), out, false);
  return to_dense(layout, out);
}

}  // namespace fwm
