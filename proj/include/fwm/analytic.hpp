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
#include <complex>

#include "fwm/model.hpp"

namespace fwm::analytic {

/// Omega = sqrt(delta^2 + 8 u^2)
double rabi_frequency(double delta, double u);

/// Eigenpairs of the two-photon block {|2_w0>, |1_w1 1_w2>} of the
/// rotating-frame Hamiltonian, [[0, sqrt(2) u], [sqrt(2) u, delta]].
/// Index 0 is the upper state (E = (delta + Omega)/2), index 1 the lower.
struct TwoPhotonEigensystem {
  double e_plus = 0.0;
  double e_minus = 0.0;
  std::array<std::complex<double>, 2> amp_20{};
  std::array<std::complex<double>, 2> amp_11{};
  double omega = 0.0;
};

TwoPhotonEigensystem two_photon_eigensystem(double delta, double u);

/// Two-photon start |2_w0> with loss rate gamma and no pump.
struct TwoPhotonProbabilities {
  double p20 = 0.0;       // P(2_w0)
  double p11 = 0.0;       // P(1_w1, 1_w2)
  double p10 = 0.0;       // P(1_w0)
  double p1_single = 0.0; // P(1_w1) = P(1_w2)
};

TwoPhotonProbabilities closed_form_probabilities(double t, double u, double gamma, double delta);

struct TwoPhotonOccupations {
  double n0 = 0.0;
  double n1 = 0.0;  // equals N_2
};

TwoPhotonOccupations closed_form_occupations(double t, double u, double gamma, double delta);

/// Weak resonant pump, no loss, delta = 0, lowest order in f:
/// pump0 returns N_1 = N_2, pump12 returns N_0 (four times larger).
double perturbative_occupation(double t, double f, double u, PumpScheme scheme);

}  // namespace fwm::analytic
