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
#include <optional>
#include <vector>

#include "fwm/density.hpp"

namespace fwm {

/// Below this occupation g2 is reported as undefined.
inline constexpr double kDefaultG2Threshold = 1e-10;

/// N_i = Tr(a_i^+ a_i rho). Throws if the imaginary part exceeds 1e-8.
double occupation(const DensityMatrix& rho, Mode mode);

/// Zero-delay g2_i = Tr(a_i^+ a_i^+ a_i a_i rho) / N_i^2, or nullopt when N_i < n_threshold.
std::optional<double> g2_zero_delay(const DensityMatrix& rho, Mode mode,
                                    double n_threshold = kDefaultG2Threshold);

/// <m1,m2,m0| rho |m1,m2,m0>.
double fock_probability(const DensityMatrix& rho, const Occupation& occ);

/// |Tr rho - 1|
double trace_error(const DensityMatrix& rho);
/// max |rho - rho^+|
double hermiticity_residual(const DensityMatrix& rho);
/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const DensityMatrix& rho);

struct ObservableRecord {
  double t = 0.0;
  std::array<double, 3> n{};                 // by mode 0, 1, 2
  std::array<std::optional<double>, 3> g2;  // by mode 0, 1, 2
  std::vector<double> probs;                 // in the order requested
  double trace_error = 0.0;
  std::optional<double> min_eigenvalue;
};

ObservableRecord extract_record(const DensityMatrix& rho, double t, const std::vector<Occupation>& probs,
                                double n_threshold = kDefaultG2Threshold,
                                std::optional<double> min_eig = std::nullopt);

}  // namespace fwm
