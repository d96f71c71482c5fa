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

#include "fwm/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace fwm {

namespace {

Complex trace_product(const SparseOperator& op, const DensityMatrix& rho) {
  if (!(op.basis() == rho.basis())) throw std::invalid_argument("operator and state bases differ");
  Complex acc(0.0, 0.0);
  for (const auto& e : op.entries()) acc += e.value * rho(e.col, e.row);
  return acc;
}

double checked_real(Complex value, const char* what) {
  if (std::abs(value.imag()) > 1e-8) {
    throw std::runtime_error(std::string(what) + " has imaginary part " + std::to_string(value.imag()) +
                             "; the state is corrupted");
  }
  return value.real();
}

}  // namespace

double occupation(const DensityMatrix& rho, Mode mode) {
  return checked_real(trace_product(number_operator(rho.basis(), mode), rho), "occupation");
}

std::optional<double> g2_zero_delay(const DensityMatrix& rho, Mode mode, double n_threshold) {
  const double n = occupation(rho, mode);
  if (!(n >= n_threshold)) return std::nullopt;
  const auto a = annihilation(rho.basis(), mode);
  const auto ad = a.adjoint();
  const double pairs = checked_real(trace_product(ad * ad * a * a, rho), "pair correlation");
  return pairs / (n * n);
}

double fock_probability(const DensityMatrix& rho, const Occupation& occ) {
  const std::size_t i = rho.basis().index(occ);
  return rho(i, i).real();
}

double trace_error(const DensityMatrix& rho) { return std::abs(rho.trace() - Complex(1.0, 0.0)); }

double hermiticity_residual(const DensityMatrix& rho) {
  return (rho.data() - rho.data().adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const DensityMatrix& rho) {
  const DenseMatrix herm = 0.5 * (rho.data() + rho.data().adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ObservableRecord extract_record(const DensityMatrix& rho, double t, const std::vector<Occupation>& probs,
                                double n_threshold, std::optional<double> min_eig) {
  ObservableRecord rec;
  rec.t = t;
  for (Mode mode : kAllModes) {
    const auto i = static_cast<std::size_t>(mode);
    rec.n[i] = occupation(rho, mode);
    rec.g2[i] = g2_zero_delay(rho, mode, n_threshold);
  }
  rec.probs.reserve(probs.size());
  for (const auto& occ : probs) rec.probs.push_back(fock_probability(rho, occ));
  rec.trace_error = trace_error(rho);
  rec.min_eigenvalue = min_eig;
  return rec;
}

}  // namespace fwm
