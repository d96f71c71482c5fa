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

#include <Eigen/Dense>

#include "fwm/fock.hpp"

namespace fwm {

using DenseMatrix = Eigen::MatrixXcd;

/// Density matrix over a truncated Fock basis. Stored dense; row/column
/// order follows FockBasis::index.
class DensityMatrix {
 public:
  explicit DensityMatrix(const FockBasis& basis)
      : basis_(basis), data_(DenseMatrix::Zero(basis.dim(), basis.dim())) {}
  DensityMatrix(const FockBasis& basis, DenseMatrix data);

  const FockBasis& basis() const { return basis_; }
  std::size_t dim() const { return basis_.dim(); }
  const DenseMatrix& data() const { return data_; }
  DenseMatrix& data() { return data_; }

  Complex operator()(std::size_t row, std::size_t col) const {
    return data_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  Complex trace() const { return data_.trace(); }

 private:
  FockBasis basis_;
  DenseMatrix data_;
};

/// Pure-state projector |m1,m2,m0><m1,m2,m0|.
DensityMatrix make_fock_state(const FockBasis& basis, const Occupation& occ);

}  // namespace fwm
