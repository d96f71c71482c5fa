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
#include <cstddef>
#include <map>
#include <vector>

#include "fwm/density.hpp"
#include "fwm/model.hpp"

namespace fwm {

/// Conserved additive quantum number Q(m) = sum_i weight[i] * m_i, optionally
/// reduced modulo `modulus` (0 means unbounded). Weights are indexed by mode.
struct Charge {
  std::array<int, 3> weight{0, 0, 0};
  int modulus = 0;
};

/// Charges whose ket/bra difference the Lindblad generator of `spec` conserves.
/// A state starting with zero difference (any Fock state) keeps it, so the
/// density matrix stays block diagonal over sectors of equal charge.
std::vector<Charge> conserved_charges(const ModelSpec& spec);

/// Partition of the Fock basis into sectors of equal charge values.
class SectorLayout {
 public:
  SectorLayout(const FockBasis& basis, const std::vector<Charge>& charges);

  const FockBasis& basis() const { return basis_; }
  const std::vector<Charge>& charges() const { return charges_; }
  std::size_t sector_count() const { return members_.size(); }
  const std::vector<std::size_t>& members(std::size_t sector) const { return members_[sector]; }
  std::size_t sector_of(std::size_t global) const { return sector_of_[global]; }
  std::size_t local_of(std::size_t global) const { return local_of_[global]; }
  std::vector<long> key(const Occupation& occ) const;
  /// Sector holding states whose key is `key`, or -1.
  long find_sector(const std::vector<long>& key) const;

  /// Number of stored matrix elements, sum of squared sector sizes.
  std::size_t stored_elements() const;

  /// True when every nonzero element of rho couples states of one sector.
  bool supports(const DensityMatrix& rho) const;

 private:
  FockBasis basis_;
  std::vector<Charge> charges_;
  std::map<std::vector<long>, std::size_t> index_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::size_t> sector_of_;
  std::vector<std::size_t> local_of_;
};

/// Block-diagonal density matrix, one dense block per sector.
using BlockState = std::vector<DenseMatrix>;

BlockState to_blocks(const SectorLayout& layout, const DensityMatrix& rho);
DensityMatrix to_dense(const SectorLayout& layout, const BlockState& blocks);

/// Lindblad right-hand side evaluated directly on (blocks of) the density
/// matrix from precomputed sparse structure. No superoperator is formed.
///
/// Requires the coherent part to be real symmetric off the diagonal, which
/// holds for the four-wave mixing and pump terms in the rotating frame.
class LindbladGenerator {
 public:
  LindbladGenerator(const ModelSpec& spec, const HamiltonianParts& parts,
                    std::vector<Charge> charges = {});

  const SectorLayout& layout() const { return layout_; }
  const ModelSpec& spec() const { return spec_; }

  /// out = L(in) with pump amplitude f. When `hermitian` is set the input is
  /// taken to be Hermitian: only the upper triangle is computed and the
  /// result is mirrored, so the output is exactly Hermitian.
  void apply(double pump_amplitude, const BlockState& in, BlockState& out, bool hermitian) const;

  BlockState zero_state() const;

 private:
  struct Jump {
    long target = -1;
    std::vector<long> up;        // local index of m + e_i in the target sector, or -1
    std::vector<double> coeff;   // sqrt(m_i + 1)
  };
  struct Sector {
    std::vector<double> energy;  // diagonal of the coherent part
    std::vector<double> loss;    // gamma * total photon number
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col;
    std::vector<double> k_fixed;  // off-diagonal nonlinear coupling
    std::vector<double> k_pump;   // off-diagonal pump coupling (times f)
    std::array<Jump, 3> jumps;
  };

  void apply_sector(std::size_t s, const std::vector<double>& k, const BlockState& in,
                    DenseMatrix& out, bool hermitian) const;

  ModelSpec spec_;
  SectorLayout layout_;
  std::vector<Sector> sectors_;
};

}  // namespace fwm
