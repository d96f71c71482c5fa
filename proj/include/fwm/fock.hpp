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
#include <cstddef>
#include <vector>

namespace fwm {

using Complex = std::complex<double>;

/// Photon modes of the resonator. Mode 0 is the degenerate pump/pair mode,
/// modes 1 and 2 are the signal/idler modes it scatters into.
enum class Mode : int { kZero = 0, kOne = 1, kTwo = 2 };

Mode mode_from_index(int index);

/// Occupation triple stored in basis order (m1, m2, m0).
struct Occupation {
  int m1 = 0;
  int m2 = 0;
  int m0 = 0;

  int of(Mode mode) const;
  int& of(Mode mode);
  int total() const { return m1 + m2 + m0; }
  bool operator==(const Occupation&) const = default;
};

/// Truncated three-mode Fock space with at most n_max photons per mode.
///
/// States are indexed as m1*(n_max+1)^2 + m2*(n_max+1) + m0, so mode 0 is the
/// fastest-varying digit. Every CSV column and test vector uses this order.
class FockBasis {
 public:
  explicit FockBasis(int n_max);

  int n_max() const { return n_max_; }
  std::size_t dim() const { return dim_; }
  int levels() const { return n_max_ + 1; }

  std::size_t index(const Occupation& occ) const;
  Occupation occupations(std::size_t index) const;
  bool contains(const Occupation& occ) const;

  /// Index offset of one extra photon in `mode` (valid when the mode is below n_max).
  std::size_t stride(Mode mode) const;

  bool operator==(const FockBasis& other) const { return n_max_ == other.n_max_; }

 private:
  int n_max_;
  std::size_t dim_;
};

FockBasis build_basis(int n_max);

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  Complex value;
};

/// Coordinate-list operator on a FockBasis. Entries are kept sorted by
/// (col, row) with duplicates merged and exact zeros dropped.
class SparseOperator {
 public:
  SparseOperator() : basis_(1) {}
  SparseOperator(const FockBasis& basis, std::vector<SparseEntry> entries);

  const FockBasis& basis() const { return basis_; }
  std::size_t dim() const { return basis_.dim(); }
  const std::vector<SparseEntry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Complex at(std::size_t row, std::size_t col) const;

  SparseOperator adjoint() const;
  SparseOperator operator*(const SparseOperator& rhs) const;
  SparseOperator operator+(const SparseOperator& rhs) const;
  SparseOperator operator-(const SparseOperator& rhs) const;
  SparseOperator scaled(Complex factor) const;

  std::vector<Complex> apply(const std::vector<Complex>& state) const;

  /// Largest |A_ij - B_ij| over the union of both sparsity patterns.
  double max_abs_diff(const SparseOperator& other) const;

 private:
  FockBasis basis_;
  std::vector<SparseEntry> entries_;
};

SparseOperator annihilation(const FockBasis& basis, Mode mode);
SparseOperator creation(const FockBasis& basis, Mode mode);
SparseOperator number_operator(const FockBasis& basis, Mode mode);
SparseOperator identity(const FockBasis& basis);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

inline constexpr std::array<Mode, 3> kAllModes{Mode::kZero, Mode::kOne, Mode::kTwo};

}  // namespace fwm
