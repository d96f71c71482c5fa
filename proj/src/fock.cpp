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

#include "fwm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fwm {

Mode mode_from_index(int index) {
  if (index < 0 || index > 2) {
    throw std::invalid_argument("mode index must be 0, 1 or 2, got " + std::to_string(index));
  }
  return static_cast<Mode>(index);
}

int Occupation::of(Mode mode) const {
  switch (mode) {
    case Mode::kZero: return m0;
    case Mode::kOne: return m1;
    case Mode::kTwo: return m2;
  }
  throw std::invalid_argument("invalid mode");
}

int& Occupation::of(Mode mode) {
  switch (mode) {
    case Mode::kZero: return m0;
    case Mode::kOne: return m1;
    case Mode::kTwo: return m2;
  }
  throw std::invalid_argument("invalid mode");
}

FockBasis::FockBasis(int n_max) : n_max_(n_max) {
  if (n_max < 1) {
    throw std::invalid_argument("n_max must be at least 1, got " + std::to_string(n_max));
  }
  const auto s = static_cast<std::size_t>(n_max + 1);
  dim_ = s * s * s;
}

std::size_t FockBasis::index(const Occupation& occ) const {
  if (!contains(occ)) {
    throw std::out_of_range("occupation (" + std::to_string(occ.m1) + "," + std::to_string(occ.m2) +
                            "," + std::to_string(occ.m0) + ") outside cutoff " +
                            std::to_string(n_max_));
  }
  const auto s = static_cast<std::size_t>(levels());
  return static_cast<std::size_t>(occ.m1) * s * s + static_cast<std::size_t>(occ.m2) * s +
         static_cast<std::size_t>(occ.m0);
}

Occupation FockBasis::occupations(std::size_t index) const {
  if (index >= dim_) throw std::out_of_range("basis index out of range");
  const auto s = static_cast<std::size_t>(levels());
  return Occupation{static_cast<int>(index / (s * s)), static_cast<int>((index / s) % s),
                    static_cast<int>(index % s)};
}

bool FockBasis::contains(const Occupation& occ) const {
  auto ok = [this](int m) { return m >= 0 && m <= n_max_; };
  return ok(occ.m1) && ok(occ.m2) && ok(occ.m0);
}

std::size_t FockBasis::stride(Mode mode) const {
  const auto s = static_cast<std::size_t>(levels());
  switch (mode) {
    case Mode::kZero: return 1;
    case Mode::kTwo: return s;
    case Mode::kOne: return s * s;
  }
  throw std::invalid_argument("invalid mode");
}

FockBasis build_basis(int n_max) { return FockBasis(n_max); }

namespace {

void canonicalize(std::vector<SparseEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  std::vector<SparseEntry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const SparseEntry& e) { return e.value == Complex(0.0, 0.0); });
  entries = std::move(merged);
}

void require_same_basis(const SparseOperator& a, const SparseOperator& b) {
  if (!(a.basis() == b.basis())) throw std::invalid_argument("operators live on different bases");
}

}  // namespace

SparseOperator::SparseOperator(const FockBasis& basis, std::vector<SparseEntry> entries)
    : basis_(basis), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.row >= basis_.dim() || e.col >= basis_.dim()) {
      throw std::out_of_range("sparse entry index outside basis");
    }
  }
  canonicalize(entries_);
}

Complex SparseOperator::at(std::size_t row, std::size_t col) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{col, row},
                             [](const SparseEntry& e, const std::pair<std::size_t, std::size_t>& key) {
                               return e.col != key.first ? e.col < key.first : e.row < key.second;
                             });
  if (it != entries_.end() && it->col == col && it->row == row) return it->value;
  return {0.0, 0.0};
}

SparseOperator SparseOperator::adjoint() const {
  std::vector<SparseEntry> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back({e.col, e.row, std::conj(e.value)});
  return {basis_, std::move(out)};
}

SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
  require_same_basis(*this, rhs);
  // Bucket this operator's entries by column so (A*B)_ij = sum_k A_ik B_kj
  // can be gathered from each B entry (k, j).
  std::vector<std::vector<const SparseEntry*>> by_col(dim());
  for (const auto& e : entries_) by_col[e.col].push_back(&e);
  std::vector<SparseEntry> out;
  for (const auto& b : rhs.entries_) {
    for (const SparseEntry* a : by_col[b.row]) out.push_back({a->row, b.col, a->value * b.value});
  }
  return {basis_, std::move(out)};
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
  require_same_basis(*this, rhs);
  std::vector<SparseEntry> out = entries_;
  out.insert(out.end(), rhs.entries_.begin(), rhs.entries_.end());
  return {basis_, std::move(out)};
}

SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
  return *this + rhs.scaled(-1.0);
}

SparseOperator SparseOperator::scaled(Complex factor) const {
  std::vector<SparseEntry> out = entries_;
  for (auto& e : out) e.value *= factor;
  return {basis_, std::move(out)};
}

std::vector<Complex> SparseOperator::apply(const std::vector<Complex>& state) const {
  if (state.size() != dim()) throw std::invalid_argument("state dimension mismatch");
  std::vector<Complex> out(dim());
  for (const auto& e : entries_) out[e.row] += e.value * state[e.col];
  return out;
}

double SparseOperator::max_abs_diff(const SparseOperator& other) const {
  double worst = 0.0;
  for (const auto& e : (*this - other).entries()) worst = std::max(worst, std::abs(e.value));
  return worst;
}

SparseOperator annihilation(const FockBasis& basis, Mode mode) {
  std::vector<SparseEntry> out;
  const std::size_t step = basis.stride(mode);
  for (std::size_t col = 0; col < basis.dim(); ++col) {
    const int m = basis.occupations(col).of(mode);
    if (m > 0) out.push_back({col - step, col, Complex(std::sqrt(static_cast<double>(m)), 0.0)});
  }
  return {basis, std::move(out)};
}

SparseOperator creation(const FockBasis& basis, Mode mode) {
  return annihilation(basis, mode).adjoint();
}

SparseOperator number_operator(const FockBasis& basis, Mode mode) {
  std::vector<SparseEntry> out;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const int m = basis.occupations(i).of(mode);
    if (m > 0) out.push_back({i, i, Complex(m, 0.0)});
  }
  return {basis, std::move(out)};
}

SparseOperator identity(const FockBasis& basis) {
  std::vector<SparseEntry> out;
  out.reserve(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) out.push_back({i, i, Complex(1.0, 0.0)});
  return {basis, std::move(out)};
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

}  // namespace fwm
