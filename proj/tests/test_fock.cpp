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


#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fwm/fock.hpp"

namespace fwm {
namespace {

// Entry-by-entry comparison on a subset of columns.
bool is_identity_on(const SparseOperator& op, const FockBasis& basis, Mode mode) {
  for (std::size_t c = 0; c < basis.dim(); ++c) {
    if (basis.occupations(c).of(mode) == basis.n_max()) continue;
    for (std::size_t r = 0; r < basis.dim(); ++r) {
      const Complex expected = r == c ? Complex(1.0) : Complex(0.0);
      if (std::abs(op.at(r, c) - expected) > 1e-14) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("basis dimension and canonical index") {
  CHECK(build_basis(1).dim() == 8);
  CHECK(build_basis(10).dim() == 1331);
  const FockBasis b(10);
  CHECK(b.index({1, 1, 0}) == 132);
  CHECK(b.index({0, 0, 2}) == 2);
  CHECK(b.stride(Mode::kZero) == 1);
  CHECK(b.stride(Mode::kTwo) == 11);
  CHECK(b.stride(Mode::kOne) == 121);
}

TEST_CASE("basis rejects a zero cutoff") {
  CHECK_THROWS_AS(build_basis(0), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(-3), std::invalid_argument);
}

TEST_CASE("index mapping round-trips for every triple") {
  for (int n_max : {1, 2, 5}) {
    const FockBasis b(n_max);
    for (std::size_t i = 0; i < b.dim(); ++i) CHECK(b.index(b.occupations(i)) == i);
    for (int m1 = 0; m1 <= n_max; ++m1) {
      for (int m2 = 0; m2 <= n_max; ++m2) {
        for (int m0 = 0; m0 <= n_max; ++m0) {
          const Occupation occ{m1, m2, m0};
          CHECK(b.occupations(b.index(occ)) == occ);
        }
      }
    }
  }
  const FockBasis b(3);
  CHECK_FALSE(b.contains({4, 0, 0}));
  CHECK_FALSE(b.contains({0, -1, 0}));
  CHECK_THROWS_AS(b.index({0, 0, 4}), std::out_of_range);
}

TEST_CASE("mode index parsing") {
  CHECK(mode_from_index(2) == Mode::kTwo);
  CHECK_THROWS_AS(mode_from_index(3), std::invalid_argument);
  CHECK_THROWS_AS(mode_from_index(-1), std::invalid_argument);
}

TEST_CASE("annihilation follows the ladder rule") {
  const FockBasis b(4);
  std::vector<Complex> psi(b.dim());
  psi[b.index({0, 0, 2})] = 1.0;
  const auto out = annihilation(b, Mode::kZero).apply(psi);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const Complex expected = i == b.index({0, 0, 1}) ? Complex(std::sqrt(2.0)) : Complex(0.0);
    CHECK(std::abs(out[i] - expected) < 1e-15);
  }

  std::vector<Complex> vac(b.dim());
  vac[0] = 1.0;
  for (const auto& v : annihilation(b, Mode::kOne).apply(vac)) CHECK(v == Complex(0.0));
}

TEST_CASE("annihilation has at most one entry per column") {
  const FockBasis b(3);
  for (Mode m : kAllModes) {
    std::vector<int> per_col(b.dim(), 0);
    const auto a = annihilation(b, m);
    for (const auto& e : a.entries()) {
      CHECK(e.row < b.dim());
      CHECK(e.col < b.dim());
      ++per_col[e.col];
    }
    for (int c : per_col) CHECK(c <= 1);
  }
}

TEST_CASE("number operator expectation on a pair state") {
  const FockBasis b(3);
  std::vector<Complex> psi(b.dim());
  psi[b.index({1, 1, 0})] = 1.0;
  auto expect = [&](Mode m) {
    const auto out = number_operator(b, m).apply(psi);
    Complex s = 0.0;
    for (std::size_t i = 0; i < b.dim(); ++i) s += std::conj(psi[i]) * out[i];
    return s.real();
  };
  CHECK(expect(Mode::kOne) == 1.0);
  CHECK(expect(Mode::kTwo) == 1.0);
  CHECK(expect(Mode::kZero) == 0.0);
}

TEST_CASE("number operator diagonal and trace") {
  const FockBasis b(4);
  CHECK(number_operator(b, Mode::kZero).at(b.index({0, 0, 2}), b.index({0, 0, 2})) == Complex(2.0));
  const FockBasis b1(1);
  for (Mode m : kAllModes) {
    Complex tr = 0.0;
    for (std::size_t i = 0; i < b1.dim(); ++i) tr += number_operator(b1, m).at(i, i);
    CHECK(tr == Complex(4.0));
  }
}

TEST_CASE("creation is the entrywise adjoint of annihilation") {
  const FockBasis b(3);
  for (Mode m : kAllModes) {
    const auto a = annihilation(b, m);
    const auto ad = creation(b, m);
    for (std::size_t r = 0; r < b.dim(); ++r) {
      for (std::size_t c = 0; c < b.dim(); ++c) CHECK(ad.at(r, c) == std::conj(a.at(c, r)));
    }
    CHECK(a.adjoint().max_abs_diff(ad) == 0.0);
  }
}

TEST_CASE("a^+ a equals the number operator on the full truncated space up to rounding") {
  for (int n_max : {1, 3, 6}) {
    const FockBasis b(n_max);
    for (Mode m : kAllModes) {
      CHECK((creation(b, m) * annihilation(b, m)).max_abs_diff(number_operator(b, m)) < 1e-14);
    }
  }
}

TEST_CASE("canonical commutator below the cutoff") {
  const FockBasis b(3);
  for (Mode m : kAllModes) {
    const auto c = commutator(annihilation(b, m), creation(b, m));
    CHECK(is_identity_on(c, b, m));
    // At the cutoff the truncated commutator is -n_max.
    const std::size_t top = b.index(m == Mode::kZero ? Occupation{0, 0, 3}
                                    : m == Mode::kOne ? Occupation{3, 0, 0}
                                                      : Occupation{0, 3, 0});
    CHECK(std::abs(c.at(top, top) - Complex(-3.0)) < 1e-14);
  }
}

TEST_CASE("distinct modes commute exactly") {
  const FockBasis b(3);
  for (Mode i : kAllModes) {
    for (Mode j : kAllModes) {
      if (i == j) continue;
      CHECK(commutator(annihilation(b, i), annihilation(b, j)).empty());
      CHECK(commutator(annihilation(b, i), creation(b, j)).empty());
    }
  }
}

TEST_CASE("sparse algebra merges and drops entries") {
  const FockBasis b(1);
  const SparseOperator op(b, {{0, 0, 1.0}, {0, 0, 2.0}, {1, 0, 0.0}, {3, 2, Complex(0, 1)}});
  CHECK(op.nnz() == 2);
  CHECK(op.at(0, 0) == Complex(3.0));
  CHECK(op.at(1, 0) == Complex(0.0));
  CHECK((op - op).empty());
  CHECK(op.scaled(Complex(0, 1)).at(3, 2) == Complex(-1.0));
  CHECK(op.adjoint().at(2, 3) == Complex(0, -1));
  CHECK((identity(b) * op).max_abs_diff(op) == 0.0);
  CHECK_THROWS_AS(SparseOperator(b, {{8, 0, 1.0}}), std::out_of_range);
  CHECK_THROWS_AS(op * identity(FockBasis(2)), std::invalid_argument);
  CHECK_THROWS_AS(op.apply(std::vector<Complex>(3)), std::invalid_argument);
}

}  // namespace fwm
