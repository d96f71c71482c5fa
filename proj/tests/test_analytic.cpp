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
#include <numbers>
#include <stdexcept>

#include "dense_oracle.hpp"
#include "fwm/analytic.hpp"

namespace fwm {
namespace {

using analytic::closed_form_occupations;
using analytic::closed_form_probabilities;

int idx(int m1, int m2, int m0, int n_max) { return (m1 * (n_max + 1) + m2) * (n_max + 1) + m0; }

// Diagonal of exp(L t) applied to a Fock projector, at cutoff 2.
Eigen::VectorXd exact_populations(const ModelSpec& spec, double f, int start, double t) {
  const int dim = 27;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim * dim);
  v[start * dim + start] = 1.0;
  const Eigen::VectorXcd out = testing::expm_apply(testing::sparse_liouvillian(spec, f), v, t);
  Eigen::VectorXd pop(dim);
  for (int i = 0; i < dim; ++i) pop[i] = out[i * dim + i].real();
  return pop;
}

}  // namespace

TEST_CASE("Rabi frequency") {
  CHECK(analytic::rabi_frequency(0.0, 1.0) == doctest::Approx(2.82843).epsilon(1e-6));
  CHECK(analytic::rabi_frequency(0.0, 1.0) == 2.0 * std::sqrt(2.0));
  CHECK(analytic::rabi_frequency(1.0, 0.0) == 1.0);
  CHECK(analytic::rabi_frequency(2.0, 1.0) == doctest::Approx(3.46410).epsilon(1e-6));
}

TEST_CASE("two-photon eigensystem at resonance") {
  const auto es = analytic::two_photon_eigensystem(0.0, 1.0);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(es.amp_20[k]) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(es.amp_11[k]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  CHECK(es.e_plus - es.e_minus == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(es.omega == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("eigenpairs solve the projected matrix") {
  for (double delta : {-3.0, -0.5, 0.0, 0.5, 2.0, 10.0}) {
    for (double u : {0.3, 1.0, 2.5}) {
      const auto es = analytic::two_photon_eigensystem(delta, u);
      const double c = std::sqrt(2.0) * u;
      const double e[2] = {es.e_plus, es.e_minus};
      for (int k = 0; k < 2; ++k) {
        const auto x = es.amp_20[k], y = es.amp_11[k];
        CHECK(std::abs(c * y - e[k] * x) < 1e-12);
        CHECK(std::abs(c * x + delta * y - e[k] * y) < 1e-12);
        CHECK(std::abs(std::norm(x) + std::norm(y) - 1.0) < 1e-12);
      }
      CHECK(es.e_plus - es.e_minus == doctest::Approx(analytic::rabi_frequency(delta, u)));
    }
  }
  CHECK_THROWS_AS(analytic::two_photon_eigensystem(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("large detuning decouples the pair state") {
  const auto es = analytic::two_photon_eigensystem(1e4, 1.0);
  CHECK(std::max(std::abs(es.amp_20[0]), std::abs(es.amp_20[1])) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("closed-form probabilities at the origin and at half period") {
  const auto p0 = closed_form_probabilities(0.0, 1.0, 0.1, 0.7);
  CHECK(p0.p20 == 1.0);
  CHECK(p0.p11 == 0.0);
  CHECK(p0.p10 == 0.0);
  CHECK(p0.p1_single == 0.0);
  const double t = std::numbers::pi / (2.0 * std::sqrt(2.0));
  const auto p = closed_form_probabilities(t, 1.0, 0.1, 0.0);
  CHECK(p.p11 == doctest::Approx(std::exp(-0.4 * t)));
  CHECK(p.p11 == doctest::Approx(0.6413).epsilon(1e-4));
  CHECK(std::abs(p.p20) < 1e-15);
}

TEST_CASE("undamped probabilities conserve the two-state population") {
  for (int k = 0; k <= 2000; ++k) {
    const double t = 0.01 * k;
    const auto p = closed_form_probabilities(t, 1.0, 0.0, 0.0);
    CHECK(std::abs(p.p20 + p.p11 - 1.0) < 1e-12);
    CHECK(p.p10 == 0.0);
  }
}

TEST_CASE("closed-form occupations") {
  const auto n0 = closed_form_occupations(0.0, 1.0, 0.1, 0.5);
  CHECK(n0.n0 == 2.0);
  CHECK(n0.n1 == 0.0);
  // Undamped resonance: N_0 = 2 - (8 u^2 / Omega^2)(1 - cos(Omega t)).
  const double omega = 2.0 * std::sqrt(2.0);
  const auto half = closed_form_occupations(std::numbers::pi / omega, 1.0, 0.0, 0.0);
  CHECK(std::abs(half.n0) < 1e-12);
  CHECK(half.n1 == doctest::Approx(1.0).epsilon(1e-12));
  const auto quarter = closed_form_occupations(0.5 * std::numbers::pi / omega, 1.0, 0.0, 0.0);
  CHECK(quarter.n0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quarter.n1 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("photon-number identity of the closed form") {
  double worst = 0.0;
  for (double gamma : {0.0, 0.01, 0.1, 0.7}) {
    for (double u : {0.5, 1.0, 2.0}) {
      for (double delta : {-1.0, 0.0, 0.5, 2.0}) {
        for (int k = 0; k <= 300; ++k) {
          const double t = 0.1 * k;
          const auto n = closed_form_occupations(t, u, gamma, delta);
          const double target = 2.0 * std::exp(-2.0 * gamma * t);
          worst = std::max(worst, std::abs(n.n0 + 2.0 * n.n1 - target) / target);
        }
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("closed forms agree with the exact propagator") {
  // Cutoff 2 holds every state reachable from |0,0,2> without a pump.
  for (double gamma : {0.0, 0.1}) {
    for (double delta : {0.0, 0.5, 2.0}) {
      ModelSpec spec;
      spec.n_max = 2;
      spec.gamma = gamma;
      spec.delta = delta;
      for (double t : {0.3, 1.7, 4.0, 9.5}) {
        CAPTURE(gamma);
        CAPTURE(delta);
        CAPTURE(t);
        const auto pop = exact_populations(spec, 0.0, idx(0, 0, 2, 2), t);
        const auto p = closed_form_probabilities(t, 1.0, gamma, delta);
        CHECK(std::abs(pop[idx(0, 0, 2, 2)] - p.p20) < 1e-10);
        CHECK(std::abs(pop[idx(1, 1, 0, 2)] - p.p11) < 1e-10);
        CHECK(std::abs(pop[idx(0, 0, 1, 2)] - p.p10) < 1e-10);
        CHECK(std::abs(pop[idx(1, 0, 0, 2)] - p.p1_single) < 1e-10);
        CHECK(std::abs(pop[idx(0, 1, 0, 2)] - p.p1_single) < 1e-10);
        const auto n = closed_form_occupations(t, 1.0, gamma, delta);
        const double n0 = 2 * pop[idx(0, 0, 2, 2)] + pop[idx(0, 0, 1, 2)];
        const double n1 = pop[idx(1, 1, 0, 2)] + pop[idx(1, 0, 0, 2)];
        CHECK(std::abs(n0 - n.n0) < 1e-10);
        CHECK(std::abs(n1 - n.n1) < 1e-10);
      }
    }
  }
}

TEST_CASE("perturbative occupation values") {
  using analytic::perturbative_occupation;
  CHECK(perturbative_occupation(0.0, 0.01, 1.0, PumpScheme::kPump0) == 0.0);
  CHECK(perturbative_occupation(1e-8, 0.01, 1.0, PumpScheme::kPump0) >= 0.0);
  CHECK(perturbative_occupation(1e-3, 0.01, 1.0, PumpScheme::kPump0) < 1e-20);
  const double t = 2.0 * std::numbers::pi / (2.0 * std::sqrt(2.0));
  CHECK(perturbative_occupation(t, 0.01, 1.0, PumpScheme::kPump0) == doctest::Approx(4.935e-8).epsilon(1e-3));
  for (double s : {0.5, 3.0, 7.7}) {
    CHECK(perturbative_occupation(s, 0.02, 1.3, PumpScheme::kPump12) ==
          doctest::Approx(4.0 * perturbative_occupation(s, 0.02, 1.3, PumpScheme::kPump0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(perturbative_occupation(1.0, 0.01, 1.0, PumpScheme::kNone), std::invalid_argument);
}

TEST_CASE("perturbative formula agrees with the exact weakly driven propagator") {
  const double f = 0.01;
  for (auto scheme : {PumpScheme::kPump0, PumpScheme::kPump12}) {
    ModelSpec spec;
    spec.n_max = 2;
    spec.scheme = scheme;
    for (double t : {1.0, 4.0, 10.0}) {
      const auto pop = exact_populations(spec, f, 0, t);
      double n_exact = 0.0;
      for (int i = 0; i < 27; ++i) {
        const int m0 = i % 3, m1 = i / 9;
        n_exact += (scheme == PumpScheme::kPump0 ? m1 : m0) * pop[i];
      }
      CAPTURE(t);
      CHECK(n_exact == doctest::Approx(analytic::perturbative_occupation(t, f, 1.0, scheme)).epsilon(0.02));
    }
  }
}

}  // namespace fwm
