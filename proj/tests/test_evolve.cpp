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

#include "dense_oracle.hpp"
#include "fwm/analytic.hpp"
#include "fwm/errors.hpp"
#include "fwm/evolve.hpp"
#include "fwm/observables.hpp"

namespace fwm {
namespace {

using testing::propagate;

double max_diff(const DensityMatrix& a, const Eigen::MatrixXcd& b) { return (a.data() - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("fock state projectors") {
  const FockBasis b(3);
  const auto rho = make_fock_state(b, {0, 0, 2});
  CHECK(rho.trace() == Complex(1.0));
  CHECK(occupation(rho, Mode::kZero) == 2.0);
  const auto vac = make_fock_state(b, {0, 0, 0});
  CHECK(vac(0, 0) == Complex(1.0));
  CHECK(vac.data().cwiseAbs().sum() == 1.0);
  CHECK_THROWS_AS(make_fock_state(b, {4, 0, 0}), std::out_of_range);
}

TEST_CASE("uniform grid") {
  const auto g = uniform_grid(1.0, 0.25);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(uniform_grid(20.0, 0.05).size() == 401);
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_grid(-1.0, 0.1), std::invalid_argument);
}

TEST_CASE("trivial Hamiltonian leaves any state unchanged") {
  ModelSpec spec;
  spec.u = 0.0;
  spec.n_max = 2;
  const FockBasis b(2);
  std::mt19937_64 rng(3);
  const DensityMatrix rho0(b, testing::random_density(static_cast<int>(b.dim()), rng));
  const auto traj = evolve(rho0, spec, uniform_grid(5.0, 1.0));
  REQUIRE(traj.states.size() == 6);
  for (const auto& s : traj.states) CHECK(max_diff(s, rho0.data()) < 1e-15);
}

TEST_CASE("two-photon start follows the closed form") {
  ModelSpec spec;
  spec.gamma = 0.1;
  spec.n_max = 4;
  const FockBasis b(4);
  const auto grid = uniform_grid(20.0, 0.1);
  double worst = 0.0;
  evolve(make_fock_state(b, {0, 0, 2}), spec, grid, {}, [&](const Snapshot& s) {
    const auto p = analytic::closed_form_probabilities(s.t, 1.0, 0.1, 0.0);
    worst = std::max(worst, std::abs(fock_probability(s.rho, {0, 0, 2}) - p.p20));
    worst = std::max(worst, std::abs(fock_probability(s.rho, {1, 1, 0}) - p.p11));
  });
  CHECK(worst < 1e-6);
}

TEST_CASE("matches the exact propagator of the dense superoperator") {
  std::mt19937_64 rng(99);
  for (auto scheme : {PumpScheme::kNone, PumpScheme::kPump0, PumpScheme::kPump12}) {
    CAPTURE(to_string(scheme));
    ModelSpec spec;
    spec.n_max = 2;
    spec.gamma = 0.15;
    spec.delta = 0.4;
    spec.pump_detunings = {0.1, -0.05, 0.2};
    spec.scheme = scheme;
    spec.envelope = {PulseShape::kConstantStep, 0.6, 1.0};
    const FockBasis b(2);
    const auto superop = testing::sparse_liouvillian(spec, 0.6);
    const Eigen::MatrixXcd start = testing::random_density(static_cast<int>(b.dim()), rng);
    const auto traj = evolve(DensityMatrix(b, start), spec, uniform_grid(3.0, 0.5));
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      worst = std::max(worst, max_diff(traj.states[i], propagate(superop, start, traj.times[i])));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("rect pulse switches off exactly at its breakpoint") {
  ModelSpec spec;
  spec.n_max = 2;
  spec.gamma = 0.1;
  spec.scheme = PumpScheme::kPump0;
  spec.envelope = {PulseShape::kRect, 1.0, 1.3};
  const FockBasis b(2);
  const auto on = testing::sparse_liouvillian(spec, 1.0);
  const auto off = testing::sparse_liouvillian(spec, 0.0);
  const Eigen::MatrixXcd start = make_fock_state(b, {0, 0, 0}).data();
  const auto traj = evolve(make_fock_state(b, {0, 0, 0}), spec, {0.0, 1.0, 2.0, 3.0});
  CHECK(max_diff(traj.states[1], propagate(on, start, 1.0)) < 1e-8);
  const Eigen::MatrixXcd at_tau = propagate(on, start, 1.3);
  CHECK(max_diff(traj.states[2], propagate(off, at_tau, 0.7)) < 1e-8);
  CHECK(max_diff(traj.states[3], propagate(off, at_tau, 1.7)) < 1e-8);
}

TEST_CASE("sector decomposition does not change the result") {
  ModelSpec spec;
  spec.n_max = 3;
  spec.gamma = 0.1;
  spec.delta = 0.5;
  for (auto scheme : {PumpScheme::kNone, PumpScheme::kPump0, PumpScheme::kPump12}) {
    spec.scheme = scheme;
    spec.envelope = {PulseShape::kHalfGaussian, 0.8, 2.0};
    const FockBasis b(3);
    const auto rho0 = make_fock_state(b, {1, 0, 2});
    EvolveOptions whole;
    whole.use_sectors = false;
    const auto a = evolve(rho0, spec, uniform_grid(2.0, 1.0));
    const auto c = evolve(rho0, spec, uniform_grid(2.0, 1.0), whole);
    CHECK((a.states.back().data() - c.states.back().data()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("driven single mode relaxes to the coherent steady state") {
  // u = 0 leaves mode 0 as a driven damped oscillator: alpha = -i f / gamma.
  ModelSpec spec;
  spec.u = 0.0;
  spec.gamma = 0.1;
  spec.n_max = 6;
  spec.scheme = PumpScheme::kPump0;
  spec.envelope = {PulseShape::kConstantStep, 0.05, 1.0};
  const FockBasis b(6);
  const auto traj = evolve(make_fock_state(b, {0, 0, 0}), spec, {0.0, 200.0});
  const auto& rho = traj.states.back();
  CHECK(occupation(rho, Mode::kZero) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(*g2_zero_delay(rho, Mode::kZero) == doctest::Approx(1.0).epsilon(1e-3));
  const Complex coherence = rho(b.index({0, 0, 0}), b.index({0, 0, 1}));
  CHECK(std::abs(coherence - Complex(0.0, std::exp(-0.25) * 0.5)) < 1e-6);
  CHECK(occupation(rho, Mode::kOne) == 0.0);
}

TEST_CASE("invariants along a driven trajectory") {
  ModelSpec spec;
  spec.n_max = 4;
  spec.gamma = 0.1;
  spec.scheme = PumpScheme::kPump0;
  spec.envelope = {PulseShape::kConstantStep, 1.0, 1.0};
  EvolveOptions options;
  options.audit_positivity = true;
  const FockBasis b(4);
  const auto traj = evolve(make_fock_state(b, {0, 0, 0}), spec, uniform_grid(4.0, 0.5), options);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& rho = traj.states[i];
    CHECK(trace_error(rho) < 1e-8);
    CHECK(hermiticity_residual(rho) < 1e-10);
    REQUIRE(traj.min_eigenvalues[i].has_value());
    CHECK(*traj.min_eigenvalues[i] > -1e-8);
    CHECK(*traj.min_eigenvalues[i] == doctest::Approx(min_eigenvalue(rho)).epsilon(1e-9).scale(1.0));
    CHECK(std::abs(occupation(rho, Mode::kOne) - occupation(rho, Mode::kTwo)) < 1e-10);
  }
}

TEST_CASE("repeated runs are bit-identical") {
  ModelSpec spec;
  spec.n_max = 3;
  spec.gamma = 0.1;
  spec.scheme = PumpScheme::kPump12;
  spec.envelope = {PulseShape::kCenteredGaussian, 1.0, 2.0};
  const FockBasis b(3);
  const auto a = evolve(make_fock_state(b, {0, 0, 0}), spec, uniform_grid(3.0, 0.5));
  const auto c = evolve(make_fock_state(b, {0, 0, 0}), spec, uniform_grid(3.0, 0.5));
  for (std::size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i].data() == c.states[i].data());
}

TEST_CASE("invalid requests are rejected") {
  ModelSpec spec;
  spec.n_max = 2;
  const FockBasis b(2);
  const auto rho = make_fock_state(b, {0, 0, 2});
  CHECK_THROWS_AS(evolve(rho, spec, {0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(evolve(rho, spec, {0.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(evolve(make_fock_state(FockBasis(3), {0, 0, 2}), spec, {0.0, 1.0}), std::invalid_argument);
  EvolveOptions bad_tol;
  bad_tol.tol = 0.0;
  CHECK_THROWS_AS(evolve(rho, spec, {0.0, 1.0}, bad_tol), std::invalid_argument);
  DensityMatrix skew(b);
  skew.data()(0, 1) = 1.0;
  CHECK_THROWS_AS(evolve(skew, spec, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("numerical failures carry the failure time") {
  ModelSpec spec;
  spec.n_max = 2;
  spec.gamma = 0.1;
  const FockBasis b(2);
  const auto rho = make_fock_state(b, {0, 0, 2});

  EvolveOptions underflow;
  underflow.tol = 1e-14;
  underflow.min_step = 0.5;
  CHECK_THROWS_AS(evolve(rho, spec, {0.0, 5.0}, underflow), NumericalError);

  EvolveOptions strict_trace;
  strict_trace.trace_abort = -1.0;
  try {
    evolve(rho, spec, {0.0, 1.0}, strict_trace);
    FAIL("expected an abort");
  } catch (const NumericalError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= 1.0);
  }
}

}  // namespace fwm
