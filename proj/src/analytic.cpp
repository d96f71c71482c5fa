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

#include "fwm/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace fwm::analytic {

namespace {

constexpr double kSeriesCut = 1e-6;

// sin(w t / 2) / w, finite as w -> 0.
double half_sin_over(double w, double t) {
  const double x = w * t;
  if (std::abs(x) < kSeriesCut) return 0.5 * t * (1.0 - x * x / 24.0);
  return std::sin(0.5 * x) / w;
}

// sin(w t) / w, finite as w -> 0.
double sin_over(double w, double t) {
  const double x = w * t;
  if (std::abs(x) < kSeriesCut) return t * (1.0 - x * x / 6.0);
  return std::sin(x) / w;
}

void require_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("closed forms need t >= 0");
}

}  // namespace

double rabi_frequency(double delta, double u) {
  if (!(u >= 0.0)) throw std::invalid_argument("rabi_frequency needs u >= 0");
  return std::sqrt(delta * delta + 8.0 * u * u);
}

TwoPhotonEigensystem two_photon_eigensystem(double delta, double u) {
  if (!(u > 0.0)) throw std::invalid_argument("two_photon_eigensystem needs u > 0");
  const double omega = rabi_frequency(delta, u);
  TwoPhotonEigensystem es;
  es.omega = omega;
  es.e_plus = 0.5 * (delta + omega);
  es.e_minus = 0.5 * (delta - omega);
  // psi_pm = (+-1 / (2 sqrt(Omega))) [sqrt(Omega -+ delta) (a0^+)^2 +- 4u a1^+ a2^+ / sqrt(Omega -+ delta)] |0>
  // with (a0^+)^2 |0> = sqrt(2) |2_w0>.
  for (int k = 0; k < 2; ++k) {
    const double sign = k == 0 ? 1.0 : -1.0;
    const double root = std::sqrt(omega - sign * delta);
    const double pre = sign / (2.0 * std::sqrt(omega));
    es.amp_20[k] = pre * std::sqrt(2.0) * root;
    es.amp_11[k] = pre * sign * 4.0 * u / root;
  }
  return es;
}

TwoPhotonProbabilities closed_form_probabilities(double t, double u, double gamma, double delta) {
  require_time(t);
  const double omega = rabi_frequency(delta, u);
  const double decay = std::exp(-4.0 * gamma * t);
  const double c = std::cos(0.5 * omega * t);
  const double s_over = half_sin_over(omega, t);  // sin(Omega t/2) / Omega

  TwoPhotonProbabilities p;
  p.p20 = decay * (c * c + delta * delta * s_over * s_over);
  p.p11 = decay * 8.0 * u * u * s_over * s_over;
  if (gamma == 0.0) return p;

  // Omega^2 cancelled against the prefactor; sin(Omega t/2) carried as Omega * s_over.
  const double denom = omega * omega + 4.0 * gamma * gamma;
  const double grow = std::expm1(2.0 * gamma * t);
  const double ring = s_over * c + 2.0 * gamma * s_over * s_over;  // sin (Omega cos + 2 gamma sin) / Omega^2
  p.p10 = 2.0 * decay / denom * (grow * (omega * omega - 4.0 * u * u + 4.0 * gamma * gamma) + 16.0 * gamma * u * u * ring);
  p.p1_single = 4.0 * decay * u * u / denom * (grow - 4.0 * gamma * ring);
  return p;
}

TwoPhotonOccupations closed_form_occupations(double t, double u, double gamma, double delta) {
  require_time(t);
  const double omega = rabi_frequency(delta, u);
  const double denom = 4.0 * gamma * gamma + omega * omega;
  if (denom == 0.0) return {2.0, 0.0};
  const double decay = std::exp(-4.0 * gamma * t);
  const double grow = std::exp(2.0 * gamma * t);
  // (Omega cos(Omega t) + 2 gamma sin(Omega t)) / Omega
  const double wave = std::cos(omega * t) + 2.0 * gamma * sin_over(omega, t);
  TwoPhotonOccupations n;
  n.n0 = 2.0 * decay / denom * (grow * (denom - 4.0 * u * u) + 4.0 * u * u * wave);
  n.n1 = 4.0 * u * u * decay / denom * (grow - wave);
  return n;
}

double perturbative_occupation(double t, double f, double u, PumpScheme scheme) {
  require_time(t);
  if (!(u > 0.0)) throw std::invalid_argument("perturbative_occupation needs u > 0");
  if (scheme == PumpScheme::kNone) throw std::invalid_argument("perturbative_occupation needs a pump scheme");
  if (t == 0.0) return 0.0;
  // 1 - sin(Omega t / 2) / (sqrt(2) u t) with Omega = 2 sqrt(2) u.
  const double x = std::sqrt(2.0) * u * t;
  const double bracket = std::abs(x) < 1e-4 ? x * x / 6.0 * (1.0 - x * x / 20.0) : 1.0 - std::sin(x) / x;
  const double single = std::pow(f, 4) * t * t / (u * u) * bracket * bracket;
  return scheme == PumpScheme::kPump12 ? 4.0 * single : single;
}

}  // namespace fwm::analytic
