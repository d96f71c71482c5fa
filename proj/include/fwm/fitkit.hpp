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

#include <string>
#include <vector>

namespace fwm::fitkit {

/// Uniformly sampled series y(t).
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> y;
};

struct Detrended {
  std::vector<double> t;      // interior samples with a full averaging window
  std::vector<double> trend;  // F(t)
  std::vector<double> ratio;  // y / F - 1
};

/// Trend = exp of the centred moving average of log(y), taken over the
/// piecewise-linear interpolant across exactly one `period_hint`. Harmonics
/// of 2 pi / period_hint average out and exponential envelopes are exact.
/// Every sample must be positive.
Detrended detrend(const TimeSeries& series, double period_hint);

enum class Harmonic { kHalfOmega, kOmega };
std::string to_string(Harmonic h);

struct FitOptions {
  bool free_omega = false;
  int max_iterations = 400;
};

/// ratio(t) ~ b1 exp(-alpha1 t) cos(omega t / 2 + phi1) + b2 exp(-alpha2 t) cos(omega t + phi2)
struct FitResult {
  double b1 = 0.0, alpha1 = 0.0, phi1 = 0.0;
  double b2 = 0.0, alpha2 = 0.0, phi2 = 0.0;
  double omega_fit = 0.0;
  std::vector<double> trend_t;
  std::vector<double> trend;
  double residual_rms = 0.0;
  Harmonic dominant = Harmonic::kHalfOmega;
  int iterations = 0;
};

double two_harmonic_model(const FitResult& fit, double t);

/// Levenberg-Marquardt fit with a deterministic multi-start over the phase
/// grid {0, pi/2, -pi/2, pi}. `gamma_scale` seeds the decay rates. In
/// free-omega mode the base frequency is also fitted, seeded from `omega`
/// and from the strongest periodogram line read as either harmonic; when
/// both readings fit equally well the base nearer `omega` wins.
/// Throws FitError when no start converges.
FitResult fit_two_harmonics(const std::vector<double>& t, const std::vector<double>& ratio, double omega,
                            double gamma_scale, const FitOptions& options = {});

/// detrend with period 4 pi / omega, then fit_two_harmonics; the trend is kept in the result.
FitResult fit_interpolation(const TimeSeries& series, double omega, double gamma_scale,
                            const FitOptions& options = {});

}  // namespace fwm::fitkit
