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

#include "fwm/fitkit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fwm/errors.hpp"

namespace fwm::fitkit {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

double sample_step(const std::vector<double>& t) {
  if (t.size() < 2) throw std::invalid_argument("series too short");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0.0)) throw std::invalid_argument("series times must increase");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * dt) throw std::invalid_argument("series must be uniformly sampled");
  }
  return dt;
}

}  // namespace

std::string to_string(Harmonic h) { return h == Harmonic::kHalfOmega ? "half_omega" : "omega"; }

Detrended detrend(const TimeSeries& series, double period_hint) {
  if (series.t.size() != series.y.size()) throw std::invalid_argument("series t and y differ in length");
  if (!(period_hint > 0.0)) throw std::invalid_argument("non-positive trend window");
  const double dt = sample_step(series.t);
  if (period_hint < dt) throw std::invalid_argument("trend window shorter than one sample");
  const double span = series.t.back() - series.t.front();
  if (span < 3.0 * period_hint) throw std::invalid_argument("series too short: needs at least 3 periods");

  const std::size_t n = series.y.size();
  // Averaging log(y) makes the trend exact for exponential envelopes.
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(series.y[i] > 0.0)) {
      throw std::invalid_argument("series must be positive to detrend (t=" + std::to_string(series.t[i]) + ")");
    }
    y[i] = std::log(series.y[i]);
  }
  // Cumulative trapezoid integral at the samples.
  std::vector<double> cum(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) cum[i] = cum[i - 1] + 0.5 * dt * (y[i - 1] + y[i]);
  const double t0 = series.t.front();
  auto integral_to = [&](double x) {
    const double pos = (x - t0) / dt;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 2)));
    const double frac = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
    const double y_at = y[i] + frac * (y[i + 1] - y[i]);
    return cum[i] + 0.5 * frac * dt * (y[i] + y_at);
  };

  Detrended out;
  const double half = 0.5 * period_hint;
  const double slack = 1e-9 * dt;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = series.t[i];
    if (ti - half < t0 - slack || ti + half > series.t.back() + slack) continue;
    const double log_trend = (integral_to(ti + half) - integral_to(ti - half)) / period_hint;
    out.t.push_back(ti);
    out.trend.push_back(std::exp(log_trend));
    out.ratio.push_back(std::expm1(y[i] - log_trend));
  }
  return out;
}

double two_harmonic_model(const FitResult& fit, double t) {
  return fit.b1 * std::exp(-fit.alpha1 * t) * std::cos(0.5 * fit.omega_fit * t + fit.phi1) +
         fit.b2 * std::exp(-fit.alpha2 * t) * std::cos(fit.omega_fit * t + fit.phi2);
}

namespace {

// Parameter vector: b1, alpha1, phi1, b2, alpha2, phi2 [, omega]
using Vec = Eigen::VectorXd;

struct Problem {
  const std::vector<double>& t;
  const std::vector<double>& y;
  double omega_fixed;
  bool free_omega;

  Eigen::Index params() const { return free_omega ? 7 : 6; }
  double omega(const Vec& p) const { return free_omega ? p[6] : omega_fixed; }

  double cost(const Vec& p, Vec* residual = nullptr, Eigen::MatrixXd* jac = nullptr) const {
    const auto n = static_cast<Eigen::Index>(t.size());
    if (residual) residual->resize(n);
    if (jac) jac->resize(n, params());
    const double w = omega(p);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ti = t[static_cast<std::size_t>(i)];
      const double e1 = std::exp(-p[1] * ti), e2 = std::exp(-p[4] * ti);
      const double a1 = 0.5 * w * ti + p[2], a2 = w * ti + p[5];
      const double c1 = std::cos(a1), s1 = std::sin(a1), c2 = std::cos(a2), s2 = std::sin(a2);
      const double r = p[0] * e1 * c1 + p[3] * e2 * c2 - y[static_cast<std::size_t>(i)];
      sum += r * r;
      if (residual) (*residual)[i] = r;
      if (jac) {
        auto row = jac->row(i);
        row[0] = e1 * c1;
        row[1] = -ti * p[0] * e1 * c1;
        row[2] = -p[0] * e1 * s1;
        row[3] = e2 * c2;
        row[4] = -ti * p[3] * e2 * c2;
        row[5] = -p[3] * e2 * s2;
        if (free_omega) row[6] = -p[0] * e1 * s1 * 0.5 * ti - p[3] * e2 * s2 * ti;
      }
    }
    return sum;
  }
};

struct LmOutcome {
  Vec p;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

LmOutcome levenberg_marquardt(const Problem& prob, Vec p, int max_iterations) {
  Vec r;
  Eigen::MatrixXd jac;
  double cost = prob.cost(p, &r, &jac);
  double lambda = 1e-3;
  LmOutcome out;
  const double tiny = 1e-300;
  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it + 1;
    if (cost <= 1e-30 * static_cast<double>(prob.t.size())) {
      out.converged = true;
      break;
    }
    const Eigen::MatrixXd a = jac.transpose() * jac;
    const Vec g = jac.transpose() * r;
    Vec diag = a.diagonal().cwiseMax(1e-12 * std::max(a.diagonal().maxCoeff(), tiny));
    bool improved = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd damped = a;
      damped.diagonal() += lambda * diag;
      const Vec step = damped.ldlt().solve(-g);
      Vec trial = p + step;
      trial[1] = std::max(trial[1], 0.0);
      trial[4] = std::max(trial[4], 0.0);
      if (prob.free_omega) trial[6] = std::max(trial[6], 1e-9);
      Vec r_trial;
      Eigen::MatrixXd jac_trial;
      const double c_trial = prob.cost(trial, &r_trial, &jac_trial);
      if (std::isfinite(c_trial) && c_trial < cost) {
        const double drop = (cost - c_trial) / std::max(cost, tiny);
        const double move = (trial - p).norm() / (p.norm() + 1e-12);
        p = trial;
        r = std::move(r_trial);
        jac = std::move(jac_trial);
        cost = c_trial;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        if (drop < 1e-14 || move < 1e-13) out.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) out.converged = true;  // no descent direction left at this precision
    if (out.converged) break;
  }
  out.p = p;
  out.cost = cost;
  return out;
}

// Amplitudes and phases of both harmonics for fixed decay rates, by linear least squares.
Vec linear_seed(const std::vector<double>& t, const std::vector<double>& y, double omega, double alpha) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd basis(n, 4);
  Vec rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    const double e = std::exp(-alpha * ti);
    basis(i, 0) = e * std::cos(0.5 * omega * ti);
    basis(i, 1) = e * std::sin(0.5 * omega * ti);
    basis(i, 2) = e * std::cos(omega * ti);
    basis(i, 3) = e * std::sin(omega * ti);
    rhs[i] = y[static_cast<std::size_t>(i)];
  }
  const Vec c = basis.colPivHouseholderQr().solve(rhs);
  // A cos x + B sin x = b cos(x + phi) with b = hypot(A, B), phi = atan2(-B, A)
  Vec p(6);
  p << std::hypot(c[0], c[1]), alpha, std::atan2(-c[1], c[0]), std::hypot(c[2], c[3]), alpha,
      std::atan2(-c[3], c[2]);
  return p;
}

double periodogram_peak(const std::vector<double>& t, const std::vector<double>& y) {
  const double dt = sample_step(t);
  const double span = t.back() - t.front();
  const double w_max = kPi / dt;
  const double dw = 2.0 * kPi / (span * 16.0);
  double best_w = dw, best_p = -1.0;
  for (double w = dw; w < w_max; w += dw) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) acc += y[i] * std::polar(1.0, -w * t[i]);
    const double power = std::norm(acc);
    if (power > best_p) {
      best_p = power;
      best_w = w;
    }
  }
  return best_w;
}

}  // namespace

FitResult fit_two_harmonics(const std::vector<double>& t, const std::vector<double>& ratio, double omega,
                            double gamma_scale, const FitOptions& options) {
  if (t.size() != ratio.size()) throw std::invalid_argument("t and ratio differ in length");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
  const std::size_t n_params = options.free_omega ? 7 : 6;
  if (t.size() <= n_params) throw std::invalid_argument("too few samples for a two-harmonic fit");

  FitResult result;
  result.omega_fit = omega;
  double peak = 0.0;
  for (double r : ratio) peak = std::max(peak, std::abs(r));
  if (peak == 0.0) return result;  // flat input: both harmonics absent

  std::vector<double> bases{omega};
  if (options.free_omega) {
    const double w_peak = periodogram_peak(t, ratio);
    bases = {w_peak, 2.0 * w_peak, omega};
  }
  const double alpha0 = std::max(gamma_scale, 0.0);
  const std::array<double, 4> phase_grid{0.0, 0.5 * kPi, -0.5 * kPi, kPi};

  double rms = 0.0;
  for (double r : ratio) rms += r * r;
  rms = std::sqrt(rms / static_cast<double>(ratio.size()));

  std::vector<LmOutcome> outcomes;
  for (double base : bases) {
    const Problem prob{t, ratio, base, options.free_omega};
    std::vector<Vec> starts;
    const Vec seed = linear_seed(t, ratio, base, alpha0);
    starts.push_back(seed);
    for (double phi1 : phase_grid) {
      for (double phi2 : phase_grid) {
        Vec p(6);
        p << std::max(seed[0], rms), alpha0, phi1, std::max(seed[3], rms), alpha0, phi2;
        starts.push_back(p);
      }
    }
    for (Vec p : starts) {
      if (options.free_omega) {
        p.conservativeResize(7);
        p[6] = base;
      }
      LmOutcome o = levenberg_marquardt(prob, p, options.max_iterations);
      if (!o.converged) continue;
      if (!options.free_omega) {
        o.p.conservativeResize(7);
        o.p[6] = base;
      }
      outcomes.push_back(std::move(o));
    }
  }
  if (outcomes.empty()) throw FitError("two-harmonic fit did not converge", rms);

  double best_cost = outcomes.front().cost;
  for (const auto& o : outcomes) best_cost = std::min(best_cost, o.cost);
  // A lone spectral line fits equally well as the half harmonic of 2w or the
  // full harmonic of w; among minima explaining the same share of the signal
  // (to 0.1%) take the base nearest `omega`. Remaining ties go to the earlier start.
  double energy = 0.0;
  for (double r : ratio) energy += r * r;
  const double cutoff = options.free_omega ? best_cost + 1e-3 * energy : best_cost * (1.0 + 1e-12);
  const LmOutcome* best = nullptr;
  for (const auto& o : outcomes) {
    if (o.cost > cutoff) continue;
    if (!best || std::abs(std::log(o.p[6] / omega)) < std::abs(std::log(best->p[6] / omega)) - 1e-12) best = &o;
  }

  Vec p = best->p;
  for (int k : {0, 3}) {
    if (p[k] < 0.0) {
      p[k] = -p[k];
      p[k + 2] += kPi;
    }
  }
  result.b1 = p[0];
  result.alpha1 = p[1];
  result.phi1 = wrap_phase(p[2]);
  result.b2 = p[3];
  result.alpha2 = p[4];
  result.phi2 = wrap_phase(p[5]);
  result.omega_fit = p[6];
  result.iterations = best->iterations;
  result.residual_rms = std::sqrt(best->cost / static_cast<double>(t.size()));

  double energy1 = 0.0, energy2 = 0.0;
  for (double ti : t) {
    energy1 += std::exp(-2.0 * result.alpha1 * ti);
    energy2 += std::exp(-2.0 * result.alpha2 * ti);
  }
  energy1 *= result.b1 * result.b1;
  energy2 *= result.b2 * result.b2;
  result.dominant = energy2 > energy1 ? Harmonic::kOmega : Harmonic::kHalfOmega;
  return result;
}

FitResult fit_interpolation(const TimeSeries& series, double omega, double gamma_scale, const FitOptions& options) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
  const Detrended d = detrend(series, 4.0 * kPi / omega);
  FitResult fit = fit_two_harmonics(d.t, d.ratio, omega, gamma_scale, options);
  fit.trend_t = d.t;
  fit.trend = d.trend;
  return fit;
}

}  // namespace fwm::fitkit
