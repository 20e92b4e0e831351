#include "qis/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qis/errors.hpp"

namespace qis {

namespace {

constexpr double kBlochTolerance = 1e-9;

using Vec3 = std::array<double, 3>;

// d/dt (rx, ry, rz)
Vec3 bloch_rhs(const Vec3& r, double omega, double gamma) {
  return {-gamma * r[0], -omega * r[2] - gamma * r[1], omega * r[1]};
}

Vec3 axpy(const Vec3& x, double a, const Vec3& y) {
  return {x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]};
}

Vec3 rk4_step(const Vec3& r, double h, double omega, double gamma) {
  const Vec3 k1 = bloch_rhs(r, omega, gamma);
  const Vec3 k2 = bloch_rhs(axpy(r, 0.5 * h, k1), omega, gamma);
  const Vec3 k3 = bloch_rhs(axpy(r, 0.5 * h, k2), omega, gamma);
  const Vec3 k4 = bloch_rhs(axpy(r, h, k3), omega, gamma);
  Vec3 out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = r[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

void check_step(const QubitParams& params, double dt) {
  if (!(dt > 0.0) || dt > max_ode_step(params)) {
    throw StepTooLarge("ode step " + std::to_string(dt) + " outside (0, " +
                       std::to_string(max_ode_step(params)) + "]");
  }
}

}  // namespace

double QubitParams::omega() const { return 2.0 * std::numbers::pi * f; }

void QubitParams::validate() const {
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw InvalidParams("qubit frequency must be positive, got " + std::to_string(f));
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw InvalidParams("coupling kappa must be non-negative, got " + std::to_string(kappa));
  }
}

double BlochState::norm() const { return std::sqrt(rx * rx + ry * ry + rz * rz); }

double damped_frequency(const QubitParams& params) {
  params.validate();
  const double omega = params.omega();
  if (omega <= 2.0 * params.kappa) {
    throw OverdampedRegime("overdamped: omega = " + std::to_string(omega) +
                           " <= 2 kappa = " + std::to_string(2.0 * params.kappa));
  }
  return std::sqrt(omega * omega - 4.0 * params.kappa * params.kappa);
}

double transverse_damping_rate(const QubitParams& params) { return 4.0 * params.kappa; }

BlochState bloch_at(const QubitParams& params, double t) {
  const double mu = damped_frequency(params);
  if (t < 0.0) {
    throw NegativeTime("bloch_at requires t >= 0, got " + std::to_string(t));
  }
  const double omega = params.omega();
  const double envelope = std::exp(-2.0 * params.kappa * t);
  const double s = std::sin(mu * t);
  const double c = std::cos(mu * t);
  BlochState state;
  state.t = t;
  state.rx = 0.0;
  state.ry = -(omega / mu) * envelope * s;
  state.rz = envelope * (c + 2.0 * params.kappa * s / mu);
  return state;
}

double max_ode_step(const QubitParams& params) {
  params.validate();
  return 1.0 / (10.0 * std::max(params.omega(), 2.0 * params.kappa));
}

BlochState ode_evolve(const QubitParams& params, double t_end, double dt) {
  check_step(params, dt);
  if (t_end < 0.0) {
    throw NegativeTime("ode_evolve requires t_end >= 0");
  }
  const double omega = params.omega();
  const double gamma = transverse_damping_rate(params);
  Vec3 r{0.0, 0.0, 1.0};
  const auto full_steps = static_cast<std::size_t>(std::floor(t_end / dt));
  for (std::size_t i = 0; i < full_steps; ++i) {
    r = rk4_step(r, dt, omega, gamma);
  }
  const double rest = t_end - static_cast<double>(full_steps) * dt;
  if (rest > 0.0) {
    r = rk4_step(r, rest, omega, gamma);
  }
  return {r[0], r[1], r[2], t_end};
}

std::vector<BlochState> ode_trajectory(const QubitParams& params,
                                       std::span<const double> times, double dt) {
  check_step(params, dt);
  const double omega = params.omega();
  const double gamma = transverse_damping_rate(params);
  std::vector<BlochState> out;
  out.reserve(times.size());
  Vec3 r{0.0, 0.0, 1.0};
  double now = 0.0;
  for (double target : times) {
    if (target < now) {
      throw NegativeTime("ode_trajectory times must be non-negative and non-decreasing");
    }
    const double span = target - now;
    const auto steps = static_cast<std::size_t>(std::ceil(span / dt));
    if (steps > 0) {
      const double h = span / static_cast<double>(steps);
      for (std::size_t i = 0; i < steps; ++i) {
        r = rk4_step(r, h, omega, gamma);
      }
    }
    now = target;
    out.push_back({r[0], r[1], r[2], target});
  }
  return out;
}

double prob_plus(const BlochState& state) {
  if (!(std::abs(state.rz) <= 1.0 + kBlochTolerance)) {
    throw InvalidBloch("|rz| exceeds 1: " + std::to_string(state.rz));
  }
  return std::clamp(0.5 * (state.rz + 1.0), 0.0, 1.0);
}

}  // namespace qis
