#pragma once

#include <span>
#include <vector>

namespace qis {

/// Qubit driven by H = ωσx/2 with ω = 2πf, dephased through σz at rate
/// kappa. Time is dimensionless; f is in cycles per unit time.
struct QubitParams {
  double f = 1.0;
  double kappa = 0.0;

  double omega() const;
  /// Throws InvalidParams unless f > 0 and kappa >= 0.
  void validate() const;
};

struct BlochState {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 1.0;
  double t = 0.0;

  double norm() const;
};

/// μ = sqrt(ω² − 4κ²). Throws OverdampedRegime when ω <= 2κ.
double damped_frequency(const QubitParams& params);

/// Decay rate of r_x and r_y in the Bloch equations whose exact solution is
/// bloch_at(): 4κ, giving the e^{-2κt} envelope.
double transverse_damping_rate(const QubitParams& params);

/// Closed-form Bloch vector at time t for the initial state (0, 0, 1).
BlochState bloch_at(const QubitParams& params, double t);

/// Largest step accepted by ode_evolve / ode_trajectory.
double max_ode_step(const QubitParams& params);

/// Classical RK4 integration of the Bloch equations from (0, 0, 1) to t_end
/// with fixed step dt (the final step is shortened to land on t_end).
BlochState ode_evolve(const QubitParams& params, double t_end, double dt);

/// RK4 states at each of the non-decreasing `times`, integrating through them
/// in order with steps no larger than dt.
std::vector<BlochState> ode_trajectory(const QubitParams& params,
                                       std::span<const double> times,
                                       double dt);

/// Probability of the +1 outcome of a σz measurement.
double prob_plus(const BlochState& state);

}  // namespace qis
