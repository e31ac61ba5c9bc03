#pragma once

// Third-order geodesic equation
//   x''' + EF^k_lm x'^l (D2x/Dl2)^m + G^k_lmn x'^l x'^m x'^n = 0,
//   (D2x/Dl2)^m = x''^m + G^m_rs x'^r x'^s,
// integrated with classical RK4 on the state (x, x', x'').

#include <string>
#include <vector>

#include "qcalc/covariant.hpp"

namespace qcalc {

struct GeodesicCoefficients {
  int n = 0;
  Tensor gamma;  // connection of D2x/Dl2
  Tensor ef;     // E^k_lm + F^k_ml, never split
  Tensor g3;     // totally symmetric after `make`

  static GeodesicCoefficients zero(int n);
  /// Symmetrizes g3 over its lower indices; checks shapes and rational
  /// coefficients (MismatchedArity / InvalidArgument).
  static GeodesicCoefficients make(Tensor gamma, Tensor ef, Tensor g3);
};

/// Mean of T^k_{l1 l2 l3} over all permutations of the lower indices.
Tensor symmetrize_lower(const Tensor& t);

struct TrajectoryPoint {
  double lambda = 0.0;
  std::vector<double> x, v, a;
};

struct Trajectory {
  int n = 0;
  std::vector<TrajectoryPoint> points;

  /// Header "lambda,x1..,v1..,a1.."; 17 significant digits.
  std::string csv() const;
  Json to_json() const;
};

struct InitialState {
  std::vector<double> x0, v0, a0;
};

/// Samples at lambda0 + i*step; the final step is shortened to land on
/// lambda1. Throws InvalidArgument for step <= 0, lambda1 < lambda0 or wrong
/// vector sizes; NonFiniteState once the state overflows.
Trajectory geodesic3_integrate(const GeodesicCoefficients& c, const InitialState& s, double lambda0, double lambda1,
                               double step);

/// Independent trajectories; sequential inside each.
std::vector<Trajectory> geodesic3_integrate_many(const GeodesicCoefficients& c, const std::vector<InitialState>& s,
                                                 double lambda0, double lambda1, double step, Execution exec);

struct RichardsonResult {
  double error_h = 0.0;     // max |x_h - x_ref| at the multiples of h
  double error_half = 0.0;  // same for h/2
  double ratio = 0.0;
};

/// Compares runs with h and h/2 against a reference with h/64.
RichardsonResult richardson(const GeodesicCoefficients& c, const InitialState& s, double lambda0, double lambda1,
                            double h, Execution exec = Execution::parallel);

}  // namespace qcalc
