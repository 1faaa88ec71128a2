#ifndef XCF_EXACT_HPP
#define XCF_EXACT_HPP

#include "xcf/flow.hpp"

namespace xcf {

// Closed-form solution families. Each evaluator is stated in its native flow
// direction and exposes the other one by time negation.
enum class ExactFamily { HeisenbergGeneral, SU2Round, E11Symmetric, E2Fixed };

// Heisenberg singular time of the positive flow, T0 = B0^2 C0^2 / (28 A0^2)
// = 1/(7 R0^2) with R0 = 2 A0/(B0 C0).
double heisenberg_T0(const MilnorMetric& init);

// Negative flow through init lives on (-T0, inf):
//   A = A0 (1+t/T0)^(-1/14),  B,C = B0,C0 (1+t/T0)^(3/14).
// The positive flow at s in [0, T0) is the same formula at t = -s.
MilnorMetric heisenberg_exact(const MilnorMetric& init, FlowSign s, double t);

// Round metrics: A=B=C = sqrt(A0^2 + 4t) under the positive flow.
MilnorMetric su2_round_exact(const MilnorMetric& init, FlowSign s, double t);

// Symmetric locus A=C: under the positive flow
//   B = sqrt(B0^2 + 64 t),  A = C = A0 B0 / B(t);  A*B is constant.
MilnorMetric e11_symmetric_exact(const MilnorMetric& init, FlowSign s, double t);

// A=B metrics on E2 are flat fixed points in both directions.
MilnorMetric e2_fixed_exact(const MilnorMetric& init, double t);

// Dispatcher; validates the family precondition on init (relative 1e-12).
MilnorMetric exact_eval(ExactFamily family, const MilnorMetric& init,
                        FlowSign s, double t);

Geometry exact_family_geometry(ExactFamily family);

} // namespace xcf

#endif
