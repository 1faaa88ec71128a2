#ifndef XCF_FLOW_HPP
#define XCF_FLOW_HPP

#include <array>
#include <optional>

#include "xcf/geometry.hpp"

namespace xcf {

// Positive flow is dg/dt = +2h, negative is dg/dt = -2h.
enum class FlowSign { Positive, Negative };

inline double sign_factor(FlowSign s) { return s == FlowSign::Positive ? 1.0 : -1.0; }
std::string_view sign_name(FlowSign s);
FlowSign sign_from_name(std::string_view name); // throws InvalidInput

// Auxiliary quadratics of the per-geometry ODE systems: (X,Y,Z) for SU2, E11,
// E2 and (F1,F2,F3) for SL2R. Related to the curvatures by q_i = ∓ k_i ABC,
// so the flow reads dm_i/dt = ±2 m_i q_j q_l / (ABC)^2 either way.
struct AuxQuantities {
    double q1 = 0.0, q2 = 0.0, q3 = 0.0;
    double operator[](int i) const { return i == 0 ? q1 : (i == 1 ? q2 : q3); }
};

bool has_aux(Geometry g);
AuxQuantities aux_quantities(Geometry g, const MilnorMetric& m); // throws NotApplicable

struct Rates {
    double dA = 0.0, dB = 0.0, dC = 0.0;
    double operator[](int i) const { return i == 0 ? dA : (i == 1 ? dB : dC); }
};

// Right-hand side of the flow in the metric components.
Rates xcf_rhs(Geometry g, FlowSign s, const MilnorMetric& m);

// Same vector field in u = (ln A, ln B, ln C); scale-factored so that huge or
// tiny components do not overflow intermediates.
std::array<double, 3> log_rhs(Geometry g, FlowSign s, const std::array<double, 3>& u);

// Closed-form rates of log-ratios and differences, transcribed display by
// display. Entries without a closed form for the geometry are left empty;
// Heisenberg/E2/Abelian have none at all (NotApplicable).
struct DerivedRates {
    std::optional<double> dln_ab, dln_ac, dln_bc; // d ln(A/B), d ln(A/C), d ln(B/C)
    std::optional<double> d_ab, d_bc, d_ac;       // d(A-B), d(B-C), d(A-C)
    std::optional<double> d_a3c;                  // d(A-3C), E11 only
};

DerivedRates derived_rates(Geometry g, FlowSign s, const MilnorMetric& m);

} // namespace xcf

#endif
