#include "xcf/exact.hpp"

#include <cmath>
#include <string>

namespace xcf {

namespace {

void require_positive(const MilnorMetric& m) {
    if (!m.positive())
        throw InvalidInput("metric components must be strictly positive");
}

void require_equal(double a, double b, const char* what) {
    if (std::fabs(a - b) > 1e-12 * std::max(std::fabs(a), std::fabs(b)))
        throw InvalidInput(std::string("family precondition violated: ") + what);
}

} // namespace

double heisenberg_T0(const MilnorMetric& init) {
    require_positive(init);
    const double R0 = 2.0 * init.A / (init.B * init.C);
    return 1.0 / (7.0 * R0 * R0);
}

MilnorMetric heisenberg_exact(const MilnorMetric& init, FlowSign s, double t) {
    const double T0 = heisenberg_T0(init);
    // Native direction is the negative flow, defined on (-T0, inf);
    // the positive flow at s is the same curve at -s.
    const double tau = (s == FlowSign::Negative) ? t : -t;
    const double base = 1.0 + tau / T0;
    if (base <= 0.0)
        throw OutOfDomain("time is outside (-T0, inf) for this family");
    return {init.A * std::pow(base, -1.0 / 14.0),
            init.B * std::pow(base, 3.0 / 14.0),
            init.C * std::pow(base, 3.0 / 14.0)};
}

MilnorMetric su2_round_exact(const MilnorMetric& init, FlowSign s, double t) {
    require_positive(init);
    require_equal(init.A, init.B, "A0 = B0 (round)");
    require_equal(init.B, init.C, "B0 = C0 (round)");
    const double tau = (s == FlowSign::Positive) ? t : -t;
    const double sq = init.A * init.A + 4.0 * tau;
    if (sq <= 0.0) throw OutOfDomain("A0^2 + 4t must stay positive");
    const double v = std::sqrt(sq);
    return {v, v, v};
}

MilnorMetric e11_symmetric_exact(const MilnorMetric& init, FlowSign s, double t) {
    require_positive(init);
    require_equal(init.A, init.C, "A0 = C0 (symmetric)");
    const double tau = (s == FlowSign::Positive) ? t : -t;
    const double sq = init.B * init.B + 64.0 * tau;
    if (sq <= 0.0) throw OutOfDomain("B0^2 + 64t must stay positive");
    const double B = std::sqrt(sq);
    const double A = init.A * init.B / B;
    return {A, B, A};
}

MilnorMetric e2_fixed_exact(const MilnorMetric& init, double /*t*/) {
    require_positive(init);
    require_equal(init.A, init.B, "A0 = B0 (flat fixed point)");
    return init;
}

MilnorMetric exact_eval(ExactFamily family, const MilnorMetric& init, FlowSign s,
                        double t) {
    switch (family) {
        case ExactFamily::HeisenbergGeneral: return heisenberg_exact(init, s, t);
        case ExactFamily::SU2Round:          return su2_round_exact(init, s, t);
        case ExactFamily::E11Symmetric:      return e11_symmetric_exact(init, s, t);
        case ExactFamily::E2Fixed:           return e2_fixed_exact(init, t);
    }
    throw InvalidInput("unknown exact family");
}

Geometry exact_family_geometry(ExactFamily family) {
    switch (family) {
        case ExactFamily::HeisenbergGeneral: return Geometry::Heisenberg;
        case ExactFamily::SU2Round:          return Geometry::SU2;
        case ExactFamily::E11Symmetric:      return Geometry::E11;
        case ExactFamily::E2Fixed:           return Geometry::E2;
    }
    throw InvalidInput("unknown exact family");
}

} // namespace xcf
