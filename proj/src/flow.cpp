#include "xcf/flow.hpp"

#include <cmath>
#include <string>

namespace xcf {

std::string_view sign_name(FlowSign s) {
    return s == FlowSign::Positive ? "plus" : "minus";
}

FlowSign sign_from_name(std::string_view name) {
    if (name == "plus" || name == "+" || name == "positive") return FlowSign::Positive;
    if (name == "minus" || name == "-" || name == "negative") return FlowSign::Negative;
    throw InvalidInput("unknown flow sign: " + std::string(name));
}

bool has_aux(Geometry g) {
    return g == Geometry::SU2 || g == Geometry::E11 || g == Geometry::E2 ||
           g == Geometry::SL2R;
}

namespace {

void require_valid(const MilnorMetric& m) {
    if (!m.positive() || !std::isfinite(m.A) || !std::isfinite(m.B) || !std::isfinite(m.C))
        throw InvalidInput("metric components must be finite and strictly positive");
}

// Aux polynomials as displayed, degree 2 homogeneous: q(m) = M^2 q(m/M).
AuxQuantities aux_raw(Geometry g, double A, double B, double C) {
    AuxQuantities q;
    switch (g) {
        case Geometry::SU2:
            q.q1 = 3.0 * A * A - (B - C) * (B - C) - 2.0 * A * B - 2.0 * A * C;
            q.q2 = 3.0 * B * B - (A - C) * (A - C) - 2.0 * A * B - 2.0 * B * C;
            q.q3 = 3.0 * C * C - (A - B) * (A - B) - 2.0 * B * C - 2.0 * A * C;
            break;
        case Geometry::E11:
            q.q1 = (A + C) * (3.0 * A - C);
            q.q2 = -(A + C) * (A + C);
            q.q3 = -(A + C) * (A - 3.0 * C);
            break;
        case Geometry::E2:
            q.q1 = (A - B) * (3.0 * A + B);
            q.q2 = (B - A) * (3.0 * B + A);
            q.q3 = -(A - B) * (A - B);
            break;
        case Geometry::SL2R:
            q.q1 = -3.0 * A * A + B * B + C * C - 2.0 * B * C - 2.0 * A * C - 2.0 * A * B;
            q.q2 = -3.0 * B * B + A * A + C * C + 2.0 * B * C + 2.0 * A * C - 2.0 * A * B;
            q.q3 = -3.0 * C * C + A * A + B * B + 2.0 * B * C - 2.0 * A * C + 2.0 * A * B;
            break;
        default:
            break;
    }
    return q;
}

} // namespace

AuxQuantities aux_quantities(Geometry g, const MilnorMetric& m) {
    require_valid(m);
    if (!has_aux(g))
        throw NotApplicable(std::string(geometry_name(g)) +
                            " has no auxiliary quantities");
    return aux_raw(g, m.A, m.B, m.C);
}

Rates xcf_rhs(Geometry g, FlowSign s, const MilnorMetric& m) {
    require_valid(m);
    const double sgn = sign_factor(s);
    const double M = m.max_component();
    const double A = m.A / M, B = m.B / M, C = m.C / M;

    Rates r;
    if (g == Geometry::Abelian) return r;
    if (g == Geometry::Heisenberg) {
        const double w = A / (B * C);
        r.dA = sgn * 2.0 * A * w * w / M;
        r.dB = sgn * -6.0 * (A / B) * (A / (C * C)) / M;
        r.dC = sgn * -6.0 * (A / C) * (A / (B * B)) / M;
        return r;
    }
    const AuxQuantities q = aux_raw(g, A, B, C);
    const double den = (A * B * C) * (A * B * C) * M;
    r.dA = sgn * 2.0 * A * q.q2 * q.q3 / den;
    r.dB = sgn * 2.0 * B * q.q3 * q.q1 / den;
    r.dC = sgn * 2.0 * C * q.q1 * q.q2 / den;
    return r;
}

std::array<double, 3> log_rhs(Geometry g, FlowSign s, const std::array<double, 3>& u) {
    if (!std::isfinite(u[0]) || !std::isfinite(u[1]) || !std::isfinite(u[2]))
        throw InvalidInput("log-metric components must be finite");
    const double sgn = sign_factor(s);
    if (g == Geometry::Abelian) return {0.0, 0.0, 0.0};

    const double umax = std::max(u[0], std::max(u[1], u[2]));
    const double A = std::exp(u[0] - umax);
    const double B = std::exp(u[1] - umax);
    const double C = std::exp(u[2] - umax);
    const double inv_scale = std::exp(-2.0 * umax); // d ln m is degree -2 in scale

    if (g == Geometry::Heisenberg) {
        const double w = A / (B * C);
        const double w2 = w * w * inv_scale;
        return {sgn * 2.0 * w2, sgn * -6.0 * w2, sgn * -6.0 * w2};
    }
    const AuxQuantities q = aux_raw(g, A, B, C);
    const double den = (A * B * C) * (A * B * C);
    return {sgn * 2.0 * q.q2 * q.q3 * inv_scale / den,
            sgn * 2.0 * q.q3 * q.q1 * inv_scale / den,
            sgn * 2.0 * q.q1 * q.q2 * inv_scale / den};
}

DerivedRates derived_rates(Geometry g, FlowSign s, const MilnorMetric& m) {
    require_valid(m);
    const double sgn = sign_factor(s);
    const double A = m.A, B = m.B, C = m.C;
    const double den = (A * B * C) * (A * B * C);
    DerivedRates r;

    switch (g) {
        case Geometry::SU2: {
            const AuxQuantities q = aux_raw(g, A, B, C);
            r.dln_ab = sgn * 8.0 * q.q3 * (B - A) * (A + B - C) / den;
            r.dln_ac = sgn * 8.0 * q.q2 * (A - C) * (B - C - A) / den;
            r.dln_bc = sgn * 8.0 * q.q1 * (B - C) * (A - B - C) / den;
            r.d_ab = sgn * 2.0 * q.q3 * (B - A) * (A * A + A * (6.0 * B - 2.0 * C) + (B - C) * (B - C)) / den;
            r.d_bc = sgn * 2.0 * q.q1 * (C - B) * ((A - B - C) * (A - B - C) + 4.0 * B * C) / den;
            r.d_ac = sgn * 2.0 * q.q2 * (C - A) * ((A - B) * (A - B) + 6.0 * A * C - 2.0 * B * C + C * C) / den;
            break;
        }
        case Geometry::E11: {
            const double ac = A + C;
            r.d_ac = sgn * 2.0 * ac * ac * ac * ac * (A - C) / den;
            r.dln_ac = sgn * 8.0 * ac * ac * ac * (A - C) / den;
            r.d_a3c = sgn * 2.0 * ac * ac * ac * (A * A + 6.0 * A * C - 3.0 * C * C) / den;
            r.dln_bc = sgn * 8.0 * ac * ac * (3.0 * A - C) / (A * A * B * B * C);
            break;
        }
        case Geometry::SL2R: {
            const AuxQuantities q = aux_raw(g, A, B, C);
            r.dln_ab = sgn * 8.0 * (A + B) * q.q3 * (A + C - B) / den;
            r.dln_bc = sgn * 8.0 * q.q1 * (B - C) * (A + B + C) / den;
            r.dln_ac = sgn * 8.0 * q.q2 * (C + A) * (A + B - C) / den;
            break;
        }
        default:
            throw NotApplicable(std::string(geometry_name(g)) +
                                " has no derived-rate displays");
    }
    return r;
}

} // namespace xcf
