#include "xcf/geometry.hpp"

#include <cmath>
#include <string>

namespace xcf {

std::array<int, 3> bracket_constants(Geometry g) {
    switch (g) {
        case Geometry::Heisenberg: return {2, 0, 0};
        case Geometry::SU2:        return {2, 2, 2};
        case Geometry::E11:        return {2, 0, -2};
        case Geometry::E2:         return {2, 2, 0};
        case Geometry::SL2R:       return {-2, 2, 2};
        case Geometry::Abelian:    return {0, 0, 0};
    }
    throw InvalidInput("unknown geometry");
}

std::string_view geometry_name(Geometry g) {
    switch (g) {
        case Geometry::Heisenberg: return "heisenberg";
        case Geometry::SU2:        return "su2";
        case Geometry::E11:        return "e11";
        case Geometry::E2:         return "e2";
        case Geometry::SL2R:       return "sl2r";
        case Geometry::Abelian:    return "abelian";
    }
    throw InvalidInput("unknown geometry");
}

Geometry geometry_from_name(std::string_view name) {
    if (name == "heisenberg" || name == "nil") return Geometry::Heisenberg;
    if (name == "su2") return Geometry::SU2;
    if (name == "e11" || name == "sol") return Geometry::E11;
    if (name == "e2") return Geometry::E2;
    if (name == "sl2r") return Geometry::SL2R;
    if (name == "abelian" || name == "r3") return Geometry::Abelian;
    throw InvalidInput("unknown geometry name: " + std::string(name));
}

namespace {

void require_valid(const MilnorMetric& m) {
    if (!(m.positive()) || !std::isfinite(m.A) || !std::isfinite(m.B) || !std::isfinite(m.C))
        throw InvalidInput("metric components must be finite and strictly positive");
}

// Curvature formulas transcribed per geometry, evaluated on the metric scaled
// by its largest component; k is homogeneous of degree -1, so k(m) = k(m/M)/M.
// This keeps intermediates bounded for extreme metrics.
SectionalCurvatures curvatures_normalized(Geometry g, double A, double B, double C) {
    const double ABC = A * B * C;
    SectionalCurvatures k;
    switch (g) {
        case Geometry::Heisenberg:
            k.k1 = -3.0 * A / (B * C);
            k.k2 = A / (B * C);
            k.k3 = k.k2;
            break;
        case Geometry::SU2:
            k.k1 = (B - C) * (B - C) / ABC - 3.0 * A / (B * C) + 2.0 / B + 2.0 / C;
            k.k2 = (C - A) * (C - A) / ABC - 3.0 * B / (C * A) + 2.0 / A + 2.0 / C;
            k.k3 = (A - B) * (A - B) / ABC - 3.0 * C / (A * B) + 2.0 / A + 2.0 / B;
            break;
        case Geometry::E11:
            k.k1 = ((A - C) * (A - C) - 4.0 * A * A) / ABC;
            k.k2 = (A + C) * (A + C) / ABC;
            k.k3 = ((A - C) * (A - C) - 4.0 * C * C) / ABC;
            break;
        case Geometry::E2:
            k.k1 = (B - A) * (B + 3.0 * A) / ABC;
            k.k2 = (A - B) * (A + 3.0 * B) / ABC;
            k.k3 = (A - B) * (A - B) / ABC;
            break;
        case Geometry::SL2R:
            k.k1 = (-3.0 * A * A + B * B + C * C - 2.0 * B * C - 2.0 * A * C - 2.0 * A * B) / ABC;
            k.k2 = (-3.0 * B * B + A * A + C * C + 2.0 * B * C + 2.0 * A * C - 2.0 * A * B) / ABC;
            k.k3 = (-3.0 * C * C + A * A + B * B + 2.0 * B * C - 2.0 * A * C + 2.0 * A * B) / ABC;
            break;
        case Geometry::Abelian:
            break;
    }
    return k;
}

} // namespace

SectionalCurvatures sectional_curvatures(Geometry g, const MilnorMetric& m) {
    require_valid(m);
    const double M = m.max_component();
    SectionalCurvatures k = curvatures_normalized(g, m.A / M, m.B / M, m.C / M);
    k.k1 /= M;
    k.k2 /= M;
    k.k3 /= M;
    return k;
}

double scalar_curvature(Geometry g, const MilnorMetric& m) {
    const SectionalCurvatures k = sectional_curvatures(g, m);
    return 2.0 * (k.k1 + k.k2 + k.k3);
}

CrossCurvature cross_curvature(Geometry g, const MilnorMetric& m) {
    const SectionalCurvatures k = sectional_curvatures(g, m);
    return {m.A * k.k2 * k.k3, m.B * k.k3 * k.k1, m.C * k.k1 * k.k2};
}

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

double det3(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
         - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
         + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 inverse3(const Mat3& a, double det) {
    Mat3 inv{};
    inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    return inv;
}

Mat3 mul3(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) c[i][j] += a[i][l] * b[l][j];
    return c;
}

} // namespace

CrossCurvature cross_curvature_via_einstein(const MilnorMetric& m,
                                            const SectionalCurvatures& k) {
    require_valid(m);
    if (k.k1 == 0.0 || k.k2 == 0.0 || k.k3 == 0.0)
        throw SingularTensor("raised Einstein tensor is singular: some k_i = 0");

    const double kk[3] = {k.k1, k.k2, k.k3};
    const double g[3] = {m.A, m.B, m.C};

    // Ricci in the Milnor frame: R(f_i,f_i) = (k_j + k_l) g_ii.
    Mat3 ric{}, gm{}, ginv{};
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, l = (i + 2) % 3;
        ric[i][i] = (kk[j] + kk[l]) * g[i];
        gm[i][i] = g[i];
        ginv[i][i] = 1.0 / g[i];
    }
    const double R = 2.0 * (kk[0] + kk[1] + kk[2]);

    Mat3 E{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) E[i][j] = ric[i][j] - 0.5 * R * gm[i][j];

    const Mat3 P = mul3(ginv, mul3(E, ginv));
    const double detP = det3(P);
    if (detP == 0.0) throw SingularTensor("raised Einstein tensor is singular");
    const Mat3 V = inverse3(P, detP);
    const double scale = detP / det3(ginv);

    return {scale * V[0][0], scale * V[1][1], scale * V[2][2]};
}

} // namespace xcf
