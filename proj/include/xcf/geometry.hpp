#ifndef XCF_GEOMETRY_HPP
#define XCF_GEOMETRY_HPP

#include <array>
#include <string_view>

#include "xcf/errors.hpp"

namespace xcf {

// The five nontrivial locally homogeneous 3-geometries, plus a flat abelian
// structure kept as a zero-curvature sanity case. Each carries a fixed Milnor
// frame with [f_i,f_j] = c_k f_k (circularly); the metric stays diagonal in
// that frame along the flow.
enum class Geometry { Heisenberg, SU2, E11, E2, SL2R, Abelian };

// Bracket constants (c1,c2,c3) of the Milnor frame.
std::array<int, 3> bracket_constants(Geometry g);

std::string_view geometry_name(Geometry g);
Geometry geometry_from_name(std::string_view name); // throws InvalidInput

// Diagonal metric g = A f^1⊗f^1 + B f^2⊗f^2 + C f^3⊗f^3, all coefficients > 0.
struct MilnorMetric {
    double A = 1.0, B = 1.0, C = 1.0;

    bool positive() const { return A > 0.0 && B > 0.0 && C > 0.0; }
    double max_component() const { return A > B ? (A > C ? A : C) : (B > C ? B : C); }
    double min_component() const { return A < B ? (A < C ? A : C) : (B < C ? B : C); }
    double operator[](int i) const { return i == 0 ? A : (i == 1 ? B : C); }
};

// Principal sectional curvatures, k_i = K(f_j ∧ f_k) circularly.
struct SectionalCurvatures {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0;
    double operator[](int i) const { return i == 0 ? k1 : (i == 1 ? k2 : k3); }
};

// Cross curvature tensor in the Milnor co-frame: h_i = g_ii k_j k_l.
struct CrossCurvature {
    double h1 = 0.0, h2 = 0.0, h3 = 0.0;
    double operator[](int i) const { return i == 0 ? h1 : (i == 1 ? h2 : h3); }
};

// Per-geometry closed-form curvatures. Throws InvalidInput if the metric is
// not strictly positive.
SectionalCurvatures sectional_curvatures(Geometry g, const MilnorMetric& m);

// R = 2(k1+k2+k3).
double scalar_curvature(Geometry g, const MilnorMetric& m);

// h_i = m_i k_j k_l. Well defined even when some k_i vanish.
CrossCurvature cross_curvature(Geometry g, const MilnorMetric& m);

// Independent route through the Einstein tensor: build E = Rc - (R/2) g in the
// Milnor frame, raise indices, invert, scale by det(P)/det(g^{-1}) and read
// the diagonal back off. Throws SingularTensor when some k_i = 0.
CrossCurvature cross_curvature_via_einstein(const MilnorMetric& m,
                                            const SectionalCurvatures& k);

} // namespace xcf

#endif
