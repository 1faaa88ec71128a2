#ifndef XCF_ASYMPTOTICS_HPP
#define XCF_ASYMPTOTICS_HPP

#include <span>
#include <vector>

#include "xcf/integrator.hpp"

namespace xcf {

struct PowerLawFit {
    double exponent = 0.0;    // p in x ~ eta (T-t)^p
    double coefficient = 0.0; // eta > 0
    double residual = 0.0;    // RMS residual of the log-log line fit
    double window_lo = 0.0, window_hi = 0.0; // (T-t) window actually used
    int n_samples = 0;
};

// Least-squares line fit of ln x against ln(T-t) over the window
// (T-t) in [win_lo_frac, win_hi_frac]*T. Requires >= 20 samples in the
// window (WindowError otherwise) and T beyond every sample time.
PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> x,
                          double T, double win_lo_frac = 1e-8,
                          double win_hi_frac = 1e-3);

PowerLawFit fit_power_law_component(const Trajectory& traj, int component, double T,
                                    double win_lo_frac = 1e-8,
                                    double win_hi_frac = 1e-3);

enum class LimitFunctional { A3B, A3C, AB3, CB3, BOverC, COverA, CaseThreeRatio };
std::string_view limit_functional_name(LimitFunctional f);

struct LimitEstimate {
    LimitFunctional name = LimitFunctional::A3B;
    double value = 0.0;
    bool converged = false;
};

// Evaluates each functional on the trajectory tail and extrapolates to t=T by
// a least-squares fit linear in sqrt(T-t). The convergence flag is set when
// the tail variation is at most 1%; a divergent functional comes back
// unflagged with the last tail sample as value. CaseThreeRatio is
// 2kA/(B-C)^2 with k the extrapolated common limit of B and C.
std::vector<LimitEstimate> estimate_limits(const Trajectory& traj, double T,
                                           std::span<const LimitFunctional> names);
LimitEstimate estimate_limit(const Trajectory& traj, double T, LimitFunctional name);

// Limiting co-metric Q = q1 f1⊗f1 + q2 f2⊗f2 + q3 f3⊗f3 of the normalized
// metric (N0/N(t)) g(t); q_i = 0 marks the direction that blows up.
struct SubRiemannianLimit {
    double q1 = 0.0, q2 = 0.0, q3 = 0.0;
    int diverging_component = -1; // index with q=0, -1 if none detected
    int normalizer = 1;           // component used as N: 0=A, 1=B, 2=C
    double operator[](int i) const { return i == 0 ? q1 : (i == 1 ? q2 : q3); }
};

// Normalizer is B for Heisenberg, SU2, E11 and C for E2, SL2R. Requires a
// blow-up trajectory (NotApplicable otherwise, e.g. for the fixed families).
SubRiemannianLimit subriemannian_limit(Geometry g, const Trajectory& traj, double T);

// Least-squares fit of x(t) = L + c t^p over the samples with t >= t_min;
// returns L. Used for t -> infinity tails such as the Berger limit of C
// (p = -1/3).
double extrapolate_power_tail(std::span<const double> t, std::span<const double> x,
                              double p, double t_min);

// Least-squares fit of x = L + c sqrt(T-t) over samples with (T-t)/T in
// [lo_frac, hi_frac]; returns the extrapolated value L at t = T.
double extrapolate_sqrt_tail(std::span<const double> t, std::span<const double> x,
                             double T, double lo_frac, double hi_frac);

} // namespace xcf

#endif
