#ifndef XCF_SL2_HPP
#define XCF_SL2_HPP

#include <array>

#include "xcf/integrator.hpp"

namespace xcf {

// Membership flags for the SL(2,R) absorbing regions, evaluated directly from
// the F polynomials (not the radical bounds) after normalizing to B >= C.
struct RegionFlags {
    bool f2_positive = false;       // absorbing, leads to the Q1 fate
    bool f1_positive = false;       // absorbing, leads to the Q2 fate
    bool a_geq_one_minus_c = false; // A >= B - C, absorbing, leads to F2 > 0
    bool swapped = false;           // input had B < C and was swapped
};

RegionFlags instantaneous_region(const MilnorMetric& m);

enum class Regime { Q1, Q2, Undetermined };
std::string_view regime_name(Regime r);

enum class RegimeTrigger { None, AGeqBMinusC, F2Positive, F1Positive };
std::string_view trigger_name(RegimeTrigger t);

struct RegimeLabel {
    Regime label = Regime::Undetermined;
    double trigger_time = 0.0;
    RegimeTrigger trigger = RegimeTrigger::None;
    Termination termination = Termination::TimeReached; // how the run ended if untriggered
};

// Integrates the positive flow from init until one of the absorbing regions
// is entered (latched) or the run ends. Undetermined = blow-up or budget
// reached with no trigger; it is a label, not an error.
RegimeLabel classify(const MilnorMetric& init, const IntegratorControls& controls = {});

struct SeparatrixResult {
    double a_star = 0.0;
    double a_lo = 0.0, a_hi = 0.0; // final bracket
    int iterations = 0;
    bool undetermined_core = false; // bisection stalled on an Undetermined band
    // Labels of classify at the 4 interior spot-check points of the original
    // bracket, and whether they are consistent with monotonicity in a.
    std::array<Regime, 4> spot_checks{};
    bool monotone_ok = true;
};

// Bisection along the one-parameter family (a*b, b, c*b) for the surface
// separating Q2 (below) from Q1 (above). Monotonicity of the label in a is
// assumed inside the bracket and spot-checked, not proved.
SeparatrixResult find_separatrix(double b, double c, double a_lo, double a_hi,
                                 double tol, const IntegratorControls& controls = {});

// Diagnostics of the in-between dynamics shadowed by data near the
// separatrix: B and C squeeze onto a common value k, A decays linearly in
// (T-t) and 2kA/(B-C)^2 levels off at 1 with B-C ~ 8 sqrt(2) sqrt(T-t).
struct CaseThreeSignature {
    double T = 0.0;        // fitted singular time of the shadowed dynamics
    double exponent = 0.0; // fitted power of A in (T-t); 1 for the true surface
    double k = 0.0;        // extrapolated common limit of B and C
    int window_samples = 0;
    int band_samples = 0;       // longest run with the ratio inside [0.8, 1.2]
    double ratio_median = 0.0;  // median of 2kA/(B-C)^2 over that run
    double coeff_median = 0.0;  // median of (B-C)/sqrt(T-t) over that run
};

// Integrates from init until an absorbing region swallows the trajectory and
// analyzes the portion spent in the in-between band. Throws NotApplicable
// when the data never dwells there.
CaseThreeSignature case_three_signature(const MilnorMetric& init,
                                        const IntegratorControls& controls = {});

} // namespace xcf

#endif
