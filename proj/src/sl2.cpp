#include "xcf/sl2.hpp"

#include <algorithm>
#include <cmath>

#include "xcf/asymptotics.hpp"

namespace xcf {

std::string_view regime_name(Regime r) {
    switch (r) {
        case Regime::Q1:           return "Q1";
        case Regime::Q2:           return "Q2";
        case Regime::Undetermined: return "undetermined";
    }
    return "unknown";
}

std::string_view trigger_name(RegimeTrigger t) {
    switch (t) {
        case RegimeTrigger::None:        return "none";
        case RegimeTrigger::AGeqBMinusC: return "A>=B-C";
        case RegimeTrigger::F2Positive:  return "F2>0";
        case RegimeTrigger::F1Positive:  return "F1>0";
    }
    return "unknown";
}

namespace {

MilnorMetric normalized(const MilnorMetric& m, bool& swapped) {
    swapped = m.B < m.C;
    return swapped ? MilnorMetric{m.A, m.C, m.B} : m;
}

// Trigger functions; the region is entered when the value is >= 0 (for the
// F polynomials, > 0, handled at the call sites).
double trig_a(const MilnorMetric& m) { return m.A - (m.B - m.C); }
double trig_f2(const MilnorMetric& m) { return aux_quantities(Geometry::SL2R, m).q2; }
double trig_f1(const MilnorMetric& m) { return aux_quantities(Geometry::SL2R, m).q1; }

double refine_entry(double (*f)(const MilnorMetric&), const Sample& a, const Sample& b) {
    double ta = a.t, tb = b.t;
    double fa = f(a.m);
    if (fa >= 0.0) return ta;
    for (int i = 0; i < 80 && tb - ta > 0.0; ++i) {
        const double tm = 0.5 * (ta + tb);
        if (tm <= ta || tm >= tb) break;
        const double fm = f(hermite_interpolate(a, b, tm));
        if (fm < 0.0)
            ta = tm;
        else
            tb = tm;
    }
    return tb;
}

} // namespace

RegionFlags instantaneous_region(const MilnorMetric& m) {
    if (!m.positive()) throw InvalidInput("metric components must be strictly positive");
    RegionFlags flags;
    const MilnorMetric n = normalized(m, flags.swapped);
    const AuxQuantities F = aux_quantities(Geometry::SL2R, n);
    flags.f2_positive = F.q2 > 0.0;
    flags.f1_positive = F.q1 > 0.0;
    flags.a_geq_one_minus_c = n.A >= n.B - n.C;
    return flags;
}

RegimeLabel classify(const MilnorMetric& init, const IntegratorControls& controls) {
    bool swapped = false;
    const MilnorMetric m0 = normalized(init, swapped);

    RegimeLabel out;
    const RegionFlags at0 = instantaneous_region(m0);
    if (at0.a_geq_one_minus_c) return {Regime::Q1, 0.0, RegimeTrigger::AGeqBMinusC, Termination::TimeReached};
    if (at0.f2_positive) return {Regime::Q1, 0.0, RegimeTrigger::F2Positive, Termination::TimeReached};
    if (at0.f1_positive) return {Regime::Q2, 0.0, RegimeTrigger::F1Positive, Termination::TimeReached};

    bool found = false;
    StepObserver obs = [&](const Sample& prev, const Sample& cur) {
        if (trig_a(cur.m) >= 0.0) {
            out = {Regime::Q1, refine_entry(&trig_a, prev, cur), RegimeTrigger::AGeqBMinusC,
                   Termination::TimeReached};
        } else if (trig_f2(cur.m) > 0.0) {
            out = {Regime::Q1, refine_entry(&trig_f2, prev, cur), RegimeTrigger::F2Positive,
                   Termination::TimeReached};
        } else if (trig_f1(cur.m) > 0.0) {
            out = {Regime::Q2, refine_entry(&trig_f1, prev, cur), RegimeTrigger::F1Positive,
                   Termination::TimeReached};
        } else {
            return true;
        }
        found = true;
        return false;
    };

    const Trajectory traj =
        integrate_observed(Geometry::SL2R, FlowSign::Positive, m0, kNoTimeLimit, controls, obs);
    if (found) {
        out.termination = traj.termination;
        return out;
    }
    return {Regime::Undetermined, traj.back().t, RegimeTrigger::None, traj.termination};
}

namespace {

Regime classify_fiber(double a, double b, double c, const IntegratorControls& controls) {
    return classify(MilnorMetric{a * b, b, c * b}, controls).label;
}

} // namespace

SeparatrixResult find_separatrix(double b, double c, double a_lo, double a_hi,
                                 double tol, const IntegratorControls& controls) {
    if (!(b > 0.0) || !(c > 0.0) || c > 1.0)
        throw InvalidInput("fiber requires b > 0 and 0 < c <= 1");
    if (!(a_lo > 0.0) || !(a_hi > a_lo)) throw InvalidInput("bracket must satisfy 0 < a_lo < a_hi");
    if (!(tol > 0.0)) throw InvalidInput("tol must be positive");

    const Regime lab_lo = classify_fiber(a_lo, b, c, controls);
    const Regime lab_hi = classify_fiber(a_hi, b, c, controls);
    if (lab_lo == Regime::Undetermined || lab_hi == Regime::Undetermined)
        throw InconclusiveBracket("endpoint classification undetermined; enlarge the budget");
    if (lab_lo != Regime::Q2 || lab_hi != Regime::Q1)
        throw BracketError("bracket endpoints must classify as Q2 below and Q1 above");

    SeparatrixResult res;
    const double lo0 = a_lo, hi0 = a_hi;
    while (a_hi - a_lo > tol) {
        bool resolved = false;
        // The Undetermined band around the surface is far narrower than any
        // practical tol; if the midpoint lands in it, probe two off-center
        // splits before giving up.
        for (double frac : {0.5, 0.4, 0.6}) {
            const double a_mid = a_lo + frac * (a_hi - a_lo);
            const Regime lab = classify_fiber(a_mid, b, c, controls);
            if (lab == Regime::Undetermined) continue;
            if (lab == Regime::Q2)
                a_lo = a_mid;
            else
                a_hi = a_mid;
            resolved = true;
            break;
        }
        ++res.iterations;
        if (!resolved) {
            res.undetermined_core = true;
            break;
        }
    }

    res.a_star = 0.5 * (a_lo + a_hi);
    res.a_lo = a_lo;
    res.a_hi = a_hi;

    bool seen_q1 = false;
    for (int i = 0; i < 4; ++i) {
        const double a = lo0 + (hi0 - lo0) * (i + 1) / 5.0;
        res.spot_checks[i] = classify_fiber(a, b, c, controls);
        if (res.spot_checks[i] == Regime::Q1) seen_q1 = true;
        if (res.spot_checks[i] == Regime::Q2 && seen_q1) res.monotone_ok = false;
    }
    return res;
}

CaseThreeSignature case_three_signature(const MilnorMetric& init,
                                        const IntegratorControls& controls) {
    bool swapped = false;
    const MilnorMetric m0 = normalized(init, swapped);
    const RegionFlags at0 = instantaneous_region(m0);
    if (at0.a_geq_one_minus_c || at0.f2_positive || at0.f1_positive)
        throw NotApplicable("initial data is already inside an absorbing region");

    StepObserver stop_on_exit = [&](const Sample&, const Sample& cur) {
        return trig_a(cur.m) < 0.0 && trig_f2(cur.m) <= 0.0 && trig_f1(cur.m) <= 0.0;
    };
    const Trajectory traj = integrate_observed(Geometry::SL2R, FlowSign::Positive, m0,
                                               kNoTimeLimit, controls, stop_on_exit);

    // Keep the in-between band portion only (the final sample may have left).
    std::vector<double> ts, as, bs, cs;
    for (const Sample& s : traj.samples) {
        if (!(trig_a(s.m) < 0.0 && trig_f2(s.m) <= 0.0 && trig_f1(s.m) <= 0.0)) break;
        ts.push_back(s.t);
        as.push_back(s.m.A);
        bs.push_back(s.m.B);
        cs.push_back(s.m.C);
    }
    if (ts.size() < 50)
        throw NotApplicable("trajectory does not dwell in the in-between band");

    CaseThreeSignature sig;
    const double seed = ts.size() >= 2 ? ts.back() - ts[ts.size() - 2] : traj.last_step;
    const BlowUpEstimate fit = fit_singular_time(ts, as, seed, 2.0);
    sig.T = fit.T;
    sig.exponent = fit.exponent;

    const double kB = extrapolate_sqrt_tail(ts, bs, sig.T, 1e-8, 1e-2);
    const double kC = extrapolate_sqrt_tail(ts, cs, sig.T, 1e-8, 1e-2);
    sig.k = 0.5 * (kB + kC);

    // Scan the band for the longest run where the ratio sits in [0.8, 1.2].
    std::vector<double> ratio(ts.size()), coeff(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double d = bs[i] - cs[i];
        const double rem = sig.T - ts[i];
        ratio[i] = 2.0 * sig.k * as[i] / (d * d);
        coeff[i] = rem > 0.0 ? d / std::sqrt(rem) : 0.0;
    }
    std::size_t best_lo = 0, best_len = 0, run_lo = 0, run_len = 0;
    for (std::size_t i = 0; i < ratio.size(); ++i) {
        if (ratio[i] >= 0.8 && ratio[i] <= 1.2 && sig.T > ts[i]) {
            if (run_len == 0) run_lo = i;
            ++run_len;
            if (run_len > best_len) {
                best_len = run_len;
                best_lo = run_lo;
            }
        } else {
            run_len = 0;
        }
    }
    sig.window_samples = static_cast<int>(ts.size());
    sig.band_samples = static_cast<int>(best_len);
    if (best_len > 0) {
        std::vector<double> r(ratio.begin() + best_lo, ratio.begin() + best_lo + best_len);
        std::vector<double> q(coeff.begin() + best_lo, coeff.begin() + best_lo + best_len);
        std::nth_element(r.begin(), r.begin() + r.size() / 2, r.end());
        std::nth_element(q.begin(), q.begin() + q.size() / 2, q.end());
        sig.ratio_median = r[r.size() / 2];
        sig.coeff_median = q[q.size() / 2];
    }
    return sig;
}

} // namespace xcf
