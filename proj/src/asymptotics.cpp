#include "xcf/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace xcf {

namespace {

struct LineFit {
    double slope = 0.0, intercept = 0.0, rms = 0.0;
    int n = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    f.n = static_cast<int>(x.size());
    if (f.n < 2) return f;
    double sx = 0, sy = 0;
    for (int i = 0; i < f.n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / f.n, my = sy / f.n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < f.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (int i = 0; i < f.n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    f.rms = std::sqrt(sse / f.n);
    return f;
}

} // namespace

PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> x,
                          double T, double win_lo_frac, double win_hi_frac) {
    if (t.size() != x.size() || t.empty())
        throw InvalidInput("series must be nonempty and of equal length");
    if (!(win_lo_frac > 0.0) || !(win_hi_frac > win_lo_frac))
        throw InvalidInput("window fractions must satisfy 0 < lo < hi");
    for (double ti : t)
        if (!(T > ti)) throw InvalidInput("T must exceed every sample time");

    const double lo = win_lo_frac * T, hi = win_hi_frac * T;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = T - t[i];
        if (d < lo || d > hi) continue;
        if (!(x[i] > 0.0)) throw InvalidInput("series values must be positive");
        lx.push_back(std::log(d));
        ly.push_back(std::log(x[i]));
    }
    if (lx.size() < 20)
        throw WindowError("fewer than 20 samples inside the fit window");

    const LineFit f = fit_line(lx, ly);
    PowerLawFit out;
    out.exponent = f.slope;
    out.coefficient = std::exp(f.intercept);
    out.residual = f.rms;
    out.window_lo = lo;
    out.window_hi = hi;
    out.n_samples = f.n;
    return out;
}

PowerLawFit fit_power_law_component(const Trajectory& traj, int component, double T,
                                    double win_lo_frac, double win_hi_frac) {
    if (component < 0 || component > 2) throw InvalidInput("component must be 0, 1 or 2");
    std::vector<double> t, x;
    t.reserve(traj.samples.size());
    x.reserve(traj.samples.size());
    for (const Sample& s : traj.samples) {
        t.push_back(s.t);
        x.push_back(s.m[component]);
    }
    return fit_power_law(t, x, T, win_lo_frac, win_hi_frac);
}

std::string_view limit_functional_name(LimitFunctional f) {
    switch (f) {
        case LimitFunctional::A3B:            return "A^3 B";
        case LimitFunctional::A3C:            return "A^3 C";
        case LimitFunctional::AB3:            return "A B^3";
        case LimitFunctional::CB3:            return "C B^3";
        case LimitFunctional::BOverC:         return "B/C";
        case LimitFunctional::COverA:         return "C/A";
        case LimitFunctional::CaseThreeRatio: return "2kA/(B-C)^2";
    }
    return "unknown";
}

namespace {

// Indices of the trajectory tail with (T - t) in [lo_frac, hi_frac]*T,
// widened outward when too sparse.
std::vector<std::size_t> tail_window(const Trajectory& traj, double T) {
    double lo = 1e-8 * T, hi = 1e-3 * T;
    std::vector<std::size_t> idx;
    for (int widen = 0; widen < 6; ++widen) {
        idx.clear();
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            const double d = T - traj.samples[i].t;
            if (d >= lo && d <= hi) idx.push_back(i);
        }
        if (idx.size() >= 20) return idx;
        hi *= 10.0;
        lo *= 0.1;
    }
    if (idx.size() >= 5) return idx;
    // Degenerate trajectory; take the last samples we have.
    idx.clear();
    const std::size_t n = traj.samples.size();
    for (std::size_t i = n >= 20 ? n - 20 : 0; i < n; ++i) idx.push_back(i);
    return idx;
}

// Least-squares extrapolation of f to t=T assuming f = L + c sqrt(T-t).
double richardson_sqrt(const Trajectory& traj, double T,
                       const std::vector<std::size_t>& idx,
                       const std::function<double(const MilnorMetric&)>& f) {
    std::vector<double> s, v;
    for (std::size_t i : idx) {
        const double d = T - traj.samples[i].t;
        if (d <= 0.0) continue;
        s.push_back(std::sqrt(d));
        v.push_back(f(traj.samples[i].m));
    }
    const LineFit lf = fit_line(s, v);
    return lf.intercept;
}

double eval_functional(LimitFunctional name, const MilnorMetric& m, double k) {
    switch (name) {
        case LimitFunctional::A3B:    return m.A * m.A * m.A * m.B;
        case LimitFunctional::A3C:    return m.A * m.A * m.A * m.C;
        case LimitFunctional::AB3:    return m.A * m.B * m.B * m.B;
        case LimitFunctional::CB3:    return m.C * m.B * m.B * m.B;
        case LimitFunctional::BOverC: return m.B / m.C;
        case LimitFunctional::COverA: return m.C / m.A;
        case LimitFunctional::CaseThreeRatio: {
            const double d = m.B - m.C;
            return 2.0 * k * m.A / (d * d);
        }
    }
    return 0.0;
}

} // namespace

LimitEstimate estimate_limit(const Trajectory& traj, double T, LimitFunctional name) {
    if (traj.termination != Termination::BlowUp)
        throw NotApplicable("limit functionals require a blow-up trajectory");
    const std::vector<std::size_t> idx = tail_window(traj, T);

    double k = 0.0;
    if (name == LimitFunctional::CaseThreeRatio) {
        const double kB = richardson_sqrt(traj, T, idx,
                                          [](const MilnorMetric& m) { return m.B; });
        const double kC = richardson_sqrt(traj, T, idx,
                                          [](const MilnorMetric& m) { return m.C; });
        k = 0.5 * (kB + kC);
    }

    std::vector<double> vals;
    vals.reserve(idx.size());
    for (std::size_t i : idx) vals.push_back(eval_functional(name, traj.samples[i].m, k));

    LimitEstimate est;
    est.name = name;
    bool finite = true;
    for (double v : vals) finite = finite && std::isfinite(v);
    if (!finite || vals.size() < 3) {
        est.value = vals.empty() ? 0.0 : vals.back();
        est.converged = false;
        return est;
    }

    const double L = richardson_sqrt(traj, T, idx, [&](const MilnorMetric& m) {
        return eval_functional(name, m, k);
    });
    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    const double variation = (*mx - *mn) / std::max(std::fabs(L), 1e-300);
    if (std::isfinite(L) && variation <= 0.01) {
        est.value = L;
        est.converged = true;
    } else {
        est.value = vals.back();
        est.converged = false;
    }
    return est;
}

std::vector<LimitEstimate> estimate_limits(const Trajectory& traj, double T,
                                           std::span<const LimitFunctional> names) {
    std::vector<LimitEstimate> out;
    out.reserve(names.size());
    for (LimitFunctional f : names) out.push_back(estimate_limit(traj, T, f));
    return out;
}

SubRiemannianLimit subriemannian_limit(Geometry g, const Trajectory& traj, double T) {
    if (traj.termination != Termination::BlowUp)
        throw NotApplicable("sub-Riemannian limits require a blow-up trajectory");

    int normalizer;
    switch (g) {
        case Geometry::Heisenberg:
        case Geometry::SU2:
        case Geometry::E11:
            normalizer = 1; // B
            break;
        case Geometry::E2:
        case Geometry::SL2R:
            normalizer = 2; // C
            break;
        default:
            throw NotApplicable("no sub-Riemannian limit for this geometry");
    }

    const MilnorMetric first = traj.front().m;
    const MilnorMetric last = traj.back().m;
    int diverging = 0;
    double best = -1.0;
    for (int i = 0; i < 3; ++i) {
        const double change = std::log(last[i] / first[i]);
        if (change > best) {
            best = change;
            diverging = i;
        }
    }
    if (best <= 0.0) diverging = -1; // nothing grew; report everything honestly

    const double N0 = first[normalizer];
    const std::vector<std::size_t> idx = tail_window(traj, T);

    SubRiemannianLimit out;
    out.normalizer = normalizer;
    out.diverging_component = diverging;
    double q[3];
    for (int i = 0; i < 3; ++i) {
        if (i == diverging) {
            q[i] = 0.0;
            continue;
        }
        q[i] = richardson_sqrt(traj, T, idx, [&](const MilnorMetric& m) {
            return m[normalizer] / (N0 * m[i]);
        });
    }
    out.q1 = q[0];
    out.q2 = q[1];
    out.q3 = q[2];
    return out;
}

double extrapolate_power_tail(std::span<const double> t, std::span<const double> x,
                              double p, double t_min) {
    if (t.size() != x.size()) throw InvalidInput("series must have equal length");
    std::vector<double> s, v;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_min || !(t[i] > 0.0)) continue;
        s.push_back(std::pow(t[i], p));
        v.push_back(x[i]);
    }
    if (s.size() < 5) throw WindowError("fewer than 5 samples beyond t_min");
    return fit_line(s, v).intercept;
}

double extrapolate_sqrt_tail(std::span<const double> t, std::span<const double> x,
                             double T, double lo_frac, double hi_frac) {
    if (t.size() != x.size()) throw InvalidInput("series must have equal length");
    std::vector<double> s, v;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = T - t[i];
        if (d < lo_frac * T || d > hi_frac * T) continue;
        s.push_back(std::sqrt(d));
        v.push_back(x[i]);
    }
    if (s.size() < 5) throw WindowError("fewer than 5 samples inside the tail window");
    return fit_line(s, v).intercept;
}

} // namespace xcf
