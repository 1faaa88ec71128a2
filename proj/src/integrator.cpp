#include "xcf/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace xcf {

void IntegratorControls::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw InvalidInput("tolerances must be strictly positive");
    if (!(max_component_factor > 1.0))
        throw InvalidInput("max_component_factor must exceed 1");
    if (!(min_step_factor > 0.0))
        throw InvalidInput("min_step_factor must be strictly positive");
    if (max_steps < 1) throw InvalidInput("max_steps must be at least 1");
}

std::string_view termination_name(Termination t) {
    switch (t) {
        case Termination::TimeReached:     return "time_reached";
        case Termination::BlowUp:          return "blow_up";
        case Termination::StepUnderflow:   return "step_underflow";
        case Termination::BudgetExhausted: return "budget_exhausted";
    }
    return "unknown";
}

namespace {

using Vec3 = std::array<double, 3>;

// Dormand-Prince 5(4) tableau (FSAL).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

bool finite3(const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

struct Problem {
    Geometry g = Geometry::Heisenberg;
    FlowSign s = FlowSign::Positive;
    VariableMode mode = VariableMode::Logarithmic;
    const RhsFn* custom = nullptr; // forces linear variables

    Vec3 to_state(const MilnorMetric& m) const {
        if (mode == VariableMode::Logarithmic)
            return {std::log(m.A), std::log(m.B), std::log(m.C)};
        return {m.A, m.B, m.C};
    }
    MilnorMetric to_metric(const Vec3& y) const {
        if (mode == VariableMode::Logarithmic)
            return {std::exp(y[0]), std::exp(y[1]), std::exp(y[2])};
        return {y[0], y[1], y[2]};
    }
    bool admissible(const Vec3& y) const {
        if (!finite3(y)) return false;
        if (mode == VariableMode::Linear)
            return y[0] > 0.0 && y[1] > 0.0 && y[2] > 0.0;
        return true;
    }
    Vec3 eval(const Vec3& y) const {
        if (custom) {
            const Rates r = (*custom)(MilnorMetric{y[0], y[1], y[2]});
            return {r.dA, r.dB, r.dC};
        }
        if (mode == VariableMode::Logarithmic) return log_rhs(g, s, y);
        const Rates r = xcf_rhs(g, s, MilnorMetric{y[0], y[1], y[2]});
        return {r.dA, r.dB, r.dC};
    }
    Rates linear_rates(const Vec3& y, const Vec3& f) const {
        if (mode == VariableMode::Logarithmic) {
            const MilnorMetric m = to_metric(y);
            return {f[0] * m.A, f[1] * m.B, f[2] * m.C};
        }
        return {f[0], f[1], f[2]};
    }
};

double error_norm(const Vec3& est, const Vec3& y, const Vec3& ynew,
                  double rel_tol, double abs_tol) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double sk = abs_tol + rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
        const double q = est[i] / sk;
        sum += q * q;
    }
    return std::sqrt(sum / 3.0);
}

double initial_step(const Problem& p, const Vec3& y0, const Vec3& f0, double t_end,
                    double rel_tol, double abs_tol) {
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double sk = abs_tol + rel_tol * std::fabs(y0[i]);
        d0 += (y0[i] / sk) * (y0[i] / sk);
        d1 += (f0[i] / sk) * (f0[i] / sk);
    }
    d0 = std::sqrt(d0 / 3.0);
    d1 = std::sqrt(d1 / 3.0);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    if (std::isfinite(t_end)) h0 = std::min(h0, t_end);
    if (!(h0 > 0.0)) h0 = 1e-6;

    Vec3 y1, f1{};
    for (int tries = 0; tries < 20; ++tries) {
        for (int i = 0; i < 3; ++i) y1[i] = y0[i] + h0 * f0[i];
        if (p.admissible(y1)) {
            f1 = p.eval(y1);
            if (finite3(f1)) break;
        }
        h0 *= 0.1;
    }
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double sk = abs_tol + rel_tol * std::fabs(y0[i]);
        const double q = (f1[i] - f0[i]) / sk;
        d2 += q * q;
    }
    d2 = std::sqrt(d2 / 3.0) / h0;
    const double der = std::max(d1, d2);
    const double h1 = der <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                   : std::pow(0.01 / der, 0.2);
    double h = std::min(100.0 * h0, h1);
    if (std::isfinite(t_end)) h = std::min(h, t_end);
    return h;
}

constexpr std::size_t kSampleSoftCap = std::size_t{1} << 19;

struct Recorder {
    std::vector<Sample>& out;
    std::size_t stride = 1;
    std::size_t index = 0;

    void push(const Sample& s) {
        if (index % stride == 0) {
            out.push_back(s);
            if (out.size() >= kSampleSoftCap) thin();
        }
        ++index;
    }
    void push_final(const Sample& s) {
        if (out.empty() || out.back().t < s.t) out.push_back(s);
    }
    void thin() {
        std::size_t w = 0;
        for (std::size_t r = 0; r < out.size(); r += 2) out[w++] = out[r];
        out.resize(w);
        stride *= 2;
    }
};

bool diverged(const MilnorMetric& last, const MilnorMetric& init) {
    const double grow = std::max({last.A / init.A, last.B / init.B, last.C / init.C});
    const double shrink = std::min({last.A / init.A, last.B / init.B, last.C / init.C});
    const double spread0 = init.max_component() / init.min_component();
    const double spread1 = last.max_component() / last.min_component();
    return grow >= 10.0 || shrink <= 0.1 || spread1 >= 10.0 * spread0;
}

Trajectory run_core(const Problem& p, const MilnorMetric& init, double t_end,
                    const IntegratorControls& c, const StepObserver* observer) {
    c.validate();
    if (!init.positive() || !std::isfinite(init.A + init.B + init.C))
        throw InvalidInput("initial metric must be finite and strictly positive");
    if (std::isnan(t_end) || t_end < 0.0)
        throw InvalidInput("t_end must be nonnegative");

    Trajectory traj;
    traj.geometry = p.g;
    traj.sign = p.s;

    double t = 0.0;
    Vec3 y = p.to_state(init);
    Vec3 f = p.eval(y);
    if (!finite3(f))
        throw NumericalFailure("vector field non-finite at the initial state",
                               Sample{0.0, init, {}});

    Recorder rec{traj.samples};
    Sample cur{0.0, init, p.linear_rates(y, f)};
    rec.push(cur);
    if (t_end == 0.0) {
        traj.termination = Termination::TimeReached;
        return traj;
    }

    const double cap = c.max_component_factor * init.max_component();
    const double safe = 0.9, fac_shrink = 0.2, fac_grow = 10.0;
    const double expo1 = 0.2 - 0.04 * 0.75, beta = 0.04;
    double facold = 1e-4;
    double h = initial_step(p, y, f, t_end, c.rel_tol, c.abs_tol);
    const double h_first = h;
    bool rejected = false;

    Vec3 k2v, k3v, k4v, k5v, k6v, k7v, ytmp, ynew;
    long steps = 0;

    auto hmin_at = [&](double tt) {
        return c.min_step_factor * std::max(std::fabs(tt), h_first);
    };

    while (true) {
        if (steps >= c.max_steps) {
            traj.termination = Termination::BudgetExhausted;
            break;
        }
        if (!std::isfinite(t_end) && t >= 1e290) {
            traj.termination = Termination::BudgetExhausted;
            break;
        }
        ++steps;

        bool last = false;
        if (std::isfinite(t_end) && t + 1.01 * h >= t_end) {
            h = t_end - t;
            last = true;
        }
        if (h > 1e280) h = 1e280;

        // Seven-stage DOPRI5 step; k1 is the FSAL derivative in f.
        for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + h * a21 * f[i];
        k2v = p.admissible(ytmp) ? p.eval(ytmp) : Vec3{NAN, NAN, NAN};
        for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + h * (a31 * f[i] + a32 * k2v[i]);
        k3v = p.admissible(ytmp) ? p.eval(ytmp) : Vec3{NAN, NAN, NAN};
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a41 * f[i] + a42 * k2v[i] + a43 * k3v[i]);
        k4v = p.admissible(ytmp) ? p.eval(ytmp) : Vec3{NAN, NAN, NAN};
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a51 * f[i] + a52 * k2v[i] + a53 * k3v[i] + a54 * k4v[i]);
        k5v = p.admissible(ytmp) ? p.eval(ytmp) : Vec3{NAN, NAN, NAN};
        for (int i = 0; i < 3; ++i)
            ytmp[i] = y[i] + h * (a61 * f[i] + a62 * k2v[i] + a63 * k3v[i] +
                                  a64 * k4v[i] + a65 * k5v[i]);
        k6v = p.admissible(ytmp) ? p.eval(ytmp) : Vec3{NAN, NAN, NAN};
        for (int i = 0; i < 3; ++i)
            ynew[i] = y[i] + h * (b1 * f[i] + b3 * k3v[i] + b4 * k4v[i] +
                                  b5 * k5v[i] + b6 * k6v[i]);
        k7v = p.admissible(ynew) ? p.eval(ynew) : Vec3{NAN, NAN, NAN};

        double err;
        if (!finite3(ynew) || !finite3(k7v) || !p.admissible(ynew)) {
            err = INFINITY;
        } else {
            Vec3 est;
            for (int i = 0; i < 3; ++i)
                est[i] = h * (e1 * f[i] + e3 * k3v[i] + e4 * k4v[i] + e5 * k5v[i] +
                              e6 * k6v[i] + e7 * k7v[i]);
            err = error_norm(est, y, ynew, c.rel_tol, c.abs_tol);
        }

        if (err <= 1.0) {
            double fac = std::pow(err, expo1) / std::pow(facold, beta) / safe;
            fac = std::max(1.0 / fac_grow, std::min(1.0 / fac_shrink, fac));
            double hnew = h / fac;
            facold = std::max(err, 1e-4);
            if (rejected) hnew = std::min(hnew, h);
            rejected = false;

            t = last ? t_end : t + h;
            y = ynew;
            f = k7v;
            traj.last_step = h;

            const Sample prev = cur;
            cur = Sample{t, p.to_metric(y), p.linear_rates(y, f)};
            rec.push(cur);

            if (observer && !(*observer)(prev, cur)) {
                traj.termination = Termination::TimeReached;
                break;
            }
            if (cur.m.max_component() >= cap) {
                // A finite-time singularity has a tiny e-folding time compared
                // to the elapsed time; steady power-law growth does not.
                const double lrate = std::max({std::fabs(cur.dm.dA / cur.m.A),
                                               std::fabs(cur.dm.dB / cur.m.B),
                                               std::fabs(cur.dm.dC / cur.m.C)});
                traj.termination = lrate * std::fabs(t) > 50.0
                                       ? Termination::BlowUp
                                       : Termination::BudgetExhausted;
                break;
            }
            if (last) {
                traj.termination = Termination::TimeReached;
                break;
            }
            h = hnew;
        } else {
            rejected = true;
            const double fac11 = std::isfinite(err) ? std::pow(err, expo1) : 10.0;
            double hnew = h / std::min(1.0 / fac_shrink, fac11 / safe);
            if (hnew < hmin_at(t)) {
                traj.last_step = h;
                traj.termination = diverged(cur.m, init) ? Termination::BlowUp
                                                         : Termination::StepUnderflow;
                break;
            }
            h = hnew;
        }
    }

    rec.push_final(cur);
    traj.steps_taken = steps;
    return traj;
}

} // namespace

MilnorMetric hermite_interpolate(const Sample& a, const Sample& b, double t) {
    const double h = b.t - a.t;
    if (h <= 0.0) return a.m;
    const double s = (t - a.t) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    const double ua[3] = {std::log(a.m.A), std::log(a.m.B), std::log(a.m.C)};
    const double ub[3] = {std::log(b.m.A), std::log(b.m.B), std::log(b.m.C)};
    const double da[3] = {a.dm.dA / a.m.A, a.dm.dB / a.m.B, a.dm.dC / a.m.C};
    const double db[3] = {b.dm.dA / b.m.A, b.dm.dB / b.m.B, b.dm.dC / b.m.C};
    double u[3];
    for (int i = 0; i < 3; ++i)
        u[i] = h00 * ua[i] + h10 * h * da[i] + h01 * ub[i] + h11 * h * db[i];
    return {std::exp(u[0]), std::exp(u[1]), std::exp(u[2])};
}

MilnorMetric Trajectory::at(double t) const {
    if (samples.empty()) throw InvalidInput("empty trajectory");
    const double t0 = samples.front().t, t1 = samples.back().t;
    const double slack = 1e-12 * std::max(1.0, std::fabs(t1));
    if (t < t0 - slack || t > t1 + slack)
        throw InvalidInput("time outside the trajectory span");
    t = std::clamp(t, t0, t1);
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const Sample& s, double tt) { return s.t < tt; });
    if (it == samples.begin()) return it->m;
    if (it == samples.end()) return samples.back().m;
    return hermite_interpolate(*(it - 1), *it, t);
}

Trajectory integrate(Geometry g, FlowSign s, const MilnorMetric& init, double t_end,
                     const IntegratorControls& controls) {
    Problem p{g, s, controls.mode, nullptr};
    return run_core(p, init, t_end, controls, nullptr);
}

Trajectory integrate_custom(const RhsFn& rhs, const MilnorMetric& init, double t_end,
                            const IntegratorControls& controls) {
    Problem p;
    p.mode = VariableMode::Linear;
    p.custom = &rhs;
    return run_core(p, init, t_end, controls, nullptr);
}

Trajectory integrate_observed(Geometry g, FlowSign s, const MilnorMetric& init,
                              double t_end, const IntegratorControls& controls,
                              const StepObserver& on_accept) {
    Problem p{g, s, controls.mode, nullptr};
    return run_core(p, init, t_end, controls, &on_accept);
}

namespace {

// Refine a sign change of ev.fn inside [a,b] by bisection on the dense output.
double refine_crossing(const EventSpec& ev, const Sample& sa, const Sample& sb,
                       double ta, double fa, double tb, double fb) {
    if (fa == 0.0) return ta;
    if (fb == 0.0) return tb;
    for (int i = 0; i < 80 && tb - ta > 0.0; ++i) {
        const double tm = 0.5 * (ta + tb);
        if (tm <= ta || tm >= tb) break;
        const double fm = ev.fn(tm, hermite_interpolate(sa, sb, tm));
        if (fm == 0.0) return tm;
        if ((fa < 0.0) != (fm < 0.0)) {
            tb = tm;
            fb = fm;
        } else {
            ta = tm;
            fa = fm;
        }
    }
    return 0.5 * (ta + tb);
}

bool direction_matches(EventSpec::Direction d, double before, double after) {
    if (d == EventSpec::Direction::Any) return true;
    if (d == EventSpec::Direction::Rising) return before < after;
    return before > after;
}

} // namespace

std::vector<EventHit> detect_events(Geometry g, FlowSign s, const MilnorMetric& init,
                                    const std::vector<EventSpec>& events,
                                    const IntegratorControls& controls, double t_end) {
    if (events.empty()) throw InvalidInput("event list must be nonempty");

    std::vector<EventHit> hits;
    std::vector<double> prev_vals(events.size());
    std::vector<bool> boundary_zero(events.size(), false);
    for (std::size_t i = 0; i < events.size(); ++i) {
        prev_vals[i] = events[i].fn(0.0, init);
        boundary_zero[i] = prev_vals[i] == 0.0;
    }

    StepObserver obs = [&](const Sample& prev, const Sample& cur) {
        std::vector<EventHit> step_hits;
        const double tm = 0.5 * (prev.t + cur.t);
        const MilnorMetric mm = hermite_interpolate(prev, cur, tm);
        for (std::size_t i = 0; i < events.size(); ++i) {
            const EventSpec& ev = events[i];
            const double fa = prev_vals[i];
            const double fmid = ev.fn(tm, mm);
            const double fb = ev.fn(cur.t, cur.m);

            if (boundary_zero[i]) {
                // Exactly zero at t=0: report at the boundary when the motion
                // matches the filter.
                boundary_zero[i] = false;
                if (fb != 0.0 && direction_matches(ev.direction, 0.0, fb))
                    step_hits.push_back({ev.name, prev.t, prev.m});
            }
            const double pieces[3] = {fa, fmid, fb};
            const double times[3] = {prev.t, tm, cur.t};
            for (int seg = 0; seg < 2; ++seg) {
                const double fl = pieces[seg], fr = pieces[seg + 1];
                if (fl == 0.0 || !((fl < 0.0) != (fr < 0.0))) continue;
                if (!direction_matches(ev.direction, fl, fr)) continue;
                const double tstar = refine_crossing(ev, prev, cur, times[seg], fl,
                                                     times[seg + 1], fr);
                step_hits.push_back({ev.name, tstar, hermite_interpolate(prev, cur, tstar)});
            }
            prev_vals[i] = fb;
        }
        std::sort(step_hits.begin(), step_hits.end(),
                  [](const EventHit& a, const EventHit& b) { return a.t < b.t; });
        hits.insert(hits.end(), step_hits.begin(), step_hits.end());
        return true;
    };

    integrate_observed(g, s, init, t_end, controls, obs);
    return hits;
}

namespace {

struct LineFit {
    double slope = 0.0, intercept = 0.0, sse = 0.0, rms = 0.0;
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
    for (int i = 0; i < f.n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        f.sse += r * r;
    }
    f.rms = std::sqrt(f.sse / f.n);
    return f;
}

// Profiled sum of squares of the log-log line fit at trial singular time T,
// over the last `decades` of (T-t).
LineFit profile_fit(std::span<const double> t, std::span<const double> x, double T,
                    double decades) {
    const double d_last = T - t.back();
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = T - t[i];
        if (d <= 0.0) continue;
        if (d > d_last * std::pow(10.0, decades)) continue;
        lx.push_back(std::log(d));
        ly.push_back(std::log(x[i]));
    }
    return fit_line(lx, ly);
}

} // namespace

BlowUpEstimate fit_singular_time(std::span<const double> t, std::span<const double> x,
                                 double seed_step, double decades) {
    if (t.size() != x.size() || t.size() < 30)
        throw NotApplicable("too few samples near the singular time");
    for (double v : x)
        if (!(v > 0.0)) throw InvalidInput("series values must be positive");

    const double t_last = t.back();
    const double h_seed = std::max(seed_step, 1e-300);
    // T = t_last + e^sigma; golden-section on the profiled SSE.
    double lo = std::log(h_seed * 1e-3), hi = std::log(h_seed * 1e6);
    auto sse = [&](double sigma) {
        const LineFit f = profile_fit(t, x, t_last + std::exp(sigma), decades);
        return f.n >= 20 ? f.sse / f.n : 1e300;
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = sse(x1), f2 = sse(x2);
    for (int i = 0; i < 180; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = sse(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = sse(x2);
        }
    }

    BlowUpEstimate est;
    est.T = t_last + std::exp(0.5 * (lo + hi));
    LineFit f = profile_fit(t, x, est.T, decades);
    if (f.n < 20) f = profile_fit(t, x, est.T, decades + 2.0);
    est.exponent = f.slope;
    est.coefficient = std::exp(f.intercept);
    est.residual = f.rms;
    return est;
}

BlowUpEstimate estimate_blowup(const Trajectory& traj) {
    if (traj.termination != Termination::BlowUp)
        throw NotApplicable("no blow-up detected");

    const MilnorMetric first = traj.front().m;
    const MilnorMetric last = traj.back().m;
    int comp = 0;
    double best = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double change = std::fabs(std::log(last[i] / first[i]));
        if (change > best) {
            best = change;
            comp = i;
        }
    }

    std::vector<double> ts, xs;
    ts.reserve(traj.samples.size());
    for (const Sample& s : traj.samples) {
        ts.push_back(s.t);
        xs.push_back(s.m[comp]);
    }
    BlowUpEstimate est = fit_singular_time(ts, xs, traj.last_step, 2.0);
    est.component = comp;
    return est;
}

BlowUpEstimate estimate_blowup(Geometry g, FlowSign s, const MilnorMetric& init,
                               const IntegratorControls& controls) {
    return estimate_blowup(integrate(g, s, init, kNoTimeLimit, controls));
}

} // namespace xcf
