#ifndef XCF_INTEGRATOR_HPP
#define XCF_INTEGRATOR_HPP

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "xcf/flow.hpp"

namespace xcf {

enum class VariableMode { Linear, Logarithmic };

struct IntegratorControls {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // Blow-up is declared when some component exceeds this factor times the
    // largest initial component, or on step underflow with divergence.
    double max_component_factor = 1e9;
    // Step underflow threshold, as a fraction of the current time scale.
    double min_step_factor = 1e-14;
    long max_steps = 10000000;
    VariableMode mode = VariableMode::Logarithmic;

    void validate() const; // throws InvalidInput
};

enum class Termination { TimeReached, BlowUp, StepUnderflow, BudgetExhausted };
std::string_view termination_name(Termination t);

struct Sample {
    double t = 0.0;
    MilnorMetric m;
    Rates dm; // flow rates at (t, m), in the metric components
};

struct Trajectory {
    Geometry geometry = Geometry::Heisenberg;
    FlowSign sign = FlowSign::Positive;
    std::vector<Sample> samples; // accepted steps, strictly increasing t
    Termination termination = Termination::TimeReached;
    double last_step = 0.0; // last accepted step size
    long steps_taken = 0;   // attempted steps

    const Sample& front() const { return samples.front(); }
    const Sample& back() const { return samples.back(); }
    // Cubic Hermite interpolation in log-metric between stored samples.
    MilnorMetric at(double t) const;
};

/// Raised when the vector field itself evaluates non-finite; carries the last
/// state that was still good.
struct NumericalFailure : Error {
    NumericalFailure(const std::string& msg, Sample last)
        : Error(msg), last_good(last) {}
    Sample last_good;
};

constexpr double kNoTimeLimit = std::numeric_limits<double>::infinity();

// Adaptive embedded Dormand-Prince 5(4) with PI step control. Integrates the
// flow forward from t=0 to t_end (or to blow-up / budget / underflow).
Trajectory integrate(Geometry g, FlowSign s, const MilnorMetric& init,
                     double t_end, const IntegratorControls& controls = {});

// Same machinery with a caller-supplied vector field in the linear variables.
using RhsFn = std::function<Rates(const MilnorMetric&)>;
Trajectory integrate_custom(const RhsFn& rhs, const MilnorMetric& init,
                            double t_end, const IntegratorControls& controls = {});

// Observer form: called after every accepted step with (previous, current);
// return false to stop the run (termination stays as reached so far).
using StepObserver = std::function<bool(const Sample& prev, const Sample& cur)>;
Trajectory integrate_observed(Geometry g, FlowSign s, const MilnorMetric& init,
                              double t_end, const IntegratorControls& controls,
                              const StepObserver& on_accept);

struct EventSpec {
    enum class Direction { Rising, Falling, Any };
    std::string name;
    std::function<double(double t, const MilnorMetric& m)> fn;
    Direction direction = Direction::Any;
};

struct EventHit {
    std::string name;
    double t = 0.0;
    MilnorMetric m;
};

// Detects sign changes of the event functions along the flow, refined on the
// dense output. A function that is exactly zero at t=0 reports a hit at t=0
// when the immediate motion matches the direction filter. Hits come back in
// time order.
std::vector<EventHit> detect_events(Geometry g, FlowSign s, const MilnorMetric& init,
                                    const std::vector<EventSpec>& events,
                                    const IntegratorControls& controls = {},
                                    double t_end = kNoTimeLimit);

struct BlowUpEstimate {
    double T = 0.0;        // refined singular time
    double exponent = 0.0; // power of the dominant component, x ~ eta (T-t)^p
    double coefficient = 0.0;
    double residual = 0.0; // RMS of the log-log fit
    int component = 0;     // 0=A, 1=B, 2=C
};

// Runs the flow to blow-up and refines T by fitting the dominant component to
// eta (T-t)^p over the last two decades of (T-t), seeded with
// T = last time + last step. Throws NotApplicable when no blow-up occurs.
BlowUpEstimate estimate_blowup(Geometry g, FlowSign s, const MilnorMetric& init,
                               const IntegratorControls& controls = {});
BlowUpEstimate estimate_blowup(const Trajectory& traj);

// Joint (T, p, eta) fit of x ~ eta (T-t)^p to a series approaching an unknown
// singular time: for each trial T the line fit of ln x on ln(T-t) over the
// last `decades` of (T-t) is profiled out, and T is located by golden-section
// on the residual, seeded with T = t.back() + seed_step.
BlowUpEstimate fit_singular_time(std::span<const double> t, std::span<const double> x,
                                 double seed_step, double decades = 2.0);

// Dense-output cubic Hermite (in log-metric) between two accepted samples.
MilnorMetric hermite_interpolate(const Sample& a, const Sample& b, double t);

} // namespace xcf

#endif
