#ifndef XCF_REPORT_HPP
#define XCF_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "xcf/asymptotics.hpp"
#include "xcf/sl2.hpp"

namespace xcf {

// One batch run: which flow, from where, for how long, where the files go.
struct RunConfig {
    Geometry geometry = Geometry::Heisenberg;
    FlowSign sign = FlowSign::Positive;
    MilnorMetric init{1.0, 1.0, 1.0};
    bool auto_end = true;   // run to blow-up
    double t_end = 1.0;     // used when auto_end is false
    IntegratorControls controls;
    std::string out_dir;
    std::string grid; // sweep specification, e.g. "A=1:4:4;B=1;C=0.5,1"
    int jobs = 1;

    void validate() const; // throws InvalidInput
};

RunConfig config_from_json(const nlohmann::json& j);

// 17-significant-digit, locale-independent number formatting.
std::string format_g17(double v);

// Columns: t,A,B,C,k1,k2,k3,h1,h2,h3. Header row, newline-terminated rows.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Report JSON: termination, refined T and per-component power-law fits when
// the run blew up, limit estimates, sub-Riemannian limit, and the regime
// label for SL2R. Deterministic for a given config.
nlohmann::json build_report(const RunConfig& cfg, const Trajectory& traj);

struct RunOutcome {
    Trajectory traj;
    nlohmann::json report;
};

RunOutcome run_single(const RunConfig& cfg);

// Per-component values of a sweep grid; expanded in row-major order
// (A outermost, C innermost).
struct GridSpec {
    std::vector<double> A, B, C;
};

GridSpec parse_grid(const std::string& spec, const MilnorMetric& base); // throws InvalidInput
std::vector<MilnorMetric> expand_grid(const GridSpec& grid);

// Runs the whole grid with up to cfg.jobs worker threads; files are written
// and indexed by grid position, never by completion order. Returns the index
// JSON that was written to <out_dir>/index.json.
nlohmann::json run_sweep(const RunConfig& cfg);

} // namespace xcf

#endif
