#include "xcf/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace xcf {

void RunConfig::validate() const {
    if (!init.positive()) throw InvalidInput("initial metric components must be positive");
    if (!auto_end && !(t_end >= 0.0)) throw InvalidInput("t_end must be nonnegative");
    if (jobs < 1) throw InvalidInput("jobs must be at least 1");
    controls.validate();
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    try {
        if (j.contains("geometry")) cfg.geometry = geometry_from_name(j.at("geometry").get<std::string>());
        if (j.contains("sign")) cfg.sign = sign_from_name(j.at("sign").get<std::string>());
        if (j.contains("init")) {
            const auto& v = j.at("init");
            if (!v.is_array() || v.size() != 3) throw InvalidInput("init must be [A,B,C]");
            cfg.init = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
        }
        if (j.contains("t_end")) {
            const auto& v = j.at("t_end");
            if (v.is_string() && v.get<std::string>() == "auto") {
                cfg.auto_end = true;
            } else {
                cfg.auto_end = false;
                cfg.t_end = v.get<double>();
            }
        }
        if (j.contains("rel_tol")) cfg.controls.rel_tol = j.at("rel_tol").get<double>();
        if (j.contains("abs_tol")) cfg.controls.abs_tol = j.at("abs_tol").get<double>();
        if (j.contains("max_steps")) cfg.controls.max_steps = j.at("max_steps").get<long>();
        if (j.contains("mode")) {
            const std::string m = j.at("mode").get<std::string>();
            if (m == "linear")
                cfg.controls.mode = VariableMode::Linear;
            else if (m == "log" || m == "logarithmic")
                cfg.controls.mode = VariableMode::Logarithmic;
            else
                throw InvalidInput("mode must be 'linear' or 'log'");
        }
        if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
        if (j.contains("grid")) cfg.grid = j.at("grid").get<std::string>();
        if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad config: ") + e.what());
    }
    return cfg;
}

std::string format_g17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,A,B,C,k1,k2,k3,h1,h2,h3\n";
    for (const Sample& s : traj.samples) {
        const SectionalCurvatures k = sectional_curvatures(traj.geometry, s.m);
        const CrossCurvature h = cross_curvature(traj.geometry, s.m);
        os << format_g17(s.t) << ',' << format_g17(s.m.A) << ',' << format_g17(s.m.B)
           << ',' << format_g17(s.m.C) << ',' << format_g17(k.k1) << ','
           << format_g17(k.k2) << ',' << format_g17(k.k3) << ',' << format_g17(h.h1)
           << ',' << format_g17(h.h2) << ',' << format_g17(h.h3) << '\n';
    }
}

namespace {

std::vector<LimitFunctional> default_functionals(Geometry g, const Trajectory& traj) {
    switch (g) {
        case Geometry::Heisenberg:
            return {LimitFunctional::BOverC};
        case Geometry::SU2:
            return {LimitFunctional::A3B, LimitFunctional::A3C, LimitFunctional::BOverC};
        case Geometry::E11:
        case Geometry::E2:
            return {LimitFunctional::A3B, LimitFunctional::A3C};
        case Geometry::SL2R: {
            // Pick the family matched to the diverging component.
            const double growA = traj.back().m.A / traj.front().m.A;
            const double growB = traj.back().m.B / traj.front().m.B;
            if (growB > growA)
                return {LimitFunctional::AB3, LimitFunctional::CB3, LimitFunctional::COverA};
            return {LimitFunctional::A3B, LimitFunctional::A3C, LimitFunctional::BOverC};
        }
        default:
            return {};
    }
}

nlohmann::json metric_json(const MilnorMetric& m) {
    return nlohmann::json::array({m.A, m.B, m.C});
}

} // namespace

nlohmann::json build_report(const RunConfig& cfg, const Trajectory& traj) {
    nlohmann::json j;
    j["geometry"] = std::string(geometry_name(cfg.geometry));
    j["sign"] = std::string(sign_name(cfg.sign));
    j["init"] = metric_json(cfg.init);
    j["t_end"] = cfg.auto_end ? nlohmann::json("auto") : nlohmann::json(cfg.t_end);
    j["rel_tol"] = cfg.controls.rel_tol;
    j["abs_tol"] = cfg.controls.abs_tol;
    j["mode"] = cfg.controls.mode == VariableMode::Logarithmic ? "log" : "linear";
    j["termination"] = std::string(termination_name(traj.termination));
    j["t_final"] = traj.back().t;
    j["final"] = metric_json(traj.back().m);
    j["steps"] = traj.steps_taken;

    if (traj.termination == Termination::BlowUp) {
        const BlowUpEstimate est = estimate_blowup(traj);
        nlohmann::json bu;
        bu["T"] = est.T;
        bu["dominant_component"] = est.component;
        bu["fit_residual"] = est.residual;
        const char* comp_names[3] = {"A", "B", "C"};
        for (int i = 0; i < 3; ++i) {
            try {
                const PowerLawFit f = fit_power_law_component(traj, i, est.T);
                bu["fits"][comp_names[i]] = {{"exponent", f.exponent},
                                             {"coefficient", f.coefficient},
                                             {"residual", f.residual},
                                             {"samples", f.n_samples}};
            } catch (const WindowError&) {
                bu["fits"][comp_names[i]] = nullptr;
            }
        }
        j["blow_up"] = bu;

        nlohmann::json lims = nlohmann::json::array();
        for (LimitFunctional f : default_functionals(cfg.geometry, traj)) {
            const LimitEstimate le = estimate_limit(traj, est.T, f);
            lims.push_back({{"name", std::string(limit_functional_name(f))},
                            {"value", le.value},
                            {"converged", le.converged}});
        }
        j["limits"] = lims;

        try {
            const SubRiemannianLimit q = subriemannian_limit(cfg.geometry, traj, est.T);
            const char* comp_names2[3] = {"A", "B", "C"};
            j["sub_riemannian"] = {{"q", {q.q1, q.q2, q.q3}},
                                   {"normalizer", comp_names2[q.normalizer]},
                                   {"diverging_component", q.diverging_component}};
        } catch (const NotApplicable&) {
            j["sub_riemannian"] = nullptr;
        }
    }

    if (cfg.geometry == Geometry::SL2R) {
        const RegimeLabel lab = classify(cfg.init, cfg.controls);
        j["regime"] = {{"label", std::string(regime_name(lab.label))},
                       {"trigger", std::string(trigger_name(lab.trigger))},
                       {"trigger_time", lab.trigger_time}};
    }
    return j;
}

RunOutcome run_single(const RunConfig& cfg) {
    cfg.validate();
    const double t_end = cfg.auto_end ? kNoTimeLimit : cfg.t_end;
    RunOutcome out;
    out.traj = integrate(cfg.geometry, cfg.sign, cfg.init, t_end, cfg.controls);
    out.report = build_report(cfg, out.traj);
    return out;
}

namespace {

std::vector<double> parse_values(const std::string& spec) {
    std::vector<double> vals;
    // Either "lo:hi:n" or "v1,v2,...".
    if (spec.find(':') != std::string::npos) {
        double lo, hi;
        long n;
        char c1, c2;
        std::istringstream is(spec);
        if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
            throw InvalidInput("bad grid range: " + spec);
        if (n == 1) {
            vals.push_back(lo);
        } else {
            for (long i = 0; i < n; ++i)
                vals.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
        }
        return vals;
    }
    std::istringstream is(spec);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        vals.push_back(std::stod(item));
    }
    if (vals.empty()) throw InvalidInput("empty grid list: " + spec);
    return vals;
}

} // namespace

GridSpec parse_grid(const std::string& spec, const MilnorMetric& base) {
    GridSpec g;
    g.A = {base.A};
    g.B = {base.B};
    g.C = {base.C};
    if (spec.empty()) throw InvalidInput("sweep requires a nonempty grid");
    std::istringstream is(spec);
    std::string part;
    while (std::getline(is, part, ';')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw InvalidInput("grid parts must look like A=...: " + part);
        const std::string name = part.substr(0, eq);
        const std::vector<double> vals = parse_values(part.substr(eq + 1));
        for (double v : vals)
            if (!(v > 0.0)) throw InvalidInput("grid values must be positive");
        if (name == "A")
            g.A = vals;
        else if (name == "B")
            g.B = vals;
        else if (name == "C")
            g.C = vals;
        else
            throw InvalidInput("unknown grid component: " + name);
    }
    return g;
}

std::vector<MilnorMetric> expand_grid(const GridSpec& grid) {
    std::vector<MilnorMetric> out;
    out.reserve(grid.A.size() * grid.B.size() * grid.C.size());
    for (double a : grid.A)
        for (double b : grid.B)
            for (double c : grid.C) out.push_back({a, b, c});
    return out;
}

nlohmann::json run_sweep(const RunConfig& cfg) {
    cfg.validate();
    const GridSpec grid = parse_grid(cfg.grid, cfg.init);
    const std::vector<MilnorMetric> points = expand_grid(grid);
    if (cfg.out_dir.empty()) throw InvalidInput("sweep requires an output directory");
    std::filesystem::create_directories(cfg.out_dir);

    std::vector<nlohmann::json> reports(points.size());
    std::vector<std::string> errors(points.size());
    std::mutex next_mutex;
    std::size_t next = 0;

    auto worker = [&]() {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= points.size()) return;
                i = next++;
            }
            RunConfig one = cfg;
            one.init = points[i];
            one.grid.clear();
            char name[32];
            std::snprintf(name, sizeof(name), "run_%04zu", i);
            try {
                const RunOutcome out = run_single(one);
                const std::filesystem::path base = std::filesystem::path(cfg.out_dir) / name;
                std::ofstream csv(base.string() + ".csv");
                write_trajectory_csv(csv, out.traj);
                std::ofstream rep(base.string() + ".json");
                rep << out.report.dump(2) << '\n';
                reports[i] = out.report;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const int n_threads = std::min<std::size_t>(cfg.jobs, points.size());
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();

    nlohmann::json index;
    index["grid"] = cfg.grid;
    index["runs"] = nlohmann::json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "run_%04zu", i);
        nlohmann::json entry;
        entry["index"] = i;
        entry["init"] = metric_json(points[i]);
        entry["files"] = {std::string(name) + ".csv", std::string(name) + ".json"};
        if (!errors[i].empty()) {
            entry["error"] = errors[i];
        } else {
            entry["termination"] = reports[i]["termination"];
            if (reports[i].contains("blow_up")) entry["T"] = reports[i]["blow_up"]["T"];
        }
        index["runs"].push_back(entry);
    }
    std::ofstream idx(std::filesystem::path(cfg.out_dir) / "index.json");
    idx << index.dump(2) << '\n';
    return index;
}

} // namespace xcf
