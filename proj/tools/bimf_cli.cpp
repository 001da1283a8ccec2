// Command-line interface for the bipartite mean-field model toolkit.
//
// Subcommands: pressure, critical-points, phase-diagram, finite-n,
// field-selection. Output is JSON or CSV, written to stdout or --output.
// Sweeps are parallelized per grid cell and assembled in grid order, so the
// bytes produced do not depend on the thread count.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bimf/bimf.hpp"

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;

    double at(int i) const {
        return count == 1 ? lo : lo + (hi - lo) * i / (count - 1.0);
    }
};

Range parse_range(const std::string& text, const std::string& flag) {
    Range r;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(text);
    if (!(in >> r.lo >> colon1 >> r.hi >> colon2 >> r.count) || colon1 != ':' ||
        colon2 != ':' || r.count < 1 || !(in >> std::ws).eof())
        throw CLI::ValidationError(flag, "expected lo:hi:count with count >= 1");
    return r;
}

/// Model parameters from flags. Reduced mode (--t, --b, optional --a) and
/// full mode (--j11 --j12 --j22 --beta) are mutually exclusive; fields and
/// alpha ride along where meaningful.
struct ModelFlags {
    CLI::Option* opt_a = nullptr;
    CLI::Option* opt_b = nullptr;
    CLI::Option* opt_t = nullptr;
    CLI::Option* opt_beta = nullptr;
    double a = 0.0, b = 0.0, t = 0.0;
    double j11 = 0.0, j12 = 0.0, j22 = 0.0, beta = 1.0;
    double h1 = 0.0, h2 = 0.0, alpha = 0.5;

    void attach(CLI::App* cmd, bool with_field = true) {
        opt_t = cmd->add_option("--t", t, "reduced temperature (selects reduced mode)");
        opt_b = cmd->add_option("--b", b, "reduced cross-coupling");
        opt_a = cmd->add_option("--a", a, "reduced intra-coupling (default 1 - |b|)");
        cmd->add_option("--j11", j11, "intra-coupling of population 1");
        cmd->add_option("--j12", j12, "cross-coupling");
        cmd->add_option("--j22", j22, "intra-coupling of population 2");
        opt_beta = cmd->add_option("--beta", beta, "inverse temperature (selects full mode)");
        cmd->add_option("--alpha", alpha, "relative size of population 1")->capture_default_str();
        if (with_field) {
            cmd->add_option("--h1", h1, "field on population 1")->capture_default_str();
            cmd->add_option("--h2", h2, "field on population 2")->capture_default_str();
        }
    }

    bool reduced_mode() const { return opt_t->count() > 0; }

    bimf::ModelParams build() const {
        if (reduced_mode()) {
            if (opt_beta->count() > 0)
                throw CLI::ValidationError("--t/--beta", "give reduced or full parameters, not both");
            if (opt_b->count() == 0)
                throw CLI::ValidationError("--b", "required in reduced mode");
            const double aa = opt_a->count() > 0 ? a : 1.0 - std::abs(b);
            try {
                return bimf::to_model_params(bimf::make_reduced(aa, b, t), h1, h2);
            } catch (const bimf::domain_error& e) {
                throw CLI::ValidationError("--a/--b/--t", e.what());
            }
        }
        if (opt_beta->count() == 0)
            throw CLI::ValidationError("--beta", "full mode needs --j11 --j12 --j22 --beta");
        bimf::ModelParams p;
        p.j11 = j11;
        p.j12 = j12;
        p.j22 = j22;
        p.h1 = h1;
        p.h2 = h2;
        p.alpha1 = alpha;
        p.beta = beta;
        return p;
    }
};

struct OutputFlags {
    std::string format = "json";
    std::string path;

    void attach(CLI::App* cmd, const std::string& default_format = "json") {
        format = default_format;
        cmd->add_option("--format", format, "output format")
            ->capture_default_str()
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--output", path, "output file (default stdout)");
    }

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw bimf::error("cannot open output file: " + path);
        out << text;
    }
};

json point_to_json(const bimf::CriticalPoint& cp, const std::string& case_label) {
    json rec = {{"mu1", cp.location.mu1},
                {"mu2", cp.location.mu2},
                {"kind", bimf::to_string(cp.kind)},
                {"branch", bimf::to_string(cp.branch)},
                {"hessian_det", cp.hessian_det},
                {"f_value", cp.f_value},
                {"ring_fallback", cp.ring_fallback}};
    if (!case_label.empty()) rec["case"] = case_label;
    return rec;
}

// ---------------------------------------------------------------------------

int run_pressure(const ModelFlags& mf, const OutputFlags& of, int seed_grid) {
    const bimf::PressureResult res = bimf::limit_pressure(mf.build(), seed_grid);
    if (of.format == "json") {
        json out = {{"pressure", res.pressure},
                    {"f_max", res.f_max},
                    {"degenerate_ground_state", res.degenerate_ground_state}};
        out["argmax"] = json::array();
        for (const auto& m : res.argmax) out["argmax"].push_back({m.mu1, m.mu2});
        of.write(out.dump(2) + "\n");
    } else {
        std::string text = "pressure,f_max,degenerate_ground_state,mu1,mu2\n";
        for (const auto& m : res.argmax)
            text += fmt(res.pressure) + "," + fmt(res.f_max) + "," +
                    (res.degenerate_ground_state ? "1" : "0") + "," + fmt(m.mu1) + "," +
                    fmt(m.mu2) + "\n";
        of.write(text);
    }
    return 0;
}

int run_critical_points(const ModelFlags& mf, const OutputFlags& of, int seed_grid) {
    const bimf::ModelParams p = mf.build();
    std::vector<bimf::CriticalPoint> pts;
    std::string case_label;
    if (mf.reduced_mode() && p.zero_field()) {
        const bimf::ReducedParams r = bimf::rescale(p);
        case_label = bimf::to_string(bimf::classify_case(r));
        pts = bimf::enumerate_symmetric(r);
    } else {
        pts = bimf::find_critical_points_generic(p, seed_grid);
    }
    if (of.format == "json") {
        json out = json::array();
        for (const auto& cp : pts) out.push_back(point_to_json(cp, case_label));
        of.write(out.dump(2) + "\n");
    } else {
        std::string text = "mu1,mu2,kind,branch,hessian_det,f_value,case\n";
        for (const auto& cp : pts)
            text += fmt(cp.location.mu1) + "," + fmt(cp.location.mu2) + "," +
                    bimf::to_string(cp.kind) + "," + bimf::to_string(cp.branch) + "," +
                    fmt(cp.hessian_det) + "," + fmt(cp.f_value) + "," + case_label + "\n";
        of.write(text);
    }
    return 0;
}

int run_phase_diagram(const Range& t_range, const Range& b_range, const OutputFlags& of,
                      int threads) {
    for (int j = 0; j < b_range.count; ++j)
        if (b_range.at(j) == 0.0)
            throw CLI::ValidationError("--b-range", "grid must not contain b = 0");
    for (int i = 0; i < t_range.count; ++i)
        if (t_range.at(i) <= 0.0)
            throw CLI::ValidationError("--t-range", "grid must keep t > 0");

    struct Cell {
        double t = 0.0, b = 0.0, pressure = 0.0;
        std::string label;
        int n_critical = 0, n_maxima = 0;
        std::string error;
    };
    const int total = t_range.count * b_range.count;
    std::vector<Cell> cells(total);
    bimf::parallel_for_index(total, threads, [&](int idx) {
        Cell& cell = cells[idx];
        cell.t = t_range.at(idx / b_range.count);
        cell.b = b_range.at(idx % b_range.count);
        try {
            const bimf::ReducedParams r =
                bimf::make_reduced(1.0 - std::abs(cell.b), cell.b, cell.t);
            cell.label = bimf::to_string(bimf::classify_case(r));
            const auto pts = bimf::enumerate_symmetric(r);
            cell.n_critical = (int)pts.size();
            double f_max = -1e300;
            for (const auto& cp : pts) {
                if (bimf::is_maximum_kind(cp.kind)) ++cell.n_maxima;
                f_max = std::max(f_max, cp.f_value);
            }
            cell.pressure = std::numbers::ln2_v<double> + f_max;
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    });
    for (const auto& cell : cells)
        if (!cell.error.empty())
            throw bimf::error("phase-diagram cell (t=" + fmt(cell.t) + ", b=" + fmt(cell.b) +
                              "): " + cell.error);

    if (of.format == "csv") {
        std::string text = "t,b,case_label,n_critical,n_maxima,pressure\n";
        for (const auto& c : cells)
            text += fmt(c.t) + "," + fmt(c.b) + "," + c.label + "," +
                    std::to_string(c.n_critical) + "," + std::to_string(c.n_maxima) + "," +
                    fmt(c.pressure) + "\n";
        of.write(text);
    } else {
        json out = json::array();
        for (const auto& c : cells)
            out.push_back({{"t", c.t},
                           {"b", c.b},
                           {"case_label", c.label},
                           {"n_critical", c.n_critical},
                           {"n_maxima", c.n_maxima},
                           {"pressure", c.pressure}});
        of.write(out.dump(2) + "\n");
    }
    return 0;
}

int run_finite_n(const ModelFlags& mf, const OutputFlags& of,
                 const std::vector<int>& sizes, int bounds_max_n, int bounds_c, int threads) {
    if (sizes.empty() && bounds_max_n == 0)
        throw CLI::ValidationError("finite-n", "give --sizes and/or --bounds-max-n");

    json out;
    std::string csv;
    if (!sizes.empty()) {
        const bimf::ModelParams p = mf.build();
        const auto rows = bimf::convergence_study(p, sizes, 2.0, threads);
        if (of.format == "json") {
            out["p_limit"] = bimf::limit_pressure(p).pressure;
            out["rows"] = json::array();
            for (const auto& r : rows)
                out["rows"].push_back({{"n", r.n},
                                       {"n1", r.n1},
                                       {"n2", r.n2},
                                       {"p_n", r.p_n},
                                       {"residual", r.residual},
                                       {"envelope", r.envelope}});
        } else {
            csv += "n,n1,n2,p_n,residual,envelope\n";
            for (const auto& r : rows)
                csv += std::to_string(r.n) + "," + std::to_string(r.n1) + "," +
                       std::to_string(r.n2) + "," + fmt(r.p_n) + "," + fmt(r.residual) + "," +
                       fmt(r.envelope) + "\n";
        }
    }
    if (bounds_max_n > 0) {
        const int c = bounds_c > 0 ? bounds_c : bimf::smallest_sector_bound_constant(bounds_max_n);
        double worst_upper = 1e300, worst_lower = 1e300;
        long long viol_upper = 0, viol_lower = 0;
        for (int n = 1; n <= bounds_max_n; ++n) {
            const auto rep = bimf::check_sector_bounds(n, c);
            worst_upper = std::min(worst_upper, rep.worst_upper_slack);
            worst_lower = std::min(worst_lower, rep.worst_lower_slack);
            viol_upper += rep.violations_upper;
            viol_lower += rep.violations_lower;
        }
        if (of.format == "json") {
            out["sector_bounds"] = {{"max_n", bounds_max_n},
                             {"c", c},
                             {"worst_upper_slack", worst_upper},
                             {"worst_lower_slack", worst_lower},
                             {"violations_upper", viol_upper},
                             {"violations_lower", viol_lower}};
        } else {
            csv += "max_n,c,worst_upper_slack,worst_lower_slack,violations_upper,violations_lower\n";
            csv += std::to_string(bounds_max_n) + "," + std::to_string(c) + "," +
                   fmt(worst_upper) + "," + fmt(worst_lower) + "," + std::to_string(viol_upper) +
                   "," + std::to_string(viol_lower) + "\n";
        }
    }
    of.write(of.format == "json" ? out.dump(2) + "\n" : csv);
    return 0;
}

int run_field_selection(const ModelFlags& mf, const OutputFlags& of, double epsilon,
                        bool epsilon_given, int seed_grid) {
    if (!mf.reduced_mode())
        throw CLI::ValidationError("field-selection", "requires reduced parameters --t --b [--a]");
    ModelFlags base = mf;
    base.h1 = 0.0;
    base.h2 = 0.0;
    const bimf::ModelParams p = base.build();
    const double norm = std::hypot(mf.h1, mf.h2);
    const double scale = epsilon_given ? epsilon : (norm > 0.0 ? norm : 1e-4);
    const auto rep = bimf::field_selection(p, {mf.h1, mf.h2}, scale, seed_grid);

    if (of.format == "json") {
        json out = {{"field", {rep.field[0], rep.field[1]}},
                    {"dot_product", rep.dot_product},
                    {"gap", rep.gap},
                    {"stable_under_halving", rep.stable_under_halving}};
        if (rep.selected)
            out["selected"] = {rep.selected->mu1, rep.selected->mu2};
        else
            out["selected"] = "tie";
        of.write(out.dump(2) + "\n");
    } else {
        std::string text = "h1,h2,tie,selected_mu1,selected_mu2,dot_product,gap,stable_under_halving\n";
        text += fmt(rep.field[0]) + "," + fmt(rep.field[1]) + ",";
        if (rep.selected)
            text += "0," + fmt(rep.selected->mu1) + "," + fmt(rep.selected->mu2);
        else
            text += "1,,";
        text += "," + fmt(rep.dot_product) + "," + fmt(rep.gap) + "," +
                (rep.stable_under_halving ? "1" : "0") + "\n";
        of.write(text);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bipartite mean-field model toolkit"};
    app.require_subcommand(1);
    // let --threads / --seed-grid appear after the subcommand as well
    app.fallthrough();
    int threads = 0;
    int seed_grid = 21;
    app.add_option("--threads", threads, "worker threads for sweeps (default: all cores)");
    app.add_option("--seed-grid", seed_grid, "seed grid side for the generic finder")->capture_default_str();

    ModelFlags mf_pressure, mf_points, mf_finite, mf_field;
    OutputFlags of_pressure, of_points, of_phase, of_finite, of_field;

    auto* cmd_pressure = app.add_subcommand("pressure", "thermodynamic-limit pressure");
    mf_pressure.attach(cmd_pressure);
    of_pressure.attach(cmd_pressure);

    auto* cmd_points = app.add_subcommand("critical-points", "critical points of the pressure functional");
    mf_points.attach(cmd_points);
    of_points.attach(cmd_points);

    auto* cmd_phase = app.add_subcommand("phase-diagram", "case map over a (t, b) grid");
    std::string t_range_text, b_range_text;
    cmd_phase->add_option("--t-range", t_range_text, "t grid as lo:hi:count")->required();
    cmd_phase->add_option("--b-range", b_range_text, "b grid as lo:hi:count")->required();
    of_phase.attach(cmd_phase, "csv");

    auto* cmd_finite = app.add_subcommand("finite-n", "exact finite-size pressure and sector bounds");
    mf_finite.attach(cmd_finite);
    std::vector<int> sizes;
    int bounds_max_n = 0, bounds_c = 0;
    cmd_finite->add_option("--sizes", sizes, "total sizes for the convergence table")
        ->delimiter(',');
    cmd_finite->add_option("--bounds-max-n", bounds_max_n, "check sector bounds up to this n");
    cmd_finite->add_option("--bounds-c", bounds_c, "constant for the lower sector bound (default: smallest passing integer)");
    of_finite.attach(cmd_finite);

    auto* cmd_field = app.add_subcommand("field-selection", "ground-state selection by a small field");
    mf_field.attach(cmd_field);
    double epsilon = 1e-4;
    auto* opt_eps = cmd_field->add_option("--epsilon", epsilon, "field magnitude (default: magnitude of (h1,h2))");
    of_field.attach(cmd_field);

    try {
        app.parse(argc, argv);
        if (cmd_pressure->parsed()) return run_pressure(mf_pressure, of_pressure, seed_grid);
        if (cmd_points->parsed()) return run_critical_points(mf_points, of_points, seed_grid);
        if (cmd_phase->parsed())
            return run_phase_diagram(parse_range(t_range_text, "--t-range"),
                                     parse_range(b_range_text, "--b-range"), of_phase, threads);
        if (cmd_finite->parsed())
            return run_finite_n(mf_finite, of_finite, sizes, bounds_max_n, bounds_c, threads);
        if (cmd_field->parsed())
            return run_field_selection(mf_field, of_field, epsilon, opt_eps->count() > 0,
                                       seed_grid);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 2;
    } catch (const bimf::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
