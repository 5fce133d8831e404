#pragma once

// Scenario execution: run either solution route (or both), cross-validate,
// classify, detect periods, and emit CSV trajectories, SVG plots and a text
// summary. Also the executable verification report combining the route gap
// with the algebraic-identity checks along the closed-form trajectory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "polydyn/classification.hpp"
#include "polydyn/identities.hpp"
#include "polydyn/newtonian_dynamics.hpp"
#include "polydyn/root_tracking.hpp"
#include "polydyn/scenario.hpp"

namespace polydyn {

enum class Route { Closed, Direct, Both };

inline const char* to_string(Route r) {
    switch (r) {
        case Route::Closed: return "closed";
        case Route::Direct: return "direct";
        case Route::Both: return "both";
    }
    return "?";
}

// --- deterministic CSV/SVG emission ------------------------------------------

namespace detail {

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw NumericalError("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

// One row per sample: t, then re/im of every tracked zero, then re/im of
// every w when present. 17 significant digits, comma-separated, header row.
inline std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream out;
    const std::size_t n = traj.particles();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",re_z" << i << ",im_z" << i;
    if (!traj.w.empty())
        for (std::size_t i = 1; i <= n; ++i) out << ",re_w" << i << ",im_w" << i;
    out << "\n";
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        out << detail::format_g17(traj.times[j]);
        for (std::size_t i = 0; i < n; ++i)
            out << "," << detail::format_g17(traj.z[j][i].real()) << ","
                << detail::format_g17(traj.z[j][i].imag());
        if (!traj.w.empty())
            for (std::size_t i = 0; i < n; ++i)
                out << "," << detail::format_g17(traj.w[j][i].real()) << ","
                    << detail::format_g17(traj.w[j][i].imag());
        out << "\n";
    }
    return out.str();
}

// Static complex-plane plot: one polyline per particle, a square marking each
// initial point.
inline std::string trajectory_svg(const std::vector<CVec>& series, const std::string& title) {
    static const char* palette[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#b8860b",
                                    "#6a3d9a", "#0097a7", "#99540f", "#546e7a"};
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& sample : series)
        for (const auto& p : sample) {
            xmin = std::min(xmin, p.real());
            xmax = std::max(xmax, p.real());
            ymin = std::min(ymin, p.imag());
            ymax = std::max(ymax, p.imag());
        }
    if (!(xmax >= xmin)) xmin = xmax = 0.0;
    if (!(ymax >= ymin)) ymin = ymax = 0.0;
    const double spanx = std::max(xmax - xmin, 1e-9), spany = std::max(ymax - ymin, 1e-9);
    const double span = std::max(spanx, spany);
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    const double half = 0.55 * span;
    const double size = 640.0;
    auto sx = [&](double x) { return (x - (cx - half)) / (2 * half) * size; };
    auto sy = [&](double y) { return size - (y - (cy - half)) / (2 * half) * size; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
           "height=\"640\" viewBox=\"0 0 640 640\">\n"
        << "<title>" << title << "</title>\n"
        << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
    // light axes when the origin is inside the view
    if (cx - half < 0 && 0 < cx + half)
        out << "<line x1=\"" << num(sx(0)) << "\" y1=\"0\" x2=\"" << num(sx(0))
            << "\" y2=\"640\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    if (cy - half < 0 && 0 < cy + half)
        out << "<line x1=\"0\" y1=\"" << num(sy(0)) << "\" x2=\"640\" y2=\"" << num(sy(0))
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    const std::size_t n = series.empty() ? 0 : series.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        const char* color = palette[i % (sizeof palette / sizeof palette[0])];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t j = 0; j < series.size(); ++j) {
            if (j) out << " ";
            out << num(sx(series[j][i].real())) << "," << num(sy(series[j][i].imag()));
        }
        out << "\"/>\n";
        const double px = sx(series.front()[i].real());
        const double py = sy(series.front()[i].imag());
        out << "<rect x=\"" << num(px - 4) << "\" y=\"" << num(py - 4)
            << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// --- run ----------------------------------------------------------------------

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool svg = false;
    bool write_files = true;
    std::optional<double> t1_override;
    std::optional<double> dt_override;
    IntegrateOptions integrate;
    int max_p = 4;  // period multiples to scan for
};

struct RouteGap {
    double z_abs = 0.0;  // sup |z_closed - z_direct|
    double z_rel = 0.0;  // sup |z_closed - z_direct| / max(1, |z_closed|)
    double w_abs = 0.0;
    double w_rel = 0.0;
};

struct RunResult {
    Scenario scenario;
    BehaviorClass behavior;
    std::optional<Trajectory> closed;
    std::optional<Trajectory> direct;
    std::optional<PeriodDetection> periods;  // from the closed route when available
    std::optional<RouteGap> gap;
    std::vector<std::filesystem::path> files;
    std::string summary;
};

namespace detail {

inline RouteGap route_gap(const Trajectory& closed, const Trajectory& direct) {
    RouteGap g;
    const std::size_t count = std::min(closed.times.size(), direct.times.size());
    const std::size_t n = closed.particles();
    for (std::size_t j = 0; j < count; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const double dz = std::abs(closed.z[j][i] - direct.z[j][i]);
            g.z_abs = std::max(g.z_abs, dz);
            g.z_rel = std::max(g.z_rel, dz / std::max(1.0, std::abs(closed.z[j][i])));
            if (!closed.w.empty() && !direct.w.empty()) {
                const double dw = std::abs(closed.w[j][i] - direct.w[j][i]);
                g.w_abs = std::max(g.w_abs, dw);
                g.w_rel = std::max(g.w_rel, dw / std::max(1.0, std::abs(closed.w[j][i])));
            }
        }
    return g;
}

inline std::string periods_line(const std::vector<std::optional<int>>& ps, const char* label) {
    std::ostringstream out;
    out << label << ":";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        out << " ";
        if (ps[i]) out << *ps[i];
        else out << "-";
    }
    return out.str();
}

}  // namespace detail

inline RunResult run_scenario(const Scenario& scenario_in, Route route,
                              const RunOptions& opt = {}) {
    Scenario scenario = scenario_in;
    if (opt.t1_override) scenario.t1 = *opt.t1_override;
    if (opt.dt_override) scenario.dt = *opt.dt_override;
    validate_scenario(scenario);

    RunResult result;
    result.scenario = scenario;

    const auto lambdas = scenario_lambdas(scenario);
    CVec flat;
    for (const auto& quad : lambdas) flat.insert(flat.end(), quad.begin(), quad.end());
    result.behavior = classify_modes(flat);

    if (route == Route::Closed || route == Route::Both) {
        const ModeSpec modes = scenario_modes(scenario);
        result.closed =
            zero_trajectory(modes, 0.0, scenario.t1, scenario.dt, &scenario.initial.z);
    }
    if (route == Route::Direct || route == Route::Both) {
        const CoeffParams params = scenario_params(scenario);
        result.direct =
            integrate(scenario.initial, params, 0.0, scenario.t1, scenario.dt, opt.integrate);
    }
    if (result.closed && result.direct)
        result.gap = detail::route_gap(*result.closed, *result.direct);

    if (result.behavior.period) {
        const Trajectory* traj = result.closed ? &*result.closed
                                 : result.direct ? &*result.direct
                                                 : nullptr;
        if (traj) {
            int max_p = opt.max_p;
            while (max_p >= 1 &&
                   static_cast<double>(max_p) * *result.behavior.period > scenario.t1 + 1e-9)
                --max_p;
            if (max_p >= 1) {
                try {
                    result.periods = detect_period(*traj, *result.behavior.period, max_p);
                } catch (const ArgumentError&) {
                    // grid/span unsuitable; periods stay unset
                }
            }
        }
    }

    std::ostringstream sum;
    sum << "scenario: " << scenario.name << "\n"
        << "n: " << scenario.n << "\n"
        << "route: " << to_string(route) << "\n"
        << "class: " << to_string(result.behavior.kind);
    if (result.behavior.period) sum << " (T = " << detail::format_g17(*result.behavior.period) << ")";
    sum << "\n";
    if (!result.behavior.diagnostics.empty())
        sum << "diagnostics: " << result.behavior.diagnostics << "\n";
    if (result.periods) {
        sum << detail::periods_line(result.periods->z, "periods_z (multiples of T)") << "\n";
        if (!result.periods->w.empty())
            sum << detail::periods_line(result.periods->w, "periods_w (multiples of T)") << "\n";
    }
    if (result.gap) {
        sum << "route_gap_z_sup: " << detail::format_g17(result.gap->z_abs) << "\n"
            << "route_gap_z_rel: " << detail::format_g17(result.gap->z_rel) << "\n"
            << "route_gap_w_sup: " << detail::format_g17(result.gap->w_abs) << "\n"
            << "route_gap_w_rel: " << detail::format_g17(result.gap->w_rel) << "\n";
    }
    result.summary = sum.str();

    if (opt.write_files) {
        std::filesystem::create_directories(opt.out_dir);
        auto emit = [&](const std::string& file, const std::string& content) {
            const auto path = opt.out_dir / file;
            detail::atomic_write(path, content);
            result.files.push_back(path);
        };
        if (result.closed) {
            emit(scenario.name + "_closed.csv", trajectory_csv(*result.closed));
            if (opt.svg) {
                emit(scenario.name + "_closed.svg",
                     trajectory_svg(result.closed->z, scenario.name + " (closed route, z-plane)"));
                if (!result.closed->w.empty())
                    emit(scenario.name + "_closed_w.svg",
                         trajectory_svg(result.closed->w,
                                        scenario.name + " (closed route, w-plane)"));
            }
        }
        if (result.direct) {
            emit(scenario.name + "_direct.csv", trajectory_csv(*result.direct));
            if (opt.svg) {
                emit(scenario.name + "_direct.svg",
                     trajectory_svg(result.direct->z, scenario.name + " (direct route, z-plane)"));
                if (!result.direct->w.empty())
                    emit(scenario.name + "_direct_w.svg",
                         trajectory_svg(result.direct->w,
                                        scenario.name + " (direct route, w-plane)"));
            }
        }
        emit(scenario.name + "_summary.txt", result.summary);
    }
    return result;
}

// --- verify -------------------------------------------------------------------

struct VerifyThresholds {
    double route_gap_rel = 1e-6;
    double identity_residual_rel = 1e-8;
    double self_eval = 1e-8;
    double relation_product_dev = 1e-10;
};

struct VerifyOptions {
    // test-harness hook: corrupt delta_1 by +1 on the direct route only, to
    // demonstrate the route-gap check actually bites
    bool corrupt_direct_delta1 = false;
    VerifyThresholds thresholds;
    IntegrateOptions integrate{1e-12, 1e-12};
    int identity_sample_stride = 16;
};

struct VerifyReport {
    double route_gap_rel = 0.0;
    std::array<double, 4> identity_residual_rel{};  // orders 1..4
    double self_eval_max = 0.0;                     // normalized by (1+max|z|)^N
    double relation_product_dev = 0.0;
    std::optional<PeriodDetection> periods;
    BehaviorClass behavior;
    VerifyThresholds thresholds;
    bool route_gap_ok = false, identities_ok = false, self_eval_ok = false, relation_ok = false;

    bool pass() const { return route_gap_ok && identities_ok && self_eval_ok && relation_ok; }

    std::string text() const {
        std::ostringstream out;
        auto line = [&](const char* name, double value, double thr, bool ok) {
            out << (ok ? "PASS" : "FAIL") << "  " << name << " = " << detail::format_g17(value)
                << "  (threshold " << detail::format_g17(thr) << ")\n";
        };
        line("route gap (relative sup-norm)", route_gap_rel, thresholds.route_gap_rel,
             route_gap_ok);
        double worst = 0.0;
        for (double r : identity_residual_rel) worst = std::max(worst, r);
        line("identity residuals orders 1-4 (relative)", worst, thresholds.identity_residual_rel,
             identities_ok);
        line("polynomial self-evaluation (normalized)", self_eval_max, thresholds.self_eval,
             self_eval_ok);
        line("relation-matrix product deviation", relation_product_dev,
             thresholds.relation_product_dev, relation_ok);
        out << "class: " << to_string(behavior.kind);
        if (behavior.period) out << " (T = " << detail::format_g17(*behavior.period) << ")";
        out << "\n";
        if (periods) {
            out << detail::periods_line(periods->z, "periods_z (multiples of T)") << "\n";
            if (!periods->w.empty())
                out << detail::periods_line(periods->w, "periods_w (multiples of T)") << "\n";
        }
        return out.str();
    }
};

inline VerifyReport verify_scenario(const Scenario& scenario, const VerifyOptions& opt = {}) {
    validate_scenario(scenario);
    VerifyReport report;
    report.thresholds = opt.thresholds;

    const auto lambdas = scenario_lambdas(scenario);
    CVec flat;
    for (const auto& quad : lambdas) flat.insert(flat.end(), quad.begin(), quad.end());
    report.behavior = classify_modes(flat);

    const ModeSpec modes = scenario_modes(scenario);
    const Trajectory closed =
        zero_trajectory(modes, 0.0, scenario.t1, scenario.dt, &scenario.initial.z);

    CoeffParams params = scenario_params(scenario);
    if (opt.corrupt_direct_delta1) params[0].delta += Complex(1.0);
    const Trajectory direct =
        integrate(scenario.initial, params, 0.0, scenario.t1, scenario.dt, opt.integrate);

    report.route_gap_rel = detail::route_gap(closed, direct).z_rel;
    report.route_gap_ok = report.route_gap_rel <= opt.thresholds.route_gap_rel;

    // identity residuals + self-evaluation along the closed-form trajectory
    const std::size_t n = scenario.n;
    for (std::size_t j = 0; j < closed.times.size();
         j += static_cast<std::size_t>(opt.identity_sample_stride)) {
        const double t = closed.times[j];
        const CVec& z = closed.z[j];
        const CVec c = eval_coefficients(modes, t, 0);
        const CVec cd1 = eval_coefficients(modes, t, 1);
        const CVec cd2 = eval_coefficients(modes, t, 2);
        const CVec cd3 = eval_coefficients(modes, t, 3);
        const CVec cd4 = eval_coefficients(modes, t, 4);
        const auto zd = zero_derivs_from_coeff_derivs(z, cd1, cd2, cd3, cd4);
        DerivBundle bundle;
        bundle.z = z;
        bundle.zd1 = zd.d1;
        bundle.zd2 = zd.d2;
        bundle.zd3 = zd.d3;
        bundle.zd4 = zd.d4;
        bundle.cd1 = cd1;
        bundle.cd2 = cd2;
        bundle.cd3 = cd3;
        bundle.cd4 = cd4;
        for (int order = 1; order <= 4; ++order) {
            const auto rel = identity_relative_residuals(bundle, order);
            for (double r : rel)
                report.identity_residual_rel[static_cast<std::size_t>(order - 1)] =
                    std::max(report.identity_residual_rel[static_cast<std::size_t>(order - 1)], r);
        }
        const double scale = std::pow(1.0 + max_abs(z), static_cast<double>(n));
        for (const Complex& zn : z)
            report.self_eval_max =
                std::max(report.self_eval_max, std::abs(poly_eval(c, zn)) / scale);
    }
    report.identities_ok = true;
    for (double r : report.identity_residual_rel)
        report.identities_ok = report.identities_ok && r <= opt.thresholds.identity_residual_rel;
    report.self_eval_ok = report.self_eval_max <= opt.thresholds.self_eval;

    // relation-matrix product at 10 sampled times
    const std::size_t stride = std::max<std::size_t>(1, closed.times.size() / 10);
    std::size_t checked = 0;
    for (std::size_t j = 0; j < closed.times.size() && checked < 10; j += stride, ++checked) {
        const auto product = relation_matrix(closed.z[j]) * relation_matrix_inverse(closed.z[j]);
        report.relation_product_dev =
            std::max(report.relation_product_dev, product.deviation_from_identity());
    }
    report.relation_ok = report.relation_product_dev <= opt.thresholds.relation_product_dev;

    if (report.behavior.period) {
        int max_p = 4;
        while (max_p >= 1 && static_cast<double>(max_p) * *report.behavior.period > scenario.t1 + 1e-9)
            --max_p;
        if (max_p >= 1) {
            try {
                report.periods = detect_period(closed, *report.behavior.period, max_p);
            } catch (const ArgumentError&) {
            }
        }
    }
    return report;
}

}  // namespace polydyn
