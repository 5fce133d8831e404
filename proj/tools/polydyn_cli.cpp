// Command-line front end: run a scenario through either solution route (or
// both), verify a scenario against the built-in consistency checks, or list
// the built-in scenarios.
//
// Exit status: 0 success, 2 validation error, 3 numerical/collision error,
// 4 verification threshold exceeded.

#include <CLI11.hpp>

#include <iostream>

#include "polydyn/polydyn.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerifyFailed = 4;

int run_command(const std::string& scenario_arg, const std::string& route_name,
                const std::string& out_dir, bool svg, std::optional<double> t1,
                std::optional<double> dt) {
    polydyn::Route route = polydyn::Route::Both;
    if (route_name == "closed") route = polydyn::Route::Closed;
    else if (route_name == "direct") route = polydyn::Route::Direct;
    else if (route_name == "both") route = polydyn::Route::Both;
    else throw polydyn::ValidationError("unknown route '" + route_name + "'");

    const polydyn::Scenario scenario = polydyn::resolve_scenario(scenario_arg);
    polydyn::RunOptions opts;
    opts.out_dir = out_dir;
    opts.svg = svg;
    opts.t1_override = t1;
    opts.dt_override = dt;
    const polydyn::RunResult result = polydyn::run_scenario(scenario, route, opts);
    std::cout << result.summary;
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    return kExitOk;
}

int verify_command(const std::string& scenario_arg) {
    const polydyn::Scenario scenario = polydyn::resolve_scenario(scenario_arg);
    const polydyn::VerifyReport report = polydyn::verify_scenario(scenario);
    std::cout << "verify: " << scenario.name << "\n" << report.text();
    if (!report.pass()) {
        std::cout << "verification FAILED\n";
        return kExitVerifyFailed;
    }
    std::cout << "verification passed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solvable many-body dynamics in the complex plane: closed-form "
                 "zeros-of-a-polynomial route vs direct Newtonian integration"};
    app.require_subcommand(1);

    std::string scenario_arg, route_name = "both", out_dir = ".";
    bool svg = false;
    std::optional<double> t1_override, dt_override;

    auto* run = app.add_subcommand("run", "run a scenario and write CSV/SVG artifacts");
    run->add_option("scenario", scenario_arg, "built-in name or path to a scenario JSON file")
        ->required();
    run->add_option("--route", route_name, "closed | direct | both")->default_str("both");
    run->add_option("--out", out_dir, "output directory")->default_str(".");
    run->add_flag("--svg", svg, "also emit SVG trajectory plots");
    run->add_option("--t1", t1_override, "override the scenario horizon");
    run->add_option("--dt", dt_override, "override the sample step");

    auto* verify = app.add_subcommand("verify", "run both routes and the identity checks");
    verify->add_option("scenario", scenario_arg, "built-in name or path to a scenario JSON file")
        ->required();

    auto* list = app.add_subcommand("list", "list built-in scenarios");

    try {
        app.parse(argc, argv);
        if (list->parsed()) {
            for (const auto& name : polydyn::list_scenarios()) std::cout << name << "\n";
            return kExitOk;
        }
        if (run->parsed())
            return run_command(scenario_arg, route_name, out_dir, svg, t1_override, dt_override);
        if (verify->parsed()) return verify_command(scenario_arg);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const polydyn::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const polydyn::ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const polydyn::CollisionError& e) {
        std::cerr << "collision error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const polydyn::DegenerateModesError& e) {
        std::cerr << "degenerate modes: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
