#pragma once

// Scenario definitions for the CLI: a parameter block in exactly one of three
// interchangeable representations, initial data, horizon and sample step.
// Built-in scenarios carry the reference parameter/initial-condition sets for
// the two- and three-particle demonstration systems.

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "polydyn/coefficient_modes.hpp"
#include "polydyn/newtonian_dynamics.hpp"
#include "polydyn/types.hpp"

namespace polydyn {

struct Scenario {
    enum class ParamKind { AlphaBetaGammaDelta, Lambda, DecayFreq };

    std::string name;
    std::size_t n = 0;
    ParamKind kind = ParamKind::AlphaBetaGammaDelta;
    CoeffParams abgd;                              // ParamKind::AlphaBetaGammaDelta
    std::vector<std::array<Complex, 4>> lambdas;   // ParamKind::Lambda
    std::vector<std::array<double, 4>> decay;      // ParamKind::DecayFreq
    std::vector<std::array<double, 4>> freq;       //
    PhaseState initial;
    double t1 = 0.0;
    double dt = 0.0;
};

inline void validate_scenario(const Scenario& s) {
    if (s.n < 1) throw ValidationError("scenario '" + s.name + "': n must be >= 1");
    const auto expect = [&](std::size_t got, const char* what) {
        if (got != s.n)
            throw ValidationError("scenario '" + s.name + "': " + what + " must have n entries");
    };
    switch (s.kind) {
        case Scenario::ParamKind::AlphaBetaGammaDelta: expect(s.abgd.size(), "parameters"); break;
        case Scenario::ParamKind::Lambda: expect(s.lambdas.size(), "lambda"); break;
        case Scenario::ParamKind::DecayFreq:
            expect(s.decay.size(), "decay_freq.a");
            expect(s.freq.size(), "decay_freq.omega");
            break;
    }
    expect(s.initial.z.size(), "initial.z");
    expect(s.initial.zdot.size(), "initial.zdot");
    expect(s.initial.w.size(), "initial.w");
    expect(s.initial.wdot.size(), "initial.wdot");
    if (!(s.t1 > 0)) throw ValidationError("scenario '" + s.name + "': t1 must be > 0");
    if (!(s.dt > 0) || s.dt > s.t1)
        throw ValidationError("scenario '" + s.name + "': dt must be in (0, t1]");
    if (s.n >= 2) {
        const double scale = 1.0 + max_abs(s.initial.z);
        if (min_pairwise_distance(s.initial.z) < kCoincidenceRel * scale)
            throw ValidationError("scenario '" + s.name + "': initial zeros must be distinct");
    }
}

// Characteristic exponents per coefficient, from whichever representation
// the scenario carries.
inline std::vector<std::array<Complex, 4>> scenario_lambdas(const Scenario& s) {
    std::vector<std::array<Complex, 4>> out(s.n);
    switch (s.kind) {
        case Scenario::ParamKind::AlphaBetaGammaDelta:
            for (std::size_t m = 0; m < s.n; ++m)
                out[m] = quartic_modes(s.abgd[m].alpha, s.abgd[m].beta, s.abgd[m].gamma,
                                       s.abgd[m].delta);
            break;
        case Scenario::ParamKind::Lambda: out = s.lambdas; break;
        case Scenario::ParamKind::DecayFreq:
            for (std::size_t m = 0; m < s.n; ++m)
                for (std::size_t k = 0; k < 4; ++k)
                    out[m][k] = Complex(-s.decay[m][k], s.freq[m][k]);
            break;
    }
    return out;
}

// ODE parameters (alpha..delta) per coefficient.
inline CoeffParams scenario_params(const Scenario& s) {
    if (s.kind == Scenario::ParamKind::AlphaBetaGammaDelta) return s.abgd;
    CoeffParams params(s.n);
    const auto lambdas = scenario_lambdas(s);
    for (std::size_t m = 0; m < s.n; ++m) params[m] = params_from_modes(lambdas[m]);
    return params;
}

inline ModeSpec scenario_modes(const Scenario& s) {
    const auto lambdas = scenario_lambdas(s);
    return fit_modes_from_roots(lambdas, s.initial.z, s.initial.zdot, s.initial.w,
                                s.initial.wdot);
}

// --- JSON loading -----------------------------------------------------------

namespace detail {

inline Complex parse_complex(const nlohmann::json& j, const std::string& where) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ValidationError(where + ": expected a number or [re, im]");
}

inline CVec parse_complex_vector(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + ": expected an array");
    CVec v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

inline std::array<Complex, 4> parse_complex_quad(const nlohmann::json& j,
                                                 const std::string& where) {
    const CVec v = parse_complex_vector(j, where);
    if (v.size() != 4) throw ValidationError(where + ": expected 4 entries");
    return {v[0], v[1], v[2], v[3]};
}

inline std::array<double, 4> parse_real_quad(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4)
        throw ValidationError(where + ": expected an array of 4 numbers");
    std::array<double, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!j[i].is_number()) throw ValidationError(where + ": expected numbers");
        out[i] = j[i].get<double>();
    }
    return out;
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j) {
    Scenario s;
    if (!j.is_object()) throw ValidationError("scenario: expected a JSON object");
    s.name = j.value("name", std::string("unnamed"));
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw ValidationError("scenario: integer field 'n' required");
    s.n = j["n"].get<std::size_t>();

    if (!j.contains("parameters") || !j["parameters"].is_object())
        throw ValidationError("scenario: object field 'parameters' required");
    const auto& p = j["parameters"];
    int reprs = 0;
    reprs += p.contains("alpha_beta_gamma_delta") ? 1 : 0;
    reprs += p.contains("lambda") ? 1 : 0;
    reprs += p.contains("decay_freq") ? 1 : 0;
    if (reprs != 1)
        throw ValidationError(
            "scenario: parameters must hold exactly one of alpha_beta_gamma_delta | lambda | "
            "decay_freq");
    if (p.contains("alpha_beta_gamma_delta")) {
        s.kind = Scenario::ParamKind::AlphaBetaGammaDelta;
        const auto& arr = p["alpha_beta_gamma_delta"];
        if (!arr.is_array()) throw ValidationError("alpha_beta_gamma_delta: expected an array");
        for (std::size_t m = 0; m < arr.size(); ++m) {
            const auto q = detail::parse_complex_quad(
                arr[m], "alpha_beta_gamma_delta[" + std::to_string(m) + "]");
            s.abgd.push_back(Quartic{q[0], q[1], q[2], q[3]});
        }
    } else if (p.contains("lambda")) {
        s.kind = Scenario::ParamKind::Lambda;
        const auto& arr = p["lambda"];
        if (!arr.is_array()) throw ValidationError("lambda: expected an array");
        for (std::size_t m = 0; m < arr.size(); ++m)
            s.lambdas.push_back(
                detail::parse_complex_quad(arr[m], "lambda[" + std::to_string(m) + "]"));
    } else {
        s.kind = Scenario::ParamKind::DecayFreq;
        const auto& df = p["decay_freq"];
        if (!df.is_object() || !df.contains("a") || !df.contains("omega"))
            throw ValidationError("decay_freq: expected an object with 'a' and 'omega'");
        const auto& a = df["a"];
        const auto& w = df["omega"];
        if (!a.is_array() || !w.is_array() || a.size() != w.size())
            throw ValidationError("decay_freq: 'a' and 'omega' must be arrays of equal length");
        for (std::size_t m = 0; m < a.size(); ++m) {
            s.decay.push_back(detail::parse_real_quad(a[m], "decay_freq.a[" + std::to_string(m) + "]"));
            s.freq.push_back(
                detail::parse_real_quad(w[m], "decay_freq.omega[" + std::to_string(m) + "]"));
        }
    }

    if (!j.contains("initial") || !j["initial"].is_object())
        throw ValidationError("scenario: object field 'initial' required");
    const auto& init = j["initial"];
    for (const char* key : {"z", "zdot", "w", "wdot"})
        if (!init.contains(key))
            throw ValidationError(std::string("scenario: initial.") + key + " required");
    s.initial.z = detail::parse_complex_vector(init["z"], "initial.z");
    s.initial.zdot = detail::parse_complex_vector(init["zdot"], "initial.zdot");
    s.initial.w = detail::parse_complex_vector(init["w"], "initial.w");
    s.initial.wdot = detail::parse_complex_vector(init["wdot"], "initial.wdot");

    if (!j.contains("t1") || !j["t1"].is_number())
        throw ValidationError("scenario: numeric field 't1' required");
    s.t1 = j["t1"].get<double>();
    s.dt = j.value("dt", s.t1 / 1024.0);

    validate_scenario(s);
    return s;
}

inline Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("scenario file " + path.string() + ": " + e.what());
    }
    return parse_scenario(j);
}

// --- Built-in scenarios ------------------------------------------------------

namespace detail {

inline Scenario make_builtin(std::string name, CoeffParams params, PhaseState init, double t1,
                             double dt) {
    Scenario s;
    s.name = std::move(name);
    s.n = params.size();
    s.kind = Scenario::ParamKind::AlphaBetaGammaDelta;
    s.abgd = std::move(params);
    s.initial = std::move(init);
    s.t1 = t1;
    s.dt = dt;
    validate_scenario(s);
    return s;
}

}  // namespace detail

// The five reference scenarios. Horizons are exact multiples of the sample
// step so that period detection can shift on the grid.
inline const std::vector<Scenario>& builtin_scenarios() {
    static const std::vector<Scenario> all = [] {
        constexpr double pi = std::numbers::pi;
        const Complex i{0.0, 1.0};
        std::vector<Scenario> v;

        // two particles, all four exponents purely oscillatory
        v.push_back(detail::make_builtin(
            "example1_n2",
            CoeffParams{{5.0 * i, 5.0, 5.0 * i, 6.0}, {5.0 * i, 5.0, 5.0 * i, 6.0}},
            PhaseState{{1.0 + i, 5.0 + i}, {1.0, 1.0}, {1.0, -i}, {i, 1.0}},
            4.0 * pi, 2.0 * pi / 512.0));

        // two decaying modes on top of an oscillatory pair
        v.push_back(detail::make_builtin(
            "example2_n2",
            CoeffParams{{-3.0, -3.0, -3.0, -2.0}, {-3.0, -3.0, -3.0, -2.0}},
            PhaseState{{-2.0 - i, 2.0 + i}, {1.0, 1.0}, {1.0, -i}, {i, 1.0}},
            13.0 * pi, 2.0 * pi / 256.0));

        // incommensurable undamped frequencies (1 and pi)
        v.push_back(detail::make_builtin(
            "example3_n2",
            CoeffParams{{-3.0 + (pi - 1.0) * i, -(pi + 2.0) + 3.0 * (pi - 1.0) * i,
                         -3.0 * pi + 2.0 * (pi - 1.0) * i, -2.0 * pi},
                        {-3.0 + (pi - 1.0) * i, -(pi + 2.0) + 3.0 * (pi - 1.0) * i,
                         -3.0 * pi + 2.0 * (pi - 1.0) * i, -2.0 * pi}},
            PhaseState{{-2.0 - i, 2.0 + i}, {1.0, -1.0}, {i, -i}, {1.0, -1.0}},
            13.0 * pi, 2.0 * pi / 256.0));

        // growing modes: one zero escapes, the other collapses toward 0
        v.push_back(detail::make_builtin(
            "example4_n2_scattering",
            CoeffParams{{0.222 + 1.4 * i, 0.41208 - 0.2208 * i, -0.038436 - 0.018968 * i,
                         0.000866464 + 0.0010224 * i},
                        {0.172 + 1.1 * i, 0.06952 - 0.1512 * i, -0.006696 + 0.026376 * i,
                         0.000104896 - 0.00047584 * i}},
            PhaseState{{-2.0 + 3.0 * i, 3.0 + 2.0 * i},
                       {7.0, -5.0},
                       {2.0 + 4.2 * i, 3.1 * i},
                       {4.5, 2.4}},
            200.0, 0.05));

        // three particles, oscillatory exponents
        v.push_back(detail::make_builtin(
            "example1_n3",
            CoeffParams{{5.0 * i, 5.0, 5.0 * i, 6.0},
                        {4.0 * i, -1.0, 16.0 * i, 12.0},
                        {0.0, -5.0, 0.0, -4.0}},
            PhaseState{{-1.45 + 1.1 * i, 5.1 + 0.8 * i, 2.5 - 0.2 * i},
                       {0.9, 1.2, -1.04},
                       {1.23, -2.26 * i, 1.32 * i},
                       {0.84 * i, 2.16, -1.12}},
            6.0 * pi, 2.0 * pi / 256.0));
        return v;
    }();
    return all;
}

inline std::vector<std::string> list_scenarios() {
    std::vector<std::string> names;
    for (const auto& s : builtin_scenarios()) names.push_back(s.name);
    return names;
}

// Resolve a name to a built-in, or load a JSON file when the argument names
// an existing file.
inline Scenario resolve_scenario(const std::string& name_or_path) {
    for (const auto& s : builtin_scenarios())
        if (s.name == name_or_path) return s;
    if (std::filesystem::exists(name_or_path)) return load_scenario_file(name_or_path);
    throw ValidationError("unknown scenario '" + name_or_path +
                          "' (not a built-in name and not a file)");
}

}  // namespace polydyn
