#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "papeq/equations.hpp"
#include "papeq/errors.hpp"
#include "papeq/mild.hpp"
#include "papeq/pap.hpp"
#include "papeq/problem.hpp"

namespace papeq {

using nlohmann::json;

// ── Primitive readers ────────────────────────────────────────────────────────

namespace cfg {

inline json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

inline double number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError("config: '" + key + "' must be a number");
    return j.at(key).get<double>();
}

inline double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("config: missing required key '" + key + "'");
    if (!j.at(key).is_number()) throw ConfigError("config: '" + key + "' must be a number");
    return j.at(key).get<double>();
}

inline std::string text(const json& j, const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<std::string>();
}

inline std::vector<Complex> complex_list(const json& j) {
    std::vector<Complex> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2)
            throw ConfigError("config: complex entries must be [re, im] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

inline ErgodicKind ergodic_kind(const std::string& s) {
    if (s == "exp-decay") return ErgodicKind::ExpDecay;
    if (s == "rational-decay") return ErgodicKind::RationalDecay;
    if (s == "bump") return ErgodicKind::Bump;
    throw ConfigError("config: unknown ergodic kind '" + s + "'");
}

inline MapKind map_kind(const std::string& s) {
    if (s == "linear") return MapKind::Linear;
    if (s == "tanh") return MapKind::Tanh;
    if (s == "sine") return MapKind::Sine;
    throw ConfigError("config: unknown map kind '" + s + "'");
}

} // namespace cfg

// ── Operator / problem loading ───────────────────────────────────────────────

struct LoadedProblem {
    ProblemSpec problem;
    std::optional<HeatModel> heat;
    std::optional<TransportModel> transport;
};

namespace cfg {

inline SpectralOperator load_operator(const json& j, std::optional<HeatModel>& heat,
                                      std::optional<TransportModel>& transport) {
    const std::string model = text(j, "model", "explicit");
    if (model == "heat") {
        HeatModel m;
        m.sigma = require_number(j, "sigma");
        m.n_modes = static_cast<int>(number(j, "n_modes", 16));
        heat = m;
        return heat_operator(m);
    }
    if (model == "transport") {
        TransportModel m;
        m.sigma = require_number(j, "sigma");
        m.n_half_modes = static_cast<int>(number(j, "n_modes", 8));
        transport = m;
        return transport_operator(m);
    }
    if (model != "explicit") throw ConfigError("config: unknown operator model '" + model + "'");
    if (!j.contains("eigenvalues"))
        throw ConfigError("config: explicit operator needs 'eigenvalues'");
    return SpectralOperator::from_eigenvalues(complex_list(j.at("eigenvalues")),
                                              number(j, "omega", 0.0),
                                              number(j, "theta", 0.75 * kPi),
                                              number(j, "sector_bound", 1.0));
}

// AP terms come either as {freq, amplitude, waveform, mode} riding the decay
// profile, or as a raw complex term {freq, coeff}.
inline void load_ap_terms(const json& arr, const SpectralOperator& op, double beta,
                          TrigPolynomial& ap) {
    for (const auto& term : arr) {
        const double freq = require_number(term, "freq");
        if (term.contains("coeff")) {
            auto c = complex_list(term.at("coeff"));
            if (c.size() != op.size()) throw ConfigError("config: AP coeff length mismatch");
            ap.add_term(freq, c);
            continue;
        }
        const double amp = number(term, "amplitude", 1.0);
        const int mode = static_cast<int>(number(term, "mode", -1));
        const auto w = detail::term_profile(op, beta, amp, mode);
        if (text(term, "waveform", "cos") == "sin")
            ap.add_real_sine(freq, w);
        else
            ap.add_real_cosine(freq, w);
    }
}

inline void load_erg_terms(const json& arr, const SpectralOperator& op, double beta,
                           std::vector<ErgodicTerm>& erg) {
    for (const auto& term : arr) {
        ErgodicTerm e;
        e.kind = ergodic_kind(text(term, "kind", "exp-decay"));
        e.rate = number(term, "rate", 1.0);
        e.center = number(term, "center", 0.0);
        e.width = number(term, "width", 1.0);
        if (term.contains("coeff")) {
            e.coeff = complex_list(term.at("coeff"));
            if (e.coeff.size() != op.size())
                throw ConfigError("config: ergodic coeff length mismatch");
        } else {
            const auto w = detail::term_profile(
                op, beta, number(term, "amplitude", 1.0),
                static_cast<int>(number(term, "mode", -1)));
            e.coeff.assign(w.begin(), w.end());
        }
        e.validate();
        erg.push_back(std::move(e));
    }
}

inline PAPFunction load_pap(const json& j, const SpectralOperator& op, double beta) {
    PAPFunction f;
    f.ap = TrigPolynomial(op.size());
    if (j.contains("ap")) load_ap_terms(j.at("ap"), op, beta, f.ap);
    if (j.contains("ergodic")) load_erg_terms(j.at("ergodic"), op, beta, f.erg);
    return f;
}

// Nonlinearity section: {"map": {"kind","scale"}, "forcing": {...}}. The f
// side scales per mode as K |lambda|^{-beta} so its certified constant into
// X_beta equals the configured scale; the g side uses the plain scale.
inline Nonlinearity load_nonlinearity(const json& j, const SpectralOperator& op, double beta,
                                      bool into_beta) {
    LipschitzMap map;
    double scale = 0.0;
    if (j.contains("map")) {
        const auto& m = j.at("map");
        map.kind = map_kind(text(m, "kind", "linear"));
        scale = number(m, "scale", 0.0);
    }
    map.scales.resize(op.size());
    for (std::size_t i = 0; i < op.size(); ++i)
        map.scales[i] =
            into_beta ? scale * std::pow(std::abs(op.lambda(i)), -beta) : scale;

    PAPFunction forcing;
    forcing.ap = TrigPolynomial(op.size());
    if (j.contains("forcing")) forcing = load_pap(j.at("forcing"), op, beta);
    return make_nonlinearity(op, std::move(forcing), std::move(map), into_beta ? beta : 0.0);
}

inline BoundedMap load_bounded_map(const json& j, const std::string& key,
                                   const SpectralOperator& op, double alpha) {
    if (!j.contains(key)) return BoundedMap::identity(op, alpha);
    const auto& m = j.at(key);
    if (m.is_string()) {
        if (m.get<std::string>() == "identity") return BoundedMap::identity(op, alpha);
        throw ConfigError("config: bounded map must be 'identity' or a weight list");
    }
    return BoundedMap::from_weights(op, complex_list(m), alpha);
}

} // namespace cfg

inline LoadedProblem load_problem(const json& root) {
    if (!root.contains("operator")) throw ConfigError("config: missing 'operator' section");
    LoadedProblem lp;
    SpectralOperator op = cfg::load_operator(root.at("operator"), lp.heat, lp.transport);

    ProblemSpec p;
    p.alpha = cfg::number(root, "alpha", 0.5);
    p.beta = cfg::number(root, "beta", 0.75);
    p.delay = cfg::number(root, "delay", 0.0);
    p.gamma_fraction = cfg::number(root, "gamma_fraction", 0.9);
    p.op = std::move(op);
    p.B = cfg::load_bounded_map(root, "B", p.op, p.alpha);
    p.C = cfg::load_bounded_map(root, "C", p.op, p.alpha);
    p.f = root.contains("f")
              ? cfg::load_nonlinearity(root.at("f"), p.op, p.beta, /*into_beta=*/true)
              : cfg::load_nonlinearity(json::object(), p.op, p.beta, true);
    p.g = root.contains("g")
              ? cfg::load_nonlinearity(root.at("g"), p.op, p.beta, /*into_beta=*/false)
              : cfg::load_nonlinearity(json::object(), p.op, p.beta, false);
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: invalid problem: ") + e.what());
    }
    lp.problem = std::move(p);
    return lp;
}

inline SolverOptions load_solver_options(const json& root) {
    SolverOptions o;
    if (!root.contains("solver")) return o;
    const auto& s = root.at("solver");
    o.tol_trunc = cfg::number(s, "tol_trunc", o.tol_trunc);
    o.grid_spacing = cfg::number(s, "grid_spacing", o.grid_spacing);
    o.window_override = cfg::number(s, "window", 0.0);
    return o;
}

// Deterministic random PAP initial guess: fixed frequency triple with seeded
// coefficients plus one ergodic bump of activity near t = 0.
inline PAPFunction random_pap(std::size_t n_modes, std::uint64_t seed, double amplitude = 0.5) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PAPFunction u;
    u.ap = TrigPolynomial(n_modes);
    for (double freq : {0.9, 1.7, 2.6}) {
        ModeVector c(n_modes);
        for (auto& v : c) v = amplitude * Complex{gauss(rng), gauss(rng)};
        u.ap.add_term(freq, c);
        ModeVector cc(n_modes);
        for (std::size_t i = 0; i < n_modes; ++i) cc[i] = std::conj(c[i]);
        u.ap.add_term(-freq, cc);
    }
    ErgodicTerm e;
    e.kind = ErgodicKind::ExpDecay;
    e.rate = 1.0;
    e.coeff.resize(n_modes);
    for (auto& v : e.coeff) v = amplitude * Complex{gauss(rng), gauss(rng)};
    u.erg.push_back(std::move(e));
    return u;
}

} // namespace papeq
