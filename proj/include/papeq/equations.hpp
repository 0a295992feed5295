#pragma once

#include <cmath>
#include <vector>

#include "papeq/errors.hpp"
#include "papeq/problem.hpp"
#include "papeq/spectral.hpp"

namespace papeq {

// ── Models ───────────────────────────────────────────────────────────────────

// u_t = u_xx + sigma u on [0,1] with Dirichlet ends: eigenvalues
// -n^2 pi^2 + sigma over sin(n pi x), n = 1..n_modes.
struct HeatModel {
    double sigma = 1.0;
    int n_modes = 16;
    int spatial_points = 512;
};

// u_t = u_x + sigma u: eigenvalues 2 n pi i + sigma over e^{2 n pi i x},
// n = -N..N (mode 0 included). Entirely stable for sigma < 0, entirely
// unstable for sigma > 0.
struct TransportModel {
    double sigma = -0.5;
    int n_half_modes = 8;
};

inline SpectralOperator heat_operator(const HeatModel& m) {
    if (m.n_modes < 1) throw DomainError("heat_operator: need n_modes >= 1");
    // The guard rejects exactly the parameters the existence theorem excludes:
    // sigma = n^2 pi^2 makes the spectrum meet the imaginary axis.
    const int n_guard = std::max(
        m.n_modes, static_cast<int>(std::ceil(std::sqrt(std::max(m.sigma, 0.0)) / kPi)) + 1);
    for (int n = 1; n <= n_guard; ++n)
        if (std::abs(m.sigma - n * kPi * n * kPi) <= 1e-9)
            throw NotHyperbolic("heat_operator: sigma = n^2 pi^2 within tolerance");
    std::vector<Eigenmode> modes;
    modes.reserve(m.n_modes);
    for (int n = 1; n <= m.n_modes; ++n)
        modes.push_back({n, Complex{-n * kPi * n * kPi + m.sigma, 0.0}});
    return SpectralOperator(std::move(modes), /*omega=*/m.sigma, /*theta=*/0.75 * kPi);
}

inline SpectralOperator transport_operator(const TransportModel& m) {
    if (m.n_half_modes < 0) throw DomainError("transport_operator: need N >= 0");
    if (std::abs(m.sigma) <= 1e-9)
        throw NotHyperbolic("transport_operator: sigma = 0, spectrum meets i R");
    std::vector<Eigenmode> modes;
    for (int n = -m.n_half_modes; n <= m.n_half_modes; ++n)
        modes.push_back({n, Complex{m.sigma, 2.0 * kPi * n}});
    return SpectralOperator(std::move(modes), /*omega=*/m.sigma, /*theta=*/0.75 * kPi);
}

// ── Catalog forcing descriptions ─────────────────────────────────────────────

// One AP forcing term: a cosine or sine at `freq`. With mode >= 0 the
// coefficient is amplitude * e_mode; otherwise the amplitude rides the
// built-in decay profile over all modes.
struct ApForcingTerm {
    double freq = 1.0;
    double amplitude = 1.0;
    bool sine = false;
    int mode = -1;
};

struct ErgForcingTerm {
    ErgodicKind kind = ErgodicKind::ExpDecay;
    double rate = 1.0;
    double amplitude = 1.0;
    int mode = -1;
    double center = 0.0;
    double width = 1.0;
};

struct ForcingSpec {
    std::vector<ApForcingTerm> f_ap, g_ap;
    std::vector<ErgForcingTerm> f_erg, g_erg;
    MapKind f_map = MapKind::Tanh;
    MapKind g_map = MapKind::Tanh;
};

namespace detail {

// Coefficient decay |a_n| <= C n^{-2 beta - 1}, keeping the fractional
// beta-norm of every forcing value finite with margin.
inline std::vector<double> decay_profile(const SpectralOperator& op, double beta,
                                         double amplitude) {
    std::vector<double> w(op.size());
    for (std::size_t i = 0; i < op.size(); ++i) {
        const double label =
            std::max(1.0, std::abs(static_cast<double>(op.modes()[i].index)));
        w[i] = amplitude * std::pow(label, -(2.0 * beta + 1.0));
    }
    return w;
}

inline std::vector<double> term_profile(const SpectralOperator& op, double beta,
                                        double amplitude, int mode) {
    if (mode < 0) return decay_profile(op, beta, amplitude);
    if (mode >= static_cast<int>(op.size()))
        throw DomainError("forcing: mode index out of range");
    std::vector<double> w(op.size(), 0.0);
    w[static_cast<std::size_t>(mode)] = amplitude;
    return w;
}

inline PAPFunction build_forcing(const SpectralOperator& op, double beta,
                                 const std::vector<ApForcingTerm>& ap,
                                 const std::vector<ErgForcingTerm>& erg) {
    PAPFunction f;
    f.ap = TrigPolynomial(op.size());
    for (const auto& t : ap) {
        const auto w = term_profile(op, beta, t.amplitude, t.mode);
        if (t.sine)
            f.ap.add_real_sine(t.freq, w);
        else
            f.ap.add_real_cosine(t.freq, w);
    }
    for (const auto& t : erg) {
        ErgodicTerm e;
        e.kind = t.kind;
        e.rate = t.rate;
        e.center = t.center;
        e.width = t.width;
        const auto w = term_profile(op, beta, t.amplitude, t.mode);
        e.coeff.assign(w.begin(), w.end());
        e.validate();
        f.erg.push_back(std::move(e));
    }
    return f;
}

// Finite beta-norm of every forcing coefficient, checked at build time.
inline void check_beta_norm(const SpectralOperator& op, const PAPFunction& f, double beta) {
    const AlphaSpaceSpec spec(beta, AlphaFlavor::FractionalPower);
    for (const auto& t : f.ap.terms())
        if (!std::isfinite(alpha_norm(op, t.coeff, spec)))
            throw DomainError("forcing: AP coefficient has infinite beta-norm");
    for (const auto& e : f.erg)
        if (!std::isfinite(alpha_norm(op, e.coeff, spec)))
            throw DomainError("forcing: ergodic coefficient has infinite beta-norm");
}

inline ProblemSpec assemble(SpectralOperator op, double alpha, double beta, double K,
                            double delay, const ForcingSpec& spec, double gamma_fraction) {
    ProblemSpec p;
    p.op = std::move(op);
    p.alpha = alpha;
    p.beta = beta;
    p.delay = delay;
    p.gamma_fraction = gamma_fraction;
    p.B = BoundedMap::identity(p.op, alpha);
    p.C = BoundedMap::identity(p.op, alpha);

    // f maps into X_beta: per-mode scales K |lambda|^{-beta} certify exactly K.
    LipschitzMap fmap;
    fmap.kind = spec.f_map;
    fmap.scales.resize(p.op.size());
    for (std::size_t i = 0; i < p.op.size(); ++i)
        fmap.scales[i] = K * std::pow(std::abs(p.op.lambda(i)), -beta);
    LipschitzMap gmap;
    gmap.kind = spec.g_map;
    gmap.scales.assign(p.op.size(), K);

    p.f = make_nonlinearity(p.op, build_forcing(p.op, beta, spec.f_ap, spec.f_erg), fmap, beta);
    p.g = make_nonlinearity(p.op, build_forcing(p.op, beta, spec.g_ap, spec.g_erg), gmap, 0.0);
    check_beta_norm(p.op, p.f.forcing, beta);
    check_beta_norm(p.op, p.g.forcing, beta);
    p.validate();
    return p;
}

} // namespace detail

// Heat equation with delay: lambda_n = -n^2 pi^2 + sigma, identity B and C,
// catalog nonlinearities scaled so both certified Lipschitz constants equal K.
inline ProblemSpec build_heat(const HeatModel& m, double alpha, double beta, double K,
                              double delay, const ForcingSpec& spec,
                              double gamma_fraction = 0.9) {
    return detail::assemble(heat_operator(m), alpha, beta, K, delay, spec, gamma_fraction);
}

// Transport equation with delay: lambda_n = 2 n pi i + sigma, n = -N..N.
inline ProblemSpec build_transport(const TransportModel& m, double alpha, double beta,
                                   double K, double delay, const ForcingSpec& spec,
                                   double gamma_fraction = 0.9) {
    return detail::assemble(transport_operator(m), alpha, beta, K, delay, spec,
                            gamma_fraction);
}

// ── Physical-space synthesis ─────────────────────────────────────────────────

// Heat eigenbasis synthesis sum_n x_n sin(n pi x); vanishes at both ends.
inline std::vector<double> to_physical(const HeatModel& m, const ModeVector& x,
                                       const std::vector<double>& grid) {
    if (x.size() != static_cast<std::size_t>(m.n_modes))
        throw DomainError("to_physical: coefficient count mismatch");
    std::vector<double> out;
    out.reserve(grid.size());
    for (double xx : grid) {
        if (xx < 0.0 || xx > 1.0) throw DomainError("to_physical: grid point outside [0,1]");
        Complex v{0.0, 0.0};
        for (int n = 1; n <= m.n_modes; ++n) v += x[n - 1] * std::sin(n * kPi * xx);
        out.push_back(v.real());
    }
    return out;
}

// Transport synthesis sum_n x_n e^{2 n pi i x}; real for conjugate-symmetric
// coefficients.
inline std::vector<double> to_physical(const TransportModel& m, const ModeVector& x,
                                       const std::vector<double>& grid) {
    const int N = m.n_half_modes;
    if (x.size() != static_cast<std::size_t>(2 * N + 1))
        throw DomainError("to_physical: coefficient count mismatch");
    std::vector<double> out;
    out.reserve(grid.size());
    for (double xx : grid) {
        if (xx < 0.0 || xx > 1.0) throw DomainError("to_physical: grid point outside [0,1]");
        Complex v{0.0, 0.0};
        for (int n = -N; n <= N; ++n)
            v += x[static_cast<std::size_t>(n + N)] * std::polar(1.0, 2.0 * kPi * n * xx);
        out.push_back(v.real());
    }
    return out;
}

inline std::vector<double> uniform_unit_grid(int points) {
    std::vector<double> g(points);
    for (int k = 0; k < points; ++k) g[k] = static_cast<double>(k) / (points - 1);
    return g;
}

} // namespace papeq
