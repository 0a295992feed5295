#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "papeq/errors.hpp"
#include "papeq/pap.hpp"
#include "papeq/spectral.hpp"

namespace papeq {

// ── Bounded maps B, C : X_alpha -> X ─────────────────────────────────────────

// Diagonal bounded map with certified operator norm
// sup_n |b_n| |lambda_n|^{-alpha} (exact for the sup-type mode norms).
struct BoundedMap {
    std::vector<Complex> weights;
    double certified_norm = 0.0;

    static BoundedMap from_weights(const SpectralOperator& op, std::vector<Complex> w,
                                   double alpha) {
        if (w.size() != op.size())
            throw DomainError("BoundedMap: weight count does not match mode count");
        if (!(op.spectral_gap() > 0.0))
            throw ZeroGap("BoundedMap: certified norm needs spectral_gap > 0");
        BoundedMap b;
        b.weights = std::move(w);
        for (std::size_t i = 0; i < op.size(); ++i)
            b.certified_norm = std::max(
                b.certified_norm,
                std::abs(b.weights[i]) * std::pow(std::abs(op.lambda(i)), -alpha));
        return b;
    }

    static BoundedMap identity(const SpectralOperator& op, double alpha) {
        return from_weights(op, std::vector<Complex>(op.size(), Complex{1.0, 0.0}), alpha);
    }

    ModeVector apply(const ModeVector& x) const {
        ModeVector out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = weights[i] * x[i];
        return out;
    }

    void apply_inplace(ModeVector& x) const {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] *= weights[i];
    }
};

// ── Lipschitz nonlinear maps (componentwise catalog) ─────────────────────────

enum class MapKind { Linear, Tanh, Sine };

// N acts componentwise on real and imaginary parts with a 1-Lipschitz profile
// scaled per mode, so |N(z)_n - N(w)_n| <= s_n |z_n - w_n| exactly.
struct LipschitzMap {
    MapKind kind = MapKind::Linear;
    std::vector<double> scales;

    static double profile(MapKind k, double x) {
        switch (k) {
            case MapKind::Linear: return x;
            case MapKind::Tanh: return std::tanh(x);
            case MapKind::Sine: return std::sin(x);
        }
        return x;
    }

    ModeVector apply(const ModeVector& y) const {
        if (y.size() != scales.size())
            throw DomainError("LipschitzMap: argument length mismatch");
        ModeVector out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            out[i] = scales[i] * Complex{profile(kind, y[i].real()), profile(kind, y[i].imag())};
        return out;
    }

    void apply_inplace(ModeVector& y) const {
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = scales[i] * Complex{profile(kind, y[i].real()), profile(kind, y[i].imag())};
    }

    bool zero() const {
        for (double s : scales)
            if (s != 0.0) return false;
        return true;
    }
};

// Certified Lipschitz constant of N as a map X -> X_beta (beta = 0 gives the
// plain X -> X constant): K = sup_n |lambda_n|^beta s_n.
inline double certify_lipschitz(const SpectralOperator& op, const LipschitzMap& map,
                                double beta) {
    if (map.scales.size() != op.size())
        throw DomainError("certify_lipschitz: scale count mismatch");
    double k = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i)
        k = std::max(k, std::abs(map.scales[i]) *
                            (beta > 0.0 ? std::pow(std::abs(op.lambda(i)), beta) : 1.0));
    return k;
}

// ── Nonlinearity f(t, y) = a(t) + N(y) ───────────────────────────────────────

// Separable pseudo almost periodic nonlinearity: PAP forcing plus a certified
// Lipschitz map of the state. The forcing of f takes values in X_beta; for g
// beta is 0 (plain X).
struct Nonlinearity {
    PAPFunction forcing;
    LipschitzMap map;
    double lipschitz_K = 0.0; // certified, in the norm of the target space
    double beta = 0.0;        // target-space exponent (0 for X-valued g)

    ModeVector eval(double t, const ModeVector& y) const {
        ModeVector out = forcing.evaluate(t);
        if (out.empty()) out = zero_vector(y.size());
        const ModeVector n = map.apply(y);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += n[i];
        return out;
    }
};

inline Nonlinearity make_nonlinearity(const SpectralOperator& op, PAPFunction forcing,
                                      LipschitzMap map, double beta) {
    Nonlinearity n;
    n.forcing = std::move(forcing);
    n.map = std::move(map);
    n.beta = beta;
    n.lipschitz_K = certify_lipschitz(op, n.map, beta);
    return n;
}

// ── Problem assembly ─────────────────────────────────────────────────────────

// d/dt [u + f(t, Bu(t-p))] = A u + g(t, Cu(t-p)) in spectral coordinates.
struct ProblemSpec {
    SpectralOperator op;
    Nonlinearity f; // X_beta-valued
    Nonlinearity g; // X-valued
    BoundedMap B;
    BoundedMap C;
    double alpha = 0.5;
    double beta = 0.75;
    double delay = 0.0;
    double gamma_fraction = 0.9;

    void validate() const {
        if (!(alpha > 0.0 && alpha < beta && beta < 1.0))
            throw DomainError("ProblemSpec: need 0 < alpha < beta < 1");
        if (!(delay >= 0.0)) throw DomainError("ProblemSpec: delay must be >= 0");
        if (!(gamma_fraction > 0.0 && gamma_fraction < 1.0))
            throw DomainError("ProblemSpec: gamma_fraction must lie in (0,1)");
        check_hyperbolic(op);
        if (B.weights.size() != op.size() || C.weights.size() != op.size())
            throw DomainError("ProblemSpec: bounded-map weight count mismatch");
    }

    double lipschitz_K() const { return std::max(f.lipschitz_K, g.lipschitz_K); }
    double varpi() const { return std::max(B.certified_norm, C.certified_norm); }
};

// ── Composition with a PAP state ─────────────────────────────────────────────

struct ComposedNonlinearity {
    std::function<ModeVector(double)> h;            // t -> g(t, (Cu)(t - p))
    std::function<ModeVector(double)> candidate_ap; // AP candidate of h
};

// h(t) = a(t) + N((Cu)(t-p)) with AP candidate a_ap(t) + N((C u_ap)(t-p)).
// The residual h - candidate is expected to be AP_0 (checked by
// decompose_residual via its mean trace).
inline ComposedNonlinearity compose_nonlinearity(const Nonlinearity& gfun,
                                                 const BoundedMap& cmap, const PAPFunction& u,
                                                 double delay = 0.0) {
    ComposedNonlinearity out;
    out.h = [gfun, cmap, u, delay](double t) {
        return gfun.eval(t, cmap.apply(u.evaluate(t - delay)));
    };
    const TrigPolynomial u_ap = u.ap;
    out.candidate_ap = [gfun, cmap, u_ap, delay](double t) {
        ModeVector a = gfun.forcing.ap.dim() > 0 ? gfun.forcing.ap.evaluate(t)
                                                 : zero_vector(cmap.weights.size());
        const ModeVector n = gfun.map.apply(
            cmap.apply(u_ap.dim() > 0 ? u_ap.evaluate(t - delay)
                                      : zero_vector(cmap.weights.size())));
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += n[i];
        return a;
    };
    return out;
}

} // namespace papeq
