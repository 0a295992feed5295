#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "papeq/errors.hpp"

namespace papeq {

using Complex = std::complex<double>;
using ModeVector = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;

// Base-space norm: sup over mode coefficients, mirroring the sup norm of the
// C[0,1] examples carried into spectral coordinates.
inline double sup_norm(const ModeVector& x) {
    double m = 0.0;
    for (const auto& c : x) m = std::max(m, std::abs(c));
    return m;
}

inline ModeVector zero_vector(std::size_t n) { return ModeVector(n, Complex{0.0, 0.0}); }

inline ModeVector basis_vector(std::size_t n, std::size_t k) {
    ModeVector v(n, Complex{0.0, 0.0});
    v[k] = Complex{1.0, 0.0};
    return v;
}

// ── Operator model ───────────────────────────────────────────────────────────

// One spectral point of the operator.
struct Eigenmode {
    int index = 0;
    Complex lambda{0.0, 0.0};
};

enum class SpectralPart { Whole, Stable, Unstable };

// Diagonal sectorial operator: a finite eigenvalue list over an abstract
// orthonormal-like mode basis, plus the sector metadata (omega, theta, M).
// All semigroup and projection calculus is exact per mode.
class SpectralOperator {
  public:
    SpectralOperator() = default;

    SpectralOperator(std::vector<Eigenmode> modes, double omega = 0.0,
                     double theta = 0.75 * kPi, double sector_bound = 1.0)
        : modes_(std::move(modes)), omega_(omega), theta_(theta),
          sector_bound_(sector_bound) {
        if (!(theta_ > 0.5 * kPi && theta_ < kPi))
            throw DomainError("SpectralOperator: theta must lie in (pi/2, pi)");
        spectral_gap_ = std::numeric_limits<double>::infinity();
        for (const auto& m : modes_) {
            if (!std::isfinite(m.lambda.real()) || !std::isfinite(m.lambda.imag()))
                throw DomainError("SpectralOperator: eigenvalue must be finite");
            spectral_gap_ = std::min(spectral_gap_, std::abs(m.lambda));
        }
        if (modes_.empty()) spectral_gap_ = 0.0;
    }

    static SpectralOperator from_eigenvalues(const std::vector<Complex>& lambdas,
                                             double omega = 0.0,
                                             double theta = 0.75 * kPi,
                                             double sector_bound = 1.0) {
        std::vector<Eigenmode> m;
        m.reserve(lambdas.size());
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            m.push_back({static_cast<int>(i), lambdas[i]});
        return SpectralOperator(std::move(m), omega, theta, sector_bound);
    }

    std::size_t size() const { return modes_.size(); }
    const std::vector<Eigenmode>& modes() const { return modes_; }
    Complex lambda(std::size_t i) const { return modes_[i].lambda; }
    double omega() const { return omega_; }
    double theta() const { return theta_; }
    double sector_bound() const { return sector_bound_; }
    double spectral_gap() const { return spectral_gap_; }

    bool is_stable(std::size_t i) const { return modes_[i].lambda.real() < 0.0; }
    bool is_unstable(std::size_t i) const { return modes_[i].lambda.real() > 0.0; }

    bool in_part(std::size_t i, SpectralPart part) const {
        switch (part) {
            case SpectralPart::Whole: return true;
            case SpectralPart::Stable: return is_stable(i);
            case SpectralPart::Unstable: return is_unstable(i);
        }
        return false;
    }

    bool has_part(SpectralPart part) const {
        for (std::size_t i = 0; i < size(); ++i)
            if (in_part(i, part)) return true;
        return false;
    }

    void check_size(const ModeVector& x, const char* who) const {
        if (x.size() != modes_.size())
            throw DomainError(std::string(who) + ": vector length does not match mode count");
    }

  private:
    std::vector<Eigenmode> modes_;
    double omega_ = 0.0;
    double theta_ = 0.75 * kPi;
    double sector_bound_ = 1.0;
    double spectral_gap_ = 0.0;
};

// ── Sectoriality and dichotomy checks ────────────────────────────────────────

// Certifies the resolvent bound ||R(l,A)|| <= M/|l-omega| on the boundary rays
// arg(l-omega) = +-theta. For a diagonal operator the resolvent norm equals
// 1/dist(l, spectrum), so the certified M is the sampled supremum of
// |l-omega| / dist(l, spectrum). Throws SpectrumInSector if an eigenvalue
// lies inside S_{theta,omega}.
inline double check_sectorial(const SpectralOperator& op, double theta, double omega,
                              int boundary_samples) {
    if (!(theta > 0.5 * kPi && theta < kPi))
        throw DomainError("check_sectorial: theta must lie in (pi/2, pi)");
    if (boundary_samples < 16)
        throw DomainError("check_sectorial: need at least 16 boundary samples");
    if (op.size() == 0)
        throw DomainError("check_sectorial: empty operator");

    for (const auto& m : op.modes()) {
        const Complex d = m.lambda - omega;
        if (std::abs(d) > 0.0 && std::abs(std::arg(d)) < theta)
            throw SpectrumInSector("check_sectorial: eigenvalue inside S_{theta,omega}");
    }

    // Radial sampling range bracketing all spectral distances from the vertex.
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (const auto& m : op.modes()) {
        const double d = std::abs(m.lambda - omega);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    const double r_lo = 1e-3 * std::max(dmin, 1e-8);
    const double r_hi = 1e3 * std::max(dmax, 1.0);

    double worst = 0.0;
    const double step = std::log(r_hi / r_lo) / (boundary_samples - 1);
    for (int side = 0; side < 2; ++side) {
        const double ang = side == 0 ? theta : -theta;
        const Complex dir = std::polar(1.0, ang);
        for (int k = 0; k < boundary_samples; ++k) {
            const double r = r_lo * std::exp(step * k);
            const Complex l = omega + r * dir;
            double dist = std::numeric_limits<double>::infinity();
            for (const auto& m : op.modes())
                dist = std::min(dist, std::abs(l - m.lambda));
            worst = std::max(worst, r / dist);
        }
    }
    return worst;
}

// delta = min |Re lambda|. Throws NotHyperbolic when the spectrum comes
// within tol of the imaginary axis (sigma(A) meets iR).
inline double check_hyperbolic(const SpectralOperator& op, double tol = 0.0) {
    if (op.size() == 0)
        throw DomainError("check_hyperbolic: empty operator");
    double delta = std::numeric_limits<double>::infinity();
    for (const auto& m : op.modes()) {
        const double re = std::abs(m.lambda.real());
        if (re <= tol)
            throw NotHyperbolic("check_hyperbolic: |Re lambda| <= tol for some mode");
        delta = std::min(delta, re);
    }
    return delta;
}

// ── Semigroup and projections ────────────────────────────────────────────────

namespace detail {
inline void check_part_domain(double t, SpectralPart part, const char* who) {
    if (part == SpectralPart::Stable && t < 0.0)
        throw DomainError(std::string(who) + ": stable part needs t >= 0");
    if (part == SpectralPart::Unstable && t > 0.0)
        throw DomainError(std::string(who) + ": unstable part needs t <= 0");
    if (part == SpectralPart::Whole && t < 0.0)
        throw DomainError(std::string(who) + ": whole semigroup needs t >= 0");
}
} // namespace detail

// T(t) restricted to the selected part; on the unstable range and t <= 0 this
// is the backward extension T(t) := (T(-t))^{-1}, which per mode is again
// e^{lambda t}.
inline ModeVector semigroup_apply(const SpectralOperator& op, double t, const ModeVector& x,
                                  SpectralPart part) {
    op.check_size(x, "semigroup_apply");
    detail::check_part_domain(t, part, "semigroup_apply");
    ModeVector out(op.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < op.size(); ++i)
        if (op.in_part(i, part)) out[i] = std::exp(op.lambda(i) * t) * x[i];
    return out;
}

// A T(t) on the selected part: coefficients lambda_n e^{lambda_n t} x_n.
inline ModeVector a_semigroup_apply(const SpectralOperator& op, double t, const ModeVector& x,
                                    SpectralPart part) {
    op.check_size(x, "a_semigroup_apply");
    detail::check_part_domain(t, part, "a_semigroup_apply");
    ModeVector out(op.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < op.size(); ++i)
        if (op.in_part(i, part)) out[i] = op.lambda(i) * std::exp(op.lambda(i) * t) * x[i];
    return out;
}

// ── Intermediate-space norms ─────────────────────────────────────────────────

enum class AlphaFlavor { FractionalPower, RealInterpolation };

struct AlphaSpaceSpec {
    double alpha = 0.5;
    AlphaFlavor flavor = AlphaFlavor::FractionalPower;

    AlphaSpaceSpec() = default;
    AlphaSpaceSpec(double a, AlphaFlavor f) : alpha(a), flavor(f) {
        if (!(a > 0.0 && a < 1.0))
            throw DomainError("AlphaSpaceSpec: alpha must lie in (0,1)");
    }
};

// Log grid used by the real-interpolation seminorm sup_{0<t<=1} t^{1-a}||AT(t)x||.
inline std::vector<double> interpolation_time_grid(int points = 200, double t_min = 1e-6) {
    std::vector<double> g(points);
    const double step = std::log(1.0 / t_min) / (points - 1);
    for (int k = 0; k < points; ++k) g[k] = t_min * std::exp(step * k);
    g.back() = 1.0;
    return g;
}

inline double alpha_norm(const SpectralOperator& op, const ModeVector& x,
                         const AlphaSpaceSpec& spec) {
    op.check_size(x, "alpha_norm");
    if (spec.flavor == AlphaFlavor::FractionalPower) {
        if (!(op.spectral_gap() > 0.0))
            throw ZeroGap("alpha_norm: fractional-power flavor needs spectral_gap > 0");
        double m = 0.0;
        for (std::size_t i = 0; i < op.size(); ++i)
            m = std::max(m, std::pow(std::abs(op.lambda(i)), spec.alpha) * std::abs(x[i]));
        return m;
    }
    // D_A(alpha,inf): ||x|| + sup_{0<t<=1} t^{1-alpha} ||A T(t) x||, the sup
    // taken over a fixed logarithmic grid.
    double semi = 0.0;
    for (double t : interpolation_time_grid()) {
        double n = 0.0;
        for (std::size_t i = 0; i < op.size(); ++i) {
            const Complex l = op.lambda(i);
            n = std::max(n, std::abs(l) * std::exp(l.real() * t) * std::abs(x[i]));
        }
        semi = std::max(semi, std::pow(t, 1.0 - spec.alpha) * n);
    }
    return sup_norm(x) + semi;
}

// ── Dichotomy constants ──────────────────────────────────────────────────────

// Bundle feeding the contraction-constant formula. Suprema over an empty
// stable/unstable part are 0 by convention.
struct DichotomyConstants {
    double M = 0.0;       // (hyP)/(hyQ) bound
    double delta = 0.0;   // dichotomy gap, min |Re lambda|
    double gamma = 0.0;   // decay rate, 0 < gamma <= delta
    double M_alpha = 0.0; // (hyP*) constant M(alpha)
    double c_alpha = 0.0; // (hyQ*) constant c(alpha)
    double c_beta = 0.0;  // shared constant of the AT estimates
    double k_alpha = 0.0; // embedding bound of X_beta into X_alpha
};

namespace detail {
// sup_{t>0} t^m e^{-a t} = (m/(a e))^m for m, a > 0.
inline double power_exp_supremum(double m, double a) {
    return std::pow(m / (a * 2.71828182845904523536), m);
}
} // namespace detail

// Closed-form per-mode suprema for the six dichotomy estimates, with
// gamma = gamma_fraction * delta. Empty parts contribute 0.
inline DichotomyConstants estimate_constants(const SpectralOperator& op, double alpha,
                                             double beta, double gamma_fraction = 0.9) {
    if (!(alpha > 0.0 && alpha < beta && beta < 1.0))
        throw DomainError("estimate_constants: need 0 < alpha < beta < 1");
    if (!(gamma_fraction > 0.0 && gamma_fraction < 1.0))
        throw DomainError("estimate_constants: gamma_fraction must lie in (0,1)");

    DichotomyConstants c;
    c.delta = check_hyperbolic(op);
    c.gamma = gamma_fraction * c.delta;

    const double m_exp = 1.0 + alpha - beta; // exponent of the (beta2) kernel
    for (std::size_t i = 0; i < op.size(); ++i) {
        const Complex l = op.lambda(i);
        const double abs_l = std::abs(l);
        if (op.is_stable(i)) {
            const double a = std::abs(l.real()) - c.gamma; // positive: gamma < delta
            c.M = std::max(c.M, 1.0);
            c.M_alpha = std::max(c.M_alpha, std::pow(abs_l, alpha) *
                                                detail::power_exp_supremum(alpha, a));
            c.c_beta = std::max(c.c_beta, std::pow(abs_l, m_exp) *
                                              detail::power_exp_supremum(m_exp, a));
        } else {
            c.M = std::max(c.M, 1.0);
            c.c_alpha = std::max(c.c_alpha, std::pow(abs_l, alpha));
            c.c_beta = std::max(c.c_beta, std::pow(abs_l, m_exp));
        }
    }

    if (!(op.spectral_gap() > 0.0))
        throw ZeroGap("estimate_constants: k(alpha) needs spectral_gap > 0");
    c.k_alpha = std::pow(op.spectral_gap(), alpha - beta);
    return c;
}

// Certified constant of the interpolation inequality
// ||x||_alpha <= c0 ||x||^{1-alpha} (||x|| + ||Ax||)^alpha.
// Fractional flavor: c0 = 1 exactly. Real interpolation: per-mode closed form.
inline double extrap_constant(const SpectralOperator& op, double alpha, AlphaFlavor flavor) {
    if (flavor == AlphaFlavor::FractionalPower) return 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) {
        const Complex l = op.lambda(i);
        // s = sup_{0<t<=1} t^{1-alpha} |lambda| e^{Re lambda * t}
        double s;
        if (l.real() < 0.0) {
            const double tstar = std::min(1.0, (1.0 - alpha) / std::abs(l.real()));
            s = std::abs(l) * std::pow(tstar, 1.0 - alpha) * std::exp(l.real() * tstar);
        } else {
            s = std::abs(l) * std::exp(l.real());
        }
        worst = std::max(worst, s / std::pow(1.0 + std::abs(l), alpha));
    }
    return 1.0 + worst;
}

// The (analy) bounds: M0 = sup_{t>0} e^{-omega t} ||T(t)||,
// M1 = sup_{t>0} e^{-omega t} ||t (A - omega) T(t)||, closed form per mode.
// Not used downstream; housed for completeness of the estimate set.
inline std::pair<double, double> analyticity_bounds(const SpectralOperator& op, double omega) {
    double m0 = 0.0, m1 = 0.0;
    for (const auto& m : op.modes()) {
        const double re = m.lambda.real();
        if (re > omega)
            throw DomainError("analyticity_bounds: need Re lambda <= omega for all modes");
        m0 = std::max(m0, 1.0); // attained at t -> 0
        const double a = omega - re;
        const double b = std::abs(m.lambda - omega);
        if (a > 0.0)
            m1 = std::max(m1, b / (2.71828182845904523536 * a));
    }
    return {m0, m1};
}

// ── Estimate verification ────────────────────────────────────────────────────

struct VerifyGrid {
    double t_min = 1e-6;
    double t_max = 50.0;
    int points = 200;
};

struct XSampleSpec {
    int n_random = 20;
    std::uint64_t seed = 20240915;
};

struct VerifyRow {
    std::string name;
    double max_ratio = 0.0;
    double argmax_t = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool all_pass = false;

    std::string to_csv() const {
        std::string out = "inequality,max_ratio,argmax_t,pass\n";
        char buf[160];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%d\n", r.name.c_str(),
                          r.max_ratio, r.argmax_t, r.pass ? 1 : 0);
            out += buf;
        }
        return out;
    }
};

namespace detail {
inline std::vector<ModeVector> make_x_samples(const SpectralOperator& op,
                                              const XSampleSpec& spec) {
    std::vector<ModeVector> xs;
    for (std::size_t k = 0; k < op.size(); ++k) xs.push_back(basis_vector(op.size(), k));
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int r = 0; r < spec.n_random; ++r) {
        ModeVector v(op.size());
        for (auto& c : v) c = Complex{gauss(rng), gauss(rng)};
        const double n = sup_norm(v);
        if (n > 0.0)
            for (auto& c : v) c /= n;
        xs.push_back(std::move(v));
    }
    return xs;
}

inline std::vector<double> log_grid(double lo, double hi, int points, bool with_zero) {
    std::vector<double> g;
    if (with_zero) g.push_back(0.0);
    const double step = std::log(hi / lo) / (points - 1);
    for (int k = 0; k < points; ++k) g.push_back(lo * std::exp(step * k));
    return g;
}
} // namespace detail

// Reports, for each of the six dichotomy inequalities, the largest observed
// LHS/RHS over the (t, x) sample grid. A row passes iff its ratio stays
// below 1 + tol. Constants may come from estimate_constants or by hand.
inline VerifyReport verify_estimates(const SpectralOperator& op, const DichotomyConstants& c,
                                     double alpha, double beta,
                                     const VerifyGrid& grid = {},
                                     const XSampleSpec& xspec = {}, double tol = 1e-9) {
    const auto xs = detail::make_x_samples(op, xspec);
    const AlphaSpaceSpec a_spec(alpha, AlphaFlavor::FractionalPower);
    const AlphaSpaceSpec b_spec(beta, AlphaFlavor::FractionalPower);

    // Forward grids (t >= 0); the backward inequalities evaluate at -t.
    const auto plain_grid = detail::log_grid(grid.t_min, grid.t_max, grid.points, true);
    const auto sing_grid = detail::log_grid(grid.t_min, grid.t_max, grid.points, false);

    struct Spec {
        std::string name;
        const std::vector<double>* ts;
        bool backward;
    };
    const Spec specs[6] = {
        {"hyP", &plain_grid, false},  {"hyQ", &plain_grid, true},
        {"hyP*", &sing_grid, false},  {"hyQ*", &plain_grid, true},
        {"beta1", &plain_grid, true}, {"beta2", &sing_grid, false},
    };

    VerifyReport rep;
    rep.all_pass = true;
    for (const auto& s : specs) {
        VerifyRow row;
        row.name = s.name;
        for (double tau : *s.ts) {
            const double t = s.backward ? -tau : tau;
            for (const auto& x : xs) {
                double lhs = 0.0, rhs = 0.0;
                if (s.name == "hyP") {
                    lhs = sup_norm(semigroup_apply(op, t, x, SpectralPart::Stable));
                    rhs = c.M * std::exp(-c.delta * t) * sup_norm(x);
                } else if (s.name == "hyQ") {
                    lhs = sup_norm(semigroup_apply(op, t, x, SpectralPart::Unstable));
                    rhs = c.M * std::exp(c.delta * t) * sup_norm(x);
                } else if (s.name == "hyP*") {
                    lhs = alpha_norm(op, semigroup_apply(op, t, x, SpectralPart::Stable), a_spec);
                    rhs = c.M_alpha * std::pow(t, -alpha) * std::exp(-c.gamma * t) * sup_norm(x);
                } else if (s.name == "hyQ*") {
                    lhs = alpha_norm(op, semigroup_apply(op, t, x, SpectralPart::Unstable), a_spec);
                    rhs = c.c_alpha * std::exp(c.delta * t) * sup_norm(x);
                } else if (s.name == "beta1") {
                    lhs = alpha_norm(op, a_semigroup_apply(op, t, x, SpectralPart::Unstable), a_spec);
                    rhs = c.c_beta * std::exp(c.delta * t) * alpha_norm(op, x, b_spec);
                } else { // beta2
                    lhs = alpha_norm(op, a_semigroup_apply(op, t, x, SpectralPart::Stable), a_spec);
                    rhs = c.c_beta * std::pow(t, beta - alpha - 1.0) * std::exp(-c.gamma * t) *
                          alpha_norm(op, x, b_spec);
                }
                double ratio;
                if (lhs <= 1e-300)
                    ratio = 0.0;
                else if (rhs <= 0.0)
                    ratio = std::numeric_limits<double>::infinity();
                else
                    ratio = lhs / rhs;
                if (ratio > row.max_ratio) {
                    row.max_ratio = ratio;
                    row.argmax_t = t;
                }
            }
        }
        row.pass = row.max_ratio <= 1.0 + tol;
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace papeq
