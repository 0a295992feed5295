#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "papeq/errors.hpp"
#include "papeq/gamma.hpp"
#include "papeq/pap.hpp"
#include "papeq/problem.hpp"
#include "papeq/spectral.hpp"

namespace papeq {

// ── Contraction constant ─────────────────────────────────────────────────────

// The five bracketed terms of the fixed-point bound: embedding, Gamma2,
// Gamma1, Gamma3, Gamma4 contributions in that order.
inline std::array<double, 5> theta_terms(const DichotomyConstants& c, double alpha,
                                         double beta) {
    return {
        c.k_alpha,
        c.c_beta / c.delta,
        c.c_beta * gamma_function(beta - alpha) / std::pow(c.gamma, beta - alpha),
        c.M_alpha * gamma_function(1.0 - alpha) / std::pow(c.gamma, 1.0 - alpha),
        c.c_alpha / c.delta,
    };
}

// Theta = K varpi [ k(a) + c/d + c G(b-a)/g^{b-a} + M(a) G(1-a)/g^{1-a} + c(a)/d ].
inline double theta_constant(const DichotomyConstants& c, double K, double varpi,
                             double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < beta && beta < 1.0))
        throw DomainError("theta_constant: need 0 < alpha < beta < 1");
    const auto terms = theta_terms(c, alpha, beta);
    double sum = 0.0;
    for (double t : terms) sum += t;
    return K * varpi * sum;
}

// ── Convolution quadrature ───────────────────────────────────────────────────

enum class KernelKind { Semigroup, ASemigroup };

struct QuadratureSpec {
    int graded_cells = 128;    // cells of the graded mesh on [0, min(1, L)]
    int panels_per_unit = 8;   // composite panels per unit length on [1, L]
    int min_tail_panels = 32;
};

namespace detail {

struct ConvNodes {
    std::vector<double> tau;
    std::vector<double> weight;
};

// Gauss-Legendre 4 on [-1, 1].
inline constexpr double kGlNode[2] = {0.3399810435848563, 0.8611363115940526};
inline constexpr double kGlWeight[2] = {0.6521451548625461, 0.3478548451374538};

inline void append_gl4(ConvNodes& n, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int j = 0; j < 2; ++j) {
        n.tau.push_back(mid - half * kGlNode[j]);
        n.weight.push_back(half * kGlWeight[j]);
        n.tau.push_back(mid + half * kGlNode[j]);
        n.weight.push_back(half * kGlWeight[j]);
    }
}

// Mesh for int_0^L k(tau) h(. -+ tau) dtau: graded cells
// tau_j = s (j/J)^{1/grading} on [0, s], s = min(1, L), resolving the
// endpoint singularity of the alpha-norm kernel bound, then a uniform
// composite rule on [s, L].
inline ConvNodes make_conv_nodes(double L, double grading, const QuadratureSpec& q) {
    ConvNodes n;
    if (!(L > 0.0)) return n;
    const double s = std::min(1.0, L);
    const double inv = 1.0 / grading;
    double prev = 0.0;
    for (int j = 1; j <= q.graded_cells; ++j) {
        const double tj = s * std::pow(static_cast<double>(j) / q.graded_cells, inv);
        append_gl4(n, prev, tj);
        prev = tj;
    }
    if (L > s) {
        const int panels = std::max(q.min_tail_panels,
                                    static_cast<int>(std::ceil((L - s) * q.panels_per_unit)));
        const double h = (L - s) / panels;
        for (int k = 0; k < panels; ++k) append_gl4(n, s + k * h, s + (k + 1) * h);
    }
    return n;
}

} // namespace detail

// Evaluates one of the four convolution branches:
//   stable side    int_0^L k_n(tau) h(t - tau) dtau,  k_n = e^{l t} or l e^{l t}
//   unstable side  int_0^L k_n(tau) h(t + tau) dtau,  k_n = e^{-l t} or l e^{-l t}
// with per-mode kernel weights precomputed on the mesh. Modes outside the
// selected part contribute zero.
class GammaEvaluator {
  public:
    GammaEvaluator() = default;

    GammaEvaluator(const SpectralOperator& op, SpectralPart part, KernelKind kind,
                   double horizon, double grading, const QuadratureSpec& q)
        : n_modes_(op.size()), backward_(part != SpectralPart::Unstable) {
        if (!op.has_part(part) || !(horizon > 0.0)) return;
        nodes_ = detail::make_conv_nodes(horizon, grading, q);
        wk_.resize(nodes_.tau.size());
        for (std::size_t i = 0; i < nodes_.tau.size(); ++i) {
            wk_[i].assign(n_modes_, Complex{0.0, 0.0});
            for (std::size_t m = 0; m < n_modes_; ++m) {
                if (!op.in_part(m, part)) continue;
                const Complex l = op.lambda(m);
                const Complex e = std::exp((backward_ ? l : -l) * nodes_.tau[i]);
                wk_[i][m] = nodes_.weight[i] * (kind == KernelKind::ASemigroup ? l * e : e);
            }
        }
    }

    bool active() const { return !wk_.empty(); }
    long node_count() const { return static_cast<long>(nodes_.tau.size()); }

    // Hot path: the integrand writes into a caller-provided scratch buffer so
    // no allocation happens per node.
    template <typename H>
    void accumulate(H&& h_into, double t, ModeVector& out, ModeVector& scratch) const {
        for (std::size_t i = 0; i < wk_.size(); ++i) {
            const double s = backward_ ? t - nodes_.tau[i] : t + nodes_.tau[i];
            h_into(s, scratch);
            const auto& w = wk_[i];
            for (std::size_t m = 0; m < n_modes_; ++m) out[m] += w[m] * scratch[m];
        }
    }

    ModeVector apply(const std::function<ModeVector(double)>& h, double t) const {
        ModeVector out = zero_vector(n_modes_);
        ModeVector scratch;
        accumulate([&h](double s, ModeVector& y) { y = h(s); }, t, out, scratch);
        return out;
    }

  private:
    std::size_t n_modes_ = 0;
    bool backward_ = true;
    detail::ConvNodes nodes_;
    std::vector<std::vector<Complex>> wk_;
};

namespace detail {

// Coarse magnitude estimate of the integrand over one truncation window,
// feeding the horizon formula L = ln(C/tol)/rate.
inline double estimate_magnitude(const std::function<ModeVector(double)>& h, double t,
                                 bool backward, double reach) {
    double c = 0.0;
    for (int k = 0; k <= 32; ++k) {
        const double s = backward ? t - reach * k / 32.0 : t + reach * k / 32.0;
        c = std::max(c, sup_norm(h(s)));
    }
    return c;
}

inline double horizon(double magnitude, double tol, double rate) {
    return std::log(std::max(magnitude, 1.0) / tol) / rate;
}

} // namespace detail

// Single-point evaluation of one convolution branch on an arbitrary callable.
// Used by the transfer-exactness and PAP-invariance checks, and by the CLI
// oracle table.
inline ModeVector gamma_conv(const SpectralOperator& op, SpectralPart part, KernelKind kind,
                             const std::function<ModeVector(double)>& h, double t,
                             double tol_trunc, double rate, double grading,
                             double kernel_scale = 1.0, const QuadratureSpec& q = {}) {
    if (!op.has_part(part)) return zero_vector(op.size());
    if (!(tol_trunc > 0.0)) throw DomainError("gamma_conv: tol_trunc must be positive");
    const bool backward = part != SpectralPart::Unstable;
    const double reach0 = detail::horizon(1.0, tol_trunc, rate);
    const double mag =
        detail::estimate_magnitude(h, t, backward, reach0) * std::max(kernel_scale, 1.0);
    const double L = detail::horizon(mag, tol_trunc, rate);
    GammaEvaluator ev(op, part, kind, L, grading, q);
    return ev.apply(h, t);
}

// ── The four integral operators on grid iterates ─────────────────────────────

namespace detail {

struct Horizons {
    double L_gamma = 0.0; // stable-side truncation
    double L_delta = 0.0; // unstable-side truncation
};

inline Horizons make_horizons(const ProblemSpec& p, const DichotomyConstants& c,
                              double tol_trunc) {
    // Forcing magnitude sampled coarsely; the kernel constants scale the tail
    // bound int_L^inf kernel <= const * e^{-rate L} / rate.
    double fmag = 1.0;
    for (int k = -16; k <= 16; ++k) {
        const double t = 3.0 * k;
        fmag = std::max(fmag, sup_norm(p.f.forcing.evaluate(t)) + sup_norm(p.g.forcing.evaluate(t)));
    }
    const double kernel_scale = std::max({c.c_beta, c.M_alpha, c.c_alpha, 1.0});
    Horizons h;
    h.L_gamma = horizon(fmag * kernel_scale, tol_trunc, c.gamma);
    if (p.op.has_part(SpectralPart::Unstable))
        h.L_delta = horizon(fmag * kernel_scale, tol_trunc, c.delta);
    return h;
}

// g(s, Cu(s - p)) и f(s, Bu(s - p)) as callables over the grid carrier.
inline std::function<ModeVector(double)> integrand_f(const ProblemSpec& p,
                                                     const TimeGridFunction& u) {
    const double delay = p.delay;
    return [&p, &u, delay](double s) { return p.f.eval(s, p.B.apply(u.eval(s - delay))); };
}

inline std::function<ModeVector(double)> integrand_g(const ProblemSpec& p,
                                                     const TimeGridFunction& u) {
    const double delay = p.delay;
    return [&p, &u, delay](double s) { return p.g.eval(s, p.C.apply(u.eval(s - delay))); };
}

} // namespace detail

// Gamma1 u (t) = int_{-inf}^{t} A T(t-s) P f(s, Bu(s-p)) ds, truncated at
// t - s = L_gamma with the graded mesh of the (beta2) kernel.
inline ModeVector gamma1(const ProblemSpec& p, const TimeGridFunction& u, double t,
                         double tol_trunc, const QuadratureSpec& q = {}) {
    const auto c = estimate_constants(p.op, p.alpha, p.beta, p.gamma_fraction);
    const auto hz = detail::make_horizons(p, c, tol_trunc);
    GammaEvaluator ev(p.op, SpectralPart::Stable, KernelKind::ASemigroup, hz.L_gamma,
                      p.beta - p.alpha, q);
    return ev.apply(detail::integrand_f(p, u), t);
}

// Gamma2 u (t) = int_{t}^{inf} A T(t-s) Q f(s, Bu(s-p)) ds, truncated at
// s - t = L_delta (bounded kernel, (beta1)).
inline ModeVector gamma2(const ProblemSpec& p, const TimeGridFunction& u, double t,
                         double tol_trunc, const QuadratureSpec& q = {}) {
    const auto c = estimate_constants(p.op, p.alpha, p.beta, p.gamma_fraction);
    const auto hz = detail::make_horizons(p, c, tol_trunc);
    GammaEvaluator ev(p.op, SpectralPart::Unstable, KernelKind::ASemigroup, hz.L_delta, 1.0, q);
    return ev.apply(detail::integrand_f(p, u), t);
}

// Gamma3 u (t) = int_{-inf}^{t} T(t-s) P g(s, Cu(s-p)) ds, graded mesh for the
// (hyP*) kernel t^{-alpha}.
inline ModeVector gamma3(const ProblemSpec& p, const TimeGridFunction& u, double t,
                         double tol_trunc, const QuadratureSpec& q = {}) {
    const auto c = estimate_constants(p.op, p.alpha, p.beta, p.gamma_fraction);
    const auto hz = detail::make_horizons(p, c, tol_trunc);
    GammaEvaluator ev(p.op, SpectralPart::Stable, KernelKind::Semigroup, hz.L_gamma,
                      1.0 - p.alpha, q);
    return ev.apply(detail::integrand_g(p, u), t);
}

// Gamma4 u (t) = int_{t}^{inf} T(t-s) Q g(s, Cu(s-p)) ds with (hyQ*).
inline ModeVector gamma4(const ProblemSpec& p, const TimeGridFunction& u, double t,
                         double tol_trunc, const QuadratureSpec& q = {}) {
    const auto c = estimate_constants(p.op, p.alpha, p.beta, p.gamma_fraction);
    const auto hz = detail::make_horizons(p, c, tol_trunc);
    GammaEvaluator ev(p.op, SpectralPart::Unstable, KernelKind::Semigroup, hz.L_delta, 1.0, q);
    return ev.apply(detail::integrand_g(p, u), t);
}

// ── Exact AP transfer through the linear branches ────────────────────────────

// Applies the per-mode, per-frequency transfer factor of a convolution branch
// to a trigonometric polynomial: e^{i nu t} maps through e.g. 1/(i nu - l)
// on Gamma3's stable modes. Exact; used for AP candidates and window tails.
inline TrigPolynomial transfer_ap(const SpectralOperator& op, SpectralPart part,
                                  KernelKind kind, const TrigPolynomial& ap) {
    TrigPolynomial out(op.size());
    for (const auto& term : ap.terms()) {
        const Complex inu{0.0, term.freq};
        ModeVector c = zero_vector(op.size());
        for (std::size_t m = 0; m < op.size(); ++m) {
            if (!op.in_part(m, part)) continue;
            const Complex l = op.lambda(m);
            const Complex denom = op.is_stable(m) ? (inu - l) : (l - inu);
            const Complex num = kind == KernelKind::ASemigroup ? l : Complex{1.0, 0.0};
            c[m] = term.coeff[m] * num / denom;
        }
        out.add_term(term.freq, c);
    }
    return out;
}

// AP part of the u-independent response M(0): the forcing AP terms pushed
// through -f, -Gamma1, +Gamma2, +Gamma3, -Gamma4. Serves as the
// extrapolate-ap window tail shared by all Picard iterates.
inline TrigPolynomial forcing_ap_response(const ProblemSpec& p) {
    TrigPolynomial out(p.op.size());
    auto accumulate = [&out, &p](const TrigPolynomial& src, double sign) {
        for (const auto& term : src.terms()) {
            ModeVector c(term.coeff);
            for (auto& v : c) v *= sign;
            out.add_term(term.freq, c);
        }
    };
    if (p.f.forcing.ap.dim() > 0) {
        accumulate(p.f.forcing.ap, -1.0);
        accumulate(transfer_ap(p.op, SpectralPart::Stable, KernelKind::ASemigroup,
                               p.f.forcing.ap), -1.0);
        accumulate(transfer_ap(p.op, SpectralPart::Unstable, KernelKind::ASemigroup,
                               p.f.forcing.ap), 1.0);
    }
    if (p.g.forcing.ap.dim() > 0) {
        accumulate(transfer_ap(p.op, SpectralPart::Stable, KernelKind::Semigroup,
                               p.g.forcing.ap), 1.0);
        accumulate(transfer_ap(p.op, SpectralPart::Unstable, KernelKind::Semigroup,
                               p.g.forcing.ap), -1.0);
    }
    return out;
}

// ── The mild-solution map ────────────────────────────────────────────────────

struct SolverOptions {
    double tol_trunc = 1e-8;
    double grid_spacing = 0.05;
    double window_override = 0.0; // 0: use the default window formula
    QuadratureSpec quad;
};

struct GridPlan {
    double window = 0.0;
    std::size_t points = 0;
    double L_gamma = 0.0;
    double L_delta = 0.0;
};

// Window default max(4 L_gamma, 4 L_delta, 8 p, 40): the Gamma kernels damp
// edge effects exponentially, so tail contributions stay under tol_trunc.
inline GridPlan plan_grid(const ProblemSpec& p, const SolverOptions& opts = {}) {
    p.validate();
    const auto c = estimate_constants(p.op, p.alpha, p.beta, p.gamma_fraction);
    const auto hz = detail::make_horizons(p, c, opts.tol_trunc);
    GridPlan plan;
    plan.L_gamma = hz.L_gamma;
    plan.L_delta = hz.L_delta;
    plan.window = opts.window_override > 0.0
                      ? opts.window_override
                      : std::max({4.0 * hz.L_gamma, 4.0 * hz.L_delta, 8.0 * p.delay, 40.0});
    plan.points = static_cast<std::size_t>(std::ceil(2.0 * plan.window / opts.grid_spacing)) + 1;
    return plan;
}

// Samples a PAP initial guess onto the solver grid and attaches the shared
// forcing tail.
inline TimeGridFunction sample_initial_guess(const ProblemSpec& p, const PAPFunction& u0,
                                             const GridPlan& plan,
                                             TailPolicy policy = TailPolicy::ExtrapolateAp) {
    const std::size_t n = p.op.size();
    auto fn = [&u0, n](double t) {
        return u0.dim() > 0 ? u0.evaluate(t) : zero_vector(n);
    };
    TimeGridFunction u = TimeGridFunction::from_function(fn, plan.window, plan.points, policy);
    const TrigPolynomial tail = forcing_ap_response(p);
    u.set_ap_tail([tail](double t) { return tail.evaluate(t); });
    return u;
}

// One constructed instance of the map M u = -f(t, Bu(t-p)) - G1 + G2 + G3 - G4
// bound to a grid geometry. The u-independent forcing response is integrated
// once; per application only the Lipschitz parts are re-integrated.
class MildOperator {
  public:
    MildOperator(const ProblemSpec& p, const GridPlan& plan, const SolverOptions& opts = {})
        : prob_(&p), plan_(plan), opts_(opts) {
        p.validate();
        g1_ = GammaEvaluator(p.op, SpectralPart::Stable, KernelKind::ASemigroup, plan.L_gamma,
                             p.beta - p.alpha, opts.quad);
        g2_ = GammaEvaluator(p.op, SpectralPart::Unstable, KernelKind::ASemigroup,
                             plan.L_delta, 1.0, opts.quad);
        g3_ = GammaEvaluator(p.op, SpectralPart::Stable, KernelKind::Semigroup, plan.L_gamma,
                             1.0 - p.alpha, opts.quad);
        g4_ = GammaEvaluator(p.op, SpectralPart::Unstable, KernelKind::Semigroup,
                             plan.L_delta, 1.0, opts.quad);

        // u-independent part: -a_f(t) - G1[a_f] + G2[a_f] + G3[a_g] - G4[a_g].
        const PAPFunction& af = p.f.forcing;
        const PAPFunction& ag = p.g.forcing;
        const std::size_t n = p.op.size();
        auto af_into = [&af, n](double s, ModeVector& y) {
            if (af.dim() > 0)
                af.evaluate_into(s, y);
            else
                y.assign(n, Complex{0.0, 0.0});
        };
        auto ag_into = [&ag, n](double s, ModeVector& y) {
            if (ag.dim() > 0)
                ag.evaluate_into(s, y);
            else
                y.assign(n, Complex{0.0, 0.0});
        };
        forcing_part_.reserve(plan.points);
        ModeVector scratch, acc;
        const double h = 2.0 * plan.window / (plan.points - 1);
        for (std::size_t k = 0; k < plan.points; ++k) {
            const double t = -plan.window + k * h;
            ModeVector v;
            af_into(t, v);
            for (auto& c : v) c = -c;
            accumulate_branch(g1_, af_into, t, -1.0, v, acc, scratch);
            accumulate_branch(g2_, af_into, t, 1.0, v, acc, scratch);
            accumulate_branch(g3_, ag_into, t, 1.0, v, acc, scratch);
            accumulate_branch(g4_, ag_into, t, -1.0, v, acc, scratch);
            forcing_part_.push_back(std::move(v));
        }
    }

    const GridPlan& plan() const { return plan_; }

    long nodes_stable() const { return g1_.node_count() + g3_.node_count(); }
    long nodes_unstable() const { return g2_.node_count() + g4_.node_count(); }

    TimeGridFunction apply(const TimeGridFunction& u) const {
        const ProblemSpec& p = *prob_;
        const double delay = p.delay;
        auto nf_into = [&p, &u, delay](double s, ModeVector& y) {
            u.eval_into(s - delay, y);
            p.B.apply_inplace(y);
            p.f.map.apply_inplace(y);
        };
        auto ng_into = [&p, &u, delay](double s, ModeVector& y) {
            u.eval_into(s - delay, y);
            p.C.apply_inplace(y);
            p.g.map.apply_inplace(y);
        };
        const bool f_active = !p.f.map.zero();
        const bool g_active = !p.g.map.zero();

        std::vector<ModeVector> out(forcing_part_);
        ModeVector scratch, acc, direct;
        const double h = 2.0 * plan_.window / (plan_.points - 1);
        for (std::size_t k = 0; k < plan_.points; ++k) {
            const double t = -plan_.window + k * h;
            if (f_active) {
                nf_into(t, direct);
                add_scaled(out[k], direct, -1.0);
                accumulate_branch(g1_, nf_into, t, -1.0, out[k], acc, scratch);
                accumulate_branch(g2_, nf_into, t, 1.0, out[k], acc, scratch);
            }
            if (g_active) {
                accumulate_branch(g3_, ng_into, t, 1.0, out[k], acc, scratch);
                accumulate_branch(g4_, ng_into, t, -1.0, out[k], acc, scratch);
            }
        }
        TimeGridFunction res(plan_.window, std::move(out), u.policy());
        if (u.ap_tail()) res.set_ap_tail(*u.ap_tail());
        return res;
    }

  private:
    static void add_scaled(ModeVector& dst, const ModeVector& src, double s) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
    }

    template <typename H>
    static void accumulate_branch(const GammaEvaluator& ev, H&& h_into, double t, double sign,
                                  ModeVector& dst, ModeVector& acc, ModeVector& scratch) {
        if (!ev.active()) return;
        acc.assign(dst.size(), Complex{0.0, 0.0});
        ev.accumulate(h_into, t, acc, scratch);
        add_scaled(dst, acc, sign);
    }

    const ProblemSpec* prob_;
    GridPlan plan_;
    SolverOptions opts_;
    GammaEvaluator g1_, g2_, g3_, g4_;
    std::vector<ModeVector> forcing_part_;
};

// (M u) evaluated on u's own grid.
inline TimeGridFunction mild_map(const ProblemSpec& p, const TimeGridFunction& u,
                                 double tol_trunc = 1e-8, const QuadratureSpec& q = {}) {
    SolverOptions opts;
    opts.tol_trunc = tol_trunc;
    opts.quad = q;
    const auto c = estimate_constants(p.op, p.alpha, p.beta, p.gamma_fraction);
    const auto hz = detail::make_horizons(p, c, tol_trunc);
    GridPlan plan{u.half_width(), u.points(), hz.L_gamma, hz.L_delta};
    return MildOperator(p, plan, opts).apply(u);
}

// ── Norms over grids, residual, Picard iteration ─────────────────────────────

inline double sup_alpha_norm(const SpectralOperator& op, const TimeGridFunction& u,
                             double alpha) {
    const AlphaSpaceSpec spec(alpha, AlphaFlavor::FractionalPower);
    double m = 0.0;
    for (std::size_t k = 0; k < u.points(); ++k)
        m = std::max(m, alpha_norm(op, u.sample(k), spec));
    return m;
}

inline double sup_alpha_diff(const SpectralOperator& op, const TimeGridFunction& a,
                             const TimeGridFunction& b, double alpha) {
    if (a.points() != b.points())
        throw DomainError("sup_alpha_diff: grid size mismatch");
    const AlphaSpaceSpec spec(alpha, AlphaFlavor::FractionalPower);
    double m = 0.0;
    for (std::size_t k = 0; k < a.points(); ++k) {
        ModeVector d = a.sample(k);
        const ModeVector& s = b.sample(k);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= s[i];
        m = std::max(m, alpha_norm(op, d, spec));
    }
    return m;
}

// Defect sup_t ||u(t) - (M u)(t)||_alpha over the interior grid, excluding a
// margin of width max(p, 1) near the window ends.
inline double residual(const ProblemSpec& p, const TimeGridFunction& u,
                       double tol_trunc = 1e-8, const QuadratureSpec& q = {}) {
    const TimeGridFunction v = mild_map(p, u, tol_trunc, q);
    const double margin = std::max(p.delay, 1.0);
    const AlphaSpaceSpec spec(p.alpha, AlphaFlavor::FractionalPower);
    double m = 0.0;
    for (std::size_t k = 0; k < u.points(); ++k) {
        const double t = u.node(k);
        if (t < -u.half_width() + margin || t > u.half_width() - margin) continue;
        ModeVector d = u.sample(k);
        const ModeVector& s = v.sample(k);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= s[i];
        m = std::max(m, alpha_norm(p.op, d, spec));
    }
    return m;
}

struct SolveReport {
    double theta = 0.0;
    int iterations = 0;
    std::vector<double> contraction_ratios;
    double final_residual = 0.0;
    double L_gamma = 0.0;
    double L_delta = 0.0;
    double window = 0.0;
    double spacing = 0.0;
    long stable_nodes = 0;
    long unstable_nodes = 0;
    std::size_t grid_points = 0;
};

// Banach iteration u_{k+1} = M u_k. Stops when the step size drops below
// tol (1 - Theta), so the reported tol bounds the distance to the fixed
// point a priori. Refuses Theta >= 1.
inline std::pair<TimeGridFunction, SolveReport>
picard_solve(const ProblemSpec& p, TimeGridFunction u0, double tol, int max_iter,
             const SolverOptions& opts = {}) {
    p.validate();
    if (!(tol > 0.0)) throw DomainError("picard_solve: tol must be positive");

    const auto consts = estimate_constants(p.op, p.alpha, p.beta, p.gamma_fraction);
    const double theta = theta_constant(consts, p.lipschitz_K(), p.varpi(), p.alpha, p.beta);
    if (theta >= 1.0)
        throw ThetaNotContractive("picard_solve: Theta >= 1, fixed-point hypothesis fails");

    const auto hz = detail::make_horizons(p, consts, opts.tol_trunc);
    GridPlan plan{u0.half_width(), u0.points(), hz.L_gamma, hz.L_delta};
    MildOperator op(p, plan, opts);

    // The window tail is a property of the problem, shared by all iterates,
    // so every start converges to the same effective fixed point.
    if (!u0.ap_tail() && u0.policy() == TailPolicy::ExtrapolateAp) {
        const TrigPolynomial tail = forcing_ap_response(p);
        u0.set_ap_tail([tail](double t) { return tail.evaluate(t); });
    }

    SolveReport rep;
    rep.theta = theta;
    rep.L_gamma = plan.L_gamma;
    rep.L_delta = plan.L_delta;
    rep.window = plan.window;
    rep.spacing = u0.spacing();
    rep.grid_points = plan.points;
    rep.stable_nodes = op.nodes_stable();
    rep.unstable_nodes = op.nodes_unstable();

    const double stop = tol * (1.0 - theta);
    TimeGridFunction u = std::move(u0);
    double prev_diff = -1.0;
    for (int k = 0; k < max_iter; ++k) {
        TimeGridFunction next = op.apply(u);
        const double diff = sup_alpha_diff(p.op, next, u, p.alpha);
        ++rep.iterations;
        if (prev_diff > 0.0) rep.contraction_ratios.push_back(diff / prev_diff);
        prev_diff = diff;
        u = std::move(next);
        if (diff <= stop) {
            rep.final_residual = residual(p, u, opts.tol_trunc, opts.quad);
            return {std::move(u), rep};
        }
    }
    throw MaxIterExceeded("picard_solve: no convergence within max_iter sweeps");
}

} // namespace papeq
