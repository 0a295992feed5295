#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "papeq/errors.hpp"
#include "papeq/spectral.hpp"

namespace papeq {

// ── Almost periodic part: trigonometric polynomials ──────────────────────────

struct TrigTerm {
    double freq = 0.0; // rad / time
    ModeVector coeff;
};

// Finite trigonometric polynomial sum_j c_j e^{i nu_j t}. Frequencies are kept
// pairwise distinct; adding an existing frequency merges coefficients.
class TrigPolynomial {
  public:
    TrigPolynomial() = default;
    explicit TrigPolynomial(std::size_t n_modes) : dim_(n_modes) {}

    void add_term(double freq, const ModeVector& coeff) {
        if (dim_ == 0) dim_ = coeff.size();
        if (coeff.size() != dim_)
            throw DomainError("TrigPolynomial: coefficient length mismatch");
        for (auto& t : terms_) {
            if (t.freq == freq) {
                for (std::size_t i = 0; i < dim_; ++i) t.coeff[i] += coeff[i];
                return;
            }
        }
        terms_.push_back({freq, coeff});
    }

    // Real-valued cosine/sine terms enter as conjugate pairs.
    void add_real_cosine(double freq, const std::vector<double>& coeff) {
        ModeVector half(coeff.size());
        for (std::size_t i = 0; i < coeff.size(); ++i) half[i] = 0.5 * coeff[i];
        if (freq == 0.0) {
            ModeVector full(coeff.begin(), coeff.end());
            add_term(0.0, full);
            return;
        }
        add_term(freq, half);
        add_term(-freq, half);
    }

    void add_real_sine(double freq, const std::vector<double>& coeff) {
        ModeVector lower(coeff.size()), upper(coeff.size());
        for (std::size_t i = 0; i < coeff.size(); ++i) {
            upper[i] = Complex{0.0, -0.5 * coeff[i]}; // e^{i nu t} coefficient
            lower[i] = Complex{0.0, 0.5 * coeff[i]};
        }
        if (freq == 0.0) return; // sin(0 t) = 0
        add_term(freq, upper);
        add_term(-freq, lower);
    }

    const std::vector<TrigTerm>& terms() const { return terms_; }
    std::size_t dim() const { return dim_; }
    bool trivial() const {
        for (const auto& t : terms_)
            if (sup_norm(t.coeff) > 0.0) return false;
        return true;
    }
    double max_frequency() const {
        double m = 0.0;
        for (const auto& t : terms_) m = std::max(m, std::abs(t.freq));
        return m;
    }

    void evaluate_into(double t, ModeVector& out) const {
        out.assign(dim_, Complex{0.0, 0.0});
        for (const auto& term : terms_) {
            const Complex phase = std::polar(1.0, term.freq * t);
            for (std::size_t i = 0; i < dim_; ++i) out[i] += phase * term.coeff[i];
        }
    }

    ModeVector evaluate(double t) const {
        ModeVector out;
        evaluate_into(t, out);
        return out;
    }

  private:
    std::vector<TrigTerm> terms_;
    std::size_t dim_ = 0;
};

// ── Ergodic part: closed-form catalog ────────────────────────────────────────

enum class ErgodicKind { ExpDecay, RationalDecay, Bump };

// Catalog member of AP_0: a scalar profile with analytically vanishing sliding
// mean times a fixed coefficient vector.
struct ErgodicTerm {
    ErgodicKind kind = ErgodicKind::ExpDecay;
    double rate = 1.0; // decay rate kappa, or exponent q for rational decay
    ModeVector coeff;
    double center = 0.0; // bump only
    double width = 1.0;  // bump only

    double profile(double t) const {
        switch (kind) {
            case ErgodicKind::ExpDecay:
                return std::exp(-rate * std::abs(t));
            case ErgodicKind::RationalDecay:
                return std::pow(1.0 + t * t, -rate);
            case ErgodicKind::Bump: {
                const double u = (t - center) / width;
                if (std::abs(u) >= 1.0) return 0.0;
                return std::exp(1.0 - 1.0 / (1.0 - u * u));
            }
        }
        return 0.0;
    }

    ModeVector evaluate(double t) const {
        const double p = profile(t);
        ModeVector out(coeff.size());
        for (std::size_t i = 0; i < coeff.size(); ++i) out[i] = p * coeff[i];
        return out;
    }

    void validate() const {
        if (!(rate > 0.0)) throw DomainError("ErgodicTerm: rate must be positive");
        if (kind == ErgodicKind::Bump && !(width > 0.0))
            throw DomainError("ErgodicTerm: bump width must be positive");
    }
};

// ── Pseudo almost periodic function ──────────────────────────────────────────

// f = ap + sum of ergodic terms; the stored split is the (unique)
// AP + AP_0 decomposition.
struct PAPFunction {
    TrigPolynomial ap;
    std::vector<ErgodicTerm> erg;

    std::size_t dim() const {
        if (ap.dim() > 0) return ap.dim();
        return erg.empty() ? 0 : erg.front().coeff.size();
    }

    void evaluate_into(double t, ModeVector& out) const {
        if (ap.dim() > 0)
            ap.evaluate_into(t, out);
        else
            out.assign(dim(), Complex{0.0, 0.0});
        for (const auto& e : erg) {
            const double p = e.profile(t);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += p * e.coeff[i];
        }
    }

    ModeVector evaluate(double t) const {
        ModeVector out;
        evaluate_into(t, out);
        return out;
    }

    std::function<double(double)> norm_callable() const {
        return [*this](double t) { return sup_norm(evaluate(t)); };
    }
};

// ── Ergodic means ────────────────────────────────────────────────────────────

namespace detail {

struct SimpsonState {
    const std::function<double(double)>* f;
    long evals = 0;
    long budget = 0;

    double eval(double x) {
        if (++evals > budget) throw QuadratureFail("ergodic_mean: evaluation budget exceeded");
        return (*f)(x);
    }
};

inline double adaptive_simpson(SimpsonState& st, double a, double b, double fa, double fm,
                               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = st.eval(lm), frm = st.eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_integral(const std::function<double(double)>& f, double a, double b,
                                int panels, double abs_tol, long budget) {
    SimpsonState st{&f, 0, budget};
    double total = 0.0;
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double x0 = a + k * h, x1 = a + (k + 1) * h;
        const double f0 = st.eval(x0), f1 = st.eval(x1), fm = st.eval(0.5 * (x0 + x1));
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += adaptive_simpson(st, x0, x1, f0, fm, f1, whole, abs_tol / panels, 48);
    }
    return total;
}

} // namespace detail

// Sliding mean (1/2r) int_{-r}^{r} f(t) dt of a nonnegative norm callable,
// by adaptive composite Simpson. Relative accuracy rel_tol for the catalog
// integrands; throws QuadratureFail when refinement exceeds max_evals.
inline double ergodic_mean(const std::function<double(double)>& f_norm, double r,
                           int quad_points = 64, double rel_tol = 1e-9,
                           long max_evals = 40000000L) {
    if (!(r > 0.0)) throw DomainError("ergodic_mean: r must be positive");
    if (quad_points < 64) throw DomainError("ergodic_mean: need quad_points >= 64");
    if (quad_points % 2) ++quad_points; // keep a panel boundary at t = 0

    // Coarse pass fixes the absolute tolerance scale for refinement.
    double coarse = 0.0;
    {
        const double h = 2.0 * r / quad_points;
        for (int k = 0; k < quad_points; ++k) {
            const double x0 = -r + k * h;
            coarse += h / 6.0 *
                      (f_norm(x0) + 4.0 * f_norm(x0 + 0.5 * h) + f_norm(x0 + h));
        }
    }
    const double abs_tol = rel_tol * std::max(std::abs(coarse), 1e-12);
    const double integral =
        detail::adaptive_integral(f_norm, -r, r, quad_points, abs_tol, max_evals);
    return integral / (2.0 * r);
}

struct Ap0Result {
    bool passed = false;
    std::vector<std::pair<double, double>> trace; // (r, mean)
};

// AP_0 membership check on a finite r-ladder: means must be non-increasing
// within 10% slack and the final mean must drop below tol.
inline Ap0Result check_ap0(const std::function<double(double)>& f_norm,
                           const std::vector<double>& r_list, double tol,
                           int quad_points = 64, double rel_tol = 1e-9) {
    if (r_list.size() < 3) throw DomainError("check_ap0: need at least 3 radii");
    for (std::size_t i = 1; i < r_list.size(); ++i)
        if (!(r_list[i] > r_list[i - 1]))
            throw DomainError("check_ap0: r_list must be strictly increasing");

    Ap0Result res;
    for (double r : r_list)
        res.trace.emplace_back(r, ergodic_mean(f_norm, r, quad_points, rel_tol));
    res.passed = true;
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        if (res.trace[i].second > 1.1 * res.trace[i - 1].second) res.passed = false;
    if (!(res.trace.back().second < tol)) res.passed = false;
    return res;
}

// Mean trace of t -> ||f(t) - candidate_ap(t)||; by uniqueness of the PAP
// decomposition the trace must decay when candidate_ap is the true AP part.
inline std::vector<std::pair<double, double>>
decompose_residual(const std::function<ModeVector(double)>& f, const TrigPolynomial& candidate,
                   const std::vector<double>& r_list, int quad_points = 64,
                   double rel_tol = 1e-9) {
    auto diff_norm = [&](double t) {
        ModeVector d = f(t);
        const ModeVector a = candidate.dim() > 0 ? candidate.evaluate(t) : zero_vector(d.size());
        for (std::size_t i = 0; i < d.size() && i < a.size(); ++i) d[i] -= a[i];
        return sup_norm(d);
    };
    std::vector<std::pair<double, double>> trace;
    for (double r : r_list)
        trace.emplace_back(r, ergodic_mean(diff_norm, r, quad_points, rel_tol));
    return trace;
}

// ── Translation numbers ──────────────────────────────────────────────────────

struct CheckGrid {
    double t_min = -100.0;
    double t_max = 100.0;
    int oversample = 40; // grid spacing <= 2 pi / (oversample * nu_max)
};

namespace detail {
// sup_t ||ap(t+tau) - ap(t)|| <= sum_j ||c_j|| |e^{i nu_j tau} - 1|.
inline double shift_bound(const TrigPolynomial& ap, double tau) {
    double b = 0.0;
    for (const auto& term : ap.terms())
        b += sup_norm(term.coeff) * std::abs(std::polar(1.0, term.freq * tau) - Complex{1.0, 0.0});
    return b;
}

inline double shift_sup_on_grid(const TrigPolynomial& ap, double tau, const CheckGrid& grid) {
    const double nu_max = std::max(ap.max_frequency(), 1e-9);
    const double spacing = 2.0 * kPi / (grid.oversample * nu_max);
    double worst = 0.0;
    for (double t = grid.t_min; t <= grid.t_max; t += spacing) {
        ModeVector d = ap.evaluate(t + tau);
        const ModeVector base = ap.evaluate(t);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= base[i];
        worst = std::max(worst, sup_norm(d));
    }
    return worst;
}
} // namespace detail

// Finds an epsilon-translation number of the trigonometric polynomial:
// tau > 0 with sup_t ||ap(t+tau) - ap(t)|| < epsilon, the sup verified on a
// dense grid. Scans candidates where all nu_j tau sit near multiples of 2 pi,
// with a local refinement of the triangle-inequality bound.
inline double translation_number(const TrigPolynomial& ap, double epsilon,
                                 double interval_length_hint, const CheckGrid& grid = {}) {
    if (!(epsilon > 0.0)) throw DomainError("translation_number: epsilon must be positive");
    if (!(interval_length_hint > 0.0))
        throw DomainError("translation_number: hint must be positive");
    if (ap.trivial()) return 1.0; // the zero function: every tau works

    const double nu_max = ap.max_frequency();
    const double step = 2.0 * kPi / (64.0 * nu_max);
    const double tau_max = interval_length_hint * 1e4;

    for (double tau = step; tau <= tau_max; tau += step) {
        double bound = detail::shift_bound(ap, tau);
        if (bound >= 2.0 * epsilon) continue;

        // Ternary refinement of the bound around the scan hit.
        double lo = std::max(step * 0.5, tau - step), hi = tau + step, best = tau;
        for (int it = 0; it < 60; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (detail::shift_bound(ap, m1) < detail::shift_bound(ap, m2))
                hi = m2;
            else
                lo = m1;
        }
        best = 0.5 * (lo + hi);
        if (detail::shift_bound(ap, best) > bound) best = tau;

        if (detail::shift_sup_on_grid(ap, best, grid) < epsilon) return best;
    }
    throw SearchExhausted(
        "translation_number: no translation number within hint * 1e4 "
        "(enlarge the interval hint)");
}

// ── Grid carrier for Picard iterates ─────────────────────────────────────────

enum class TailPolicy { Error, ExtrapolateAp };

// Uniform samples on [-T, T] with local cubic interpolation. Outside the
// window either throws (strict runs) or falls back to the attached AP
// candidate, whose values carry the solution's almost periodic tail.
class TimeGridFunction {
  public:
    TimeGridFunction() = default;

    TimeGridFunction(double half_width, std::vector<ModeVector> samples,
                     TailPolicy policy = TailPolicy::ExtrapolateAp)
        : half_width_(half_width), samples_(std::move(samples)), policy_(policy) {
        if (!(half_width_ > 0.0))
            throw DomainError("TimeGridFunction: window half-width must be positive");
        if (samples_.size() < 4)
            throw DomainError("TimeGridFunction: need at least 4 samples");
        dim_ = samples_.front().size();
        for (const auto& s : samples_)
            if (s.size() != dim_) throw DomainError("TimeGridFunction: ragged samples");
    }

    static TimeGridFunction from_function(const std::function<ModeVector(double)>& fn,
                                          double half_width, std::size_t n_points,
                                          TailPolicy policy = TailPolicy::ExtrapolateAp) {
        std::vector<ModeVector> s;
        s.reserve(n_points);
        const double h = 2.0 * half_width / (n_points - 1);
        for (std::size_t k = 0; k < n_points; ++k) s.push_back(fn(-half_width + k * h));
        return TimeGridFunction(half_width, std::move(s), policy);
    }

    void set_ap_tail(TrigPolynomial tail) {
        ap_tail_ = std::make_shared<const TrigPolynomial>(std::move(tail));
    }
    const std::shared_ptr<const TrigPolynomial>& ap_tail() const { return ap_tail_; }

    double half_width() const { return half_width_; }
    std::size_t points() const { return samples_.size(); }
    std::size_t dim() const { return dim_; }
    double spacing() const { return 2.0 * half_width_ / (samples_.size() - 1); }
    double node(std::size_t k) const { return -half_width_ + k * spacing(); }
    const ModeVector& sample(std::size_t k) const { return samples_[k]; }
    TailPolicy policy() const { return policy_; }

    void eval_into(double t, ModeVector& out) const {
        if (t < -half_width_ || t > half_width_) {
            if (policy_ == TailPolicy::Error)
                throw WindowTooSmall("TimeGridFunction: evaluation outside [-T, T]");
            if (ap_tail_ && ap_tail_->dim() > 0) {
                ap_tail_->evaluate_into(t, out);
                return;
            }
            out.assign(dim_, Complex{0.0, 0.0});
            return;
        }
        const double h = spacing();
        const double pos = (t + half_width_) / h;
        // 4-point Lagrange cubic, exact at the nodes and on cubic samples.
        long i0 = static_cast<long>(std::floor(pos)) - 1;
        i0 = std::clamp<long>(i0, 0, static_cast<long>(samples_.size()) - 4);
        const double u = pos - static_cast<double>(i0);
        double w[4];
        w[0] = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
        w[1] = u * (u - 2.0) * (u - 3.0) / 2.0;
        w[2] = -u * (u - 1.0) * (u - 3.0) / 2.0;
        w[3] = u * (u - 1.0) * (u - 2.0) / 6.0;
        out.assign(dim_, Complex{0.0, 0.0});
        for (int j = 0; j < 4; ++j) {
            const ModeVector& s = samples_[static_cast<std::size_t>(i0) + j];
            for (std::size_t i = 0; i < dim_; ++i) out[i] += w[j] * s[i];
        }
    }

    ModeVector eval(double t) const {
        ModeVector out;
        eval_into(t, out);
        return out;
    }

  private:
    double half_width_ = 0.0;
    std::vector<ModeVector> samples_;
    TailPolicy policy_ = TailPolicy::ExtrapolateAp;
    std::shared_ptr<const TrigPolynomial> ap_tail_;
    std::size_t dim_ = 0;
};

} // namespace papeq
