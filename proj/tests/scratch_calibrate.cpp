// Development-time calibration: prints the oracle values frozen in the test
// suite and sanity-checks the library against them.
#include <chrono>
#include <cstdio>
#include <vector>

#include "oracles.hpp"
#include "papeq/papeq.hpp"

using namespace papeq;

int main() {
    std::printf("== gamma oracle ==\n");
    std::printf("spouge G(0.25) = %.15Lf\n", oracles::spouge_gamma(0.25L));
    std::printf("spouge G(0.5)  = %.15Lf\n", oracles::spouge_gamma(0.5L));
    std::printf("lanczos G(0.25)= %.15f\n", gamma_function(0.25));
    std::printf("lanczos G(0.5) = %.15f\n", gamma_function(0.5));
    double worst = 0.0;
    for (int k = 1; k <= 1000; ++k) {
        const double x = 0.01 * k;
        const long double ref = oracles::spouge_gamma(static_cast<long double>(x));
        worst = std::max(worst, std::abs(static_cast<double>(
                                    (gamma_function(x) - ref) / ref)));
    }
    std::printf("lanczos max rel err on (0,10] = %.3e\n", worst);

    std::printf("\n== sector oracle ==\n");
    std::printf("single -1: dense = %.12f (sqrt2 = %.12f)\n",
                oracles::sector_bound_dense({{-1.0, 0.0}}, 0.75 * kPi, 0.0, 200000),
                std::sqrt(2.0));
    {
        std::vector<Complex> eig;
        for (int n = 1; n <= 8; ++n) eig.push_back({1.0 - n * kPi * n * kPi, 0.0});
        std::printf("heat8 s=1 w=2: dense = %.12f\n",
                    oracles::sector_bound_dense(eig, 0.75 * kPi, 2.0, 200000));
        auto op = SpectralOperator::from_eigenvalues(eig, 2.0);
        std::printf("heat8 impl (4096 samples) = %.12f\n",
                    check_sectorial(op, 0.75 * kPi, 2.0, 4096));
    }
    {
        auto op = SpectralOperator::from_eigenvalues({Complex{-1.0, 0.0}});
        std::printf("single impl (4096) = %.12f\n", check_sectorial(op, 0.75 * kPi, 0.0, 4096));
    }

    std::printf("\n== constants ==\n");
    {
        auto op = SpectralOperator::from_eigenvalues({Complex{-1.0, 0.0}});
        auto c = estimate_constants(op, 0.5, 0.75, 0.5);
        std::printf("lambda=-1 gf=0.5: M=%.12f Ma=%.12f ca=%.12f cb=%.12f ka=%.12f\n", c.M,
                    c.M_alpha, c.c_alpha, c.c_beta, c.k_alpha);
        std::printf("e^{-1/2} = %.12f\n", std::exp(-0.5));
        auto ri = alpha_norm(op, {Complex{1.0, 0.0}},
                             AlphaSpaceSpec(0.5, AlphaFlavor::RealInterpolation));
        std::printf("RI norm grid = %.12f vs 1+sup=%.12f\n", ri,
                    1.0 + std::sqrt(0.5) * std::exp(-0.5));
    }

    std::printf("\n== theta ==\n");
    {
        DichotomyConstants c{1, 1, 1, 1, 1, 1, 1};
        const double th = theta_constant(c, 0.1, 1.0, 0.5, 0.75);
        std::printf("reference theta = %.12f\n", th);
        const long double ref =
            0.1L * (3.0L + oracles::spouge_gamma(0.25L) + oracles::spouge_gamma(0.5L));
        std::printf("oracle theta    = %.12Lf\n", ref);
    }

    std::printf("\n== verify heat ==\n");
    for (int nm : {8, 16}) {
        HeatModel hm{1.0, nm};
        auto op = heat_operator(hm);
        auto c = estimate_constants(op, 0.5, 0.75, 0.9);
        auto rep = verify_estimates(op, c, 0.5, 0.75);
        std::printf("heat%-2d: ", nm);
        for (auto& r : rep.rows) std::printf("%s=%.12g ", r.name.c_str(), r.max_ratio);
        std::printf("all=%d\n", rep.all_pass ? 1 : 0);
    }

    std::printf("\n== scalar convolution ==\n");
    {
        auto op = SpectralOperator::from_eigenvalues({Complex{-1.0, 0.0}});
        auto h = [](double s) { return ModeVector{std::polar(1.0, 2.0 * s)}; };
        double worst3 = 0.0;
        for (double t : {0.0, 0.3, 1.7, -2.4, 5.0}) {
            const Complex expect = std::polar(1.0, 2.0 * t) / Complex{1.0, 2.0};
            const ModeVector got = gamma_conv(op, SpectralPart::Stable, KernelKind::Semigroup,
                                              h, t, 1e-8, 0.9, 0.5);
            worst3 = std::max(worst3, std::abs(got[0] - expect));
        }
        std::printf("Gamma3 worst err = %.3e, |expect| = %.12f\n", worst3, 1.0 / std::sqrt(5.0));
    }

    std::printf("\n== scalar linear fixed point ==\n");
    {
        // u' = -0.9 u + cos t via g(t,u) = cos t + 0.1 u on lambda = -1
        auto op = SpectralOperator::from_eigenvalues({Complex{-1.0, 0.0}});
        ProblemSpec p;
        p.op = op;
        p.alpha = 0.5;
        p.beta = 0.75;
        p.gamma_fraction = 0.5;
        p.B = BoundedMap::identity(op, p.alpha);
        p.C = BoundedMap::identity(op, p.alpha);
        LipschitzMap fmap{MapKind::Linear, {0.0}};
        PAPFunction fforce;
        fforce.ap = TrigPolynomial(1);
        p.f = make_nonlinearity(op, fforce, fmap, p.beta);
        LipschitzMap gmap{MapKind::Linear, {0.1}};
        PAPFunction gforce;
        gforce.ap = TrigPolynomial(1);
        gforce.ap.add_real_cosine(1.0, {1.0});
        p.g = make_nonlinearity(op, gforce, gmap, 0.0);

        auto consts = estimate_constants(op, p.alpha, p.beta, p.gamma_fraction);
        std::printf("theta(scalar linear, gf=0.5) = %.6f\n",
                    theta_constant(consts, p.lipschitz_K(), p.varpi(), p.alpha, p.beta));

        const auto t0 = std::chrono::steady_clock::now();
        SolverOptions opts;
        const GridPlan plan = plan_grid(p, opts);
        std::printf("window T=%.3f points=%zu Lg=%.3f\n", plan.window, plan.points,
                    plan.L_gamma);
        auto start = sample_initial_guess(p, PAPFunction{}, plan);
        auto [u, rep] = picard_solve(p, std::move(start), 5e-5, 40, opts);
        const auto t1 = std::chrono::steady_clock::now();
        double amp = 0.0;
        for (std::size_t k = 0; k < u.points(); ++k) {
            if (std::abs(u.node(k)) > 0.5 * u.half_width()) continue;
            amp = std::max(amp, std::abs(u.sample(k)[0]));
        }
        std::printf("iterations=%d residual=%.3e amplitude=%.7f vs %.7f  (%.2f s)\n",
                    rep.iterations, rep.final_residual, amp, 1.0 / std::sqrt(1.81),
                    std::chrono::duration<double>(t1 - t0).count());
        std::printf("ratios:");
        for (double r : rep.contraction_ratios) std::printf(" %.4f", r);
        std::printf("\n");
    }

    std::printf("\n== heat desk theta calibration ==\n");
    {
        ForcingSpec fs;
        fs.g_ap.push_back({1.0, 1.0, false, -1});
        for (double K : {0.1, 0.2, 0.236, 0.25}) {
            auto p = build_heat(HeatModel{1.0, 16}, 0.5, 0.75, K, 0.3, fs, 0.9);
            auto c = estimate_constants(p.op, 0.5, 0.75, 0.9);
            std::printf("K=%.3f -> theta=%.6f (varpi=%.6f)\n", K,
                        theta_constant(c, p.lipschitz_K(), p.varpi(), 0.5, 0.75), p.varpi());
        }
    }

    std::printf("\n== ergodic means ==\n");
    {
        auto f = [](double t) { return std::exp(-std::abs(t)); };
        std::printf("exp mean r=10: %.12f vs %.12f\n", ergodic_mean(f, 10.0),
                    (1.0 - std::exp(-10.0)) / 10.0);
        auto g = [](double t) { return std::abs(std::cos(2.0 * kPi * t)); };
        std::printf("cos mean r=10: %.12f vs 2/pi=%.12f\n", ergodic_mean(g, 10.0),
                    2.0 / kPi);
    }
    return 0;
}
