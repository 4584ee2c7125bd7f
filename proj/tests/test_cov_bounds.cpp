#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "glscov/cov_bounds.hpp"
#include "glscov/fundamental.hpp"

using namespace glscov;
using oracle::kE;

namespace {

// sup over the open triangle u + w < 1 of alpha^u beta^w / (psi(1/u) nu(1/w)), dense grid
double brute_phi(const PsiFunction& psi, const PsiFunction& nu, double alpha, double beta, int n = 1500) {
    double best = -oracle::kInf;
    for (int i = 1; i < n; ++i) {
        const double u = static_cast<double>(i) / n;
        const double lp = psi.log_eval_u(u);
        if (lp == oracle::kInf) continue;
        for (int j = 1; i + j < n; ++j) {
            const double w = static_cast<double>(j) / n;
            const double ln = nu.log_eval_u(w);
            if (ln == oracle::kInf) continue;
            best = std::max(best, u * std::log(alpha) + w * std::log(beta) - lp - ln);
        }
    }
    return std::exp(best);
}

}  // namespace

TEST_CASE("Davydov bound") {
    CHECK(davydov_bound(std::exp(-1.0), 4.0, 4.0, 1.0, 1.0).value == doctest::Approx(12.0 * std::exp(-0.5)));
    const auto z = davydov_bound(0.0, 4.0, 4.0, 1.0, 1.0);
    CHECK(z.value == 0.0);
    CHECK(z.feasible);
    const auto inf = davydov_bound(0.5, 2.0, 2.0, 1.0, 1.0);
    CHECK_FALSE(inf.feasible);
    CHECK(inf.value == kInf);
    CHECK(davydov_bound(0.1, 4.0, kInf, 2.0, 3.0).value == doctest::Approx(12.0 * std::pow(0.1, 0.75) * 6.0));
    CHECK_THROWS_AS(davydov_bound(1.5, 4.0, 4.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(davydov_bound(-0.1, 4.0, 4.0, 1.0, 1.0), DomainError);
}

TEST_CASE("Ibragimov and Hoelder bounds") {
    CHECK(ibragimov_bound(0.25, 2.0, 1.0, 1.0).value == doctest::Approx(1.0));
    for (double p : {1.5, 3.0, kInf}) {
        CHECK(ibragimov_bound(1.0, p, 1.0, 1.0).value == doctest::Approx(2.0));
        CHECK(ibragimov_bound(1.0, p, 2.0, 3.0).value == doctest::Approx(holder_bound(p, 2.0, 3.0).value));
        CHECK(ibragimov_bound(0.0, p, 1.0, 1.0).value == 0.0);
    }
    CHECK(ibragimov_bound(0.3, kInf, 1.0, 1.0).value == doctest::Approx(2.0));
    CHECK_THROWS_AS(ibragimov_bound(0.5, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("strong-mixing GLS bound against a 1-D brute force") {
    const auto p1 = PsiFunction::power(1.0);
    const double beta = std::exp(-4.0);
    const double brute = 2.0 * std::exp(-oracle::refined_max(
                                   [&](double p) { return -(std::log(beta) / p + std::log(p) + std::log(oracle::conj(p))); },
                                   1.0 + 1e-9, 2000.0));
    const auto r = gls_strong_bound(p1, p1, beta, 1.0, 1.0);
    CHECK(oracle::rel(r.value, brute) < 1e-6);

    const auto p2 = PsiFunction::power(2.0);
    const double b1 = 2.0 * std::exp(-oracle::refined_max(
                                [&](double p) { return -(0.5 * std::log(p) + std::log(oracle::conj(p))); }, 1.0 + 1e-9,
                                2000.0));
    CHECK(oracle::rel(gls_strong_bound(p2, p1, 1.0, 1.0, 1.0).value, b1) < 1e-6);

    const auto z = gls_strong_bound(p1, p1, 0.0, 1.0, 1.0);
    CHECK(z.value == 0.0);
    CHECK(z.feasible);
}

TEST_CASE("dual-pair bound is the squared fundamental at beta^-1/2") {
    for (double m : {1.0, 2.0, 0.5}) {
        const auto psi = PsiFunction::power(m);
        for (int k = 1; k <= 10; k += 3) {
            const double beta = std::exp(-static_cast<double>(k));
            const auto a = gls_dual_pair_bound(psi, beta, 1.0, 1.0);
            const auto b = gls_strong_bound(psi, dual_psi(psi), beta, 1.0, 1.0);
            CHECK(oracle::rel(a.value, b.value) < 1e-9);
            const double phi = oracle::fundamental([m](double p) { return oracle::power(m, p); }, 1.0 / std::sqrt(beta));
            CHECK(oracle::rel(a.value, 2.0 / (phi * phi)) < 1e-7);
        }
    }
}

TEST_CASE("Phi: grid route, theta route and brute force agree") {
    struct Pair {
        PsiFunction a;
        PsiFunction b;
    };
    const std::vector<Pair> pairs{{PsiFunction::power(1.0), PsiFunction::power(1.0)},
                                  {PsiFunction::power(1.0), PsiFunction::power(2.0)},
                                  {PsiFunction::power(2.0), PsiFunction::finite_support(6.0, 1.0)},
                                  {PsiFunction::finite_support(4.0, 0.5), PsiFunction::finite_support(5.0, 1.0)}};
    for (const auto& pr : pairs) {
        for (auto [al, be] : std::vector<std::pair<double, double>>{{1e-3, 1e-3}, {0.2, 0.01}, {1.0, 1.0}}) {
            const auto g = uniform_phi(pr.a, pr.b, al, be);
            const auto t = uniform_phi_theta(pr.a, pr.b, al, be);
            CHECK(oracle::rel(g.value, t.value) < 1e-6);
            CHECK(oracle::rel(g.value, brute_phi(pr.a, pr.b, al, be)) < 5e-3);
            CHECK(g.value >= brute_phi(pr.a, pr.b, al, be) * (1.0 - 1e-9));
            CHECK(1.0 / g.p + 1.0 / g.q <= 1.0);
        }
    }
}

TEST_CASE("uniform-mixing bound") {
    const auto p1 = PsiFunction::power(1.0);
    const double a = std::exp(-4.0);
    const auto r = gls_uniform_bound(p1, p1, a, 1.0, 1.0);
    CHECK(r.value == doctest::Approx(192.0 * std::exp(-2.0)).epsilon(1e-6));
    CHECK(r.value == doctest::Approx(12.0 * kE * kE * a * 16.0).epsilon(1e-6));

    const auto z = gls_uniform_bound(p1, p1, 0.0, 1.0, 1.0);
    CHECK(z.value == 0.0);
    CHECK(z.feasible);

    for (auto [ps, qs] : std::vector<std::pair<double, double>>{{4.0, 4.0}, {3.0, 6.0}, {2.5, 8.0}}) {
        for (double al : {0.3, 1e-3}) {
            const auto e = gls_uniform_bound(PsiFunction::extremal(ps), PsiFunction::extremal(qs), al, 1.0, 1.0);
            CHECK(oracle::rel(e.value, 12.0 * std::pow(al, 1.0 - 1.0 / ps - 1.0 / qs)) < 1e-9);
            CHECK(oracle::rel(e.value, davydov_bound(al, ps, qs, 1.0, 1.0).value) < 1e-9);
        }
    }

    const auto p2 = PsiFunction::power(2.0);
    CHECK(oracle::rel(gls_uniform_bound(p1, p2, 1.0, 1.0, 1.0).value, 12.0 / brute_phi(p1, p2, 1.0, 1.0)) < 5e-3);

    // supports 2 and 2: 1/p + 1/q < 1 is impossible with p, q < 2
    const auto fs = PsiFunction::finite_support(2.0, 1.0);
    const auto e = gls_uniform_bound(fs, fs, 0.1, 1.0, 1.0);
    CHECK_FALSE(e.feasible);
}

TEST_CASE("identical-space bound") {
    const auto p1 = PsiFunction::power(1.0);
    CHECK(gls_identical_bound(p1, std::exp(-2.0), 1.0, 1.0).value == doctest::Approx(48.0).epsilon(1e-8));
    for (double r : {3.0, 5.0})
        for (double al : {0.5, 1e-4}) CHECK(gls_identical_bound(PsiFunction::extremal(r), al, 1.0, 1.0).value == doctest::Approx(12.0 * std::pow(al, 1.0 - 2.0 / r)).epsilon(1e-10));
    const double tiny = gls_identical_bound(p1, 1e-12, 1.0, 1.0).value;
    CHECK(tiny < 1e-7);
    CHECK(tiny == doctest::Approx(12.0 * kE * kE * 1e-12 * std::pow(std::log(1e-12), 2.0)).epsilon(1e-6));
    CHECK(gls_identical_bound(p1, 0.0, 1.0, 1.0).value == 0.0);
}

TEST_CASE("closed-form examples") {
    const auto e1 = example_power_power(1.0, 1.0, std::exp(-2.0), 1.0, 1.0);
    CHECK(e1.value == doctest::Approx(48.0).epsilon(1e-12));
    CHECK(oracle::rel(e1.value, gls_identical_bound(PsiFunction::power(1.0), std::exp(-2.0), 1.0, 1.0).value) < 1e-6);
    CHECK_THROWS_WITH_AS(example_power_power(1.0, 1.0, 0.5, 1.0, 1.0), doctest::Contains("Hölder"), DomainError);

    const auto e2 = example_finite_finite(4.0, 0.0, 4.0, 0.0, std::exp(-1.0), 1.0, 1.0);
    CHECK(e2.value == doctest::Approx(12.0 * std::pow(constant_K(4.0, 0.0), 2.0) * std::exp(-0.5)));
    CHECK(constant_K(4.0, 0.0) == doctest::Approx(0.25));
    CHECK_FALSE(example_finite_finite(2.0, 1.0, 2.0, 1.0, 0.1, 1.0, 1.0).feasible);

    // p = m |ln alpha|, with the finite-support side evaluated as quoted
    const double a = 1e-3;
    const auto e3 = example_power_finite(1.0, 4.0, 1.0, a, 1.0, 1.0);
    CHECK(e3.value == doctest::Approx(12.0 * kE * constant_K(4.0, 1.0) * std::pow(a, 0.75) * std::pow(-std::log(a), 2.0)));

    for (double r : {4.0, 8.0}) {
        const double q0 = 2.0;  // q0' = 2 < r
        const auto c = example_combined(PsiFunction::extremal(r), q0, 0.05, 1.0, 1.0);
        CHECK(oracle::rel(c.value, davydov_bound(0.05, r, q0, 1.0, 1.0).value) < 1e-9);
    }
    CHECK_FALSE(example_combined(PsiFunction::finite_support(2.0, 1.0), 2.0, 0.05, 1.0, 1.0).feasible);
}

TEST_CASE("factorization") {
    const auto p1 = PsiFunction::power(1.0);
    const auto f = factorization_check(p1, p1, std::exp(-4.0), std::exp(-4.0));
    CHECK(f.holds);
    CHECK(f.p_alpha == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(std::abs(f.lhs - f.rhs) <= 1e-6 * f.rhs);

    const auto g = factorization_check(p1, p1, std::exp(-1.0), std::exp(-1.0));
    CHECK_FALSE(g.holds);
    CHECK(g.lhs < g.rhs * (1.0 - 1e-3));

    const auto fs = PsiFunction::finite_support(2.0, 1.0);
    const auto s = factorization_check(fs, PsiFunction::finite_support(2.0, 0.5), 0.01, 0.01);
    CHECK_FALSE(s.holds);
    CHECK(s.reason == "supports too small");
    CHECK(s.support_case == "finite_finite");
}

TEST_CASE("one-sided factorization inequality always holds") {
    const std::vector<PsiFunction> fams{PsiFunction::power(1.0), PsiFunction::power(3.0), PsiFunction::finite_support(3.0, 1.0),
                                        PsiFunction::finite_support(6.0, 0.5)};
    for (const auto& a : fams)
        for (const auto& b : fams)
            for (double al : {0.3, 1e-2, 1e-6})
                for (double be : {0.3, 1e-4}) {
                    const auto f = factorization_check(a, b, al, be);
                    CHECK(f.lhs <= f.rhs * (1.0 + 1e-9) + 1e-9);
                    CHECK(f.one_sided_ok);
                }
}

TEST_CASE("generic engine reproduces the specialised bounds") {
    const auto p1 = PsiFunction::power(1.0);
    const auto p2 = PsiFunction::power(2.0);
    for (double al : {1e-4, 0.05}) {
        const auto g = generic_bound(davydov_kernel(al), p1, p2, BoundDomain{DomainKind::T}, 1.0, 1.0);
        CHECK(oracle::rel(g.value, gls_uniform_bound(p1, p2, al, 1.0, 1.0).value) < 1e-6);
    }
    for (double be : {1e-4, 0.3}) {
        const auto g = generic_bound(ibragimov_kernel(be), p1, p2, BoundDomain{DomainKind::conjugate_line}, 1.0, 1.0);
        CHECK(oracle::rel(g.value, gls_strong_bound(p1, p2, be, 1.0, 1.0).value) < 1e-6);
    }
    const auto h = generic_bound(holder_kernel(), p1, p2, BoundDomain{DomainKind::conjugate_line}, 2.0, 1.5);
    const double brute = 2.0 * 3.0 *
                         std::exp(-oracle::refined_max([](double p) { return -(std::log(p) + 0.5 * std::log(oracle::conj(p))); },
                                                       1.0 + 1e-9, 2000.0));
    CHECK(oracle::rel(h.value, brute) < 1e-6);

    BoundDomain rect{DomainKind::rectangle, 4.0, 8.0, 4.0, 8.0};
    const auto r = generic_bound(davydov_kernel(0.01), PsiFunction::extremal(8.0), PsiFunction::extremal(8.0), rect, 1.0, 1.0);
    CHECK(oracle::rel(r.value, 12.0 * std::pow(0.01, 0.75)) < 1e-9);
}

TEST_CASE("uniform bound: below Davydov at a fixed admissible point, increasing in alpha") {
    const auto ext4 = PsiFunction::extremal(4.0);
    for (double al : {0.01, 0.2}) {
        const double gls = gls_uniform_bound(ext4, ext4, al, 1.0, 1.0).value;
        CHECK(gls <= davydov_bound(al, 4.0, 4.0, 1.0, 1.0).value * (1.0 + 1e-9));
    }
    const auto p1 = PsiFunction::power(1.0);
    for (double al : {1e-6, 1e-3, 0.1}) {
        const double a = gls_uniform_bound(p1, p1, al, 1.0, 1.0).value;
        const double b = gls_uniform_bound(p1, p1, al * 2.0, 1.0, 1.0).value;
        CHECK(a <= b);
    }
}
