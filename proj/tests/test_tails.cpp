#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "glscov/tails.hpp"

using namespace glscov;
using oracle::kE;

TEST_CASE("v(p) = p ln psi(p)") {
    CHECK(v_of(PsiFunction::power(1.0), 2.0) == doctest::Approx(2.0 * std::log(2.0)));
    for (double m : {0.5, 2.0})
        for (double p : {1.0, 3.0, 10.0}) CHECK(v_of(PsiFunction::power(m), p) == doctest::Approx(p / m * std::log(p)));
    CHECK(v_of(PsiFunction::extremal(4.0), 3.0) == 0.0);
    CHECK(v_of(PsiFunction::extremal(4.0), 5.0) == kInf);
}

TEST_CASE("conjugate of power and extremal families") {
    for (double x : {1.0, 1.5, 3.0, 6.0}) CHECK(conjugate(PsiFunction::power(1.0), x).value == doctest::Approx(std::exp(x - 1.0)).epsilon(1e-9));
    for (double y : {3.0, 4.0, 6.0}) CHECK(conjugate(PsiFunction::power(2.0), std::log(y)).value == doctest::Approx(y * y / (2.0 * kE)).epsilon(1e-9));
    for (double r : {2.0, 5.0}) {
        CHECK(conjugate(PsiFunction::extremal(r), 0.7).value == doctest::Approx(r * 0.7));
        CHECK(conjugate(PsiFunction::extremal(r), -0.7).value == doctest::Approx(-0.7));
    }
}

TEST_CASE("conjugate matches a brute-force sup") {
    const auto psi = PsiFunction::finite_support(6.0, 0.5);
    for (double x : {0.0, 0.5, 2.0}) {
        const double brute = oracle::refined_max([&](double p) { return p * x - v_of(psi, p); }, 1.0, 6.0 - 1e-12);
        CHECK(oracle::rel(conjugate(psi, x).value, brute) < 1e-8);
    }
}

TEST_CASE("Fenchel-Young inequality on a grid") {
    for (const auto& psi : {PsiFunction::power(1.0), PsiFunction::power(3.0), PsiFunction::finite_support(5.0, 1.0)}) {
        for (double x = -1.0; x <= 4.0; x += 0.25) {
            const double vs = conjugate(psi, x).value;
            for (double p = 1.0; p < std::min(psi.support_bound(), 60.0); p *= 1.2) CHECK(p * x <= v_of(psi, p) + vs + 1e-8);
        }
    }
}

TEST_CASE("conjugate is convex") {
    const auto psi = PsiFunction::power(1.5);
    for (double x = 0.0; x < 3.0; x += 0.2) {
        const double a = conjugate(psi, x).value;
        const double b = conjugate(psi, x + 0.4).value;
        const double mid = conjugate(psi, x + 0.2).value;
        CHECK(mid <= 0.5 * (a + b) + 1e-9);
    }
}

TEST_CASE("unbounded conjugate is flagged") {
    // stationary point p = e^{x-1} lies beyond the cap for x = 20
    CHECK(conjugate(PsiFunction::power(1.0), 20.0).unbounded_at_cap);
    CHECK_FALSE(conjugate(PsiFunction::power(1.0), 5.0).unbounded_at_cap);
}

TEST_CASE("tail bound closed forms") {
    for (double y = kE; y < 8.0; y += 0.5) {
        CHECK(tail_bound(PsiFunction::power(2.0), 1.0, y) == doctest::Approx(std::min(1.0, 2.0 * std::exp(-y * y / (2.0 * kE)))).epsilon(1e-8));
        CHECK(tail_bound(PsiFunction::power(1.0), 1.0, y) == doctest::Approx(std::min(1.0, 2.0 * std::exp(-y / kE))).epsilon(1e-8));
    }
    const double at = tail_bound(PsiFunction::power(0.5), 2.0, 2.0 * kE);
    CHECK(at > 0.0);
    CHECK(at <= 2.0);
    CHECK_THROWS_WITH_AS(tail_bound(PsiFunction::power(1.0), 1.0, 2.0), doctest::Contains("below validity threshold"), DomainError);
}

TEST_CASE("tail bound scales with the norm") {
    const auto psi = PsiFunction::power(2.0);
    CHECK(tail_bound(psi, 3.0, 15.0) == doctest::Approx(tail_bound(psi, 1.0, 5.0)));
}

TEST_CASE("Orlicz function") {
    const auto psi = PsiFunction::power(2.0);
    CHECK(orlicz_N(psi, kE) == doctest::Approx(std::exp(kE / 2.0)).epsilon(1e-8));
    CHECK(orlicz_N(psi, 0.0) == 0.0);
    for (double u : {1.0, kE, 10.0}) CHECK(orlicz_N(psi, -u) == orlicz_N(psi, u));
    CHECK(orlicz_N(psi, kE - 1e-9) == doctest::Approx(orlicz_N(psi, kE + 1e-9)).epsilon(1e-6));
    CHECK(orlicz_N(psi, 1.0) == doctest::Approx(std::exp(kE / 2.0) / (kE * kE)).epsilon(1e-8));
}

TEST_CASE("empirical tails") {
    const std::vector<double> pm{-1.0, 1.0};
    CHECK(empirical_tail(pm, 0.5) == 0.5);
    const std::vector<double> zero(10, 0.0);
    CHECK(empirical_tail(zero, 1.0) == 0.0);
    CHECK_THROWS_AS(empirical_tail(std::vector<double>{}, 1.0), DomainError);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    std::vector<double> x(1000000);
    for (auto& v : x) v = nd(rng);
    const double p = oracle::normal_sf(3.0);
    const double se = std::sqrt(p * (1.0 - p) / x.size());
    CHECK(std::abs(empirical_tail(x, 3.0) - p) < 3.0 * se);
    const std::vector<double> ys{0.5, 1.0, 3.0};
    const auto g = empirical_tail_grid(x, ys);
    for (std::size_t i = 0; i < ys.size(); ++i) CHECK(g[i] == empirical_tail(x, ys[i]));
}
