#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "glscov/fundamental.hpp"

using namespace glscov;
using oracle::kE;

TEST_CASE("power family at delta = e^-2") {
    const auto r = fundamental(PsiFunction::power(1.0), std::exp(-2.0));
    CHECK(r.value == doctest::Approx(1.0 / (2.0 * kE)).epsilon(1e-9));
    CHECK(r.argmax_p == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("closed form against a brute-force sup") {
    for (double m : {0.5, 1.0, 2.0, 5.0}) {
        for (double d : {1e-2, 1e-4, 1e-8}) {
            const double cf = closed_form_power(m, d);
            CHECK(oracle::rel(cf, std::pow(kE * m, -1.0 / m) * std::pow(-std::log(d), -1.0 / m)) < 1e-14);
            const double brute = oracle::fundamental([m](double p) { return oracle::power(m, p); }, d);
            CHECK(oracle::rel(fundamental(PsiFunction::power(m), d).value, brute) < 1e-8);
            CHECK(oracle::rel(cf, brute) < 1e-8);
        }
    }
    CHECK(closed_form_power(2.0, std::exp(-2.0)) == doctest::Approx(1.0 / (2.0 * std::sqrt(kE))));
    CHECK_THROWS_AS(closed_form_power(1.0, std::exp(-1.0)), DomainError);
    CHECK_THROWS_AS(closed_form_power(1.0, 0.5), DomainError);
}

TEST_CASE("extremal family gives delta^(1/r)") {
    for (double r : {1.5, 2.0, 4.0, 8.0})
        for (double d : {1.0, 0.5, 1e-3, 1e-9}) CHECK(std::abs(fundamental(PsiFunction::extremal(r), d).value - std::pow(d, 1.0 / r)) < 1e-12);
}

TEST_CASE("delta = 1 gives 1 at p = 1 for powers") {
    for (double m : {0.5, 1.0, 3.0}) {
        const auto r = fundamental(PsiFunction::power(m), 1.0);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.argmax_p == doctest::Approx(1.0));
    }
}

TEST_CASE("truncated fundamental") {
    const double d = std::exp(-2.0);
    CHECK(fundamental_truncated(PsiFunction::power(1.0), 1.0, d).value == doctest::Approx(1.0 / (2.0 * kE)).epsilon(1e-9));
    const auto t = fundamental_truncated(PsiFunction::power(1.0), 4.0, d);
    CHECK(t.value == doctest::Approx(std::exp(-0.5) / 4.0).epsilon(1e-9));
    CHECK(t.argmax_p == doctest::Approx(4.0));

    const auto fs = PsiFunction::finite_support(2.0, 1.0);
    const double brute = std::exp(oracle::grid_max(
        [](double p) { return std::log(0.5) / p + std::log(2.0 - p); }, 1.5, 2.0 - 1e-9, 100000));
    CHECK(oracle::rel(fundamental_truncated(fs, 1.5, 0.5).value, brute) < 1e-6);
    CHECK_THROWS_AS(fundamental_truncated(fs, 2.0, 0.5), DomainError);
    CHECK_THROWS_AS(fundamental_truncated(fs, 3.0, 0.5), DomainError);
}

TEST_CASE("fundamental is nondecreasing in delta and truncation only lowers it") {
    const std::vector<PsiFunction> fams{PsiFunction::power(1.0), PsiFunction::finite_support(4.0, 0.5),
                                        PsiFunction::tabulated({{1.0, 1.0}, {3.0, 1.5}, {10.0, 4.0}})};
    for (const auto& psi : fams) {
        double prev = 0.0;
        for (double d = 1e-12; d <= 1.0; d *= 10.0) {
            const double v = fundamental(psi, d).value;
            CHECK(v >= prev * (1.0 - 1e-12));
            CHECK(fundamental_truncated(psi, 2.5, d).value <= v * (1.0 + 1e-12));
            prev = v;
        }
    }
}

TEST_CASE("tabulated function against brute force") {
    const auto t = PsiFunction::tabulated({{1.0, 1.0}, {2.0, 1.3}, {5.0, 2.9}, {20.0, 9.0}});
    const auto f = [&](double p) { return eval_psi(t, p); };
    for (double d : {0.3, 1e-3, 1e-7}) CHECK(oracle::rel(fundamental(t, d).value, oracle::fundamental(f, d, 1.0, 20.0)) < 1e-8);
}

TEST_CASE("finite-support closed form and constant") {
    const double d = std::exp(-4.0);
    const auto c = closed_form_finite(2.0, 1.0, d);
    CHECK(c.stated_constant == doctest::Approx(2.0));
    CHECK(c.value == doctest::Approx(2.0 * std::exp(-2.0) / 4.0).epsilon(1e-12));
    CHECK(c.shape == doctest::Approx(std::exp(-2.0) / 4.0).epsilon(1e-12));
    const double brute = oracle::fundamental([](double p) { return 1.0 / (2.0 - p); }, d, 1.0, 2.0 - 1e-12);
    CHECK(oracle::rel(c.observed_ratio * c.shape, brute) < 1e-7);
    CHECK(c.constant_mismatch);

    // beta = 0: the sup is delta^{1/b}
    const auto z = closed_form_finite(2.0, 0.0, 1e-4);
    CHECK(z.observed_ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(z.stated_constant == doctest::Approx(0.5));
    CHECK(z.constant_mismatch);
    CHECK(fundamental(PsiFunction::finite_support(2.0, 0.0), 1e-4).value == doctest::Approx(1e-2).epsilon(1e-6));
}

TEST_CASE("finite-support shape is stable for small delta") {
    for (auto [b, beta] : std::vector<std::pair<double, double>>{{2.0, 1.0}, {4.0, 0.5}}) {
        const auto psi = PsiFunction::finite_support(b, beta);
        const auto shape = [&](double d) { return std::pow(d, 1.0 / b) * std::pow(-std::log(d), -beta); };
        const double r8 = fundamental(psi, 1e-8).value / shape(1e-8);
        const double r12 = fundamental(psi, 1e-12).value / shape(1e-12);
        CHECK(std::abs(r8 / r12 - 1.0) < 0.05);
    }
}

TEST_CASE("g transform and its derivative") {
    CHECK(g_transform(PsiFunction::power(1.0), 0.5) == doctest::Approx(-std::log(2.0)));
    for (double m : {0.5, 1.0, 3.0}) {
        const auto psi = PsiFunction::power(m);
        for (double x : {0.05, 0.3, 0.9}) {
            CHECK(g_transform(psi, x) == doctest::Approx(std::log(x) / m));
            CHECK(g_prime(psi, x) == doctest::Approx(1.0 / (m * x)));
            const double h = 1e-6;
            const double fd = (g_transform(psi, x + h) - g_transform(psi, x - h)) / (2.0 * h);
            CHECK(std::abs(fd - g_prime(psi, x)) < 1e-6 * std::max(1.0, g_prime(psi, x)));
        }
        CHECK(g_prime(psi, 1e-6) > 1e5 / m);
    }
    const auto t = PsiFunction::tabulated({{1.0, 1.0}, {2.0, 1.5}, {8.0, 3.0}});
    const double x = 0.3;
    CHECK(g_prime(t, x) == doctest::Approx((g_transform(t, x + 1e-5) - g_transform(t, x - 1e-5)) / 2e-5).epsilon(1e-4));
    CHECK_THROWS_AS(g_transform(PsiFunction::finite_support(2.0, 1.0), 0.4), DomainError);
}

TEST_CASE("argmax solves g' = ln(1/delta)") {
    for (double m : {0.5, 1.0, 2.0}) {
        for (double d : {1e-2, 1e-5, 1e-9}) {
            const auto s = solve_argmax(PsiFunction::power(m), d);
            CHECK(s.from_root);
            CHECK(s.p == doctest::Approx(-m * std::log(d)).epsilon(1e-8));
            CHECK(s.p == doctest::Approx(fundamental(PsiFunction::power(m), d).argmax_p).epsilon(1e-5));
        }
    }
    CHECK(solve_argmax(PsiFunction::power(1.0), std::exp(-2.0)).p == doctest::Approx(2.0));
}

TEST_CASE("argmax grows without bound for powers") {
    double prev = 0.0;
    for (int k : {2, 4, 8}) {
        const double p = solve_argmax(PsiFunction::power(1.5), std::pow(10.0, -k)).p;
        CHECK(p > prev);
        prev = p;
    }
    CHECK(prev > 20.0);
}

TEST_CASE("argmax tends to b for finite support") {
    for (auto [b, beta] : std::vector<std::pair<double, double>>{{2.0, 1.0}, {4.0, 0.5}, {3.0, 2.0}}) {
        const auto psi = PsiFunction::finite_support(b, beta);
        double prev = 0.0;
        for (int k = 2; k <= 12; ++k) {
            const double p = fundamental(psi, std::pow(10.0, -k)).argmax_p;
            CHECK(p > prev);
            CHECK(p < b);
            prev = p;
        }
        // stationarity: b - p = beta p^2 / |ln delta|
        for (double d : {1e-12, 1e-100, 1e-300}) {
            const double p = fundamental(psi, d).argmax_p;
            CHECK(b - p == doctest::Approx(beta * p * p / -std::log(d)).epsilon(1e-5));
            CHECK(p >= prev);
            prev = p;
        }
        CHECK(b - prev < 0.05 * b);
    }
}
