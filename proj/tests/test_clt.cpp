#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "glscov/clt.hpp"
#include "glscov/fundamental.hpp"

using namespace glscov;
using oracle::kE;

namespace {

SequenceModel two_state(double flip) {
    SequenceModel m;
    m.kind = SequenceModel::Kind::finite_markov;
    m.transition = {{1.0 - flip, flip}, {flip, 1.0 - flip}};
    m.state_values = {1.0, -1.0};
    return m;
}

// Var(n^{-1/2} S_n) for unit-variance autocorrelations r(k)
double sigma_from_acf(const std::function<double(int)>& r, int n) {
    double s = 1.0;
    for (int k = 1; k < n; ++k) s += 2.0 * (1.0 - static_cast<double>(k) / n) * r(k);
    return s;
}

}  // namespace

TEST_CASE("y vanishes without mixing") {
    const auto prof = profile_from_functions([](int) { return 0.0; }, [](int) { return 0.0; }, PsiFunction::power(1.0), 64);
    for (double v : y_sequence(prof)) CHECK(v == 0.0);
    for (double v : z_sequence(prof)) CHECK(v == 0.0);
    CHECK(summability_report(y_sequence(prof), 64).partial_sum == 0.0);
}

TEST_CASE("y for the power family with geometric mixing") {
    for (double m : {1.0, 2.0}) {
        const auto prof = profile_from_functions([](int k) { return std::exp(-static_cast<double>(k)); }, [](int) { return 0.0; },
                                                 PsiFunction::power(m), 40);
        const auto y = y_sequence(prof);
        for (int k = 2; k <= 40; ++k) {
            const double expect = std::pow(kE * m, 2.0 / m) * std::exp(-static_cast<double>(k)) * std::pow(k, 2.0 / m);
            CHECK(oracle::rel(y[k], expect) < 1e-8);
        }
    }
}

TEST_CASE("z for power(1) with geometric beta") {
    const auto prof = profile_from_functions([](int) { return 0.0; }, [](int k) { return std::exp(-static_cast<double>(k)); },
                                             PsiFunction::power(1.0), 30);
    const auto z = z_sequence(prof);
    for (int k : {2, 5, 12, 30}) {
        const double brute = std::exp(-oracle::refined_max(
            [k](double p) { return -(-k / p + 2.0 * std::log(p) - std::log(p - 1.0)); }, 1.0 + 1e-9, 5000.0));
        CHECK(oracle::rel(z[k], brute) < 1e-7);
    }
}

TEST_CASE("slow mixing is reported as divergent") {
    const int K = 1 << 14;
    const auto prof = profile_from_functions([](int k) { return 1.0 / k; }, [](int k) { return 1.0 / k; }, PsiFunction::power(2.0), K);
    const auto y = y_sequence(prof);
    CHECK(summability_report(y, K).verdict == Verdict::divergent_evidence);
    // y(k) ~ 2e ln(k)/k
    CHECK(y[K] * K / std::log(static_cast<double>(K)) == doctest::Approx(2.0 * kE).epsilon(0.05));
}

TEST_CASE("summability verdicts on known series") {
    std::vector<double> geo(33, 0.0);
    for (int k = 2; k <= 32; ++k) geo[k] = std::pow(2.0, -k);
    const auto g = summability_report(geo, 32);
    CHECK(g.verdict == Verdict::summable_evidence);
    CHECK(std::abs(g.partial_sum - 0.5) < 1e-4);

    const int K = 10000;
    std::vector<double> harm(K + 1, 0.0);
    std::vector<double> slow(K + 1, 0.0);
    for (int k = 2; k <= K; ++k) {
        harm[k] = 1.0 / k;
        slow[k] = 1.0 / (k * std::log(k) * std::log(k));
    }
    CHECK(summability_report(harm, K).verdict == Verdict::divergent_evidence);
    CHECK(summability_report(slow, K).verdict != Verdict::divergent_evidence);
    CHECK_THROWS_AS(summability_report(geo, 8), DomainError);
}

TEST_CASE("eventual monotonicity") {
    CHECK(eventually_nonincreasing_from(std::vector<double>{0, 0, 3, 2, 1}) == 2);
    CHECK(eventually_nonincreasing_from(std::vector<double>{0, 0, 1, 2, 1, 0.5}) == 3);
    CHECK(eventually_nonincreasing_from(std::vector<double>{0, 0, 1, 2, 3}) == 4);
}

TEST_CASE("trivial natural function is rejected") {
    const auto prof = profile_from_functions([](int) { return 0.1; }, [](int) { return 0.1; }, PsiFunction::extremal(1.0), 20);
    CHECK_THROWS_WITH_AS(y_sequence(prof), doctest::Contains("natural function trivial"), DomainError);
}

TEST_CASE("exact Sigma(n)") {
    SequenceModel iid;
    iid.coeffs = {1.0};
    for (std::uint64_t n : {1, 10, 1000}) CHECK(*exact_sigma_n(iid, n) == doctest::Approx(1.0));

    SequenceModel ma;
    ma.coeffs = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    for (std::uint64_t n : {1, 2, 10, 100}) CHECK(*exact_sigma_n(ma, n) == doctest::Approx(2.0 - 1.0 / n));

    for (double q : {0.1, 0.3, 0.8}) {
        const double rho = 1.0 - 2.0 * q;
        for (int n : {1, 5, 50}) CHECK(*exact_sigma_n(two_state(q), n) == doctest::Approx(sigma_from_acf([rho](int k) { return std::pow(rho, k); }, n)));
    }
    SequenceModel u;
    u.kind = SequenceModel::Kind::user_samples;
    u.samples = {1.0, 2.0, 3.0};
    CHECK_FALSE(exact_sigma_n(u, 10).has_value());
}

TEST_CASE("Monte Carlo Sigma(n) within 3 standard errors") {
    SequenceModel iid;
    iid.coeffs = {1.0};
    SequenceModel ma;
    ma.coeffs = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    SequenceModel rad = ma;
    rad.innovation = Innovation::rademacher;
    const std::vector<std::uint64_t> ns{10, 100, 1000};
    for (const auto& m : {iid, ma, rad, two_state(0.2)}) {
        for (const auto& row : sigma_n_estimate(m, ns, 2000, 17)) {
            REQUIRE(row.exact.has_value());
            CHECK(std::abs(row.variance - *row.exact) <= 3.0 * row.se);
        }
    }
}

TEST_CASE("stationary distribution and chain validation") {
    const auto pi = stationary_distribution({{0.9, 0.1}, {0.2, 0.8}});
    CHECK(pi[0] == doctest::Approx(2.0 / 3.0));
    CHECK(pi[1] == doctest::Approx(1.0 / 3.0));
    SequenceModel bad = two_state(0.2);
    bad.transition[0] = {0.5, 0.6};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("Markov mixing profile") {
    SequenceModel iid;
    iid.kind = SequenceModel::Kind::finite_markov;
    iid.transition = {{0.3, 0.7}, {0.3, 0.7}};
    iid.state_values = {1.0, -1.0};
    const auto z = markov_mixing_profile(iid, 10);
    for (int k = 1; k <= 10; ++k) {
        CHECK(z.alpha[k] == doctest::Approx(0.0).scale(1.0));
        CHECK(z.beta[k] == doctest::Approx(0.0).scale(1.0));
    }

    for (double q : {0.1, 0.3, 0.9}) {
        const double rho = 1.0 - 2.0 * q;
        const auto p = markov_mixing_profile(two_state(q), 40);
        CHECK(p.lower_bound);
        CHECK(p.alpha[1] == doctest::Approx(std::abs(rho) / 4.0));
        // slow oracle on the 4 atoms of (X_0, X_1)
        const double s = 0.5 * (1.0 - q);
        const double d = 0.5 * q;
        const auto m = oracle::slow_mixing({s, d, d, s}, {0, 0, 1, 1}, {0, 1, 0, 1});
        CHECK(p.alpha[1] == doctest::Approx(m.alpha));
        CHECK(p.beta[1] == doctest::Approx(m.beta));
        CHECK(p.alpha[21] / p.alpha[20] == doctest::Approx(std::abs(rho)).epsilon(1e-6));
    }
}

TEST_CASE("m-dependent profile") {
    SequenceModel ma;
    ma.coeffs = {1.0, 0.5, 0.25};
    const auto p = m_dependent_profile(ma, 10);
    CHECK(p.alpha[2] == 0.25);
    CHECK(p.beta[2] == 1.0);
    CHECK(p.alpha[3] == 0.0);
    CHECK(p.beta[10] == 0.0);
}

TEST_CASE("natural function of the models") {
    SequenceModel g;
    g.coeffs = {0.6, 0.8};
    const auto psi = natural_psi(g);
    for (double p : {1.0, 2.0, 5.0, 20.0}) CHECK(eval_psi(psi, p) == doctest::Approx(oracle::gaussian_abs_moment(p)).epsilon(1e-3));

    const auto c = natural_psi(two_state(0.2));
    for (double p : {1.0, 3.0, 100.0}) CHECK(eval_psi(c, p) == doctest::Approx(1.0).epsilon(1e-9));
}
