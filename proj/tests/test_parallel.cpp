#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "glscov/clt.hpp"
#include "glscov/cov_bounds.hpp"
#include "glscov/finite_oracle.hpp"
#include "glscov/optimize.hpp"
#include "glscov/parallel.hpp"

using namespace glscov;

TEST_CASE("2-D scan: OpenMP equals the serial reference") {
    const auto f = [](double u, double w) { return std::sin(7.0 * u) * std::cos(5.0 * w) - (u - 0.3) * (u - 0.3) - w * w * 0.2; };
    for (Region reg : {Region::rectangle, Region::triangle}) {
        for (int n : {31, 128, 512}) {
            const auto a = grid_scan_2d_serial(f, Interval{1e-6, 1.0}, Interval{1e-6, 1.0}, reg, n, 1e-9);
            const auto b = grid_scan_2d_parallel(f, Interval{1e-6, 1.0}, Interval{1e-6, 1.0}, reg, n, 1e-9);
            CHECK(a.u == b.u);
            CHECK(a.w == b.w);
            CHECK(a.value == b.value);
        }
    }
}

TEST_CASE("Phi is identical under serial and parallel execution") {
    OptimizerOptions s;
    s.exec = Exec::serial;
    OptimizerOptions p;
    p.exec = Exec::parallel;
    const auto a = uniform_phi(PsiFunction::power(1.0), PsiFunction::finite_support(6.0, 1.0), 0.01, 0.2, s);
    const auto b = uniform_phi(PsiFunction::power(1.0), PsiFunction::finite_support(6.0, 1.0), 0.01, 0.2, p);
    CHECK(a.value == b.value);
    CHECK(a.p == b.p);
}

TEST_CASE("campaign: OpenMP equals the serial reference") {
    CampaignConfig c;
    c.instances = 300;
    c.seed = 5;
    const auto a = verify_campaign(c, Exec::serial);
    const auto b = verify_campaign(c, Exec::parallel);
    CHECK(a.violations == b.violations);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.tightest_index == b.tightest_index);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].cov == b.rows[i].cov);
        CHECK(a.rows[i].alpha == b.rows[i].alpha);
        CHECK(a.rows[i].tightest_bound == b.rows[i].tightest_bound);
    }
}

TEST_CASE("Sigma(n) estimates do not depend on the thread schedule") {
    SequenceModel m;
    m.coeffs = {1.0, 0.5};
    m.seed = 3;
    const std::vector<std::uint64_t> ns{10, 100};
    const auto a = sigma_n_estimate(m, ns, 200, 3, Exec::serial);
    const auto b = sigma_n_estimate(m, ns, 200, 3, Exec::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mean == b[i].mean);
        CHECK(a[i].variance == b[i].variance);
    }
}

TEST_CASE("y and z sequences: OpenMP equals serial") {
    const auto prof = profile_from_functions([](int k) { return 0.25 * std::pow(0.8, k); }, [](int k) { return std::pow(0.8, k); },
                                             PsiFunction::power(2.0), 200);
    OptimizerOptions s;
    s.exec = Exec::serial;
    CHECK(y_sequence(prof, s) == y_sequence(prof));
    CHECK(z_sequence(prof, s) == z_sequence(prof));
}

TEST_CASE("sample moments: OpenMP equals serial") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    std::vector<double> x(200000);
    for (auto& v : x) v = nd(rng);
    const std::vector<double> grid{1.0, 2.0, 6.0};
    const auto a = MomentTable::from_samples(x, grid, 0, Exec::serial);
    const auto b = MomentTable::from_samples(x, grid, 0, Exec::parallel);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a.entries[i].value == b.entries[i].value);
}

TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}
