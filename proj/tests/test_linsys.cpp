#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qaa/qaa.hpp"

using namespace qaa;
using Catch::Matchers::WithinAbs;

TEST_CASE("eigenvalues match a direct matrix-vector residual") {
    for (int n : {2, 3, 4}) {
        for (double y : {2.0, 3.0, 5.0}) {
            ToeplitzSystem sys(n, y);
            for (std::int64_t j = 1; j <= sys.size(); ++j)
                CHECK(eigenpair_residual(sys, j) <= 1e-12);
        }
    }
}

TEST_CASE("normalized eigenvalues land in (1/2, 3/2) for y >= 2") {
    for (int n : {2, 3, 5}) {
        for (double y : {2.0, 2.5, 4.0}) {
            ToeplitzSystem sys(n, y);
            for (std::int64_t j = 1; j <= sys.size(); ++j) {
                double x = normalized_eigenvalue(sys, j);
                CHECK(x > 0.5);
                CHECK(x < 1.5);
            }
        }
    }
}

TEST_CASE("system validation") {
    CHECK_THROWS_AS(ToeplitzSystem(0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ToeplitzSystem(2, 1.0), std::invalid_argument);
    ToeplitzSystem sys(2, 2.0);
    CHECK(sys.size() == 3);
    CHECK_THROWS_AS(eigenvalue(sys, 0), std::out_of_range);
    CHECK_THROWS_AS(eigenvalue(sys, 4), std::out_of_range);
}

TEST_CASE("truncation plan: factor count and tail bound") {
    ToeplitzSystem sys(2, 2.0);
    ReciprocalPlan plan = ReciprocalPlan::for_system(sys);
    CHECK(plan.m == 4);  // ceil(log2(4*2 + 6 + 1)) = ceil(log2 15)
    CHECK(plan.k == 16);
    CHECK_THAT(plan.eps_bound, WithinAbs(std::pow(2.0, -15), 1e-20));

    CHECK_THROWS_AS(ReciprocalPlan::with_factor_count(0), std::invalid_argument);
    CHECK_THROWS_AS(truncation_error_bound(0.4, 4), std::invalid_argument);
    CHECK_THROWS_AS(truncation_error_bound(1.5, 4), std::invalid_argument);
    CHECK_THAT(truncation_error_bound(1.0, 5), WithinAbs(std::pow(2.0, -4), 1e-18));
}

TEST_CASE("product form equals the truncated geometric series") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    for (int trial = 0; trial < 1000; ++trial) {
        double t = dist(rng);
        int m = 1 + int(rng() % 6);
        double product = 1.0, power = t;
        for (int i = 0; i < m; ++i) {
            product *= 1.0 + power;
            power *= power;
        }
        double series = 0.0;
        double term = 1.0;
        for (std::int64_t i = 0; i < (std::int64_t(1) << m); ++i) {
            series += term;
            term *= t;
        }
        CHECK_THAT(product, WithinAbs(series, 1e-12));
    }
}

TEST_CASE("single factor circuit: flag = (1 + t^(2^i)) / 2") {
    ToeplitzSystem sys(2, 2.0);
    for (int i : {0, 1, 2}) {
        Circuit c = build_reciprocal_factor(sys, i);
        for (std::int64_t j = 1; j <= sys.size(); ++j) {
            double t = std::cos(double(j) * kPi / 4.0) / sys.y;
            Complex amp = simulate_flag(c, {{"data", std::uint64_t(j)}});
            CHECK_THAT(amp.real(),
                       WithinAbs((1.0 + std::pow(t, double(std::int64_t(1) << i))) / 2.0, 1e-12));
        }
    }
}

TEST_CASE("factor-by-factor amplitude equals the full-circuit simulation at small m") {
    ToeplitzSystem sys(2, 3.0);
    ReciprocalPlan plan = ReciprocalPlan::with_factor_count(2);
    Circuit full = build_reciprocal_circuit(sys, plan);
    REQUIRE(full.num_qubits() == 2 + 2 * plan.m + int(plan.k) - 1);
    for (std::int64_t j = 1; j <= sys.size(); ++j) {
        Complex whole = simulate_flag(full, {{"data", std::uint64_t(j)}});
        double blockwise = reciprocal_flag_amplitude(sys, plan, j);
        CHECK_THAT(whole.real(), WithinAbs(blockwise, 1e-12));
        CHECK_THAT(whole.imag(), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("scaled flag amplitude approximates the reciprocal") {
    ToeplitzSystem sys(2, 2.0);
    ReciprocalPlan plan = ReciprocalPlan::for_system(sys);
    for (std::int64_t j = 1; j <= sys.size(); ++j) {
        double amp = reciprocal_flag_amplitude(sys, plan, j);
        double scaled = amp * std::pow(2.0, plan.m);
        CHECK_THAT(scaled, WithinAbs(reciprocal_product(sys, j, plan), 1e-10));
        CHECK(std::abs(scaled - 1.0 / normalized_eigenvalue(sys, j)) <= plan.eps_bound);
    }
    // the vanishing-cosine case: product is exactly 1
    CHECK_THAT(reciprocal_product(sys, 2, plan), WithinAbs(1.0, 1e-15));
}
