#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qaa/qaa.hpp"

using namespace qaa;
using Catch::Matchers::WithinAbs;

TEST_CASE("multiply_block: flag carries the product of cosines") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> angle(0.0, kPi / 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 1 + int(rng() % 3);
        std::vector<double> thetas;
        double expected = 1.0;
        for (int t = 0; t < k; ++t) {
            thetas.push_back(angle(rng));
            expected *= std::cos(thetas.back());
        }
        Circuit c = multiply_block(thetas);
        Complex amp = simulate_flag(c);
        CHECK_THAT(amp.real(), WithinAbs(expected, 1e-12));
        CHECK_THAT(amp.imag(), WithinAbs(0.0, 1e-15));
    }
    CHECK_THROWS_AS(multiply_block({}), std::invalid_argument);
}

TEST_CASE("add_block: full statevector against the closed form") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 50; ++trial) {
        double t1 = angle(rng), t2 = angle(rng);
        double c1 = std::cos(t1), s1 = std::sin(t1);
        double c2 = std::cos(t2), s2 = std::sin(t2);
        Circuit c = add_block(t1, t2);
        StateVector s = run(c, "00");
        CHECK_THAT(s.amplitudes[0b00].real(), WithinAbs((c1 + c2) / 2.0, 1e-12));
        CHECK_THAT(s.amplitudes[0b01].real(), WithinAbs((s1 + s2) / 2.0, 1e-12));
        CHECK_THAT(s.amplitudes[0b10].real(), WithinAbs((c1 - c2) / 2.0, 1e-12));
        CHECK_THAT(s.amplitudes[0b11].real(), WithinAbs((s1 - s2) / 2.0, 1e-12));
        CHECK_THAT(flag_amplitude(s, c.flag).real(), WithinAbs((c1 + c2) / 2.0, 1e-12));
    }
}

TEST_CASE("lcu_combine uniform: mean of branch amplitudes") {
    double a = kPi / 5.0, b = kPi / 3.0;
    auto fa = Fragment::rotation(GateKind::Ry, 2.0 * a);
    auto fb = Fragment::rotation(GateKind::Ry, 2.0 * b);

    SECTION("two branches, m = 1") {
        LcuResult r = lcu_combine({{1.0, fa}, {1.0, fb}}, 1);
        CHECK(r.normalization == LcuNormalization::Uniform);
        CHECK_THAT(simulate_flag(r.circuit).real(),
                   WithinAbs((std::cos(a) + std::cos(b)) / 2.0, 1e-12));
    }
    SECTION("absent branches count as identity") {
        LcuResult r = lcu_combine({{1.0, fa}, {1.0, fb}}, 2);
        CHECK_THAT(simulate_flag(r.circuit).real(),
                   WithinAbs((std::cos(a) + std::cos(b) + 2.0) / 4.0, 1e-12));
    }
    SECTION("negated branch subtracts") {
        Fragment neg = fb;
        neg.negated = true;
        LcuResult r = lcu_combine({{1.0, fa}, {1.0, neg}}, 1);
        CHECK_THAT(simulate_flag(r.circuit).real(),
                   WithinAbs((std::cos(a) - std::cos(b)) / 2.0, 1e-12));
    }
}

TEST_CASE("lcu_combine weighted: rotation tree realizes p_i / p") {
    double a = kPi / 7.0, b = kPi / 4.0, c = kPi / 3.0;
    auto fa = Fragment::rotation(GateKind::Ry, 2.0 * a);
    auto fb = Fragment::rotation(GateKind::Ry, 2.0 * b);
    auto fc = Fragment::rotation(GateKind::Ry, 2.0 * c);
    LcuResult r = lcu_combine({{0.2, fa}, {0.5, fb}, {0.3, fc}}, 2);
    CHECK(r.normalization == LcuNormalization::Weighted);
    CHECK_THAT(r.total_weight, WithinAbs(1.0, 1e-12));
    double expected = 0.2 * std::cos(a) + 0.5 * std::cos(b) + 0.3 * std::cos(c);
    CHECK_THAT(simulate_flag(r.circuit).real(), WithinAbs(expected, 1e-12));
}

TEST_CASE("lcu_combine validates its branches") {
    auto f1 = Fragment::rotation(GateKind::Ry, 0.5);
    Fragment wide;
    wide.width = 2;
    wide.flag.require(0, 0);
    wide.flag.require(1, 0);
    CHECK_THROWS_AS(lcu_combine({}, 1), std::invalid_argument);
    CHECK_THROWS_AS(lcu_combine({{1.0, f1}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(lcu_combine({{1.0, f1}, {1.0, f1}, {1.0, f1}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(lcu_combine({{1.0, f1}, {1.0, wide}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(lcu_combine({{-1.0, f1}}, 1), std::invalid_argument);
    Fragment empty_flag;
    empty_flag.width = 1;
    CHECK_THROWS_AS(lcu_combine({{1.0, empty_flag}}, 1), std::invalid_argument);
}

TEST_CASE("binary_controlled_ry: basis |j> drives cos(j pi / 2^n)") {
    const int n = 3;
    Circuit c = binary_controlled_ry(n);
    CHECK(c.ops.size() == std::size_t(n));
    for (std::uint64_t j = 0; j < (std::uint64_t(1) << n); ++j) {
        Complex amp = simulate_flag(c, {{"data", j}});
        CHECK_THAT(amp.real(), WithinAbs(std::cos(double(j) * kPi / std::pow(2.0, n)), 1e-12));
    }
    CHECK_THROWS_AS(binary_controlled_ry(0), std::invalid_argument);
}

TEST_CASE("append_ry_cascade matches the standalone cascade under a control") {
    Circuit c;
    c.layout = {{"data", 3}, {"gate", 1}, {"target", 1}};
    const Control gate{c.layout.qubit("gate", 0), 1};
    std::vector<int> data = {0, 1, 2};
    append_ry_cascade(c, data, c.layout.qubit("target", 0), {gate});
    c.flag.require(c.layout.qubit("target", 0), 0);

    // control off: target untouched
    Complex off = simulate_flag(c, {{"data", 5}, {"gate", 0}});
    CHECK_THAT(off.real(), WithinAbs(1.0, 1e-12));
    // control on: cascade fires
    Complex on = simulate_flag(c, {{"data", 5}, {"gate", 1}});
    CHECK_THAT(on.real(), WithinAbs(std::cos(5.0 * kPi / 8.0), 1e-12));
}
