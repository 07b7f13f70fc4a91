#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "qaa/qaa.hpp"

using namespace qaa;
using Catch::Matchers::WithinAbs;

namespace {

// Dense matrix of an op on `n` qubits, built column by column through the
// simulator itself.
std::vector<std::vector<Complex>> op_matrix(const GateOp& op, int n) {
    const std::uint64_t dim = std::uint64_t(1) << n;
    std::vector<std::vector<Complex>> m(dim, std::vector<Complex>(dim));
    for (std::uint64_t col = 0; col < dim; ++col) {
        StateVector s = StateVector::basis(n, col);
        apply(s, op);
        for (std::uint64_t row = 0; row < dim; ++row) m[row][col] = s.amplitudes[row];
    }
    return m;
}

}  // namespace

TEST_CASE("hadamard on |0>") {
    StateVector s = StateVector::basis(1, 0);
    apply(s, GateOp::h(0));
    CHECK_THAT(s.amplitudes[0].real(), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(s.amplitudes[1].real(), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
}

TEST_CASE("Ry convention: Ry(2pi/3)|0> = cos(pi/3)|0> + sin(pi/3)|1>") {
    StateVector s = StateVector::basis(1, 0);
    apply(s, GateOp::ry(2.0 * kPi / 3.0, 0));
    CHECK_THAT(s.amplitudes[0].real(), WithinAbs(0.5, 1e-12));
    CHECK_THAT(s.amplitudes[1].real(), WithinAbs(std::sqrt(3.0) / 2.0, 1e-12));
}

TEST_CASE("unsatisfied polarity-1 control leaves the state alone") {
    StateVector s = StateVector::basis(2, 0);  // control qubit 0 is |0>
    apply(s, GateOp::x(1).with_controls({{0, 1}}));
    CHECK_THAT(std::abs(s.amplitudes[0]), WithinAbs(1.0, 1e-15));
}

TEST_CASE("polarity-0 control fires on |0>") {
    StateVector s = StateVector::basis(2, 0);
    apply(s, GateOp::x(1).with_controls({{0, 0}}));
    CHECK_THAT(std::abs(s.amplitudes[1]), WithinAbs(1.0, 1e-15));
}

TEST_CASE("gate application rejects bad indices") {
    StateVector s = StateVector::basis(2, 0);
    CHECK_THROWS(apply(s, GateOp::x(2)));
    CHECK_THROWS(apply(s, GateOp::x(0).with_controls({{0, 1}})));
    CHECK_THROWS(apply(s, GateOp::x(0).with_controls({{5, 1}})));
}

TEST_CASE("empty circuit reproduces the basis input") {
    Circuit c;
    c.layout = {{"data", 3}};
    StateVector s = run(c, "010");
    CHECK_THAT(s.amplitudes[0b010].real(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("Fig-1a multiplication circuit: flag amplitude cos(pi/3)^2") {
    Circuit c = multiply_block({kPi / 3.0, kPi / 3.0});
    StateVector s = run(c, "000");
    Complex amp = flag_amplitude(s, c.flag);
    CHECK_THAT(amp.real(), WithinAbs(0.25, 1e-12));
}

TEST_CASE("all supported gates are unitary (G Gdag = I), up to 3 qubits") {
    std::vector<GateOp> gates = {
        GateOp::h(0), GateOp::x(0), GateOp::z(0), GateOp::ry(0.7, 0), GateOp::rx(1.3, 0),
        GateOp::ry(0.9, 1).with_controls({{0, 1}}),
        GateOp::x(2).with_controls({{0, 0}, {1, 1}}),
    };
    for (const auto& op : gates) {
        int n = op.target + 1;
        for (auto& ctl : op.controls) n = std::max(n, ctl.qubit + 1);
        auto m = op_matrix(op, n);
        const std::uint64_t dim = m.size();
        for (std::uint64_t r = 0; r < dim; ++r) {
            for (std::uint64_t c2 = 0; c2 < dim; ++c2) {
                Complex dot = 0;
                for (std::uint64_t k = 0; k < dim; ++k) dot += m[k][r] * std::conj(m[k][c2]);
                CHECK_THAT(std::abs(dot - (r == c2 ? Complex(1) : Complex(0))),
                           WithinAbs(0.0, 1e-12));
            }
        }
    }
}

TEST_CASE("norm is preserved on random circuits and basis inputs") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + int(rng() % 3);
        Circuit c;
        c.layout = {{"data", n}};
        for (int g = 0; g < 12; ++g) {
            int kind = int(rng() % 5);
            int target = int(rng() % std::uint32_t(n));
            GateOp op;
            switch (kind) {
                case 0: op = GateOp::h(target); break;
                case 1: op = GateOp::x(target); break;
                case 2: op = GateOp::z(target); break;
                case 3: op = GateOp::ry(angle(rng), target); break;
                default: op = GateOp::rx(angle(rng), target); break;
            }
            int ctl = int(rng() % std::uint32_t(n));
            if (ctl != target) op.controls.push_back({ctl, int(rng() % 2)});
            c.append(op);
        }
        std::uint64_t input = rng() % (std::uint64_t(1) << n);
        StateVector s = run(c, basis_input(c.layout, {{"data", input}}));
        CHECK_THAT(s.squared_norm(), WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("flag_amplitude direct reads") {
    StateVector s;
    s.num_qubits = 2;
    s.amplitudes = {Complex(0.6), Complex(0), Complex(0), Complex(0.8)};
    FlagPredicate f;
    f.require(0, 0);
    CHECK_THAT(flag_amplitude(s, f, {{1, 0}}).real(), WithinAbs(0.6, 1e-15));

    StateVector u = StateVector::basis(2, 0);
    apply(u, GateOp::h(0));
    apply(u, GateOp::h(1));
    FlagPredicate f2;
    f2.require(0, 1);
    CHECK_THAT(flag_amplitude(u, f2, {{1, 1}}).real(), WithinAbs(0.5, 1e-15));
}

TEST_CASE("flag_amplitude rejects under-constrained patterns") {
    StateVector s = StateVector::basis(2, 0);
    FlagPredicate f;
    f.require(0, 0);
    CHECK_THROWS_AS(flag_amplitude(s, f), std::invalid_argument);
    CHECK_THROWS_AS(flag_amplitude(s, f, {{0, 1}}), std::invalid_argument);  // overlap
}

TEST_CASE("simulation cap rejects oversized circuits") {
    Circuit c;
    c.layout = {{"data", 26}};
    CHECK_THROWS(run(c, std::string(26, '0')));
}

TEST_CASE("resource counts: stateprep claims from the figure captions") {
    ResourceReport basic4 = count_resources(build_basic(4));
    CHECK(basic4.extra_qubits == 3);  // ceil(log2 4) + 1

    ResourceReport improved8 = count_resources(build_improved(8));
    CHECK(improved8.multi_controlled_rotations_total() == 8);

    Circuit empty;
    empty.layout = {{"data", 2}};
    ResourceReport r = count_resources(empty);
    CHECK(r.one_qubit == 0);
    CHECK(r.two_qubit == 0);
    CHECK(r.toffoli == 0);
    CHECK(r.toffoli_equivalent == 0);
    CHECK(r.multi_controlled_rotations_total() == 0);
}

TEST_CASE("cost model: 3-controlled rotation = 4 Toffoli + 1 controlled rotation") {
    Circuit c;
    c.layout = {{"data", 4}};
    c.append(GateOp::ry(0.3, 3).with_controls({{0, 1}, {1, 1}, {2, 1}}));
    ResourceReport r = count_resources(c);
    CHECK(r.toffoli_equivalent == 4);
    CHECK(r.two_qubit == 1);

    auto decomposed = decompose_op(c.ops[0], 4);
    int toffoli = 0, controlled_rotation = 0;
    for (auto& op : decomposed) {
        if (op.kind == GateKind::X && op.controls.size() == 2) ++toffoli;
        if (op.kind == GateKind::Ry && op.controls.size() == 1) ++controlled_rotation;
    }
    CHECK(toffoli == 4);
    CHECK(controlled_rotation == 1);
}

TEST_CASE("decomposed multi-controlled rotation matches the native gate") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int controls = 2; controls <= 4; ++controls) {
        GateOp op = GateOp::ry(angle(rng), controls);
        for (int q = 0; q < controls; ++q) op.controls.push_back({q, int(rng() % 2)});
        const int n = controls + 1;
        const int anc = controls - 1;
        auto decomposed = decompose_op(op, n);
        for (std::uint64_t input = 0; input < (std::uint64_t(1) << n); ++input) {
            StateVector direct = StateVector::basis(n + anc, input << anc);
            apply(direct, op);
            StateVector via = StateVector::basis(n + anc, input << anc);
            for (auto& g : decomposed) apply(via, g);
            for (std::uint64_t k = 0; k < direct.amplitudes.size(); ++k)
                CHECK_THAT(std::abs(direct.amplitudes[k] - via.amplitudes[k]),
                           WithinAbs(0.0, 1e-10));
        }
    }
}
