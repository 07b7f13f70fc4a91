#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaa/circuit.hpp"
#include "qaa/gates.hpp"

namespace qaa {

/// Widest statevector the dense simulator will allocate by default.
/// QAA_MAX_QUBITS may raise it, but never past kAbsoluteMaxQubits.
inline constexpr int kDefaultMaxQubits = 24;
inline constexpr int kAbsoluteMaxQubits = 28;

inline int simulation_qubit_cap() {
    if (const char* env = std::getenv("QAA_MAX_QUBITS")) {
        int v = std::atoi(env);
        if (v > 0) return v < kAbsoluteMaxQubits ? v : kAbsoluteMaxQubits;
    }
    return kDefaultMaxQubits;
}

/// Dense amplitude array over `num_qubits` qubits. Qubit 0 is the most
/// significant bit of the basis index.
struct StateVector {
    int num_qubits = 0;
    std::vector<Complex> amplitudes;

    static StateVector basis(int num_qubits, std::uint64_t index, int max_qubits = kDefaultMaxQubits) {
        if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
        if (num_qubits > max_qubits)
            throw std::invalid_argument("circuit needs " + std::to_string(num_qubits) +
                                        " qubits, over the simulation cap of " +
                                        std::to_string(max_qubits));
        StateVector s;
        s.num_qubits = num_qubits;
        s.amplitudes.assign(std::uint64_t(1) << num_qubits, Complex(0));
        s.amplitudes.at(index) = Complex(1);
        return s;
    }

    double squared_norm() const {
        double n = 0;
        for (auto& a : amplitudes) n += std::norm(a);
        return n;
    }

    int bit(std::uint64_t index, int qubit) const {
        return int((index >> (num_qubits - 1 - qubit)) & 1);
    }
};

inline void validate_op(const GateOp& op, int num_qubits) {
    if (op.target < 0 || op.target >= num_qubits)
        throw std::out_of_range("gate target out of range");
    for (std::size_t i = 0; i < op.controls.size(); ++i) {
        const auto& c = op.controls[i];
        if (c.qubit < 0 || c.qubit >= num_qubits)
            throw std::out_of_range("control qubit out of range");
        if (c.qubit == op.target)
            throw std::invalid_argument("control overlaps target");
        if (c.polarity != 0 && c.polarity != 1)
            throw std::invalid_argument("control polarity must be 0 or 1");
        for (std::size_t k = 0; k < i; ++k)
            if (op.controls[k].qubit == c.qubit)
                throw std::invalid_argument("duplicate control qubit");
    }
}

/// In-place application of one (possibly controlled) gate.
inline void apply(StateVector& state, const GateOp& op) {
    validate_op(op, state.num_qubits);
    const int n = state.num_qubits;
    const std::uint64_t tmask = std::uint64_t(1) << (n - 1 - op.target);
    std::uint64_t cmask = 0, cval = 0;
    for (auto& c : op.controls) {
        std::uint64_t m = std::uint64_t(1) << (n - 1 - c.qubit);
        cmask |= m;
        if (c.polarity) cval |= m;
    }
    const auto u = gate_matrix(op);
    const std::uint64_t dim = state.amplitudes.size();
    for (std::uint64_t k = 0; k < dim; ++k) {
        if (k & tmask) continue;
        if ((k & cmask) != cval) continue;
        Complex a0 = state.amplitudes[k];
        Complex a1 = state.amplitudes[k | tmask];
        state.amplitudes[k] = u[0] * a0 + u[1] * a1;
        state.amplitudes[k | tmask] = u[2] * a0 + u[3] * a1;
    }
}

/// Runs a circuit on a basis input given as a bitstring over the full
/// layout (qubit 0 first). Checks norm preservation at the end.
inline StateVector run(const Circuit& circuit, const std::string& input_basis,
                       int max_qubits = kDefaultMaxQubits) {
    const int n = circuit.num_qubits();
    if (int(input_basis.size()) != n)
        throw std::invalid_argument("input bitstring width does not match layout");
    std::uint64_t index = 0;
    for (char ch : input_basis) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("input must be 0/1 bits");
        index = (index << 1) | std::uint64_t(ch == '1');
    }
    StateVector state = StateVector::basis(n, index, max_qubits);
    for (auto& op : circuit.ops) apply(state, op);
    if (std::abs(state.squared_norm() - 1.0) > 1e-10)
        throw std::runtime_error("norm drifted past 1e-10; non-unitary op applied?");
    return state;
}

/// Reads the single amplitude picked out by flag plus residual pattern.
/// The two must cover all qubits between them, else the read would be
/// ambiguous and we refuse.
inline Complex flag_amplitude(const StateVector& state, const FlagPredicate& flag,
                              const std::vector<std::pair<int, int>>& residual = {}) {
    std::vector<int> bits(static_cast<std::size_t>(state.num_qubits), -1);
    auto set = [&](int qubit, int value) {
        if (qubit < 0 || qubit >= state.num_qubits)
            throw std::out_of_range("flag qubit out of range");
        if (bits[static_cast<std::size_t>(qubit)] != -1)
            throw std::invalid_argument("flag and residual overlap on qubit " + std::to_string(qubit));
        bits[static_cast<std::size_t>(qubit)] = value;
    };
    for (auto& c : flag.constraints) set(c.first, c.second);
    for (auto& c : residual) set(c.first, c.second);
    std::uint64_t index = 0;
    for (int q = 0; q < state.num_qubits; ++q) {
        if (bits[static_cast<std::size_t>(q)] == -1)
            throw std::invalid_argument("under-constrained pattern: qubit " + std::to_string(q) +
                                        " is free, more than one basis state matches");
        index = (index << 1) | std::uint64_t(bits[static_cast<std::size_t>(q)]);
    }
    return state.amplitudes[index];
}

/// Residual pattern fixing a whole register to a basis value.
inline std::vector<std::pair<int, int>> register_residual(const RegisterLayout& layout,
                                                          std::string_view reg,
                                                          std::uint64_t value) {
    int off = layout.offset(reg), w = layout.width(reg);
    std::vector<std::pair<int, int>> r;
    for (int b = 0; b < w; ++b) r.emplace_back(off + b, int((value >> (w - 1 - b)) & 1));
    return r;
}

/// Convenience: run on register values and read the flag amplitude,
/// with `residual_reg` fixed to its input value.
inline Complex simulate_flag(const Circuit& circuit,
                             const std::map<std::string, std::uint64_t>& inputs = {},
                             int max_qubits = kDefaultMaxQubits) {
    StateVector s = run(circuit, basis_input(circuit.layout, inputs), max_qubits);
    std::vector<std::pair<int, int>> residual;
    for (auto& [name, value] : inputs) {
        int off = circuit.layout.offset(name), w = circuit.layout.width(name);
        for (int b = 0; b < w; ++b) {
            int q = off + b;
            if (!circuit.flag.constrains(q))
                residual.emplace_back(q, int((value >> (w - 1 - b)) & 1));
        }
    }
    return flag_amplitude(s, circuit.flag, residual);
}

}  // namespace qaa
