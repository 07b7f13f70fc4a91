#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaa/circuit.hpp"
#include "qaa/primitives.hpp"

namespace qaa {

enum class PrepVariant { Basic, Alternative, Improved, Complex };

inline PrepVariant prep_variant_from_string(const std::string& s) {
    if (s == "basic") return PrepVariant::Basic;
    if (s == "alternative") return PrepVariant::Alternative;
    if (s == "improved") return PrepVariant::Improved;
    if (s == "complex") return PrepVariant::Complex;
    throw std::invalid_argument("unknown variant: " + s);
}

inline int control_width(int n) {  // ceil(log2 n)
    int m = 0;
    while ((1 << m) < n) ++m;
    return m < 1 ? 1 : m;
}

inline void check_prep_width(int n) {
    if (n < 2) throw std::invalid_argument("state preparation needs n >= 2 data bits");
}

/// Loading circuit for |x> -> (x/2^n)/2^m on the flag
/// (control = 0^m, work = 1), with m = ceil(log2 n) control qubits.
/// Branch i of the control register fires the rotation
/// Ry(2*arcsin(1/2^i)) on work when data bit x_{n-i} is set.
inline Circuit build_basic(int n) {
    check_prep_width(n);
    const int m = control_width(n);
    Circuit c;
    c.layout = {{"data", n}, {"control", m}, {"work", 1}};
    const int work = c.layout.qubit("work", 0);
    c.h_register("control");
    for (int i = 1; i <= n; ++i) {
        GateOp op = GateOp::ry(2.0 * std::asin(std::pow(2.0, -i)), work);
        op.controls = basis_controls(c.layout, "control", std::uint64_t(i - 1));
        op.controls.push_back({c.layout.qubit("data", i - 1), 1});  // bit x_{n-i}
        c.append(op);
    }
    c.h_register("control");
    for (int b = 0; b < m; ++b) c.flag.require(c.layout.qubit("control", b), 0);
    c.flag.require(work, 1);
    return c;
}

namespace detail {

/// The group-prefix control pattern of the alternative circuit: group i
/// occupies the control basis states starting 1^(i-1) 0, so it spans
/// 2^(n-i) of them and only the first i control qubits are constrained.
inline std::vector<Control> group_prefix_controls(const RegisterLayout& layout,
                                                  std::string_view reg, int i) {
    std::vector<Control> cs;
    int off = layout.offset(reg);
    for (int b = 0; b < i - 1; ++b) cs.push_back({off + b, 1});
    cs.push_back({off + i - 1, 0});
    return cs;
}

}  // namespace detail

/// Alternative loading over n control qubits (one unit-weight term per
/// control basis state): group i applies Ry(pi) to work when data bit
/// x_{n-i} is set, giving flag amplitude x/2^n on
/// (control = 0^n, work = 1).
inline Circuit build_alternative(int n) {
    check_prep_width(n);
    Circuit c;
    c.layout = {{"data", n}, {"control", n}, {"work", 1}};
    const int work = c.layout.qubit("work", 0);
    c.h_register("control");
    for (int i = 1; i <= n; ++i) {
        GateOp op = GateOp::ry(kPi, work);
        op.controls = detail::group_prefix_controls(c.layout, "control", i);
        op.controls.push_back({c.layout.qubit("data", i - 1), 1});
        c.append(op);
    }
    c.h_register("control");
    for (int b = 0; b < n; ++b) c.flag.require(c.layout.qubit("control", b), 0);
    c.flag.require(work, 1);
    return c;
}

namespace detail {

/// Shared body of the improved circuit: the n multi-controlled Ry gates
/// over m = ceil(log2 n) control qubits plus a combiner qubit. Part I
/// (combiner 0) handles bits x_{n-1}..x_{n-m} alternative-style; part
/// II (combiner 1) handles the rest basic-style with angles
/// arcsin(2^(m-k)). `data_control(bit)` supplies the per-bit condition,
/// letting the same body serve quantum data or a classical bit pattern.
template <typename DataControl>
inline void append_improved_body(Circuit& c, int n, std::string_view control_reg, int work,
                                 const Control& combiner, DataControl&& data_control,
                                 GateKind rotation_kind,
                                 const std::vector<Control>& extra_controls) {
    const int m = control_width(n);
    for (int i = 1; i <= m; ++i) {  // part I
        GateOp op{rotation_kind, work, kPi, {}};
        op.controls = group_prefix_controls(c.layout, control_reg, i);
        op.controls.push_back({combiner.qubit, 0});
        if (!data_control(i, op)) continue;
        for (auto& ctl : extra_controls) op.controls.push_back(ctl);
        c.append(op);
    }
    for (int k = m + 1; k <= n; ++k) {  // part II
        GateOp op{rotation_kind, work, 2.0 * std::asin(std::pow(2.0, m - k)), {}};
        op.controls = basis_controls(c.layout, control_reg, std::uint64_t(k - m - 1));
        op.controls.push_back({combiner.qubit, 1});
        if (!data_control(k, op)) continue;
        for (auto& ctl : extra_controls) op.controls.push_back(ctl);
        c.append(op);
    }
}

}  // namespace detail

/// Improved loading: the basic and alternative constructions combined
/// under one extra combiner qubit, flag amplitude x/2^(n+1) on
/// (combiner = 0, control = 0^m, work = 1). Extra qubits: m + 2;
/// multi-controlled Ry gates: exactly n.
inline Circuit build_improved(int n) {
    check_prep_width(n);
    const int m = control_width(n);
    Circuit c;
    c.layout = {{"data", n}, {"control", m}, {"work", 1}, {"combiner", 1}};
    const int work = c.layout.qubit("work", 0);
    const Control combiner{c.layout.qubit("combiner", 0), 1};
    c.append(GateOp::h(combiner.qubit));
    c.h_register("control");
    detail::append_improved_body(
        c, n, "control", work, combiner,
        [&](int bit_index, GateOp& op) {
            op.controls.push_back({c.layout.qubit("data", bit_index - 1), 1});
            return true;
        },
        GateKind::Ry, {});
    c.h_register("control");
    c.append(GateOp::h(combiner.qubit));
    c.flag.require(combiner.qubit, 0);
    for (int b = 0; b < m; ++b) c.flag.require(c.layout.qubit("control", b), 0);
    c.flag.require(work, 1);
    return c;
}

/// Classical-value variant of the improved loader, used by the
/// polynomial pipeline: bits of `value` gate which rotations exist at
/// all, and `extra_controls` scope the whole load to one branch of an
/// outer combiner. Caller owns the Hadamards on control and combiner.
inline void append_improved_load_bits(Circuit& c, std::uint64_t value, int n_bits,
                                      std::string_view control_reg, int work,
                                      const Control& combiner,
                                      const std::vector<Control>& extra_controls) {
    check_prep_width(n_bits);
    detail::append_improved_body(
        c, n_bits, control_reg, work, combiner,
        [&](int bit_index, GateOp&) {
            return ((value >> (n_bits - bit_index)) & 1) != 0;  // bit x_{n-i}
        },
        GateKind::Ry, extra_controls);
}

/// Complex loading: Ry branch for the real part (register data_re) and
/// Rx branch for the imaginary part (data_im) under one outer combiner.
/// The Rx convention contributes -i per sine factor; a combiner-
/// conditioned Z on work turns that into +i, so the flag amplitude is
/// (a + i b)/2^(n+2).
inline Circuit build_complex(int n) {
    check_prep_width(n);
    const int m = control_width(n);
    Circuit c;
    c.layout = {{"data_re", n}, {"data_im", n}, {"control", m},
                {"work", 1},   {"inner", 1},   {"outer", 1}};
    const int work = c.layout.qubit("work", 0);
    const Control inner{c.layout.qubit("inner", 0), 1};
    const Control outer1{c.layout.qubit("outer", 0), 1};
    const Control outer0{c.layout.qubit("outer", 0), 0};
    c.append(GateOp::h(outer1.qubit));
    c.append(GateOp::h(inner.qubit));
    c.h_register("control");
    detail::append_improved_body(
        c, n, "control", work, inner,
        [&](int bit_index, GateOp& op) {
            op.controls.push_back({c.layout.qubit("data_re", bit_index - 1), 1});
            return true;
        },
        GateKind::Ry, {outer0});
    detail::append_improved_body(
        c, n, "control", work, inner,
        [&](int bit_index, GateOp& op) {
            op.controls.push_back({c.layout.qubit("data_im", bit_index - 1), 1});
            return true;
        },
        GateKind::Rx, {outer1});
    c.append(GateOp::z(work).with_controls({outer1}));
    c.h_register("control");
    c.append(GateOp::h(inner.qubit));
    c.append(GateOp::h(outer1.qubit));
    c.flag.require(outer1.qubit, 0);
    c.flag.require(inner.qubit, 0);
    for (int b = 0; b < m; ++b) c.flag.require(c.layout.qubit("control", b), 0);
    c.flag.require(work, 1);
    return c;
}

/// Closed forms the circuits are checked against.
inline double basic_closed_form(int n, std::uint64_t x) {
    return double(x) / std::pow(2.0, n) / std::pow(2.0, control_width(n));
}
inline double alternative_closed_form(int n, std::uint64_t x) {
    return double(x) / std::pow(2.0, n);
}
inline double improved_closed_form(int n, std::uint64_t x) {
    return double(x) / std::pow(2.0, n + 1);
}
inline Complex complex_closed_form(int n, std::uint64_t a, std::uint64_t b) {
    return Complex(double(a), double(b)) / std::pow(2.0, n + 2);
}

}  // namespace qaa
