#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qaa/gates.hpp"

namespace qaa {

/// Named qubit ranges. Within a register, bit 0 is the most significant
/// bit; registers are laid out in declaration order.
struct RegisterLayout {
    std::vector<std::pair<std::string, int>> registers;

    RegisterLayout() = default;
    RegisterLayout(std::initializer_list<std::pair<std::string, int>> regs) {
        for (auto& r : regs) add(r.first, r.second);
    }

    void add(const std::string& name, int width) {
        if (width < 1) throw std::invalid_argument("register width must be >= 1: " + name);
        for (auto& r : registers)
            if (r.first == name) throw std::invalid_argument("duplicate register: " + name);
        registers.emplace_back(name, width);
    }

    int total_width() const {
        int w = 0;
        for (auto& r : registers) w += r.second;
        return w;
    }

    bool has(std::string_view name) const {
        for (auto& r : registers)
            if (r.first == name) return true;
        return false;
    }

    int offset(std::string_view name) const {
        int off = 0;
        for (auto& r : registers) {
            if (r.first == name) return off;
            off += r.second;
        }
        throw std::invalid_argument("no such register: " + std::string(name));
    }

    int width(std::string_view name) const {
        for (auto& r : registers)
            if (r.first == name) return r.second;
        throw std::invalid_argument("no such register: " + std::string(name));
    }

    /// Global index of a register's bit; bit 0 is the register's MSB.
    int qubit(std::string_view name, int bit) const {
        if (bit < 0 || bit >= width(name))
            throw std::out_of_range("register bit out of range");
        return offset(name) + bit;
    }
};

/// Conjunction of required basis values on distinct qubits; qubits not
/// listed are unconstrained.
struct FlagPredicate {
    std::vector<std::pair<int, int>> constraints;  // (qubit, required bit)

    void require(int qubit, int bit) {
        for (auto& c : constraints)
            if (c.first == qubit) throw std::invalid_argument("duplicate flag constraint");
        constraints.emplace_back(qubit, bit);
    }

    bool constrains(int qubit) const {
        for (auto& c : constraints)
            if (c.first == qubit) return true;
        return false;
    }
};

struct Circuit {
    RegisterLayout layout;
    std::vector<GateOp> ops;
    FlagPredicate flag;

    int num_qubits() const { return layout.total_width(); }

    void append(GateOp op) { ops.push_back(std::move(op)); }

    void h_register(std::string_view name) {
        int off = layout.offset(name), w = layout.width(name);
        for (int b = 0; b < w; ++b) append(GateOp::h(off + b));
    }
};

/// Controls selecting the basis state |value> of a register, MSB first.
inline std::vector<Control> basis_controls(const RegisterLayout& layout,
                                           std::string_view reg, std::uint64_t value) {
    int off = layout.offset(reg), w = layout.width(reg);
    if (w < 64 && value >= (std::uint64_t(1) << w))
        throw std::out_of_range("basis value exceeds register width");
    std::vector<Control> cs;
    cs.reserve(static_cast<std::size_t>(w));
    for (int b = 0; b < w; ++b)
        cs.push_back({off + b, int((value >> (w - 1 - b)) & 1)});
    return cs;
}

/// Input bitstring for run(): every register defaults to all zeros,
/// entries in `values` are written MSB first.
inline std::string basis_input(const RegisterLayout& layout,
                               const std::map<std::string, std::uint64_t>& values = {}) {
    std::string s(static_cast<std::size_t>(layout.total_width()), '0');
    for (auto& [name, value] : values) {
        int off = layout.offset(name), w = layout.width(name);
        if (w < 64 && value >= (std::uint64_t(1) << w))
            throw std::out_of_range("basis value exceeds register width: " + name);
        for (int b = 0; b < w; ++b)
            s[static_cast<std::size_t>(off + b)] = ((value >> (w - 1 - b)) & 1) ? '1' : '0';
    }
    return s;
}

/// Appends `sub`'s registers and ops to `dst`, shifting qubit indices.
/// Register names get `prefix` prepended. Returns the qubit offset.
inline int append_subcircuit(Circuit& dst, const Circuit& sub, const std::string& prefix,
                             const std::vector<Control>& extra_controls = {}) {
    int off = dst.layout.total_width();
    for (auto& r : sub.layout.registers) dst.layout.add(prefix + r.first, r.second);
    for (GateOp op : sub.ops) {
        op.target += off;
        for (auto& c : op.controls) c.qubit += off;
        for (auto& c : extra_controls) op.controls.push_back(c);
        dst.append(std::move(op));
    }
    for (auto& c : sub.flag.constraints) dst.flag.require(c.first + off, c.second);
    return off;
}

}  // namespace qaa
