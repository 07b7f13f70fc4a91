#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qaa {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

enum class GateKind { H, X, Z, Ry, Rx };

inline std::string kind_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Z: return "z";
        case GateKind::Ry: return "ry";
        case GateKind::Rx: return "rx";
    }
    return "?";
}

/// A control qubit with its polarity: the gate fires when the qubit
/// holds the basis value `polarity`.
struct Control {
    int qubit = 0;
    int polarity = 1;
};

/// One gate application. Rotation kinds use `angle`; the convention is
/// Ry(phi) = exp(-i phi Y / 2), so Ry(2t)|0> = cos(t)|0> + sin(t)|1>,
/// and Rx(phi) = exp(-i phi X / 2).
struct GateOp {
    GateKind kind = GateKind::X;
    int target = 0;
    double angle = 0.0;
    std::vector<Control> controls;

    static GateOp h(int q) { return {GateKind::H, q, 0.0, {}}; }
    static GateOp x(int q) { return {GateKind::X, q, 0.0, {}}; }
    static GateOp z(int q) { return {GateKind::Z, q, 0.0, {}}; }
    static GateOp ry(double phi, int q) { return {GateKind::Ry, q, phi, {}}; }
    static GateOp rx(double phi, int q) { return {GateKind::Rx, q, phi, {}}; }

    GateOp with_controls(std::vector<Control> cs) const {
        GateOp op = *this;
        for (auto& c : cs) op.controls.push_back(c);
        return op;
    }
};

/// 2x2 unitary of the uncontrolled part of an op, row-major {u00,u01,u10,u11}.
inline std::array<Complex, 4> gate_matrix(const GateOp& op) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (op.kind) {
        case GateKind::H: return {Complex(s), Complex(s), Complex(s), Complex(-s)};
        case GateKind::X: return {Complex(0), Complex(1), Complex(1), Complex(0)};
        case GateKind::Z: return {Complex(1), Complex(0), Complex(0), Complex(-1)};
        case GateKind::Ry: {
            double c = std::cos(op.angle / 2), sn = std::sin(op.angle / 2);
            return {Complex(c), Complex(-sn), Complex(sn), Complex(c)};
        }
        case GateKind::Rx: {
            double c = std::cos(op.angle / 2), sn = std::sin(op.angle / 2);
            return {Complex(c), Complex(0, -sn), Complex(0, -sn), Complex(c)};
        }
    }
    throw std::logic_error("unknown gate kind");
}

/// Inverse of an op (controls unchanged). H, X, Z are involutions;
/// rotations invert by negating the angle.
inline GateOp inverse(const GateOp& op) {
    GateOp inv = op;
    if (op.kind == GateKind::Ry || op.kind == GateKind::Rx) inv.angle = -op.angle;
    return inv;
}

}  // namespace qaa
