#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qaa/circuit.hpp"

namespace qaa {

/// Multiplication block: Ry(2*theta_t) on each of k work qubits puts
/// prod cos(theta_t) on work = |0^k>; a k-controlled X (all controls
/// polarity 0) marks that component on the ancilla. Flag is
/// work = 0^k, mark = 1.
inline Circuit multiply_block(const std::vector<double>& thetas) {
    if (thetas.empty()) throw std::invalid_argument("multiply_block needs at least one factor");
    const int k = int(thetas.size());
    Circuit c;
    c.layout = {{"work", k}, {"mark", 1}};
    for (int t = 0; t < k; ++t) c.append(GateOp::ry(2.0 * thetas[std::size_t(t)], t));
    GateOp mark = GateOp::x(k);
    for (int t = 0; t < k; ++t) mark.controls.push_back({t, 0});
    c.append(mark);
    for (int t = 0; t < k; ++t) c.flag.require(t, 0);
    c.flag.require(k, 1);
    return c;
}

/// Addition block: H on the select qubit, Ry(2*theta1) / Ry(2*theta2)
/// on the target for select 0 / 1, H again. The statevector is
///   [(c1+c2)|00> + (s1+s2)|01> + (c1-c2)|10> + (s1-s2)|11>] / 2,
/// so the flag |00> carries (cos(theta1)+cos(theta2))/2.
inline Circuit add_block(double theta1, double theta2) {
    Circuit c;
    c.layout = {{"select", 1}, {"target", 1}};
    c.append(GateOp::h(0));
    c.append(GateOp::ry(2.0 * theta1, 1).with_controls({{0, 0}}));
    c.append(GateOp::ry(2.0 * theta2, 1).with_controls({{0, 1}}));
    c.append(GateOp::h(0));
    c.flag.require(0, 0);
    c.flag.require(1, 0);
    return c;
}

/// A branch circuit for lcu_combine: ops over `width` local qubits and
/// the flag pattern whose amplitude the branch contributes. All
/// branches of one combiner must agree on width and flag. `negated`
/// flips the branch's sign via a select-conditioned phase flip.
struct Fragment {
    int width = 0;
    std::vector<GateOp> ops;
    FlagPredicate flag;
    bool negated = false;

    /// Single-rotation fragment (one qubit, flag |0>), the building
    /// block for amplitude addition of cosine factors.
    static Fragment rotation(GateKind kind, double angle) {
        Fragment f;
        f.width = 1;
        f.ops.push_back({kind, 0, angle, {}});
        f.flag.require(0, 0);
        return f;
    }

    static Fragment identity(const Fragment& like) {
        Fragment f;
        f.width = like.width;
        f.flag = like.flag;
        return f;
    }
};

enum class LcuNormalization { Uniform, Weighted };

struct LcuResult {
    Circuit circuit;
    LcuNormalization normalization = LcuNormalization::Uniform;
    double total_weight = 0.0;  // p = sum p_i in weighted mode, 2^m in uniform mode
};

namespace detail {

/// Exact preparation of amplitudes sqrt(w_i / sum w) over 2^m basis
/// states of the select register via a rotation tree (all weights
/// nonnegative real).
inline std::vector<GateOp> rotation_tree(const std::vector<double>& weights, int m, int offset) {
    std::vector<GateOp> ops;
    std::vector<double> level = weights;  // subtree sums, leaves first
    level.resize(std::size_t(1) << m, 0.0);
    std::vector<std::vector<double>> sums;  // sums[l] has 2^l entries
    sums.resize(std::size_t(m) + 1);
    sums[std::size_t(m)] = level;
    for (int l = m - 1; l >= 0; --l) {
        sums[std::size_t(l)].resize(std::size_t(1) << l);
        for (std::size_t i = 0; i < sums[std::size_t(l)].size(); ++i)
            sums[std::size_t(l)][i] = sums[std::size_t(l) + 1][2 * i] + sums[std::size_t(l) + 1][2 * i + 1];
    }
    for (int l = 0; l < m; ++l) {
        for (std::uint64_t prefix = 0; prefix < (std::uint64_t(1) << l); ++prefix) {
            double total = sums[std::size_t(l)][prefix];
            if (total <= 0.0) continue;
            double right = sums[std::size_t(l) + 1][2 * prefix + 1];
            double theta = std::asin(std::sqrt(right / total));
            GateOp op = GateOp::ry(2.0 * theta, offset + l);
            for (int b = 0; b < l; ++b)
                op.controls.push_back({offset + b, int((prefix >> (l - 1 - b)) & 1)});
            ops.push_back(op);
        }
    }
    return ops;
}

/// Phase flip of one branch: -1 exactly on the states matching the
/// fragment flag bit on `qubit`, conditioned on the select pattern.
/// A required bit of 0 is handled by X conjugation (X Z X = -Z).
inline void append_sign_flip(Circuit& c, const std::vector<Control>& select, int qubit,
                             int required_bit) {
    if (required_bit == 0) c.append(GateOp::x(qubit));
    c.append(GateOp::z(qubit).with_controls(select));
    if (required_bit == 0) c.append(GateOp::x(qubit));
}

}  // namespace detail

/// Prepare-select-unprepare combiner over up to 2^m branches. With
/// equal weights the preparer is H^m and the flag amplitude is
/// sum_i a_i / 2^m counting absent branches as identity; with unequal
/// weights an exact rotation-tree preparer gives sum_i (p_i/p) a_i,
/// p = sum p_i. The result records which normalization applied.
inline LcuResult lcu_combine(const std::vector<std::pair<double, Fragment>>& blocks, int m) {
    if (m < 1) throw std::invalid_argument("need at least one select qubit");
    if (blocks.empty()) throw std::invalid_argument("need at least one branch");
    if (blocks.size() > (std::size_t(1) << m))
        throw std::invalid_argument("too many branches for the select width");
    int width = blocks.front().second.width;
    for (auto& [w, f] : blocks) {
        if (w <= 0.0) throw std::invalid_argument("branch weights must be positive");
        if (f.width != width) throw std::invalid_argument("branch widths disagree");
        if (f.flag.constraints.empty()) throw std::invalid_argument("branch flag is empty");
        if (f.flag.constraints != blocks.front().second.flag.constraints)
            throw std::invalid_argument("branch flags disagree");
    }
    bool uniform = true;
    for (auto& [w, f] : blocks) uniform = uniform && std::abs(w - blocks.front().first) < 1e-12;

    LcuResult result;
    Circuit& c = result.circuit;
    c.layout = {{"select", m}, {"target", width}};

    std::vector<GateOp> prepare;
    if (uniform) {
        for (int b = 0; b < m; ++b) prepare.push_back(GateOp::h(b));
        result.normalization = LcuNormalization::Uniform;
        result.total_weight = double(std::uint64_t(1) << m);
    } else {
        std::vector<double> weights;
        double p = 0.0;
        for (auto& [w, f] : blocks) {
            weights.push_back(w);
            p += w;
        }
        prepare = detail::rotation_tree(weights, m, 0);
        result.normalization = LcuNormalization::Weighted;
        result.total_weight = p;
    }
    for (auto& op : prepare) c.append(op);

    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Fragment& f = blocks[i].second;
        std::vector<Control> select;
        for (int b = 0; b < m; ++b) select.push_back({b, int((i >> (m - 1 - b)) & 1)});
        for (GateOp op : f.ops) {
            op.target += m;
            for (auto& ctl : op.controls) ctl.qubit += m;
            for (auto& ctl : select) op.controls.push_back(ctl);
            c.append(op);
        }
        if (f.negated) {
            auto& fc = f.flag.constraints.front();
            detail::append_sign_flip(c, select, fc.first + m, fc.second);
        }
    }

    for (auto it = prepare.rbegin(); it != prepare.rend(); ++it) c.append(inverse(*it));

    for (int b = 0; b < m; ++b) c.flag.require(b, 0);
    for (auto& fc : blocks.front().second.flag.constraints) c.flag.require(fc.first + m, fc.second);
    return result;
}

/// Rotation cascade of Eq-A3 shape: n singly-controlled Ry gates, the
/// k-th controlled by data bit j_k with angle pi/2^(k-1), so basis |j>
/// on data drives the target through Ry(j*pi/2^(n-1)) and the target's
/// |0> amplitude is cos(j*pi/2^n).
inline Circuit binary_controlled_ry(int n) {
    if (n < 1) throw std::invalid_argument("cascade needs n >= 1");
    Circuit c;
    c.layout = {{"data", n}, {"target", 1}};
    for (int k = 1; k <= n; ++k)
        c.append(GateOp::ry(kPi / std::pow(2.0, k - 1), n).with_controls({{k - 1, 1}}));
    c.flag.require(n, 0);
    return c;
}

/// The same cascade appended in place onto an existing circuit,
/// rotating `target` by j*pi/2^(n-1) for basis |j> on the given data
/// qubits, under extra controls. Used by the reciprocal circuit.
inline void append_ry_cascade(Circuit& c, const std::vector<int>& data_qubits, int target,
                              const std::vector<Control>& extra_controls = {}) {
    const int n = int(data_qubits.size());
    for (int k = 1; k <= n; ++k) {
        GateOp op = GateOp::ry(kPi / std::pow(2.0, k - 1), target);
        op.controls.push_back({data_qubits[std::size_t(k - 1)], 1});
        for (auto& ctl : extra_controls) op.controls.push_back(ctl);
        c.append(op);
    }
}

}  // namespace qaa
