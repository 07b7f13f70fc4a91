#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qaa/circuit.hpp"
#include "qaa/gates.hpp"

#include "json.hpp"

namespace qaa {

/// Toffoli conversion for gates with c >= 2 controls. The default charges
/// 2(c-1) Toffoli plus one singly-controlled base gate, realized by an
/// AND-chain over c-1 ancillas. A native Toffoli (X with two positive
/// controls) costs one Toffoli.
struct CostModel {
    long toffoli_for_controls(int c) const { return c < 2 ? 0 : 2L * (c - 1); }
};

struct ResourceReport {
    int total_qubits = 0;
    int extra_qubits = 0;  // everything outside the data/input register
    long one_qubit = 0;
    long two_qubit = 0;
    long toffoli = 0;  // native Toffolis (X, two controls)
    std::map<int, long> multi_controlled_rotation;  // controls -> count
    long multi_controlled_other = 0;                // non-rotation gates, >= 2 controls
    long toffoli_equivalent = 0;                    // after cost-model conversion

    long multi_controlled_rotations_total() const {
        long t = 0;
        for (auto& [k, v] : multi_controlled_rotation) t += v;
        return t;
    }
};

inline ResourceReport count_resources(const Circuit& circuit, const CostModel& model = {},
                                      const std::string& data_register = "data") {
    ResourceReport r;
    r.total_qubits = circuit.num_qubits();
    int data_width = circuit.layout.has(data_register) ? circuit.layout.width(data_register) : 0;
    r.extra_qubits = r.total_qubits - data_width;
    for (auto& op : circuit.ops) {
        int c = int(op.controls.size());
        bool rotation = op.kind == GateKind::Ry || op.kind == GateKind::Rx;
        if (c == 0) {
            r.one_qubit++;
        } else if (c == 1) {
            r.two_qubit++;
        } else if (op.kind == GateKind::X && c == 2) {
            r.toffoli++;
            r.toffoli_equivalent++;
        } else {
            if (rotation)
                r.multi_controlled_rotation[c]++;
            else
                r.multi_controlled_other++;
            r.toffoli_equivalent += model.toffoli_for_controls(c);
            r.two_qubit++;  // the singly-controlled remainder
        }
    }
    return r;
}

/// Ancillas the export decomposition of this circuit needs.
inline int decomposition_ancillas(const Circuit& circuit) {
    int a = 0;
    for (auto& op : circuit.ops) {
        int c = int(op.controls.size());
        if (c >= 2 && !(op.kind == GateKind::X && c == 2)) a = std::max(a, c - 1);
    }
    return a;
}

/// Rewrites one op into H/X/Z/Ry/Rx ops with at most one positive
/// control, plus Toffolis (X with two positive controls). Gates with
/// c >= 2 controls become an AND-chain over ancillas starting at
/// `ancilla_base`: 2(c-1) Toffoli around one singly-controlled base
/// gate. Ancillas must be |0> and are returned to |0>.
inline std::vector<GateOp> decompose_op(const GateOp& op, int ancilla_base) {
    std::vector<GateOp> out;
    auto flip_negatives = [&](const std::vector<Control>& cs) {
        for (auto& c : cs)
            if (c.polarity == 0) out.push_back(GateOp::x(c.qubit));
    };
    const int c = int(op.controls.size());
    bool native_toffoli = op.kind == GateKind::X && c == 2;
    if (c <= 1 || native_toffoli) {
        flip_negatives(op.controls);
        GateOp g = op;
        for (auto& ctl : g.controls) ctl.polarity = 1;
        out.push_back(g);
        flip_negatives(op.controls);
        return out;
    }
    flip_negatives(op.controls);
    // AND-chain: anc[0] = c0 & c1, anc[i] = anc[i-1] & c(i+1)
    std::vector<GateOp> chain;
    chain.push_back({GateKind::X, ancilla_base, 0.0,
                     {{op.controls[0].qubit, 1}, {op.controls[1].qubit, 1}}});
    for (int i = 2; i < c; ++i)
        chain.push_back({GateKind::X, ancilla_base + i - 1, 0.0,
                         {{op.controls[std::size_t(i)].qubit, 1}, {ancilla_base + i - 2, 1}}});
    for (auto& g : chain) out.push_back(g);
    GateOp body = op;
    body.controls = {{ancilla_base + c - 2, 1}};
    out.push_back(body);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) out.push_back(*it);
    flip_negatives(op.controls);
    return out;
}

inline nlohmann::json to_json(const ResourceReport& r) {
    nlohmann::json mcr = nlohmann::json::object();
    for (auto& [k, v] : r.multi_controlled_rotation) mcr[std::to_string(k)] = v;
    return {
        {"total_qubits", r.total_qubits},
        {"extra_qubits", r.extra_qubits},
        {"counts",
         {{"1q", r.one_qubit},
          {"2q", r.two_qubit},
          {"toffoli", r.toffoli},
          {"multi_controlled_rotation", mcr},
          {"multi_controlled_other", r.multi_controlled_other}}},
        {"toffoli_equivalent", r.toffoli_equivalent},
    };
}

}  // namespace qaa
