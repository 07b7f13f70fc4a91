#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaa/circuit.hpp"
#include "qaa/resources.hpp"

namespace qaa {

namespace detail {
inline std::string fmt_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}
}  // namespace detail

/// OpenQASM 2.0 text for a circuit. The layout is flattened into one
/// qreg q[...]; multi-controlled gates are decomposed per the default
/// cost model into Toffolis plus one controlled base gate over a
/// dedicated ancilla register anc[...]. Ancillas end in |0>.
inline std::string export_qasm(const Circuit& circuit) {
    const int n = circuit.num_qubits();
    const int na = decomposition_ancillas(circuit);
    std::ostringstream os;
    os << "OPENQASM 2.0;\n";
    os << "include \"qelib1.inc\";\n";
    os << "qreg q[" << n << "];\n";
    if (na > 0) os << "qreg anc[" << na << "];\n";
    auto name = [&](int qubit) {
        return qubit < n ? "q[" + std::to_string(qubit) + "]"
                         : "anc[" + std::to_string(qubit - n) + "]";
    };
    for (auto& original : circuit.ops) {
        for (auto& op : decompose_op(original, n)) {
            const int c = int(op.controls.size());
            if (op.kind == GateKind::X && c == 2) {
                os << "ccx " << name(op.controls[0].qubit) << "," << name(op.controls[1].qubit)
                   << "," << name(op.target) << ";\n";
                continue;
            }
            std::string args;
            if (op.kind == GateKind::Ry || op.kind == GateKind::Rx)
                args = "(" + detail::fmt_angle(op.angle) + ")";
            std::string mnemonic = kind_name(op.kind);
            if (c == 1) {
                mnemonic = "c" + mnemonic;
                os << mnemonic << args << " " << name(op.controls[0].qubit) << ","
                   << name(op.target) << ";\n";
            } else {
                os << mnemonic << args << " " << name(op.target) << ";\n";
            }
        }
    }
    return os.str();
}

/// Parses the QASM subset export_qasm() emits: h/x/z/ry/rx, their
/// singly-controlled forms, and ccx, over registers q and anc. Returns
/// a flat circuit (registers "q" and "anc", no flag).
inline Circuit parse_qasm(const std::string& text) {
    Circuit circuit;
    int nq = -1, na = 0;
    std::istringstream is(text);
    std::string line;
    auto parse_qubit = [&](const std::string& tok) {
        auto lb = tok.find('['), rb = tok.find(']');
        if (lb == std::string::npos || rb == std::string::npos)
            throw std::runtime_error("bad qubit reference: " + tok);
        std::string reg = tok.substr(0, lb);
        int idx = std::stoi(tok.substr(lb + 1, rb - lb - 1));
        if (reg == "q") return idx;
        if (reg == "anc") return nq + idx;
        throw std::runtime_error("unknown register: " + reg);
    };
    while (std::getline(is, line)) {
        // strip comments and whitespace
        auto cpos = line.find("//");
        if (cpos != std::string::npos) line.erase(cpos);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.empty()) continue;
        if (line.back() != ';') throw std::runtime_error("missing semicolon: " + line);
        line.pop_back();
        if (line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0) continue;
        if (line.rfind("qreg", 0) == 0) {
            std::string decl = line.substr(4);
            auto lb = decl.find('['), rb = decl.find(']');
            std::string reg = decl.substr(0, lb);
            reg.erase(0, reg.find_first_not_of(" \t"));
            reg.erase(reg.find_last_not_of(" \t") + 1);
            int width = std::stoi(decl.substr(lb + 1, rb - lb - 1));
            if (reg == "q") nq = width;
            else if (reg == "anc") na = width;
            else throw std::runtime_error("unknown register: " + reg);
            continue;
        }
        // gate line: mnemonic[(angle)] operand[,operand...]
        auto sp = line.find_first_of(" \t");
        if (sp == std::string::npos) throw std::runtime_error("bad gate line: " + line);
        std::string head = line.substr(0, sp);
        std::string operands = line.substr(sp + 1);
        double angle = 0.0;
        auto paren = head.find('(');
        std::string mnemonic = head;
        if (paren != std::string::npos) {
            auto close = head.find(')');
            angle = std::stod(head.substr(paren + 1, close - paren - 1));
            mnemonic = head.substr(0, paren);
        }
        std::vector<int> qubits;
        std::istringstream ops_stream(operands);
        std::string tok;
        while (std::getline(ops_stream, tok, ',')) {
            tok.erase(0, tok.find_first_not_of(" \t"));
            tok.erase(tok.find_last_not_of(" \t") + 1);
            qubits.push_back(parse_qubit(tok));
        }
        GateOp op;
        op.angle = angle;
        bool controlled = mnemonic.size() > 1 && mnemonic[0] == 'c' && mnemonic != "ccx";
        std::string base = controlled ? mnemonic.substr(1) : mnemonic;
        if (mnemonic == "ccx") {
            if (qubits.size() != 3) throw std::runtime_error("ccx needs 3 operands");
            op.kind = GateKind::X;
            op.controls = {{qubits[0], 1}, {qubits[1], 1}};
            op.target = qubits[2];
        } else {
            if (base == "h") op.kind = GateKind::H;
            else if (base == "x") op.kind = GateKind::X;
            else if (base == "z") op.kind = GateKind::Z;
            else if (base == "ry") op.kind = GateKind::Ry;
            else if (base == "rx") op.kind = GateKind::Rx;
            else throw std::runtime_error("unsupported gate: " + mnemonic);
            if (controlled) {
                if (qubits.size() != 2) throw std::runtime_error("controlled gate needs 2 operands");
                op.controls = {{qubits[0], 1}};
                op.target = qubits[1];
            } else {
                if (qubits.size() != 1) throw std::runtime_error("gate needs 1 operand");
                op.target = qubits[0];
            }
        }
        circuit.append(op);
    }
    if (nq < 0) throw std::runtime_error("no qreg q[...] declaration");
    circuit.layout.add("q", nq);
    if (na > 0) circuit.layout.add("anc", na);
    return circuit;
}

}  // namespace qaa
