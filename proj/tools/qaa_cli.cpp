// Command-line front end: builds each construction, simulates it, and
// reports oracle vs simulated amplitudes as JSON on stdout.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qaa/qaa.hpp"

using nlohmann::json;
using namespace qaa;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

json complex_json(Complex a) { return {{"re", a.real()}, {"im", a.imag()}}; }

struct CheckState {
    bool enabled = false;
    bool failed = false;

    void record(double abs_error, double tolerance = 1e-10) {
        if (enabled && abs_error > tolerance) failed = true;
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

/// Export to QASM and optionally verify the round-trip flag amplitude.
void maybe_export(const Circuit& circuit, const std::string& path, bool check_roundtrip,
                  const std::map<std::string, std::uint64_t>& inputs, CheckState& check) {
    if (path.empty()) return;
    std::string text = export_qasm(circuit);
    write_file(path, text);
    if (!check_roundtrip) return;
    Complex direct = simulate_flag(circuit, inputs, simulation_qubit_cap());
    Circuit imported = parse_qasm(text);
    // same flat indices; ancillas uncompute to zero
    std::uint64_t flat_input = 0;
    std::string bits = basis_input(circuit.layout, inputs);
    for (char ch : bits) flat_input = (flat_input << 1) | std::uint64_t(ch == '1');
    int anc = imported.layout.has("anc") ? imported.layout.width("anc") : 0;
    StateVector s = StateVector::basis(imported.num_qubits(), flat_input << anc,
                                       simulation_qubit_cap());
    for (auto& op : imported.ops) apply(s, op);
    FlagPredicate flat_flag = circuit.flag;
    std::vector<std::pair<int, int>> residual;
    for (int q = 0; q < circuit.num_qubits(); ++q)
        if (!flat_flag.constrains(q))
            residual.emplace_back(q, int(bits[std::size_t(q)] == '1'));
    for (int a = 0; a < anc; ++a) residual.emplace_back(circuit.num_qubits() + a, 0);
    Complex rt = flag_amplitude(s, flat_flag, residual);
    check.record(std::abs(rt - direct), 1e-9);
}

Circuit build_named_circuit(const std::string& name, int n, double y) {
    if (name == "prep-basic") return build_basic(n);
    if (name == "prep-alternative") return build_alternative(n);
    if (name == "prep-improved") return build_improved(n);
    if (name == "prep-complex") return build_complex(n);
    if (name == "cascade") return binary_controlled_ry(n);
    if (name == "recip") {
        ToeplitzSystem sys(n, y);
        return build_reciprocal_circuit(sys, ReciprocalPlan::for_system(sys));
    }
    throw CLI::ValidationError("--circuit", "unknown circuit: " + name);
}

int run_prep(const std::string& variant_name, int n, std::uint64_t x, std::uint64_t a,
             std::uint64_t b, CheckState& check, const std::string& export_path,
             bool check_roundtrip) {
    PrepVariant variant = prep_variant_from_string(variant_name);
    Circuit circuit;
    Complex oracle;
    std::map<std::string, std::uint64_t> inputs;
    switch (variant) {
        case PrepVariant::Basic:
            circuit = build_basic(n);
            oracle = basic_closed_form(n, x);
            inputs = {{"data", x}};
            break;
        case PrepVariant::Alternative:
            circuit = build_alternative(n);
            oracle = alternative_closed_form(n, x);
            inputs = {{"data", x}};
            break;
        case PrepVariant::Improved:
            circuit = build_improved(n);
            oracle = improved_closed_form(n, x);
            inputs = {{"data", x}};
            break;
        case PrepVariant::Complex:
            circuit = build_complex(n);
            oracle = complex_closed_form(n, a, b);
            inputs = {{"data_re", a}, {"data_im", b}};
            break;
    }
    Complex simulated = simulate_flag(circuit, inputs, simulation_qubit_cap());
    double abs_error = std::abs(simulated - oracle);
    check.record(abs_error);
    json out{
        {"inputs", {{"variant", variant_name}, {"n", n}}},
        {"oracle", complex_json(oracle)},
        {"simulated", complex_json(simulated)},
        {"abs_error", abs_error},
        {"resources", to_json(count_resources(circuit))},
    };
    if (variant == PrepVariant::Complex) {
        out["inputs"]["a"] = a;
        out["inputs"]["b"] = b;
    } else {
        out["inputs"]["x"] = x;
    }
    maybe_export(circuit, export_path, check_roundtrip, inputs, check);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_recip(int n, double y, std::int64_t j, CheckState& check) {
    ToeplitzSystem sys(n, y);
    ReciprocalPlan plan = ReciprocalPlan::for_system(sys);
    double lambda = eigenvalue(sys, j);
    double product = reciprocal_product(sys, j, plan);
    double amp = reciprocal_flag_amplitude(sys, plan, j, simulation_qubit_cap());
    double scaled = amp * std::pow(2.0, plan.m);
    double reciprocal = 1.0 / normalized_eigenvalue(sys, j);
    double abs_error = std::abs(scaled - product);
    check.record(abs_error);
    check.record(std::abs(scaled - reciprocal), plan.eps_bound);
    Circuit circuit = build_reciprocal_circuit(sys, plan);
    json out{
        {"inputs", {{"n", n}, {"y", y}, {"j", j}, {"m", plan.m}}},
        {"lambda", lambda},
        {"product", product},
        {"circuit_amp_scaled", scaled},
        {"oracle", complex_json(Complex(product))},
        {"simulated", complex_json(Complex(amp))},
        {"abs_error", abs_error},
        {"eps_bound", plan.eps_bound},
        {"resources", to_json(count_resources(circuit))},
    };
    std::cout << out.dump(2) << "\n";
    return 0;
}

std::function<double(double)> named_function(const std::string& name, double alpha) {
    if (name == "sigmoid") return [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    if (name == "tanh") return [](double x) { return std::tanh(x); };
    if (name == "mrelu") return [alpha](double x) { return std::max(alpha * x, x); };
    throw CLI::ValidationError("--function", "unknown function: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum amplitude arithmetic toolkit"};
    app.require_subcommand(1);

    CheckState check;
    std::string variant = "basic", circuit_name, function_name = "sigmoid";
    std::string table_path, out_path, export_path;
    int n = 2, d = 3, J = 4, n_bits = 12;
    double y = 2.0, x_point = 0.0, eps = 1e-3, alpha = 0.01, b0 = 0.0, bJ = 1.0;
    std::uint64_t x = 0, a_in = 0, b_in = 0;
    std::int64_t j = 1;
    bool check_roundtrip = false;

    auto* prep = app.add_subcommand("prep", "black-box state preparation");
    prep->add_option("--variant", variant)->check(CLI::IsMember({"basic", "alternative", "improved", "complex"}));
    prep->add_option("--n", n)->required();
    prep->add_option("--x", x);
    prep->add_option("--a", a_in);
    prep->add_option("--b", b_in);
    prep->add_flag("--check", check.enabled);
    prep->add_option("--export", export_path);
    prep->add_flag("--check-roundtrip", check_roundtrip);

    auto* recip = app.add_subcommand("recip", "eigenvalue reciprocal circuit");
    recip->add_option("--n", n)->required();
    recip->add_option("--y", y)->required();
    recip->add_option("--j", j)->required();
    recip->add_flag("--check", check.enabled);

    auto* polyfit = app.add_subcommand("polyfit", "piecewise polynomial fitting");
    polyfit->add_option("--function", function_name)->check(CLI::IsMember({"sigmoid", "tanh", "mrelu"}));
    polyfit->add_option("--alpha", alpha);
    polyfit->add_option("--d", d);
    polyfit->add_option("--J", J);
    polyfit->add_option("--n-bits", n_bits);
    polyfit->add_option("--eps", eps);
    polyfit->add_option("--b0", b0);
    polyfit->add_option("--bJ", bJ);
    polyfit->add_option("--out", out_path)->required();

    auto* polyeval_cmd = app.add_subcommand("polyeval", "amplitude polynomial evaluation");
    polyeval_cmd->add_option("--table", table_path)->required();
    polyeval_cmd->add_option("--x", x_point)->required();
    polyeval_cmd->add_flag("--check", check.enabled);

    auto* resources_cmd = app.add_subcommand("resources", "resource report for a named circuit");
    resources_cmd->add_option("--circuit", circuit_name)->required();
    resources_cmd->add_option("--n", n)->required();
    resources_cmd->add_option("--y", y);

    auto* export_cmd = app.add_subcommand("export", "OpenQASM 2.0 export of a named circuit");
    export_cmd->add_option("--circuit", circuit_name)->required();
    export_cmd->add_option("--n", n)->required();
    export_cmd->add_option("--y", y);
    export_cmd->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    }

    try {
        if (prep->parsed()) {
            run_prep(variant, n, x, a_in, b_in, check, export_path, check_roundtrip);
        } else if (recip->parsed()) {
            run_recip(n, y, j, check);
        } else if (polyfit->parsed()) {
            auto f = named_function(function_name, alpha);
            auto [poly, report] = fit(f, b0, bJ, d, J, n_bits, eps);
            json table = table_to_json(poly, report, function_name);
            write_file(out_path, table.dump(2) + "\n");
            std::cout << table["fit_report"].dump(2) << "\n";
        } else if (polyeval_cmd->parsed()) {
            std::ifstream in(table_path);
            if (!in) throw std::runtime_error("cannot read " + table_path);
            auto [poly, report] = table_from_json(json::parse(in));
            int sub = poly.subdomain_of(x_point);
            QramStub qram = QramStub::from(poly, table_path);
            Circuit circuit = build_eval_circuit(poly, qram, sub, x_point);
            Complex simulated = simulate_flag(circuit, {}, simulation_qubit_cap());
            double oracle = eval_classical(poly, x_point) / eval_scale(poly);
            double abs_error = std::abs(simulated - Complex(oracle));
            check.record(abs_error, 1e-9);
            json out{
                {"inputs", {{"x", x_point}, {"subdomain", sub}, {"table", table_path}}},
                {"oracle", complex_json(Complex(oracle))},
                {"simulated", complex_json(simulated)},
                {"abs_error", abs_error},
                {"resources", to_json(count_resources(circuit))},
            };
            std::cout << out.dump(2) << "\n";
        } else if (resources_cmd->parsed()) {
            Circuit circuit = build_named_circuit(circuit_name, n, y);
            std::cout << to_json(count_resources(circuit)).dump(2) << "\n";
        } else if (export_cmd->parsed()) {
            Circuit circuit = build_named_circuit(circuit_name, n, y);
            write_file(out_path, export_qasm(circuit));
            std::cout << json{{"written", out_path},
                              {"resources", to_json(count_resources(circuit))}}
                             .dump(2)
                      << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }

    if (check.failed) {
        std::cerr << "check failed: simulated value disagrees with the oracle\n";
        return kExitCheckFailed;
    }
    return 0;
}
