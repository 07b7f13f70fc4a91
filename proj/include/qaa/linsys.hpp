#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaa/circuit.hpp"
#include "qaa/primitives.hpp"
#include "qaa/simulator.hpp"

namespace qaa {

/// Tridiagonal Toeplitz system: 2y on the diagonal, -1 off it,
/// size N = 2^n - 1, eigenvalues 2(y - cos(j*pi/2^n)).
struct ToeplitzSystem {
    int n;
    double y;

    ToeplitzSystem(int n_, double y_) : n(n_), y(y_) {
        if (n < 1) throw std::invalid_argument("index width n must be >= 1");
        if (y < 2.0)
            throw std::invalid_argument(
                "y < 2 is out of scope (the y = 1 Poisson case is handled elsewhere)");
    }

    std::int64_t size() const { return (std::int64_t(1) << n) - 1; }
};

inline double eigenvalue(const ToeplitzSystem& sys, std::int64_t j) {
    if (j < 1 || j > sys.size()) throw std::out_of_range("eigenvalue index out of range");
    return 2.0 * (sys.y - std::cos(double(j) * kPi / std::pow(2.0, sys.n)));
}

/// lambda_j / (2y), which lands in (1/2, 3/2) for y >= 2.
inline double normalized_eigenvalue(const ToeplitzSystem& sys, std::int64_t j) {
    return eigenvalue(sys, j) / (2.0 * sys.y);
}

/// Relative residual ||A v - lambda_j v|| / ||v|| for the analytic
/// eigenvector v_k = sin(j k pi / 2^n). Validates the spectrum claim
/// against an actual matrix-vector product.
inline double eigenpair_residual(const ToeplitzSystem& sys, std::int64_t j) {
    const std::int64_t N = sys.size();
    if (N > 4095) throw std::invalid_argument("residual oracle capped at N <= 4095");
    if (j < 1 || j > N) throw std::out_of_range("eigenvalue index out of range");
    const double lambda = eigenvalue(sys, j);
    std::vector<double> v(std::size_t(N), 0.0);
    for (std::int64_t k = 1; k <= N; ++k)
        v[std::size_t(k - 1)] = std::sin(double(j) * double(k) * kPi / std::pow(2.0, sys.n));
    double num = 0.0, den = 0.0;
    for (std::int64_t k = 0; k < N; ++k) {
        double av = 2.0 * sys.y * v[std::size_t(k)];
        if (k > 0) av -= v[std::size_t(k - 1)];
        if (k + 1 < N) av -= v[std::size_t(k + 1)];
        double r = av - lambda * v[std::size_t(k)];
        num += r * r;
        den += v[std::size_t(k)] * v[std::size_t(k)];
    }
    return std::sqrt(num / den);
}

/// Truncation setup for the product-form reciprocal:
/// m = ceil(log2(4n + 6 + log2 y)), k = 2^m terms kept,
/// tail bound 2^(1-k).
struct ReciprocalPlan {
    int m;
    std::int64_t k;
    double eps_bound;

    static ReciprocalPlan for_system(const ToeplitzSystem& sys) {
        double terms = 4.0 * sys.n + 6.0 + std::log2(sys.y);
        int m = 0;
        while (std::pow(2.0, m) < terms) ++m;
        return with_factor_count(m);
    }

    static ReciprocalPlan with_factor_count(int m) {
        if (m < 1) throw std::invalid_argument("plan needs m >= 1");
        ReciprocalPlan p{m, std::int64_t(1) << m, std::pow(2.0, 1.0 - double(std::int64_t(1) << m))};
        return p;
    }
};

/// Geometric tail bound 2^(1-k) for 1/x truncated after k terms,
/// valid on x in (1/2, 3/2).
inline double truncation_error_bound(double x, int k) {
    if (!(x > 0.5 && x < 1.5))
        throw std::invalid_argument("bound only holds for x in (1/2, 3/2)");
    if (k < 1) throw std::invalid_argument("need k >= 1");
    return std::pow(2.0, 1 - k);
}

/// prod_{i<m} [1 + (cos(j pi/2^n)/y)^(2^i)], the classical oracle for
/// the circuit's scaled flag amplitude; approximates 1/x_j within
/// 2^(1-2^m).
inline double reciprocal_product(const ToeplitzSystem& sys, std::int64_t j,
                                 const ReciprocalPlan& plan) {
    if (j < 1 || j > sys.size()) throw std::out_of_range("eigenvalue index out of range");
    double t = std::cos(double(j) * kPi / std::pow(2.0, sys.n)) / sys.y;
    double product = 1.0, power = t;
    for (int i = 0; i < plan.m; ++i) {
        product *= 1.0 + power;
        power *= power;
    }
    return product;
}

/// One combiner factor of the reciprocal circuit: a 1-qubit LCU whose
/// non-identity branch prepares t^(2^i) with t = cos(phi) cos(j pi/2^n),
/// phi = arccos(1/y). The 2^i j-dependent cosines come from Eq-A3
/// cascades on 2^i work qubits; the classical (1/y)^(2^i) is one
/// rotation. Flag amplitude on (select = 0, work = 0...):
/// (1 + t^(2^i)) / 2.
inline Circuit build_reciprocal_factor(const ToeplitzSystem& sys, int i) {
    const std::int64_t copies = std::int64_t(1) << i;
    Circuit c;
    c.layout = {{"data", sys.n}, {"select", 1}, {"scale", 1}, {"power", int(copies)}};
    const Control select{c.layout.qubit("select", 0), 1};
    std::vector<int> data_qubits;
    for (int b = 0; b < sys.n; ++b) data_qubits.push_back(c.layout.qubit("data", b));
    c.append(GateOp::h(select.qubit));
    const double scale_theta = std::acos(std::pow(1.0 / sys.y, double(copies)));
    c.append(GateOp::ry(2.0 * scale_theta, c.layout.qubit("scale", 0)).with_controls({select}));
    for (std::int64_t q = 0; q < copies; ++q)
        append_ry_cascade(c, data_qubits, c.layout.qubit("power", int(q)), {select});
    c.append(GateOp::h(select.qubit));
    c.flag.require(select.qubit, 0);
    c.flag.require(c.layout.qubit("scale", 0), 0);
    for (std::int64_t q = 0; q < copies; ++q) c.flag.require(c.layout.qubit("power", int(q)), 0);
    return c;
}

/// Full reciprocal circuit: the m factors in sequence on disjoint
/// select/work qubits, sharing the data register. On basis |j> the
/// flag amplitude is 2^(-m) prod_i [1 + t^(2^i)] = 2^(-m) (2y/lambda_j)
/// up to the plan's truncation bound.
inline Circuit build_reciprocal_circuit(const ToeplitzSystem& sys, const ReciprocalPlan& plan) {
    Circuit c;
    c.layout = {{"data", sys.n}};
    std::vector<int> data_qubits;
    for (int b = 0; b < sys.n; ++b) data_qubits.push_back(c.layout.qubit("data", b));
    for (int i = 0; i < plan.m; ++i) {
        const std::int64_t copies = std::int64_t(1) << i;
        std::string suffix = std::to_string(i);
        c.layout.add("select" + suffix, 1);
        c.layout.add("scale" + suffix, 1);
        c.layout.add("power" + suffix, int(copies));
        const Control select{c.layout.qubit("select" + suffix, 0), 1};
        c.append(GateOp::h(select.qubit));
        double scale_theta = std::acos(std::pow(1.0 / sys.y, double(copies)));
        c.append(GateOp::ry(2.0 * scale_theta, c.layout.qubit("scale" + suffix, 0))
                     .with_controls({select}));
        for (std::int64_t q = 0; q < copies; ++q)
            append_ry_cascade(c, data_qubits, c.layout.qubit("power" + suffix, int(q)), {select});
        c.append(GateOp::h(select.qubit));
        c.flag.require(select.qubit, 0);
        c.flag.require(c.layout.qubit("scale" + suffix, 0), 0);
        for (std::int64_t q = 0; q < copies; ++q)
            c.flag.require(c.layout.qubit("power" + suffix, int(q)), 0);
    }
    return c;
}

/// Exact flag amplitude of the full reciprocal circuit on basis |j>,
/// computed factor by factor. The data register stays in |j> (it is
/// only ever a control), so the joint state is a tensor product across
/// factors and the flag amplitude is the product of the factor flag
/// amplitudes; each factor is simulated densely on its own.
inline double reciprocal_flag_amplitude(const ToeplitzSystem& sys, const ReciprocalPlan& plan,
                                        std::int64_t j, int max_qubits = kDefaultMaxQubits) {
    if (j < 1 || j > sys.size()) throw std::out_of_range("eigenvalue index out of range");
    double amp = 1.0;
    for (int i = 0; i < plan.m; ++i) {
        Circuit factor = build_reciprocal_factor(sys, i);
        Complex a = simulate_flag(factor, {{"data", std::uint64_t(j)}}, max_qubits);
        if (std::abs(a.imag()) > 1e-12)
            throw std::runtime_error("reciprocal factor amplitude should be real");
        amp *= a.real();
    }
    return amp;
}

}  // namespace qaa
