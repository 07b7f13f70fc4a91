#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaa/circuit.hpp"
#include "qaa/stateprep.hpp"

#include "json.hpp"

namespace qaa {

/// Piecewise polynomial with n-bit sign-magnitude fixed-point
/// coefficients: row j holds scaled integers c with |c| < 2^n_bits and
/// coefficient value c / 2^n_bits.
struct PiecewisePolynomial {
    std::vector<double> breakpoints;                // J+1 strictly increasing values
    int degree = 0;
    int n_bits = 0;
    std::vector<std::vector<std::int64_t>> coeffs;  // J rows x (degree+1) scaled integers

    int subdomains() const { return int(coeffs.size()); }

    double coefficient(int j, int i) const {
        return double(coeffs.at(std::size_t(j)).at(std::size_t(i))) / std::pow(2.0, n_bits);
    }

    void validate() const {
        if (breakpoints.size() < 2) throw std::invalid_argument("need at least one subdomain");
        for (std::size_t i = 1; i < breakpoints.size(); ++i)
            if (!(breakpoints[i] > breakpoints[i - 1]))
                throw std::invalid_argument("breakpoints must be strictly increasing");
        if (coeffs.size() + 1 != breakpoints.size())
            throw std::invalid_argument("coefficient rows must match subdomains");
        const std::int64_t limit = std::int64_t(1) << n_bits;
        for (auto& row : coeffs) {
            if (int(row.size()) != degree + 1)
                throw std::invalid_argument("coefficient row width must be degree + 1");
            for (auto c : row)
                if (c <= -limit || c >= limit)
                    throw std::invalid_argument("coefficient exceeds the fixed-point range");
        }
    }

    /// Left-closed subdomain lookup: x in [b_j, b_{j+1}).
    int subdomain_of(double x) const {
        if (!(x >= breakpoints.front() && x < breakpoints.back()))
            throw std::out_of_range("x outside the fitted domain");
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
        return int(it - breakpoints.begin()) - 1;
    }
};

/// Horner evaluation in function units (coefficients as fractions).
inline double eval_classical(const PiecewisePolynomial& poly, double x) {
    const int j = poly.subdomain_of(x);
    double acc = 0.0;
    for (int i = poly.degree; i >= 0; --i) acc = acc * x + poly.coefficient(j, i);
    return acc;
}

/// Classical stand-in for QRAM: the per-subdomain coefficient rows.
struct QramStub {
    std::map<int, std::vector<std::int64_t>> table;
    std::string provenance;
    int degree = 0;
    int n_bits = 0;

    static QramStub from(const PiecewisePolynomial& poly, std::string provenance = {}) {
        QramStub q;
        q.degree = poly.degree;
        q.n_bits = poly.n_bits;
        q.provenance = std::move(provenance);
        for (int j = 0; j < poly.subdomains(); ++j) q.table[j] = poly.coeffs[std::size_t(j)];
        return q;
    }

    const std::vector<std::int64_t>& row(int j) const {
        auto it = table.find(j);
        if (it == table.end()) throw std::out_of_range("missing QRAM row " + std::to_string(j));
        return it->second;
    }
};

struct FitReport {
    std::vector<double> max_abs_error;  // per subdomain, dense-grid true maximum
    double target_eps = 0.0;
    int iterations = 0;
    bool met_target = true;
};

namespace detail {

/// Gaussian elimination with partial pivoting; a is row-major n x n.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const int n = int(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[std::size_t(r * n + col)]) > std::abs(a[std::size_t(pivot * n + col)]))
                pivot = r;
        if (std::abs(a[std::size_t(pivot * n + col)]) < 1e-300)
            throw std::runtime_error("singular system in fit");
        if (pivot != col) {
            for (int k = 0; k < n; ++k)
                std::swap(a[std::size_t(col * n + k)], a[std::size_t(pivot * n + k)]);
            std::swap(b[std::size_t(col)], b[std::size_t(pivot)]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = a[std::size_t(r * n + col)] / a[std::size_t(col * n + col)];
            if (f == 0.0) continue;
            for (int k = col; k < n; ++k)
                a[std::size_t(r * n + k)] -= f * a[std::size_t(col * n + k)];
            b[std::size_t(r)] -= f * b[std::size_t(col)];
        }
    }
    std::vector<double> x(std::size_t(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[std::size_t(r)];
        for (int k = r + 1; k < n; ++k) s -= a[std::size_t(r * n + k)] * x[std::size_t(k)];
        x[std::size_t(r)] = s / a[std::size_t(r * n + r)];
    }
    return x;
}

inline double poly_eval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (int i = int(c.size()) - 1; i >= 0; --i) acc = acc * x + c[std::size_t(i)];
    return acc;
}

/// One Remez pass on [lo, hi]: Chebyshev start, exchange iterations
/// until the equioscillation defect drops under 10% (or 50 rounds).
inline std::vector<double> remez(const std::function<double(double)>& f, double lo, double hi,
                                 int d, int* iterations_out) {
    const int npts = d + 2;
    std::vector<double> refs(std::size_t(npts), 0.0);
    for (int i = 0; i < npts; ++i)
        refs[std::size_t(i)] =
            0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(kPi * double(npts - 1 - i) / (npts - 1));
    std::vector<double> coeffs(std::size_t(d + 1), 0.0);
    const int grid_n = 2000;
    int iter = 0;
    for (; iter < 50; ++iter) {
        // solve for coefficients and the leveled error E
        std::vector<double> a(std::size_t(npts * npts), 0.0), b(std::size_t(npts), 0.0);
        for (int r = 0; r < npts; ++r) {
            double x = refs[std::size_t(r)], p = 1.0;
            for (int k = 0; k <= d; ++k) {
                a[std::size_t(r * npts + k)] = p;
                p *= x;
            }
            a[std::size_t(r * npts + d + 1)] = (r % 2 == 0) ? 1.0 : -1.0;
            b[std::size_t(r)] = f(x);
        }
        auto sol = solve_dense(std::move(a), std::move(b));
        coeffs.assign(sol.begin(), sol.begin() + d + 1);
        const double leveled = std::abs(sol[std::size_t(d + 1)]);

        // locate error extrema on a dense grid
        auto err = [&](double x) { return poly_eval(coeffs, x) - f(x); };
        std::vector<std::pair<double, double>> extrema;  // (x, e)
        double prev_x = lo, prev_e = err(lo);
        extrema.emplace_back(prev_x, prev_e);
        for (int g = 1; g <= grid_n; ++g) {
            double x = lo + (hi - lo) * double(g) / grid_n;
            double e = err(x);
            if (extrema.back().second * e > 0.0) {
                if (std::abs(e) > std::abs(extrema.back().second)) extrema.back() = {x, e};
            } else {
                extrema.emplace_back(x, e);
            }
        }
        double max_err = 0.0;
        for (auto& p : extrema) max_err = std::max(max_err, std::abs(p.second));
        if (max_err < 1e-15) break;  // exact fit (e.g. low-degree target)
        if (leveled > 0.0 && (max_err - leveled) / leveled < 0.1) break;

        if (int(extrema.size()) < npts) break;  // cannot improve the reference further
        // keep the npts consecutive alternating extrema with the
        // largest smallest amplitude
        int best_start = 0;
        double best_min = -1.0;
        for (int s = 0; s + npts <= int(extrema.size()); ++s) {
            double mn = 1e300;
            for (int i = 0; i < npts; ++i)
                mn = std::min(mn, std::abs(extrema[std::size_t(s + i)].second));
            if (mn > best_min) {
                best_min = mn;
                best_start = s;
            }
        }
        for (int i = 0; i < npts; ++i) refs[std::size_t(i)] = extrema[std::size_t(best_start + i)].first;
    }
    if (iterations_out) *iterations_out += iter;
    return coeffs;
}

/// Sparse-coefficient pass: fix coefficients one at a time (largest
/// magnitude first) to the n-bit grid, refitting the still-free ones by
/// least squares on a subdomain grid.
inline std::vector<std::int64_t> quantize_sparse(const std::function<double(double)>& f, double lo,
                                                 double hi, std::vector<double> coeffs, int n_bits) {
    const int d = int(coeffs.size()) - 1;
    const std::int64_t limit = (std::int64_t(1) << n_bits) - 1;
    const double scale = std::pow(2.0, n_bits);
    std::vector<std::int64_t> fixed(std::size_t(d + 1), 0);
    std::vector<bool> is_fixed(std::size_t(d + 1), false);
    const int grid_n = 256;
    std::vector<double> xs(grid_n), fs(grid_n);
    for (int g = 0; g < grid_n; ++g) {
        xs[std::size_t(g)] = lo + (hi - lo) * (double(g) + 0.5) / grid_n;
        fs[std::size_t(g)] = f(xs[std::size_t(g)]);
    }
    for (int round = 0; round <= d; ++round) {
        // once the still-unexplained part of f is under half a
        // quantization step, further terms cannot help; keep the
        // remaining coefficients sparse (zero)
        double worst = 0.0;
        for (int g = 0; g < grid_n; ++g) {
            double resid = fs[std::size_t(g)];
            for (int i = 0; i <= d; ++i)
                if (is_fixed[std::size_t(i)])
                    resid -= coeffs[std::size_t(i)] * std::pow(xs[std::size_t(g)], i);
            worst = std::max(worst, std::abs(resid));
        }
        if (worst < 0.5 / scale) break;
        int pick = -1;
        for (int i = 0; i <= d; ++i)
            if (!is_fixed[std::size_t(i)] &&
                (pick < 0 || std::abs(coeffs[std::size_t(i)]) > std::abs(coeffs[std::size_t(pick)])))
                pick = i;
        std::int64_t q = std::llround(coeffs[std::size_t(pick)] * scale);
        q = std::clamp(q, -limit, limit);
        fixed[std::size_t(pick)] = q;
        is_fixed[std::size_t(pick)] = true;
        coeffs[std::size_t(pick)] = double(q) / scale;

        std::vector<int> free;
        for (int i = 0; i <= d; ++i)
            if (!is_fixed[std::size_t(i)]) free.push_back(i);
        if (free.empty()) break;
        // least squares for the free coefficients against the residual
        const int nf = int(free.size());
        std::vector<double> ata(std::size_t(nf * nf), 0.0), atb(std::size_t(nf), 0.0);
        for (int g = 0; g < grid_n; ++g) {
            double x = xs[std::size_t(g)];
            double resid = fs[std::size_t(g)];
            for (int i = 0; i <= d; ++i)
                if (is_fixed[std::size_t(i)]) resid -= coeffs[std::size_t(i)] * std::pow(x, i);
            std::vector<double> basis(std::size_t(nf), 0.0);
            for (int a = 0; a < nf; ++a) basis[std::size_t(a)] = std::pow(x, free[std::size_t(a)]);
            for (int a = 0; a < nf; ++a) {
                atb[std::size_t(a)] += basis[std::size_t(a)] * resid;
                for (int b2 = 0; b2 < nf; ++b2)
                    ata[std::size_t(a * nf + b2)] += basis[std::size_t(a)] * basis[std::size_t(b2)];
            }
        }
        auto sol = solve_dense(std::move(ata), std::move(atb));
        for (int a = 0; a < nf; ++a) coeffs[std::size_t(free[std::size_t(a)])] = sol[std::size_t(a)];
    }
    return fixed;
}

}  // namespace detail

/// Fits f on [b0, bJ) with J uniform subdomains, degree d, and n-bit
/// fixed-point coefficients. The reported per-subdomain error is the
/// true maximum of |p - f| on a dense grid (10^4 points per subdomain)
/// with the quantized coefficients; it may exceed eps, which is
/// flagged in the report rather than fatal.
inline std::pair<PiecewisePolynomial, FitReport> fit(const std::function<double(double)>& f,
                                                     double b0, double bJ, int d, int J,
                                                     int n_bits, double eps) {
    if (!(bJ > b0)) throw std::invalid_argument("empty domain");
    if (d < 0 || d > 7) throw std::invalid_argument("degree must be in [0, 7]");
    if (J < 1 || J > 64) throw std::invalid_argument("subdomain count must be in [1, 64]");
    if (n_bits < 2 || n_bits > 62) throw std::invalid_argument("n_bits must be in [2, 62]");
    // reject unbounded/out-of-range targets up front
    for (int g = 0; g <= 4096; ++g) {
        double x = b0 + (bJ - b0) * double(g) / 4097.0;
        double v = f(x);
        if (!std::isfinite(v)) throw std::invalid_argument("f is not finite on the domain");
        if (std::abs(v) >= 1.0)
            throw std::invalid_argument("|f| must stay below 1; rescale the output first");
    }

    PiecewisePolynomial poly;
    poly.degree = d;
    poly.n_bits = n_bits;
    for (int j = 0; j <= J; ++j) poly.breakpoints.push_back(b0 + (bJ - b0) * double(j) / J);
    FitReport report;
    report.target_eps = eps;

    for (int j = 0; j < J; ++j) {
        double lo = poly.breakpoints[std::size_t(j)], hi = poly.breakpoints[std::size_t(j + 1)];
        auto coeffs = detail::remez(f, lo, hi, d, &report.iterations);
        auto scaled = detail::quantize_sparse(f, lo, hi, coeffs, n_bits);
        poly.coeffs.push_back(scaled);
        double max_err = 0.0;
        const int dense = 10000;
        for (int g = 0; g <= dense; ++g) {
            double x = lo + (hi - lo) * double(g) / dense;
            if (x >= hi) x = std::nextafter(hi, lo);
            double p = 0.0;
            for (int i = d; i >= 0; --i)
                p = p * x + double(scaled[std::size_t(i)]) / std::pow(2.0, n_bits);
            max_err = std::max(max_err, std::abs(p - f(x)));
        }
        report.max_abs_error.push_back(max_err);
        if (max_err > eps) report.met_target = false;
    }
    poly.validate();
    return {poly, report};
}

/// Step-3 power gadget on its own: i copies of Ry(2*arccos x), flag
/// all-zero with amplitude x^i.
inline Circuit build_power_gadget(int i, double x) {
    if (i < 1) throw std::invalid_argument("power must be >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x must lie in [0, 1]");
    Circuit c;
    c.layout = {{"data", i}};
    for (int q = 0; q < i; ++q) c.append(GateOp::ry(2.0 * std::acos(x), q));
    for (int q = 0; q < i; ++q) c.flag.require(q, 0);
    return c;
}

namespace detail {

struct EvalRegisters {
    int m = 0;    // control width, ceil(log2(d+1))
    int mp = 0;   // parameter-control width, ceil(log2 n_bits)
};

inline EvalRegisters eval_registers(int degree, int n_bits) {
    EvalRegisters r;
    while ((1 << r.m) < degree + 1) ++r.m;
    r.mp = control_width(n_bits);
    return r;
}

/// Appends the Step-2 coefficient loads (and sign flips) for one QRAM
/// row. Caller owns the Hadamards on pinner/pctl; `select(i)` yields
/// the outer controls scoping branch i.
inline void append_row_loads(Circuit& c, const std::vector<std::int64_t>& row, int n_bits,
                             const std::function<std::vector<Control>(int)>& select) {
    const int pwork = c.layout.qubit("pwork", 0);
    const Control pinner{c.layout.qubit("pinner", 0), 1};
    for (int i = 0; i < int(row.size()); ++i) {
        std::int64_t coeff = row[std::size_t(i)];
        if (coeff == 0) continue;
        append_improved_load_bits(c, std::uint64_t(std::abs(coeff)), n_bits, "pctl", pwork,
                                  pinner, select(i));
        if (coeff < 0) c.append(GateOp::z(pwork).with_controls(select(i)));
    }
}

}  // namespace detail

/// Step-2 fragment alone: controlled on Control = |i>, loads
/// sign(p_i) |p_i| / 2^(n_bits+1) onto the parameter flag
/// (pctl = 0, pwork = 1, pinner = 0). Exposed for direct testing.
inline Circuit qram_load_fragment(const QramStub& qram, int j) {
    const auto& row = qram.row(j);
    auto regs = detail::eval_registers(qram.degree, qram.n_bits);
    Circuit c;
    if (regs.m > 0) c.layout.add("control", regs.m);
    c.layout.add("pctl", regs.mp);
    c.layout.add("pwork", 1);
    c.layout.add("pinner", 1);
    c.append(GateOp::h(c.layout.qubit("pinner", 0)));
    c.h_register("pctl");
    detail::append_row_loads(c, row, qram.n_bits, [&](int i) {
        return regs.m > 0 ? basis_controls(c.layout, "control", std::uint64_t(i))
                          : std::vector<Control>{};
    });
    c.h_register("pctl");
    c.append(GateOp::h(c.layout.qubit("pinner", 0)));
    for (int b = 0; b < regs.mp; ++b) c.flag.require(c.layout.qubit("pctl", b), 0);
    c.flag.require(c.layout.qubit("pwork", 0), 1);
    c.flag.require(c.layout.qubit("pinner", 0), 0);
    return c;
}

/// The four-step evaluation circuit for subdomain j at classical point
/// x: uniform Control superposition, QRAM coefficient loads on the
/// Parameter registers, x^i power rotations on Data, Control
/// uncomputation. Flag amplitude:
///   p(x) / (2^(m+1) * 2^n_bits)
/// with p the integer-coefficient polynomial of row j.
inline Circuit build_eval_circuit(const PiecewisePolynomial& poly, const QramStub& qram, int j,
                                  double x) {
    poly.validate();
    const int jx = poly.subdomain_of(x);
    if (jx != j) throw std::invalid_argument("x lies outside subdomain " + std::to_string(j));
    if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument("the circuit evaluates points in [0, 1)");
    const auto& row = qram.row(j);
    auto regs = detail::eval_registers(poly.degree, poly.n_bits);
    const int d = poly.degree;

    Circuit c;
    if (regs.m > 0) c.layout.add("control", regs.m);
    c.layout.add("pctl", regs.mp);
    c.layout.add("pwork", 1);
    c.layout.add("pinner", 1);
    if (d > 0) c.layout.add("data", d);

    auto select = [&](int i) {
        return regs.m > 0 ? basis_controls(c.layout, "control", std::uint64_t(i))
                          : std::vector<Control>{};
    };

    if (regs.m > 0) c.h_register("control");                    // Step 1
    c.append(GateOp::h(c.layout.qubit("pinner", 0)));
    c.h_register("pctl");
    detail::append_row_loads(c, row, poly.n_bits, select);      // Step 2
    c.h_register("pctl");
    c.append(GateOp::h(c.layout.qubit("pinner", 0)));
    for (int i = 1; i <= d; ++i) {                              // Step 3
        if (row[std::size_t(i)] == 0) continue;
        for (int q = 0; q < i; ++q)
            c.append(GateOp::ry(2.0 * std::acos(x), c.layout.qubit("data", q))
                         .with_controls(select(i)));
    }
    if (regs.m > 0) c.h_register("control");                    // Step 4

    if (regs.m > 0)
        for (int b = 0; b < regs.m; ++b) c.flag.require(c.layout.qubit("control", b), 0);
    for (int b = 0; b < regs.mp; ++b) c.flag.require(c.layout.qubit("pctl", b), 0);
    c.flag.require(c.layout.qubit("pwork", 0), 1);
    c.flag.require(c.layout.qubit("pinner", 0), 0);
    if (d > 0)
        for (int b = 0; b < d; ++b) c.flag.require(c.layout.qubit("data", b), 0);
    return c;
}

/// The flag amplitude rescaled back to function units:
/// amp * 2^(m+1) equals the row polynomial evaluated with fractional
/// coefficients.
inline double eval_scale(const PiecewisePolynomial& poly) {
    auto regs = detail::eval_registers(poly.degree, poly.n_bits);
    return std::pow(2.0, regs.m + 1);
}

// --- coefficient-table JSON (bit-exact: scaled integers) ---

inline nlohmann::json table_to_json(const PiecewisePolynomial& poly, const FitReport& report,
                                    const std::string& function) {
    nlohmann::json j{
        {"function", function},
        {"domain", {poly.breakpoints.front(), poly.breakpoints.back()}},
        {"degree", poly.degree},
        {"n_bits", poly.n_bits},
        {"breakpoints", poly.breakpoints},
        {"coeffs", poly.coeffs},
        {"fit_report",
         {{"max_abs_error", report.max_abs_error},
          {"target_eps", report.target_eps},
          {"iterations", report.iterations},
          {"met_target", report.met_target}}},
    };
    return j;
}

inline std::pair<PiecewisePolynomial, FitReport> table_from_json(const nlohmann::json& j) {
    PiecewisePolynomial poly;
    poly.degree = j.at("degree").get<int>();
    poly.n_bits = j.at("n_bits").get<int>();
    poly.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    poly.coeffs = j.at("coeffs").get<std::vector<std::vector<std::int64_t>>>();
    poly.validate();
    FitReport report;
    if (j.contains("fit_report")) {
        const auto& r = j.at("fit_report");
        report.max_abs_error = r.at("max_abs_error").get<std::vector<double>>();
        report.target_eps = r.value("target_eps", 0.0);
        report.iterations = r.value("iterations", 0);
        report.met_target = r.value("met_target", true);
    }
    return {poly, report};
}

}  // namespace qaa
