#include "avpode/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace avpode {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double max_norm_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

void require_finite(std::span<const double> v, double x) {
    for (double c : v) {
        if (!std::isfinite(c)) {
            throw NumericOverflowError("rhs produced a non-finite value at x = " + fmt(x));
        }
    }
}

constexpr double kRk4ConvergenceConstant = -2.7853;

// Lipschitz constant of the decrement function chained through an explicit
// tableau: M_1 = L, M_i = L (1 + h sum_j |beta_ij| M_j), result sum |c_i| M_i.
double tableau_phi_lipschitz(const RkTableau& tableau, double h, double L) {
    const int r = tableau.stages();
    std::vector<double> m(static_cast<std::size_t>(r));
    m[0] = L;
    for (int i = 1; i < r; ++i) {
        const auto& beta = tableau.coefficients()[static_cast<std::size_t>(i - 1)];
        double s = 0.0;
        for (int j = 0; j < i; ++j) s += std::abs(beta[static_cast<std::size_t>(j)]) * m[static_cast<std::size_t>(j)];
        m[static_cast<std::size_t>(i)] = L * (1.0 + h * s);
    }
    double total = 0.0;
    for (int i = 0; i < r; ++i) {
        total += std::abs(tableau.weights()[static_cast<std::size_t>(i)]) * m[static_cast<std::size_t>(i)];
    }
    return total;
}

// L (1 + hL/2 + (hL)^2/6 + (hL)^3/24), the classical fourth-order chain.
double rk4_phi_lipschitz(double h, double L) {
    const double z = h * L;
    return L * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
}

double rk4_amplification(double z) {
    return 1.0 - z + z * z / 2.0 - z * z * z / 6.0 + z * z * z * z / 24.0;
}

double tableau_amplification(const RkTableau& tableau, double z) {
    const int r = tableau.stages();
    std::vector<double> k(static_cast<std::size_t>(r));
    k[0] = 1.0;
    for (int i = 1; i < r; ++i) {
        const auto& beta = tableau.coefficients()[static_cast<std::size_t>(i - 1)];
        double s = 0.0;
        for (int j = 0; j < i; ++j) s += beta[static_cast<std::size_t>(j)] * k[static_cast<std::size_t>(j)];
        k[static_cast<std::size_t>(i)] = 1.0 - z * s;
    }
    double phi = 0.0;
    for (int i = 0; i < r; ++i) phi += tableau.weights()[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
    return 1.0 - z * phi;
}

}  // namespace

LipschitzEstimate estimate_lipschitz(const OdeSystem& system, const Interval& x_range,
                                     const std::vector<std::pair<double, double>>& y_box,
                                     int samples_per_axis) {
    const int dim = system.dimension();
    if (samples_per_axis < 2) {
        throw InvalidArgumentError("samples_per_axis must be at least 2");
    }
    if (static_cast<int>(y_box.size()) != dim) {
        throw InvalidArgumentError("y box needs one range per component");
    }
    for (const auto& [lo, hi] : y_box) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
            throw InvalidArgumentError("y box ranges must be finite and nondegenerate");
        }
    }
    if (!system.covers(x_range)) {
        throw InvalidArgumentError("system segments do not cover the x range");
    }

    const auto s = static_cast<std::size_t>(samples_per_axis);
    std::size_t lattice_size = 1;
    for (int c = 0; c < dim; ++c) {
        if (lattice_size > 20000 / s) {
            throw InvalidArgumentError("sampling lattice too large for this dimension");
        }
        lattice_size *= s;
    }

    // Uniform lattice, endpoints included (corners matter for the maximum).
    std::vector<std::vector<double>> lattice(lattice_size, std::vector<double>(static_cast<std::size_t>(dim)));
    for (std::size_t idx = 0; idx < lattice_size; ++idx) {
        std::size_t rem = idx;
        for (int c = 0; c < dim; ++c) {
            const std::size_t k = rem % s;
            rem /= s;
            const auto& [lo, hi] = y_box[static_cast<std::size_t>(c)];
            lattice[idx][static_cast<std::size_t>(c)] =
                lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(s - 1);
        }
    }

    double best = 0.0;
    std::vector<std::vector<double>> fvals(lattice_size, std::vector<double>(static_cast<std::size_t>(dim)));
    std::vector<double> probe(static_cast<std::size_t>(dim));
    std::vector<double> f_plus(static_cast<std::size_t>(dim)), f_minus(static_cast<std::size_t>(dim));
    for (int xi = 0; xi < samples_per_axis; ++xi) {
        const double x = x_range.lo +
                         x_range.length() * static_cast<double>(xi) / static_cast<double>(s - 1);
        for (std::size_t i = 0; i < lattice_size; ++i) {
            system.eval(x, lattice[i], fvals[i]);
            require_finite(fvals[i], x);
        }
        // Pairwise difference quotients in the max norm.
        for (std::size_t i = 0; i < lattice_size; ++i) {
            for (std::size_t j = i + 1; j < lattice_size; ++j) {
                const double den = max_norm_diff(lattice[i], lattice[j]);
                const double num = max_norm_diff(fvals[i], fvals[j]);
                if (den > 0.0) {
                    best = std::max(best, num / den);
                }
            }
        }
        // Central finite-difference probes of the Jacobian infinity norm.
        for (std::size_t i = 0; i < lattice_size; ++i) {
            std::vector<double> row_sum(static_cast<std::size_t>(dim), 0.0);
            for (int c = 0; c < dim; ++c) {
                const double yc = lattice[i][static_cast<std::size_t>(c)];
                const double eps = std::max(1e-6, 1e-6 * std::abs(yc));
                probe = lattice[i];
                probe[static_cast<std::size_t>(c)] = yc + eps;
                system.eval(x, probe, f_plus);
                require_finite(f_plus, x);
                probe[static_cast<std::size_t>(c)] = yc - eps;
                system.eval(x, probe, f_minus);
                require_finite(f_minus, x);
                for (int r = 0; r < dim; ++r) {
                    row_sum[static_cast<std::size_t>(r)] +=
                        std::abs((f_plus[static_cast<std::size_t>(r)] - f_minus[static_cast<std::size_t>(r)]) / (2.0 * eps));
                }
            }
            for (double rs : row_sum) best = std::max(best, rs);
        }
    }

    LipschitzEstimate estimate{best, static_cast<std::int64_t>(lattice_size) * samples_per_axis,
                               x_range, y_box};
    return estimate;
}

AnalysisReport convergence_condition(MethodKind kind, double h, double L,
                                     const std::optional<RkTableau>& tableau) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgumentError("h must be positive and finite");
    }
    if (L < 0.0 || std::isnan(L)) {
        throw InvalidArgumentError("L must be nonnegative");
    }
    switch (kind) {
        case MethodKind::EulerPC:
            return AnalysisReport{h * L < 1.0, h * L, 1.0, "h*L < 1"};
        case MethodKind::TrapezoidPC:
            return AnalysisReport{h * L / 2.0 < 1.0, h * L / 2.0, 1.0, "h*L/2 < 1"};
        case MethodKind::ClassicalRk4:
            // Always holds for h > 0, L >= 0; recorded for transparency.
            return AnalysisReport{h * L > kRk4ConvergenceConstant, h * L, kRk4ConvergenceConstant,
                                  "h*L > -2.7853"};
        case MethodKind::ExplicitEuler:
            return AnalysisReport{std::isfinite(L), L, std::numeric_limits<double>::infinity(),
                                  "L_tilde < inf (decrement function Lipschitz)"};
        case MethodKind::GeneralRk: {
            const double lt = tableau ? tableau_phi_lipschitz(*tableau, h, L)
                                      : rk4_phi_lipschitz(h, L);
            return AnalysisReport{std::isfinite(lt), lt, std::numeric_limits<double>::infinity(),
                                  "L_tilde < inf (decrement function Lipschitz)"};
        }
    }
    throw InvalidArgumentError("unknown method kind");
}

AnalysisReport stability_condition(MethodKind kind, double h, double lambda,
                                   const std::optional<RkTableau>& tableau) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgumentError("h must be positive and finite");
    }
    if (!(lambda > 0.0)) {
        throw InvalidArgumentError("the backward test model y' = lambda*y requires lambda > 0");
    }
    const double z = h * lambda;
    switch (kind) {
        case MethodKind::ExplicitEuler:
        case MethodKind::EulerPC:
            return AnalysisReport{std::abs(1.0 - z) < 1.0, std::abs(1.0 - z), 1.0,
                                  "|1 - h*lambda| < 1"};
        case MethodKind::TrapezoidPC: {
            const double ratio = std::abs((1.0 - z / 2.0) / (1.0 + z / 2.0));
            return AnalysisReport{ratio < 1.0, ratio, 1.0,
                                  "|(1 - h*lambda/2)/(1 + h*lambda/2)| < 1"};
        }
        case MethodKind::ClassicalRk4: {
            const double mag = std::abs(rk4_amplification(z));
            return AnalysisReport{mag < 1.0, mag, 1.0,
                                  "|1 - z + z^2/2 - z^3/6 + z^4/24| < 1, z = h*lambda"};
        }
        case MethodKind::GeneralRk: {
            if (!tableau) {
                throw InvalidArgumentError("general-rk stability needs the tableau");
            }
            const double mag = std::abs(tableau_amplification(*tableau, z));
            return AnalysisReport{mag < 1.0, mag, 1.0, "|R(h*lambda)| < 1 (tableau amplification)"};
        }
    }
    throw InvalidArgumentError("unknown method kind");
}

double linear_amplification(MethodKind kind, double z, const std::optional<RkTableau>& tableau) {
    switch (kind) {
        case MethodKind::ExplicitEuler:
            return 1.0 - z;
        case MethodKind::EulerPC:
            // Fixed point of the corrector: the implicit Euler target formula.
            return 1.0 / (1.0 + z);
        case MethodKind::TrapezoidPC:
            return (1.0 - z / 2.0) / (1.0 + z / 2.0);
        case MethodKind::ClassicalRk4:
            return rk4_amplification(z);
        case MethodKind::GeneralRk:
            if (!tableau) {
                throw InvalidArgumentError("general-rk amplification needs the tableau");
            }
            return tableau_amplification(*tableau, z);
    }
    throw InvalidArgumentError("unknown method kind");
}

double global_error_bound(double e0, double L, double C, double h, int p, double T) {
    if (e0 < 0.0 || std::isnan(e0)) {
        throw InvalidArgumentError("e0 must be nonnegative");
    }
    if (!(L > 0.0) || !(C > 0.0) || !(h > 0.0) || !(T > 0.0) || p < 1) {
        throw InvalidArgumentError("L, C, h, T must be positive and p >= 1");
    }
    const double growth = std::exp(T * L);
    return e0 * growth + (C * std::pow(h, p) / L) * (growth - 1.0);
}

double observed_order(const OdeSystem& system, const ExactSolutionFn& exact, double from_x,
                      std::span<const double> from_y, double to_x, const MethodSpec& method,
                      double h) {
    if (!exact) {
        throw InvalidArgumentError("exact solution must be callable");
    }
    const Interval span(std::min(from_x, to_x), std::max(from_x, to_x));
    const UniformGrid grid = make_uniform_grid(span, h);

    const Trajectory coarse = integrate_leg(system, from_x, from_y, to_x, method, grid.h);
    const Trajectory fine = integrate_leg(system, from_x, from_y, to_x, method, grid.h / 2.0);

    // The halved step divides exactly, so coarse sample i sits at fine sample 2i.
    double err_coarse = 0.0;
    double err_fine = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const auto ex = exact(coarse.x(i));
        if (static_cast<int>(ex.size()) != system.dimension()) {
            throw InvalidArgumentError("exact solution dimension mismatch");
        }
        err_coarse = std::max(err_coarse, max_norm_diff(coarse.y(i), ex));
        err_fine = std::max(err_fine, max_norm_diff(fine.y(2 * i), ex));
    }
    if (err_coarse == 0.0 || err_fine == 0.0) {
        throw DegenerateOrderError("both refinements reproduce the exact solution; "
                                   "no order is measurable");
    }
    return std::log2(err_coarse / err_fine);
}

}  // namespace avpode
