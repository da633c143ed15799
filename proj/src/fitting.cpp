#include "tvaudit/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace tvaudit {

namespace {

constexpr double kSingularityTolerance = 1e-12;

double det2(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

double det3(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double determinant(const std::array<std::array<double, 3>, 3>& m, std::size_t k) {
    switch (k) {
    case 1: return m[0][0];
    case 2: return det2(m);
    default: return det3(m);
    }
}

// Ordinary least squares against up to three basis columns, solved by the
// normal equations and Cramer's rule. Columns are scaled to unit maximum
// before forming the Gram matrix: the raw columns N, sqrt(N), 1 differ by
// orders of magnitude for large N and would dominate the determinant test.
std::vector<double> solve_least_squares(std::span<const FitPoint> points,
                                        std::span<const BasisTerm> basis,
                                        double& residual_sum_squares) {
    const std::size_t k = basis.size();
    const std::size_t m = points.size();

    std::vector<std::vector<double>> columns(k, std::vector<double>(m));
    std::array<double, 3> scale{1.0, 1.0, 1.0};
    for (std::size_t j = 0; j < k; ++j) {
        double max_abs = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            columns[j][i] = basis_term_value(basis[j], points[i].n);
            max_abs = std::max(max_abs, std::abs(columns[j][i]));
        }
        if (max_abs == 0.0) {
            throw SingularSystem("design column '" + std::string(basis_term_name(basis[j])) +
                                 "' is identically zero");
        }
        scale[j] = max_abs;
        for (std::size_t i = 0; i < m; ++i) {
            columns[j][i] /= max_abs;
        }
    }

    std::array<std::array<double, 3>, 3> gram{};
    std::array<double, 3> rhs{};
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = j; l < k; ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                s += columns[j][i] * columns[l][i];
            }
            gram[j][l] = s;
            gram[l][j] = s;
        }
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            c += columns[j][i] * points[i].value;
        }
        rhs[j] = c;
    }

    double max_entry = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = 0; l < k; ++l) {
            max_entry = std::max(max_entry, std::abs(gram[j][l]));
        }
    }
    const double det = determinant(gram, k);
    double threshold = kSingularityTolerance;
    for (std::size_t j = 0; j < k; ++j) {
        threshold *= max_entry;
    }
    if (std::abs(det) < threshold) {
        throw SingularSystem("normal matrix is singular within tolerance (determinant " +
                             std::to_string(det) + ")");
    }

    std::vector<double> coefficients(k);
    for (std::size_t j = 0; j < k; ++j) {
        auto numerator = gram;
        for (std::size_t l = 0; l < k; ++l) {
            numerator[l][j] = rhs[l];
        }
        coefficients[j] = determinant(numerator, k) / det / scale[j];
    }

    residual_sum_squares = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double predicted = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            predicted += coefficients[j] * columns[j][i] * scale[j];
        }
        const double r = points[i].value - predicted;
        residual_sum_squares += r * r;
    }
    return coefficients;
}

void check_points(std::span<const FitPoint> points, bool require_nonnegative) {
    for (const FitPoint& p : points) {
        if (p.n < 1) {
            throw InvalidParams("fit point has size N = " + std::to_string(p.n) +
                                "; sizes must be >= 1");
        }
        if (!std::isfinite(p.value)) {
            throw InvalidParams("fit point value is not finite");
        }
        if (require_nonnegative && p.value < 0.0) {
            throw InvalidParams("DTV fit point value is negative");
        }
    }
}

} // namespace

std::string_view basis_term_name(BasisTerm term) {
    switch (term) {
    case BasisTerm::N: return "N";
    case BasisTerm::SqrtN: return "sqrtN";
    case BasisTerm::One: return "1";
    }
    return "?";
}

double basis_term_value(BasisTerm term, std::int64_t n) {
    switch (term) {
    case BasisTerm::N: return static_cast<double>(n);
    case BasisTerm::SqrtN: return std::sqrt(static_cast<double>(n));
    case BasisTerm::One: return 1.0;
    }
    return 0.0;
}

ExpectedDtvFit fit_expected_dtv(std::span<const FitPoint> points) {
    if (points.size() < 2) {
        throw InsufficientPoints("expected-DTV fit needs at least 2 points, got " +
                                 std::to_string(points.size()));
    }
    check_points(points, /*require_nonnegative=*/true);
    const std::int64_t first = points.front().n;
    const bool all_same =
        std::all_of(points.begin(), points.end(), [&](const FitPoint& p) { return p.n == first; });
    if (all_same) {
        throw SingularSystem("expected-DTV fit needs at least two distinct sizes");
    }

    const BasisTerm basis[] = {BasisTerm::N, BasisTerm::SqrtN};
    ExpectedDtvFit fit;
    std::vector<double> coeffs = solve_least_squares(points, basis, fit.residual_sum_squares);
    fit.a = coeffs[0];
    fit.b = coeffs[1];
    fit.point_count = static_cast<int>(points.size());
    return fit;
}

double eval_expected_dtv(const ExpectedDtvFit& fit, std::int64_t n) {
    if (n < 1) {
        throw InvalidParams("expected DTV requested for size N = " + std::to_string(n));
    }
    return fit.a * static_cast<double>(n) + fit.b * std::sqrt(static_cast<double>(n));
}

BasisFit fit_basis(std::span<const FitPoint> points, std::span<const BasisTerm> basis) {
    if (basis.empty() || basis.size() > 3) {
        throw InvalidParams("basis must contain between 1 and 3 terms");
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
        for (std::size_t l = j + 1; l < basis.size(); ++l) {
            if (basis[j] == basis[l]) {
                throw InvalidParams("basis terms must be distinct");
            }
        }
    }
    if (points.size() < basis.size()) {
        throw InsufficientPoints("basis fit needs at least " + std::to_string(basis.size()) +
                                 " points, got " + std::to_string(points.size()));
    }
    check_points(points, /*require_nonnegative=*/false);

    BasisFit fit;
    fit.basis.assign(basis.begin(), basis.end());
    fit.coefficients = solve_least_squares(points, basis, fit.residual_sum_squares);
    fit.point_count = static_cast<int>(points.size());
    return fit;
}

double eval_basis(const BasisFit& fit, std::int64_t n) {
    if (n < 1) {
        throw InvalidParams("basis model requested for size N = " + std::to_string(n));
    }
    if (fit.basis.size() != fit.coefficients.size()) {
        throw InvalidParams("basis fit has mismatched basis/coefficient lengths");
    }
    double value = 0.0;
    for (std::size_t j = 0; j < fit.basis.size(); ++j) {
        value += fit.coefficients[j] * basis_term_value(fit.basis[j], n);
    }
    return value;
}

} // namespace tvaudit
