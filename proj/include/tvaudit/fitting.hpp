#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tvaudit/errors.hpp"

namespace tvaudit {

/// One observation for the size/DTV fits: a histogram size N and a value
/// (a DTV or an outlier score) measured at that size.
struct FitPoint {
    std::int64_t n = 0;
    double value = 0.0;
};

/// Coefficients of the expected-DTV curve m(N) = a*N + b*sqrt(N), fitted by
/// ordinary least squares over a histogram set.
struct ExpectedDtvFit {
    double a = 0.0;
    double b = 0.0;
    int point_count = 0;
    double residual_sum_squares = 0.0;
};

/// Regression basis terms evaluated at a histogram size N.
enum class BasisTerm { N, SqrtN, One };

std::string_view basis_term_name(BasisTerm term);
double basis_term_value(BasisTerm term, std::int64_t n);

/// Least-squares fit over an ordered subset of the {N, sqrt(N), 1} basis.
/// coefficients[i] multiplies basis[i].
struct BasisFit {
    std::vector<BasisTerm> basis;
    std::vector<double> coefficients;
    int point_count = 0;
    double residual_sum_squares = 0.0;
};

inline constexpr BasisTerm kAffineBasis[] = {BasisTerm::N, BasisTerm::One};
inline constexpr BasisTerm kFullBasis[] = {BasisTerm::N, BasisTerm::SqrtN, BasisTerm::One};

/// Fits m(N) = a*N + b*sqrt(N) to (N, dtv) points by the 2x2 normal
/// equations. Requires >= 2 points with N >= 1 and at least two distinct N.
ExpectedDtvFit fit_expected_dtv(std::span<const FitPoint> points);

/// a*N + b*sqrt(N) at size N (N >= 1).
double eval_expected_dtv(const ExpectedDtvFit& fit, std::int64_t n);

/// General least-squares fit of (N, y) points against a basis subset.
/// Requires points >= basis size and a full-rank design matrix.
BasisFit fit_basis(std::span<const FitPoint> points, std::span<const BasisTerm> basis);

/// Dot product of the fit coefficients with the basis values at N (N >= 1).
double eval_basis(const BasisFit& fit, std::int64_t n);

} // namespace tvaudit
