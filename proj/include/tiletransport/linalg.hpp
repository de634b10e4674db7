#pragma once

#include <vector>

#include "tiletransport/scalar.hpp"

namespace tiletransport {

/// Dense exact rational matrix, row major.
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Solve the (possibly singular, consistent) system M x = rhs for several
/// right-hand sides at once by fraction-free-ish Gauss-Jordan with
/// partial pivoting. Free variables are set to zero. Throws if the
/// system is inconsistent.
inline std::vector<std::vector<Rational>> solve_consistent(
    RationalMatrix m, std::vector<std::vector<Rational>> rhs) {
    const size_t rows = m.size();
    const size_t cols = rows == 0 ? 0 : m[0].size();
    const size_t nrhs = rhs.size();
    std::vector<int> pivot_col_of_row;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        // pivot: largest absolute value keeps intermediate entries tame
        size_t best = row;
        Rational best_abs(0);
        for (size_t r = row; r < rows; ++r) {
            Rational a = m[r][col] < 0 ? Rational(-m[r][col]) : m[r][col];
            if (a > best_abs) { best_abs = a; best = r; }
        }
        if (best_abs == 0) continue;
        std::swap(m[row], m[best]);
        for (size_t k = 0; k < nrhs; ++k) std::swap(rhs[k][row], rhs[k][best]);
        Rational inv = Rational(1) / m[row][col];
        for (size_t c = col; c < cols; ++c) m[row][c] *= inv;
        for (size_t k = 0; k < nrhs; ++k) rhs[k][row] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == row || m[r][col] == 0) continue;
            Rational factor = m[r][col];
            for (size_t c = col; c < cols; ++c) m[r][c] -= factor * m[row][c];
            for (size_t k = 0; k < nrhs; ++k) rhs[k][r] -= factor * rhs[k][row];
        }
        pivot_col_of_row.push_back(static_cast<int>(col));
        ++row;
    }
    // rows below the rank must have zero rhs
    for (size_t r = row; r < rows; ++r)
        for (size_t k = 0; k < nrhs; ++k)
            if (rhs[k][r] != 0)
                fail(ErrorCode::BadArgument, "inconsistent linear system");
    std::vector<std::vector<Rational>> solution(nrhs,
                                                std::vector<Rational>(cols, Rational(0)));
    for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
        for (size_t k = 0; k < nrhs; ++k)
            solution[k][pivot_col_of_row[r]] = rhs[k][r];
    return solution;
}

struct LeastSquaresResult {
    std::vector<Scalar> solution;   // one value per column
    std::vector<Scalar> residual;   // A x - b, one per row
    Scalar residual_max_abs;
};

/// Exact least squares for an integer matrix A and golden-field b: the
/// normal equations split componentwise into two rational systems
/// because A is rational.
inline LeastSquaresResult least_squares(const std::vector<std::vector<long long>>& a,
                                        const std::vector<Scalar>& b) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    RationalMatrix normal(cols, std::vector<Rational>(cols, Rational(0)));
    std::vector<std::vector<Rational>> rhs(2, std::vector<Rational>(cols, Rational(0)));
    for (size_t r = 0; r < rows; ++r) {
        for (size_t i = 0; i < cols; ++i) {
            if (a[r][i] == 0) continue;
            BigInt ai(a[r][i]);
            for (size_t j = i; j < cols; ++j)
                if (a[r][j] != 0) normal[i][j] += Rational(ai * BigInt(a[r][j]));
            rhs[0][i] += Rational(ai) * b[r].rational_part();
            rhs[1][i] += Rational(ai) * b[r].phi_part();
        }
    }
    for (size_t i = 0; i < cols; ++i)
        for (size_t j = 0; j < i; ++j) normal[i][j] = normal[j][i];

    auto parts = solve_consistent(std::move(normal), std::move(rhs));
    LeastSquaresResult out;
    out.solution.reserve(cols);
    for (size_t i = 0; i < cols; ++i)
        out.solution.emplace_back(parts[0][i], parts[1][i]);
    out.residual_max_abs = Scalar(0);
    out.residual.reserve(rows);
    for (size_t r = 0; r < rows; ++r) {
        Scalar acc(0);
        for (size_t i = 0; i < cols; ++i)
            if (a[r][i] != 0)
                acc += Scalar(Rational(BigInt(a[r][i]))) * out.solution[i];
        acc -= b[r];
        out.residual_max_abs = max(out.residual_max_abs, acc.abs());
        out.residual.push_back(std::move(acc));
    }
    return out;
}

} // namespace tiletransport
