#pragma once

#include <optional>
#include <vector>

#include "padicnla/vector.hpp"

namespace padic {

/// A matrix over Q_p, modelling a continuous linear map between max-normed
/// spaces; the operator norm is exactly the maximal entry absolute value.
class PadicMatrix {
public:
    PadicMatrix() = default;
    PadicMatrix(std::size_t rows, std::size_t cols, std::uint32_t p);
    explicit PadicMatrix(std::vector<std::vector<PadicScalar>> rows);
    static PadicMatrix identity(std::size_t n, std::uint32_t p, std::int64_t abs_prec);
    /// Companion matrix of a monic polynomial (rows [0 1 0..], last row -c_i).
    static PadicMatrix companion(const std::vector<PadicScalar>& monic_coeffs);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint32_t prime() const;
    const PadicScalar& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    PadicScalar& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }

    PadicMatrix operator+(const PadicMatrix& o) const;
    PadicMatrix operator-(const PadicMatrix& o) const;
    PadicMatrix operator*(const PadicMatrix& o) const;
    PadicVector operator*(const PadicVector& x) const;
    PadicMatrix scale(const PadicScalar& c) const;
    PadicMatrix pow(std::uint64_t k, std::int64_t abs_prec_for_identity) const;
    PadicMatrix transpose() const;
    PadicMatrix with_abs_precision(std::int64_t n) const;

    /// max_{i,j} |a_ij|; the exact operator norm for max-norms.
    Rational operator_norm() const;
    std::int64_t min_abs_precision() const;
    bool agrees(const PadicMatrix& o) const;

    PadicVector row(std::size_t i) const;
    PadicVector col(std::size_t j) const;
    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<PadicScalar> e_;
};

struct InvertResult {
    PadicMatrix inverse;
    PadicScalar det;
    /// Minimal absolute precision across the inverse's entries: the precision
    /// loss is governed by the pivot valuations (2 v(det)-style).
    std::int64_t result_precision;
};

/// Gauss-Jordan inverse with max-|pivot| pivoting. Throws PrecisionError when
/// the matrix is singular at the working precision.
InvertResult invert_matrix(const PadicMatrix& a);

/// Determinant by elimination (product of pivots).
PadicScalar determinant(const PadicMatrix& a);

/// Nullspace basis at working precision. Each basis vector is scaled to norm 1
/// (coordinates in Z_p with a unit coordinate at its free index).
std::vector<PadicVector> kernel_basis(const PadicMatrix& a);

/// Solve a x = b (a square, invertible at precision).
PadicVector solve(const PadicMatrix& a, const PadicVector& b);

/// Characteristic polynomial det(X I - A), monic, coefficients c_0..c_n
/// (ascending). Division-free (Berkowitz), so no precision is lost beyond
/// ordinary products and sums.
std::vector<PadicScalar> charpoly(const PadicMatrix& a);

} // namespace padic
