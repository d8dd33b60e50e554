#pragma once

#include <map>
#include <vector>

#include "padicnla/matrix.hpp"

namespace padic {

/// Multivariate polynomial over Q_p. Terms are kept in a canonical exponent
/// order; exactly-zero coefficients are pruned, apparently-zero ones are kept
/// (they still carry congruence information).
class Poly {
public:
    using Exps = std::vector<std::uint32_t>;

    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}
    static Poly constant(std::size_t nvars, const PadicScalar& c);
    static Poly variable(std::size_t nvars, std::size_t i, std::uint32_t p,
                         std::int64_t abs_prec);

    std::size_t nvars() const { return nvars_; }
    const std::map<Exps, PadicScalar>& terms() const { return terms_; }
    bool is_zero_at_precision() const;
    std::int64_t total_degree() const; // -1 when no terms
    /// Total degree counting only the variables in [first, first+count).
    std::int64_t degree_in_block(std::size_t first, std::size_t count) const;
    std::uint32_t prime() const;

    void add_term(const Exps& e, const PadicScalar& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly scale(const PadicScalar& c) const;
    Poly mul_exact(const Integer& n) const;

    PadicScalar eval(const std::vector<PadicScalar>& x) const;
    /// Substitutes polynomials (over a common variable set) for the variables.
    Poly substitute(const std::vector<Poly>& subs) const;
    Poly partial(std::size_t i) const;
    /// Renumbers into a wider variable space: variable i -> variable map[i].
    Poly embed(std::size_t new_nvars, const std::vector<std::size_t>& map) const;

    bool agrees(const Poly& o) const;
    std::string to_string() const;

private:
    std::size_t nvars_ = 0;
    std::map<Exps, PadicScalar> terms_;
};

/// A polynomial mapping Q_p^n -> Q_p^m: the concrete function class for all
/// calculus and solver work (the only class where the extended difference
/// quotient is computable exactly and the smoothness recursion closes).
class PolyMap {
public:
    PolyMap() = default;
    PolyMap(std::size_t dim_in, std::size_t dim_out);
    explicit PolyMap(std::vector<Poly> coords);
    static PolyMap identity(std::size_t n, std::uint32_t p, std::int64_t abs_prec);
    /// The affine map x -> m x (+ shift).
    static PolyMap linear(const PadicMatrix& m, std::int64_t abs_prec);

    std::size_t dim_in() const { return dim_in_; }
    std::size_t dim_out() const { return coords_.size(); }
    const Poly& coord(std::size_t i) const { return coords_[i]; }
    Poly& coord(std::size_t i) { return coords_[i]; }
    std::uint32_t prime() const;
    std::int64_t total_degree() const;
    std::int64_t degree_in_block(std::size_t first, std::size_t count) const;

    PadicVector eval(const PadicVector& x) const;
    PolyMap operator+(const PolyMap& o) const;
    PolyMap operator-(const PolyMap& o) const;

    /// f(x) with x_i replaced by x_i + c_i (exact recentering).
    PolyMap translate(const PadicVector& c) const;
    /// Constant coordinates f(0).
    PadicVector constant_part() const;
    /// Coefficient matrix of the degree-1 terms: f'(0).
    PadicMatrix linear_part(std::int64_t abs_prec) const;
    /// f minus its linear part a (as a map; constant part untouched).
    PolyMap subtract_linear(const PadicMatrix& a, std::int64_t abs_prec) const;
    /// Jacobian block d f / d x_[first..first+count) evaluated at a point.
    PadicMatrix jacobian_block_at(const PadicVector& at, std::size_t first,
                                  std::size_t count) const;

    /// Composition f(g(.)).
    PolyMap compose(const PolyMap& g) const;
    /// Left-composition with a linear map and conjugation m^{-1} f (m x).
    PolyMap conjugate(const PadicMatrix& m, const PadicMatrix& m_inv,
                      std::int64_t abs_prec) const;

    bool agrees(const PolyMap& o) const;
    std::string to_string() const;

private:
    std::size_t dim_in_ = 0;
    std::vector<Poly> coords_;
};

} // namespace padic
