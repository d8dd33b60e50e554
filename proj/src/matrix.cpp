#include "padicnla/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace padic {

PadicMatrix::PadicMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
    : rows_(rows), cols_(cols), e_(rows * cols, PadicScalar::zero(p)) {}

PadicMatrix::PadicMatrix(std::vector<std::vector<PadicScalar>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows[0].size() : 0;
    e_.reserve(rows_ * cols_);
    for (auto& r : rows) {
        if (r.size() != cols_) throw InputError("ragged matrix rows");
        for (auto& x : r) e_.push_back(std::move(x));
    }
    prime();
}

PadicMatrix PadicMatrix::identity(std::size_t n, std::uint32_t p, std::int64_t abs_prec) {
    PadicMatrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = PadicScalar::from_integer(p, 1, abs_prec);
    return m;
}

PadicMatrix PadicMatrix::companion(const std::vector<PadicScalar>& c) {
    if (c.size() < 2) throw InputError("companion matrix needs degree >= 1");
    const std::size_t n = c.size() - 1;
    const PadicScalar& lead = c.back();
    if (!lead.is_invertible_at_precision())
        throw InputError("companion matrix requires an invertible leading coefficient");
    const std::uint32_t p = lead.prime();
    PadicMatrix m(n, n, p);
    const std::int64_t prec = lead.abs_precision();
    for (std::size_t i = 0; i + 1 < n; ++i)
        m.at(i, i + 1) = PadicScalar::from_integer(p, 1, prec == kInfValuation ? 64 : prec);
    const PadicScalar inv_lead = lead.invert();
    for (std::size_t j = 0; j < n; ++j) m.at(n - 1, j) = -(c[j] * inv_lead);
    return m;
}

std::uint32_t PadicMatrix::prime() const {
    std::uint32_t p = 0;
    for (const auto& x : e_) {
        if (x.prime() == 0) continue;
        if (p == 0) p = x.prime();
        else if (p != x.prime())
            throw PrimeMismatch("matrix mixes primes");
    }
    return p;
}

PadicMatrix PadicMatrix::operator+(const PadicMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix shape mismatch");
    PadicMatrix r(rows_, cols_, 0);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

PadicMatrix PadicMatrix::operator-(const PadicMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix shape mismatch");
    PadicMatrix r(rows_, cols_, 0);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
    if (cols_ != o.rows_) throw InputError("matrix product shape mismatch");
    PadicMatrix r(rows_, o.cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < o.cols_; ++j) {
            PadicScalar s = PadicScalar::zero();
            for (std::size_t k = 0; k < cols_; ++k) s = s + at(i, k) * o.at(k, j);
            r.at(i, j) = std::move(s);
        }
    return r;
}

PadicVector PadicMatrix::operator*(const PadicVector& x) const {
    if (cols_ != x.dim()) throw InputError("matrix/vector dimension mismatch");
    std::vector<PadicScalar> r;
    r.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        PadicScalar s = PadicScalar::zero();
        for (std::size_t k = 0; k < cols_; ++k) s = s + at(i, k) * x[k];
        r.push_back(std::move(s));
    }
    return PadicVector(std::move(r));
}

PadicMatrix PadicMatrix::scale(const PadicScalar& c) const {
    PadicMatrix r(rows_, cols_, 0);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * c;
    return r;
}

PadicMatrix PadicMatrix::pow(std::uint64_t k, std::int64_t abs_prec_for_identity) const {
    if (rows_ != cols_) throw InputError("matrix power requires a square matrix");
    PadicMatrix result = identity(rows_, prime(), abs_prec_for_identity);
    PadicMatrix base = *this;
    while (k) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

PadicMatrix PadicMatrix::transpose() const {
    PadicMatrix r(cols_, rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

PadicMatrix PadicMatrix::with_abs_precision(std::int64_t n) const {
    PadicMatrix r(rows_, cols_, 0);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].with_abs_precision(n);
    return r;
}

Rational PadicMatrix::operator_norm() const {
    Rational m(0);
    for (const auto& x : e_) m = std::max(m, x.abs_value());
    return m;
}

std::int64_t PadicMatrix::min_abs_precision() const {
    std::int64_t n = kInfValuation;
    for (const auto& x : e_) n = std::min(n, x.abs_precision());
    return n;
}

bool PadicMatrix::agrees(const PadicMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (!e_[i].agrees(o.e_[i])) return false;
    return true;
}

PadicVector PadicMatrix::row(std::size_t i) const {
    std::vector<PadicScalar> r(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_);
    return PadicVector(std::move(r));
}

PadicVector PadicMatrix::col(std::size_t j) const {
    std::vector<PadicScalar> r;
    r.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) r.push_back(at(i, j));
    return PadicVector(std::move(r));
}

std::string PadicMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << "[ ";
        for (std::size_t j = 0; j < cols_; ++j) os << at(i, j).to_string() << "  ";
        os << "]\n";
    }
    return os.str();
}

namespace {

// Largest |entry| among rows >= r0 in column j; returns row index or nullopt
// if no entry there is invertible at precision.
std::optional<std::size_t> pick_pivot(const PadicMatrix& m, std::size_t r0, std::size_t j) {
    std::optional<std::size_t> best;
    std::int64_t best_v = 0;
    for (std::size_t i = r0; i < m.rows(); ++i) {
        const auto& x = m.at(i, j);
        if (!x.is_invertible_at_precision()) continue;
        if (!best || x.valuation() < best_v) {
            best = i;
            best_v = x.valuation();
        }
    }
    return best;
}

void swap_rows(PadicMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

} // namespace

InvertResult invert_matrix(const PadicMatrix& a) {
    if (a.rows() != a.cols()) throw InputError("inverting a non-square matrix");
    const std::size_t n = a.rows();
    const std::uint32_t p = a.prime();
    PadicMatrix m = a;
    PadicMatrix inv = PadicMatrix::identity(n, p, a.min_abs_precision());
    PadicScalar det = PadicScalar::from_integer(p, 1, a.min_abs_precision());
    int sign = 1;
    for (std::size_t j = 0; j < n; ++j) {
        auto pr = pick_pivot(m, j, j);
        if (!pr)
            throw PrecisionError("matrix is singular at the working precision (column " +
                                 std::to_string(j) + ")");
        if (*pr != j) {
            swap_rows(m, *pr, j);
            swap_rows(inv, *pr, j);
            sign = -sign;
        }
        const PadicScalar piv = m.at(j, j);
        det = det * piv;
        const PadicScalar piv_inv = piv.invert();
        for (std::size_t k = 0; k < n; ++k) {
            m.at(j, k) = m.at(j, k) * piv_inv;
            inv.at(j, k) = inv.at(j, k) * piv_inv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            const PadicScalar f = m.at(i, j);
            if (f.is_zero_at_precision()) continue;
            for (std::size_t k = 0; k < n; ++k) {
                m.at(i, k) = m.at(i, k) - f * m.at(j, k);
                inv.at(i, k) = inv.at(i, k) - f * inv.at(j, k);
            }
        }
    }
    if (sign < 0) det = -det;
    return InvertResult{inv, det, inv.min_abs_precision()};
}

PadicScalar determinant(const PadicMatrix& a) {
    if (a.rows() != a.cols()) throw InputError("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    PadicMatrix m = a;
    PadicScalar det = PadicScalar::from_integer(a.prime(), 1, a.min_abs_precision());
    int sign = 1;
    for (std::size_t j = 0; j < n; ++j) {
        auto pr = pick_pivot(m, j, j);
        if (!pr) {
            // Pivot column is zero at precision: the determinant is only known
            // to be small. Bound it by the pivot product times columnwise max
            // absolute values of the remaining minor (ultrametric expansion).
            bool col_exact = true;
            for (std::size_t i = j; i < n; ++i)
                col_exact = col_exact && m.at(i, j).is_exact_zero();
            if (col_exact) return PadicScalar::zero(a.prime());
            std::int64_t bound = det.is_zero_at_precision() ? 0 : det.valuation();
            for (std::size_t k = j; k < n; ++k) {
                std::int64_t colv = kInfValuation;
                for (std::size_t i = j; i < n; ++i)
                    colv = std::min(colv, m.at(i, k).valuation_lower_bound());
                if (colv == kInfValuation) return PadicScalar::zero(a.prime());
                bound += colv;
            }
            return PadicScalar::apparent_zero(a.prime(), bound);
        }
        if (*pr != j) {
            swap_rows(m, *pr, j);
            sign = -sign;
        }
        const PadicScalar piv = m.at(j, j);
        det = det * piv;
        const PadicScalar piv_inv = piv.invert();
        for (std::size_t i = j + 1; i < n; ++i) {
            const PadicScalar f = m.at(i, j) * piv_inv;
            if (f.is_zero_at_precision()) continue;
            for (std::size_t k = j; k < n; ++k) m.at(i, k) = m.at(i, k) - f * m.at(j, k);
        }
    }
    return sign < 0 ? -det : det;
}

std::vector<PadicVector> kernel_basis(const PadicMatrix& a) {
    const std::size_t nr = a.rows(), nc = a.cols();
    const std::uint32_t p = a.prime();
    PadicMatrix m = a;
    std::vector<std::optional<std::size_t>> pivot_row_of_col(nc);
    std::size_t r = 0;
    for (std::size_t j = 0; j < nc && r < nr; ++j) {
        auto pr = pick_pivot(m, r, j);
        if (!pr) continue;
        swap_rows(m, *pr, r);
        const PadicScalar piv_inv = m.at(r, j).invert();
        for (std::size_t k = 0; k < nc; ++k) m.at(r, k) = m.at(r, k) * piv_inv;
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == r) continue;
            const PadicScalar f = m.at(i, j);
            if (f.is_zero_at_precision()) continue;
            for (std::size_t k = 0; k < nc; ++k) m.at(i, k) = m.at(i, k) - f * m.at(r, k);
        }
        pivot_row_of_col[j] = r;
        ++r;
    }
    std::vector<PadicVector> basis;
    const std::int64_t prec = a.min_abs_precision();
    for (std::size_t j = 0; j < nc; ++j) {
        if (pivot_row_of_col[j]) continue;
        std::vector<PadicScalar> v(nc, PadicScalar::zero(p));
        v[j] = PadicScalar::from_integer(p, 1, prec == kInfValuation ? 64 : prec);
        for (std::size_t k = 0; k < nc; ++k) {
            if (!pivot_row_of_col[k]) continue;
            v[k] = -m.at(*pivot_row_of_col[k], j);
        }
        PadicVector vec(std::move(v));
        // normalize to norm 1: coordinates in Z_p with a unit coordinate
        std::int64_t minval = kInfValuation;
        for (std::size_t k = 0; k < nc; ++k)
            if (vec[k].is_invertible_at_precision()) minval = std::min(minval, vec[k].valuation());
        if (minval != kInfValuation && minval != 0) {
            for (std::size_t k = 0; k < nc; ++k) vec[k] = vec[k].mul_pow_p(-minval);
        }
        basis.push_back(std::move(vec));
    }
    return basis;
}

PadicVector solve(const PadicMatrix& a, const PadicVector& b) {
    const InvertResult inv = invert_matrix(a);
    return inv.inverse * b;
}

std::vector<PadicScalar> charpoly(const PadicMatrix& a) {
    if (a.rows() != a.cols()) throw InputError("charpoly of a non-square matrix");
    const std::size_t n = a.rows();
    const std::uint32_t p = a.prime();
    const std::int64_t prec = a.min_abs_precision();
    const std::int64_t one_prec = prec == kInfValuation ? 64 : prec;
    const PadicScalar one = PadicScalar::from_integer(p, 1, one_prec);

    // Berkowitz: c holds charpoly coefficients of the leading r x r principal
    // block, leading coefficient first.
    std::vector<PadicScalar> c{one};
    for (std::size_t r = 1; r <= n; ++r) {
        // Toeplitz column s_0..s_r for the r-th stage.
        std::vector<PadicScalar> s;
        s.reserve(r + 1);
        s.push_back(one);
        s.push_back(-a.at(r - 1, r - 1));
        if (r >= 2) {
            const std::size_t m = r - 1;
            std::vector<PadicScalar> w(m); // M^k . C, iteratively
            for (std::size_t i = 0; i < m; ++i) w[i] = a.at(i, r - 1);
            for (std::size_t k = 2; k <= r; ++k) {
                // s_k = -(R . w)
                PadicScalar dot = PadicScalar::zero();
                for (std::size_t i = 0; i < m; ++i) dot = dot + a.at(r - 1, i) * w[i];
                s.push_back(-dot);
                if (k == r) break;
                std::vector<PadicScalar> w2(m);
                for (std::size_t i = 0; i < m; ++i) {
                    PadicScalar acc = PadicScalar::zero();
                    for (std::size_t l = 0; l < m; ++l) acc = acc + a.at(i, l) * w[l];
                    w2[i] = std::move(acc);
                }
                w = std::move(w2);
            }
        }
        // c_new[i] = sum_j s_{i-j} c_old[j], i = 0..r
        std::vector<PadicScalar> c2(r + 1, PadicScalar::zero());
        for (std::size_t i = 0; i <= r; ++i)
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (i < j || i - j >= s.size()) continue;
                c2[i] = c2[i] + s[i - j] * c[j];
            }
        c = std::move(c2);
    }
    // c is leading-first; return ascending c_0..c_n.
    std::reverse(c.begin(), c.end());
    return c;
}

} // namespace padic
