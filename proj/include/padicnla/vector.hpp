#pragma once

#include <functional>
#include <initializer_list>
#include <vector>

#include "padicnla/scalar.hpp"

namespace padic {

/// A tuple of scalars over one prime, carrying the max-norm
/// ||x|| = max_i |x_i| (which satisfies the ultrametric inequality exactly).
class PadicVector {
public:
    PadicVector() = default;
    explicit PadicVector(std::vector<PadicScalar> entries);
    PadicVector(std::initializer_list<PadicScalar> entries);
    static PadicVector zero(std::uint32_t p, std::size_t dim);

    std::size_t dim() const { return entries_.size(); }
    std::uint32_t prime() const;
    const PadicScalar& operator[](std::size_t i) const { return entries_[i]; }
    PadicScalar& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<PadicScalar>& entries() const { return entries_; }

    /// max_i |x_i|; for coordinates that are apparent zeros this uses their
    /// certified bound, so the result is always a sound upper bound.
    Rational norm() const;
    /// min over coordinates of the valuation lower bound.
    std::int64_t valuation_lower_bound() const;
    /// min over coordinates of the absolute precision.
    std::int64_t abs_precision() const;
    bool is_zero_at_precision() const;

    PadicVector operator+(const PadicVector& o) const;
    PadicVector operator-(const PadicVector& o) const;
    PadicVector operator-() const;
    PadicVector scale(const PadicScalar& c) const;
    PadicVector with_abs_precision(std::int64_t n) const;

    bool agrees(const PadicVector& o) const;
    bool agrees_mod(const PadicVector& o, std::int64_t n) const;

    /// Canonical key of the residue class mod p^n (for exact set comparisons).
    std::string residue_key(std::int64_t n) const;

    std::string to_string() const;

private:
    std::vector<PadicScalar> entries_;
};

/// An ultrametric ball B_{p^m}(c) = { y : ||y - c|| < p^m }. Membership is
/// equivalent to v(y_i - c_i) >= 1 - m in every coordinate; radii outside p^Z
/// lose no generality because the norm's value set is p^Z.
struct Ball {
    PadicVector center;
    std::int64_t radius_exp = 0; // radius p^radius_exp

    std::size_t dim() const { return center.dim(); }
    std::uint32_t prime() const { return center.prime(); }
    Rational radius(std::uint32_t p) const { return qp::pow_p(p, radius_exp); }
    /// v(y_i - c_i) must be >= this for membership.
    std::int64_t member_val_threshold() const { return 1 - radius_exp; }

    /// Provable membership at the available precision; throws PrecisionError
    /// if the precision cannot decide it.
    bool contains(const PadicVector& y) const;
};

/// Exactly one representative per residue class of B modulo p^n, embedded at
/// absolute precision n, in lexicographic digit order (first coordinate
/// slowest). Throws CapExceeded if the class count exceeds cap.
std::vector<PadicVector> enumerate_ball_residues(const Ball& b, std::int64_t n,
                                                 std::uint64_t cap = 1000000);

/// Streaming form of the enumeration (same order, same cap).
void for_each_ball_residue(const Ball& b, std::int64_t n,
                           const std::function<void(const PadicVector&)>& fn,
                           std::uint64_t cap = 1000000);

/// Number of residue classes of B mod p^n.
Integer count_ball_residues(const Ball& b, std::int64_t n);

/// The index-th representative in the enumeration order (random access form
/// of the stream, for partitioning across workers).
PadicVector ball_residue_by_index(const Ball& b, std::int64_t n, const Integer& index);

} // namespace padic
