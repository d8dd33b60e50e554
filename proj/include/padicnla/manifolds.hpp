#pragma once

#include <optional>

#include "padicnla/solvers.hpp"
#include "padicnla/splitting.hpp"

namespace padic {

/// A truncated element of the weighted sequence space: terms z_0..z_{H-1} with
/// norm max_n a^{-n} ||z_n|| for the weight a = p^{-weight_exp}. Orbits of
/// stable points live here.
struct WeightedSeq {
    std::int64_t weight_exp = 0; // a = p^{-weight_exp}, weight_exp >= 0
    std::vector<PadicVector> terms;

    std::size_t horizon() const { return terms.size(); }
    /// max_n a^{-n} ||z_n|| (exact rational; apparent zeros contribute their bound).
    Rational weighted_norm(std::uint32_t p) const;
    /// Weighted valuations v(z_n) - n*weight_exp where exactly known.
    std::vector<std::optional<std::int64_t>> weighted_valuations() const;
    /// True when the weighted valuations are strictly increasing over the
    /// trailing half of the horizon (all exactly known there).
    bool decay_flag() const;
};

/// A hyperbolic fixed-point problem at 0: f(0) = 0, f'(0) = alpha, an
/// a-hyperbolic splitting, the domain U = B_{p^r_exp}(0) in adapted
/// coordinates, and the certified Lipschitz data of the nonlinearity.
struct HyperbolicProblem {
    std::uint32_t p = 0;
    PolyMap f;          // original coordinates
    PadicMatrix alpha;  // = f'(0), verified symbolically
    Rational a;
    std::int64_t weight_exp = 0; // a = p^{-weight_exp}
    std::int64_t r_exp = 0;
    HyperbolicSplitting split;
    PolyMap f_hat;             // adapted coordinates
    PolyMap g_hat;             // f_hat minus its linear part
    PadicMatrix alpha2_inv;    // empty when dim2 == 0
    Rational lip_g;            // Lip(f - alpha) on U, certified
    Rational lp_factor;        // contraction factor of the orbit operator, < 1

    std::size_t dim() const { return f.dim_in(); }
    Ball domain() const;
    /// Split a point into (E1, E2) components (adapted coordinates).
    PadicVector part1(const PadicVector& z) const;
    PadicVector part2(const PadicVector& z) const;
};

/// Validates f(0) = 0 and f'(0) = alpha exactly, computes the splitting,
/// conjugates f into adapted coordinates, and certifies
/// Lip(f - alpha) < min(1, ||alpha2^{-1}||^{-1}) together with the weighted
/// contraction factor of the orbit operator. The radius r_exp (and hence U)
/// is interpreted in the adapted coordinates. a must be a p-power in ]0,1].
HyperbolicProblem make_hyperbolic_problem(PolyMap f, const Rational& a, std::int64_t r_exp,
                                          const std::optional<PadicMatrix>& alpha_given);

struct OrbitResult {
    std::vector<PadicVector> points; // z, f(z), ..., truncated on escape
    std::optional<std::size_t> truncated_at;
};
/// Forward orbit inside a domain ball, truncating (with a flag) on escape.
OrbitResult orbit(const PolyMap& f, const Ball& domain, const PadicVector& z, std::size_t n);

enum class StableVerdict { In, Out, Undecided };
const char* to_string(StableVerdict v);

struct DecayStep {
    std::size_t n = 0;
    std::int64_t weighted_val_lower = 0; // v(f^n z) - n * weight_exp, lower bound
    bool exact = false;
};

struct StableResult {
    StableVerdict verdict = StableVerdict::Undecided;
    std::size_t steps = 0; // orbit steps actually examined
    std::string reason;
    std::vector<DecayStep> trace;
};

/// Finite-precision membership test for the a-stable set. OUT only on a
/// provable violation (the whole residue class escapes, or the weighted norm
/// provably reaches r); IN requires strictly increasing weighted valuations
/// over the trailing half of the horizon; everything else stays UNDECIDED.
/// The input carries its own absolute precision: a residue representative at
/// precision N decides membership at resolution N.
StableResult is_in_stable_set(const HyperbolicProblem& prob, const PadicVector& z,
                              std::size_t horizon);

/// Termwise lift of f to weighted sequences; reports the first escaping index.
WeightedSeq seq_map(const PolyMap& f, const Ball& domain, const WeightedSeq& z);

struct StableGraphResult {
    PadicVector phi;   // E2-component of the orbit start (adapted coordinates)
    WeightedSeq omega; // the decaying orbit through (x, phi(x))
    std::size_t iterations = 0;
    std::int64_t tail_digits = 0; // certified truncation precision of phi
    Rational lp_factor;
};

/// Solves for the decaying orbit through (x, phi(x)) as the fixed point of the
/// variation-of-constants operator on the weighted sequence ball, then reads
/// off phi(x). Every returned term is capped at its certified tail precision.
/// Throws CertificateError when the horizon cannot reach target_prec digits.
StableGraphResult stable_graph(const HyperbolicProblem& prob, const PadicVector& x,
                               std::size_t horizon, std::int64_t target_prec);

struct TangencyEntry {
    PadicVector x;
    std::int64_t val_x = 0;
    std::int64_t val_phi = 0; // kInfValuation when phi(x) vanishes at precision
};
struct TangencyReport {
    std::vector<TangencyEntry> entries;
    /// reported constant with v(phi(x)) >= 2 v(x) - c across the probes
    std::int64_t c = 0;
    bool quadratic = false; // c <= 0
};
/// Quadratic-tangency witness phi(0) = 0, phi'(0) = 0 via valuation growth.
TangencyReport verify_tangency(const HyperbolicProblem& prob,
                               const std::vector<PadicVector>& probes, std::size_t horizon,
                               std::int64_t target_prec);

struct ClassifyRow {
    std::string x_key;
    std::vector<std::string> surviving_y; // not-OUT classes
    std::size_t in_count = 0, out_count = 0, undecided_count = 0;
};
struct ClassifyResult {
    std::vector<ClassifyRow> rows;
    bool graph_property = false; // exactly one surviving y-class per x-class
    std::size_t total = 0;
    std::size_t in_count = 0, out_count = 0, undecided_count = 0;
};

/// Labels every residue class of U mod p^n by is_in_stable_set on its
/// representative (at absolute precision n) and aggregates survivors per
/// x-class. Pure per-residue work, partitioned across threads.
ClassifyResult classify_residues(const HyperbolicProblem& prob, std::int64_t n_mod,
                                 std::size_t horizon, std::uint64_t cap = 1000000,
                                 unsigned threads = 1);

/// Aligned text rendering of a classification table.
std::string classify_table_text(const ClassifyResult& r);

} // namespace padic
