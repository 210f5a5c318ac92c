#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpe/point.hpp"

namespace lpe {

/// Nonnegative rational p/q in lowest terms, q > 0.
struct Rational {
    std::int64_t p = 0;
    std::int64_t q = 1;

    static Rational make(std::int64_t p, std::int64_t q);
    /// Parses "p/q" or a bare integer "p".
    static Rational parse(const std::string& text);
    double to_double() const noexcept { return static_cast<double>(p) / static_cast<double>(q); }
    std::string to_string() const { return std::to_string(p) + "/" + std::to_string(q); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

inline const Rational kDefaultDelta{1, 1392};

/// Smallest integer T with T >= N^{2/3 + delta}, computed with exact integer powers.
std::uint64_t threshold_for(std::uint64_t N, const Rational& delta);
/// Exact test of r <= N^{1/3 - delta}.
bool within_peel_bound(std::uint64_t r, std::uint64_t N, const Rational& delta);

struct Peel {
    Point n;
    PointSet slice;  ///< C_{n, A_i}: the points removed at this step
};

struct Decomposition {
    PointSet X;
    std::vector<Peel> peels;
    std::uint64_t threshold = 1;
    std::uint64_t N = 0;
    Rational delta = kDefaultDelta;

    /// Union of all peeled slices.
    PointSet Y() const;
};

/// Greedy X/Y split: while some n has r_2(A_i, n) >= threshold, remove the slice
/// A_i intersect (n - A_i) for the n with the largest r_2 (ties: lexicographically smallest n).
/// n = 0 is eligible.
Decomposition xy_decompose(const PointSet& A, std::uint64_t threshold, const Rational& delta = kDefaultDelta);

struct VerifyReport {
    bool ok = true;
    std::string clause;  ///< first violated clause, empty when ok
    std::string detail;
};

/// Recomputes every Decomposition invariant against A. Clauses, checked in order:
/// entry-size, subset, disjoint, cover, peel-size, slice, peel-count, x-bound.
VerifyReport verify_decomposition(const PointSet& A, const Decomposition& D);

struct OrthantCell {
    OrthantPattern pattern;
    PointSet points;
    bool negligible = false;  ///< at least two zero coordinates
};

/// Splits a 4-dimensional set into its 81 sign-pattern cells.
std::vector<OrthantCell> orthant_pipeline(const PointSet& A);

}  // namespace lpe
