#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "lpe/point.hpp"

namespace lpe {

/// floor(sqrt(n)) for n >= 0, exact.
std::int64_t isqrt(std::int64_t n);
/// True iff n is a perfect square (n < 0 is never a square).
bool is_square(std::int64_t n);

/// All integer solutions of x_1^2 + ... + x_d^2 = m, d in {3, 4}, in canonical order.
/// Practical ranges: m up to ~1e6 for d = 3 and ~1e4 for d = 4.
PointSet enumerate_sphere(int d, std::int64_t m);

/// The truncated paraboloid {(n1, n2, n3, n1^2 + n2^2 + n3^2) : |n_i| <= m}; (2m+1)^3 points.
PointSet enumerate_paraboloid(std::int64_t m);

/// Legendre's three-square criterion: false iff m = 4^a (8b + 7).
bool legendre_admissible(std::int64_t m);

/// Points of A whose coordinate signs match the pattern exactly.
PointSet restrict_to_orthant(const PointSet& A, const OrthantPattern& pattern);

/// Deterministic Bernoulli(density) subset keyed on a hash of (seed, point).
/// Subsets for the same seed are nested as density grows.
PointSet random_subset(const PointSet& A, double density, std::uint64_t seed);

// Point-set text format:
//   d m family count
//   x1 ... xd          (one per line, strictly increasing)
// m is written as 0 for derived sets.
void write_point_set(std::ostream& out, const PointSet& A);
/// Rejects malformed headers, count mismatches, duplicates and out-of-order lines.
PointSet read_point_set(std::istream& in);

}  // namespace lpe
