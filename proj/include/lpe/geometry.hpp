#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "lpe/energy.hpp"
#include "lpe/point.hpp"

namespace lpe {

/// Exact rational point num / den with den > 0 and gcd(num_1, ..., num_d, den) = 1.
struct RationalPoint {
    Point num;
    std::int64_t den = 1;

    static RationalPoint make(Point num, std::int64_t den);
    static RationalPoint from_integer(const Point& p) { return make(p, 1); }
    int dim() const noexcept { return num.dim(); }
    std::string to_string() const;
    friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

/// Affine hyperplane a . x = b with integer coefficients, stored in canonical form:
/// content gcd(a, b) divided out and the leading nonzero coefficient of a positive.
class Hyperplane {
  public:
    static Hyperplane make(Point a, std::int64_t b);

    const Point& normal() const noexcept { return a_; }
    std::int64_t rhs() const noexcept { return b_; }
    int dim() const noexcept { return a_.dim(); }
    bool through_origin() const noexcept { return b_ == 0; }

    bool contains(const Point& p) const;
    bool contains(const RationalPoint& p) const;
    std::string to_string() const;

    friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
    friend auto operator<=>(const Hyperplane&, const Hyperplane&) = default;

  private:
    Point a_;
    std::int64_t b_ = 0;
};

/// The translate center + S_{d,m}: points x with |x - center|^2 = m.
struct SphereTranslate {
    Point center;
    std::int64_t m = 1;

    bool contains(const Point& p) const { return (p - center).norm2() == static_cast<__int128>(m); }
    friend bool operator==(const SphereTranslate&, const SphereTranslate&) = default;
};

using Variety = std::variant<Hyperplane, SphereTranslate>;

bool contains(const Variety& v, const Point& p);
int dim(const Variety& v);

/// H_n: the hyperplane 2 (n . x) = |n|^2 through n/2 orthogonal to n, for n != 0.
Hyperplane bisector_hyperplane(const Point& n);

/// C_{n,A} = A intersect (n - A). Its size is r_2(A, n).
PointSet slice(const PointSet& A, const Point& n);

/// Intersection of the translates shift_i + S over distinct shifts.
PointSet intersect_translates(const PointSet& S, const std::vector<Point>& shifts);
/// Same result as intersect_translates(enumerate_paraboloid(m), shifts) without building P_{4,m}:
/// pairwise differences of the paraboloid equations are linear in the base coordinates.
PointSet intersect_paraboloid_translates(std::int64_t m, const std::vector<Point>& shifts);

struct IncidenceWeights {
    const RepFn* on_points = nullptr;                      ///< w(p) = on_points->at(p)
    const std::vector<std::uint64_t>* on_varieties = nullptr;  ///< w'(V[i]) = (*on_varieties)[i]
};

struct IncidenceReport {
    BigInt total = 0;                 ///< sum_{p,v} w(p) w'(v) [p in v]
    std::uint64_t kst_max = 0;        ///< largest number of varieties through a single point
    std::vector<Point> witness;       ///< a point attaining kst_max
    std::vector<std::size_t> witness_varieties;
};

/// Exact (weighted) point-variety incidence count by direct membership testing.
IncidenceReport incidences(const PointSet& P, const std::vector<Variety>& V, const IncidenceWeights& weights = {});

struct KstOptions {
    std::uint64_t max_subsets = 5'000'000;  ///< exhaustive search limit on C(|P|, s)
    bool allow_sampling = false;
    std::uint64_t samples = 200'000;
    std::uint64_t seed = 1;
};

struct KstResult {
    std::uint64_t t_max = 0;
    std::vector<Point> witness;                 ///< an s-subset attaining t_max
    std::vector<std::size_t> witness_varieties; ///< indices into V of the varieties through all of it
    bool sampled = false;
    std::uint64_t subsets_tested = 0;
};

/// Max over s-subsets of distinct points of P of the number of varieties containing the whole subset.
KstResult kst_witness(const PointSet& P, const std::vector<Variety>& V, int s, const KstOptions& opts = {});

/// Point a != 0 maps to G_a : a . x = 1.
Hyperplane dual_of_point(const RationalPoint& a);
/// Plane a . x = b with b != 0 maps to the point a / b.
RationalPoint dual_of_plane(const Hyperplane& h);

struct DualResult {
    std::vector<Hyperplane> point_duals;
    std::vector<RationalPoint> plane_duals;
};

/// Point/hyperplane duality; a lies on H exactly when dual(H) lies on G_a.
DualResult dualize(const std::vector<Point>& points, const std::vector<Hyperplane>& planes);

// Variety list format, one per line:
//   plane a1 ... ad b
//   sphere-translate d m x1 ... xd
void write_varieties(std::ostream& out, const std::vector<Variety>& V);
std::vector<Variety> read_varieties(std::istream& in);

}  // namespace lpe
