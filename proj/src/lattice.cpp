#include "lpe/lattice.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace lpe {

std::int64_t isqrt(std::int64_t n) {
    if (n < 0) throw DomainError("isqrt of a negative number");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    // Double rounding can be off by one in either direction for large n.
    while (r > 0 && static_cast<__int128>(r) * r > n) --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(std::int64_t n) {
    if (n < 0) return false;
    const auto r = isqrt(n);
    return r * r == n;
}

namespace {

void check_sphere_args(int d, std::int64_t m) {
    if (d != 3 && d != 4) throw DomainError("sphere dimension must be 3 or 4, got " + std::to_string(d));
    if (m <= 0) throw DomainError("sphere parameter m must be positive, got " + std::to_string(m));
}

// Emits (prefix..., -s) and (prefix..., +s) when the residual is s^2; keeps lexicographic order.
template <class Emit>
void emit_last(std::int64_t residual, Emit&& emit) {
    if (residual < 0 || !is_square(residual)) return;
    const auto s = isqrt(residual);
    if (s == 0) {
        emit(0);
    } else {
        emit(-s);
        emit(s);
    }
}

}  // namespace

PointSet enumerate_sphere(int d, std::int64_t m) {
    check_sphere_args(d, m);
    std::vector<Point> pts;
    const auto R = isqrt(m);
    for (std::int64_t x1 = -R; x1 <= R; ++x1) {
        const auto r1 = m - x1 * x1;
        const auto R2 = isqrt(r1);
        for (std::int64_t x2 = -R2; x2 <= R2; ++x2) {
            const auto r2 = r1 - x2 * x2;
            if (d == 3) {
                emit_last(r2, [&](std::int64_t x3) { pts.push_back(Point{x1, x2, x3}); });
                continue;
            }
            const auto R3 = isqrt(r2);
            for (std::int64_t x3 = -R3; x3 <= R3; ++x3) {
                emit_last(r2 - x3 * x3, [&](std::int64_t x4) { pts.push_back(Point{x1, x2, x3, x4}); });
            }
        }
    }
    return PointSet::from_sorted(d, std::move(pts), Family::sphere, m);
}

PointSet enumerate_paraboloid(std::int64_t m) {
    if (m <= 0) throw DomainError("paraboloid parameter m must be positive, got " + std::to_string(m));
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>((2 * m + 1) * (2 * m + 1) * (2 * m + 1)));
    for (std::int64_t a = -m; a <= m; ++a)
        for (std::int64_t b = -m; b <= m; ++b)
            for (std::int64_t c = -m; c <= m; ++c) pts.push_back(Point{a, b, c, a * a + b * b + c * c});
    return PointSet::from_sorted(4, std::move(pts), Family::paraboloid, m);
}

bool legendre_admissible(std::int64_t m) {
    if (m <= 0) throw DomainError("legendre_admissible needs m >= 1");
    while (m % 4 == 0) m /= 4;
    return m % 8 != 7;
}

PointSet restrict_to_orthant(const PointSet& A, const OrthantPattern& pattern) {
    if (pattern.dim() != A.dim())
        throw DomainError("orthant pattern has length " + std::to_string(pattern.dim()) + " but the set has dimension " +
                          std::to_string(A.dim()));
    std::vector<Point> kept;
    for (const auto& p : A)
        if (pattern.matches(p)) kept.push_back(p);
    return PointSet::from_sorted(A.dim(), std::move(kept), A.family(), A.m());
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

PointSet random_subset(const PointSet& A, double density, std::uint64_t seed) {
    if (!(density > 0.0 && density <= 1.0)) throw DomainError("subset density must lie in (0, 1]");
    std::vector<Point> kept;
    for (const auto& p : A) {
        std::uint64_t h = splitmix64(seed);
        for (auto x : p.coords()) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (u < density) kept.push_back(p);
    }
    return PointSet::from_sorted(A.dim(), std::move(kept), A.family(), A.m());
}

void write_point_set(std::ostream& out, const PointSet& A) {
    out << A.dim() << ' ' << A.m().value_or(0) << ' ' << to_string(A.family()) << ' ' << A.size() << '\n';
    for (const auto& p : A) {
        for (int i = 0; i < p.dim(); ++i) out << (i ? " " : "") << p[i];
        out << '\n';
    }
}

PointSet read_point_set(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("point-set file: missing header");
    std::istringstream hs(line);
    int d = 0;
    std::int64_t m = 0;
    std::string fam;
    std::size_t count = 0;
    if (!(hs >> d >> m >> fam >> count)) throw DomainError("point-set file: malformed header '" + line + "'");
    const Family family = family_from_string(fam);
    if (d != 3 && d != 4) throw DomainError("point-set file: dimension must be 3 or 4");
    std::vector<Point> pts;
    pts.reserve(count);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        Point p(d);
        for (int i = 0; i < d; ++i)
            if (!(ls >> p[i])) throw DomainError("point-set file: bad coordinate on line " + std::to_string(lineno));
        std::string extra;
        if (ls >> extra) throw DomainError("point-set file: too many coordinates on line " + std::to_string(lineno));
        if (!pts.empty() && !(pts.back() < p)) {
            throw DomainError(std::string("point-set file: ") + (pts.back() == p ? "duplicate" : "out-of-order") +
                              " point on line " + std::to_string(lineno));
        }
        pts.push_back(p);
    }
    if (pts.size() != count)
        throw DomainError("point-set file: header says " + std::to_string(count) + " points, found " +
                          std::to_string(pts.size()));
    std::optional<std::int64_t> mm;
    if (family != Family::derived || m != 0) mm = m;
    return PointSet::from_sorted(d, std::move(pts), family, mm);
}

}  // namespace lpe
