#include "lpe/decompose.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "lpe/energy.hpp"
#include "lpe/geometry.hpp"
#include "lpe/lattice.hpp"

namespace lpe {

Rational Rational::make(std::int64_t p, std::int64_t q) {
    if (q == 0) throw DomainError("rational with zero denominator");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (p < 0) throw DomainError("delta must be nonnegative");
    const auto g = std::gcd(p, q);
    return {p / g, q / g};
}

Rational Rational::parse(const std::string& text) {
    auto parse_int = [&](std::string_view sv) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (ec != std::errc() || ptr != sv.data() + sv.size() || sv.empty())
            throw DomainError("cannot parse rational '" + text + "'");
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) return make(parse_int(text), 1);
    return make(parse_int(std::string_view(text).substr(0, slash)), parse_int(std::string_view(text).substr(slash + 1)));
}

namespace {

BigInt ipow(std::uint64_t base, std::int64_t e) { return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e)); }

}  // namespace

std::uint64_t threshold_for(std::uint64_t N, const Rational& delta) {
    if (N == 0) return 1;
    // T >= N^{(2q + 3p) / (3q)}  <=>  T^{3q} >= N^{2q + 3p}
    const std::int64_t root = 3 * delta.q;
    const BigInt target = ipow(N, 2 * delta.q + 3 * delta.p);
    std::uint64_t lo = 1, hi = 1;
    while (ipow(hi, root) < target) hi *= 2;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (ipow(mid, root) >= target) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

bool within_peel_bound(std::uint64_t r, std::uint64_t N, const Rational& delta) {
    // r <= N^{(q - 3p) / (3q)}  <=>  r^{3q} <= N^{q - 3p}, or r^{3q} N^{3p - q} <= 1 when the exponent is negative
    const std::int64_t e = delta.q - 3 * delta.p;
    const BigInt lhs = ipow(r, 3 * delta.q);
    if (e >= 0) return lhs <= ipow(N, e);
    return lhs * ipow(N, -e) <= 1;
}

PointSet Decomposition::Y() const {
    std::vector<Point> pts;
    for (const auto& peel : peels) pts.insert(pts.end(), peel.slice.begin(), peel.slice.end());
    return PointSet::from_points(X.dim(), std::move(pts));
}

Decomposition xy_decompose(const PointSet& A, std::uint64_t threshold, const Rational& delta) {
    if (A.empty()) throw DomainError("xy_decompose needs a nonempty set");
    if (threshold < 1) throw DomainError("xy_decompose needs threshold >= 1");

    Decomposition D;
    D.threshold = threshold;
    D.N = A.size();
    D.delta = delta;

    // r_2 of the full set; afterwards only decremented, so its key set never grows.
    const RepFn r2 = rep_fn(A, 2);
    const auto& keys = r2.packed_keys();
    std::vector<std::uint64_t> counts = r2.counts();
    const PackedBox& box = r2.box();
    auto dec = [&](const Point& n, std::uint64_t by) {
        const auto it = std::lower_bound(keys.begin(), keys.end(), box.pack(n));
        counts[static_cast<std::size_t>(it - keys.begin())] -= by;
    };

    PointSet cur = A.as_derived();
    while (!cur.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < counts.size(); ++i)
            if (counts[i] > counts[best]) best = i;
        if (counts[best] < threshold) break;

        const Point n = r2.key(best);
        PointSet C = slice(cur, n);
        // Drop every ordered pair with at least one member in C.
        for (const auto& c : C)
            for (const auto& y : cur) dec(c + y, C.contains(y) ? 1 : 2);

        std::vector<Point> rest;
        rest.reserve(cur.size() - C.size());
        std::set_difference(cur.begin(), cur.end(), C.begin(), C.end(), std::back_inserter(rest));
        cur = PointSet::from_sorted(A.dim(), std::move(rest));
        D.peels.push_back({n, std::move(C)});
    }
    D.X = std::move(cur);
    return D;
}

VerifyReport verify_decomposition(const PointSet& A, const Decomposition& D) {
    auto fail = [](std::string clause, std::string detail) { return VerifyReport{false, std::move(clause), std::move(detail)}; };

    if (D.N != A.size()) return fail("entry-size", "N = " + std::to_string(D.N) + " but |A| = " + std::to_string(A.size()));
    if (D.threshold < 1) return fail("peel-size", "threshold must be >= 1");

    std::vector<const PointSet*> parts{&D.X};
    for (const auto& peel : D.peels) parts.push_back(&peel.slice);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (const auto& p : *parts[i])
            if (!A.contains(p)) return fail("subset", "point " + p.to_string() + " is not in A");

    std::vector<Point> all;
    for (const auto* part : parts) all.insert(all.end(), part->begin(), part->end());
    std::sort(all.begin(), all.end());
    if (auto it = std::adjacent_find(all.begin(), all.end()); it != all.end())
        return fail("disjoint", "point " + it->to_string() + " appears in more than one part");
    if (all.size() != A.size()) return fail("cover", "parts cover " + std::to_string(all.size()) + " of " + std::to_string(A.size()) + " points");

    for (std::size_t i = 0; i < D.peels.size(); ++i)
        if (D.peels[i].slice.size() < D.threshold)
            return fail("peel-size", "peel " + std::to_string(i) + " has " + std::to_string(D.peels[i].slice.size()) +
                                         " points, below threshold " + std::to_string(D.threshold));

    PointSet remaining = A.as_derived();
    for (std::size_t i = 0; i < D.peels.size(); ++i) {
        const auto& peel = D.peels[i];
        if (!(slice(remaining, peel.n) == peel.slice))
            return fail("slice", "peel " + std::to_string(i) + " is not the slice of the remaining set at " + peel.n.to_string());
        std::vector<Point> rest;
        std::set_difference(remaining.begin(), remaining.end(), peel.slice.begin(), peel.slice.end(), std::back_inserter(rest));
        remaining = PointSet::from_sorted(A.dim(), std::move(rest));
    }

    const std::uint64_t max_peels = (D.N + D.threshold - 1) / D.threshold;
    if (D.peels.size() > max_peels)
        return fail("peel-count", std::to_string(D.peels.size()) + " peels exceed ceil(N / threshold) = " + std::to_string(max_peels));

    if (!D.X.empty()) {
        const auto top = sup_rep(D.X, 2);
        if (top.count >= D.threshold)
            return fail("x-bound", "r_2(X, " + top.n.to_string() + ") = " + std::to_string(top.count) +
                                       " is not below threshold " + std::to_string(D.threshold));
    }
    return {};
}

std::vector<OrthantCell> orthant_pipeline(const PointSet& A) {
    if (A.dim() != 4) throw DomainError("orthant_pipeline works on 4-dimensional sets");
    std::vector<OrthantCell> cells;
    for (auto& pattern : OrthantPattern::all(4)) {
        PointSet pts = restrict_to_orthant(A, pattern);
        const bool negligible = pattern.zero_count() >= 2;
        cells.push_back({std::move(pattern), std::move(pts), negligible});
    }
    return cells;
}

}  // namespace lpe
