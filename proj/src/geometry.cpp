#include "lpe/geometry.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace lpe {

namespace {

std::int64_t abs64(std::int64_t x) { return x < 0 ? -x : x; }

std::int64_t content(const Point& a, std::int64_t extra) {
    std::int64_t g = abs64(extra);
    for (auto x : a.coords()) g = std::gcd(g, abs64(x));
    return g;
}

}  // namespace

RationalPoint RationalPoint::make(Point num, std::int64_t den) {
    if (den == 0) throw DomainError("rational point with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const auto g = content(num, den);
    if (g > 1) {
        for (int i = 0; i < num.dim(); ++i) num[i] /= g;
        den /= g;
    }
    return {num, den};
}

std::string RationalPoint::to_string() const {
    if (den == 1) return num.to_string();
    return num.to_string() + "/" + std::to_string(den);
}

Hyperplane Hyperplane::make(Point a, std::int64_t b) {
    if (a.is_zero()) throw DomainError("hyperplane normal vector must be nonzero");
    const auto g = content(a, b);
    for (int i = 0; i < a.dim(); ++i) a[i] /= g;
    b /= g;
    int lead = 0;
    while (a[lead] == 0) ++lead;
    if (a[lead] < 0) {
        a = -a;
        b = -b;
    }
    Hyperplane h;
    h.a_ = a;
    h.b_ = b;
    return h;
}

bool Hyperplane::contains(const Point& p) const {
    if (p.dim() != dim()) throw DomainError("hyperplane/point dimension mismatch");
    return dot(a_, p) == static_cast<__int128>(b_);
}

bool Hyperplane::contains(const RationalPoint& p) const {
    if (p.dim() != dim()) throw DomainError("hyperplane/point dimension mismatch");
    return dot(a_, p.num) == static_cast<__int128>(b_) * p.den;
}

std::string Hyperplane::to_string() const {
    std::ostringstream os;
    os << "plane";
    for (auto x : a_.coords()) os << ' ' << x;
    os << ' ' << b_;
    return os.str();
}

bool contains(const Variety& v, const Point& p) {
    return std::visit([&](const auto& x) { return x.contains(p); }, v);
}

int dim(const Variety& v) {
    return std::visit(
        [](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Hyperplane>) return x.dim();
            else return x.center.dim();
        },
        v);
}

Hyperplane bisector_hyperplane(const Point& n) {
    if (n.is_zero()) throw DomainError("bisector hyperplane of the zero vector is undefined");
    const __int128 rhs = n.norm2();
    if (rhs > std::numeric_limits<std::int64_t>::max()) throw DomainError("bisector hyperplane coefficients overflow");
    return Hyperplane::make(2 * n, static_cast<std::int64_t>(rhs));
}

PointSet slice(const PointSet& A, const Point& n) {
    if (n.dim() != A.dim()) throw DomainError("slice: dimension mismatch");
    std::vector<Point> kept;
    for (const auto& p : A)
        if (A.contains(n - p)) kept.push_back(p);
    return PointSet::from_sorted(A.dim(), std::move(kept));
}

PointSet intersect_translates(const PointSet& S, const std::vector<Point>& shifts) {
    if (shifts.empty()) throw DomainError("intersect_translates needs at least one shift");
    std::vector<Point> sorted = shifts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("intersect_translates: shifts must be distinct");
    for (const auto& t : shifts)
        if (t.dim() != S.dim()) throw DomainError("intersect_translates: shift dimension mismatch");

    // Translation preserves lexicographic order, so candidates come out sorted.
    std::vector<Point> kept;
    for (const auto& p : S) {
        const Point x = p + shifts.front();
        bool all = true;
        for (std::size_t i = 1; i < shifts.size() && all; ++i) all = S.contains(x - shifts[i]);
        if (all) kept.push_back(x);
    }
    return PointSet::from_sorted(S.dim(), std::move(kept));
}

PointSet intersect_paraboloid_translates(std::int64_t m, const std::vector<Point>& shifts) {
    if (m < 1) throw DomainError("paraboloid parameter m must be >= 1");
    if (shifts.empty()) throw DomainError("intersect_translates needs at least one shift");
    for (const auto& t : shifts)
        if (t.dim() != 4) throw DomainError("intersect_translates: shift dimension mismatch");
    std::vector<Point> sorted = shifts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("intersect_translates: shifts must be distinct");

    // x = a_0 + (n, |n|^2). x - a_i lies on P iff n - b_i is in the box and
    // 2 n.b_i = |b_i|^2 + c_i, where (b_i, c_i) = a_i - a_0.
    struct Constraint {
        std::array<std::int64_t, 3> b;
        __int128 rhs;
        int last;  ///< highest coordinate with b != 0, or -1
    };
    std::vector<Constraint> cons;
    std::array<std::int64_t, 3> lo{-m, -m, -m}, hi{m, m, m};
    for (std::size_t i = 1; i < shifts.size(); ++i) {
        const Point diff = shifts[i] - shifts[0];
        Constraint c{{diff[0], diff[1], diff[2]}, 0, -1};
        for (int j = 0; j < 3; ++j) {
            c.rhs += static_cast<__int128>(diff[j]) * diff[j];
            if (diff[j] != 0) c.last = j;
            lo[j] = std::max(lo[j], diff[j] - m);
            hi[j] = std::min(hi[j], diff[j] + m);
        }
        c.rhs += diff[3];
        cons.push_back(c);
    }
    auto lhs = [](const Constraint& c, const std::array<std::int64_t, 3>& n, int upto) {
        __int128 v = 0;
        for (int j = 0; j <= upto; ++j) v += 2 * static_cast<__int128>(c.b[j]) * n[j];
        return v;
    };
    // Constraints whose last nonzero coordinate is j are decided once n_0..n_j are fixed.
    auto settled = [&](const std::array<std::int64_t, 3>& n, int j) {
        for (const auto& c : cons)
            if (c.last == j && lhs(c, n, j) != c.rhs) return false;
        return true;
    };
    const Constraint* solver = nullptr;
    for (const auto& c : cons)
        if (c.last == 2) solver = &c;

    std::vector<Point> kept;
    auto emit = [&](const std::array<std::int64_t, 3>& n) {
        const std::int64_t h = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
        kept.push_back(shifts[0] + Point{n[0], n[1], n[2], h});
    };
    std::array<std::int64_t, 3> n{};
    if (!settled(n, -1)) return PointSet::from_sorted(4, {});
    for (n[0] = lo[0]; n[0] <= hi[0]; ++n[0]) {
        if (!settled(n, 0)) continue;
        for (n[1] = lo[1]; n[1] <= hi[1]; ++n[1]) {
            if (!settled(n, 1)) continue;
            if (solver) {
                const __int128 num = solver->rhs - lhs(*solver, n, 1);
                const __int128 den = 2 * static_cast<__int128>(solver->b[2]);
                if (num % den != 0) continue;
                const __int128 v = num / den;
                if (v < lo[2] || v > hi[2]) continue;
                n[2] = static_cast<std::int64_t>(v);
                if (settled(n, 2)) emit(n);
            } else {
                for (n[2] = lo[2]; n[2] <= hi[2]; ++n[2]) emit(n);
            }
        }
    }
    return PointSet::from_sorted(4, std::move(kept));
}

IncidenceReport incidences(const PointSet& P, const std::vector<Variety>& V, const IncidenceWeights& weights) {
    for (const auto& v : V)
        if (dim(v) != P.dim()) throw DomainError("incidences: variety dimension mismatch");
    if (weights.on_varieties && weights.on_varieties->size() != V.size())
        throw DomainError("incidences: missing weight for some variety (got " +
                          std::to_string(weights.on_varieties->size()) + " weights for " + std::to_string(V.size()) +
                          " varieties)");

    IncidenceReport rep;
    unsigned __int128 total = 0;
    bool overflow = false;
    BigInt big = 0;
    for (const auto& p : P) {
        std::uint64_t wp = 1;
        if (weights.on_points) {
            wp = weights.on_points->at(p);
            if (wp == 0) throw DomainError("incidences: missing weight for point " + p.to_string());
        }
        std::uint64_t degree = 0;
        std::vector<std::size_t> through;
        for (std::size_t i = 0; i < V.size(); ++i) {
            if (!contains(V[i], p)) continue;
            ++degree;
            through.push_back(i);
            const std::uint64_t wv = weights.on_varieties ? (*weights.on_varieties)[i] : 1;
            const unsigned __int128 term = static_cast<unsigned __int128>(wp) * wv;
            if (!overflow && total > ~static_cast<unsigned __int128>(0) - term) {
                overflow = true;
                big = BigInt(static_cast<std::uint64_t>(total >> 64)) << 64;
                big += static_cast<std::uint64_t>(total);
            }
            if (overflow) {
                big += BigInt(wp) * wv;
            } else {
                total += term;
            }
        }
        if (rep.witness.empty() || degree > rep.kst_max) {
            rep.kst_max = degree;
            rep.witness = {p};
            rep.witness_varieties = std::move(through);
        }
    }
    if (overflow) {
        rep.total = big;
    } else {
        rep.total = BigInt(static_cast<std::uint64_t>(total >> 64)) << 64;
        rep.total += static_cast<std::uint64_t>(total);
    }
    return rep;
}

namespace {

using Bits = std::vector<std::uint64_t>;

std::uint64_t binomial_sat(std::uint64_t n, int k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(i)) / static_cast<std::uint64_t>(i);
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace

KstResult kst_witness(const PointSet& P, const std::vector<Variety>& V, int s, const KstOptions& opts) {
    if (s < 1) throw DomainError("kst_witness needs s >= 1");
    for (const auto& v : V)
        if (dim(v) != P.dim()) throw DomainError("kst_witness: variety dimension mismatch");
    KstResult res;
    if (V.empty() || P.size() < static_cast<std::size_t>(s)) return res;

    const std::size_t words = (V.size() + 63) / 64;
    std::vector<Bits> inc(P.size(), Bits(words, 0));
    for (std::size_t p = 0; p < P.size(); ++p)
        for (std::size_t i = 0; i < V.size(); ++i)
            if (contains(V[i], P[p])) inc[p][i / 64] |= std::uint64_t{1} << (i % 64);

    Bits acc(words);
    std::vector<std::size_t> best;
    auto evaluate = [&](const std::vector<std::size_t>& subset) {
        acc = inc[subset[0]];
        for (std::size_t j = 1; j < subset.size(); ++j)
            for (std::size_t w = 0; w < words; ++w) acc[w] &= inc[subset[j]][w];
        std::uint64_t t = 0;
        for (auto w : acc) t += static_cast<std::uint64_t>(std::popcount(w));
        ++res.subsets_tested;
        if (t > res.t_max || best.empty()) {
            res.t_max = t;
            best = subset;
        }
    };

    const auto n = P.size();
    const auto total = binomial_sat(n, s);
    std::vector<std::size_t> subset(static_cast<std::size_t>(s));
    if (total <= opts.max_subsets) {
        std::iota(subset.begin(), subset.end(), 0);
        while (true) {
            evaluate(subset);
            int i = s - 1;
            while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - static_cast<std::size_t>(s) + static_cast<std::size_t>(i)) --i;
            if (i < 0) break;
            ++subset[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < s; ++j) subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
        }
    } else if (opts.allow_sampling) {
        res.sampled = true;
        std::mt19937_64 rng(opts.seed);
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::uint64_t k = 0; k < opts.samples; ++k) {
            // Partial Fisher-Yates draws a uniform s-subset.
            for (int j = 0; j < s; ++j) {
                std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(j), n - 1);
                std::swap(pool[static_cast<std::size_t>(j)], pool[pick(rng)]);
            }
            std::copy_n(pool.begin(), s, subset.begin());
            std::sort(subset.begin(), subset.end());
            evaluate(subset);
        }
    } else {
        throw BudgetError("kst_witness: too many subsets for exhaustive search and sampling is disabled", total);
    }

    for (auto idx : best) res.witness.push_back(P[idx]);
    acc = inc[best[0]];
    for (std::size_t j = 1; j < best.size(); ++j)
        for (std::size_t w = 0; w < words; ++w) acc[w] &= inc[best[j]][w];
    for (std::size_t i = 0; i < V.size(); ++i)
        if (acc[i / 64] >> (i % 64) & 1) res.witness_varieties.push_back(i);
    return res;
}

Hyperplane dual_of_point(const RationalPoint& a) {
    if (a.num.is_zero()) throw DomainError("the zero point has no dual hyperplane");
    // (num / den) . x = 1  <=>  num . x = den
    return Hyperplane::make(a.num, a.den);
}

RationalPoint dual_of_plane(const Hyperplane& h) {
    if (h.through_origin()) throw DomainError("a hyperplane through the origin has no dual point");
    return RationalPoint::make(h.normal(), h.rhs());
}

DualResult dualize(const std::vector<Point>& points, const std::vector<Hyperplane>& planes) {
    DualResult out;
    out.point_duals.reserve(points.size());
    for (const auto& p : points) out.point_duals.push_back(dual_of_point(RationalPoint::from_integer(p)));
    out.plane_duals.reserve(planes.size());
    for (const auto& h : planes) out.plane_duals.push_back(dual_of_plane(h));
    return out;
}

void write_varieties(std::ostream& out, const std::vector<Variety>& V) {
    for (const auto& v : V) {
        if (const auto* h = std::get_if<Hyperplane>(&v)) {
            out << h->to_string() << '\n';
        } else {
            const auto& st = std::get<SphereTranslate>(v);
            out << "sphere-translate " << st.center.dim() << ' ' << st.m;
            for (auto x : st.center.coords()) out << ' ' << x;
            out << '\n';
        }
    }
}

std::vector<Variety> read_varieties(std::istream& in) {
    std::vector<Variety> V;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        const std::string where = " on line " + std::to_string(lineno);
        if (kind == "plane") {
            std::vector<std::int64_t> xs;
            std::int64_t x;
            while (ls >> x) xs.push_back(x);
            if (!ls.eof()) throw DomainError("variety file: bad integer" + where);
            if (xs.size() != 4 && xs.size() != 5) throw DomainError("variety file: plane needs d+1 integers with d in {3,4}" + where);
            const std::int64_t b = xs.back();
            xs.pop_back();
            V.emplace_back(Hyperplane::make(Point(std::span<const std::int64_t>(xs)), b));
        } else if (kind == "sphere-translate") {
            int d = 0;
            std::int64_t m = 0;
            if (!(ls >> d >> m) || (d != 3 && d != 4) || m <= 0) throw DomainError("variety file: bad sphere-translate header" + where);
            Point c(d);
            for (int i = 0; i < d; ++i)
                if (!(ls >> c[i])) throw DomainError("variety file: sphere-translate needs d center coordinates" + where);
            std::string extra;
            if (ls >> extra) throw DomainError("variety file: trailing tokens" + where);
            V.emplace_back(SphereTranslate{c, m});
        } else {
            throw DomainError("variety file: unknown kind '" + kind + "'" + where);
        }
    }
    return V;
}

}  // namespace lpe
