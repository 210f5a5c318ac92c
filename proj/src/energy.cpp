#include "lpe/energy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <bit>

namespace lpe {

// ---------------------------------------------------------------------------
// PackedBox

PackedBox::PackedBox(int d, const std::array<std::int64_t, kMaxDim>& lo, const std::array<std::int64_t, kMaxDim>& hi)
    : d_(d), lo_(lo), hi_(hi) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t acc = 1;
    bool saturated = false;
    for (int i = d_ - 1; i >= 0; --i) {
        if (hi_[i] < lo_[i]) throw DomainError("empty box");
        stride_[i] = acc;
        const auto w = width(i);
        if (saturated || acc > kMax / w) {
            saturated = true;
            acc = kMax;
        } else {
            acc *= w;
        }
    }
    cells_ = acc;
}

PackedBox PackedBox::bounding(const std::vector<Point>& pts, int d) {
    std::array<std::int64_t, kMaxDim> lo{}, hi{};
    if (pts.empty()) return PackedBox(d, lo, hi);
    for (int i = 0; i < d; ++i) lo[i] = hi[i] = pts.front()[i];
    for (const auto& p : pts)
        for (int i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    return PackedBox(d, lo, hi);
}

std::uint64_t PackedBox::pack(const Point& p) const noexcept {
    std::uint64_t key = 0;
    for (int i = 0; i < d_; ++i) key += static_cast<std::uint64_t>(p[i] - lo_[i]) * stride_[i];
    return key;
}

Point PackedBox::unpack(std::uint64_t key) const {
    Point p(d_);
    for (int i = 0; i < d_; ++i) {
        p[i] = lo_[i] + static_cast<std::int64_t>(key / stride_[i]);
        key %= stride_[i];
    }
    return p;
}

bool PackedBox::contains(const Point& p) const noexcept {
    if (p.dim() != d_) return false;
    for (int i = 0; i < d_; ++i)
        if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
    return true;
}

PackedBox PackedBox::operator+(const PackedBox& o) const {
    if (o.d_ != d_) throw DomainError("box dimension mismatch");
    std::array<std::int64_t, kMaxDim> lo{}, hi{};
    for (int i = 0; i < d_; ++i) {
        lo[i] = lo_[i] + o.lo_[i];
        hi[i] = hi_[i] + o.hi_[i];
    }
    return PackedBox(d_, lo, hi);
}

// ---------------------------------------------------------------------------
// RepFn

RepFn::RepFn(int s, int d, PackedBox box, std::vector<std::uint64_t> keys, std::vector<std::uint64_t> counts)
    : s_(s), d_(d), box_(box), keys_(std::move(keys)), counts_(std::move(counts)) {
    if (keys_.size() != counts_.size()) throw DomainError("RepFn keys/counts length mismatch");
}

std::uint64_t RepFn::at(const Point& n) const {
    if (keys_.empty() || !box_.contains(n)) return 0;
    const auto key = box_.pack(n);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return 0;
    return counts_[static_cast<std::size_t>(it - keys_.begin())];
}

BigInt RepFn::total() const {
    BigInt t = 0;
    for (auto c : counts_) t += c;
    return t;
}

// ---------------------------------------------------------------------------
// Convolution engine

namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

void check_fold(int s) {
    if (s < 1) throw DomainError("fold count s must be >= 1, got " + std::to_string(s));
}

// |A|^e, saturating.
std::uint64_t sat_pow(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (base != 0 && r > kU64Max / base) return kU64Max;
        r *= base;
    }
    return r;
}

/// A sparse function on a box, keys sorted ascending and counts positive.
struct Layer {
    PackedBox box;
    std::vector<std::uint64_t> keys;
    std::vector<std::uint64_t> counts;
};

Layer indicator(const std::vector<Point>& pts, int d) {
    Layer L;
    L.box = PackedBox::bounding(pts, d);
    L.keys.reserve(pts.size());
    for (const auto& p : pts) L.keys.push_back(L.box.pack(p));
    std::sort(L.keys.begin(), L.keys.end());
    L.counts.assign(L.keys.size(), 1);
    return L;
}

enum class Mode { counts, support };

/// One first-coordinate slab of a convolution result: offsets within the slab
/// (coordinates 1..d-1 in output strides) with their positive values.
struct Slab {
    std::uint64_t index = 0;  ///< first coordinate minus the output box's lo(0)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
    bool sorted = false;
};

using SlabSink = std::function<void(Slab&)>;

/// Convolves `cur` with the indicator of `pts` (sorted, deduplicated), streaming
/// slabs of the result in increasing first coordinate. Returns the output box.
PackedBox convolve(const Layer& cur, const std::vector<Point>& pts, int d, Mode mode, const Budget& budget,
                   const SlabSink& sink) {
    const PackedBox abox = PackedBox::bounding(pts, d);
    const PackedBox out = cur.box + abox;
    if (out.cells() == kU64Max) throw BudgetError("sum box too large to pack into 64-bit keys", out.cells());

    const std::uint64_t slab_cells = out.stride(0);
    const bool dense = slab_cells <= budget.dense_cells;

    auto rest_offset = [&](const Point& p, const PackedBox& from) {
        std::uint64_t off = 0;
        for (int i = 1; i < d; ++i) off += static_cast<std::uint64_t>(p[i] - from.lo(i)) * out.stride(i);
        return off;
    };

    struct Group {
        std::int64_t first;
        std::size_t begin, end;
    };
    std::vector<Group> cur_groups;
    std::vector<std::uint64_t> cur_rest(cur.keys.size());
    for (std::size_t i = 0; i < cur.keys.size(); ++i) {
        const Point p = cur.box.unpack(cur.keys[i]);
        cur_rest[i] = rest_offset(p, cur.box);
        if (cur_groups.empty() || cur_groups.back().first != p[0])
            cur_groups.push_back({p[0], i, i + 1});
        else
            cur_groups.back().end = i + 1;
    }

    // Equal first coordinates are contiguous in lexicographic order.
    std::vector<std::pair<std::size_t, std::size_t>> a_range(static_cast<std::size_t>(abox.width(0)), {0, 0});
    std::vector<std::uint64_t> a_rest(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
        a_rest[j] = rest_offset(pts[j], abox);
        auto& r = a_range[static_cast<std::size_t>(pts[j][0] - abox.lo(0))];
        if (r.first == r.second) r = {j, j + 1};
        else r.second = j + 1;
    }

    std::vector<std::uint64_t> scratch;
    if (dense) scratch.assign(static_cast<std::size_t>(slab_cells), 0);
    std::vector<std::uint64_t> touched;
    Slab slab;

    for (std::int64_t t = out.lo(0); t <= out.hi(0); ++t) {
        touched.clear();
        slab.cells.clear();
        for (const auto& g : cur_groups) {
            const std::int64_t v = t - g.first;
            if (v < abox.lo(0) || v > abox.hi(0)) continue;
            const auto [ab, ae] = a_range[static_cast<std::size_t>(v - abox.lo(0))];
            for (std::size_t i = g.begin; i < g.end; ++i) {
                const std::uint64_t base = cur_rest[i];
                const std::uint64_t c = mode == Mode::counts ? cur.counts[i] : 1;
                for (std::size_t j = ab; j < ae; ++j) {
                    const std::uint64_t idx = base + a_rest[j];
                    if (dense) {
                        auto& cell = scratch[static_cast<std::size_t>(idx)];
                        if (cell == 0) touched.push_back(idx);
                        if (mode == Mode::counts) cell += c;
                        else cell = 1;
                    } else {
                        slab.cells.emplace_back(idx, c);
                    }
                }
            }
        }
        slab.index = static_cast<std::uint64_t>(t - out.lo(0));
        if (dense) {
            if (touched.empty()) continue;
            slab.cells.reserve(touched.size());
            for (auto idx : touched) {
                auto& cell = scratch[static_cast<std::size_t>(idx)];
                slab.cells.emplace_back(idx, cell);
                cell = 0;
            }
            slab.sorted = false;
        } else {
            if (slab.cells.empty()) continue;
            std::sort(slab.cells.begin(), slab.cells.end());
            std::size_t w = 0;
            for (std::size_t i = 0; i < slab.cells.size();) {
                auto acc = slab.cells[i];
                std::size_t e = i + 1;
                for (; e < slab.cells.size() && slab.cells[e].first == acc.first; ++e)
                    acc.second = mode == Mode::counts ? acc.second + slab.cells[e].second : 1;
                slab.cells[w++] = acc;
                i = e;
            }
            slab.cells.resize(w);
            slab.sorted = true;
        }
        sink(slab);
    }
    return out;
}

/// Runs the convolution and stores the result as a new layer.
Layer convolve_store(const Layer& cur, const std::vector<Point>& pts, int d, Mode mode, const Budget& budget) {
    const PackedBox abox = PackedBox::bounding(pts, d);
    const PackedBox out_box = cur.box + abox;
    const std::uint64_t pairs = cur.keys.size() > 0 && pts.size() > kU64Max / cur.keys.size()
                                    ? kU64Max
                                    : static_cast<std::uint64_t>(cur.keys.size()) * pts.size();
    const std::uint64_t estimate = std::min(out_box.cells(), pairs);
    if (estimate > budget.max_support) throw BudgetError("convolution support exceeds the memory budget", estimate);

    Layer next;
    next.box = out_box;
    convolve(cur, pts, d, mode, budget, [&](Slab& slab) {
        if (!slab.sorted) std::sort(slab.cells.begin(), slab.cells.end());
        const std::uint64_t base = slab.index * out_box.stride(0);
        for (const auto& [off, val] : slab.cells) {
            next.keys.push_back(base + off);
            next.counts.push_back(val);
        }
    });
    return next;
}

std::vector<Point> negated_sorted(const PointSet& A) {
    std::vector<Point> out;
    out.reserve(A.size());
    for (auto it = A.points().rbegin(); it != A.points().rend(); ++it) out.push_back(-*it);
    return out;
}

// ---------------------------------------------------------------------------
// Public operations

void check_count_width(const PointSet& A, int s) {
    if (sat_pow(A.size(), s) == kU64Max)
        throw BudgetError("|A|^s does not fit 64-bit representation counts", kU64Max);
}

/// Builds r_{s-1}; the caller streams the last pass.
Layer build_layers(const PointSet& A, int s, const Budget& budget) {
    Layer cur = indicator(A.points(), A.dim());
    for (int pass = 2; pass < s; ++pass) cur = convolve_store(cur, A.points(), A.dim(), Mode::counts, budget);
    return cur;
}

/// True when sum r^k is guaranteed below 2^127 (sum r^k <= |A|^{s k}).
bool fits_u128(std::size_t n, int s, int k) {
    if (n <= 1) return true;
    return static_cast<double>(s) * k * std::log2(static_cast<double>(n)) < 126.0;
}

struct PowerAccumulator {
    int k;
    bool narrow;
    unsigned __int128 small = 0;
    BigInt big = 0;

    void add(std::uint64_t r) {
        if (narrow) {
            unsigned __int128 p = 1;
            for (int i = 0; i < k; ++i) p *= r;
            small += p;
        } else {
            BigInt p = r;
            big += boost::multiprecision::pow(p, static_cast<unsigned>(k));
        }
    }
    BigInt result() const {
        if (!narrow) return big;
        BigInt v = static_cast<std::uint64_t>(small >> 64);
        v <<= 64;
        v += static_cast<std::uint64_t>(small);
        return v;
    }
};

}  // namespace

RepFn rep_fn(const PointSet& A, int s, const Budget& budget) {
    check_fold(s);
    if (A.empty()) return RepFn(s, A.dim(), PackedBox(A.dim(), {}, {}), {}, {});
    check_count_width(A, s);
    Layer cur = indicator(A.points(), A.dim());
    for (int pass = 1; pass < s; ++pass) cur = convolve_store(cur, A.points(), A.dim(), Mode::counts, budget);
    return RepFn(s, A.dim(), cur.box, std::move(cur.keys), std::move(cur.counts));
}

BigInt power_sum(const RepFn& r, int k) {
    if (k < 1) throw DomainError("energy exponent k must be >= 1");
    std::uint64_t max_r = 0;
    for (auto c : r.counts()) max_r = std::max(max_r, c);
    PowerAccumulator acc{k, max_r <= 1 || static_cast<double>(k) * std::log2(static_cast<double>(max_r)) +
                                                   std::log2(static_cast<double>(r.size()) + 1.0) < 126.0};
    for (auto c : r.counts()) acc.add(c);
    return acc.result();
}

EnergyValue energy(const PointSet& A, int s, int k, const Budget& budget) {
    check_fold(s);
    if (k < 2) throw DomainError("energy exponent k must be >= 2, got " + std::to_string(k));
    EnergyValue out{s, k, 0};
    if (A.empty()) return out;
    check_count_width(A, s);
    if (s == 1) {
        out.value = A.size();
        return out;
    }
    const Layer cur = build_layers(A, s, budget);
    PowerAccumulator acc{k, fits_u128(A.size(), s, k)};
    convolve(cur, A.points(), A.dim(), Mode::counts, budget, [&](Slab& slab) {
        for (const auto& cell : slab.cells) acc.add(cell.second);
    });
    out.value = acc.result();
    return out;
}

EnergyValue energy_brute(const PointSet& A, int s, int k, const Budget& budget) {
    check_fold(s);
    if (k < 2) throw DomainError("energy exponent k must be >= 2, got " + std::to_string(k));
    EnergyValue out{s, k, 0};
    if (A.empty()) return out;
    const auto tuples = sat_pow(A.size(), std::max(s, k));
    if (tuples > budget.max_tuples) throw BudgetError("brute-force tuple count exceeds the budget", tuples);

    // Enumerate every ordered s-tuple, bucket by its sum, then sum the k-th powers of bucket sizes.
    std::map<Point, std::uint64_t> buckets;
    std::vector<std::size_t> idx(static_cast<std::size_t>(s), 0);
    const std::size_t n = A.size();
    while (true) {
        Point sum(A.dim());
        for (auto i : idx) sum += A[i];
        ++buckets[sum];
        int pos = s - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == n) idx[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    for (const auto& [key, count] : buckets) {
        BigInt c = count;
        out.value += boost::multiprecision::pow(c, static_cast<unsigned>(k));
    }
    return out;
}

SupRep sup_rep(const RepFn& r) {
    if (r.empty()) throw DomainError("sup_rep of an empty set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r.count(i) > r.count(best)) best = i;  // strict: keeps the lexicographically first maximiser
    return {r.key(best), r.count(best)};
}

SupRep sup_rep(const PointSet& A, int s, const Budget& budget) {
    if (A.empty()) throw DomainError("sup_rep of an empty set");
    return sup_rep(rep_fn(A, s, budget));
}

PointSet sumset(const PointSet& A, int plus, int minus, const Budget& budget) {
    if (plus < 0 || minus < 0 || plus + minus < 1) throw DomainError("sumset needs plus, minus >= 0 and plus + minus >= 1");
    if (A.empty()) return PointSet::from_sorted(A.dim(), {});
    const std::vector<Point> neg = negated_sorted(A);
    std::vector<const std::vector<Point>*> summands;
    for (int i = 0; i < plus; ++i) summands.push_back(&A.points());
    for (int i = 0; i < minus; ++i) summands.push_back(&neg);

    Layer cur = indicator(*summands.front(), A.dim());
    for (std::size_t i = 1; i < summands.size(); ++i)
        cur = convolve_store(cur, *summands[i], A.dim(), Mode::support, budget);
    std::vector<Point> pts;
    pts.reserve(cur.keys.size());
    for (auto key : cur.keys) pts.push_back(cur.box.unpack(key));
    return PointSet::from_sorted(A.dim(), std::move(pts));
}

LevelSetProfile level_sets(const RepFn& r) {
    if (r.s() != 2) throw DomainError("level_sets needs a 2-fold representation function, got s = " + std::to_string(r.s()));
    std::map<int, std::uint64_t> by_j;
    for (auto c : r.counts()) ++by_j[static_cast<int>(std::bit_width(c)) - 1];
    LevelSetProfile out;
    for (const auto& [j, size] : by_j) out.push_back({j, size});
    return out;
}

std::uint64_t max_nonzero_rep2(const RepFn& r2) {
    std::uint64_t best = 0;
    for (std::size_t i = 0; i < r2.size(); ++i)
        if (!r2.key(i).is_zero()) best = std::max(best, r2.count(i));
    return best;
}

DftMoment moment_via_dft(const PointSet& A, int s, const Budget& budget) {
    check_fold(s);
    if (A.size() > 64) throw DomainError("moment_via_dft is limited to |A| <= 64");
    const int d = A.dim();
    const std::int64_t M = 2 * s * A.max_abs() + 1;
    const std::uint64_t grid = sat_pow(static_cast<std::uint64_t>(M), d);
    if (grid > budget.max_grid) throw BudgetError("DFT grid exceeds the budget", grid);

    DftMoment res;
    res.modulus = M;
    res.value.s = s;
    res.value.k = 2;
    if (A.empty()) return res;

    std::vector<std::complex<long double>> twiddle(static_cast<std::size_t>(M));
    for (std::int64_t j = 0; j < M; ++j) {
        const long double theta = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j) / M;
        twiddle[static_cast<std::size_t>(j)] = {std::cos(theta), std::sin(theta)};
    }
    // Residues a_i mod M, and the running phase k.a mod M of each point.
    const std::size_t n = A.size();
    std::vector<std::array<std::int64_t, kMaxDim>> res_mod(n);
    for (std::size_t a = 0; a < n; ++a)
        for (int i = 0; i < d; ++i) res_mod[a][i] = ((A[a][i] % M) + M) % M;
    std::vector<std::int64_t> phase(n, 0);
    std::array<std::int64_t, kMaxDim> k{};

    long double total = 0.0L, carry = 0.0L;  // Kahan summation
    for (std::uint64_t step = 0; step < grid; ++step) {
        std::complex<long double> z = 0;
        for (std::size_t a = 0; a < n; ++a) z += twiddle[static_cast<std::size_t>(phase[a])];
        const long double mod2 = std::norm(z);
        long double term = 1.0L;
        for (int i = 0; i < s; ++i) term *= mod2;
        const long double y = term - carry;
        const long double t = total + y;
        carry = (t - total) - y;
        total = t;

        // Odometer step on k; every coordinate that moves (including a wrap) advances by +1 mod M.
        for (int i = d - 1; i >= 0; --i) {
            for (std::size_t a = 0; a < n; ++a) {
                phase[a] += res_mod[a][i];
                if (phase[a] >= M) phase[a] -= M;
            }
            if (++k[i] < M) break;
            k[i] = 0;
        }
    }
    const long double raw = total / static_cast<long double>(grid);
    const long double rounded = std::round(raw);
    res.raw = static_cast<double>(raw);
    res.residual = static_cast<double>(std::fabs(raw - rounded));
    if (!(res.residual < 1e-3))
        throw std::runtime_error("moment_via_dft: rounding residual " + std::to_string(res.residual) +
                                 " exceeds 1e-3 (numerical failure)");
    res.value.value = BigInt(static_cast<unsigned long long>(rounded));
    return res;
}

}  // namespace lpe
