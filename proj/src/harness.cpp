#include "lpe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lpe/geometry.hpp"
#include "lpe/lattice.hpp"

namespace lpe {

// ---------------------------------------------------------------------------
// Fitting

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DomainError("fit_exponent needs at least 3 points");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (!(sxx > 0)) throw DomainError("fit_exponent: x-values are degenerate (all equal)");
    ExponentFit fit;
    fit.points = points;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (const auto& [x, y] : points) {
        const double e = y - (fit.slope * x + fit.intercept);
        ss_res += e * e;
    }
    fit.r2 = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& size_value) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(size_value.size());
    for (const auto& [x, y] : size_value) {
        if (!(x > 0 && y > 0)) throw DomainError("fit_loglog needs positive sizes and values");
        pts.emplace_back(std::log(x), std::log(y));
    }
    return fit_exponent(pts);
}

double sphere4_energy_exponent(int s) { return 2.0 * s - 2.0 + 1.0 / 6.0 + (1.0 - 1.0 / 232.0) * std::pow(6.0, -s + 1); }

double sphere3_eta(int s) { return 0.5 * std::pow(3.0, -s + 2); }

double sphere3_lambda(int s) {
    if (s % 2 == 0) return 0.5 * std::pow(3.0, -s / 2.0 + 2.0);
    return 0.1 * std::pow(3.0, -(s - 1) / 2.0 + 3.0);
}

// ---------------------------------------------------------------------------
// Families

std::string to_string(ScanFamily f) {
    switch (f) {
        case ScanFamily::sphere3: return "sphere3";
        case ScanFamily::sphere4: return "sphere4";
        case ScanFamily::paraboloid4: return "paraboloid4";
        case ScanFamily::random_subset: return "random-subset";
        case ScanFamily::slice_union: return "slice-union";
    }
    return "sphere4";
}

ScanFamily scan_family_from_string(const std::string& s) {
    if (s == "sphere3") return ScanFamily::sphere3;
    if (s == "sphere4") return ScanFamily::sphere4;
    if (s == "paraboloid4") return ScanFamily::paraboloid4;
    if (s == "random-subset") return ScanFamily::random_subset;
    if (s == "slice-union") return ScanFamily::slice_union;
    throw DomainError("unknown scan family '" + s + "'");
}

PointSet build_surface(const std::string& family, int d, std::int64_t m) {
    if (family == "sphere3") return enumerate_sphere(3, m);
    if (family == "sphere4") return enumerate_sphere(4, m);
    if (family == "paraboloid4" || family == "paraboloid") {
        if (family == "paraboloid" && d != 4) throw DomainError("paraboloid family needs d = 4");
        return enumerate_paraboloid(m);
    }
    if (family == "sphere") return enumerate_sphere(d, m);
    throw DomainError("unknown surface family '" + family + "'");
}

PointSet slice_union(const PointSet& S, int count) {
    if (count < 1) throw DomainError("slice_union needs count >= 1");
    const RepFn r2 = rep_fn(S, 2);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < r2.size(); ++i)
        if (!r2.key(i).is_zero()) order.push_back(i);
    // Largest r_2 first; keys are already lexicographic so a stable sort breaks ties by n.
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r2.count(a) > r2.count(b); });
    std::vector<Point> pts;
    for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(count); ++i) {
        const PointSet C = slice(S, r2.key(order[i]));
        pts.insert(pts.end(), C.begin(), C.end());
    }
    return PointSet::from_points(S.dim(), std::move(pts));
}

// ---------------------------------------------------------------------------
// Inequalities

namespace {

double to_double(const BigInt& v) { return v.convert_to<double>(); }

BigInt big_pow(std::uint64_t base, unsigned e) { return boost::multiprecision::pow(BigInt(base), e); }

InequalityRow ratio_row(std::string tag, double lhs, double rhs, std::string note = {}) {
    InequalityRow r;
    r.tag = std::move(tag);
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = rhs != 0 ? lhs / rhs : 0.0;
    r.note = std::move(note);
    return r;
}

std::int64_t sphere_parameter(const PointSet& A, const CheckOptions& opts, const std::string& tag) {
    if (opts.m) return *opts.m;
    if (A.m()) return *A.m();
    // Points of a sphere subset share their norm.
    if (!A.empty()) {
        const auto n2 = A[0].norm2();
        bool same = std::all_of(A.begin(), A.end(), [&](const Point& p) { return p.norm2() == n2; });
        if (same) return static_cast<std::int64_t>(n2);
    }
    throw DomainError(tag + " needs the sphere parameter m");
}

}  // namespace

std::vector<InequalityRow> check_inequalities(const PointSet& A, const std::vector<std::string>& tags,
                                              const CheckOptions& opts) {
    static const std::vector<std::string> known{"floma", "sio2", "iter3d", "zee11", "kz2", "trives", "lowerbd"};
    for (const auto& t : tags)
        if (std::find(known.begin(), known.end(), t) == known.end()) throw DomainError("unknown inequality tag '" + t + "'");
    if (A.empty()) throw DomainError("check_inequalities needs a nonempty set");

    const auto N = static_cast<std::uint64_t>(A.size());
    const double n = static_cast<double>(N);
    std::map<std::pair<int, int>, BigInt> energies;
    auto E = [&](int s, int k) -> const BigInt& {
        auto key = std::make_pair(s, k);
        auto it = energies.find(key);
        if (it == energies.end()) it = energies.emplace(key, energy(A, s, k, opts.budget).value).first;
        return it->second;
    };
    std::optional<RepFn> r2_cache;
    auto r2 = [&]() -> const RepFn& {
        if (!r2_cache) r2_cache = rep_fn(A, 2, opts.budget);
        return *r2_cache;
    };

    std::vector<InequalityRow> out;
    for (const auto& tag : tags) {
        if (tag == "lowerbd") {
            for (int s : {2, 3}) {
                const PointSet sA = sumset(A, s, 0, opts.budget);
                const BigInt lhs = E(s, 2) * sA.size();  // E |sA| >= |A|^{2s}
                const BigInt rhs = big_pow(N, static_cast<unsigned>(2 * s));
                auto row = ratio_row("lowerbd[s=" + std::to_string(s) + "]", to_double(E(s, 2)),
                                     to_double(rhs) / static_cast<double>(sA.size()), "E_{s,2} >= |A|^{2s}/|sA|");
                row.asserted = true;
                row.holds = lhs >= rhs;
                out.push_back(row);
            }
        } else if (tag == "sio2") {
            const PointSet d = sumset(A, 2, 1, opts.budget);
            const BigInt& e3 = E(3, 2);
            auto row = ratio_row("sio2", static_cast<double>(d.size()), std::pow(n, 6) / to_double(e3),
                                 "|2A-A| >= |A|^6 / E_{3,2}");
            row.asserted = true;
            row.holds = BigInt(d.size()) * e3 >= big_pow(N, 6);
            out.push_back(row);
            out.push_back(ratio_row("sio2-power", static_cast<double>(d.size()), std::pow(n, 2.0 - 5.0 / 24.0),
                                    "|2A-A| vs |A|^{2-5/24}"));
        } else if (tag == "floma") {
            const double sup = static_cast<double>(sup_rep(r2()).count);
            out.push_back(ratio_row("floma-e2", to_double(E(2, 2)), std::pow(n, 7.0 / 3.0), "E_{2,2} vs |A|^{7/3}"));
            out.push_back(ratio_row("floma-e3", to_double(E(2, 3)), std::pow(n, 8.0 / 3.0) + n * sup * sup,
                                    "E_{2,3} vs |A|^{8/3} + |A| sup r_2^2"));
        } else if (tag == "iter3d") {
            const double rhs = std::pow(n, 3.0) * std::cbrt(to_double(E(2, 2))) + std::pow(n, 3.0);
            out.push_back(ratio_row("iter3d[s=3]", to_double(E(3, 2)), rhs,
                                    "E_{3,2} vs |A|^{(4s-3)/3} E_{2,2}^{1/3} + |A|^{2s-3}"));
        } else if (tag == "zee11") {
            const double rhs = std::pow(n, 29.0 / 8.0) * std::pow(to_double(E(2, 2)), 0.25) + std::pow(n, 4.0);
            out.push_back(ratio_row("zee11[s=3]", to_double(E(3, 2)), rhs,
                                    "E_{3,2} vs |A|^{(12s-7)/8} E_{2,2}^{1/4} + |A|^{2s-2}"));
        } else if (tag == "kz2") {
            for (const auto& level : level_sets(r2())) {
                const double tau = std::ldexp(1.0, level.j);
                const double p = static_cast<double>(level.size);
                const double rhs = std::pow(p, 6.0 / 7.0) * std::pow(n, 4.0 / 7.0) + p + n;
                out.push_back(ratio_row("kz2[j=" + std::to_string(level.j) + "]", p * tau, rhs,
                                        "|P_tau| tau vs |P_tau|^{6/7}|A|^{4/7} + |P_tau| + |A|"));
            }
        } else if (tag == "trives") {
            if (A.dim() != 3 || A.family() == Family::paraboloid) throw DomainError("trives applies to subsets of S_{3,m}");
            const auto m = sphere_parameter(A, opts, tag);
            const double lhs = static_cast<double>(max_nonzero_rep2(r2()));
            const double rhs = std::pow(static_cast<double>(m), opts.caps.nonzero_rep_exponent);
            auto row = ratio_row("trives", lhs, rhs, "max_{n!=0} r_2(n) <= m^" + std::to_string(opts.caps.nonzero_rep_exponent));
            row.asserted = true;
            row.holds = lhs <= rhs;
            out.push_back(row);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scans

void validate(const ScanConfig& cfg) {
    if (cfg.m_min < 1 || cfg.m_max < cfg.m_min) throw DomainError("scan: empty or invalid m-range");
    if (cfg.m_stride < 1) throw DomainError("scan: stride must be positive");
    if (cfg.s_list.empty() || cfg.k_list.empty()) throw DomainError("scan: s and k lists must be nonempty");
    for (int s : cfg.s_list)
        if (s < 1) throw DomainError("scan: s values must be >= 1");
    for (int k : cfg.k_list)
        if (k < 2) throw DomainError("scan: k values must be >= 2");
    if (!(cfg.density > 0.0 && cfg.density <= 1.0)) throw DomainError("scan: density must lie in (0, 1]");
    if (cfg.budget.max_support == 0 || cfg.budget.dense_cells == 0 || cfg.budget.max_tuples == 0 || cfg.budget.max_grid == 0)
        throw DomainError("scan: budgets must be positive");
    if (cfg.slice_count < 1) throw DomainError("scan: slice count must be positive");
}

namespace {

std::vector<std::int64_t> scan_values(const ScanConfig& cfg) {
    std::vector<std::int64_t> ms;
    for (auto m = cfg.m_min; m <= cfg.m_max; m += cfg.m_stride) {
        if (cfg.odd_only && m % 2 == 0) continue;
        if (cfg.admissible_only && !legendre_admissible(m)) continue;
        ms.push_back(m);
    }
    return ms;
}

std::string base_family(const ScanConfig& cfg) {
    switch (cfg.family) {
        case ScanFamily::random_subset:
        case ScanFamily::slice_union: return cfg.base;
        default: return to_string(cfg.family);
    }
}

PointSet build_instance(const ScanConfig& cfg, std::int64_t m) {
    const std::string base = base_family(cfg);
    PointSet S = build_surface(base, base == "sphere3" ? 3 : 4, m);
    if (cfg.family == ScanFamily::slice_union) S = slice_union(S, cfg.slice_count);
    if (cfg.family == ScanFamily::random_subset || cfg.density < 1.0) S = random_subset(S, cfg.density, cfg.seed);
    return S;
}

struct Notes {
    std::string text;
    bool failed = false;
    void add(const std::string& kv) { text += (text.empty() ? "" : ";") + kv; }
    void fail(const std::string& what) {
        failed = true;
        add("FAIL:" + what);
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// Shared per-instance quantities, computed once for all (s, k) rows.
struct InstanceExtras {
    std::optional<std::uint64_t> two_a_minus_a;
    std::optional<BigInt> e32;
    std::optional<std::uint64_t> peels, threshold;
    Notes notes;
};

InstanceExtras instance_extras(const ScanConfig& cfg, const PointSet& A, std::int64_t m) {
    InstanceExtras ex;
    const auto N = static_cast<std::uint64_t>(A.size());
    if (cfg.family == ScanFamily::slice_union) ex.notes.add("heuristic-family");
    if (A.empty()) return ex;

    if (cfg.two_a_minus_a) {
        try {
            ex.two_a_minus_a = sumset(A, 2, 1, cfg.budget).size();
            ex.e32 = energy(A, 3, 2, cfg.budget).value;
            // |2A - A| E_{3,2} >= |A|^6
            if (BigInt(*ex.two_a_minus_a) * *ex.e32 >= big_pow(N, 6)) ex.notes.add("sio2-cs=ok");
            else ex.notes.fail("sio2-cs");
            ex.notes.add("sio2-power-ratio=" + fmt(static_cast<double>(*ex.two_a_minus_a) /
                                                   std::pow(static_cast<double>(N), 2.0 - 5.0 / 24.0)));
        } catch (const BudgetError& e) {
            ex.notes.add("budget:2A-A");
        }
    }

    const bool on_sphere3 = base_family(cfg) == "sphere3";
    if (on_sphere3) {
        const RepFn r2 = rep_fn(A, 2, cfg.budget);
        const double lhs = static_cast<double>(max_nonzero_rep2(r2));
        const double cap = std::pow(static_cast<double>(m), cfg.caps.nonzero_rep_exponent);
        ex.notes.add("trives=" + fmt(lhs) + "/" + fmt(cap));
        if (lhs > cap) ex.notes.fail("trives");
    }

    if (cfg.decompose && A.dim() == 4) {
        const PointSet cell = restrict_to_orthant(A, OrthantPattern::all_positive(4)).as_derived();
        ex.notes.add("decomposed=positive-orthant:" + std::to_string(cell.size()));
        if (!cell.empty()) {
            const auto T = threshold_for(cell.size(), cfg.delta);
            const Decomposition D = xy_decompose(cell, T, cfg.delta);
            ex.threshold = T;
            ex.peels = D.peels.size();
            const auto verdict = verify_decomposition(cell, D);
            if (!verdict.ok) ex.notes.fail("decomposition:" + verdict.clause);
            if (!within_peel_bound(D.peels.size(), cell.size(), cfg.delta)) ex.notes.fail("peel-bound");
            if (!D.peels.empty()) {
                const PointSet Y = D.Y();
                const double ratio = to_double(energy(Y, 2, 2, cfg.budget).value) /
                                     (static_cast<double>(D.peels.size()) * std::pow(static_cast<double>(Y.size()), 2));
                ex.notes.add("y-energy-ratio=" + fmt(ratio));
                if (!(ratio < cfg.caps.y_energy_ratio)) ex.notes.fail("y-energy-ratio");
            }
        }
    }
    return ex;
}

std::vector<ScanRow> scan_instance(const ScanConfig& cfg, std::int64_t m) {
    std::vector<ScanRow> rows;
    ScanRow proto;
    proto.family = to_string(cfg.family);
    proto.m = m;
    proto.seed = cfg.seed;
    proto.density = cfg.density;

    PointSet A;
    try {
        A = build_instance(cfg, m);
    } catch (const BudgetError& e) {
        proto.notes = std::string("budget:instance");
        rows.push_back(proto);
        return rows;
    }
    proto.d = A.dim();
    proto.size_a = A.size();
    InstanceExtras ex = instance_extras(cfg, A, m);
    proto.two_a_minus_a = ex.two_a_minus_a;
    proto.peels = ex.peels;
    proto.threshold = ex.threshold;
    const auto N = static_cast<std::uint64_t>(A.size());

    for (int s : cfg.s_list) {
        std::optional<RepFn> r;
        std::string budget_note;
        if (!A.empty()) {
            try {
                r = rep_fn(A, s, cfg.budget);
            } catch (const BudgetError& e) {
                budget_note = "budget:rep_fn";
            }
        }
        for (int k : cfg.k_list) {
            ScanRow row = proto;
            row.s = s;
            row.k = k;
            Notes notes = ex.notes;
            if (!budget_note.empty()) notes.add(budget_note);
            if (A.empty()) {
                row.energy = "0";
            } else if (r) {
                const BigInt e = power_sum(*r, k);
                row.energy = e.str();
                row.sup_rep = sup_rep(*r).count;
                row.sumset_size = r->size();
                if (k == 2) {
                    if (e >= big_pow(N, static_cast<unsigned>(s))) notes.add("diag=ok");
                    else notes.fail("diag");
                    // E_{s,2} |sA| >= |A|^{2s}
                    if (e * r->size() >= big_pow(N, static_cast<unsigned>(2 * s))) notes.add("cs=ok");
                    else notes.fail("cs");
                    if (cfg.dft_check && A.size() <= 64) {
                        try {
                            const auto dft = moment_via_dft(A, s, cfg.budget);
                            if (dft.value.value == e) notes.add("dft=ok");
                            else notes.fail("dft");
                        } catch (const BudgetError&) {
                            notes.add("dft=skipped");
                        }
                    }
                    if (cfg.family == ScanFamily::paraboloid4 && s == 2) {
                        const double ratio = to_double(e) / std::pow(static_cast<double>(N), 7.0 / 3.0);
                        notes.add("paraboloid-ratio=" + fmt(ratio));
                        if (ratio < cfg.caps.paraboloid_ratio_lo || ratio > cfg.caps.paraboloid_ratio_hi)
                            notes.fail("paraboloid-ratio");
                    }
                }
                if (s == 2) {
                    std::string prof;
                    double kz2_max = 0;
                    for (const auto& level : level_sets(*r)) {
                        prof += (prof.empty() ? "" : "|") + std::to_string(level.j) + ":" + std::to_string(level.size);
                        const double p = static_cast<double>(level.size);
                        const double rhs = std::pow(p, 6.0 / 7.0) * std::pow(static_cast<double>(N), 4.0 / 7.0) + p +
                                           static_cast<double>(N);
                        kz2_max = std::max(kz2_max, p * std::ldexp(1.0, level.j) / rhs);
                    }
                    notes.add("levels=" + prof);
                    if (k == 2) notes.add("kz2-max-ratio=" + fmt(kz2_max));
                }
            }
            row.notes = notes.text;
            row.failed = notes.failed;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

std::vector<ScanRow> run_scan(const ScanConfig& cfg) {
    validate(cfg);
    const auto ms = scan_values(cfg);
    std::vector<std::vector<ScanRow>> per(ms.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < ms.size();) {
            try {
                per[i] = scan_instance(cfg, ms[i]);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs) : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, ms.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    std::vector<ScanRow> rows;
    for (auto& chunk : per) rows.insert(rows.end(), std::make_move_iterator(chunk.begin()), std::make_move_iterator(chunk.end()));
    return rows;
}

namespace {

template <class T>
std::string opt(const std::optional<T>& v) {
    return v ? std::to_string(*v) : std::string();
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.family << ',' << r.d << ',' << r.m << ',' << r.seed << ',' << fmt(r.density) << ',' << r.size_a << ','
            << r.s << ',' << r.k << ',' << r.energy << ',' << r.sup_rep << ',' << r.sumset_size << ','
            << opt(r.two_a_minus_a) << ',' << opt(r.peels) << ',' << opt(r.threshold) << ',' << r.notes << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<ScanRow>& rows) {
    auto j = nlohmann::json::array();
    auto optj = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    for (const auto& r : rows) {
        j.push_back({{"family", r.family},
                     {"d", r.d},
                     {"m", r.m},
                     {"seed", r.seed},
                     {"density", r.density},
                     {"sizeA", r.size_a},
                     {"s", r.s},
                     {"k", r.k},
                     {"energy", r.energy},
                     {"sup_rep", r.sup_rep},
                     {"sumset_size", r.sumset_size},
                     {"two_a_minus_a", optj(r.two_a_minus_a)},
                     {"peels", optj(r.peels)},
                     {"threshold", optj(r.threshold)},
                     {"notes", r.notes}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace lpe
