#include "lpe/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpe/decompose.hpp"
#include "lpe/energy.hpp"
#include "lpe/geometry.hpp"
#include "lpe/harness.hpp"
#include "lpe/lattice.hpp"

namespace lpe {

namespace {

struct Common {
    int d = 3;
    std::int64_t m = 1;
    std::string family = "sphere";
    std::string in;
    std::string out;
    std::string format = "csv";
    double density = 1.0;
    std::uint64_t seed = 1;
    Budget budget;
};

void add_budget_flags(CLI::App* app, Budget& b) {
    app->add_option("--budget-support", b.max_support, "max keys in a stored representation function or sumset");
    app->add_option("--budget-dense", b.dense_cells, "max cells in one convolution scratch slab");
    app->add_option("--budget-tuples", b.max_tuples, "max tuples for brute-force enumeration");
    app->add_option("--budget-grid", b.max_grid, "max DFT grid points");
}

void add_set_flags(CLI::App* app, Common& c) {
    app->add_option("--d", c.d, "dimension (3 or 4)");
    app->add_option("--m", c.m, "sphere norm / paraboloid box size");
    app->add_option("--family", c.family, "sphere | paraboloid | sphere3 | sphere4 | paraboloid4");
    app->add_option("--in", c.in, "read the point set from a file instead of enumerating");
    app->add_option("--density", c.density, "keep a seeded random subset of this density");
    app->add_option("--seed", c.seed, "seed for random subsets");
}

/// The point set selected by --in or by --family/--d/--m, thinned by --density.
PointSet load_set(const Common& c) {
    PointSet A;
    if (!c.in.empty()) {
        std::ifstream f(c.in);
        if (!f) throw DomainError("cannot open " + c.in);
        A = read_point_set(f);
    } else {
        A = build_surface(c.family, c.d, c.m);
    }
    if (c.density < 1.0) A = random_subset(A, c.density, c.seed);
    return A;
}

/// "(0,0,0,0);(1,0,0,3)" -> points
std::vector<Point> parse_points(const std::string& text) {
    std::vector<Point> pts;
    static const std::regex tuple(R"(\(([^()]*)\))");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), tuple); it != std::sregex_iterator(); ++it) {
        std::vector<std::int64_t> xs;
        std::stringstream ss((*it)[1].str());
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                xs.push_back(std::stoll(tok, &used));
                if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw DomainError("bad coordinate '" + tok + "' in point list");
            }
        }
        pts.emplace_back(std::span<const std::int64_t>(xs));
    }
    if (pts.empty()) throw DomainError("no points found in '" + text + "'");
    return pts;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stoi(tok));
    return v;
}

std::ostream& sink(const std::string& path, std::ofstream& file, std::ostream& fallback) {
    if (path.empty()) return fallback;
    file.open(path);
    if (!file) throw DomainError("cannot write " + path);
    return file;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact additive energies and incidences for lattice points on spheres and paraboloids", "lpe"};
    app.require_subcommand(1);
    Common c;

    auto* enumerate = app.add_subcommand("enumerate", "list the points of a sphere or paraboloid");
    add_set_flags(enumerate, c);
    enumerate->add_option("--out", c.out, "write the point set here");

    int s = 2, k = 2;
    auto* en = app.add_subcommand("energy", "print E_{s,k}(A)");
    add_set_flags(en, c);
    en->add_option("--s", s, "fold count");
    en->add_option("--k", k, "moment");
    add_budget_flags(en, c.budget);

    std::optional<std::uint64_t> threshold;
    std::string delta_text = "1/1392";
    bool positive_orthant = false;
    auto* dec = app.add_subcommand("decompose", "greedy X/Y decomposition with verification (JSON)");
    add_set_flags(dec, c);
    dec->add_option("--threshold", threshold, "peel threshold (default ceil(N^{2/3+delta}))");
    dec->add_option("--delta", delta_text, "rational delta p/q");
    dec->add_flag("--positive-orthant", positive_orthant, "restrict to the all-positive cell first");
    dec->add_option("--out", c.out, "write the JSON dump here");

    std::string shifts_text;
    auto* inter = app.add_subcommand("intersect", "intersect translates of a surface");
    add_set_flags(inter, c);
    inter->add_option("--shifts", shifts_text, "shift list, e.g. \"(0,0,0,0);(1,0,0,3)\"")->required();

    std::string points_file, varieties_file;
    int kst_s = 0;
    bool sampling = false;
    auto* inc = app.add_subcommand("incidences", "count point-variety incidences");
    inc->add_option("--points", points_file, "point-set file")->required();
    inc->add_option("--varieties", varieties_file, "variety list file")->required();
    inc->add_option("--kst", kst_s, "also report the K_{s,t} witness for this s");
    inc->add_flag("--sampling", sampling, "allow sampled K_{s,t} search above the exhaustive budget");
    inc->add_option("--seed", c.seed, "sampling seed");

    ScanConfig scan_cfg;
    std::string scan_family = "sphere4", s_list = "2", k_list = "2";
    std::int64_t m_min = 1, m_max = 1, stride = 1;
    auto* scan = app.add_subcommand("scan", "scan a family over a range of m");
    scan->add_option("--family", scan_family, "sphere3 | sphere4 | paraboloid4 | random-subset | slice-union");
    scan->add_option("--base", scan_cfg.base, "surface under random-subset / slice-union");
    scan->add_option("--m-min", m_min)->required();
    scan->add_option("--m-max", m_max)->required();
    scan->add_option("--stride", stride);
    scan->add_flag("--odd", scan_cfg.odd_only, "odd m only");
    scan->add_flag("--admissible", scan_cfg.admissible_only, "skip m of the form 4^a(8b+7)");
    scan->add_option("--s", s_list, "comma-separated fold counts");
    scan->add_option("--k", k_list, "comma-separated moments");
    scan->add_option("--density", scan_cfg.density);
    scan->add_option("--seed", scan_cfg.seed);
    scan->add_option("--slices", scan_cfg.slice_count, "slices per slice-union instance");
    scan->add_flag("--decompose", scan_cfg.decompose, "run the X/Y decomposition on the positive cell");
    scan->add_option("--delta", delta_text, "rational delta p/q");
    scan->add_option("--jobs", scan_cfg.jobs);
    scan->add_option("--trives-exponent", scan_cfg.caps.nonzero_rep_exponent, "cap exponent e in max_{n!=0} r_2 <= m^e");
    scan->add_option("--y-energy-cap", scan_cfg.caps.y_energy_ratio, "cap on E_{2,2}(Y) / (r |Y|^2)");
    scan->add_option("--paraboloid-ratio-lo", scan_cfg.caps.paraboloid_ratio_lo);
    scan->add_option("--paraboloid-ratio-hi", scan_cfg.caps.paraboloid_ratio_hi);
    scan->add_option("--out", c.out);
    scan->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}));
    add_budget_flags(scan, scan_cfg.budget);

    auto* dft = app.add_subcommand("dft-check", "compare E_{s,2} with the DFT moment");
    add_set_flags(dft, c);
    dft->add_option("--s", s, "fold count");
    add_budget_flags(dft, c.budget);

    std::string tags;
    double trives_exp = 0.49;
    auto* check = app.add_subcommand("check", "two-sided inequality ratio report");
    add_set_flags(check, c);
    check->add_option("--tags", tags, "comma-separated subset of floma,sio2,iter3d,zee11,kz2,trives,lowerbd (default: all that apply)");
    check->add_option("--trives-exponent", trives_exp);
    add_budget_flags(check, c.budget);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        std::ofstream file;
        if (*enumerate) {
            const PointSet A = load_set(c);
            write_point_set(sink(c.out, file, out), A);
            return 0;
        }
        if (*en) {
            out << energy(load_set(c), s, k, c.budget).to_string() << '\n';
            return 0;
        }
        if (*dec) {
            PointSet A = load_set(c);
            if (positive_orthant) A = restrict_to_orthant(A, OrthantPattern::all_positive(A.dim()));
            A = A.as_derived();
            const Rational delta = Rational::parse(delta_text);
            const auto T = threshold.value_or(threshold_for(A.size(), delta));
            const Decomposition D = xy_decompose(A, T, delta);
            const VerifyReport verdict = verify_decomposition(A, D);
            nlohmann::json j;
            j["threshold"] = D.threshold;
            j["delta"] = delta.to_string();
            j["N"] = D.N;
            j["X"] = D.X.size();
            j["peels"] = nlohmann::json::array();
            for (const auto& p : D.peels) j["peels"].push_back({{"n", p.n.to_string()}, {"size", p.slice.size()}});
            j["verification"] = verdict.ok ? "pass" : "fail:" + verdict.clause;
            sink(c.out, file, out) << j.dump(2) << '\n';
            return verdict.ok ? 0 : 1;
        }
        if (*inter) {
            const bool implicit = c.in.empty() && c.density >= 1.0 && (c.family == "paraboloid4" || c.family == "paraboloid");
            const PointSet I = implicit ? intersect_paraboloid_translates(c.m, parse_points(shifts_text))
                                        : intersect_translates(load_set(c), parse_points(shifts_text));
            out << "count " << I.size() << '\n';
            for (const auto& p : I) out << p.to_string() << '\n';
            return 0;
        }
        if (*inc) {
            std::ifstream pf(points_file), vf(varieties_file);
            if (!pf) throw DomainError("cannot open " + points_file);
            if (!vf) throw DomainError("cannot open " + varieties_file);
            const PointSet P = read_point_set(pf);
            const auto V = read_varieties(vf);
            const auto rep = incidences(P, V);
            out << "total " << rep.total.str() << '\n' << "max_degree " << rep.kst_max << '\n';
            if (kst_s > 0) {
                KstOptions opts;
                opts.allow_sampling = sampling;
                opts.seed = c.seed;
                const auto w = kst_witness(P, V, kst_s, opts);
                out << "kst s=" << kst_s << " t_max " << w.t_max << (w.sampled ? " (sampled)" : " (exhaustive)") << '\n';
                for (const auto& p : w.witness) out << "witness " << p.to_string() << '\n';
            }
            return 0;
        }
        if (*scan) {
            scan_cfg.family = scan_family_from_string(scan_family);
            scan_cfg.m_min = m_min;
            scan_cfg.m_max = m_max;
            scan_cfg.m_stride = stride;
            scan_cfg.s_list = parse_int_list(s_list);
            scan_cfg.k_list = parse_int_list(k_list);
            scan_cfg.delta = Rational::parse(delta_text);
            const auto rows = run_scan(scan_cfg);
            auto& os = sink(c.out, file, out);
            if (c.format == "json") write_json(os, rows);
            else write_csv(os, rows);
            const bool failed = std::any_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.failed; });
            if (failed) err << "scan: at least one asserted check failed (see FAIL: notes)\n";
            return failed ? 1 : 0;
        }
        if (*dft) {
            const PointSet A = load_set(c);
            const auto moment = moment_via_dft(A, s, c.budget);
            const auto exact = energy(A, s, 2, c.budget);
            out << "dft " << moment.value.to_string() << " residual " << moment.residual << " modulus " << moment.modulus
                << '\n'
                << "energy " << exact.to_string() << '\n';
            const bool ok = moment.value == exact;
            out << (ok ? "match" : "MISMATCH") << '\n';
            return ok ? 0 : 1;
        }
        if (*check) {
            CheckOptions opts;
            opts.budget = c.budget;
            opts.caps.nonzero_rep_exponent = trives_exp;
            const PointSet A = load_set(c);
            if (tags.empty()) tags = A.dim() == 3 && A.family() != Family::paraboloid ? "lowerbd,sio2,floma,iter3d,zee11,kz2,trives"
                                                                                      : "lowerbd,sio2,floma,iter3d,zee11,kz2";
            std::vector<std::string> tag_list;
            std::stringstream ss(tags);
            for (std::string t; std::getline(ss, t, ',');) tag_list.push_back(t);
            const auto rows = check_inequalities(A, tag_list, opts);
            bool ok = true;
            out << "tag,lhs,rhs,ratio,asserted,holds,note\n";
            for (const auto& r : rows) {
                out << r.tag << ',' << r.lhs << ',' << r.rhs << ',' << r.ratio << ',' << (r.asserted ? "yes" : "no") << ','
                    << (r.holds ? "yes" : "no") << ',' << r.note << '\n';
                ok = ok && (!r.asserted || r.holds);
            }
            return ok ? 0 : 1;
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace lpe
