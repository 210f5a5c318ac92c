#include <doctest.h>

#include <random>
#include <sstream>

#include "lpe/energy.hpp"
#include "lpe/geometry.hpp"
#include "lpe/lattice.hpp"
#include "oracles.hpp"

using namespace lpe;

TEST_CASE("Hyperplane canonical form") {
    const auto h = Hyperplane::make({-4, 0, 2}, -6);
    CHECK(h.normal() == Point{2, 0, -1});
    CHECK(h.rhs() == 3);
    CHECK(Hyperplane::make({0, -3, 6}, 0) == Hyperplane::make({0, 1, -2}, 0));
    CHECK(h.to_string() == "plane 2 0 -1 3");
    CHECK(h.contains(Point{2, 1, 1}));
    CHECK_FALSE(h.contains(Point{0, 0, 0}));
    CHECK(h.contains(RationalPoint::make({3, 0, 0}, 2)));
    CHECK_THROWS_AS(Hyperplane::make({0, 0, 0}, 1), DomainError);
}

TEST_CASE("bisector_hyperplane") {
    CHECK(bisector_hyperplane({2, 0, 0}) == Hyperplane::make({1, 0, 0}, 1));
    CHECK(bisector_hyperplane({1, 1, 0}) == Hyperplane::make({1, 1, 0}, 1));
    CHECK_THROWS_AS(bisector_hyperplane({0, 0, 0, 0}), DomainError);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        Point n(4);
        for (int j = 0; j < 4; ++j) n[j] = static_cast<std::int64_t>(rng() % 41) - 20;
        if (n.is_zero()) continue;
        CHECK(bisector_hyperplane(n).contains(RationalPoint::make(n, 2)));
    }
}

TEST_CASE("slice") {
    const auto S = enumerate_sphere(3, 1);
    const auto c = slice(S, {1, 1, 0});
    CHECK(c == PointSet::from_points(3, {Point{1, 0, 0}, Point{0, 1, 0}}));
    CHECK(slice(S, {0, 0, 0}) == S);
    CHECK(slice(S, {3, 0, 0}).empty());

    const auto A = random_subset(enumerate_sphere(3, 41), 0.6, 9).as_derived();
    const auto r = rep_fn(A, 2);
    r.for_each([&](const Point& n, std::uint64_t cnt) {
        const auto C = slice(A, n);
        CHECK(C.size() == cnt);
        if (!n.is_zero()) {
            const auto H = bisector_hyperplane(n);
            for (const auto& p : C) CHECK(H.contains(p));
        }
    });
}

TEST_CASE("intersect_translates") {
    for (std::int64_t m : {2, 5, 9}) {
        const auto P = enumerate_paraboloid(m);
        const auto I = intersect_translates(P, {{0, 0, 0, 0}, {1, 0, 0, 3}, {0, 1, 0, 3}});
        REQUIRE(I.size() == static_cast<std::size_t>(2 * m + 1));
        for (std::int64_t n = -m; n <= m; ++n) CHECK(I.contains({2, 2, n, 8 + n * n}));
    }
    const auto S = enumerate_sphere(4, 15);
    CHECK(intersect_translates(S, {{0, 0, 0, 0}}) == S);
    const auto two = intersect_translates(S, {{0, 0, 0, 0}, {2, 0, 0, 0}});
    for (const auto& p : two) {
        CHECK(p.norm2() == 15);
        CHECK((p - Point{2, 0, 0, 0}).norm2() == 15);
    }
    CHECK_THROWS_AS(intersect_translates(S, {{1, 0, 0, 0}, {1, 0, 0, 0}}), DomainError);
}

TEST_CASE("implicit paraboloid intersection matches the enumerated one") {
    std::mt19937_64 rng(5);
    for (std::int64_t m : {1, 2, 4}) {
        const auto P = enumerate_paraboloid(m);
        for (int trial = 0; trial < 150; ++trial) {
            std::vector<Point> shifts{{0, 0, 0, 0}};
            const int count = 1 + static_cast<int>(rng() % 3);
            while (static_cast<int>(shifts.size()) < count + 1) {
                // Differences of paraboloid points keep the intersections nonempty most of the time.
                const Point t = P[rng() % P.size()] - P[rng() % P.size()];
                if (std::find(shifts.begin(), shifts.end(), t) == shifts.end()) shifts.push_back(t);
            }
            if (trial % 2) shifts.front() = P[rng() % P.size()];
            std::sort(shifts.begin(), shifts.end());
            if (std::adjacent_find(shifts.begin(), shifts.end()) != shifts.end()) continue;
            CHECK(intersect_paraboloid_translates(m, shifts) == intersect_translates(P, shifts));
        }
    }
    CHECK(intersect_paraboloid_translates(500, {{0, 0, 0, 0}, {1, 0, 0, 3}, {0, 1, 0, 3}}).size() == 1001);
    CHECK_THROWS_AS(intersect_paraboloid_translates(3, {{0, 0, 0, 0}, {0, 0, 0, 0}}), DomainError);
}

TEST_CASE("incidences") {
    const auto S = enumerate_sphere(3, 1);
    const std::vector<Variety> one{Hyperplane::make({1, 0, 0}, 1)};
    CHECK(incidences(S, one).total == 1);

    const auto r2 = rep_fn(S, 2);
    std::vector<Variety> V;
    std::vector<std::uint64_t> w;
    r2.for_each([&](const Point& n, std::uint64_t c) {
        if (n.is_zero()) return;
        V.push_back(bisector_hyperplane(n));
        w.push_back(c);
    });
    // Every nonzero pair sum puts both summands on H_n: total = E_{2,2} - r_2(0)^2.
    CHECK(incidences(S, V, {nullptr, &w}).total == 54);

    const std::vector<std::uint64_t> ones(V.size(), 1);
    const auto r1 = rep_fn(S, 1);
    CHECK(incidences(S, V).total == incidences(S, V, {&r1, &ones}).total);

    const std::vector<std::uint64_t> short_w(1, 1);
    CHECK_THROWS_AS(incidences(S, V, {nullptr, &short_w}), DomainError);
    const auto r1_other = rep_fn(enumerate_sphere(3, 2), 1);
    CHECK_THROWS_AS(incidences(S, V, {&r1_other, nullptr}), DomainError);
}

TEST_CASE("weighted incidences bound E_{s,2} from above") {
    // P = (s-1)A with w = r_{s-1}, V = {v - S : v in sA} with w' = r_s.
    for (int s : {2, 3}) {
        const auto S = enumerate_sphere(3, 5);
        for (double density : {1.0, 0.5}) {
            const auto A = density < 1.0 ? random_subset(S, density, 4).as_derived() : S;
            const auto w = rep_fn(A, s - 1);
            const auto rs = rep_fn(A, s);
            const auto P = sumset(A, s - 1, 0);
            std::vector<Variety> V;
            std::vector<std::uint64_t> wv;
            rs.for_each([&](const Point& v, std::uint64_t c) {
                V.push_back(SphereTranslate{v, 5});  // v - S = v + S for symmetric S
                wv.push_back(c);
            });
            const auto total = incidences(P, V, {&w, &wv}).total;
            const auto E = energy(A, s, 2).value;
            CHECK(total >= E);
            if (density == 1.0) CHECK(total == E);
        }
    }
}

TEST_CASE("kst_witness") {
    const auto S = enumerate_sphere(3, 6);
    std::vector<Variety> V;
    for (const auto& x : S) V.push_back(SphereTranslate{x, 6});

    const auto one = kst_witness(S, V, 1);
    CHECK(one.t_max == incidences(S, V).kst_max);
    CHECK_FALSE(one.sampled);

    const auto two = kst_witness(S, V, 2);
    REQUIRE(two.witness.size() == 2);
    CHECK(two.witness_varieties.size() == two.t_max);
    for (auto i : two.witness_varieties)
        for (const auto& p : two.witness) CHECK(contains(V[i], p));
    CHECK(two.t_max <= one.t_max);

    CHECK(kst_witness(S, {}, 2).t_max == 0);

    KstOptions tiny;
    tiny.max_subsets = 10;
    CHECK_THROWS_AS(kst_witness(S, V, 2, tiny), BudgetError);
    tiny.allow_sampling = true;
    tiny.samples = 50;
    const auto sampled = kst_witness(S, V, 2, tiny);
    CHECK(sampled.sampled);
    CHECK(sampled.t_max <= two.t_max);
}

TEST_CASE("duality") {
    CHECK(dual_of_plane(Hyperplane::make({1, 0, 0, 0}, 1)) == RationalPoint::make({1, 0, 0, 0}, 1));
    CHECK(dual_of_plane(bisector_hyperplane({2, 0, 0, 0})) == RationalPoint::make({1, 0, 0, 0}, 1));
    CHECK(dual_of_plane(Hyperplane::make({3, 0, 6}, 4)) == RationalPoint::make({3, 0, 6}, 4));

    const auto h = Hyperplane::make({2, -1, 3}, 5);
    CHECK(dual_of_point(dual_of_plane(h)) == h);
    CHECK_THROWS_AS(dual_of_plane(Hyperplane::make({1, 1, 0}, 0)), DomainError);
    CHECK_THROWS_AS(dual_of_point(RationalPoint::make({0, 0, 0}, 1)), DomainError);

    std::mt19937_64 rng(17);
    std::vector<Point> pts;
    std::vector<Hyperplane> planes;
    for (int i = 0; i < 60; ++i) {
        Point a(3);
        do
            for (int j = 0; j < 3; ++j) a[j] = static_cast<std::int64_t>(rng() % 7) - 3;
        while (a.is_zero());
        pts.push_back(a);
    }
    // Plenty of planes through the sampled points so both incidence outcomes occur.
    for (int i = 0; i < 60; ++i) {
        Point n(3);
        do
            for (int j = 0; j < 3; ++j) n[j] = static_cast<std::int64_t>(rng() % 7) - 3;
        while (n.is_zero());
        const auto b = static_cast<std::int64_t>(dot(n, pts[static_cast<std::size_t>(i)]));
        if (b == 0) continue;
        planes.push_back(Hyperplane::make(n, b));
    }
    const auto D = dualize(pts, planes);
    int hits = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < planes.size(); ++j) {
            const bool primal = planes[j].contains(pts[i]);
            hits += primal;
            CHECK(primal == D.point_duals[i].contains(D.plane_duals[j]));
        }
    CHECK(hits > 0);
}

TEST_CASE("variety file round trip") {
    const std::vector<Variety> V{Hyperplane::make({1, 2, 3}, 4), SphereTranslate{{1, -1, 0}, 3},
                                 Hyperplane::make({0, 0, 1, 0}, 0)};
    std::stringstream ss;
    write_varieties(ss, V);
    CHECK(read_varieties(ss) == V);
    std::istringstream bad("plane 1 2\n");
    CHECK_THROWS_AS(read_varieties(bad), DomainError);
    std::istringstream unknown("cone 1 2 3\n");
    CHECK_THROWS_AS(read_varieties(unknown), DomainError);
}
