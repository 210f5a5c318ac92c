#include <doctest.h>

#include <random>
#include <set>

#include "lpe/energy.hpp"
#include "lpe/lattice.hpp"
#include "oracles.hpp"

using namespace lpe;

namespace {

PointSet transform(const PointSet& A, bool negate, const std::array<int, 4>& perm) {
    std::vector<Point> out;
    for (const auto& p : A) {
        Point q(A.dim());
        for (int i = 0; i < A.dim(); ++i) q[i] = negate ? -p[perm[static_cast<std::size_t>(i)]] : p[perm[static_cast<std::size_t>(i)]];
        out.push_back(q);
    }
    return PointSet::from_points(A.dim(), std::move(out));
}

}  // namespace

TEST_CASE("rep_fn on S_{3,1}") {
    const auto S = enumerate_sphere(3, 1);
    const auto r = rep_fn(S, 2);
    CHECK(r.at({0, 0, 0}) == 6);
    CHECK(r.at({2, 0, 0}) == 1);
    CHECK(r.at({1, 1, 0}) == 2);
    CHECK(r.at({3, 0, 0}) == 0);
    CHECK(r.size() == 19);
    CHECK(r.total() == 36);

    const auto table = oracle::pair_table({S.begin(), S.end()});
    r.for_each([&](const Point& n, std::uint64_t c) { CHECK(table.at(n) == c); });
}

TEST_CASE("rep_fn trivial cases") {
    const auto A = enumerate_sphere(3, 9);
    const auto r1 = rep_fn(A, 1);
    CHECK(r1.size() == A.size());
    for (const auto& p : A) CHECK(r1.at(p) == 1);

    const auto single = PointSet::from_points(3, {Point{2, -1, 5}});
    const auto r3 = rep_fn(single, 3);
    REQUIRE(r3.size() == 1);
    CHECK(r3.key(0) == Point{6, -3, 15});
    CHECK(r3.count(0) == 1);

    CHECK(rep_fn(enumerate_sphere(3, 7), 2).empty());
    CHECK_THROWS_AS(rep_fn(A, 0), DomainError);
}

TEST_CASE("rep_fn mass equals |A|^s") {
    for (auto [d, m] : {std::pair{3, 3}, std::pair{3, 26}, std::pair{4, 5}, std::pair{4, 10}})
        for (int s = 1; s <= 4; ++s) {
            const auto A = enumerate_sphere(d, m);
            const auto r = rep_fn(A, s);
            CHECK(r.total() == boost::multiprecision::pow(BigInt(A.size()), static_cast<unsigned>(s)));
            for (auto c : r.counts()) CHECK(c > 0);
            const std::int64_t bound = s * isqrt(m - 1) + s;
            r.for_each([&](const Point& n, std::uint64_t) { CHECK(n.max_abs() <= bound); });
        }
}

TEST_CASE("rep_fn budget") {
    Budget tight;
    tight.max_support = 10;
    CHECK_THROWS_AS(rep_fn(enumerate_sphere(3, 5), 2, tight), BudgetError);
}

TEST_CASE("energy worked values") {
    const auto S = enumerate_sphere(3, 1);
    CHECK(energy(S, 2, 2).value == 90);
    CHECK(energy(S, 2, 3).value == 318);
    CHECK(energy(S, 3, 2).value == 1860);
    CHECK(energy(enumerate_sphere(3, 2), 2, 2).value == 540);
    CHECK(energy(PointSet::from_points(3, {}), 2, 2).value == 0);
    CHECK(energy(S, 1, 2).value == 6);
    CHECK_THROWS_AS(energy(S, 2, 1), DomainError);
    CHECK_THROWS_AS(energy(S, 0, 2), DomainError);
}

TEST_CASE("energy_brute") {
    const auto S = enumerate_sphere(3, 1);
    CHECK(energy_brute(S, 2, 2).value == 90);
    CHECK(energy_brute(PointSet::from_points(3, {}), 3, 2).value == 0);
    const auto pq = PointSet::from_points(3, {Point{1, 2, 3}, Point{0, -1, 4}});
    CHECK(energy_brute(pq, 2, 2).value == 6);
    Budget tight;
    tight.max_tuples = 100;
    CHECK_THROWS_AS(energy_brute(enumerate_sphere(3, 2), 2, 2, tight), BudgetError);
}

TEST_CASE("energy agrees with brute force on random subsets") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = trial % 2 ? 3 : 4;
        const std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 50);
        const auto S = enumerate_sphere(d, m);
        if (S.empty()) continue;
        const auto A = oracle::sample(S, 1 + rng() % 20, rng);
        for (int s = 1; s <= 3; ++s)
            for (int k = 2; k <= 3; ++k) CHECK(energy(A, s, k) == energy_brute(A, s, k));
    }
}

TEST_CASE("energy symmetry and lower bounds") {
    const auto A = random_subset(enumerate_sphere(4, 21), 0.6, 5).as_derived();
    for (int s = 2; s <= 3; ++s) {
        const auto e = energy(A, s, 2).value;
        CHECK(energy(transform(A, true, {0, 1, 2, 3}), s, 2).value == e);
        CHECK(energy(transform(A, false, {2, 0, 3, 1}), s, 2).value == e);
        const BigInt n = A.size();
        CHECK(e >= boost::multiprecision::pow(n, static_cast<unsigned>(s)));
        CHECK(e * sumset(A, s, 0).size() >= boost::multiprecision::pow(n, static_cast<unsigned>(2 * s)));
    }
}

TEST_CASE("energy with a large count switches to wide arithmetic") {
    const auto A = enumerate_sphere(3, 2);
    CHECK(energy(A, 2, 12).value == power_sum(rep_fn(A, 2), 12));
    CHECK(energy(A, 2, 30).value == energy_brute(A, 2, 30, Budget{1 << 26, 1 << 25, ~0ull, 100'000'000}).value);
}

TEST_CASE("sup_rep") {
    const auto S = enumerate_sphere(3, 1);
    const auto two = sup_rep(S, 2);
    CHECK(two.n == Point{0, 0, 0});
    CHECK(two.count == 6);
    // r_3 peaks at the six points +-e_i with value 15; ties go to the smallest, (-1,0,0).
    const auto three = sup_rep(S, 3);
    CHECK(three.count == 15);
    CHECK(three.n == Point{-1, 0, 0});
    const auto r3 = rep_fn(S, 3);
    for (const auto& p : S) CHECK(r3.at(p) == 15);

    const auto single = PointSet::from_points(4, {Point{1, 2, 3, 4}});
    CHECK(sup_rep(single, 2).n == Point{2, 4, 6, 8});
    CHECK(sup_rep(single, 2).count == 1);
    CHECK_THROWS_AS(sup_rep(PointSet::from_points(3, {}), 2), DomainError);
}

TEST_CASE("sumset") {
    const auto S = enumerate_sphere(3, 1);
    CHECK(sumset(S, 2, 0).size() == 19);
    CHECK(sumset(S, 1, 0) == S);
    const auto p = PointSet::from_points(3, {Point{4, -2, 7}});
    const auto q = sumset(p, 2, 1);
    REQUIRE(q.size() == 1);
    CHECK(q[0] == Point{4, -2, 7});
    CHECK(sumset(S, 0, 1) == S);  // S is symmetric
    CHECK_THROWS_AS(sumset(S, 0, 0), DomainError);

    const auto A = random_subset(enumerate_sphere(3, 17), 0.5, 2).as_derived();
    std::set<Point> ref;
    for (const auto& a : A)
        for (const auto& b : A)
            for (const auto& c : A) ref.insert(a + b - c);
    const auto got = sumset(A, 2, 1);
    CHECK(got.size() == ref.size());
    CHECK(std::equal(got.begin(), got.end(), ref.begin()));
}

TEST_CASE("level_sets") {
    const auto S = enumerate_sphere(3, 1);
    const auto prof = level_sets(rep_fn(S, 2));
    CHECK(prof == LevelSetProfile{{0, 6}, {1, 12}, {2, 1}});
    CHECK(level_sets(rep_fn(PointSet::from_points(3, {Point{1, 1, 1}}), 2)) == LevelSetProfile{{0, 1}});
    CHECK_THROWS_AS(level_sets(rep_fn(S, 3)), DomainError);

    const auto A = enumerate_sphere(4, 33);
    const auto r = rep_fn(A, 2);
    std::uint64_t keys = 0;
    BigInt lo = 0, hi = 0;
    for (const auto& L : level_sets(r)) {
        keys += L.size;
        lo += BigInt(L.size) << L.j;
        hi += BigInt(L.size) << (L.j + 1);
    }
    CHECK(keys == r.size());
    CHECK(lo <= r.total());
    CHECK(r.total() <= hi);
}

TEST_CASE("moment_via_dft") {
    const auto S = enumerate_sphere(3, 1);
    auto m = moment_via_dft(S, 2);
    CHECK(m.value.value == 90);
    CHECK(m.residual < 1e-3);
    CHECK(m.modulus == 5);
    CHECK(moment_via_dft(PointSet::from_points(3, {Point{3, 1, 2}}), 3).value.value == 1);
    const auto S2 = enumerate_sphere(3, 2);
    CHECK(moment_via_dft(S2, 2).value == energy(S2, 2, 2));
    CHECK(moment_via_dft(S, 3).value == energy(S, 3, 2));

    Budget tight;
    tight.max_grid = 100;
    CHECK_THROWS_AS(moment_via_dft(S2, 2, tight), BudgetError);
    CHECK(moment_via_dft(enumerate_sphere(3, 9), 2).value == energy(enumerate_sphere(3, 9), 2, 2));
    CHECK_THROWS_AS(moment_via_dft(enumerate_sphere(3, 26), 2), DomainError);  // 72 points
}

TEST_CASE("max_nonzero_rep2") {
    CHECK(max_nonzero_rep2(rep_fn(enumerate_sphere(3, 1), 2)) == 2);
    CHECK(max_nonzero_rep2(rep_fn(enumerate_sphere(3, 2), 2)) == 4);
    CHECK(max_nonzero_rep2(rep_fn(PointSet::from_points(3, {}), 2)) == 0);
}
