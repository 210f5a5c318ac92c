#include <doctest.h>

#include <set>
#include <sstream>

#include "lpe/lattice.hpp"
#include "oracles.hpp"

using namespace lpe;

TEST_CASE("isqrt and is_square") {
    for (std::int64_t n = 0; n < 5000; ++n) {
        const auto r = isqrt(n);
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
    }
    CHECK(isqrt(std::int64_t{1} << 62) == std::int64_t{1} << 31);
    CHECK(isqrt(999999999999999999) == 999999999);
    CHECK(is_square(0));
    CHECK(is_square(1'000'000'000'000));
    CHECK_FALSE(is_square(1'000'000'000'001));
    CHECK_FALSE(is_square(-4));
}

TEST_CASE("enumerate_sphere examples") {
    const auto s31 = enumerate_sphere(3, 1);
    REQUIRE(s31.size() == 6);
    CHECK(s31.contains({1, 0, 0}));
    CHECK(s31.contains({0, 0, -1}));
    CHECK(enumerate_sphere(3, 7).empty());
    CHECK(enumerate_sphere(4, 3).size() == 32);
    const auto s32 = enumerate_sphere(3, 2);
    CHECK(s32.size() == 12);
    for (const auto& p : s32) CHECK(p.norm2() == 2);
    CHECK(s31.family() == Family::sphere);
    CHECK(s31.m() == 1);
}

TEST_CASE("enumerate_sphere matches a box scan") {
    for (int d : {3, 4})
        for (std::int64_t m = 1; m <= (d == 3 ? 60 : 30); ++m) {
            const auto A = enumerate_sphere(d, m);
            const auto ref = oracle::sphere_box_scan(d, m);
            REQUIRE(A.size() == ref.size());
            CHECK(std::equal(A.begin(), A.end(), ref.begin()));
        }
}

TEST_CASE("enumerate_sphere errors") {
    CHECK_THROWS_AS(enumerate_sphere(2, 5), DomainError);
    CHECK_THROWS_AS(enumerate_sphere(5, 5), DomainError);
    CHECK_THROWS_AS(enumerate_sphere(3, 0), DomainError);
    CHECK_THROWS_AS(enumerate_sphere(3, -3), DomainError);
}

TEST_CASE("four-square count for small odd m") {
    for (std::int64_t m = 1; m <= 99; m += 2) CHECK(enumerate_sphere(4, m).size() == 8 * oracle::sigma(m));
}

TEST_CASE("enumerate_paraboloid") {
    const auto P1 = enumerate_paraboloid(1);
    CHECK(P1.size() == 27);
    CHECK(P1.contains({1, 1, 1, 3}));
    CHECK(enumerate_paraboloid(2).size() == 125);
    CHECK(enumerate_paraboloid(7).size() == 15 * 15 * 15);
    for (const auto& p : enumerate_paraboloid(3)) CHECK(p[3] == p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    CHECK_THROWS_AS(enumerate_paraboloid(0), DomainError);
}

TEST_CASE("legendre_admissible") {
    CHECK_FALSE(legendre_admissible(7));
    CHECK(legendre_admissible(1));
    CHECK_FALSE(legendre_admissible(28));
    CHECK(enumerate_sphere(3, 28).empty());
    CHECK_FALSE(legendre_admissible(4 * 4 * 15));
    CHECK(legendre_admissible(4 * 4 * 13));
    for (std::int64_t m = 1; m <= 300; ++m) CHECK(legendre_admissible(m) == !enumerate_sphere(3, m).empty());
    CHECK_THROWS_AS(legendre_admissible(0), DomainError);
}

TEST_CASE("restrict_to_orthant") {
    const auto s31 = enumerate_sphere(3, 1);
    const OrthantPattern pzz{{Sign::positive, Sign::zero, Sign::zero}};
    const auto cell = restrict_to_orthant(s31, pzz);
    REQUIRE(cell.size() == 1);
    CHECK(cell[0] == Point{1, 0, 0});

    const auto pos = restrict_to_orthant(enumerate_sphere(4, 4), OrthantPattern::all_positive(4));
    REQUIRE(pos.size() == 1);
    CHECK(pos[0] == Point{1, 1, 1, 1});

    CHECK_THROWS_AS(restrict_to_orthant(s31, OrthantPattern::all_positive(4)), DomainError);
}

TEST_CASE("orthant patterns partition a set") {
    for (auto [d, m] : {std::pair{3, 29}, std::pair{4, 25}, std::pair{4, 4}}) {
        const auto A = enumerate_sphere(d, m);
        const auto patterns = OrthantPattern::all(d);
        CHECK(patterns.size() == (d == 3 ? 27u : 81u));
        std::set<Point> seen;
        std::size_t total = 0;
        for (const auto& p : patterns) {
            const auto cell = restrict_to_orthant(A, p);
            total += cell.size();
            seen.insert(cell.begin(), cell.end());
        }
        CHECK(total == A.size());
        CHECK(seen.size() == A.size());
    }
}

TEST_CASE("random_subset is nested and deterministic") {
    const auto A = enumerate_sphere(4, 45);
    const auto a = random_subset(A, 0.3, 7);
    const auto b = random_subset(A, 0.7, 7);
    CHECK(a == random_subset(A, 0.3, 7));
    CHECK(a.size() < b.size());
    for (const auto& p : a) CHECK(b.contains(p));
    CHECK(random_subset(A, 1.0, 7) == A);
    CHECK_THROWS_AS(random_subset(A, 0.0, 7), DomainError);
    CHECK_THROWS_AS(random_subset(A, 1.5, 7), DomainError);
}

TEST_CASE("point-set file round trip") {
    for (const auto& A : {enumerate_sphere(3, 14), enumerate_paraboloid(1), enumerate_sphere(3, 7),
                          random_subset(enumerate_sphere(4, 9), 0.5, 3).as_derived()}) {
        std::stringstream ss;
        write_point_set(ss, A);
        const auto B = read_point_set(ss);
        CHECK(A == B);
        CHECK(A.family() == B.family());
    }
    std::stringstream empty;
    write_point_set(empty, enumerate_sphere(3, 7));
    CHECK(empty.str() == "3 7 sphere 0\n");
}

TEST_CASE("point-set reader rejects bad input") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_point_set(in);
    };
    CHECK_THROWS_AS(parse(""), DomainError);
    CHECK_THROWS_AS(parse("3 1 sphere 2\n1 0 0\n1 0 0\n"), DomainError);
    CHECK_THROWS_AS(parse("3 1 sphere 2\n1 0 0\n0 1 0\n"), DomainError);
    CHECK_THROWS_AS(parse("3 1 sphere 3\n-1 0 0\n0 0 1\n"), DomainError);
    CHECK_THROWS_AS(parse("3 1 sphere 1\n1 1 0\n"), DomainError);
    CHECK_THROWS_AS(parse("3 1 sphere 1\n1 0\n"), DomainError);
    CHECK_THROWS_AS(parse("3 1 bogus 0\n"), DomainError);
    CHECK(parse("3 1 sphere 2\n-1 0 0\n1 0 0\n").size() == 2);
}

TEST_CASE("PointSet invariants") {
    CHECK_THROWS_AS(PointSet::from_sorted(3, {Point{1, 0, 0}, Point{0, 1, 0}}), DomainError);
    CHECK_THROWS_AS(PointSet::from_sorted(3, {Point{1, 1, 0}}, Family::sphere, 1), DomainError);
    CHECK_THROWS_AS(PointSet::from_sorted(4, {Point{1, 1, 1, 4}}, Family::paraboloid, 1), DomainError);
    const auto S = PointSet::from_points(3, {Point{1, 0, 0}, Point{-1, 0, 0}, Point{1, 0, 0}});
    CHECK(S.size() == 2);
    CHECK(S[0] == Point{-1, 0, 0});
}
