#pragma once
// Independent brute-force references used across the unit tests.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "lpe/point.hpp"

namespace oracle {

inline std::vector<lpe::Point> sphere_box_scan(int d, std::int64_t m) {
    std::int64_t R = 0;
    while ((R + 1) * (R + 1) <= m) ++R;
    std::vector<lpe::Point> out;
    std::vector<std::int64_t> x(static_cast<std::size_t>(d), -R);
    while (true) {
        std::int64_t s = 0;
        for (auto v : x) s += v * v;
        if (s == m) out.emplace_back(std::span<const std::int64_t>(x));
        int i = d - 1;
        while (i >= 0 && x[static_cast<std::size_t>(i)] == R) x[static_cast<std::size_t>(i--)] = -R;
        if (i < 0) break;
        ++x[static_cast<std::size_t>(i)];
    }
    return out;
}

inline std::uint64_t sigma(std::uint64_t m) {
    std::uint64_t s = 0;
    for (std::uint64_t q = 1; q <= m; ++q)
        if (m % q == 0) s += q;
    return s;
}

inline std::map<lpe::Point, std::uint64_t> pair_table(const std::vector<lpe::Point>& A) {
    std::map<lpe::Point, std::uint64_t> r;
    for (const auto& a : A)
        for (const auto& b : A) ++r[a + b];
    return r;
}

/// Random subset of exactly `size` points (or all of A when smaller).
inline lpe::PointSet sample(const lpe::PointSet& A, std::size_t size, std::mt19937_64& rng) {
    std::vector<lpe::Point> pts(A.begin(), A.end());
    std::shuffle(pts.begin(), pts.end(), rng);
    if (pts.size() > size) pts.resize(size);
    return lpe::PointSet::from_points(A.dim(), std::move(pts));
}

}  // namespace oracle
