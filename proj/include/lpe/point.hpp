#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpe {

/// Raised when an input violates an operation's precondition.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation would exceed a configured size budget.
/// The message carries the estimate that tripped the limit.
class BudgetError : public std::runtime_error {
  public:
    BudgetError(const std::string& what, std::uint64_t estimate)
        : std::runtime_error(what + " (estimated " + std::to_string(estimate) + ")"),
          estimate_(estimate) {}
    std::uint64_t estimate() const noexcept { return estimate_; }

  private:
    std::uint64_t estimate_;
};

inline constexpr int kMaxDim = 4;

/// Integer vector in Z^d, d <= 4. Unused trailing coordinates are kept at zero
/// so that defaulted comparison is lexicographic on the live coordinates.
class Point {
  public:
    Point() = default;
    explicit Point(int d) : d_(d) { check_dim(d); }
    Point(std::initializer_list<std::int64_t> xs) : d_(static_cast<int>(xs.size())) {
        check_dim(d_);
        int i = 0;
        for (auto x : xs) c_[i++] = x;
    }
    explicit Point(std::span<const std::int64_t> xs) : d_(static_cast<int>(xs.size())) {
        check_dim(d_);
        for (int i = 0; i < d_; ++i) c_[i] = xs[i];
    }

    int dim() const noexcept { return d_; }
    std::int64_t operator[](int i) const noexcept { return c_[i]; }
    std::int64_t& operator[](int i) noexcept { return c_[i]; }
    std::span<const std::int64_t> coords() const noexcept { return {c_.data(), static_cast<std::size_t>(d_)}; }

    bool is_zero() const noexcept {
        for (int i = 0; i < d_; ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    /// Exact squared Euclidean norm.
    __int128 norm2() const noexcept {
        __int128 s = 0;
        for (int i = 0; i < d_; ++i) s += static_cast<__int128>(c_[i]) * c_[i];
        return s;
    }
    std::int64_t max_abs() const noexcept {
        std::int64_t r = 0;
        for (int i = 0; i < d_; ++i) r = std::max(r, c_[i] < 0 ? -c_[i] : c_[i]);
        return r;
    }

    Point operator-() const noexcept {
        Point r = *this;
        for (int i = 0; i < d_; ++i) r.c_[i] = -r.c_[i];
        return r;
    }
    Point& operator+=(const Point& o) {
        same_dim(o);
        for (int i = 0; i < d_; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Point& operator-=(const Point& o) {
        same_dim(o);
        for (int i = 0; i < d_; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(std::int64_t k, Point a) {
        for (int i = 0; i < a.d_; ++i) a.c_[i] *= k;
        return a;
    }

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;

    std::string to_string() const;

  private:
    static void check_dim(int d) {
        if (d < 1 || d > kMaxDim) throw DomainError("point dimension must be in [1, 4], got " + std::to_string(d));
    }
    void same_dim(const Point& o) const {
        if (o.d_ != d_) throw DomainError("dimension mismatch in point arithmetic");
    }

    int d_ = 0;
    std::array<std::int64_t, kMaxDim> c_{};
};

inline __int128 dot(const Point& a, const Point& b) {
    __int128 s = 0;
    for (int i = 0; i < a.dim(); ++i) s += static_cast<__int128>(a[i]) * b[i];
    return s;
}

enum class Family { sphere, paraboloid, derived };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/// Finite set of lattice points in canonical (strictly increasing lexicographic) order.
///
/// Sphere and paraboloid sets remember the parameter m they were built from, and
/// construction verifies that every point lies on the claimed surface.
class PointSet {
  public:
    PointSet() = default;

    /// Takes points in any order; sorts and removes duplicates.
    static PointSet from_points(int d, std::vector<Point> pts, Family family = Family::derived,
                                std::optional<std::int64_t> m = std::nullopt);
    /// Takes points that must already be strictly increasing; throws otherwise.
    static PointSet from_sorted(int d, std::vector<Point> pts, Family family = Family::derived,
                                std::optional<std::int64_t> m = std::nullopt);

    int dim() const noexcept { return d_; }
    Family family() const noexcept { return family_; }
    std::optional<std::int64_t> m() const noexcept { return m_; }
    const std::vector<Point>& points() const noexcept { return pts_; }
    std::size_t size() const noexcept { return pts_.size(); }
    bool empty() const noexcept { return pts_.empty(); }
    const Point& operator[](std::size_t i) const noexcept { return pts_[i]; }
    auto begin() const noexcept { return pts_.begin(); }
    auto end() const noexcept { return pts_.end(); }

    bool contains(const Point& p) const;
    std::int64_t max_abs() const noexcept;
    /// The same points relabelled as a derived set (drops the surface claim).
    PointSet as_derived() const;

    friend bool operator==(const PointSet& a, const PointSet& b) {
        return a.d_ == b.d_ && a.pts_ == b.pts_;
    }

  private:
    void validate() const;

    int d_ = 3;
    Family family_ = Family::derived;
    std::optional<std::int64_t> m_;
    std::vector<Point> pts_;
};

/// Per-coordinate sign class used to split space into the 3^d cells E_i.
enum class Sign : std::uint8_t { zero, positive, negative };

struct OrthantPattern {
    std::vector<Sign> entries;

    int dim() const noexcept { return static_cast<int>(entries.size()); }
    bool matches(const Point& p) const;
    int zero_count() const noexcept;
    std::string to_string() const;
    /// All 3^d patterns in a fixed order (first coordinate slowest, zero < positive < negative).
    static std::vector<OrthantPattern> all(int d);
    static OrthantPattern all_positive(int d) { return {std::vector<Sign>(static_cast<std::size_t>(d), Sign::positive)}; }

    friend bool operator==(const OrthantPattern&, const OrthantPattern&) = default;
};

}  // namespace lpe
