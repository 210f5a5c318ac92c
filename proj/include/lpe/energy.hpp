#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lpe/point.hpp"

namespace lpe {

using BigInt = boost::multiprecision::cpp_int;

/// Size limits shared by the counting routines. All are hard caps; exceeding one
/// raises BudgetError with the offending estimate.
struct Budget {
    std::uint64_t max_support = std::uint64_t{1} << 26;  ///< keys stored in one RepFn or sumset
    std::uint64_t dense_cells = std::uint64_t{1} << 25;  ///< scratch array for one first-coordinate slab
    std::uint64_t max_tuples = 100'000'000;               ///< brute-force enumeration
    std::uint64_t max_grid = 100'000'000;                 ///< DFT grid points M^d
};

/// Axis-aligned integer box with a lexicographic-order-preserving 64-bit packing.
class PackedBox {
  public:
    PackedBox() = default;
    PackedBox(int d, const std::array<std::int64_t, kMaxDim>& lo, const std::array<std::int64_t, kMaxDim>& hi);
    static PackedBox bounding(const std::vector<Point>& pts, int d);

    int dim() const noexcept { return d_; }
    std::int64_t lo(int i) const noexcept { return lo_[i]; }
    std::int64_t hi(int i) const noexcept { return hi_[i]; }
    std::uint64_t width(int i) const noexcept { return static_cast<std::uint64_t>(hi_[i] - lo_[i] + 1); }
    std::uint64_t stride(int i) const noexcept { return stride_[i]; }
    /// Number of lattice cells, saturating at UINT64_MAX.
    std::uint64_t cells() const noexcept { return cells_; }

    std::uint64_t pack(const Point& p) const noexcept;
    Point unpack(std::uint64_t key) const;
    bool contains(const Point& p) const noexcept;
    /// Minkowski sum of two boxes.
    PackedBox operator+(const PackedBox& o) const;

  private:
    int d_ = 0;
    std::array<std::int64_t, kMaxDim> lo_{}, hi_{};
    std::array<std::uint64_t, kMaxDim> stride_{};
    std::uint64_t cells_ = 0;
};

/// r_s(A, .) as a sparse map from lattice point to a positive count, keys in canonical order.
class RepFn {
  public:
    RepFn() = default;
    RepFn(int s, int d, PackedBox box, std::vector<std::uint64_t> keys, std::vector<std::uint64_t> counts);

    int s() const noexcept { return s_; }
    int dim() const noexcept { return d_; }
    std::size_t size() const noexcept { return keys_.size(); }
    bool empty() const noexcept { return keys_.empty(); }
    Point key(std::size_t i) const { return box_.unpack(keys_[i]); }
    std::uint64_t count(std::size_t i) const noexcept { return counts_[i]; }
    /// r_s(A, n); zero when n is not an s-fold sum.
    std::uint64_t at(const Point& n) const;
    /// Sum of all counts, i.e. |A|^s.
    BigInt total() const;

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < keys_.size(); ++i) fn(box_.unpack(keys_[i]), counts_[i]);
    }

    const PackedBox& box() const noexcept { return box_; }
    const std::vector<std::uint64_t>& packed_keys() const noexcept { return keys_; }
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  private:
    int s_ = 1;
    int d_ = 3;
    PackedBox box_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint64_t> counts_;
};

struct EnergyValue {
    int s = 2;
    int k = 2;
    BigInt value = 0;

    std::string to_string() const { return value.str(); }
    friend bool operator==(const EnergyValue&, const EnergyValue&) = default;
};

/// One dyadic stratum P_{2^j} = {n : 2^j <= r_2(n) < 2^{j+1}}.
struct LevelSet {
    int j = 0;
    std::uint64_t size = 0;
    friend bool operator==(const LevelSet&, const LevelSet&) = default;
};
using LevelSetProfile = std::vector<LevelSet>;

struct SupRep {
    Point n;
    std::uint64_t count = 0;
};

struct DftMoment {
    EnergyValue value;
    double raw = 0.0;       ///< pre-rounding value of the normalised grid sum
    double residual = 0.0;  ///< |raw - round(raw)|
    std::int64_t modulus = 0;
};

/// r_s(A, .) by s-1 exact convolution passes with the indicator of A.
RepFn rep_fn(const PointSet& A, int s, const Budget& budget = {});

/// E_{s,k}(A) = sum_n r_s(A, n)^k. For k = 2 this counts solutions of
/// x_1 + ... + x_s = x_{s+1} + ... + x_{2s} with all x_i in A.
EnergyValue energy(const PointSet& A, int s, int k, const Budget& budget = {});

/// sum_n r(n)^k for an already computed representation function.
BigInt power_sum(const RepFn& r, int k);

/// Same contract as energy(), by direct enumeration of all s-tuples. Test oracle.
EnergyValue energy_brute(const PointSet& A, int s, int k, const Budget& budget = {});

/// A maximiser of r_s(A, .) and its count; ties go to the lexicographically smallest n.
SupRep sup_rep(const PointSet& A, int s, const Budget& budget = {});
SupRep sup_rep(const RepFn& r);

/// {a_1 + ... + a_plus - b_1 - ... - b_minus : a_i, b_j in A}.
PointSet sumset(const PointSet& A, int plus, int minus, const Budget& budget = {});

/// Dyadic level-set sizes of a 2-fold representation function.
LevelSetProfile level_sets(const RepFn& r);

/// E_{s,2}(A) via discrete orthogonality on (Z_M)^d with M = 2s * max|coord| + 1,
/// evaluated in floating point and rounded. Throws if the rounding residual is >= 1e-3.
DftMoment moment_via_dft(const PointSet& A, int s, const Budget& budget = {});

/// max over n != 0 of r_2(A, n), or 0 when no nonzero pair sum exists.
std::uint64_t max_nonzero_rep2(const RepFn& r2);

}  // namespace lpe
