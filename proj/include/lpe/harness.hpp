#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpe/decompose.hpp"
#include "lpe/energy.hpp"
#include "lpe/point.hpp"

namespace lpe {

// ---------------------------------------------------------------------------
// Exponent fitting

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<std::pair<double, double>> points;
    std::optional<double> bound;  ///< theorem exponent the slope is compared against, if any
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 3 points and x not all equal.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points);
/// Fits log(value) against log(size).
ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& size_value);

/// Exponent in the E_{s,2} bound for subsets of S_{4,m}: 2s - 2 + 1/6 + (1 - 1/232) 6^{-s+1}.
double sphere4_energy_exponent(int s);
/// eta_s = 3^{-s+2} / 2, the excess in the E_{s,2} bound for subsets of S_{3,m}.
double sphere3_eta(int s);
/// lambda_s in the r_s bound for subsets of S_{3,m} (s >= 4).
double sphere3_lambda(int s);

// ---------------------------------------------------------------------------
// Point-set families

enum class ScanFamily { sphere3, sphere4, paraboloid4, random_subset, slice_union };

std::string to_string(ScanFamily f);
ScanFamily scan_family_from_string(const std::string& s);

/// Builds the base surface named by `family` ("sphere3", "sphere4", "paraboloid4",
/// or "sphere"/"paraboloid" together with d).
PointSet build_surface(const std::string& family, int d, std::int64_t m);

/// Union of the slices C_n of S for the `count` nonzero n with the largest r_2(S, n).
PointSet slice_union(const PointSet& S, int count);

// ---------------------------------------------------------------------------
// Inequality reports

struct Caps {
    double nonzero_rep_exponent = 0.49;  ///< max_{n != 0} r_2(S_{3,m}, n) <= m^this
    double y_energy_ratio = 100.0;       ///< E_{2,2}(Y) / (r |Y|^2) upper cap
    std::uint64_t translate_intersection = 64;
    double paraboloid_ratio_lo = 1e-3;   ///< E_{2,2}(P) / |P|^{7/3} bounds
    double paraboloid_ratio_hi = 1e3;
};

struct InequalityRow {
    std::string tag;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;     ///< lhs / rhs
    bool asserted = false;  ///< true when the inequality lhs >= rhs (or <= for caps) is enforced
    bool holds = true;
    std::string note;
};

struct CheckOptions {
    Caps caps;
    Budget budget;
    std::optional<std::int64_t> m;  ///< overrides A.m() for tags that need the sphere parameter
};

/// Tags: floma, sio2, iter3d, zee11, kz2, trives, lowerbd.
std::vector<InequalityRow> check_inequalities(const PointSet& A, const std::vector<std::string>& tags,
                                              const CheckOptions& opts = {});

// ---------------------------------------------------------------------------
// Scans

struct ScanConfig {
    ScanFamily family = ScanFamily::sphere4;
    std::string base = "sphere4";  ///< surface under random-subset / slice-union
    std::int64_t m_min = 1;
    std::int64_t m_max = 1;
    std::int64_t m_stride = 1;
    bool odd_only = false;
    bool admissible_only = false;  ///< skip m excluded by the three-square criterion (sphere3)
    std::vector<int> s_list{2};
    std::vector<int> k_list{2};
    double density = 1.0;
    std::uint64_t seed = 1;
    int slice_count = 4;
    bool two_a_minus_a = true;
    bool dft_check = true;
    bool decompose = false;
    Rational delta = kDefaultDelta;
    Budget budget;
    Caps caps;
    int jobs = 0;  ///< worker threads; 0 = hardware concurrency
};

void validate(const ScanConfig& cfg);

struct ScanRow {
    std::string family;
    int d = 0;
    std::int64_t m = 0;
    std::uint64_t seed = 0;
    double density = 1.0;
    std::uint64_t size_a = 0;
    int s = 2;
    int k = 2;
    std::string energy;  ///< exact decimal, empty when not computed
    std::uint64_t sup_rep = 0;
    std::uint64_t sumset_size = 0;
    std::optional<std::uint64_t> two_a_minus_a;
    std::optional<std::uint64_t> peels;
    std::optional<std::uint64_t> threshold;
    std::string notes;
    bool failed = false;  ///< an asserted check did not hold
};

/// One row per (m, s, k), in config order. Deterministic for a given config.
std::vector<ScanRow> run_scan(const ScanConfig& cfg);

inline constexpr const char* kCsvHeader =
    "family,d,m,seed,density,sizeA,s,k,energy,sup_rep,sumset_size,two_a_minus_a,peels,threshold,notes";

void write_csv(std::ostream& out, const std::vector<ScanRow>& rows);
void write_json(std::ostream& out, const std::vector<ScanRow>& rows);

}  // namespace lpe
