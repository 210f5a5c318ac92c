// Python view: point sets are lists of integer tuples; exact integers stay exact.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lpe/decompose.hpp"
#include "lpe/energy.hpp"
#include "lpe/geometry.hpp"
#include "lpe/harness.hpp"
#include "lpe/lattice.hpp"

namespace py = pybind11;
using namespace lpe;

namespace {

using Tuple = std::vector<std::int64_t>;

py::tuple to_py(const Point& p) {
    py::tuple t(static_cast<std::size_t>(p.dim()));
    for (int i = 0; i < p.dim(); ++i) t[static_cast<std::size_t>(i)] = p[i];
    return t;
}

py::list to_py(const PointSet& A) {
    py::list out;
    for (const auto& p : A) out.append(to_py(p));
    return out;
}

Point to_point(const Tuple& xs) { return Point(std::span<const std::int64_t>(xs)); }

PointSet to_set(const std::vector<Tuple>& pts) {
    if (pts.empty()) throw DomainError("empty point list: dimension unknown");
    std::vector<Point> v;
    v.reserve(pts.size());
    for (const auto& t : pts) v.push_back(to_point(t));
    const int d = v.front().dim();
    return PointSet::from_points(d, std::move(v));
}

py::int_ to_py(const BigInt& v) { return py::int_(py::str(v.str())); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Core routines of the lpe toolkit";
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_MemoryError);

    m.def("enumerate_sphere", [](int d, std::int64_t mm) { return to_py(enumerate_sphere(d, mm)); }, py::arg("d"), py::arg("m"));
    m.def("enumerate_paraboloid", [](std::int64_t mm) { return to_py(enumerate_paraboloid(mm)); }, py::arg("m"));
    m.def("legendre_admissible", &legendre_admissible, py::arg("m"));
    m.def(
        "random_subset",
        [](const std::vector<Tuple>& pts, double density, std::uint64_t seed) {
            return to_py(random_subset(to_set(pts), density, seed));
        },
        py::arg("points"), py::arg("density"), py::arg("seed"));

    m.def(
        "rep_fn",
        [](const std::vector<Tuple>& pts, int s) {
            py::dict out;
            rep_fn(to_set(pts), s).for_each([&](const Point& n, std::uint64_t c) { out[to_py(n)] = c; });
            return out;
        },
        py::arg("points"), py::arg("s"));
    m.def(
        "energy", [](const std::vector<Tuple>& pts, int s, int k) { return to_py(energy(to_set(pts), s, k).value); },
        py::arg("points"), py::arg("s") = 2, py::arg("k") = 2);
    m.def(
        "energy_brute",
        [](const std::vector<Tuple>& pts, int s, int k) { return to_py(energy_brute(to_set(pts), s, k).value); },
        py::arg("points"), py::arg("s") = 2, py::arg("k") = 2);
    m.def(
        "sup_rep",
        [](const std::vector<Tuple>& pts, int s) {
            const auto r = sup_rep(to_set(pts), s);
            return py::make_tuple(to_py(r.n), r.count);
        },
        py::arg("points"), py::arg("s"));
    m.def(
        "sumset",
        [](const std::vector<Tuple>& pts, int plus, int minus) { return to_py(sumset(to_set(pts), plus, minus)); },
        py::arg("points"), py::arg("plus"), py::arg("minus") = 0);
    m.def(
        "moment_via_dft",
        [](const std::vector<Tuple>& pts, int s) {
            const auto r = moment_via_dft(to_set(pts), s);
            return py::make_tuple(to_py(r.value.value), r.residual);
        },
        py::arg("points"), py::arg("s"));

    m.def(
        "slice", [](const std::vector<Tuple>& pts, const Tuple& n) { return to_py(slice(to_set(pts), to_point(n))); },
        py::arg("points"), py::arg("n"));
    m.def(
        "intersect_translates",
        [](const std::vector<Tuple>& pts, const std::vector<Tuple>& shifts) {
            std::vector<Point> sh;
            for (const auto& t : shifts) sh.push_back(to_point(t));
            return to_py(intersect_translates(to_set(pts), sh));
        },
        py::arg("points"), py::arg("shifts"));

    m.def(
        "threshold_for", [](std::uint64_t N, const std::string& delta) { return threshold_for(N, Rational::parse(delta)); },
        py::arg("N"), py::arg("delta") = "1/1392");
    m.def(
        "decompose",
        [](const std::vector<Tuple>& pts, std::optional<std::uint64_t> threshold, const std::string& delta) {
            const PointSet A = to_set(pts);
            const Rational dl = Rational::parse(delta);
            const auto T = threshold.value_or(threshold_for(A.size(), dl));
            const auto D = xy_decompose(A, T, dl);
            const auto v = verify_decomposition(A, D);
            py::list peels;
            for (const auto& p : D.peels) peels.append(py::make_tuple(to_py(p.n), to_py(p.slice)));
            py::dict out;
            out["X"] = to_py(D.X);
            out["peels"] = peels;
            out["threshold"] = D.threshold;
            out["verified"] = v.ok;
            out["clause"] = v.clause;
            return out;
        },
        py::arg("points"), py::arg("threshold") = py::none(), py::arg("delta") = "1/1392");

    m.def(
        "check_inequalities",
        [](const std::vector<Tuple>& pts, const std::vector<std::string>& tags) {
            py::list out;
            for (const auto& r : check_inequalities(to_set(pts), tags)) {
                py::dict row;
                row["tag"] = r.tag;
                row["lhs"] = r.lhs;
                row["rhs"] = r.rhs;
                row["ratio"] = r.ratio;
                row["asserted"] = r.asserted;
                row["holds"] = r.holds;
                row["note"] = r.note;
                out.append(row);
            }
            return out;
        },
        py::arg("points"), py::arg("tags"));
}
