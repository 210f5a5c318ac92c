#include "lpe/point.hpp"

#include <algorithm>
#include <sstream>

namespace lpe {

std::string Point::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < d_; ++i) os << (i ? "," : "") << c_[i];
    os << ')';
    return os.str();
}

std::string to_string(Family f) {
    switch (f) {
        case Family::sphere: return "sphere";
        case Family::paraboloid: return "paraboloid";
        case Family::derived: return "derived";
    }
    return "derived";
}

Family family_from_string(const std::string& s) {
    if (s == "sphere") return Family::sphere;
    if (s == "paraboloid") return Family::paraboloid;
    if (s == "derived") return Family::derived;
    throw DomainError("unknown point-set family '" + s + "'");
}

PointSet PointSet::from_points(int d, std::vector<Point> pts, Family family, std::optional<std::int64_t> m) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return from_sorted(d, std::move(pts), family, m);
}

PointSet PointSet::from_sorted(int d, std::vector<Point> pts, Family family, std::optional<std::int64_t> m) {
    PointSet s;
    s.d_ = d;
    s.family_ = family;
    s.m_ = m;
    s.pts_ = std::move(pts);
    s.validate();
    return s;
}

void PointSet::validate() const {
    if (d_ < 1 || d_ > kMaxDim) throw DomainError("point set dimension out of range");
    if (family_ != Family::derived && !m_) throw DomainError("sphere/paraboloid sets need a radius parameter m");
    if (family_ == Family::paraboloid && d_ != 4) throw DomainError("paraboloid sets live in dimension 4");
    for (std::size_t i = 0; i < pts_.size(); ++i) {
        const Point& p = pts_[i];
        if (p.dim() != d_) throw DomainError("point " + p.to_string() + " has the wrong dimension");
        if (i > 0 && !(pts_[i - 1] < p)) throw DomainError("points not strictly increasing at " + p.to_string());
        if (family_ == Family::sphere && p.norm2() != static_cast<__int128>(*m_))
            throw DomainError("point " + p.to_string() + " is not on the sphere of norm " + std::to_string(*m_));
        if (family_ == Family::paraboloid) {
            const std::int64_t lim = *m_;
            bool ok = true;
            for (int k = 0; k < 3; ++k) ok = ok && p[k] >= -lim && p[k] <= lim;
            ok = ok && p[3] == p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            if (!ok) throw DomainError("point " + p.to_string() + " is not on the truncated paraboloid");
        }
    }
}

bool PointSet::contains(const Point& p) const { return std::binary_search(pts_.begin(), pts_.end(), p); }

std::int64_t PointSet::max_abs() const noexcept {
    std::int64_t r = 0;
    for (const auto& p : pts_) r = std::max(r, p.max_abs());
    return r;
}

PointSet PointSet::as_derived() const {
    PointSet s = *this;
    s.family_ = Family::derived;
    s.m_.reset();
    return s;
}

bool OrthantPattern::matches(const Point& p) const {
    if (p.dim() != dim()) throw DomainError("orthant pattern length does not match point dimension");
    for (int i = 0; i < dim(); ++i) {
        const auto x = p[i];
        switch (entries[static_cast<std::size_t>(i)]) {
            case Sign::zero:
                if (x != 0) return false;
                break;
            case Sign::positive:
                if (x <= 0) return false;
                break;
            case Sign::negative:
                if (x >= 0) return false;
                break;
        }
    }
    return true;
}

int OrthantPattern::zero_count() const noexcept {
    return static_cast<int>(std::count(entries.begin(), entries.end(), Sign::zero));
}

std::string OrthantPattern::to_string() const {
    std::string s;
    for (auto e : entries) s += e == Sign::zero ? '0' : e == Sign::positive ? '+' : '-';
    return s;
}

std::vector<OrthantPattern> OrthantPattern::all(int d) {
    std::vector<OrthantPattern> out;
    int total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    out.reserve(static_cast<std::size_t>(total));
    for (int code = 0; code < total; ++code) {
        OrthantPattern p{std::vector<Sign>(static_cast<std::size_t>(d))};
        int c = code;
        for (int i = d - 1; i >= 0; --i) {
            p.entries[static_cast<std::size_t>(i)] = static_cast<Sign>(c % 3);
            c /= 3;
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace lpe
