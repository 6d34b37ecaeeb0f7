#include "beltrami/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qc {

namespace {

// Proper segment intersection test (shared endpoints excluded by caller).
bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
    auto orient = [](cplx p, cplx q, cplx r) {
        double v = (q.real() - p.real()) * (r.imag() - p.imag()) -
                   (q.imag() - p.imag()) * (r.real() - p.real());
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

JordanBoundary::JordanBoundary(std::vector<cplx> samples)
    : samples_(std::move(samples)) {
    int n = static_cast<int>(samples_.size());
    if (n < 64) throw invalid_input("boundary needs at least 64 samples");

    arclength_.resize(n);
    arclength_[0] = 0.0;
    for (int i = 1; i < n; ++i)
        arclength_[i] = arclength_[i - 1] + std::abs(samples_[i] - samples_[i - 1]);
    total_length_ = arclength_[n - 1] + std::abs(samples_[0] - samples_[n - 1]);
    if (!(total_length_ > 0.0)) throw invalid_input("boundary has zero length");

    double area2 = 0.0;
    cplx csum{0, 0};
    for (int i = 0; i < n; ++i) {
        cplx p = samples_[i], q = samples_[(i + 1) % n];
        double cross = p.real() * q.imag() - q.real() * p.imag();
        area2 += cross;
        csum += (p + q) * cross;
    }
    signed_area_ = 0.5 * area2;
    if (!(signed_area_ > 0.0))
        throw invalid_input("boundary must be positively oriented and non-degenerate");
    centroid_ = csum / (3.0 * area2);

    // Self-intersection at sampling tolerance; adjacent segments share
    // endpoints and are skipped.
    for (int i = 0; i < n; ++i) {
        cplx a = samples_[i], b = samples_[(i + 1) % n];
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            cplx c = samples_[j], d = samples_[(j + 1) % n];
            if (segments_cross(a, b, c, d))
                throw invalid_input("boundary self-intersection detected");
        }
    }
}

JordanBoundary JordanBoundary::circle(int n, double radius, cplx center) {
    std::vector<cplx> pts(n);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * std::numbers::pi * i / n;
        pts[i] = center + radius * cplx(std::cos(th), std::sin(th));
    }
    return JordanBoundary(std::move(pts));
}

JordanBoundary JordanBoundary::ellipse(int n, double semi_x, double semi_y,
                                       cplx center) {
    std::vector<cplx> pts(n);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * std::numbers::pi * i / n;
        pts[i] = center + cplx(semi_x * std::cos(th), semi_y * std::sin(th));
    }
    return JordanBoundary(std::move(pts));
}

cplx JordanBoundary::at_arclength(double s) const {
    int n = size();
    s = std::fmod(s, total_length_);
    if (s < 0) s += total_length_;
    auto it = std::upper_bound(arclength_.begin(), arclength_.end(), s);
    int i = static_cast<int>(it - arclength_.begin()) - 1;
    i = std::clamp(i, 0, n - 1);
    cplx a = samples_[i], b = samples_[(i + 1) % n];
    double seg = std::abs(b - a);
    double t = seg > 0 ? (s - arclength_[i]) / seg : 0.0;
    return a + t * (b - a);
}

double JordanBoundary::nearest_arclength(cplx z) const {
    int n = size();
    double best_d = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    for (int i = 0; i < n; ++i) {
        cplx a = samples_[i], b = samples_[(i + 1) % n];
        cplx ab = b - a;
        double len2 = std::norm(ab);
        double t = len2 > 0 ? std::clamp(((z - a).real() * ab.real() +
                                          (z - a).imag() * ab.imag()) /
                                             len2,
                                         0.0, 1.0)
                            : 0.0;
        cplx p = a + t * ab;
        double d = std::abs(z - p);
        if (d < best_d) {
            best_d = d;
            best_s = arclength_[i] + t * std::sqrt(len2);
        }
    }
    return best_s;
}

cplx JordanBoundary::inward_normal(int i) const {
    int n = size();
    cplx tangent = samples_[(i + 1) % n] - samples_[(i + n - 1) % n];
    double len = std::abs(tangent);
    if (!(len > 0)) return {0, 0};
    tangent /= len;
    // positively oriented boundary: the interior lies to the left
    return cplx(-tangent.imag(), tangent.real());
}

BoundaryData::BoundaryData(const JordanBoundary& boundary, std::vector<double> values)
    : values_(std::move(values)), total_length_(boundary.total_length()) {
    if (static_cast<int>(values_.size()) != boundary.size())
        throw invalid_input("boundary data does not match sample count");
    for (double v : values_)
        if (!std::isfinite(v)) throw invalid_input("non-finite boundary value");
    arclength_.resize(values_.size());
    for (int i = 0; i < boundary.size(); ++i) arclength_[i] = boundary.arclength(i);
}

BoundaryData BoundaryData::constant(const JordanBoundary& boundary, double c) {
    return BoundaryData(boundary, std::vector<double>(boundary.size(), c));
}

double BoundaryData::at_arclength(double s) const {
    s = std::fmod(s, total_length_);
    if (s < 0) s += total_length_;
    auto it = std::upper_bound(arclength_.begin(), arclength_.end(), s);
    int i = static_cast<int>(it - arclength_.begin()) - 1;
    int n = static_cast<int>(values_.size());
    i = std::clamp(i, 0, n - 1);
    int j = (i + 1) % n;
    double s0 = arclength_[i];
    double s1 = j == 0 ? total_length_ : arclength_[j];
    double t = s1 > s0 ? (s - s0) / (s1 - s0) : 0.0;
    return values_[i] + t * (values_[j] - values_[i]);
}

}  // namespace qc
