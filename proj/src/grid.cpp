#include "beltrami/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace qc {

GridSpec::GridSpec(cplx origin, double width, double height, int nx, int ny,
                   std::vector<std::uint8_t> mask)
    : origin_(origin), width_(width), height_(height), nx_(nx), ny_(ny),
      mask_(std::move(mask)) {
    if (nx_ < 4 || ny_ < 4)
        throw invalid_input("grid needs nx >= 4 and ny >= 4");
    if (!(width_ > 0.0) || !(height_ > 0.0))
        throw invalid_input("grid extent must be positive");
    if (mask_.size() != static_cast<std::size_t>(nx_) * ny_)
        throw invalid_input("mask size does not match nx*ny");
    hx_ = width_ / (nx_ - 1);
    hy_ = height_ / (ny_ - 1);
    masked_count_ = 0;
    for (auto m : mask_)
        if (m) ++masked_count_;
    if (masked_count_ == 0)
        throw invalid_input("mask selects no samples");
}

bool GridSpec::connected() const {
    int start = -1;
    for (std::size_t k = 0; k < mask_.size(); ++k) {
        if (mask_[k]) { start = static_cast<int>(k); break; }
    }
    if (start < 0) return false;
    std::vector<std::uint8_t> seen(mask_.size(), 0);
    std::deque<int> queue{start};
    seen[start] = 1;
    std::size_t reached = 0;
    while (!queue.empty()) {
        int k = queue.front();
        queue.pop_front();
        ++reached;
        int ix = k % nx_, iy = k / nx_;
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int jx = ix + dx[d], jy = iy + dy[d];
            if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny_) continue;
            int j = index(jx, jy);
            if (mask_[j] && !seen[j]) {
                seen[j] = 1;
                queue.push_back(j);
            }
        }
    }
    return reached == masked_count_;
}

void GridSpec::require_connected() const {
    if (!connected())
        throw invalid_input("mask interior is not 4-connected");
}

std::vector<int> GridSpec::boundary_ring() const {
    std::vector<int> ring;
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            int k = index(ix, iy);
            if (!mask_[k]) continue;
            bool edge = ix == 0 || ix == nx_ - 1 || iy == 0 || iy == ny_ - 1;
            if (!edge) {
                edge = !mask_[index(ix - 1, iy)] || !mask_[index(ix + 1, iy)] ||
                       !mask_[index(ix, iy - 1)] || !mask_[index(ix, iy + 1)];
            }
            if (edge) ring.push_back(k);
        }
    }
    return ring;
}

int GridSpec::nearest_masked(cplx z, double max_dist) const {
    // Search outward from the containing cell.
    double fx = (z.real() - origin_.real()) / hx_;
    double fy = (z.imag() - origin_.imag()) / hy_;
    int cx = static_cast<int>(std::lround(fx));
    int cy = static_cast<int>(std::lround(fy));
    int best = -1;
    double best_d = max_dist;
    int reach = static_cast<int>(std::ceil(max_dist / std::min(hx_, hy_))) + 1;
    for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
            int ix = cx + dx, iy = cy + dy;
            if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) continue;
            int k = index(ix, iy);
            if (!mask_[k]) continue;
            double d = std::abs(point(ix, iy) - z);
            if (d <= best_d) {
                best_d = d;
                best = k;
            }
        }
    }
    return best;
}

bool GridSpec::same_layout(const GridSpec& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ &&
           std::abs(origin_ - other.origin_) < 1e-14 &&
           std::abs(width_ - other.width_) < 1e-14 &&
           std::abs(height_ - other.height_) < 1e-14 && mask_ == other.mask_;
}

std::vector<std::uint8_t> full_mask(int nx, int ny) {
    return std::vector<std::uint8_t>(static_cast<std::size_t>(nx) * ny, 1);
}

std::vector<std::uint8_t> disk_mask(cplx origin, double width, double height,
                                    int nx, int ny, cplx center, double radius) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(nx) * ny, 0);
    double hx = width / (nx - 1), hy = height / (ny - 1);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            cplx z = origin + cplx(ix * hx, iy * hy);
            if (std::abs(z - center) <= radius + 1e-12)
                m[static_cast<std::size_t>(iy) * nx + ix] = 1;
        }
    return m;
}

std::vector<std::uint8_t> annulus_mask(cplx origin, double width, double height,
                                       int nx, int ny, cplx center,
                                       double r_in, double r_out) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(nx) * ny, 0);
    double hx = width / (nx - 1), hy = height / (ny - 1);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            cplx z = origin + cplx(ix * hx, iy * hy);
            double r = std::abs(z - center);
            if (r >= r_in - 1e-12 && r <= r_out + 1e-12)
                m[static_cast<std::size_t>(iy) * nx + ix] = 1;
        }
    return m;
}

GridSpec make_disk_grid(int n, double radius, cplx center, double pad) {
    double half = radius + pad;
    cplx origin = center - cplx(half, half);
    return GridSpec(origin, 2 * half, 2 * half, n, n,
                    disk_mask(origin, 2 * half, 2 * half, n, n, center, radius));
}

GridSpec make_annulus_grid(int n, double r_in, double r_out, cplx center, double pad) {
    double half = r_out + pad;
    cplx origin = center - cplx(half, half);
    return GridSpec(origin, 2 * half, 2 * half, n, n,
                    annulus_mask(origin, 2 * half, 2 * half, n, n, center, r_in, r_out));
}

namespace {

template <class T>
bool interp_impl(const Field<T>& f, cplx z, T& out) {
    const GridSpec& g = f.grid();
    double fx = (z.real() - g.origin().real()) / g.hx();
    double fy = (z.imag() - g.origin().imag()) / g.hy();
    int ix = static_cast<int>(std::floor(fx));
    int iy = static_cast<int>(std::floor(fy));
    ix = std::clamp(ix, 0, g.nx() - 2);
    iy = std::clamp(iy, 0, g.ny() - 2);
    double tx = std::clamp(fx - ix, 0.0, 1.0);
    double ty = std::clamp(fy - iy, 0.0, 1.0);
    const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
    const int cx[4] = {ix, ix + 1, ix, ix + 1};
    const int cy[4] = {iy, iy, iy + 1, iy + 1};
    T acc{};
    double wsum = 0.0;
    for (int c = 0; c < 4; ++c) {
        if (!g.inside(cx[c], cy[c])) continue;
        acc += w[c] * f.at(cx[c], cy[c]);
        wsum += w[c];
    }
    if (wsum <= 0.0) return false;
    out = acc / wsum;
    return true;
}

}  // namespace

bool interp_bilinear(const RealField& f, cplx z, double& out) {
    return interp_impl(f, z, out);
}
bool interp_bilinear(const ComplexField& f, cplx z, cplx& out) {
    return interp_impl(f, z, out);
}

MuField::MuField(GridSpec grid, std::vector<cplx> values, bool sanitize)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw invalid_input("mu values do not match grid size");
    const double cap = 1.0 - 1e-12;
    max_k_ = 1.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!grid_.masked(static_cast<int>(k))) continue;
        double a = std::abs(values_[k]);
        if (!(a < 1.0)) {
            if (!sanitize)
                throw invalid_input("|mu| >= 1 at a masked sample");
            values_[k] *= cap / a;
            a = cap;
        }
        if (!std::isfinite(a))
            throw invalid_input("non-finite mu sample");
        max_k_ = std::max(max_k_, (1.0 + a) / (1.0 - a));
    }
    degenerate_ = max_k_ > kDegeneracyThreshold;
}

MuField constant_mu(const GridSpec& grid, cplx value) {
    return MuField(grid, std::vector<cplx>(grid.size(), value));
}

MapField::MapField(GridSpec grid, std::vector<cplx> values, Provenance prov)
    : grid_(std::move(grid)), values_(std::move(values)), prov_(prov) {
    if (values_.size() != grid_.size())
        throw invalid_input("map values do not match grid size");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!grid_.masked(static_cast<int>(k))) continue;
        if (!std::isfinite(values_[k].real()) || !std::isfinite(values_[k].imag()))
            throw invalid_input("non-finite map sample");
    }
}

}  // namespace qc
