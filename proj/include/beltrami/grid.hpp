#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qc {

using cplx = std::complex<double>;

/// Thrown when an input violates a documented precondition.
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a computation cannot proceed at the requested resolution.
struct numeric_failure : std::runtime_error {
    explicit numeric_failure(const std::string& what) : std::runtime_error(what) {}
};

/// Rectangular sample lattice with a per-sample inside/outside mask.
///
/// Samples are node-centered: z(ix,iy) = origin + (ix*hx, iy*hy) with
/// hx = width/(nx-1), hy = height/(ny-1). The mask marks which samples
/// belong to the working domain.
class GridSpec {
  public:
    GridSpec(cplx origin, double width, double height, int nx, int ny,
             std::vector<std::uint8_t> mask);

    cplx origin() const { return origin_; }
    double width() const { return width_; }
    double height() const { return height_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }

    int index(int ix, int iy) const { return iy * nx_ + ix; }
    bool inside(int ix, int iy) const {
        return ix >= 0 && ix < nx_ && iy >= 0 && iy < ny_ && mask_[index(ix, iy)] != 0;
    }
    bool masked(int k) const { return mask_[k] != 0; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    cplx point(int ix, int iy) const {
        return origin_ + cplx(ix * hx_, iy * hy_);
    }
    cplx point(int k) const { return point(k % nx_, k / nx_); }

    std::size_t size() const { return mask_.size(); }
    std::size_t masked_count() const { return masked_count_; }

    /// Checks 4-connectivity of the masked region. Operations that walk the
    /// domain call this and reject split masks.
    bool connected() const;
    void require_connected() const;

    /// Indices of masked samples with at least one unmasked 4-neighbour
    /// (grid edge counts as outside).
    std::vector<int> boundary_ring() const;

    /// Nearest masked sample to z, or -1 when none lies within max_dist.
    int nearest_masked(cplx z, double max_dist) const;

    bool same_layout(const GridSpec& other) const;

  private:
    cplx origin_;
    double width_, height_;
    int nx_, ny_;
    double hx_, hy_;
    std::vector<std::uint8_t> mask_;
    std::size_t masked_count_;
};

/// All-inside mask helper.
std::vector<std::uint8_t> full_mask(int nx, int ny);
/// Mask of samples with |z - center| <= radius.
std::vector<std::uint8_t> disk_mask(cplx origin, double width, double height,
                                    int nx, int ny, cplx center, double radius);
/// Mask of samples with r_in <= |z - center| <= r_out.
std::vector<std::uint8_t> annulus_mask(cplx origin, double width, double height,
                                       int nx, int ny, cplx center,
                                       double r_in, double r_out);

/// Convenience factories.
GridSpec make_disk_grid(int n, double radius = 1.0, cplx center = {0.0, 0.0},
                        double pad = 0.0);
GridSpec make_annulus_grid(int n, double r_in, double r_out,
                           cplx center = {0.0, 0.0}, double pad = 0.05);

/// Values attached to the masked samples of a grid. Unmasked entries are
/// kept in storage (zero-initialized) so indexing stays flat.
template <class T>
class Field {
  public:
    Field(GridSpec grid, T fill = T{})
        : grid_(std::move(grid)), values_(grid_.size(), fill) {}
    Field(GridSpec grid, std::vector<T> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw invalid_input("field values do not match grid size");
    }

    const GridSpec& grid() const { return grid_; }
    T& operator[](int k) { return values_[k]; }
    const T& operator[](int k) const { return values_[k]; }
    T& at(int ix, int iy) { return values_[grid_.index(ix, iy)]; }
    const T& at(int ix, int iy) const { return values_[grid_.index(ix, iy)]; }
    const std::vector<T>& values() const { return values_; }
    std::vector<T>& values() { return values_; }

  private:
    GridSpec grid_;
    std::vector<T> values_;
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

/// Bilinear interpolation of a field at an arbitrary point. Uses the four
/// surrounding samples; falls back to the masked subset of them (weight
/// renormalization) when some corners are outside the domain. Returns false
/// when no masked corner is available.
bool interp_bilinear(const RealField& f, cplx z, double& out);
bool interp_bilinear(const ComplexField& f, cplx z, cplx& out);

enum class Provenance { analytic, solver, composed };

/// Complex coefficient field mu with |mu| < 1 at every masked sample.
class MuField {
  public:
    static constexpr double kDegeneracyThreshold = 50.0;

    /// Throws invalid_input when any masked sample has |mu| >= 1. With
    /// sanitize = true, values are capped at |mu| <= 1 - 1e-12 instead.
    MuField(GridSpec grid, std::vector<cplx> values, bool sanitize = false);

    const GridSpec& grid() const { return grid_; }
    cplx operator[](int k) const { return values_[k]; }
    const std::vector<cplx>& values() const { return values_; }
    bool degenerate_flag() const { return degenerate_; }
    double max_dilatation() const { return max_k_; }

  private:
    GridSpec grid_;
    std::vector<cplx> values_;
    bool degenerate_ = false;
    double max_k_ = 1.0;
};

MuField constant_mu(const GridSpec& grid, cplx value);

/// Complex-valued map samples with provenance tag.
class MapField {
  public:
    MapField(GridSpec grid, std::vector<cplx> values, Provenance prov);

    const GridSpec& grid() const { return grid_; }
    cplx operator[](int k) const { return values_[k]; }
    const std::vector<cplx>& values() const { return values_; }
    Provenance provenance() const { return prov_; }

  private:
    GridSpec grid_;
    std::vector<cplx> values_;
    Provenance prov_;
};

/// Pointwise dilatation samples (K >= 1 for the dilatation quotient,
/// K > 0 for tangent dilatations), with an optional reference center.
class DilatationField {
  public:
    DilatationField(GridSpec grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)), has_center_(false) {}
    DilatationField(GridSpec grid, std::vector<double> values, cplx center)
        : grid_(std::move(grid)), values_(std::move(values)), center_(center),
          has_center_(true) {}

    const GridSpec& grid() const { return grid_; }
    double operator[](int k) const { return values_[k]; }
    const std::vector<double>& values() const { return values_; }
    bool has_center() const { return has_center_; }
    cplx center() const { return center_; }

    RealField as_real_field() const { return RealField(grid_, values_); }

  private:
    GridSpec grid_;
    std::vector<double> values_;
    cplx center_{};
    bool has_center_;
};

}  // namespace qc
