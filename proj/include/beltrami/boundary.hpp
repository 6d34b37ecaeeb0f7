#pragma once

#include "beltrami/grid.hpp"

#include <vector>

namespace qc {

/// Closed boundary polyline: ordered samples, positively oriented, simple
/// at sampling tolerance. Carries the cumulative arclength table.
class JordanBoundary {
  public:
    /// Takes ownership of ordered samples (first point not repeated).
    /// Throws on fewer than 64 samples, negative orientation, or
    /// self-intersection.
    explicit JordanBoundary(std::vector<cplx> samples);

    static JordanBoundary circle(int n, double radius = 1.0, cplx center = {0, 0});
    static JordanBoundary ellipse(int n, double semi_x, double semi_y,
                                  cplx center = {0, 0});

    int size() const { return static_cast<int>(samples_.size()); }
    cplx point(int i) const { return samples_[i]; }
    const std::vector<cplx>& samples() const { return samples_; }

    /// Cumulative arclength at sample i (s_0 = 0).
    double arclength(int i) const { return arclength_[i]; }
    double total_length() const { return total_length_; }

    cplx centroid() const { return centroid_; }
    double signed_area() const { return signed_area_; }

    /// Point at arclength s (wrapped).
    cplx at_arclength(double s) const;
    /// Arclength of the closest boundary point to z (nearest-segment
    /// projection).
    double nearest_arclength(cplx z) const;

    /// Inward unit normal at sample i (based on neighbouring samples).
    cplx inward_normal(int i) const;

  private:
    std::vector<cplx> samples_;
    std::vector<double> arclength_;
    double total_length_ = 0.0;
    double signed_area_ = 0.0;
    cplx centroid_{};
};

/// Real boundary values attached sample-wise to a JordanBoundary,
/// continuous by linear interpolation in arclength.
class BoundaryData {
  public:
    BoundaryData(const JordanBoundary& boundary, std::vector<double> values);
    static BoundaryData constant(const JordanBoundary& boundary, double c);

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    /// Value at arclength s by linear interpolation between samples.
    double at_arclength(double s) const;

  private:
    std::vector<double> values_;
    std::vector<double> arclength_;
    double total_length_;
};

}  // namespace qc
