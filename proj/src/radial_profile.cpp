#include "beltrami/radial_profile.hpp"

#include <algorithm>
#include <cmath>

namespace qc {

RadialProfile RadialProfile::power(double alpha, double r_min) {
    if (!(alpha > 0.0)) throw invalid_input("power profile needs alpha > 0");
    if (!(r_min > 0.0)) throw invalid_input("r_min must be positive");
    RadialProfile p(Kind::power, r_min);
    p.alpha_ = alpha;
    return p;
}

RadialProfile RadialProfile::log_degenerate(double r_min) {
    if (!(r_min > 0.0)) throw invalid_input("r_min must be positive");
    return RadialProfile(Kind::log_degenerate, r_min);
}

RadialProfile RadialProfile::custom_table(std::vector<double> r, std::vector<double> rho,
                                          std::vector<double> rho_prime) {
    if (r.size() < 2 || r.size() != rho.size())
        throw invalid_input("profile table needs matching r and rho columns");
    if (rho_prime.size() != r.size())
        throw invalid_input("profile table without derivative column");
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (!(r[i] > r[i - 1]) || !(rho[i] > rho[i - 1]))
            throw invalid_input("profile table must be strictly increasing");
    }
    RadialProfile p(Kind::custom_table, r.front());
    p.tab_r_ = std::move(r);
    p.tab_rho_ = std::move(rho);
    p.tab_drho_ = std::move(rho_prime);
    return p;
}

namespace {

double lerp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t hi = std::clamp<std::size_t>(it - xs.begin(), 1, xs.size() - 1);
    std::size_t lo = hi - 1;
    double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace

double RadialProfile::rho(double r) const {
    switch (kind_) {
        case Kind::power: return std::pow(r, alpha_);
        case Kind::log_degenerate: return 1.0 / (1.0 + std::log(1.0 / r));
        case Kind::custom_table: return lerp_at(tab_r_, tab_rho_, r);
    }
    return r;
}

double RadialProfile::rho_prime(double r) const {
    switch (kind_) {
        case Kind::power: return alpha_ * std::pow(r, alpha_ - 1.0);
        case Kind::log_degenerate: {
            double L = 1.0 + std::log(1.0 / r);
            return 1.0 / (r * L * L);
        }
        case Kind::custom_table: return lerp_at(tab_r_, tab_drho_, r);
    }
    return 1.0;
}

double RadialProfile::mu_radial(double r) const {
    double p = r * rho_prime(r), q = rho(r);
    return (p - q) / (p + q);
}

cplx RadialProfile::map(cplx z) const {
    double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    return rho(r) * z / r;
}

cplx RadialProfile::mu(cplx z) const {
    double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    return mu_radial(r) * z / std::conj(z);
}

double RadialProfile::dilatation(double r) const {
    double a = std::abs(mu_radial(r));
    return (1.0 + a) / (1.0 - a);
}

MuField RadialProfile::mu_field(const GridSpec& grid) const {
    std::vector<cplx> vals(grid.size(), cplx(0, 0));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!grid.masked(static_cast<int>(k))) continue;
        vals[k] = mu(grid.point(static_cast<int>(k)));
    }
    return MuField(grid, std::move(vals));
}

MapField RadialProfile::map_field(const GridSpec& grid) const {
    std::vector<cplx> vals(grid.size(), cplx(0, 0));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!grid.masked(static_cast<int>(k))) continue;
        vals[k] = map(grid.point(static_cast<int>(k)));
    }
    return MapField(grid, std::move(vals), Provenance::analytic);
}

}  // namespace qc
