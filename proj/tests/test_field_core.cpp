#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "beltrami/field_ops.hpp"
#include "beltrami/radial_profile.hpp"
#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace qc;

namespace {

MapField analytic_map(const GridSpec& g, const std::function<cplx(cplx)>& f) {
    std::vector<cplx> vals(g.size(), cplx(0, 0));
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.masked(static_cast<int>(k))) vals[k] = f(g.point(static_cast<int>(k)));
    return MapField(g, std::move(vals), Provenance::analytic);
}

}  // namespace

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(GridSpec(cplx(0, 0), 1, 1, 3, 8, full_mask(3, 8)), invalid_input);
    CHECK_THROWS_AS(GridSpec(cplx(0, 0), 0, 1, 8, 8, full_mask(8, 8)), invalid_input);

    // Two disconnected blobs are rejected by connectivity-requiring ops.
    auto mask = full_mask(8, 8);
    for (int iy = 0; iy < 8; ++iy)
        for (int ix = 3; ix <= 4; ++ix) mask[iy * 8 + ix] = 0;
    GridSpec split(cplx(0, 0), 1, 1, 8, 8, mask);
    CHECK_FALSE(split.connected());
    CHECK_THROWS_AS(split.require_connected(), invalid_input);

    GridSpec disk = make_disk_grid(33);
    CHECK(disk.connected());
    CHECK(disk.hx() == doctest::Approx(2.0 / 32));
}

TEST_CASE("mu field validation") {
    GridSpec g = make_disk_grid(17);
    CHECK_THROWS_AS(constant_mu(g, cplx(1.0, 0.0)), invalid_input);
    CHECK_NOTHROW(constant_mu(g, cplx(0.999, 0.0)));

    // Sanitizer caps near-degenerate samples instead of rejecting.
    std::vector<cplx> vals(g.size(), cplx(1.5, 0.0));
    MuField capped(g, vals, true);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.masked(static_cast<int>(k)))
            CHECK(std::abs(capped[static_cast<int>(k)]) < 1.0);
    CHECK(capped.degenerate_flag());
}

TEST_CASE("dilatation quotient constants") {
    GridSpec g = make_disk_grid(33);
    auto value_at = [&](cplx mu_val) {
        DilatationField K = dilatation_quotient(constant_mu(g, mu_val));
        return K[g.nearest_masked(cplx(0.3, 0.2), 0.1)];
    };
    CHECK(value_at(cplx(0, 0)) == doctest::Approx(1.0));
    CHECK(value_at(cplx(0.5, 0)) == doctest::Approx(3.0));
    CHECK(value_at(cplx(0.9, 0)) == doctest::Approx(19.0));
}

TEST_CASE("tangent dilatation of unimodular-twisted coefficients") {
    GridSpec g = make_annulus_grid(65, 0.2, 1.0);
    double k = 0.4;
    std::vector<cplx> plus(g.size(), cplx(0, 0)), minus(g.size(), cplx(0, 0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.masked(static_cast<int>(i))) continue;
        cplx z = g.point(static_cast<int>(i));
        plus[i] = k * z / std::conj(z);
        minus[i] = -k * z / std::conj(z);
    }
    DilatationField kt_plus = tangent_dilatation(MuField(g, plus), cplx(0, 0));
    DilatationField kt_minus = tangent_dilatation(MuField(g, minus), cplx(0, 0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.masked(static_cast<int>(i))) continue;
        if (std::abs(g.point(static_cast<int>(i))) < 0.25) continue;
        CHECK(kt_plus[static_cast<int>(i)] ==
              doctest::Approx((1 - k) / (1 + k)).epsilon(1e-12));
        CHECK(kt_minus[static_cast<int>(i)] ==
              doctest::Approx((1 + k) / (1 - k)).epsilon(1e-12));
    }
}

TEST_CASE("dilatation chain bound holds with exact algebra") {
    std::mt19937 rng(7);
    GridSpec g = make_disk_grid(33);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        MuField mu(g, oracle::random_mu(g, 0.95, rng));
        DilatationField K = dilatation_quotient(mu);
        cplx z0(coord(rng), coord(rng));
        DilatationField Kt = tangent_dilatation(mu, z0);
        double excl = 2.0 * std::max(g.hx(), g.hy());
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!g.masked(static_cast<int>(i))) continue;
            if (std::abs(g.point(static_cast<int>(i)) - z0) <= excl) continue;
            double lo = 1.0 / K[static_cast<int>(i)];
            double hi = K[static_cast<int>(i)];
            CHECK(Kt[static_cast<int>(i)] >= lo - 1e-12);
            CHECK(Kt[static_cast<int>(i)] <= hi + 1e-12);
        }
    }
}

TEST_CASE("tangent dilatation rejects a singular center without exclusion") {
    GridSpec g = make_disk_grid(17);
    MuField mu = constant_mu(g, cplx(0.3, 0));
    CenterOptions opts;
    opts.exclusion_cells = 0.0;
    CHECK_THROWS_AS(tangent_dilatation(mu, cplx(0, 0), opts), invalid_input);
}

TEST_CASE("directional derivative on reference maps") {
    GridSpec g = make_disk_grid(129);
    MapField ident = analytic_map(g, [](cplx z) { return z; });
    MapField conj_map = analytic_map(g, [](cplx z) { return std::conj(z); });
    MapField square = analytic_map(g, [](cplx z) { return z * z; });

    cplx z(0.31, -0.17);
    CHECK(std::abs(directional_derivative(ident, z, cplx(1, 0)).value - cplx(1, 0)) < 1e-9);
    CHECK(std::abs(directional_derivative(ident, z, cplx(0, 1)).value - cplx(0, 1)) < 1e-9);
    CHECK(std::abs(directional_derivative(conj_map, z, cplx(1, 0)).value - cplx(1, 0)) < 1e-9);
    CHECK(std::abs(directional_derivative(conj_map, z, cplx(0, 1)).value - cplx(0, -1)) < 1e-9);

    // Analytic oracle 2z for the square; one-sided near the rim.
    cplx inner(0.4, 0.1);
    CHECK(std::abs(directional_derivative(square, inner, cplx(1, 0)).value -
                   2.0 * inner) < 5e-4);
    cplx near_rim = cplx(1.0, 0.0) - cplx(2 * g.hx(), 0);
    auto d = directional_derivative(square, near_rim, cplx(1, 0));
    CHECK(std::abs(d.value - 2.0 * near_rim) < 5e-3);
    CHECK(d.order == 2);
}

TEST_CASE("directional derivative converges at second order") {
    cplx z(0.21, 0.13);
    auto smooth = [](cplx w) { return std::exp(w) + 0.3 * std::conj(w) * w; };
    double errs[2];
    int sizes[2] = {65, 129};
    for (int i = 0; i < 2; ++i) {
        GridSpec g = make_disk_grid(sizes[i]);
        MapField f = analytic_map(g, smooth);
        cplx got = directional_derivative(f, z, cplx(1, 0)).value;
        cplx expect = std::exp(z) + 0.3 * (std::conj(z) + z);
        errs[i] = std::abs(got - expect);
    }
    double order = std::log2(errs[0] / errs[1]);
    CHECK(order >= 1.8);
}

TEST_CASE("tangent derivative matches symbolic values") {
    GridSpec g = make_disk_grid(257);
    MapField ident = analytic_map(g, [](cplx z) { return z; });
    MapField conj_map = analytic_map(g, [](cplx z) { return std::conj(z); });

    CHECK(std::abs(tangent_derivative(ident, cplx(0.5, 0), cplx(0, 0)) - cplx(0, 0.5) * 2.0) <
          1e-9);
    CHECK(std::abs(tangent_derivative(conj_map, cplx(0.5, 0), cplx(0, 0)) -
                   cplx(0, -1)) < 1e-9);

    RadialProfile prof = RadialProfile::log_degenerate();
    MapField radial = prof.map_field(g);
    for (double ang : {0.3, 1.7, 4.4}) {
        cplx z = std::polar(0.5, ang);
        int k = g.nearest_masked(z, 2 * g.hx());
        cplx zs = g.point(k);
        cplx got = tangent_derivative(radial, zs, cplx(0, 0));
        cplx expect = oracle::radial_tangent_derivative(zs, prof.rho(std::abs(zs)));
        CHECK(std::abs(got - expect) < 2e-4);
    }

    // Consistency with the direct directional estimate along tau = i w/|w|.
    cplx z(0.4, 0.3);
    int k = g.nearest_masked(z, 2 * g.hx());
    cplx zs = g.point(k);
    cplx tau = cplx(0, 1) * zs / std::abs(zs);
    cplx via_dir = directional_derivative(radial, zs, tau).value;
    cplx via_formula = tangent_derivative(radial, zs, cplx(0, 0));
    CHECK(std::abs(via_dir - via_formula) < 5e-3);
}

TEST_CASE("geometric tangent dilatation agrees with the coefficient form") {
    GridSpec g = make_disk_grid(257);
    MapField ident = analytic_map(g, [](cplx z) { return z; });
    CHECK(geometric_tangent_dilatation(ident, cplx(0.5, 0.2), cplx(0, 0)) ==
          doctest::Approx(1.0).epsilon(1e-8));

    double k = 0.3;
    MapField affine = analytic_map(g, [&](cplx z) { return z + k * std::conj(z); });
    MuField mu_aff = constant_mu(g, cplx(k, 0));
    DilatationField kt = tangent_dilatation(mu_aff, cplx(0, 0));
    for (double x : {0.3, 0.55, 0.8}) {
        cplx z(x, 0.0);
        int cell = g.nearest_masked(z, 2 * g.hx());
        double got = geometric_tangent_dilatation(affine, z, cplx(0, 0));
        CHECK(got == doctest::Approx(kt[cell]).epsilon(1e-6));
    }

    RadialProfile prof = RadialProfile::log_degenerate();
    MapField radial = prof.map_field(g);
    for (double r : {0.3, 0.5, 0.75}) {
        cplx z = std::polar(r, 1.1);
        int cell = g.nearest_masked(z, 2 * g.hx());
        cplx zs = g.point(cell);
        double got = geometric_tangent_dilatation(radial, zs, cplx(0, 0));
        double expect = oracle::log_profile_dilatation(std::abs(zs));
        CHECK(got == doctest::Approx(expect).epsilon(2e-3));
    }
}

TEST_CASE("geometric tangent dilatation rejects degenerate Jacobians") {
    GridSpec g = make_disk_grid(65);
    MapField flat = analytic_map(g, [](cplx) { return cplx(0.25, 0.25); });
    CHECK_THROWS_AS(geometric_tangent_dilatation(flat, cplx(0.3, 0), cplx(0, 0)),
                    numeric_failure);
}

TEST_CASE("jacobian of constant-coefficient maps") {
    GridSpec g = make_disk_grid(65);
    MapField ident = analytic_map(g, [](cplx z) { return z; });
    MapField conj_map = analytic_map(g, [](cplx z) { return std::conj(z); });
    MapField mixed = analytic_map(g, [](cplx z) { return 2.0 * z + 0.5 * std::conj(z); });
    RealField j1 = jacobian(ident), j2 = jacobian(conj_map), j3 = jacobian(mixed);
    int probe = g.nearest_masked(cplx(0.2, -0.4), 0.1);
    CHECK(j1[probe] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(j2[probe] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(j3[probe] == doctest::Approx(3.75).epsilon(1e-10));
}

TEST_CASE("jacobian positivity for an orientation-preserving map") {
    GridSpec g = make_disk_grid(513);
    RadialProfile prof = RadialProfile::power(2.0);
    MapField f = prof.map_field(g);
    RealField j = jacobian(f);
    int pos = 0, tot = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        if (j[static_cast<int>(k)] == 0.0) continue;
        if (std::abs(g.point(static_cast<int>(k))) < 0.02) continue;
        ++tot;
        if (j[static_cast<int>(k)] > 0.0) ++pos;
    }
    CHECK(static_cast<double>(pos) / tot >= 0.99);
}

TEST_CASE("radial profile coefficients") {
    GridSpec g = make_annulus_grid(129, 0.15, 1.0);

    // identity profile: mu vanishes
    RadialProfile ident = RadialProfile::power(1.0);
    MuField mu0 = ident.mu_field(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.masked(static_cast<int>(k)))
            CHECK(std::abs(mu0[static_cast<int>(k)]) < 1e-14);

    // power profile: |mu| constant (alpha-1)/(alpha+1)
    double alpha = 3.0;
    RadialProfile pow_prof = RadialProfile::power(alpha);
    MuField mup = pow_prof.mu_field(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.masked(static_cast<int>(k)))
            CHECK(std::abs(mup[static_cast<int>(k)]) ==
                  doctest::Approx((alpha - 1) / (alpha + 1)).epsilon(1e-12));

    // log-degenerate profile: dilatation quotient 1 + log(1/r)
    RadialProfile logp = RadialProfile::log_degenerate();
    MuField mul = logp.mu_field(g);
    DilatationField K = dilatation_quotient(mul);
    for (double r : {0.2, 0.4, 0.8}) {
        int k = g.nearest_masked(std::polar(r, 0.7), 2 * g.hx());
        double rr = std::abs(g.point(k));
        CHECK(K[k] == doctest::Approx(oracle::log_profile_dilatation(rr)).epsilon(1e-10));
    }

    // derived coefficient matches the discrete Wirtinger quotient of the map
    MapField f = logp.map_field(g);
    WirtingerDerivatives d = wirtinger(f);
    for (double r : {0.3, 0.6}) {
        int k = g.nearest_masked(std::polar(r, 2.0), 2 * g.hx());
        REQUIRE(d.valid[k]);
        cplx quotient = d.fzbar[k] / d.fz[k];
        CHECK(std::abs(quotient - mul[k]) < 2e-3);
    }

    CHECK_THROWS_AS(RadialProfile::custom_table({0.1, 0.5, 1.0}, {0.2, 0.6, 1.0}, {}),
                    invalid_input);
}
