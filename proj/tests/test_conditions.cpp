#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "beltrami/conditions.hpp"
#include "beltrami/radial_profile.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace qc;

namespace {

constexpr double kPi = std::numbers::pi;

RealField radial_real_field(const GridSpec& g, const std::function<double(double)>& f,
                            cplx center = {0, 0}) {
    RealField out(g, 0.0);
    double floor_r = 0.5 * std::max(g.hx(), g.hy());
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        double r = std::max(std::abs(g.point(static_cast<int>(k)) - center), floor_r);
        out[static_cast<int>(k)] = f(r);
    }
    return out;
}

DilatationField radial_dilatation(const GridSpec& g,
                                  const std::function<double(double)>& f,
                                  cplx center = {0, 0}) {
    RealField base = radial_real_field(g, f, center);
    return DilatationField(g, base.values(), center);
}

// Radial coefficient whose tangent dilatation around 0 equals K(r): the
// tangentially stretching twist mu = -k(r) z/zbar with k = (K-1)/(K+1).
MuField mu_with_tangent_dilatation(const GridSpec& g,
                                   const std::function<double(double)>& K) {
    std::vector<cplx> vals(g.size(), cplx(0, 0));
    double floor_r = 0.5 * std::max(g.hx(), g.hy());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.masked(static_cast<int>(i))) continue;
        cplx z = g.point(static_cast<int>(i));
        double r = std::max(std::abs(z), floor_r);
        double kk = (K(r) - 1.0) / (K(r) + 1.0);
        if (std::abs(z) < floor_r) continue;
        vals[i] = -kk * z / std::conj(z);
    }
    return MuField(g, std::move(vals), /*sanitize=*/true);
}

}  // namespace

TEST_CASE("bmo estimate basics") {
    GridSpec g = make_disk_grid(129);
    RealField constant(g, 3.7);
    CHECK(bmo_norm_estimate(constant) == doctest::Approx(0.0).epsilon(1e-12));

    RealField rex(g, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.masked(static_cast<int>(k)))
            rex[static_cast<int>(k)] = g.point(static_cast<int>(k)).real();
    DiscSampler few{64}, many{128};
    double v1 = bmo_norm_estimate(rex, few);
    double v2 = bmo_norm_estimate(rex, many);
    CHECK(v1 > 0.0);
    CHECK(v1 <= 2.0);  // diameter-scaled oscillation bound
    CHECK(std::abs(v1 - v2) <= 0.10 * std::max(v1, v2));

    RealField logf = radial_real_field(g, [](double r) { return std::log(1.0 / r); });
    double v3 = bmo_norm_estimate(logf);
    CHECK(std::isfinite(v3));
    CHECK(v3 < 3.0);

    GridSpec tiny = make_disk_grid(8, 1.0);
    RealField small(tiny, 0.0);
    DiscSampler strict;
    strict.min_radius_cells = 6.0;
    CHECK_THROWS_AS(bmo_norm_estimate(small, strict), invalid_input);
}

TEST_CASE("mean oscillation scan at a point") {
    GridSpec g = make_disk_grid(513);

    RealField constant(g, 5.0);
    FmoResult c = fmo_indicator(constant, cplx(0, 0));
    CHECK(c.verdict == Verdict::holds);
    for (double osc : c.oscillation) CHECK(osc == doctest::Approx(0.0));

    // log(1/|z|): oscillation sequence stays bounded while plain means
    // diverge, so the sufficient mean test fails yet the scan holds.
    RealField logf = radial_real_field(g, [](double r) { return std::log(1.0 / r); });
    FmoResult l = fmo_indicator(logf, cplx(0, 0));
    CHECK(l.verdict == Verdict::holds);
    CHECK(l.sufficient_test != Verdict::holds);
    CHECK(l.means.front() < l.means.back());

    // 1/|z| growth: oscillations blow up over the resolved radii.
    RealField inv = radial_real_field(g, [](double r) { return 1.0 / r; });
    FmoResult i = fmo_indicator(inv, cplx(0, 0));
    CHECK(i.verdict == Verdict::fails);
}

TEST_CASE("oscillation verdicts are scale and shift invariant") {
    GridSpec g = make_disk_grid(257);
    RealField logf = radial_real_field(g, [](double r) { return std::log(1.0 / r); });
    FmoResult base = fmo_indicator(logf, cplx(0, 0));

    RealField shifted(g, 0.0), scaled(g, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        shifted[static_cast<int>(k)] = logf[static_cast<int>(k)] + 11.0;
        scaled[static_cast<int>(k)] = 4.5 * logf[static_cast<int>(k)];
    }
    CHECK(fmo_indicator(shifted, cplx(0, 0)).verdict == base.verdict);
    CHECK(fmo_indicator(scaled, cplx(0, 0)).verdict == base.verdict);
}

TEST_CASE("weighted ring growth stays bounded for oscillation-finite data") {
    GridSpec g = make_disk_grid(513);

    RealField one(g, 1.0);
    GrowthCheck gc = fmo_growth_check(one, cplx(0, 0));
    REQUIRE(gc.ratios.size() >= 3);
    CHECK(gc.verdict == Verdict::holds);

    // 1-D quadrature oracle for the ring integral of phi = 1:
    //   2 pi int_eps^eps0 dr / (r log^2(1/r)).
    double eps = gc.radii.back();
    double eps0 = 0.3;  // the scan's radius cap
    double expected = oracle::simpson(
        [](double r) { return 2.0 * kPi / (r * std::log(1.0 / r) * std::log(1.0 / r)); },
        eps, eps0, 4000);
    double got = gc.ratios.back() * std::log(std::log(1.0 / eps));
    CHECK(got == doctest::Approx(expected).epsilon(0.05));

    RealField zero(g, 0.0);
    GrowthCheck gz = fmo_growth_check(zero, cplx(0, 0));
    for (double v : gz.ratios) CHECK(v == doctest::Approx(0.0));

    RealField logf = radial_real_field(g, [](double r) { return std::log(1.0 / r); });
    GrowthCheck gl = fmo_growth_check(logf, cplx(0, 0));
    CHECK(gl.verdict == Verdict::holds);
}

TEST_CASE("circle averages and ring norms") {
    GridSpec g = make_disk_grid(257);

    DilatationField unit = radial_dilatation(g, [](double) { return 1.0; });
    for (double eps : {0.1, 0.35, 0.7})
        CHECK(circle_average(unit, cplx(0, 0), eps) == doctest::Approx(1.0).epsilon(1e-9));

    DilatationField logk =
        radial_dilatation(g, [](double r) { return 1.0 + std::log(1.0 / r); });
    for (double eps : {0.1, 0.3, 0.6}) {
        CHECK(circle_average(logk, cplx(0, 0), eps) ==
              doctest::Approx(1.0 + std::log(1.0 / eps)).epsilon(2e-3));
    }

    // Radial-profile dilatation has the same log growth class.
    RadialProfile prof = RadialProfile::log_degenerate();
    MuField mu = prof.mu_field(g);
    DilatationField Kt = tangent_dilatation(mu, cplx(0, 0));
    for (double eps : {0.1, 0.25, 0.5})
        CHECK(circle_average(Kt, cplx(0, 0), eps) ==
              doctest::Approx(1.0 + std::log(1.0 / eps)).epsilon(5e-3));

    // ring_norm = average times covered arc length, by construction.
    for (double r : {0.2, 0.5}) {
        double avg = circle_average(unit, cplx(0, 0), r);
        double norm = ring_norm(unit, cplx(0, 0), r);
        CHECK(norm == doctest::Approx(avg * 2.0 * kPi * r).epsilon(1e-10));
        CHECK(norm == doctest::Approx(2.0 * kPi * r).epsilon(1e-9));
    }

    // Half-disk: arcs cover half the circle.
    auto half_mask = disk_mask(cplx(-1.05, -1.05), 2.1, 2.1, 257, 257, cplx(0, 0), 1.0);
    for (int iy = 0; iy < 257; ++iy)
        for (int ix = 0; ix < 257; ++ix) {
            cplx z = cplx(-1.05, -1.05) + cplx(ix * 2.1 / 256, iy * 2.1 / 256);
            if (z.imag() < 0) half_mask[static_cast<std::size_t>(iy) * 257 + ix] = 0;
        }
    GridSpec half(cplx(-1.05, -1.05), 2.1, 2.1, 257, 257, half_mask);
    DilatationField half_unit(half, std::vector<double>(half.size(), 1.0), cplx(0, 0));
    for (double r : {0.3, 0.6})
        CHECK(ring_norm(half_unit, cplx(0, 0), r) ==
              doctest::Approx(kPi * r).epsilon(0.02));

    // Arcs shorter than four cells are rejected.
    CHECK_THROWS_AS(circle_average(unit, cplx(0, 0), 0.004), invalid_input);
}

TEST_CASE("divergence of the reciprocal ring-norm integral") {
    GridSpec g = make_disk_grid(257);

    DilatationField unit = radial_dilatation(g, [](double) { return 1.0; });
    DivergenceEstimate d1 = divergence_integral(unit, cplx(0, 0), 0.5);
    CHECK(d1.verdict == Verdict::holds);
    // harmonic oracle (1/2pi) log(delta/eps)
    for (std::size_t i = 0; i < d1.eps.size(); ++i)
        CHECK(d1.partial[i] ==
              doctest::Approx(std::log(0.5 / d1.eps[i]) / (2.0 * kPi)).epsilon(0.02));

    DilatationField logk =
        radial_dilatation(g, [](double r) { return 1.0 + std::log(1.0 / r); });
    DivergenceEstimate d2 = divergence_integral(logk, cplx(0, 0), 0.5);
    CHECK(d2.verdict == Verdict::holds);
    for (std::size_t i = 0; i < d2.eps.size(); ++i) {
        double expect = (std::log(1.0 + std::log(1.0 / d2.eps[i])) -
                         std::log(1.0 + std::log(2.0))) /
                        (2.0 * kPi);
        CHECK(d2.partial[i] == doctest::Approx(expect).epsilon(0.03));
    }

    // ||K^T||_1 = 2 pi for K^T = 1/r: the integral converges.
    DilatationField inv = radial_dilatation(g, [](double r) { return 1.0 / r; });
    DivergenceEstimate d3 = divergence_integral(inv, cplx(0, 0), 0.5);
    CHECK(d3.verdict == Verdict::fails);
    CHECK(d3.converging_evidence);
}

TEST_CASE("divergence verdict for constant dilatations at interior points") {
    GridSpec g = make_disk_grid(193);
    for (double c : {0.5, 1.0, 3.0}) {
        DilatationField field = radial_dilatation(g, [&](double) { return c; });
        for (cplx z0 : {cplx(0, 0), cplx(0.3, -0.2)}) {
            DivergenceEstimate d = divergence_integral(field, z0, 0.4);
            CHECK(d.verdict == Verdict::holds);
        }
    }
}

TEST_CASE("gauge integrals over the disk") {
    GridSpec g = make_disk_grid(513);
    PhiSpec expg = PhiSpec::exp_alpha(1.0);

    DilatationField unit = radial_dilatation(g, [](double) { return 1.0; });
    PhiIntegral p1 = phi_integral(unit, expg);
    CHECK(p1.finite);
    CHECK(p1.value == doctest::Approx(kPi * std::exp(1.0)).epsilon(0.02));

    DilatationField zero(g, std::vector<double>(g.size(), 0.0));
    PhiIntegral p0 = phi_integral(zero, PhiSpec::power(2.0));
    CHECK(p0.finite);
    CHECK(p0.value == doctest::Approx(0.0));

    DilatationField logk =
        radial_dilatation(g, [](double r) { return 1.0 + std::log(1.0 / r); });
    PhiIntegral p2 = phi_integral(logk, expg);
    CHECK(p2.finite);
    // radial oracle: int Phi(K) dm = 2 pi e int_0^1 r (1/r) dr = 2 pi e
    CHECK(p2.value == doctest::Approx(2.0 * kPi * std::exp(1.0)).epsilon(0.03));

    DilatationField huge = radial_dilatation(g, [](double r) { return 800.0 / r; });
    PhiIntegral p3 = phi_integral(huge, expg);
    CHECK_FALSE(p3.finite);
}

TEST_CASE("the five gauge criteria co-classify") {
    auto expect_all = [](const PhiSpec& phi, Verdict want) {
        PhiCriteria crit = phi_divergence_criteria(phi);
        INFO(phi.name());
        CHECK(crit.reference == want);
        for (Verdict v : crit.criteria) CHECK(v == want);
        CHECK(crit.all_agree);
    };
    expect_all(PhiSpec::exp_alpha(1.0), Verdict::holds);
    expect_all(PhiSpec::exp_alpha(2.0), Verdict::holds);
    expect_all(PhiSpec::log_composite(), Verdict::holds);
    expect_all(PhiSpec::power(1.5), Verdict::fails);
    expect_all(PhiSpec::power(2.0), Verdict::fails);
    expect_all(PhiSpec::power(3.0), Verdict::fails);
}

TEST_CASE("short gauge tables stay inconclusive") {
    std::vector<double> t{0.0, 1.0, 2.0, 3.0}, v{1.0, 2.0, 4.0, 8.0};
    PhiCriteria crit = phi_divergence_criteria(PhiSpec::table(t, v));
    CHECK(crit.reference == Verdict::inconclusive);
}

TEST_CASE("gauge shape validation") {
    std::vector<double> t{0, 1, 2, 3, 4};
    std::vector<double> concave{1.0, 10.0, 14.0, 16.0, 17.0};
    CHECK_THROWS_AS(PhiSpec::table(t, concave), invalid_input);
    CHECK_THROWS_AS(PhiSpec::power(0.5), invalid_input);
}

TEST_CASE("log-scale smallness ratios") {
    GridSpec g = make_disk_grid(513);
    DilatationField unit = radial_dilatation(g, [](double) { return 1.0; });

    PsiFamily psi0(0, 0.64);
    LogScaleResult r0 = log_scale_condition(unit, cplx(0, 0), psi0, 10);
    REQUIRE(r0.ratios.size() >= 4);
    CHECK(r0.verdict == Verdict::holds);
    for (std::size_t i = 0; i < r0.eps.size(); ++i) {
        double expect = 2.0 * kPi / std::log(0.64 / r0.eps[i]);
        CHECK(r0.ratios[i] == doctest::Approx(expect).epsilon(0.05));
    }

    PsiFamily psi1(1, 0.2);
    LogScaleResult r1 = log_scale_condition(unit, cplx(0, 0), psi1, 10);
    REQUIRE(r1.ratios.size() >= 4);
    CHECK(r1.verdict != Verdict::fails);
    for (std::size_t i = 0; i < r1.eps.size(); ++i) {
        double u0 = std::log(1.0 / 0.2), ue = std::log(1.0 / r1.eps[i]);
        double numer = 2.0 * kPi * (1.0 / u0 - 1.0 / ue);
        double I = std::log(ue) - std::log(u0);
        CHECK(r1.ratios[i] == doctest::Approx(numer / (I * I)).epsilon(0.05));
    }

    DilatationField expk =
        radial_dilatation(g, [](double r) { return std::exp(0.5 / r); });
    LogScaleResult r2 = log_scale_condition(expk, cplx(0, 0), PsiFamily(0, 0.5), 10);
    CHECK(r2.verdict == Verdict::fails);
}

TEST_CASE("condition report routes") {
    ConditionConfig cfg;
    cfg.eps0 = 0.3;
    cfg.levels = 10;

    // Zero coefficient: every route holds, FMO reported first, at interior
    // and boundary points alike, independent of resolution.
    for (int n : {129, 193}) {
        GridSpec g = make_disk_grid(n);
        MuField mu0 = constant_mu(g, cplx(0, 0));
        std::vector<cplx> pts{cplx(0, 0), cplx(0.5, 0.2), cplx(1, 0), cplx(0, -1)};
        ConditionReport rep = condition_report(mu0, pts, cfg);
        for (const auto& p : rep.points) {
            CHECK(p.fmo_route == Verdict::holds);
            CHECK(p.route == TheoremRoute::fmo);
        }
    }

    // Log-degenerate radial twist: plain means of K^T blow up at 0, the
    // circle averages stay in the log class, so the report falls through
    // to the log-average route.
    {
        GridSpec g = make_disk_grid(513);
        RadialProfile prof = RadialProfile::log_degenerate();
        MuField mu = prof.mu_field(g);
        ConditionReport rep = condition_report(mu, {cplx(0, 0)}, cfg);
        REQUIRE(rep.points.size() == 1);
        CHECK(rep.points[0].fmo_route != Verdict::holds);
        CHECK(rep.points[0].log_average == Verdict::holds);
        CHECK(rep.points[0].route == TheoremRoute::log_average);
    }

    // Exponentially degenerate twist: nothing is established at 0.
    {
        GridSpec g = make_disk_grid(513);
        MuField mu = mu_with_tangent_dilatation(
            g, [](double r) { return std::exp(0.2 / r); });
        ConditionReport rep = condition_report(mu, {cplx(0, 0)}, cfg);
        REQUIRE(rep.points.size() == 1);
        CHECK(rep.points[0].route == TheoremRoute::none_established);
    }
}

TEST_CASE("condition report honours a supplied dominator") {
    GridSpec g = make_disk_grid(257);
    RadialProfile prof = RadialProfile::log_degenerate();
    MuField mu = prof.mu_field(g);

    // Dominator: the tangent dilatation itself is oscillation-finite at 0
    // even though its plain means diverge.
    ConditionConfig cfg;
    cfg.eps0 = 0.3;
    DilatationField Kt = tangent_dilatation(mu, cplx(0, 0));
    cfg.dominator = Kt.as_real_field();
    ConditionReport rep = condition_report(mu, {cplx(0, 0)}, cfg);
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].fmo_route == Verdict::holds);
    CHECK(rep.points[0].route == TheoremRoute::fmo);
}
