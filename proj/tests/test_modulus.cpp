#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "beltrami/modulus.hpp"
#include "beltrami/radial_profile.hpp"
#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace qc;

namespace {

constexpr double kPi = std::numbers::pi;

DilatationField radial_dilatation(const GridSpec& g,
                                  const std::function<double(double)>& f) {
    std::vector<double> vals(g.size(), 1.0);
    double floor_r = 0.5 * std::max(g.hx(), g.hy());
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        vals[k] = f(std::max(std::abs(g.point(static_cast<int>(k))), floor_r));
    }
    return DilatationField(g, std::move(vals), cplx(0, 0));
}

std::pair<std::vector<int>, std::vector<int>> annulus_end_sets(const GridSpec& g,
                                                               double r_in,
                                                               double r_out) {
    std::vector<int> E, F;
    double h = g.hx();
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        double r = std::abs(g.point(static_cast<int>(k)));
        if (r < r_in + h) E.push_back(static_cast<int>(k));
        if (r > r_out - h) F.push_back(static_cast<int>(k));
    }
    return {std::move(E), std::move(F)};
}

}  // namespace

TEST_CASE("closed-form weighted minimum") {
    WeightedMinProblem two{{1.0, 1.0}, {1.0, 4.0}, 2.0};
    WeightedMinSolution sol = weighted_inf_closed_form(two);
    CHECK(sol.value == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(sol.minimizer[0] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(sol.minimizer[1] == doctest::Approx(0.2).epsilon(1e-14));

    // uniform values with unit mass: the optimum is the constant density
    WeightedMinProblem uniform{{0.25, 0.25, 0.25, 0.25}, {3.0, 3.0, 3.0, 3.0}, 2.0};
    WeightedMinSolution u = weighted_inf_closed_form(uniform);
    CHECK(u.value == doctest::Approx(3.0).epsilon(1e-14));
    for (double a : u.minimizer) CHECK(a == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(weighted_inf_closed_form(WeightedMinProblem{{1.0}, {0.0}, 2.0}),
                    invalid_input);
    CHECK_THROWS_AS(weighted_inf_closed_form(WeightedMinProblem{{1.0}, {1.0}, 1.0}),
                    invalid_input);
}

TEST_CASE("closed form beats random admissible densities") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> wdist(0.1, 2.0), vdist(0.2, 5.0);
    for (double p : {1.5, 2.0, 3.0}) {
        for (int trial = 0; trial < 30; ++trial) {
            int n = 2 + static_cast<int>(rng() % 19);
            WeightedMinProblem prob;
            prob.p = p;
            for (int i = 0; i < n; ++i) {
                prob.weights.push_back(wdist(rng));
                prob.values.push_back(vdist(rng));
            }
            WeightedMinSolution sol = weighted_inf_closed_form(prob);

            // normalization of the minimizer is exact
            double mass = 0.0, at_min = 0.0;
            for (int i = 0; i < n; ++i) {
                mass += prob.weights[i] * sol.minimizer[i];
                at_min += prob.weights[i] * prob.values[i] *
                          std::pow(sol.minimizer[i], p);
            }
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(at_min == doctest::Approx(sol.value).epsilon(1e-10));

            double brute =
                oracle::brute_force_weighted_min(prob.weights, prob.values, p, 400, rng);
            CHECK(sol.value <= brute * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("ring modulus of the joining family") {
    GridSpec g = make_annulus_grid(257, 1.0, 2.0, cplx(0, 0), 0.1);
    auto [E, F] = annulus_end_sets(g, 1.0, 2.0);
    ModulusResult m = discrete_modulus(g, CurveFamilySpec::joining(E, F));
    double exact = 2.0 * kPi / std::log(2.0);
    CHECK(m.value == doctest::Approx(exact).epsilon(0.08));
    CHECK(m.min_line_integral >= 0.98);
    CHECK_FALSE(m.infinite_proxy);

    // certified density: line integral along an explicit radial segment
    std::vector<cplx> ray;
    for (int i = 0; i <= 400; ++i) ray.push_back(cplx(1.0 + i * (1.0 / 400), 1e-4));
    CurveTrace t = trace_polyline(g, ray);
    double integral = 0.0;
    for (std::size_t i = 0; i < t.cells.size(); ++i)
        integral += m.density[t.cells[i]] * t.lengths[i];
    CHECK(integral >= 0.95);
}

TEST_CASE("segment pair intersecting all mid circles") {
    // Two opposite radial segments in a box: both meet every circle
    // S(0, rho), rho in (1, 2), so the plane bound (2/pi) log 2 applies to
    // the family joining them.
    GridSpec g(cplx(-2.5, -2.5), 5.0, 5.0, 257, 257, full_mask(257, 257));
    std::vector<int> E, F;
    double h = g.hx();
    for (std::size_t k = 0; k < g.size(); ++k) {
        cplx z = g.point(static_cast<int>(k));
        if (std::abs(z.imag()) < 0.8 * h && z.real() >= 1.0 && z.real() <= 2.0)
            E.push_back(static_cast<int>(k));
        if (std::abs(z.imag()) < 0.8 * h && z.real() <= -1.0 && z.real() >= -2.0)
            F.push_back(static_cast<int>(k));
    }
    REQUIRE(!E.empty());
    REQUIRE(!F.empty());
    ModulusResult m = discrete_modulus(g, CurveFamilySpec::joining(E, F));
    CHECK(m.value >= (2.0 / kPi) * std::log(2.0));
}

TEST_CASE("joining families fail across disconnected masks") {
    auto mask = full_mask(65, 65);
    for (int iy = 0; iy < 65; ++iy)
        for (int ix = 31; ix <= 33; ++ix)
            mask[static_cast<std::size_t>(iy) * 65 + ix] = 0;
    GridSpec g(cplx(-1, -1), 2, 2, 65, 65, mask);
    std::vector<int> E{g.index(5, 30)}, F{g.index(60, 30)};
    // the split mask is caught by the connectivity precondition
    CHECK_THROWS_AS(discrete_modulus(g, CurveFamilySpec::joining(E, F)),
                    invalid_input);
}

TEST_CASE("zero-separation families blow up") {
    GridSpec g = make_disk_grid(65);
    std::vector<int> E{g.index(30, 32)}, F{g.index(31, 32)};
    ModulusResult m = discrete_modulus(g, CurveFamilySpec::joining(E, F));
    CHECK(m.infinite_proxy);
}

TEST_CASE("modulus grows when the family grows") {
    GridSpec g = make_disk_grid(129);
    ModulusResult full = discrete_modulus(g, CurveFamilySpec::circles(cplx(0, 0), 0.1, 0.8));
    ModulusResult narrower =
        discrete_modulus(g, CurveFamilySpec::circles(cplx(0, 0), 0.2, 0.8));
    // the narrower family is a subfamily: its modulus cannot exceed the
    // full one
    CHECK(narrower.value <= full.value * (1.0 + 1e-9));
}

TEST_CASE("circle family modulus matches the harmonic oracle") {
    GridSpec g = make_disk_grid(257);
    double eps = 0.1, eps0 = 0.8;
    ModulusResult m =
        discrete_modulus(g, CurveFamilySpec::circles(cplx(0, 0), eps, eps0));
    double exact = std::log(eps0 / eps) / (2.0 * kPi);
    CHECK(m.value == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("reciprocal ring-norm bound") {
    GridSpec g = make_disk_grid(257);
    double eps = 0.05, eps0 = 0.6;

    DilatationField one = radial_dilatation(g, [](double) { return 1.0; });
    double b1 = circle_family_modulus_lower(one, cplx(0, 0), eps, eps0);
    CHECK(b1 == doctest::Approx(std::log(eps0 / eps) / (2 * kPi)).epsilon(2e-3));

    DilatationField two = radial_dilatation(g, [](double) { return 2.0; });
    double b2 = circle_family_modulus_lower(two, cplx(0, 0), eps, eps0);
    CHECK(b2 == doctest::Approx(0.5 * b1).epsilon(2e-3));

    DilatationField logk =
        radial_dilatation(g, [](double r) { return 1.0 + std::log(1.0 / r); });
    double b3 = circle_family_modulus_lower(logk, cplx(0, 0), eps, eps0);
    double oracle_b3 = (std::log(1.0 + std::log(1.0 / eps)) -
                        std::log(1.0 + std::log(1.0 / eps0))) /
                       (2.0 * kPi);
    CHECK(b3 == doctest::Approx(oracle_b3).epsilon(5e-3));

    // antitone in the dilatation: pointwise larger field, smaller bound
    CHECK(b3 <= b1);
}

TEST_CASE("optimal radial weight") {
    GridSpec g = make_disk_grid(257);
    double eps = 0.1, eps0 = 0.6;
    DilatationField one = radial_dilatation(g, [](double) { return 1.0; });

    const int n = 101;
    // the optimal weight itself: equality up to quadrature roundoff
    {
        std::vector<double> eta(n);
        for (int i = 0; i < n; ++i) {
            double r = eps + (eps0 - eps) * i / (n - 1);
            eta[i] = 1.0 / (2.0 * kPi * r);  // proportional to the optimal weight
        }
        EtaComparison cmp = eta0_optimality(one, cplx(0, 0), eps, eps0, eta, n - 1);
        CHECK(cmp.lhs == doctest::Approx(cmp.rhs).epsilon(1e-6));
    }

    // uniform weight: closed forms on both sides
    {
        std::vector<double> eta(n, 1.0 / (eps0 - eps));
        EtaComparison cmp = eta0_optimality(one, cplx(0, 0), eps, eps0, eta, n - 1);
        CHECK(cmp.lhs <= cmp.rhs + 1e-12);
        CHECK(cmp.lhs ==
              doctest::Approx(2.0 * kPi / std::log(eps0 / eps)).epsilon(1e-3));
        CHECK(cmp.rhs ==
              doctest::Approx(kPi * (eps0 + eps) / (eps0 - eps)).epsilon(1e-3));
    }

    // randomized piecewise-constant weights never beat the optimum
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    DilatationField logk =
        radial_dilatation(g, [](double r) { return 1.0 + std::log(1.0 / r); });
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> eta(n);
        int pieces = 4 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i)
            eta[i] = unif(rng) * (1 + (i * pieces / n) % 2);
        const DilatationField& field = trial % 2 == 0 ? one : logk;
        EtaComparison cmp = eta0_optimality(field, cplx(0, 0), eps, eps0, eta, n - 1);
        CHECK(cmp.lhs <= cmp.rhs + 1e-8);
    }

    CHECK_THROWS_AS(eta0_optimality(one, cplx(0, 0), eps, eps0,
                                    std::vector<double>(n, 0.0), n - 1),
                    invalid_input);
}

TEST_CASE("pushforward bound for reference maps") {
    GridSpec g = make_disk_grid(257);
    double eps = 0.1, eps0 = 0.5;

    // identity: both sides near the harmonic value
    {
        std::vector<cplx> vals(g.size(), cplx(0, 0));
        for (std::size_t k = 0; k < g.size(); ++k)
            if (g.masked(static_cast<int>(k))) vals[k] = g.point(static_cast<int>(k));
        MapField ident(g, std::move(vals), Provenance::analytic);
        MuField mu0 = constant_mu(g, cplx(0, 0));
        PushforwardReport rep =
            pushforward_modulus_check(ident, mu0, cplx(0, 0), eps, eps0);
        double harmonic = std::log(eps0 / eps) / (2 * kPi);
        CHECK(rep.bound_satisfied);
        CHECK(rep.image_modulus == doctest::Approx(harmonic).epsilon(0.05));
        CHECK(rep.lower_bound == doctest::Approx(harmonic).epsilon(0.01));
    }

    // constant-coefficient affine map
    {
        double k = 0.4;
        std::vector<cplx> vals(g.size(), cplx(0, 0));
        for (std::size_t kk = 0; kk < g.size(); ++kk)
            if (g.masked(static_cast<int>(kk))) {
                cplx z = g.point(static_cast<int>(kk));
                vals[kk] = (z + k * std::conj(z)) / (1 + k);
            }
        MapField affine(g, std::move(vals), Provenance::analytic);
        MuField mu = constant_mu(g, cplx(k, 0));
        PushforwardReport rep =
            pushforward_modulus_check(affine, mu, cplx(0, 0), eps, eps0);
        CHECK(rep.bound_satisfied);
        CHECK(rep.image_modulus >= rep.lower_bound * 0.95);
    }

    // radial degenerate map
    {
        RadialProfile prof = RadialProfile::log_degenerate();
        MapField f = prof.map_field(g);
        MuField mu = prof.mu_field(g);
        PushforwardReport rep = pushforward_modulus_check(f, mu, cplx(0, 0), eps, eps0);
        CHECK(rep.bound_satisfied);
    }
}
