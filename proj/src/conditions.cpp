#include "beltrami/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace qc {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::inconclusive: return "inconclusive-at-resolution";
    }
    return "?";
}

const char* to_string(TheoremRoute r) {
    switch (r) {
        case TheoremRoute::fmo: return "fmo";
        case TheoremRoute::log_average: return "log-average";
        case TheoremRoute::divergence: return "divergence";
        case TheoremRoute::phi_gauge: return "phi-gauge";
        case TheoremRoute::none_established: return "none-established";
    }
    return "?";
}

Verdict classify_bounded(const std::vector<double>& seq, const TrendRule& rule) {
    const int n = static_cast<int>(seq.size());
    if (n >= 2) {
        // Early accept for flat sequences regardless of length.
        double lo = seq[0], hi = seq[0];
        for (double v : seq) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi <= lo * (1.0 + rule.flat_tol) + 1e-12) return Verdict::holds;
    }
    if (n < 4) return Verdict::inconclusive;

    double mean = 0.0;
    for (double v : seq) mean += v;
    mean /= n;
    double scale = std::max(1.0, std::abs(mean));

    // Least-squares per-octave slope.
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = i - 0.5 * (n - 1);
        sxx += x * x;
        sxy += x * seq[i];
    }
    double slope = sxy / sxx;

    int ups = 0, grow_steps = 0;
    for (int i = 1; i < n; ++i) {
        if (seq[i] > seq[i - 1]) ++ups;
        if (seq[i] - seq[i - 1] >= rule.growth_increment * scale) ++grow_steps;
    }
    bool mostly_up = ups >= static_cast<int>(0.8 * (n - 1));
    if (mostly_up && grow_steps >= n - 2)
        return Verdict::fails;  // steady growth through the resolved range
    if (slope <= rule.bounded_slope * scale) return Verdict::holds;

    // Saturation: increments shrink geometrically toward a finite level.
    bool decaying = true;
    for (int i = 2; i < n; ++i) {
        double prev = seq[i - 1] - seq[i - 2];
        double cur = seq[i] - seq[i - 1];
        if (cur > std::max(0.7 * prev, 0.02 * scale)) decaying = false;
    }
    if (decaying && seq[n - 1] - seq[n - 2] <= 0.1 * scale) return Verdict::holds;
    return Verdict::inconclusive;
}

double bmo_norm_estimate(const RealField& u, const DiscSampler& sampler) {
    const GridSpec& g = u.grid();
    double h = std::max(g.hx(), g.hy());
    double r_min = sampler.min_radius_cells * h;
    double r_max = sampler.max_radius_frac * std::min(g.width(), g.height());

    // Distance-to-boundary probe: the largest disc around a cell that stays
    // inside the mask, found by shrinking when any rim sample is outside.
    auto fits = [&](cplx c, double r) {
        const int probes = 16;
        for (int i = 0; i < probes; ++i) {
            double th = 2.0 * std::numbers::pi * i / probes;
            cplx p = c + r * cplx(std::cos(th), std::sin(th));
            double fx = (p.real() - g.origin().real()) / g.hx();
            double fy = (p.imag() - g.origin().imag()) / g.hy();
            int ix = static_cast<int>(std::lround(fx));
            int iy = static_cast<int>(std::lround(fy));
            if (!g.inside(ix, iy)) return false;
        }
        return true;
    };

    std::vector<std::pair<cplx, double>> discs;
    int stride = std::max(1, static_cast<int>(std::sqrt(
                                  static_cast<double>(g.masked_count()) /
                                  std::max(1, sampler.target_count))));
    for (int iy = 0; iy < g.ny(); iy += stride) {
        for (int ix = 0; ix < g.nx(); ix += stride) {
            if (!g.inside(ix, iy)) continue;
            cplx c = g.point(ix, iy);
            double r = r_max;
            while (r >= r_min && !fits(c, r)) r *= 0.7;
            if (r >= r_min) discs.emplace_back(c, r);
        }
    }
    if (discs.size() < 10)
        throw invalid_input("fewer than 10 discs fit the mask");

    double best = 0.0;
    for (const auto& [c, r] : discs) {
        double sum = 0.0;
        int count = 0;
        int ix0 = std::max(0, static_cast<int>((c.real() - r - g.origin().real()) / g.hx()));
        int ix1 = std::min(g.nx() - 1,
                           static_cast<int>((c.real() + r - g.origin().real()) / g.hx()) + 1);
        int iy0 = std::max(0, static_cast<int>((c.imag() - r - g.origin().imag()) / g.hy()));
        int iy1 = std::min(g.ny() - 1,
                           static_cast<int>((c.imag() + r - g.origin().imag()) / g.hy()) + 1);
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix) {
                if (!g.inside(ix, iy)) continue;
                if (std::abs(g.point(ix, iy) - c) > r) continue;
                sum += u.at(ix, iy);
                ++count;
            }
        if (count < 4) continue;
        double mean = sum / count;
        double osc = 0.0;
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix) {
                if (!g.inside(ix, iy)) continue;
                if (std::abs(g.point(ix, iy) - c) > r) continue;
                osc += std::abs(u.at(ix, iy) - mean);
            }
        best = std::max(best, osc / count);
    }
    return best;
}

CircleScan circle_scan(const RealField& f, cplx z0, double r, int nodes) {
    const GridSpec& g = f.grid();
    if (nodes <= 0) nodes = 4 * std::max(g.nx(), g.ny());
    CircleScan scan;
    double dtheta = 2.0 * std::numbers::pi / nodes;
    for (int i = 0; i < nodes; ++i) {
        double th = dtheta * i;
        cplx p = z0 + r * cplx(std::cos(th), std::sin(th));
        // A node counts as inside when the majority of its interpolation
        // corners is masked.
        double fx = (p.real() - g.origin().real()) / g.hx();
        double fy = (p.imag() - g.origin().imag()) / g.hy();
        int ix = static_cast<int>(std::floor(fx));
        int iy = static_cast<int>(std::floor(fy));
        if (ix < 0 || ix >= g.nx() - 1 || iy < 0 || iy >= g.ny() - 1) continue;
        double tx = fx - ix, ty = fy - iy;
        double wsum = 0.0;
        const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
        const int cx[4] = {ix, ix + 1, ix, ix + 1};
        const int cy[4] = {iy, iy, iy + 1, iy + 1};
        double val = 0.0;
        for (int c = 0; c < 4; ++c) {
            if (!g.inside(cx[c], cy[c])) continue;
            val += w[c] * f.at(cx[c], cy[c]);
            wsum += w[c];
        }
        if (wsum < 0.5) continue;
        val /= wsum;
        scan.integral += val * r * dtheta;
        scan.arc_length += r * dtheta;
    }
    scan.coverage = scan.arc_length / (2.0 * std::numbers::pi * r);
    return scan;
}

double circle_average(const DilatationField& K, cplx z0, double eps, int nodes) {
    RealField f = K.as_real_field();
    CircleScan scan = circle_scan(f, z0, eps, nodes);
    const GridSpec& g = K.grid();
    double min_arc = 4.0 * std::max(g.hx(), g.hy());
    if (scan.arc_length < min_arc)
        throw invalid_input("circle intersects the mask on arcs shorter than 4 cells");
    return scan.integral / scan.arc_length;
}

double ring_norm(const DilatationField& Kt, cplx z0, double r, int nodes) {
    RealField f = Kt.as_real_field();
    CircleScan scan = circle_scan(f, z0, r, nodes);
    const GridSpec& g = Kt.grid();
    double min_arc = 4.0 * std::max(g.hx(), g.hy());
    if (scan.arc_length < min_arc)
        throw invalid_input("circle intersects the mask on arcs shorter than 4 cells");
    return scan.integral;
}

std::vector<double> dyadic_radii(const GridSpec& grid, double eps0, int levels,
                                 double floor_cells) {
    double floor_r = floor_cells * std::max(grid.hx(), grid.hy());
    std::vector<double> radii;
    double r = eps0;
    for (int j = 0; j < levels; ++j) {
        r *= 0.5;
        if (r < floor_r) break;
        radii.push_back(r);
    }
    return radii;
}

FmoResult fmo_indicator(const RealField& phi, cplx z0, std::vector<double> radii,
                        const TrendRule& rule, double ignore_radius) {
    const GridSpec& g = phi.grid();
    if (radii.empty()) {
        double eps0 = 0.25 * std::min(g.width(), g.height());
        radii = dyadic_radii(g, 2.0 * eps0, 10, 3.0);
    }
    FmoResult out;
    for (double eps : radii) {
        double sum = 0.0;
        int count = 0;
        int reach_x = static_cast<int>(eps / g.hx()) + 1;
        int reach_y = static_cast<int>(eps / g.hy()) + 1;
        double fx = (z0.real() - g.origin().real()) / g.hx();
        double fy = (z0.imag() - g.origin().imag()) / g.hy();
        int cx = static_cast<int>(std::lround(fx));
        int cy = static_cast<int>(std::lround(fy));
        for (int iy = cy - reach_y; iy <= cy + reach_y; ++iy)
            for (int ix = cx - reach_x; ix <= cx + reach_x; ++ix) {
                if (!g.inside(ix, iy)) continue;
                double d = std::abs(g.point(ix, iy) - z0);
                if (d > eps || d <= ignore_radius) continue;
                sum += phi.at(ix, iy);
                ++count;
            }
        if (count < 8) continue;
        double mean = sum / count;
        double osc = 0.0;
        for (int iy = cy - reach_y; iy <= cy + reach_y; ++iy)
            for (int ix = cx - reach_x; ix <= cx + reach_x; ++ix) {
                if (!g.inside(ix, iy)) continue;
                double d = std::abs(g.point(ix, iy) - z0);
                if (d > eps || d <= ignore_radius) continue;
                osc += std::abs(phi.at(ix, iy) - mean);
            }
        out.radii.push_back(eps);
        out.oscillation.push_back(osc / count);
        out.means.push_back(std::abs(mean));
    }
    out.verdict = classify_bounded(out.oscillation, rule);
    out.sufficient_test = classify_bounded(out.means, rule);
    return out;
}

GrowthCheck fmo_growth_check(const RealField& phi, cplx z0, double eps0, int levels) {
    const GridSpec& g = phi.grid();
    if (eps0 <= 0.0) eps0 = 0.2 * std::min(g.width(), g.height());
    // Lemma-scale cap: the weight needs log(1/r) bounded away from zero.
    eps0 = std::min(eps0, 0.3);  // the weight needs log(1/r) > 1 margin
    GrowthCheck out;
    std::vector<double> eps_list = dyadic_radii(g, eps0, levels, 3.0);
    if (eps_list.empty()) return out;

    // Shared geometric quadrature grid in r from the smallest eps to eps0.
    double r_lo = eps_list.back();
    const int per_octave = 16;
    int steps = static_cast<int>(std::ceil(std::log2(eps0 / r_lo) * per_octave));
    std::vector<double> rg(steps + 1), ring(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        rg[i] = r_lo * std::pow(eps0 / r_lo, static_cast<double>(i) / steps);
        CircleScan scan = circle_scan(phi, z0, rg[i]);
        double w = rg[i] * std::log(1.0 / rg[i]);
        ring[i] = scan.integral / (w * w);
    }
    // Cumulative trapezoid from r upward to eps0.
    std::vector<double> cum(steps + 1, 0.0);
    for (int i = steps - 1; i >= 0; --i)
        cum[i] = cum[i + 1] + 0.5 * (ring[i] + ring[i + 1]) * (rg[i + 1] - rg[i]);

    for (double eps : eps_list) {
        // locate eps in the quadrature grid
        double t = std::log(eps / r_lo) / std::log(eps0 / r_lo) * steps;
        int i = std::clamp(static_cast<int>(std::lround(t)), 0, steps);
        double denom = std::log(std::log(1.0 / eps));
        if (!(denom > 0.0)) continue;
        out.radii.push_back(eps);
        out.ratios.push_back(cum[i] / denom);
    }
    out.verdict = classify_bounded(out.ratios);
    return out;
}

DivergenceEstimate divergence_integral(const DilatationField& Kt, cplx z0,
                                       double delta, int levels,
                                       const DivergenceRule& rule) {
    const GridSpec& g = Kt.grid();
    DivergenceEstimate out;
    std::vector<double> eps_list = dyadic_radii(g, delta, levels, 3.0);
    if (eps_list.size() < 2) return out;

    double r_lo = eps_list.back();
    const int per_octave = 16;
    int steps = static_cast<int>(std::ceil(std::log2(delta / r_lo) * per_octave));
    std::vector<double> rg(steps + 1), integrand(steps + 1);
    std::size_t bad = 0;
    RealField f = Kt.as_real_field();
    for (int i = 0; i <= steps; ++i) {
        rg[i] = r_lo * std::pow(delta / r_lo, static_cast<double>(i) / steps);
        CircleScan scan = circle_scan(f, z0, rg[i]);
        if (scan.arc_length <= 0.0 || !(scan.integral > 0.0)) {
            integrand[i] = 0.0;
            ++bad;
            continue;
        }
        integrand[i] = 1.0 / scan.integral;
    }
    if (bad > static_cast<std::size_t>(0.01 * (steps + 1)))
        throw invalid_input("ring norms unavailable on more than 1% of radii");

    std::vector<double> cum(steps + 1, 0.0);
    for (int i = steps - 1; i >= 0; --i)
        cum[i] = cum[i + 1] + 0.5 * (integrand[i] + integrand[i + 1]) * (rg[i + 1] - rg[i]);

    for (double eps : eps_list) {
        double t = std::log(eps / r_lo) / std::log(delta / r_lo) * steps;
        int i = std::clamp(static_cast<int>(std::lround(t)), 0, steps);
        out.eps.push_back(eps);
        out.partial.push_back(cum[i]);
    }

    // Increment analysis across the last dyadic refinements.
    int n = static_cast<int>(out.partial.size());
    std::vector<double> inc;
    for (int i = 1; i < n; ++i) inc.push_back(out.partial[i] - out.partial[i - 1]);
    // The first increment (delta down to delta/2) anchors the sequence.
    if (!inc.empty()) inc.insert(inc.begin(), out.partial.front());
    int w = std::min<int>(rule.window, static_cast<int>(inc.size()) - 1);
    if (w < 2) return out;

    bool positive = true;
    double min_ratio = 1e9, max_ratio = 0.0;
    for (int i = static_cast<int>(inc.size()) - w; i < static_cast<int>(inc.size()); ++i) {
        if (!(inc[i] > 0.0)) positive = false;
        if (i > 0 && inc[i - 1] > 0.0) {
            double ratio = inc[i] / inc[i - 1];
            min_ratio = std::min(min_ratio, ratio);
            max_ratio = std::max(max_ratio, ratio);
        }
    }
    if (out.partial.back() > rule.threshold && positive) {
        out.verdict = Verdict::holds;
        return out;
    }
    if (positive && min_ratio >= rule.decay_ratio) {
        out.verdict = Verdict::holds;  // stable non-decaying increments
    } else if (max_ratio <= rule.decay_ratio) {
        out.verdict = Verdict::fails;  // geometric decay: converging evidence
        out.converging_evidence = true;
    }
    return out;
}

PhiIntegral phi_integral(const DilatationField& K, const PhiSpec& phi) {
    return phi_integral(K, phi, cplx(0, 0), -1.0);
}

PhiIntegral phi_integral(const DilatationField& K, const PhiSpec& phi, cplx center,
                         double radius) {
    const GridSpec& g = K.grid();
    double cell = g.hx() * g.hy();
    PhiIntegral out;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.masked(static_cast<int>(k))) continue;
        if (radius > 0.0 && std::abs(g.point(static_cast<int>(k)) - center) > radius)
            continue;
        double t = K[static_cast<int>(k)];
        double v = t > phi.t_max() ? std::numeric_limits<double>::infinity() : phi.phi(t);
        if (!std::isfinite(v)) {
            out.finite = false;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        out.value += v * cell;
    }
    return out;
}

namespace {

// Classifies an improper integral on [x_lo, x_hi) by the decay exponent of
// its octave increments: increments scaling like step^(-a d) converge for
// a > 0 and diverge at a = 0. The exponent estimated from the last ratios
// separates the regimes; slow divergences (1/(x log x) and deeper chains)
// show a -> 0 while convergent tails keep a bounded away from zero.
Verdict classify_tail(const std::function<double(double)>& integrand, double x_lo,
                      double x_hi) {
    const double step = 2.0;
    const int per_octave = 12;
    if (!(x_hi > x_lo * 16.0)) return Verdict::inconclusive;
    int octaves = static_cast<int>(std::floor(std::log(x_hi / x_lo) / std::log(step)));
    std::vector<double> inc(octaves, 0.0);
    for (int d = 0; d < octaves; ++d) {
        double a = x_lo * std::pow(step, d);
        double prev_x = a, prev_f = integrand(a);
        for (int i = 1; i <= per_octave; ++i) {
            double x = a * std::pow(step, static_cast<double>(i) / per_octave);
            double f = integrand(x);
            inc[d] += 0.5 * (f + prev_f) * (x - prev_x);
            prev_x = x;
            prev_f = f;
        }
    }
    if (octaves < 4) return Verdict::inconclusive;
    double a_min = 1e9, a_max = -1e9;
    int window = std::min(3, octaves - 1);
    for (int d = octaves - window; d < octaves; ++d) {
        if (!(inc[d] > 0.0) || !(inc[d - 1] > 0.0)) return Verdict::inconclusive;
        double a = -std::log(inc[d] / inc[d - 1]) / std::log(step);
        a_min = std::min(a_min, a);
        a_max = std::max(a_max, a);
    }
    if (a_max <= 0.22) return Verdict::holds;  // diverging tail
    if (a_min >= 0.30) return Verdict::fails;  // converging tail
    return Verdict::inconclusive;
}

}  // namespace

PhiCriteria phi_divergence_criteria(const PhiSpec& phi, double delta) {
    PhiCriteria out;
    double t_hi = std::min(phi.t_max(), 1e12);
    double t_lo = std::max(delta, 1.0);
    if (phi.phi(t_lo) <= 0.0) t_lo = phi.phi_inverse(1e-8) + 1.0;

    // Reference: d(tau) / (tau Phi^-1(tau)) from above Phi(t_lo).
    double tau_lo = std::max(phi.phi(t_lo), 1e-6) * 1.0000001;
    double tau_hi = std::min(phi.phi(t_hi * 0.999), 1e14);
    out.reference = classify_tail(
        [&](double tau) {
            double t = phi.phi_inverse(tau);
            return t > 0.0 ? 1.0 / (tau * t) : 0.0;
        },
        tau_lo, tau_hi);

    // H'(t) dt / t
    out.criteria[0] =
        classify_tail([&](double t) { return phi.H_prime(t) / t; }, t_lo, t_hi);

    // dH / t as a Stieltjes difference quotient on the same tail
    out.criteria[1] = classify_tail(
        [&](double t) {
            double dh = 1e-3 * t;
            return (phi.H(t + dh) - phi.H(t - dh)) / (2.0 * dh * t);
        },
        t_lo * 1.01, t_hi * 0.99);

    // H(t) dt / t^2
    out.criteria[2] =
        classify_tail([&](double t) { return phi.H(t) / (t * t); }, t_lo, t_hi);

    // int_0^delta H(1/t) dt with t = 1/s: d(s) H(s) / s^2 over the tail,
    // evaluated through the gauge values themselves rather than H directly
    // so table gauges exercise their interpolation path.
    out.criteria[3] = classify_tail(
        [&](double s) {
            double v = phi.phi(s);
            return v > 0.0 ? std::log(v) / (s * s) : 0.0;
        },
        t_lo, t_hi);

    // d(eta) / H^-1(eta)
    {
        double eta_lo = std::max(phi.H(t_lo), 1e-9) + 1e-9;
        double eta_hi = phi.H(t_hi * 0.999);
        out.criteria[4] = classify_tail(
            [&](double eta) {
                double t = phi.H_inverse(eta);
                return t > 0.0 ? 1.0 / t : 0.0;
            },
            eta_lo, eta_hi);
    }

    out.all_agree = true;
    for (Verdict v : out.criteria)
        if (v != out.reference) out.all_agree = false;
    return out;
}

LogScaleResult log_scale_condition(const DilatationField& Kt, cplx z0,
                                   const PsiFamily& psi, int levels,
                                   const SmallnessRule& rule) {
    const GridSpec& g = Kt.grid();
    LogScaleResult out;
    double eps0 = psi.eps0();
    std::vector<double> eps_list = dyadic_radii(g, eps0, levels, 2.5);
    if (static_cast<int>(eps_list.size()) < rule.min_levels) return out;

    double r_lo = eps_list.back();
    const int per_octave = 16;
    int steps = static_cast<int>(std::ceil(std::log2(eps0 / r_lo) * per_octave));
    RealField f = Kt.as_real_field();
    std::vector<double> rg(steps + 1), integrand(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        rg[i] = r_lo * std::pow(eps0 / r_lo, static_cast<double>(i) / steps);
        CircleScan scan = circle_scan(f, z0, rg[i]);
        double p = psi.psi(rg[i]);
        integrand[i] = scan.integral * p * p;
    }
    std::vector<double> cum(steps + 1, 0.0);
    for (int i = steps - 1; i >= 0; --i)
        cum[i] = cum[i + 1] + 0.5 * (integrand[i] + integrand[i + 1]) * (rg[i + 1] - rg[i]);

    for (double eps : eps_list) {
        double t = std::log(eps / r_lo) / std::log(eps0 / r_lo) * steps;
        int i = std::clamp(static_cast<int>(std::lround(t)), 0, steps);
        double I = psi.integral_from(eps);
        if (!(I > 0.0)) continue;
        out.eps.push_back(eps);
        out.ratios.push_back(cum[i] / (I * I));
    }
    if (static_cast<int>(out.ratios.size()) < rule.min_levels) return out;

    bool decreasing = true;
    for (std::size_t i = 1; i < out.ratios.size(); ++i)
        if (out.ratios[i] > out.ratios[i - 1] * (1.0 + rule.noise)) decreasing = false;
    double initial = out.ratios.front(), final = out.ratios.back();
    if (decreasing && final <= rule.final_fraction * initial) {
        out.verdict = Verdict::holds;
    } else if (!decreasing && final >= 2.0 * initial) {
        out.verdict = Verdict::fails;
    }
    return out;
}

ConditionReport condition_report(const MuField& mu, const std::vector<cplx>& points,
                                 const ConditionConfig& cfg) {
    mu.grid().require_connected();
    ConditionReport report;
    report.points.reserve(points.size());
    for (cplx z0 : points) {
        PointVerdicts pv;
        pv.z0 = z0;
        DilatationField Kt = tangent_dilatation(mu, z0);

        // FMO route: a supplied dominator is checked for domination and
        // bounded oscillation; otherwise the sufficient bounded-means test
        // runs on K^T itself.
        if (cfg.dominator.has_value()) {
            const RealField& Q = *cfg.dominator;
            std::size_t viol = 0, tot = 0;
            const GridSpec& g = mu.grid();
            for (std::size_t k = 0; k < g.size(); ++k) {
                if (!g.masked(static_cast<int>(k))) continue;
                ++tot;
                if (Kt[static_cast<int>(k)] > Q[static_cast<int>(k)] + 1e-9) ++viol;
            }
            bool dominates = viol <= cfg.dominator_violation_frac * tot;
            double excl = 2.0 * std::max(mu.grid().hx(), mu.grid().hy());
            FmoResult fmo = fmo_indicator(Q, z0, dyadic_radii(mu.grid(), cfg.eps0,
                                                              cfg.levels, 2.0),
                                          cfg.trend, excl);
            pv.fmo_route = dominates ? fmo.verdict : Verdict::fails;
            pv.disc_means = fmo.means;
        } else {
            double excl = 2.0 * std::max(mu.grid().hx(), mu.grid().hy());
            FmoResult fmo = fmo_indicator(Kt.as_real_field(), z0,
                                          dyadic_radii(mu.grid(), cfg.eps0, cfg.levels,
                                                       2.0),
                                          cfg.trend, excl);
            pv.fmo_route = fmo.sufficient_test;
            pv.disc_means = fmo.means;
        }

        // Log-average route: circle averages against log(1/eps).
        std::vector<double> radii = dyadic_radii(mu.grid(), cfg.eps0, cfg.levels,
                                                 cfg.floor_cells);
        std::vector<double> ratios;
        pv.averages.z0 = z0;
        for (double eps : radii) {
            try {
                double k_eps = circle_average(Kt, z0, eps, cfg.circle_nodes);
                pv.averages.radii.push_back(eps);
                pv.averages.values.push_back(k_eps);
                ratios.push_back(k_eps / std::log(1.0 / eps));
            } catch (const invalid_input&) {
                break;
            }
        }
        pv.log_average = classify_bounded(ratios, cfg.trend);

        try {
            pv.div_detail = divergence_integral(Kt, z0, cfg.eps0, cfg.levels,
                                                cfg.divergence);
            pv.divergence = pv.div_detail.verdict;
        } catch (const invalid_input&) {
            pv.divergence = Verdict::inconclusive;
        }

        pv.phi_mass = phi_integral(Kt, cfg.phi_gauge, z0, cfg.eps0);
        if (pv.phi_mass.finite) {
            PhiCriteria crit = phi_divergence_criteria(cfg.phi_gauge);
            pv.phi_route = crit.reference == Verdict::holds && crit.all_agree
                               ? Verdict::holds
                               : crit.reference;
        } else {
            pv.phi_route = Verdict::fails;
        }

        if (pv.fmo_route == Verdict::holds) pv.route = TheoremRoute::fmo;
        else if (pv.log_average == Verdict::holds) pv.route = TheoremRoute::log_average;
        else if (pv.divergence == Verdict::holds) pv.route = TheoremRoute::divergence;
        else if (pv.phi_route == Verdict::holds) pv.route = TheoremRoute::phi_gauge;
        else pv.route = TheoremRoute::none_established;

        report.points.push_back(std::move(pv));
    }
    return report;
}

}  // namespace qc
