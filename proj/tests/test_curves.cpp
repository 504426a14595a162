// Curve shape regressions: dips, symmetries, ordering and end points.

#include "cli_support.hpp"

#include <onedatom.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace onedatom;

namespace {

bool nondecreasing(const std::vector<double>& v, double slack = 0.0)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] - slack)
            return false;
    return true;
}

bool nonincreasing(const std::vector<double>& v, double slack = 0.0)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + slack)
            return false;
    return true;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
    return grid_values("log:" + std::to_string(lo) + ":" + std::to_string(hi) + ":" +
                       std::to_string(n));
}

} // namespace

TEST(Spectrum, DipAndBroadPeak)
{
    const auto r = run_cli({"spectrum", "--gamma-over-kappa", "0.002", "--delta", "0", "--grid",
                            "-2:2:2001"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = parse_csv(r.out);
    const auto dw = t.column("delta_omega");
    const auto cap_t = t.column("cap_t");
    const auto cap_r = t.column("cap_r");
    ASSERT_EQ(dw.size(), 2001u);

    // symmetric about the dip
    for (std::size_t i = 0; i < dw.size(); ++i) {
        EXPECT_NEAR(dw[i], -dw[dw.size() - 1 - i], 1e-12);
        EXPECT_NEAR(cap_t[i], cap_t[dw.size() - 1 - i], 1e-12);
        EXPECT_NEAR(cap_t[i] + cap_r[i], 1.0, 1e-12);
    }
    EXPECT_EQ(cap_t[1000], 0.0);
    // Lorentzian wings: decreasing away from the peaks on both sides
    const std::vector<double> right(cap_t.begin() + 1050, cap_t.end());
    EXPECT_TRUE(nonincreasing(right));
    EXPECT_NEAR(cap_t.back(), 1.0 / 5.0, 1e-3);
    EXPECT_GT(*std::max_element(cap_t.begin(), cap_t.end()), 0.99);
}

TEST(Spectrum, FanoAsymmetryWhenDetuned)
{
    const auto r = run_cli({"spectrum", "--gamma-over-kappa", "0.002", "--delta", "-0.5",
                            "--grid", "-0.01:0.01:2001"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = parse_csv(r.out);
    const auto cap_t = t.column("cap_t");
    const auto it = std::min_element(cap_t.begin(), cap_t.end());
    EXPECT_LT(*it, 1e-12);
    EXPECT_EQ(it - cap_t.begin(), 1000);
    const auto i = static_cast<std::size_t>(it - cap_t.begin());
    // the dip stays at the emitter line; one Γ on either side is unequal
    const std::size_t step = 200;
    ASSERT_GE(i, step);
    ASSERT_LT(i + step, cap_t.size());
    EXPECT_GT(std::abs(cap_t[i + step] - cap_t[i - step]), 1e-3);
}

TEST(SusceptibilityCurve, Shape)
{
    const auto p = make_params(1.0, 500.0);
    for (double x : {0.0, 1.0, 10.0}) {
        double peak = 0.0;
        for (double dw = -5.0; dw <= 5.0; dw += 0.01) {
            const complex a = susceptibility(dw, x, p);
            const complex b = susceptibility(-dw, x, p);
            EXPECT_NEAR(a.real(), -b.real(), 1e-12);
            EXPECT_NEAR(a.imag(), b.imag(), 1e-12);
            peak = std::max(peak, std::abs(a.imag()));
        }
        // saturation shrinks the response by 1/(1+x)
        EXPECT_NEAR(peak * (1.0 + x), std::abs(susceptibility(0.0, 0.0, p).imag()), 1e-9);
    }
}

TEST(SaturatedSpectrum, DipFillsWithPower)
{
    const auto p = make_params(1.0, 500.0);
    const double p_c = critical_power(0.0, p);
    std::vector<double> resonant;
    for (double x : {0.0, 1.0, 10.0}) {
        std::vector<double> wing;
        for (double dw = 0.0; dw <= 10.0; dw += 0.5) {
            const double cap_t =
                x == 0.0 ? transmission_leaky(dw, p).cap_t
                         : std::norm(dynamics::settle(drive_with_power(dw, x * p_c), p, 1e-11).b_t) /
                               (x * p_c);
            wing.push_back(cap_t);
        }
        EXPECT_TRUE(nondecreasing(wing, 1e-9)) << x;
        resonant.push_back(wing.front());
    }
    EXPECT_NEAR(resonant[0], 0.0, 1e-12);
    EXPECT_NEAR(resonant[1], 0.25, 1e-6);
    EXPECT_NEAR(resonant[2], 100.0 / 121.0, 1e-6);
}

TEST(SaturationCurves, Ideal)
{
    const auto r = run_cli({"saturation", "--ideal", "--x-grid", "log:-3:4:701"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = parse_csv(r.out);
    const auto x = t.column("x");
    const auto cap_t = t.column("cap_t");
    const auto cap_r = t.column("cap_r");
    const auto pr = t.column("p_r_over_p_c");
    const auto pt = t.column("p_t_over_p_c");
    const auto noise = t.column("p_noise_over_p_in");

    EXPECT_TRUE(nondecreasing(cap_t));
    EXPECT_TRUE(nonincreasing(cap_r));
    EXPECT_TRUE(nondecreasing(pt));
    EXPECT_LT(cap_t.front(), 1e-6);
    EXPECT_GT(cap_t.back(), 0.999);

    const auto ipr = std::max_element(pr.begin(), pr.end()) - pr.begin();
    EXPECT_NEAR(x[ipr], 1.0, 0.03);
    EXPECT_NEAR(pr[ipr], 0.25, 1e-4);
    const auto ino = std::max_element(noise.begin(), noise.end()) - noise.begin();
    EXPECT_NEAR(x[ino], 1.0, 0.03);
    EXPECT_NEAR(noise[ino], 0.5, 1e-4);
    // linear in x far above saturation
    EXPECT_NEAR(pt.back() / x.back(), 1.0, 2e-3 * 1.0);
}

TEST(SaturationCurves, Leaky)
{
    const auto grid = log_grid(-3.0, 5.0, 801);
    const auto ideal = saturation_curve(make_params(1.0, 500.0), grid);

    // β = 1 with lossy mirrors: the ideal signal scaled by (Q/Q0)²
    for (double q : {0.9, 0.8, 0.5}) {
        const auto rows = saturation_curve(make_params_from_ratios(1.0, 500.0, 0.0, q, std::numeric_limits<double>::infinity()),
                                           grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            EXPECT_NEAR(rows[i].cap_t, q * q * ideal[i].cap_t, 1e-12);
    }

    // Q = Q0 with finite f: curves start at T_min and the jump moves to higher x
    std::vector<double> half_x;
    for (double f : {1.0, 10.0, std::numeric_limits<double>::infinity()}) {
        const auto p = make_params_from_ratios(1.0, 500.0, 0.0, 1.0, f);
        const auto rows = saturation_curve(p, grid);
        std::vector<double> cap_t;
        for (const auto& row : rows)
            cap_t.push_back(row.cap_t);
        EXPECT_TRUE(nondecreasing(cap_t, 1e-12)) << f;
        const auto e = resonance_extrema(p);
        EXPECT_NEAR(cap_t.front(), e.t_min, 1e-3) << f;
        EXPECT_NEAR(cap_t.back(), e.t_max, 1e-3) << f;
        const double mid = 0.5 * (e.t_min + e.t_max);
        const auto it = std::lower_bound(cap_t.begin(), cap_t.end(), mid);
        ASSERT_NE(it, cap_t.end());
        half_x.push_back(grid[static_cast<std::size_t>(it - cap_t.begin())]);
    }
    EXPECT_GT(half_x[0], half_x[1]);
    EXPECT_GT(half_x[1], half_x[2]);
}

TEST(SaturationCurves, PillarDesigns)
{
    const auto field = pillar::default_field_model();
    const auto grid = log_grid(-3.0, 5.0, 801);

    const auto optimized = pillar::optimize_diameter(1000.0, pillar::Objective::contrast,
                                                     {0.5, 6.0}, field);
    pillar::PillarDesign metal;
    metal.d = optimized.d_opt;
    metal.loss_ratio = 0.1;

    struct Curve {
        SystemParams p;
        double t_min, t_max;
    };
    std::vector<Curve> curves;
    // baseline: Q/Q0 = 0.5, F_p = 3
    const auto base = make_params_from_ratios(1.0, 500.0, 0.0, 0.5, 3.0);
    curves.push_back({base, 0.25 / 16.0, 0.25});
    for (const auto& design : {pillar::PillarDesign{.d = optimized.d_opt}, metal}) {
        const auto m = pillar::figures_of_merit(design, field);
        curves.push_back({pillar::to_system_params(design, field, 1.0, 500.0), m.t_min, m.t_max});
    }

    std::vector<double> contrast;
    for (const auto& c : curves) {
        const auto rows = saturation_curve(c.p, grid);
        std::vector<double> cap_t;
        for (const auto& row : rows)
            cap_t.push_back(row.cap_t);
        EXPECT_TRUE(nondecreasing(cap_t, 1e-12));
        EXPECT_NEAR(cap_t.front(), c.t_min, 1e-3);
        EXPECT_NEAR(cap_t.back(), c.t_max, 1e-3);
        contrast.push_back(cap_t.back() - cap_t.front());
    }
    EXPECT_NEAR(contrast[0], 0.234, 0.01);
    EXPECT_NEAR(contrast[1], 0.85, 0.03);
    EXPECT_GE(contrast[2], 0.90);
    EXPECT_LT(contrast[0], contrast[1]);
    EXPECT_LT(contrast[1], contrast[2]);
    // metallization lowers the floor below the bare pillar
    EXPECT_LT(curves[2].t_min, curves[1].t_min);
}
