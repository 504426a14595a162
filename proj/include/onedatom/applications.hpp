#pragma once

// Slow light, bistability exclusion, signal reshaping and the comparison
// with an equivalent Kerr medium.

#include "errors.hpp"
#include "linear.hpp"
#include "model.hpp"
#include "nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace onedatom::applications {

struct SlowLight {
    double delay_analytic = 0.0;  ///< (2/Γ) f/(1+f)
    double delay_numeric = 0.0;   ///< dφ_t/dΔω at resonance, φ_t = −arg t
    double t_stage_analytic = 0.0; ///< (f/(1+f))²
    double t_stage_numeric = 0.0;  ///< |t(0)|²
    double n_half = 0.0;           ///< stages until half the power remains
    double total_delay_at_n_half = 0.0;
    double delay_for_stages = 0.0;        ///< n_stages × delay_numeric
    double transmission_for_stages = 0.0; ///< t_stage_numeric^n_stages
};

/// Group delay through a chain of side-coupled emitter-cavity stages. The
/// stage transmission is the evanescent-geometry amplitude (r = 1 + t of
/// the Fabry-Perot convention), so the resonant transmission is β.
inline SlowLight slow_light(const SystemParams& p, unsigned n_stages)
{
    if (p.q_ratio() != 1.0 || p.gamma_star() != 0.0)
        throw Error(ErrorKind::UnsupportedRegime,
                    "slow_light assumes a perfectly coupled cavity (Q = Q0) and gamma_star = 0");

    SlowLight out;
    const double beta = p.beta();
    out.delay_analytic = 2.0 / p.gamma() * beta;
    out.t_stage_analytic = beta * beta;
    out.n_half = p.f_is_infinite() ? std::numeric_limits<double>::infinity()
                                   : 0.5 * std::numbers::ln2 / std::log1p(p.inverse_f());

    auto phase = [&p](double dw) {
        return -std::arg(transmission_leaky(dw, p, Geometry::evanescent).t);
    };
    const double h = p.gamma() * 1e-3;
    double dphi = phase(h) - phase(-h);
    // unwrap across the branch cut
    while (dphi > std::numbers::pi)
        dphi -= 2.0 * std::numbers::pi;
    while (dphi < -std::numbers::pi)
        dphi += 2.0 * std::numbers::pi;
    out.delay_numeric = dphi / (2.0 * h);
    out.t_stage_numeric = transmission_leaky(0.0, p, Geometry::evanescent).cap_t;

    out.total_delay_at_n_half = out.n_half * out.delay_analytic;
    out.delay_for_stages = n_stages * out.delay_numeric;
    out.transmission_for_stages = std::pow(out.t_stage_numeric, static_cast<double>(n_stages));
    return out;
}

/// d(P_t/P_c)/dx for the ideal resonant system: x²(3+x)/(1+x)³.
inline double transmitted_power_slope(double x) noexcept
{
    const double d = 1.0 + x;
    return x * x * (3.0 + x) / (d * d * d);
}

struct BistabilityVerdict {
    double fraction = 0.0;
    bool unique_solution = false;
};

struct BistabilityScan {
    std::vector<double> x;
    std::vector<double> slope_analytic;
    std::vector<double> slope_numeric;
    double max_slope = 0.0;
    double max_abs_slope_difference = 0.0;
    std::vector<BistabilityVerdict> verdicts;
};

/// Feedback loop P_e = P_0 + A P_t(P_e). A unique operating point for every
/// P_0 requires P_0(P_e) = P_e − A P_t(P_e) strictly increasing, checked on
/// the grid. The numeric slope differentiates scatter_nonlinear's P_t.
inline BistabilityScan bistability_scan(const SystemParams& p, std::span<const double> fractions,
                                        std::span<const double> x_grid)
{
    if (!p.is_ideal())
        throw Error(ErrorKind::LeakyNotSupported, "bistability_scan requires ideal parameters");
    for (double a : fractions)
        if (!(a >= 0.0 && a < 1.0))
            throw Error(ErrorKind::InvalidArgument, "feedback fraction must lie in [0, 1)");

    const double p_c = 0.25 * p.gamma();
    auto p_t = [&](double x) { return scatter_nonlinear(drive_with_power(0.0, x * p_c), p).p_t; };

    BistabilityScan scan;
    scan.x.assign(x_grid.begin(), x_grid.end());
    std::vector<double> p_t_grid;
    p_t_grid.reserve(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        if (!(x > 0.0) || (i > 0 && !(x > x_grid[i - 1])))
            throw Error(ErrorKind::InvalidArgument, "x_grid must be positive and increasing");
        const double h = 1e-5 * x;
        const double numeric = (p_t(x + h) - p_t(x - h)) / (2.0 * h * p_c);
        const double analytic = transmitted_power_slope(x);
        scan.slope_analytic.push_back(analytic);
        scan.slope_numeric.push_back(numeric);
        scan.max_slope = std::max(scan.max_slope, numeric);
        scan.max_abs_slope_difference =
            std::max(scan.max_abs_slope_difference, std::abs(numeric - analytic));
        p_t_grid.push_back(p_t(x));
    }

    for (double a : fractions) {
        bool increasing = true;
        for (std::size_t i = 1; i < x_grid.size() && increasing; ++i) {
            const double p0_prev = x_grid[i - 1] * p_c - a * p_t_grid[i - 1];
            const double p0 = x_grid[i] * p_c - a * p_t_grid[i];
            increasing = p0 > p0_prev;
        }
        scan.verdicts.push_back({a, increasing});
    }
    return scan;
}

struct ContrastEnhancement {
    double c_ideal = 0.0;
    double c_leaky = 0.0;
};

/// Contrast enhancement for a pulse pair with extinction ratio d = P_H/P_L,
/// the high pulse at saturation parameter x: C = (1/d) T(x) / T(x/d).
/// Ideal: C = d ((1 + x/d)/(1 + x))², tending to d as x → 0.
inline ContrastEnhancement contrast_enhancement(double x, double extinction_in,
                                                const SystemParams& p)
{
    onedatom::detail::require_non_negative(x, "x");
    onedatom::detail::require_finite(extinction_in, "extinction_in");
    if (!(extinction_in > 1.0))
        throw Error(ErrorKind::InvalidArgument, "extinction ratio must be > 1");

    const double d = extinction_in;
    const double ratio = (1.0 + x / d) / (1.0 + x);
    ContrastEnhancement c;
    c.c_ideal = d * ratio * ratio;

    const double t_min = resonance_extrema(p).t_min;
    if (x == 0.0) {
        // T(x)/T(x/d) → 1 when T(0) > 0, → d² for the ideal curve
        c.c_leaky = t_min > 0.0 ? 1.0 / d : d;
        return c;
    }
    auto transmission = [&p](double xx) {
        return saturation_row(xx, p).cap_t;
    };
    c.c_leaky = transmission(x) / (d * transmission(x / d));
    return c;
}

struct BestEnhancement {
    double x = 0.0;
    double c_leaky = 0.0;
};

inline BestEnhancement max_contrast_enhancement(double extinction_in, const SystemParams& p,
                                                std::span<const double> x_grid)
{
    BestEnhancement best;
    for (double x : x_grid) {
        const double c = contrast_enhancement(x, extinction_in, p).c_leaky;
        if (c > best.c_leaky)
            best = {x, c};
    }
    return best;
}

/// Medium length giving a π Kerr phase, L = λ / (2 n2 I). n2 and I must
/// use reciprocal area units (cm²/W with W/cm²); L has the unit of λ.
inline double kerr_length_for_pi(double lambda, double n2, double intensity)
{
    if (!(lambda > 0.0) || !(n2 > 0.0) || !(intensity > 0.0))
        throw Error(ErrorKind::InvalidArgument, "lambda, n2 and intensity must be > 0");
    return lambda / (2.0 * n2 * intensity);
}

/// Switching intensity I_π ≈ factor × P_c / σ (W/cm² for W and cm²).
inline double switching_intensity(double p_c_watts, double sigma_cm2, double factor = 10.0)
{
    if (!(p_c_watts > 0.0) || !(sigma_cm2 > 0.0))
        throw Error(ErrorKind::InvalidArgument, "p_c and sigma must be > 0");
    return factor * p_c_watts / sigma_cm2;
}

/// Resonant critical power in watts: one quarter photon per emitter lifetime.
inline double critical_power_watts(double lifetime_s, double wavelength_m)
{
    if (!(lifetime_s > 0.0) || !(wavelength_m > 0.0))
        throw Error(ErrorKind::InvalidArgument, "lifetime and wavelength must be > 0");
    constexpr double planck = 6.62607015e-34;
    constexpr double light_speed = 299792458.0;
    return 0.25 * planck * light_speed / wavelength_m / lifetime_s;
}

} // namespace onedatom::applications
