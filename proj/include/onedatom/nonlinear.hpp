#pragma once

// Semiclassical steady state at arbitrary drive power: saturation,
// critical power, susceptibility, resonant scattering and noise power.

#include "errors.hpp"
#include "linear.hpp"
#include "model.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace onedatom {

/// φ(Δω) = (2Δω/Γ)² + ((2Δω/Γ)(Δω+δ)/κ − 1)², leak-free system.
inline double phi_ideal(double delta_omega, const SystemParams& p)
{
    const double y = 2.0 * delta_omega / p.gamma();
    const double u = (delta_omega + p.delta()) / p.kappa();
    return y * y + (y * u - 1.0) * (y * u - 1.0);
}

/// φ'(Δω) for a leaky cavity and leaky emitter without dephasing. Reduces
/// to phi_ideal for Q = Q0 and 1/f = 0, and to (1 + 1/f)² at Δω = 0.
inline double phi_leaky(double delta_omega, const SystemParams& p)
{
    const double q = p.q_ratio();
    const double inv_f = p.inverse_f();
    const double y = 2.0 * delta_omega / p.gamma();
    const double u = (delta_omega + p.delta()) / p.kappa();
    const double a = 1.0 + inv_f;
    const double b = q * inv_f * u;
    const double c = y / q;
    return a * a + b * b + c * c + (y * u) * (y * u) - 2.0 * y * u;
}

/// Drive power that brings s_z to −1/4: P_c = (Γ/4) φ for the ideal system,
/// P_c' = (Γ/4) φ' otherwise. The leaky form assumes no pure dephasing.
inline double critical_power(double delta_omega, const SystemParams& p)
{
    detail::require_finite(delta_omega, "delta_omega");
    if (p.is_ideal())
        return 0.25 * p.gamma() * phi_ideal(delta_omega, p);
    if (p.gamma_star() > 0.0)
        throw Error(ErrorKind::DephasingUnsupported,
                    "leaky critical power is derived for gamma_star = 0");
    return 0.25 * p.gamma() * phi_leaky(delta_omega, p);
}

struct SaturationPoint {
    double x = 0.0;     ///< 4 P_in / Γ, the ideal resonant normalisation
    double x_eff = 0.0; ///< P_in / p_c in the active regime
    double p_c = 0.0;
};

inline SaturationPoint saturation(const DriveField& drive, const SystemParams& p)
{
    SaturationPoint sp;
    sp.p_c = critical_power(drive.delta_omega, p);
    sp.x = 4.0 * drive.power() / p.gamma();
    sp.x_eff = drive.power() / sp.p_c;
    return sp;
}

/// α = (1/(1+x)) i / (1 + 2iΔω/(Γ t0)), with s = sqrt(2/Γ) α b_in.
inline complex susceptibility(double delta_omega, double x, const SystemParams& p)
{
    if (!p.is_ideal())
        throw Error(ErrorKind::LeakyNotSupported, "susceptibility requires ideal parameters");
    detail::require_non_negative(x, "x");
    const complex t0 = empty_cavity_t0(delta_omega, p);
    return (1.0 / (1.0 + x)) * I / (1.0 + 2.0 * I * delta_omega / (p.gamma() * t0));
}

namespace detail {

inline bool is_resonant(const DriveField& drive, const SystemParams& p)
{
    return drive.delta_omega == 0.0 && p.delta() == 0.0;
}

} // namespace detail

/// Closed-form steady state of the semiclassical Bloch equations.
///
/// Ideal system: any detuning. Leaky system: resonant drive on a resonant
/// cavity without pure dephasing, where s_z = −(1/2)/(1+x'), x' = β² x and
/// s = sqrt(2/Γ) i β b_in / (1+x').
inline BlochState steady_state(const DriveField& drive, const SystemParams& p)
{
    detail::require_finite(drive.delta_omega, "delta_omega");
    const double root = std::sqrt(2.0 / p.gamma());
    if (p.is_ideal()) {
        const double x = drive.power() / critical_power(drive.delta_omega, p);
        return {root * susceptibility(drive.delta_omega, x, p) * drive.b_in, -0.5 / (1.0 + x)};
    }
    if (p.gamma_star() > 0.0)
        throw Error(ErrorKind::DephasingUnsupported,
                    "leaky steady state is derived for gamma_star = 0");
    if (!detail::is_resonant(drive, p))
        throw Error(ErrorKind::UnsupportedRegime,
                    "leaky steady state is closed-form only at delta_omega = delta = 0; "
                    "use dynamics::settle");
    const double beta = p.beta();
    const double x_eff = beta * beta * 4.0 * drive.power() / p.gamma();
    return {root * I * beta * drive.b_in / (1.0 + x_eff), -0.5 / (1.0 + x_eff)};
}

/// Ideal-system amplitude transmission at any detuning and drive power,
/// t = −t0 (1 + i α).
inline complex saturated_transmission(const DriveField& drive, const SystemParams& p)
{
    const double x = drive.power() / critical_power(drive.delta_omega, p);
    const complex alpha = susceptibility(drive.delta_omega, x, p);
    return -empty_cavity_t0(drive.delta_omega, p) * (1.0 + I * alpha);
}

/// Resonant scattering at arbitrary power.
///
/// Ideal: t = −x/(1+x), r = 1/(1+x), P_noise = 2x/(1+x)² P_in.
/// Leaky: t = (Q/Q0)(β/(1+β²x) − 1), r = 1 + t, P_noise is the remainder
/// (incoherent scattering plus loss, not split by port).
inline ScatteringOutcome scatter_nonlinear(const DriveField& drive, const SystemParams& p)
{
    if (!detail::is_resonant(drive, p))
        throw Error(ErrorKind::OffResonanceUnsupported,
                    "scatter_nonlinear requires delta_omega = 0 and delta = 0");
    if (p.gamma_star() > 0.0)
        throw Error(ErrorKind::DephasingUnsupported,
                    "leaky saturation is derived for gamma_star = 0");

    const double p_in = drive.power();
    const double x = 4.0 * p_in / p.gamma();
    ScatteringOutcome out;
    if (p.is_ideal()) {
        const double d = 1.0 + x;
        out.t = complex(-x / d, 0.0);
        out.r = complex(1.0 / d, 0.0);
        out.cap_t = x * x / (d * d);
        out.cap_r = 1.0 / (d * d);
        out.p_t = out.cap_t * p_in;
        out.p_r = out.cap_r * p_in;
        out.p_noise = 2.0 * x / (d * d) * p_in;
    } else {
        const double beta = p.beta();
        const double t = p.q_ratio() * (beta / (1.0 + beta * beta * x) - 1.0);
        out.t = complex(t, 0.0);
        out.r = complex(1.0 + t, 0.0);
        out.cap_t = t * t;
        out.cap_r = (1.0 + t) * (1.0 + t);
        out.p_t = out.cap_t * p_in;
        out.p_r = out.cap_r * p_in;
        out.p_noise = p_in - out.p_t - out.p_r;
    }
    out.semiclassical_caution = x > 0.1 && x < 10.0;
    return out;
}

struct SaturationRow {
    double x = 0.0;
    double cap_t = 0.0;
    double cap_r = 0.0;
    double p_t_over_p_c = 0.0; ///< normalised to the ideal P_c = Γ/4
    double p_r_over_p_c = 0.0;
    double p_noise_over_p_in = 0.0;
};

/// Resonant response at saturation parameter x = 4 P_in/Γ.
inline SaturationRow saturation_row(double x, const SystemParams& p)
{
    detail::require_non_negative(x, "x");
    const double p_in = 0.25 * p.gamma() * x;
    const ScatteringOutcome o = scatter_nonlinear(drive_with_power(0.0, p_in), p);
    SaturationRow row;
    row.x = x;
    row.cap_t = o.cap_t;
    row.cap_r = o.cap_r;
    row.p_t_over_p_c = o.cap_t * x;
    row.p_r_over_p_c = o.cap_r * x;
    row.p_noise_over_p_in = p_in > 0.0 ? o.p_noise / p_in : 0.0;
    return row;
}

/// Evaluates saturation_row over a nonnegative, sorted grid of x.
inline std::vector<SaturationRow> saturation_curve(const SystemParams& p,
                                                   std::span<const double> x_grid)
{
    std::vector<SaturationRow> rows;
    rows.reserve(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (i > 0 && x_grid[i] < x_grid[i - 1])
            throw Error(ErrorKind::InvalidArgument, "x_grid must be sorted");
        rows.push_back(saturation_row(x_grid[i], p));
    }
    return rows;
}

} // namespace onedatom
