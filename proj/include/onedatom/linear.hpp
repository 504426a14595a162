#pragma once

// Linear (unsaturated) response: empty cavity, ideal scattering matrix,
// leaky transmission spectra, linewidths and resonant extrema.

#include "errors.hpp"
#include "model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace onedatom {

/// Fabry-Perot: input reflected when the cavity is uncoupled.
/// Evanescent: waveguide side-coupled, input transmitted when uncoupled;
/// the roles of the two output ports are swapped.
enum class Geometry { fabry_perot, evanescent };

struct LinearSpectrumPoint {
    double delta_omega = 0.0;
    complex t{0.0, 0.0};
    complex r{0.0, 0.0};
    double cap_t = 0.0;
    double cap_r = 0.0;
    double leaks = 0.0;
};

/// t0(Δω) = 1 / (1 + i (Δω + δ) / κ). The empty-cavity transmission is −t0.
inline complex empty_cavity_t0(double delta_omega, const SystemParams& p)
{
    return 1.0 / (1.0 + I * ((delta_omega + p.delta()) / p.kappa()));
}

/// t0'(Δω) = 1 / (1 + i (Q/Q0)(Δω + δ) / κ), the leaky-cavity counterpart.
inline complex leaky_cavity_t0(double delta_omega, const SystemParams& p)
{
    return 1.0 / (1.0 + I * (p.q_ratio() * (delta_omega + p.delta()) / p.kappa()));
}

using ScatteringMatrix = Eigen::Matrix2cd;

/// S(ζ) = 1/(1+iζ) [[iζ, −1], [−1, iζ]], mapping (b_in, b_in') to (b_r, b_t).
inline ScatteringMatrix scattering_matrix_from_zeta(double zeta)
{
    const complex denom = 1.0 + I * zeta;
    const complex diag = I * zeta / denom;
    const complex off = -1.0 / denom;
    ScatteringMatrix s;
    s << diag, off, off, diag;
    return s;
}

/// ζ = (Δω + δ)/κ − Γ/(2Δω). Diverges at Δω = 0.
inline double zeta(double delta_omega, const SystemParams& p)
{
    return (delta_omega + p.delta()) / p.kappa() - p.gamma() / (2.0 * delta_omega);
}

/// Two-port scattering matrix of the leak-free system. At Δω = 0 the pole
/// of ζ is replaced by its limit, total reflection (S = identity).
inline ScatteringMatrix scattering_matrix_ideal(double delta_omega, const SystemParams& p)
{
    if (!p.is_ideal())
        throw Error(ErrorKind::LeakyNotSupported,
                    "scattering_matrix_ideal requires gamma_at = gamma_cav = gamma_star = 0");
    detail::require_finite(delta_omega, "delta_omega");
    if (delta_omega == 0.0)
        return ScatteringMatrix::Identity();
    return scattering_matrix_from_zeta(zeta(delta_omega, p));
}

namespace detail {

inline LinearSpectrumPoint make_point(double delta_omega, complex t, Geometry geometry)
{
    complex r = 1.0 + t;
    if (geometry == Geometry::evanescent)
        std::swap(t, r);
    LinearSpectrumPoint pt;
    pt.delta_omega = delta_omega;
    pt.t = t;
    pt.r = r;
    pt.cap_t = std::norm(t);
    pt.cap_r = std::norm(r);
    pt.leaks = 1.0 - pt.cap_t - pt.cap_r;
    return pt;
}

} // namespace detail

/// Linear transmission of the (possibly leaky) system, r = 1 + t.
///
/// Written as t = −q t0' (2iΔω + γ) / (2iΔω + γ + q Γ t0') with
/// γ = γ_at + 2γ*, which is finite for f = ∞ and reduces to −1/(1+iζ)
/// in the ideal case.
inline LinearSpectrumPoint transmission_leaky(double delta_omega, const SystemParams& p,
                                              Geometry geometry = Geometry::fabry_perot)
{
    detail::require_finite(delta_omega, "delta_omega");
    const double q = p.q_ratio();
    const complex t0 = leaky_cavity_t0(delta_omega, p);
    const complex emitter = 2.0 * I * delta_omega + p.leak_rate();
    const complex t = -q * t0 * emitter / (emitter + q * p.gamma() * t0);
    return detail::make_point(delta_omega, t, geometry);
}

/// Same cavity with the emitter removed: t = −(Q/Q0) t0'.
inline LinearSpectrumPoint transmission_empty(double delta_omega, const SystemParams& p,
                                              Geometry geometry = Geometry::fabry_perot)
{
    detail::require_finite(delta_omega, "delta_omega");
    return detail::make_point(delta_omega, -p.q_ratio() * leaky_cavity_t0(delta_omega, p),
                              geometry);
}

struct Linewidths {
    double broad_analytic = 0.0;
    double dip_analytic = 0.0;
    /// FWHM of one of the two transmission peaks flanking the dip.
    double broad_numeric = 0.0;
    /// FWHM of the dipole-induced dip.
    double dip_numeric = 0.0;
};

namespace detail {

/// Bisection for g(x) = 0 on [lo, hi] with g(lo), g(hi) of opposite sign.
inline double bisect(const std::function<double(double)>& g, double lo, double hi, double tol)
{
    double g_lo = g(lo);
    for (int i = 0; i < 400 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = g(mid);
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Cavity and dressed-dipole linewidths of the ideal, resonant (δ = 0)
/// system. The analytic pair is (κ, Γ); the numeric pair comes from the
/// T = 1/2 crossings of the exact curve, located by bisection with brackets
/// grown outward from the analytic guesses.
inline Linewidths linewidths_ideal(const SystemParams& p)
{
    if (!p.is_ideal())
        throw Error(ErrorKind::LeakyNotSupported, "linewidths_ideal requires ideal parameters");
    if (p.delta() != 0.0)
        throw Error(ErrorKind::UnsupportedRegime, "linewidths_ideal requires delta = 0");

    const double kappa = p.kappa();
    const double gamma = p.gamma();
    const double tol = 1e-10 * kappa;
    const std::function<double(double)> half = [&p](double dw) {
        return transmission_leaky(dw, p).cap_t - 0.5;
    };

    // T = 1 at the peak sqrt(Γκ/2); the dip crossing lies below it, the
    // cavity-edge crossing above it.
    const double peak = std::sqrt(gamma * kappa / 2.0);

    // Grows [lo, hi] around the guess toward the limits until the sign of
    // g differs at the two ends, then bisects.
    auto crossing = [tol](const std::function<double(double)>& g, double guess, double lo_limit,
                          double hi_limit) {
        const double sign_lo = g(lo_limit) < 0.0 ? -1.0 : 1.0;
        auto on_lo_side = [&](double x) { return (g(x) < 0.0 ? -1.0 : 1.0) == sign_lo; };
        double lo = std::clamp(guess, lo_limit, hi_limit);
        double hi = lo;
        for (int k = 0; k < 200 && !on_lo_side(lo); ++k)
            lo = lo_limit + 0.5 * (lo - lo_limit);
        for (int k = 0; k < 200 && on_lo_side(hi); ++k)
            hi = std::isinf(hi_limit) ? 2.0 * hi : hi + 0.5 * (hi_limit - hi);
        if (!on_lo_side(lo) || on_lo_side(hi))
            throw Error(ErrorKind::ScanFailed, "could not bracket the T = 1/2 crossing");
        return detail::bisect(g, lo, hi, tol);
    };
    const std::function<double(double)> half_neg = [&half](double dw) { return half(-dw); };

    const double inf = std::numeric_limits<double>::infinity();
    const double inner = crossing(half, gamma / 2.0, 0.0, peak);
    const double outer = crossing(half, kappa, peak, inf);
    const double inner_neg = -crossing(half_neg, gamma / 2.0, 0.0, peak);

    Linewidths w;
    w.broad_analytic = kappa;
    w.dip_analytic = gamma;
    w.broad_numeric = outer - inner;
    w.dip_numeric = inner - inner_neg;
    return w;
}

struct ResonanceExtrema {
    double t_max = 0.0; ///< empty cavity, (Q/Q0)²
    double t_min = 0.0; ///< with the emitter, (Q/Q0)²/(1+f)²
    double r_max = 0.0;
    double r_min = 0.0;
    double leaks = 0.0;        ///< 1 − R_max − T_min = 2√R_max√T_min
    double leaks_approx = 0.0; ///< 2(Q/Q0)/f, valid for f ≫ 1

    double contrast() const noexcept { return t_max - t_min; }
};

/// Closed-form resonant transmission and reflection (δ = 0 assumed).
inline ResonanceExtrema resonance_extrema(const SystemParams& p)
{
    const double q = p.q_ratio();
    // q/(1+f) written with the inverse to stay exact at f = ∞
    const double inv_f = p.inverse_f();
    const double dressed = q * inv_f / (1.0 + inv_f);

    ResonanceExtrema e;
    e.t_max = q * q;
    e.r_min = (1.0 - q) * (1.0 - q);
    e.t_min = dressed * dressed;
    e.r_max = (1.0 - dressed) * (1.0 - dressed);
    e.leaks = 2.0 * dressed * (1.0 - dressed);
    e.leaks_approx = 2.0 * q * inv_f;
    return e;
}

} // namespace onedatom
