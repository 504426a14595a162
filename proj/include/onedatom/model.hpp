#pragma once

// Parameter and state types shared by every module.
//
// Rates are angular frequencies in a caller-chosen unit; nothing in the
// library depends on the absolute scale. Powers are photon fluxes in the
// same time unit, and field amplitudes are sqrt(photons / time).

#include "errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace onedatom {

using complex = std::complex<double>;

inline constexpr complex I{0.0, 1.0};

namespace detail {

inline void require_finite(double v, const char* name)
{
    if (!std::isfinite(v))
        throw Error(ErrorKind::NonFiniteInput, std::string(name) + " must be finite");
}

inline void require_non_negative(double v, const char* name)
{
    require_finite(v, name);
    if (v < 0.0)
        throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be >= 0");
}

} // namespace detail

/// Rates of the emitter / cavity / port system.
///
/// gamma is the Purcell-enhanced emission rate into the mode, kappa the
/// cavity-port coupling, delta the cavity-emitter detuning (cavity at
/// omega0 + delta). gamma_at and gamma_cav are leaks into non-guided modes,
/// gamma_star pure dephasing. Construct through make_params().
class SystemParams {
public:
    double gamma() const noexcept { return gamma_; }
    double kappa() const noexcept { return kappa_; }
    double delta() const noexcept { return delta_; }
    double gamma_at() const noexcept { return gamma_at_; }
    double gamma_cav() const noexcept { return gamma_cav_; }
    double gamma_star() const noexcept { return gamma_star_; }

    /// Q/Q0 = 1 / (1 + gamma_cav / (2 kappa)).
    double q_ratio() const noexcept { return q_ratio_; }

    /// Total dipole leak rate gamma_at + 2 gamma_star.
    double leak_rate() const noexcept { return gamma_at_ + 2.0 * gamma_star_; }

    bool f_is_infinite() const noexcept { return leak_rate() == 0.0; }

    /// f = (Q/Q0) gamma / (gamma_at + 2 gamma_star); +inf for a leak-free emitter.
    double f() const noexcept
    {
        return f_is_infinite() ? std::numeric_limits<double>::infinity()
                               : q_ratio_ * gamma_ / leak_rate();
    }

    /// beta = f / (1 + f), exactly 1 when f is infinite.
    double beta() const noexcept
    {
        if (f_is_infinite())
            return 1.0;
        // q gamma / (q gamma + leak) avoids f/(1+f) rounding for huge f
        return q_ratio_ * gamma_ / (q_ratio_ * gamma_ + leak_rate());
    }

    /// 1/f, exactly 0 for a leak-free emitter.
    double inverse_f() const noexcept { return leak_rate() / (q_ratio_ * gamma_); }

    /// Adiabatic elimination of the cavity is trusted for gamma/kappa <= 0.1.
    bool is_bad_cavity() const noexcept { return gamma_ / kappa_ <= 0.1; }

    /// No leaks and no dephasing.
    bool is_ideal() const noexcept
    {
        return gamma_at_ == 0.0 && gamma_cav_ == 0.0 && gamma_star_ == 0.0;
    }

    friend SystemParams make_params(double gamma, double kappa, double delta, double gamma_at,
                                    double gamma_cav, double gamma_star);

private:
    SystemParams() = default;

    double gamma_ = 1.0;
    double kappa_ = 1.0;
    double delta_ = 0.0;
    double gamma_at_ = 0.0;
    double gamma_cav_ = 0.0;
    double gamma_star_ = 0.0;
    double q_ratio_ = 1.0;
};

inline SystemParams make_params(double gamma, double kappa, double delta = 0.0,
                                double gamma_at = 0.0, double gamma_cav = 0.0,
                                double gamma_star = 0.0)
{
    detail::require_finite(gamma, "gamma");
    detail::require_finite(kappa, "kappa");
    detail::require_finite(delta, "delta");
    detail::require_non_negative(gamma_at, "gamma_at");
    detail::require_non_negative(gamma_cav, "gamma_cav");
    detail::require_non_negative(gamma_star, "gamma_star");
    if (gamma <= 0.0)
        throw Error(ErrorKind::NonPositiveRate, "gamma must be > 0");
    if (kappa <= 0.0)
        throw Error(ErrorKind::NonPositiveRate, "kappa must be > 0");

    SystemParams p;
    p.gamma_ = gamma;
    p.kappa_ = kappa;
    p.delta_ = delta;
    p.gamma_at_ = gamma_at;
    p.gamma_cav_ = gamma_cav;
    p.gamma_star_ = gamma_star;
    p.q_ratio_ = 1.0 / (1.0 + gamma_cav / (2.0 * kappa));
    return p;
}

/// Builds parameters from the figure-of-merit view (Q/Q0, f) instead of raw
/// leak rates. gamma_star is zero; f may be +inf.
inline SystemParams make_params_from_ratios(double gamma, double kappa, double delta,
                                            double q_ratio, double f)
{
    detail::require_finite(q_ratio, "q_ratio");
    if (!(q_ratio > 0.0 && q_ratio <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "q_ratio must lie in (0, 1]");
    if (std::isnan(f) || f <= 0.0)
        throw Error(ErrorKind::InvalidArgument, "f must be > 0 (may be +inf)");
    const double gamma_cav = 2.0 * kappa * (1.0 / q_ratio - 1.0);
    const double gamma_at = std::isinf(f) ? 0.0 : q_ratio * gamma / f;
    return make_params(gamma, kappa, delta, gamma_at, gamma_cav, 0.0);
}

/// Drive detuning Δω = ω0 − ω and complex input amplitude in port 1.
/// The second input port is undriven.
struct DriveField {
    double delta_omega = 0.0;
    complex b_in{0.0, 0.0};

    double power() const noexcept { return std::norm(b_in); }
};

/// Drive with real amplitude sqrt(p_in).
inline DriveField drive_with_power(double delta_omega, double p_in)
{
    detail::require_non_negative(p_in, "p_in");
    return {delta_omega, complex{std::sqrt(p_in), 0.0}};
}

/// Semiclassical emitter state: s = <S->, s_z = <S_z>.
struct BlochState {
    complex s{0.0, 0.0};
    double s_z = -0.5;

    static BlochState ground() noexcept { return {}; }

    bool is_physical(double tol = 1e-9) const noexcept
    {
        return s_z >= -0.5 - tol && s_z <= 0.5 + tol && std::norm(s) <= 0.25 + tol;
    }
};

/// Amplitude and power bookkeeping for one drive condition.
struct ScatteringOutcome {
    complex t{0.0, 0.0};
    complex r{0.0, 0.0};
    double cap_t = 0.0;
    double cap_r = 0.0;
    double p_t = 0.0;
    double p_r = 0.0;
    double p_noise = 0.0;
    /// 0.1 < x < 10, where mean-field factorisation is least reliable.
    bool semiclassical_caution = false;
};

} // namespace onedatom
