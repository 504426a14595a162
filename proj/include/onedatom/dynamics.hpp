#pragma once

// Time-domain integration of the semiclassical Bloch equations.
//
// The default model eliminates the cavity adiabatically:
//
//   ds/dt   = −iΔω s − (Γ/2) q t0' s − (γ_at/2 + γ*) s − i q sqrt(Γ/2) 2 s_z b_in t0'
//   ds_z/dt = −(Γ q Re t0' + γ_at)(s_z + 1/2) + sqrt(Γ/2) q (i s* b_in t0' + c.c.)
//   b_t     = −q t0' b_in − i q sqrt(Γ/2) t0' s,   b_r = b_in + b_t
//
// which is the leak-free model for q = 1, γ_at = γ* = 0. The explicit-cavity
// model keeps the mode amplitude a as a dynamical variable (mean field,
// ⟨S+ a⟩ ≈ s* a) and exists to measure the elimination error.

#include "errors.hpp"
#include "linear.hpp"
#include "model.hpp"
#include "ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace onedatom::dynamics {

enum class CavityModel { adiabatic, explicit_mode };

struct StepControl {
    ode::Tolerance tolerance{1e-9, 1e-12};
    /// Number of sampling intervals; the trajectory has samples + 1 points.
    std::size_t samples = 1000;
    CavityModel cavity = CavityModel::adiabatic;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<BlochState> states;
    std::vector<complex> b_t;
    std::vector<complex> b_r;
    /// Cavity amplitude, only filled for CavityModel::explicit_mode.
    std::vector<complex> cavity;
    ode::StepStats stats;
};

namespace detail {

struct AdiabaticRhs {
    double delta_omega;
    double half_gamma_q;
    double dipole_leak;
    double pop_rate;
    complex drive; // q sqrt(Γ/2) b_in t0'
    complex t0;

    ode::State<3> operator()(double, const ode::State<3>& y) const
    {
        const complex s{y[0], y[1]};
        const double sz = y[2];
        const complex ds = -I * delta_omega * s - half_gamma_q * t0 * s - dipole_leak * s -
                           I * 2.0 * sz * drive;
        const double dsz = -pop_rate * (sz + 0.5) + 2.0 * std::real(I * std::conj(s) * drive);
        return {ds.real(), ds.imag(), dsz};
    }
};

struct ExplicitRhs {
    double delta_omega;
    double cavity_detuning; // Δω + δ
    double cavity_decay;    // κ + γ_cav/2
    double omega;           // sqrt(Γκ/2)
    double dipole_leak;
    double gamma_at;
    complex drive; // i sqrt(κ) b_in

    ode::State<5> operator()(double, const ode::State<5>& y) const
    {
        const complex s{y[0], y[1]};
        const double sz = y[2];
        const complex a{y[3], y[4]};
        const complex ds = -I * delta_omega * s - 2.0 * omega * sz * a - dipole_leak * s;
        const double dsz =
            omega * 2.0 * std::real(std::conj(s) * a) - gamma_at * (sz + 0.5);
        const complex da = -I * cavity_detuning * a - cavity_decay * a - omega * s + drive;
        return {ds.real(), ds.imag(), dsz, da.real(), da.imag()};
    }
};

struct Outputs {
    complex b_t;
    complex b_r;
};

inline Outputs adiabatic_outputs(const DriveField& drive, const SystemParams& p, complex s)
{
    const double q = p.q_ratio();
    const complex t0 = leaky_cavity_t0(drive.delta_omega, p);
    const complex b_t = -q * t0 * drive.b_in - I * q * std::sqrt(p.gamma() / 2.0) * t0 * s;
    return {b_t, drive.b_in + b_t};
}

inline void validate(const DriveField& drive, const BlochState& initial, double duration)
{
    onedatom::detail::require_finite(drive.delta_omega, "delta_omega");
    onedatom::detail::require_finite(drive.b_in.real(), "b_in");
    onedatom::detail::require_finite(drive.b_in.imag(), "b_in");
    onedatom::detail::require_finite(duration, "duration");
    if (!(duration > 0.0))
        throw Error(ErrorKind::InvalidArgument, "duration must be > 0");
    if (!std::isfinite(initial.s_z) || !std::isfinite(initial.s.real()) ||
        !std::isfinite(initial.s.imag()) || !initial.is_physical(1e-12))
        throw Error(ErrorKind::InvalidInitial,
                    "initial state needs s_z in [-1/2, 1/2] and |s|^2 <= 1/4");
}

inline AdiabaticRhs make_adiabatic(const DriveField& drive, const SystemParams& p)
{
    const double q = p.q_ratio();
    const complex t0 = leaky_cavity_t0(drive.delta_omega, p);
    return AdiabaticRhs{drive.delta_omega,
                        0.5 * p.gamma() * q,
                        0.5 * p.gamma_at() + p.gamma_star(),
                        p.gamma() * q * t0.real() + p.gamma_at(),
                        q * std::sqrt(p.gamma() / 2.0) * drive.b_in * t0,
                        t0};
}

inline ExplicitRhs make_explicit(const DriveField& drive, const SystemParams& p)
{
    return ExplicitRhs{drive.delta_omega,
                       drive.delta_omega + p.delta(),
                       p.kappa() + 0.5 * p.gamma_cav(),
                       std::sqrt(p.gamma() * p.kappa() / 2.0),
                       0.5 * p.gamma_at() + p.gamma_star(),
                       p.gamma_at(),
                       I * std::sqrt(p.kappa()) * drive.b_in};
}

} // namespace detail

/// Integrates from `initial` over [0, duration] and samples the state and
/// output amplitudes at `control.samples + 1` equally spaced times.
/// With the explicit cavity model the mode starts empty.
inline Trajectory integrate(const DriveField& drive, const SystemParams& p,
                            const BlochState& initial, double duration,
                            const StepControl& control = {})
{
    detail::validate(drive, initial, duration);
    if (control.samples == 0)
        throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");

    Trajectory traj;
    const std::size_t n = control.samples;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.b_t.reserve(n + 1);
    traj.b_r.reserve(n + 1);

    auto sample_time = [&](std::size_t k) {
        return k == n ? duration : duration * static_cast<double>(k) / static_cast<double>(n);
    };

    if (control.cavity == CavityModel::adiabatic) {
        ode::Dopri5<3, detail::AdiabaticRhs> solver(detail::make_adiabatic(drive, p),
                                                    control.tolerance);
        ode::State<3> y{initial.s.real(), initial.s.imag(), initial.s_z};
        double t = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            solver.advance(t, y, sample_time(k));
            const BlochState st{{y[0], y[1]}, y[2]};
            const auto out = detail::adiabatic_outputs(drive, p, st.s);
            traj.times.push_back(t);
            traj.states.push_back(st);
            traj.b_t.push_back(out.b_t);
            traj.b_r.push_back(out.b_r);
        }
        traj.stats = solver.stats();
    } else {
        ode::Dopri5<5, detail::ExplicitRhs> solver(detail::make_explicit(drive, p),
                                                   control.tolerance);
        ode::State<5> y{initial.s.real(), initial.s.imag(), initial.s_z, 0.0, 0.0};
        const double root_kappa = std::sqrt(p.kappa());
        double t = 0.0;
        traj.cavity.reserve(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            solver.advance(t, y, sample_time(k));
            const complex a{y[3], y[4]};
            traj.times.push_back(t);
            traj.states.push_back({{y[0], y[1]}, y[2]});
            traj.cavity.push_back(a);
            traj.b_t.push_back(I * root_kappa * a);
            traj.b_r.push_back(drive.b_in + I * root_kappa * a);
        }
        traj.stats = solver.stats();
    }
    return traj;
}

struct SettleResult {
    BlochState state;
    double time = 0.0;
    complex b_t{0.0, 0.0};
    complex b_r{0.0, 0.0};
};

/// Integrates the adiabatic model from the ground state in windows of 5/Γ
/// until successive window endpoints differ by less than `tol` (max-norm
/// over Re s, Im s, s_z). Gives up after 1000/Γ.
inline SettleResult settle(const DriveField& drive, const SystemParams& p, double tol,
                           ode::Tolerance tolerance = {1e-12, 1e-14})
{
    detail::validate(drive, BlochState::ground(), 1.0);
    if (!(tol > 0.0))
        throw Error(ErrorKind::InvalidArgument, "tol must be > 0");

    SettleResult res;
    res.state = BlochState::ground();
    if (drive.power() == 0.0) {
        const auto out = detail::adiabatic_outputs(drive, p, res.state.s);
        res.b_t = out.b_t;
        res.b_r = out.b_r;
        return res;
    }

    const double window = 5.0 / p.gamma();
    const double limit = 1000.0 / p.gamma();
    ode::Dopri5<3, detail::AdiabaticRhs> solver(detail::make_adiabatic(drive, p), tolerance);
    ode::State<3> y{0.0, 0.0, -0.5};
    double t = 0.0;
    while (true) {
        const ode::State<3> prev = y;
        solver.advance(t, y, t + window);
        double diff = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            diff = std::max(diff, std::abs(y[i] - prev[i]));
        if (diff < tol)
            break;
        if (t >= limit)
            throw Error(ErrorKind::NoConvergence, "state did not settle within 1000/gamma");
    }
    res.state = {{y[0], y[1]}, y[2]};
    res.time = t;
    const auto out = detail::adiabatic_outputs(drive, p, res.state.s);
    res.b_t = out.b_t;
    res.b_r = out.b_r;
    return res;
}

} // namespace onedatom::dynamics
