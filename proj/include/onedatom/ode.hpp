#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta with local error control.

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

namespace onedatom::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace tableau {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b_hat
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
} // namespace tableau

/// Adaptive integrator for y' = f(t, y) with fixed-size real state.
/// The first-same-as-last stage is reused between accepted steps.
template <std::size_t N, class Rhs>
class Dopri5 {
public:
    Dopri5(Rhs rhs, Tolerance tol, std::size_t max_steps = 50'000'000)
        : rhs_(std::move(rhs)), tol_(tol), max_steps_(max_steps)
    {
    }

    /// Advances y from t to t_end exactly. Throws StepCollapse when the
    /// step size underflows or the step budget is exhausted.
    void advance(double& t, State<N>& y, double t_end)
    {
        using namespace tableau;
        if (t_end <= t)
            return;
        if (!have_k1_ || t != t_last_) {
            k1_ = rhs_(t, y);
            have_k1_ = true;
        }
        if (h_ <= 0.0)
            h_ = initial_step(t, y, t_end);

        State<N> k2, k3, k4, k5, k6, k7, tmp, y_new;
        while (t < t_end) {
            if (stats_.accepted + stats_.rejected >= max_steps_)
                throw Error(ErrorKind::StepCollapse, "step budget exhausted");
            const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(t);
            if (h_ <= h_min || !std::isfinite(h_))
                throw Error(ErrorKind::StepCollapse,
                            "step size underflow at t = " + std::to_string(t));

            const bool last = t + h_ >= t_end;
            const double h = last ? t_end - t : h_;

            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * a21 * k1_[i];
            k2 = rhs_(t + c2 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a31 * k1_[i] + a32 * k2[i]);
            k3 = rhs_(t + c3 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs_(t + c4 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs_(t + c5 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                     a65 * k5[i]);
            k6 = rhs_(t + h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                y_new[i] = y[i] + h * (b1 * k1_[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                       b6 * k6[i]);
            k7 = rhs_(t + h, y_new);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc =
                    tol_.abs + tol_.rel * std::max(std::abs(y[i]), std::abs(y_new[i]));
                const double e = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
                err = std::max(err, std::abs(e) / sc);
            }
            if (!std::isfinite(err))
                err = 1e10;

            const double factor =
                err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                t = last ? t_end : t + h;
                y = y_new;
                k1_ = k7;
                ++stats_.accepted;
                // a clipped final step says nothing about the natural step size
                if (!last || h == h_)
                    h_ = h * factor;
            } else {
                ++stats_.rejected;
                h_ = h * std::min(1.0, factor);
            }
        }
        t_last_ = t;
    }

    const StepStats& stats() const noexcept { return stats_; }

private:
    double initial_step(double t, const State<N>& y, double t_end) const
    {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol_.abs + tol_.rel * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(k1_[i]) / sc);
        }
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, t_end - t);
        return std::max(h, 1e-12 * std::max(1.0, std::abs(t_end)));
    }

    Rhs rhs_;
    Tolerance tol_;
    std::size_t max_steps_;
    StepStats stats_{};
    State<N> k1_{};
    bool have_k1_ = false;
    double t_last_ = 0.0;
    double h_ = 0.0;
};

} // namespace onedatom::ode
