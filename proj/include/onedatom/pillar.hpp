#pragma once

// Micropillar design: sidewall-loss quality factor, mode volume, Purcell
// factor, figures of merit and single-variable diameter optimisation.
// Lengths are in micrometres.

#include "errors.hpp"
#include "linear.hpp"
#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace onedatom::pillar {

struct PillarDesign {
    double q0 = 1000.0;
    double d = 2.4;
    double epsilon = 0.007;
    double lambda_0 = 1.0;
    double n_index = 3.5;
    /// γ_at / γ_free: 1 for a bare pillar, about 0.1 with metallised sidewalls.
    double loss_ratio = 1.0;
    /// γ* / γ_free.
    double gamma_star_ratio = 0.0;

    void validate() const
    {
        using onedatom::detail::require_finite;
        require_finite(q0, "q0");
        require_finite(d, "d");
        require_finite(epsilon, "epsilon");
        require_finite(lambda_0, "lambda_0");
        require_finite(n_index, "n_index");
        require_finite(loss_ratio, "loss_ratio");
        require_finite(gamma_star_ratio, "gamma_star_ratio");
        if (q0 <= 0.0 || d <= 0.0 || lambda_0 <= 0.0 || loss_ratio <= 0.0)
            throw Error(ErrorKind::InvalidArgument,
                        "q0, d, lambda_0 and loss_ratio must be > 0");
        if (epsilon < 0.0 || gamma_star_ratio < 0.0)
            throw Error(ErrorKind::InvalidArgument, "epsilon and gamma_star_ratio must be >= 0");
        if (n_index <= 1.0)
            throw Error(ErrorKind::InvalidArgument, "n_index must be > 1");
    }
};

/// Normalised field intensity |E(d)|² at the pillar sidewall.
class FieldProfileModel {
public:
    enum class Kind { power_law, tabulated };

    /// |E(d)|² = (c_e / d)^p_exp.
    static FieldProfileModel power_law(double c_e, double p_exp)
    {
        if (!(c_e > 0.0) || !(p_exp > 0.0) || !std::isfinite(c_e) || !std::isfinite(p_exp))
            throw Error(ErrorKind::InvalidArgument, "power law needs c_e > 0 and p_exp > 0");
        FieldProfileModel m;
        m.kind_ = Kind::power_law;
        m.c_e_ = c_e;
        m.p_exp_ = p_exp;
        return m;
    }

    /// Linear interpolation in a table of (d, |E(d)|²) sorted by d.
    static FieldProfileModel tabulated(std::vector<std::pair<double, double>> table)
    {
        if (table.size() < 2)
            throw Error(ErrorKind::InvalidArgument, "field table needs at least two rows");
        for (std::size_t i = 0; i < table.size(); ++i) {
            const auto [d, e2] = table[i];
            if (!std::isfinite(d) || !std::isfinite(e2) || e2 < 0.0 || e2 > 1.0 || d <= 0.0)
                throw Error(ErrorKind::InvalidArgument,
                            "field table rows need d > 0 and |E|^2 in [0, 1]");
            if (i > 0 && !(d > table[i - 1].first))
                throw Error(ErrorKind::InvalidArgument, "field table must be sorted by d");
        }
        FieldProfileModel m;
        m.kind_ = Kind::tabulated;
        m.table_ = std::move(table);
        return m;
    }

    Kind kind() const noexcept { return kind_; }
    double c_e() const noexcept { return c_e_; }
    double p_exp() const noexcept { return p_exp_; }

    /// Diameter range over which the model is defined.
    std::pair<double, double> domain() const noexcept
    {
        if (kind_ == Kind::tabulated)
            return {table_.front().first, table_.back().first};
        // |E|² <= 1 requires d >= c_e
        return {c_e_, std::numeric_limits<double>::infinity()};
    }

    double sidewall_intensity(double d) const
    {
        const auto [lo, hi] = domain();
        if (!(d >= lo && d <= hi))
            throw Error(ErrorKind::InvalidArgument, "diameter outside the field model domain");
        if (kind_ == Kind::power_law)
            return std::pow(c_e_ / d, p_exp_);
        const auto it = std::lower_bound(table_.begin(), table_.end(), d,
                                         [](const auto& row, double v) { return row.first < v; });
        if (it == table_.begin())
            return it->second;
        const auto& [d1, e1] = *(it - 1);
        const auto& [d2, e2] = *it;
        return e1 + (e2 - e1) * (d - d1) / (d2 - d1);
    }

private:
    FieldProfileModel() = default;

    Kind kind_ = Kind::power_law;
    double c_e_ = 1.0;
    double p_exp_ = 2.0;
    std::vector<std::pair<double, double>> table_;
};

/// Power-law coefficient c_e for which the design point (q0, epsilon, d)
/// has total quality factor q_target.
inline double calibrate_power_law(double q0, double q_target, double epsilon, double d,
                                  double p_exp)
{
    if (!(q_target > 0.0 && q_target < q0) || !(epsilon > 0.0) || !(d > 0.0))
        throw Error(ErrorKind::InvalidArgument, "calibration needs 0 < q_target < q0, epsilon > 0");
    const double e2 = (1.0 / q_target - 1.0 / q0) * d / (2.0 * epsilon);
    return d * std::pow(e2, 1.0 / p_exp);
}

/// |E(d)|² = (c_E/d)² with c_E chosen so that Q0 = 1000, ε = 0.007,
/// d = 2.4 µm gives Q = 960 (c_E ≈ 0.203 µm).
inline FieldProfileModel default_field_model()
{
    return FieldProfileModel::power_law(calibrate_power_law(1000.0, 960.0, 0.007, 2.4, 2.0), 2.0);
}

/// V ≈ (λ/n) π d² / 8.
inline double mode_volume(const PillarDesign& design)
{
    design.validate();
    return design.lambda_0 / design.n_index * std::numbers::pi * design.d * design.d / 8.0;
}

/// 1/Q = 1/Q0 + 2|E(d)|² ε / d.
inline double q_total(const PillarDesign& design, const FieldProfileModel& field)
{
    design.validate();
    const double inv_leak = 2.0 * field.sidewall_intensity(design.d) * design.epsilon / design.d;
    return 1.0 / (1.0 / design.q0 + inv_leak);
}

/// F_p = (3Q / (4π² V)) (λ/n)³.
inline double purcell_factor(const PillarDesign& design, const FieldProfileModel& field)
{
    const double wl = design.lambda_0 / design.n_index;
    return 3.0 * q_total(design, field) / (4.0 * std::numbers::pi * std::numbers::pi *
                                           mode_volume(design)) *
           wl * wl * wl;
}

/// f = (γ_free / (γ_at + 2γ*)) F_p.
inline double ratio_f(double purcell, const PillarDesign& design)
{
    return purcell / (design.loss_ratio + 2.0 * design.gamma_star_ratio);
}

struct FiguresOfMerit {
    double q = 0.0;
    double volume = 0.0;
    double purcell = 0.0;
    double f = 0.0;
    double t_max = 0.0;
    double t_min = 0.0;
    double contrast = 0.0; ///< T_max − T_min
    double eta = 0.0;      ///< raw single-photon efficiency β Q/Q0
    double beta_sq = 0.0;  ///< resonant absorption probability
};

inline FiguresOfMerit figures_of_merit(const PillarDesign& design, const FieldProfileModel& field)
{
    FiguresOfMerit m;
    m.q = q_total(design, field);
    m.volume = mode_volume(design);
    m.purcell = purcell_factor(design, field);
    m.f = ratio_f(m.purcell, design);
    const double q_ratio = m.q / design.q0;
    const double beta = m.f / (1.0 + m.f);
    m.t_max = q_ratio * q_ratio;
    m.t_min = m.t_max / ((1.0 + m.f) * (1.0 + m.f));
    m.contrast = m.t_max - m.t_min;
    m.eta = beta * q_ratio;
    m.beta_sq = beta * beta;
    return m;
}

/// System rates realising the design's Q/Q0 and f for a given (Γ, κ),
/// splitting the emitter leak between γ_at and γ* in the design's ratio.
inline SystemParams to_system_params(const PillarDesign& design, const FieldProfileModel& field,
                                     double gamma, double kappa)
{
    const FiguresOfMerit m = figures_of_merit(design, field);
    const double q_ratio = m.q / design.q0;
    const double leak = q_ratio * gamma / m.f;
    const double denom = design.loss_ratio + 2.0 * design.gamma_star_ratio;
    const double gamma_at = leak * design.loss_ratio / denom;
    const double gamma_star = leak * design.gamma_star_ratio / denom;
    const double gamma_cav = 2.0 * kappa * (1.0 / q_ratio - 1.0);
    return make_params(gamma, kappa, 0.0, gamma_at, gamma_cav, gamma_star);
}

enum class Objective { contrast, purcell, efficiency, beta_sq };

constexpr std::string_view to_string(Objective o) noexcept
{
    switch (o) {
    case Objective::contrast: return "contrast";
    case Objective::purcell: return "purcell";
    case Objective::efficiency: return "efficiency";
    case Objective::beta_sq: return "beta_sq";
    }
    return "unknown";
}

inline Objective parse_objective(std::string_view name)
{
    for (Objective o : {Objective::contrast, Objective::purcell, Objective::efficiency,
                        Objective::beta_sq})
        if (name == to_string(o))
            return o;
    throw Error(ErrorKind::InvalidArgument, "unknown objective '" + std::string(name) + "'");
}

inline double objective_value(const FiguresOfMerit& m, Objective o) noexcept
{
    switch (o) {
    case Objective::contrast: return m.contrast;
    case Objective::purcell: return m.purcell;
    case Objective::efficiency: return m.eta;
    case Objective::beta_sq: return m.beta_sq;
    }
    return 0.0;
}

struct SweepRow {
    double d = 0.0;
    FiguresOfMerit merit;
};

struct OptimizationResult {
    double d_opt = 0.0;
    double value = 0.0;
    FiguresOfMerit merit;
    /// False when the best grid point sits on an end of the range; the
    /// objective is then monotone there and d_opt is that end point.
    bool interior_max = true;
    std::vector<SweepRow> sweep;
};

/// Figures of merit on a uniform diameter grid (inclusive ends).
inline std::vector<SweepRow> sweep_diameter(const PillarDesign& base, double d_min, double d_max,
                                            std::size_t points, const FieldProfileModel& field)
{
    if (!(d_min > 0.0 && d_max > d_min) || points < 2)
        throw Error(ErrorKind::InvalidArgument, "sweep needs 0 < d_min < d_max and >= 2 points");
    std::vector<SweepRow> rows;
    rows.reserve(points);
    PillarDesign design = base;
    for (std::size_t i = 0; i < points; ++i) {
        design.d = i + 1 == points
                       ? d_max
                       : d_min + (d_max - d_min) * static_cast<double>(i) /
                                     static_cast<double>(points - 1);
        rows.push_back({design.d, figures_of_merit(design, field)});
    }
    return rows;
}

/// Coarse grid scan (step <= 0.05 µm) followed by golden-section refinement
/// around the best grid point. `base` supplies everything but q0 and d.
inline OptimizationResult optimize_diameter(double q0, Objective objective,
                                            std::pair<double, double> d_range,
                                            const FieldProfileModel& field,
                                            PillarDesign base = {})
{
    const auto [d_min, d_max] = d_range;
    const auto [dom_lo, dom_hi] = field.domain();
    if (!(d_min >= dom_lo && d_max <= dom_hi))
        throw Error(ErrorKind::InvalidArgument, "d_range outside the field model domain");
    base.q0 = q0;

    const auto points =
        static_cast<std::size_t>(std::ceil((d_max - d_min) / 0.05 - 1e-9)) + 1;
    OptimizationResult res;
    res.sweep = sweep_diameter(base, d_min, d_max, std::max<std::size_t>(points, 3), field);

    const auto& sweep = res.sweep;
    std::size_t best = 0;
    for (std::size_t i = 1; i < sweep.size(); ++i)
        if (objective_value(sweep[i].merit, objective) >
            objective_value(sweep[best].merit, objective))
            best = i;

    if (best == 0 || best + 1 == sweep.size()) {
        res.interior_max = false;
        res.d_opt = sweep[best].d;
        res.merit = sweep[best].merit;
        res.value = objective_value(res.merit, objective);
        return res;
    }

    auto eval = [&](double d) {
        PillarDesign design = base;
        design.d = d;
        return objective_value(figures_of_merit(design, field), objective);
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = sweep[best - 1].d;
    double b = sweep[best + 1].d;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > 1e-9) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }
    PillarDesign design = base;
    design.d = 0.5 * (a + b);
    res.d_opt = design.d;
    res.merit = figures_of_merit(design, field);
    res.value = objective_value(res.merit, objective);
    return res;
}

} // namespace onedatom::pillar
