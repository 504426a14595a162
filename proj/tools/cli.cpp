#include "cli.hpp"

#include <onedatom.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace onedatom::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double inf = std::numeric_limits<double>::infinity();

/// Reads a JSON object whose keys are long flag names. Top-level keys go to
/// the subcommand being run, nested objects address a subcommand by name,
/// arrays become multi-value inputs.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* app) : app_(app) {}

    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override
    {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty() || opt->get_configurable() == false)
                continue;
            const std::string& name = opt->get_lnames().front();
            if (opt->count() > 0) {
                const auto& res = opt->results();
                j[name] = res.size() == 1 ? json(res.front()) : json(res);
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        return j.dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        json j;
        try {
            input >> j;
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("invalid JSON config: ") + e.what());
        }
        if (!j.is_object())
            throw CLI::ConversionError("JSON config must be an object");
        std::vector<std::string> parents;
        if (const auto subs = app_->get_subcommands(); !subs.empty()) {
            const std::string name = subs.front()->get_name();
            if (j.contains(name) && j[name].is_object())
                j = j[name];
            parents.push_back(name);
        }
        std::vector<CLI::ConfigItem> items;
        flatten(j, parents, items);
        return items;
    }

private:
    const CLI::App* app_;

    static std::string scalar(const json& v)
    {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_boolean())
            return v.get<bool>() ? "true" : "false";
        if (v.is_number())
            return v.dump();
        throw CLI::ConversionError("unsupported JSON config value " + v.dump());
    }

    static void flatten(const json& obj, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& items)
    {
        for (const auto& [key, value] : obj.items()) {
            if (value.is_object()) {
                auto sub = parents;
                sub.push_back(key);
                flatten(value, sub, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array())
                for (const auto& v : value)
                    item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(value));
            items.push_back(std::move(item));
        }
    }
};

struct Common {
    std::string out;
    std::string manifest;
    unsigned threads = default_threads();
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--out", c.out, "CSV output path (default: standard output)");
    sub->add_option("--manifest", c.manifest, "manifest path (default: <out>.manifest.json)");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

const CLI::Validator grid_check(
    [](std::string& s) {
        try {
            parse_grid(s);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string{};
    },
    "GRID", "grid");

json number(double v)
{
    if (std::isfinite(v))
        return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

// Rates are in units of kappa.
struct ParamOptions {
    double gamma = 0.002;
    double delta = 0.0;
    double gamma_at = 0.0;
    double gamma_cav = 0.0;
    double gamma_star = 0.0;
    double q_ratio = 1.0;
    double f = inf;
    bool ideal = false;
    CLI::Option* q_opt = nullptr;
    CLI::Option* f_opt = nullptr;

    SystemParams build() const
    {
        if (ideal)
            return make_params(gamma, 1.0, delta);
        if (q_opt->count() > 0 || f_opt->count() > 0)
            return make_params_from_ratios(gamma, 1.0, delta, q_ratio, f);
        return make_params(gamma, 1.0, delta, gamma_at, gamma_cav, gamma_star);
    }
};

void add_param_options(CLI::App* sub, ParamOptions& po, bool with_delta = true,
                       bool with_ideal = false)
{
    sub->add_option("--gamma-over-kappa", po.gamma, "Purcell-enhanced emission rate Gamma/kappa");
    if (with_delta)
        sub->add_option("--delta", po.delta, "cavity-emitter detuning / kappa");
    auto* at = sub->add_option("--gamma-at", po.gamma_at, "emitter leak rate / kappa");
    auto* cav = sub->add_option("--gamma-cav", po.gamma_cav, "cavity leak rate / kappa");
    auto* star = sub->add_option("--gamma-star", po.gamma_star, "pure dephasing rate / kappa");
    po.q_opt = sub->add_option("--q-ratio", po.q_ratio, "Q/Q0 (alternative to --gamma-cav)");
    po.f_opt = sub->add_option("--f", po.f, "emitter ratio f (alternative to --gamma-at)");
    for (auto* o : {po.q_opt, po.f_opt})
        o->excludes(at)->excludes(cav)->excludes(star);
    if (with_ideal) {
        auto* ideal = sub->add_flag("--ideal", po.ideal, "leak-free system");
        for (auto* o : {at, cav, star, po.q_opt, po.f_opt})
            ideal->excludes(o);
    }
}

json describe(const SystemParams& p)
{
    json j;
    j["gamma"] = p.gamma();
    j["kappa"] = p.kappa();
    j["delta"] = p.delta();
    j["gamma_at"] = p.gamma_at();
    j["gamma_cav"] = p.gamma_cav();
    j["gamma_star"] = p.gamma_star();
    j["q_ratio"] = p.q_ratio();
    j["f"] = number(p.f());
    j["beta"] = p.beta();
    j["is_bad_cavity"] = p.is_bad_cavity();
    return j;
}

json inputs_of(const CLI::App* sub)
{
    json j = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty())
            continue;
        const std::string& name = opt->get_lnames().front();
        if (name == "help" || name == "config" || name == "out" || name == "manifest" ||
            name == "threads")
            continue;
        if (opt->count() > 0) {
            const auto& res = opt->results();
            j[name] = res.size() == 1 ? json(res.front()) : json(res);
        } else {
            j[name] = opt->get_default_str();
        }
    }
    return j;
}

struct Report {
    std::ostringstream csv;
    std::vector<std::string> columns;
    std::size_t rows = 0;
    json derived = json::object();
    json results = json::object();

    CsvWriter header(std::initializer_list<std::string_view> names)
    {
        columns.assign(names.begin(), names.end());
        return CsvWriter(csv, names);
    }
};

void emit(const CLI::App* sub, const Common& c, Report& rep, std::ostream& out)
{
    if (c.out.empty()) {
        out << rep.csv.str();
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f)
            throw CLI::FileError("cannot write " + c.out);
        f << rep.csv.str();
    }

    const std::string path = !c.manifest.empty() ? c.manifest
                             : !c.out.empty()     ? c.out + ".manifest.json"
                                                  : std::string{};
    if (path.empty())
        return;
    json m;
    m["program"] = "onedatom";
    m["version"] = version;
    m["command"] = sub->get_name();
    m["inputs"] = inputs_of(sub);
    m["derived"] = rep.derived;
    m["results"] = rep.results;
    m["output"] = {{"columns", rep.columns}, {"rows", rep.rows}};
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw CLI::FileError("cannot write " + path);
    f << m.dump(2) << '\n';
}

template <class Row>
void write_rows(Report& rep, CsvWriter& w, const std::vector<Row>& rows)
{
    for (const auto& r : rows)
        w.row(r);
    rep.rows += rows.size();
}

// --- subcommands ---------------------------------------------------------

struct SpectrumOptions {
    ParamOptions params;
    std::string grid = "-2:2:2001";
    bool evanescent = false;
};

void run_spectrum(const SpectrumOptions& o, const Common& c, Report& rep)
{
    const SystemParams p = o.params.build();
    const auto grid = grid_values(o.grid);
    const Geometry geometry = o.evanescent ? Geometry::evanescent : Geometry::fabry_perot;
    const auto rows = parallel_map(grid.size(), c.threads, [&](std::size_t i) {
        const auto pt = transmission_leaky(grid[i] * p.kappa(), p, geometry);
        return std::vector<double>{pt.delta_omega, pt.t.real(), pt.t.imag(), pt.r.real(),
                                   pt.r.imag(),    pt.cap_t,    pt.cap_r,    pt.leaks};
    });
    auto w = rep.header({"delta_omega", "re_t", "im_t", "re_r", "im_r", "cap_t", "cap_r", "leaks"});
    write_rows(rep, w, rows);

    rep.derived = describe(p);
    if (p.delta() == 0.0) {
        const auto e = resonance_extrema(p);
        rep.results["t_max"] = e.t_max;
        rep.results["t_min"] = e.t_min;
        rep.results["r_max"] = e.r_max;
        rep.results["r_min"] = e.r_min;
        rep.results["leaks"] = e.leaks;
        rep.results["contrast"] = e.contrast();
        if (p.is_ideal()) {
            const auto lw = linewidths_ideal(p);
            rep.results["broad_fwhm"] = lw.broad_numeric;
            rep.results["dip_fwhm"] = lw.dip_numeric;
        }
    }
}

struct SaturationOptions {
    ParamOptions params;
    std::string x_grid = "log:-3:4:701";
};

void run_saturation(const SaturationOptions& o, const Common& c, Report& rep)
{
    const SystemParams p = o.params.build();
    const auto grid = grid_values(o.x_grid);
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[i - 1])
            throw Error(ErrorKind::InvalidArgument, "x_grid must be sorted");
    const auto rows = parallel_map(grid.size(), c.threads, [&](std::size_t i) {
        const auto r = saturation_row(grid[i], p);
        return std::vector<double>{r.x,           r.cap_t,          r.cap_r,
                                   r.p_t_over_p_c, r.p_r_over_p_c, r.p_noise_over_p_in};
    });
    auto w = rep.header(
        {"x", "cap_t", "cap_r", "p_t_over_p_c", "p_r_over_p_c", "p_noise_over_p_in"});
    write_rows(rep, w, rows);

    rep.derived = describe(p);
    rep.derived["p_c"] = critical_power(0.0, p);
    const auto e = resonance_extrema(p);
    rep.results["t_min"] = e.t_min;
    rep.results["t_max"] = e.t_max;
}

struct DynamicsOptions {
    ParamOptions params;
    double delta_omega = 0.0;
    double x = 1.0;
    double power = 0.0;
    CLI::Option* power_opt = nullptr;
    double duration = 0.0;
    CLI::Option* duration_opt = nullptr;
    std::size_t samples = 1000;
    double re_s = 0.0;
    double im_s = 0.0;
    double s_z = -0.5;
    bool explicit_cavity = false;
    double rtol = 1e-9;
    double atol = 1e-12;
};

void run_dynamics(const DynamicsOptions& o, const Common&, Report& rep)
{
    const SystemParams p = o.params.build();
    const double p_in = o.power_opt->count() > 0 ? o.power : 0.25 * p.gamma() * o.x;
    const DriveField drive = drive_with_power(o.delta_omega, p_in);
    const double duration = o.duration_opt->count() > 0 ? o.duration : 20.0 / p.gamma();

    dynamics::StepControl control;
    control.samples = o.samples;
    control.tolerance = {o.rtol, o.atol};
    control.cavity =
        o.explicit_cavity ? dynamics::CavityModel::explicit_mode : dynamics::CavityModel::adiabatic;
    const auto traj =
        dynamics::integrate(drive, p, BlochState{{o.re_s, o.im_s}, o.s_z}, duration, control);

    auto w = rep.header({"t", "re_s", "im_s", "s_z", "re_bt", "im_bt", "re_br", "im_br"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& st = traj.states[i];
        w.row({traj.times[i], st.s.real(), st.s.imag(), st.s_z, traj.b_t[i].real(),
               traj.b_t[i].imag(), traj.b_r[i].real(), traj.b_r[i].imag()});
    }
    rep.rows = traj.times.size();

    rep.derived = describe(p);
    rep.derived["p_in"] = p_in;
    rep.derived["duration"] = duration;
    const auto& last = traj.states.back();
    rep.results["final"] = {{"re_s", last.s.real()}, {"im_s", last.s.imag()}, {"s_z", last.s_z}};
    rep.results["steps_accepted"] = traj.stats.accepted;
    rep.results["steps_rejected"] = traj.stats.rejected;
    try {
        const BlochState ss = steady_state(drive, p);
        rep.results["steady_state"] = {
            {"re_s", ss.s.real()}, {"im_s", ss.s.imag()}, {"s_z", ss.s_z}};
    } catch (const Error&) {
        // no closed form for this regime
    }
}

struct PillarOptions {
    double q0 = 1000.0;
    std::string objective = "contrast";
    double d_min = 0.5;
    double d_max = 6.0;
    double epsilon = 0.007;
    double lambda = 1.0;
    double n_index = 3.5;
    double loss_ratio = 1.0;
    double gamma_star_ratio = 0.0;
    double field_exponent = 2.0;
    double field_ce = 0.0;
    CLI::Option* field_ce_opt = nullptr;
    std::string field_table;
};

pillar::FieldProfileModel load_field_table(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw CLI::FileError("cannot read " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double d = 0.0, e2 = 0.0;
        if (!(ls >> d >> e2)) {
            if (first) {
                first = false;
                continue; // header
            }
            throw Error(ErrorKind::InvalidArgument, "malformed field table row '" + line + "'");
        }
        first = false;
        rows.emplace_back(d, e2);
    }
    return pillar::FieldProfileModel::tabulated(std::move(rows));
}

void run_pillar(const PillarOptions& o, const Common&, Report& rep)
{
    const pillar::Objective objective = pillar::parse_objective(o.objective);
    pillar::FieldProfileModel field =
        !o.field_table.empty()
            ? load_field_table(o.field_table)
            : pillar::FieldProfileModel::power_law(
                  o.field_ce_opt->count() > 0
                      ? o.field_ce
                      : pillar::calibrate_power_law(1000.0, 960.0, 0.007, 2.4, o.field_exponent),
                  o.field_exponent);

    pillar::PillarDesign base;
    base.q0 = o.q0;
    base.epsilon = o.epsilon;
    base.lambda_0 = o.lambda;
    base.n_index = o.n_index;
    base.loss_ratio = o.loss_ratio;
    base.gamma_star_ratio = o.gamma_star_ratio;
    base.validate();

    const auto res = pillar::optimize_diameter(o.q0, objective, {o.d_min, o.d_max}, field, base);
    auto w = rep.header(
        {"d_um", "Q", "V_um3", "Fp", "f", "Tmax", "Tmin", "contrast", "eta", "beta_sq"});
    for (const auto& row : res.sweep) {
        const auto& m = row.merit;
        w.row({row.d, m.q, m.volume, m.purcell, m.f, m.t_max, m.t_min, m.contrast, m.eta,
               m.beta_sq});
    }
    rep.rows = res.sweep.size();

    if (field.kind() == pillar::FieldProfileModel::Kind::power_law)
        rep.derived["field"] = {{"kind", "power_law"}, {"c_e", field.c_e()},
                                {"p_exp", field.p_exp()}};
    else
        rep.derived["field"] = {{"kind", "tabulated"}, {"path", o.field_table}};
    const auto& m = res.merit;
    rep.results["objective"] = o.objective;
    rep.results["d_opt"] = res.d_opt;
    rep.results["value"] = res.value;
    rep.results["interior_max"] = res.interior_max;
    rep.results["Q"] = m.q;
    rep.results["V_um3"] = m.volume;
    rep.results["Fp"] = m.purcell;
    rep.results["f"] = m.f;
    rep.results["Tmax"] = m.t_max;
    rep.results["Tmin"] = m.t_min;
    rep.results["contrast"] = m.contrast;
    rep.results["eta"] = m.eta;
    rep.results["beta_sq"] = m.beta_sq;
}

struct SlowlightOptions {
    double gamma = 0.002;
    std::vector<double> f{10.0};
    unsigned stages = 1;
};

void run_slowlight(const SlowlightOptions& o, const Common& c, Report& rep)
{
    const auto rows = parallel_map(o.f.size(), c.threads, [&](std::size_t i) {
        const auto s =
            applications::slow_light(make_params_from_ratios(o.gamma, 1.0, 0.0, 1.0, o.f[i]), o.stages);
        return std::vector<double>{o.f[i],
                                   s.delay_analytic,
                                   s.delay_numeric,
                                   s.t_stage_analytic,
                                   s.t_stage_numeric,
                                   s.n_half,
                                   s.total_delay_at_n_half,
                                   s.delay_for_stages,
                                   s.transmission_for_stages};
    });
    auto w = rep.header({"f", "delay_analytic", "delay_numeric", "t_stage_analytic",
                         "t_stage_numeric", "n_half", "total_delay_at_n_half", "delay_for_stages",
                         "transmission_for_stages"});
    write_rows(rep, w, rows);
    rep.derived["gamma"] = o.gamma;
    rep.derived["kappa"] = 1.0;
}

struct BistabilityOptions {
    double gamma = 0.002;
    std::vector<double> fractions{0.1, 0.5, 0.9, 0.99};
    std::string x_grid = "log:-3:4:7001";
};

void run_bistability(const BistabilityOptions& o, const Common&, Report& rep)
{
    const SystemParams p = make_params(o.gamma, 1.0);
    const auto grid = grid_values(o.x_grid);
    const auto scan = applications::bistability_scan(p, o.fractions, grid);
    auto w = rep.header({"x", "slope_analytic", "slope_numeric"});
    for (std::size_t i = 0; i < scan.x.size(); ++i)
        w.row({scan.x[i], scan.slope_analytic[i], scan.slope_numeric[i]});
    rep.rows = scan.x.size();

    rep.derived = describe(p);
    rep.results["max_slope"] = scan.max_slope;
    rep.results["max_abs_slope_difference"] = scan.max_abs_slope_difference;
    json verdicts = json::array();
    for (const auto& v : scan.verdicts)
        verdicts.push_back({{"fraction", v.fraction}, {"unique_solution", v.unique_solution}});
    rep.results["verdicts"] = verdicts;
}

struct ReshapeOptions {
    ParamOptions params;
    double extinction = 20.0;
    std::string x_grid = "log:-3:4:701";
};

void run_reshape(const ReshapeOptions& o, const Common& c, Report& rep)
{
    const SystemParams p = o.params.build();
    const auto grid = grid_values(o.x_grid);
    const auto rows = parallel_map(grid.size(), c.threads, [&](std::size_t i) {
        const auto ce = applications::contrast_enhancement(grid[i], o.extinction, p);
        return std::vector<double>{grid[i], ce.c_ideal, ce.c_leaky};
    });
    auto w = rep.header({"x", "c_ideal", "c_leaky"});
    write_rows(rep, w, rows);

    rep.derived = describe(p);
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i][2] > rows[best][2])
            best = i;
    if (!rows.empty()) {
        rep.results["x_best"] = rows[best][0];
        rep.results["c_leaky_max"] = rows[best][2];
        rep.results["c_leaky_max_db"] = 10.0 * std::log10(rows[best][2]);
    }
}

struct KerrOptions {
    double lambda_um = 1.0;
    double n2 = 1e-13;
    double intensity = 1.0;
    double lifetime_ps = 100.0;
    double sigma = 1e-8;
    double p_c = 0.0;
    CLI::Option* p_c_opt = nullptr;
    double factor = 10.0;
};

void run_kerr(const KerrOptions& o, const Common&, Report& rep)
{
    const double lambda_cm = o.lambda_um * 1e-4;
    const double length_m = applications::kerr_length_for_pi(lambda_cm, o.n2, o.intensity) * 1e-2;
    const double p_c = o.p_c_opt->count() > 0
                           ? o.p_c
                           : applications::critical_power_watts(o.lifetime_ps * 1e-12,
                                                                o.lambda_um * 1e-6);
    const double i_pi = applications::switching_intensity(p_c, o.sigma, o.factor);
    auto w = rep.header({"length_m", "p_c_w", "i_pi_w_per_cm2"});
    w.row({length_m, p_c, i_pi});
    rep.rows = 1;
    rep.results["length_m"] = length_m;
    rep.results["p_c_w"] = p_c;
    rep.results["i_pi_w_per_cm2"] = i_pi;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Simulation and design toolkit for a cavity-coupled two-level emitter",
                 "onedatom"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.fallthrough();
    app.set_config("--config", "", "JSON file whose keys mirror the flag names");
    app.config_formatter(std::make_shared<JsonConfig>(&app));

    Common common;
    std::vector<std::pair<CLI::App*, std::function<void(Report&)>>> commands;

    SpectrumOptions spectrum;
    {
        auto* sub = app.add_subcommand("spectrum", "linear transmission and reflection spectrum");
        sub->option_defaults()->always_capture_default();
        add_common(sub, common);
        add_param_options(sub, spectrum.params);
        sub->add_option("--grid", spectrum.grid, "detuning grid in units of kappa")
            ->check(grid_check);
        sub->add_flag("--evanescent", spectrum.evanescent, "side-coupled geometry (t and r swapped)");
        commands.emplace_back(sub, [&](Report& r) { run_spectrum(spectrum, common, r); });
    }

    SaturationOptions saturation;
    {
        auto* sub = app.add_subcommand("saturation", "resonant transmission versus drive power");
        sub->option_defaults()->always_capture_default();
        add_common(sub, common);
        add_param_options(sub, saturation.params, false, true);
        sub->add_option("--x-grid", saturation.x_grid, "saturation parameter grid 4 P_in / Gamma")
            ->check(grid_check);
        commands.emplace_back(sub, [&](Report& r) { run_saturation(saturation, common, r); });
    }

    DynamicsOptions dyn;
    {
        auto* sub = app.add_subcommand("dynamics", "time-domain Bloch equation trajectory");
        sub->option_defaults()->always_capture_default();
        add_common(sub, common);
        add_param_options(sub, dyn.params);
        sub->add_option("--delta-omega", dyn.delta_omega, "drive detuning / kappa");
        auto* x = sub->add_option("--x", dyn.x, "drive power as 4 P_in / Gamma");
        dyn.power_opt = sub->add_option("--power", dyn.power, "drive power in photons per 1/kappa")
                            ->check(CLI::NonNegativeNumber)
                            ->excludes(x);
        x->check(CLI::NonNegativeNumber);
        dyn.duration_opt =
            sub->add_option("--duration", dyn.duration, "integration time in 1/kappa (default 20/Gamma)");
        sub->add_option("--samples", dyn.samples, "number of sampling intervals")
            ->check(CLI::PositiveNumber);
        sub->add_option("--initial-re-s", dyn.re_s, "initial Re s");
        sub->add_option("--initial-im-s", dyn.im_s, "initial Im s");
        sub->add_option("--initial-sz", dyn.s_z, "initial s_z");
        sub->add_flag("--explicit-cavity", dyn.explicit_cavity,
                      "keep the cavity mode as a dynamical variable");
        sub->add_option("--rtol", dyn.rtol, "relative tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--atol", dyn.atol, "absolute tolerance")->check(CLI::PositiveNumber);
        commands.emplace_back(sub, [&](Report& r) { run_dynamics(dyn, common, r); });
    }

    PillarOptions pil;
    {
        auto* sub = app.add_subcommand("pillar", "micropillar diameter optimisation");
        sub->option_defaults()->always_capture_default();
        add_common(sub, common);
        sub->add_option("--q0", pil.q0, "planar-cavity quality factor");
        sub->add_option("--objective", pil.objective, "figure of merit to maximise")
            ->check(CLI::IsMember({"contrast", "purcell", "efficiency", "beta_sq"}));
        sub->add_option("--d-min", pil.d_min, "smallest diameter (um)");
        sub->add_option("--d-max", pil.d_max, "largest diameter (um)");
        sub->add_option("--epsilon", pil.epsilon, "etching-quality parameter (um)");
        sub->add_option("--lambda", pil.lambda, "vacuum wavelength (um)");
        sub->add_option("--n-index", pil.n_index, "refractive index");
        sub->add_option("--loss-ratio", pil.loss_ratio, "gamma_at / gamma_free");
        sub->add_option("--gamma-star-ratio", pil.gamma_star_ratio, "gamma_star / gamma_free");
        sub->add_option("--field-exponent", pil.field_exponent, "power-law exponent of |E(d)|^2");
        pil.field_ce_opt =
            sub->add_option("--field-ce", pil.field_ce, "power-law coefficient c_E (um)");
        sub->add_option("--field-table", pil.field_table, "CSV of d_um,|E|^2 rows")
            ->check(CLI::ExistingFile)
            ->excludes(pil.field_ce_opt);
        commands.emplace_back(sub, [&](Report& r) { run_pillar(pil, common, r); });
    }

    SlowlightOptions slow;
    {
        auto* sub = app.add_subcommand("slowlight", "group delay of cascaded emitter stages");
        sub->option_defaults()->always_capture_default();
        add_common(sub, common);
        sub->add_option("--gamma-over-kappa", slow.gamma, "Gamma/kappa");
        sub->add_option("--f", slow.f, "emitter ratio f (one row per value)");
        sub->add_option("--stages", slow.stages, "number of stages");
        commands.emplace_back(sub, [&](Report& r) { run_slowlight(slow, common, r); });
    }

    BistabilityOptions bist;
    {
        auto* sub = app.add_subcommand("bistability", "feedback-loop bistability scan");
        sub->option_defaults()->always_capture_default();
        add_common(sub, common);
        sub->add_option("--gamma-over-kappa", bist.gamma, "Gamma/kappa");
        sub->add_option("--fractions", bist.fractions, "feedback fractions A in [0, 1)");
        sub->add_option("--x-grid", bist.x_grid, "saturation parameter grid")->check(grid_check);
        commands.emplace_back(sub, [&](Report& r) { run_bistability(bist, common, r); });
    }

    ReshapeOptions reshape;
    {
        auto* sub = app.add_subcommand("reshape", "pulse contrast enhancement");
        sub->option_defaults()->always_capture_default();
        add_common(sub, common);
        add_param_options(sub, reshape.params, false);
        sub->add_option("--extinction", reshape.extinction, "input extinction ratio P_H / P_L");
        sub->add_option("--x-grid", reshape.x_grid, "saturation parameter grid")->check(grid_check);
        commands.emplace_back(sub, [&](Report& r) { run_reshape(reshape, common, r); });
    }

    KerrOptions kerr;
    {
        auto* sub = app.add_subcommand("kerr", "equivalent Kerr-medium length and switching intensity");
        sub->option_defaults()->always_capture_default();
        add_common(sub, common);
        sub->add_option("--lambda-um", kerr.lambda_um, "wavelength (um)");
        sub->add_option("--n2", kerr.n2, "Kerr index (cm^2/W)");
        sub->add_option("--intensity", kerr.intensity, "intensity (W/cm^2)");
        sub->add_option("--lifetime-ps", kerr.lifetime_ps, "emitter lifetime 1/Gamma (ps)");
        sub->add_option("--sigma-cm2", kerr.sigma, "focal area (cm^2)");
        kerr.p_c_opt = sub->add_option("--pc-watts", kerr.p_c, "critical power (W)");
        sub->add_option("--factor", kerr.factor, "I_pi = factor * P_c / sigma");
        commands.emplace_back(sub, [&](Report& r) { run_kerr(kerr, common, r); });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [sub, fn] : commands) {
            if (!sub->parsed())
                continue;
            Report rep;
            fn(rep);
            emit(sub, common, rep, out);
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace onedatom::cli
