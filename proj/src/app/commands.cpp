#include "zmw/app/commands.hpp"

#include "zmw/app/csv.hpp"
#include "zmw/numerics/bessel.hpp"
#include "zmw/parallel.hpp"
#include "zmw/units.hpp"
#include "zmw/waveguide.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace zmw::app
{
namespace
{
// Maps an exception from evaluation onto an exit code and reports it.
int report_failure(std::ostream &err, const std::exception &e)
{
    if (dynamic_cast<const ConfigError *>(&e) || dynamic_cast<const DomainError *>(&e) ||
        dynamic_cast<const RegimeError *>(&e) || dynamic_cast<const RangeError *>(&e))
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
}

void print(std::ostream &out, const char *key, double value) { out << key << ": " << format_summary(value) << '\n'; }

MaterialModel make_wall(const RunConfig &c)
{
    switch (c.material)
    {
    case MaterialKind::PerfectConductor:
        return MaterialModel::perfect_conductor();
    case MaterialKind::Drude:
        return MaterialModel::drude(c.plasma_frequency);
    case MaterialKind::Tabulated:
        try
        {
            return load_material_table(c.material_table);
        }
        catch (const DomainError &e)
        {
            throw ConfigError(c.source, c.line_of("material.table"), e.what());
        }
    }
    return MaterialModel::perfect_conductor();
}

TwoLevelAtom make_atom(const RunConfig &c, double omega0, Warnings &warnings)
{
    if (c.atom == AtomKind::TwoLevel)
        return TwoLevelAtom(omega0, c.linewidth_rel * omega0, {1.0, 0.0, 0.0}, &warnings);
    const MetaAtom meta = MetaAtom::for_resonance(c.resonance_wavelength_nm, c.meta_atom_radius_nm, &warnings);
    const LorentzianParams lorentz = meta_atom_lorentzian_params(meta, omega0);
    return TwoLevelAtom(lorentz.omega0, lorentz.gamma, {1.0, 0.0, 0.0}, &warnings);
}

std::string value_label(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_safe(std::string text)
{
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}
} // namespace

SweepAxis parse_sweep_axis(const std::string &name)
{
    for (SweepAxis axis : {SweepAxis::Radius, SweepAxis::Depth, SweepAxis::AtomZ, SweepAxis::AtomX, SweepAxis::Xibar})
        if (name == to_string(axis))
            return axis;
    throw ConfigError("--axis", 0, "unknown sweep axis '" + name + "' (radius | depth | atom_z | atom_x | xibar)");
}

const char *to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::Radius:
        return "radius";
    case SweepAxis::Depth:
        return "depth";
    case SweepAxis::AtomZ:
        return "atom_z";
    case SweepAxis::AtomX:
        return "atom_x";
    case SweepAxis::Xibar:
        return "xibar";
    }
    return "unknown";
}

SpectrumRun evaluate(const RunConfig &c, unsigned threads)
{
    validate(c);
    const ZmwGeometry geometry(c.radius_nm, c.depth_nm, make_wall(c));
    validate_position(geometry, AtomPosition{c.atom_x_nm, c.atom_y_nm, c.atom_z_nm});

    SpectrumRun run;
    run.lambda0_nm = c.resonance_wavelength_nm;
    const double omega0 = units::omega_from_wavelength(run.lambda0_nm);
    const double k0 = units::wavenumber(run.lambda0_nm);

    const TwoLevelAtom atom = make_atom(c, omega0, run.warnings);
    const PurcellResult purcell =
        purcell_modify(atom, k0, GreenComponent(complex(c.green_re, c.green_im)), &run.warnings);
    if (!(purcell.gamma_tilde > 0.0))
        throw DomainError("environment-modified linewidth is not positive; check model.green_im");
    run.omega_tilde = purcell.omega_tilde;
    run.gamma_tilde = purcell.gamma_tilde;

    const WaveguideMode mode = fundamental_mode(geometry, run.lambda0_nm);
    run.zero_mode = !mode.propagating;
    run.decay_length_nm = mode.decay_length;

    const auto grid = linear_grid(c.lambda_min_nm, c.lambda_max_nm, c.points);
    if (c.model == ModelKind::Fano)
    {
        if (!run.zero_mode)
            warn(&run.warnings, "hole supports a propagating TE11 mode at the resonance wavelength");
        FanoModel model;
        model.omega_tilde = purcell.omega_tilde;
        model.gamma_tilde = purcell.gamma_tilde;
        model.coupling = fano_coupling_from_xibar(c.xibar, run.lambda0_nm, c.radius_nm);
        model.xibar = c.xibar;
        model.sign = c.sign;
        run.coupling = model.coupling.real();
        run.spectrum = fano_spectrum(grid, model, threads);
    }
    else
    {
        run.coupling = pec_deep_coefficient(omega0, c.radius_nm);
        run.spectrum = pec_deep_spectrum(grid, c.radius_nm, purcell, c.sign, threads);
    }
    run.metrics = spectrum_metrics(run.spectrum, 1.0);

    const double rho = std::hypot(c.atom_x_nm, c.atom_y_nm);
    if (rho > 0.0)
    {
        const complex eps = geometry.wall_material.permittivity(run.lambda0_nm);
        run.shift_perpendicular =
            off_axis_shift(rho, c.radius_nm, eps, DipoleOrientation::PerpendicularToWall, &run.warnings);
        run.shift_parallel = off_axis_shift(rho, c.radius_nm, eps, DipoleOrientation::ParallelToWall);
    }
    return run;
}

void apply_sweep_value(RunConfig &c, SweepAxis axis, double value)
{
    switch (axis)
    {
    case SweepAxis::Radius:
        c.radius_nm = value;
        break;
    case SweepAxis::Depth:
        c.depth_nm = value;
        if (!c.key_lines.count("atom.z_nm"))
            c.atom_z_nm = 0.5 * value;
        break;
    case SweepAxis::AtomZ:
        c.atom_z_nm = value;
        c.key_lines["atom.z_nm"] = 0;
        break;
    case SweepAxis::AtomX:
        c.atom_x_nm = value;
        break;
    case SweepAxis::Xibar:
        c.xibar = value;
        break;
    }
}

std::filesystem::path sweep_spectrum_path(const RunConfig &c, SweepAxis axis, double value)
{
    auto p = c.output;
    p.replace_filename(c.output.stem().string() + "_" + to_string(axis) + "_" + value_label(value) +
                       c.output.extension().string());
    return p;
}

std::filesystem::path sweep_summary_path(const RunConfig &c, SweepAxis axis)
{
    auto p = c.output;
    p.replace_filename(c.output.stem().string() + "_" + to_string(axis) + "_summary.csv");
    return p;
}

int run_spectrum(const RunConfig &config, unsigned threads, std::ostream &out, std::ostream &err)
{
    SpectrumRun run;
    try
    {
        run = evaluate(config, threads);
        write_spectrum_csv(config.output, run.spectrum);
    }
    catch (const std::exception &e)
    {
        return report_failure(err, e);
    }

    out << "model: " << (config.model == ModelKind::Fano ? "fano" : "pec_deep") << '\n';
    out << "points: " << run.spectrum.size() << '\n';
    print(out, "lambda0_nm", run.lambda0_nm);
    print(out, "lambda_tilde_nm", units::wavelength_from_omega(run.omega_tilde));
    print(out, "gamma_tilde_rad_s", run.gamma_tilde);
    print(out, config.model == ModelKind::Fano ? "coupling" : "pec_coefficient", run.coupling);
    print(out, "peak", run.metrics.peak);
    print(out, "peak_wavelength_nm", run.metrics.peak_wavelength_nm);
    print(out, "minimum", run.metrics.minimum);
    print(out, "min_wavelength_nm", run.metrics.min_wavelength_nm);
    print(out, "blocking_orders", run.metrics.blocking_orders);
    print(out, "effective_cross_section_nm2", effective_cross_section(run.metrics.peak, config.radius_nm));
    print(out, "resonant_cross_section_nm2", resonant_cross_section(run.lambda0_nm));
    out << "zero_mode: " << (run.zero_mode ? "yes" : "no") << '\n';
    print(out, "te11_decay_length_nm", run.decay_length_nm);
    if (run.shift_perpendicular)
    {
        print(out, "off_axis_shift_perpendicular", *run.shift_perpendicular);
        print(out, "off_axis_shift_parallel", *run.shift_parallel);
    }
    out << "output: " << config.output.string() << '\n';
    for (const auto &w : run.warnings)
        err << "warning: " << w << '\n';
    return kExitOk;
}

int run_sweep(const RunConfig &config, SweepAxis axis, const std::vector<double> &values, unsigned threads,
              std::ostream &out, std::ostream &err)
{
    if (values.empty())
    {
        err << "error: sweep needs at least one value\n";
        return kExitUsage;
    }

    std::vector<std::optional<SpectrumRun>> runs(values.size());
    std::vector<std::string> failures(values.size());
    for_each_chunk(values.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
        {
            RunConfig c = config;
            apply_sweep_value(c, axis, values[i]);
            try
            {
                runs[i] = evaluate(c, 1);
            }
            catch (const std::exception &e)
            {
                failures[i] = e.what();
            }
        }
    });

    // Files are written in input order after every value has been evaluated.
    const auto summary_path = sweep_summary_path(config, axis);
    std::ofstream summary(summary_path, std::ios::binary | std::ios::trunc);
    if (!summary)
    {
        err << "error: cannot write " << summary_path.string() << '\n';
        return kExitUsage;
    }
    summary << to_string(axis) << ",peak,peak_wavelength_nm,minimum,min_wavelength_nm,blocking_orders,status\n";
    bool all_ok = true;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        summary << value_label(values[i]);
        if (runs[i])
        {
            try
            {
                write_spectrum_csv(sweep_spectrum_path(config, axis, values[i]), runs[i]->spectrum);
            }
            catch (const std::exception &e)
            {
                failures[i] = e.what();
                runs[i].reset();
            }
        }
        if (runs[i])
        {
            const auto &m = runs[i]->metrics;
            summary << ',' << format_summary(m.peak) << ',' << format_summary(m.peak_wavelength_nm) << ','
                    << format_summary(m.minimum) << ',' << format_summary(m.min_wavelength_nm) << ','
                    << format_summary(m.blocking_orders) << ",ok\n";
            out << to_string(axis) << ' ' << value_label(values[i]) << ": peak " << format_summary(m.peak)
                << ", minimum " << format_summary(m.minimum) << '\n';
        }
        else
        {
            all_ok = false;
            summary << ",,,,,,error: " << csv_safe(failures[i]) << '\n';
            err << "error: " << to_string(axis) << ' ' << value_label(values[i]) << ": " << failures[i] << '\n';
        }
    }
    out << "summary: " << summary_path.string() << '\n';
    return all_ok ? kExitOk : kExitNumerical;
}

int run_fit(const std::filesystem::path &csv, std::optional<double> lambda0_nm, std::optional<double> radius_nm,
            std::ostream &out, std::ostream &err)
{
    FanoFitResult fit;
    try
    {
        const Spectrum spectrum = read_spectrum_csv(csv);
        fit = fit_fano(spectrum);
    }
    catch (const std::exception &e)
    {
        return report_failure(err, e);
    }

    const double lambda_tilde = fit.lambda_tilde_nm();
    print(out, "lambda_tilde_nm", lambda_tilde);
    print(out, "gamma_tilde_rad_s", fit.gamma_tilde);
    print(out, "gamma_tilde_nm", lambda_tilde * fit.gamma_tilde / fit.omega_tilde);
    print(out, "coupling_abs", std::abs(fit.coupling));
    print(out, "coupling_arg_rad", std::arg(fit.coupling));
    print(out, "baseline", fit.baseline);
    print(out, "residual", fit.residual);
    out << "status: " << numerics::to_string(fit.status) << '\n';
    if (radius_nm && fit.converged)
    {
        try
        {
            const complex xibar = extract_xibar(fit, lambda0_nm.value_or(lambda_tilde), *radius_nm);
            print(out, "xibar_re", xibar.real());
            print(out, "xibar_im", xibar.imag());
            print(out, "xibar_abs", std::abs(xibar));
        }
        catch (const std::exception &e)
        {
            return report_failure(err, e);
        }
    }
    return fit.converged ? kExitOk : kExitNumerical;
}

int run_modes(double radius_nm, double wavelength_nm, std::ostream &out, std::ostream &err)
{
    try
    {
        const ZmwGeometry geometry(radius_nm, 1.0);
        if (!(wavelength_nm > 0.0))
            throw DomainError("wavelength must be positive");
        std::vector<WaveguideMode> modes;
        for (auto family : {numerics::ModeFamily::TE, numerics::ModeFamily::TM})
            for (int m = 0; m <= 2; ++m)
                for (int n = 1; n <= 3; ++n)
                    modes.push_back(mode_propagation(geometry, wavelength_nm, numerics::mode_root(family, m, n)));
        std::stable_sort(modes.begin(), modes.end(),
                         [](const WaveguideMode &a, const WaveguideMode &b) { return a.root.value < b.root.value; });
        print(out, "k0R", units::wavenumber(wavelength_nm) * radius_nm);
        out << "family,m,n,root,kappa_per_nm,decay_length_nm,propagating\n";
        for (const auto &mode : modes)
            out << (mode.root.family == numerics::ModeFamily::TE ? "TE" : "TM") << ',' << mode.root.azimuthal_index
                << ',' << mode.root.radial_index << ',' << format_summary(mode.root.value) << ','
                << format_summary(mode.kappa) << ',' << format_summary(mode.decay_length) << ','
                << (mode.propagating ? "yes" : "no") << '\n';
        out << "zero_mode: " << (is_zero_mode(geometry, wavelength_nm) ? "yes" : "no") << '\n';
    }
    catch (const std::exception &e)
    {
        return report_failure(err, e);
    }
    return kExitOk;
}

int run_feasibility(const FeasibilityInput &input, std::ostream &out, std::ostream &err)
{
    try
    {
        const FeasibilityResult r = feasibility(input);
        print(out, "dwell_time_s", r.dwell_time_s);
        out << "dwell_ok: " << (r.dwell_ok ? "yes" : "no") << '\n';
        print(out, "de_broglie_nm", r.de_broglie_nm);
        out << "classical_ok: " << (r.classical_ok ? "yes" : "no") << '\n';
    }
    catch (const std::exception &e)
    {
        return report_failure(err, e);
    }
    return kExitOk;
}

namespace
{
std::vector<double> parse_values(const std::string &text)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        while (used < item.size() && item[used] == ' ')
            ++used;
        if (item.empty() || used != item.size() || !std::isfinite(v))
            throw ConfigError("--values", 0, "bad sweep value '" + item + "'");
        values.push_back(v);
    }
    return values;
}
} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Transmission through a zero-mode waveguide holding a single resonant scatterer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_override;
    unsigned threads = 1;

    auto *spectrum = app.add_subcommand("spectrum", "Evaluate a transmission spectrum and write CSV");
    spectrum->add_option("config", config_path, "Run configuration (key = value)")->required();
    spectrum->add_option("-o,--output", output_override, "Override output.path");
    spectrum->add_option("-j,--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

    std::string axis_name;
    std::string values_text;
    auto *sweep = app.add_subcommand("sweep", "Repeat a spectrum over one parameter");
    sweep->add_option("config", config_path, "Run configuration (key = value)")->required();
    sweep->add_option("--axis", axis_name, "radius | depth | atom_z | atom_x | xibar")->required();
    sweep->add_option("--values", values_text, "Comma-separated values")->required();
    sweep->add_option("-o,--output", output_override, "Override output.path (stem of all files)");
    sweep->add_option("-j,--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

    std::string csv_path;
    std::optional<double> fit_lambda0;
    std::optional<double> fit_radius;
    auto *fit = app.add_subcommand("fit", "Fit a Fano lineshape to a spectrum CSV");
    fit->add_option("csv", csv_path, "Spectrum CSV (wavelength_nm,transmission)")->required();
    fit->add_option("--lambda0", fit_lambda0, "Resonance wavelength for xibar, nm (default: fitted)");
    fit->add_option("--radius", fit_radius, "Hole radius for xibar, nm");

    double modes_radius = 0.0;
    double modes_lambda = 0.0;
    auto *modes = app.add_subcommand("modes", "List cylindrical waveguide modes and the zero-mode verdict");
    modes->add_option("--radius", modes_radius, "Hole radius, nm")->required();
    modes->add_option("--lambda", modes_lambda, "Wavelength, nm")->required();

    FeasibilityInput feas;
    auto *feasible = app.add_subcommand("feasibility", "Dwell time and de Broglie wavelength of a moving atom");
    feasible->add_option("--depth", feas.depth_nm, "Hole depth, nm")->required();
    feasible->add_option("--speed", feas.speed_m_s, "Atom speed, m/s")->required();
    feasible->add_option("--lifetime", feas.lifetime_s, "Radiative lifetime, s")->required();
    feasible->add_option("--mass", feas.mass_kg, "Atom mass, kg")->required();

    auto *schema = app.add_subcommand("schema", "Print every configuration key with its default");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try
    {
        if (spectrum->parsed() || sweep->parsed())
        {
            RunConfig config = load_run_config(config_path);
            if (!output_override.empty())
                config.output = output_override;
            if (spectrum->parsed())
                return run_spectrum(config, threads, out, err);
            return run_sweep(config, parse_sweep_axis(axis_name), parse_values(values_text), threads, out, err);
        }
        if (fit->parsed())
            return run_fit(csv_path, fit_lambda0, fit_radius, out, err);
        if (modes->parsed())
            return run_modes(modes_radius, modes_lambda, out, err);
        if (feasible->parsed())
            return run_feasibility(feas, out, err);
        if (schema->parsed())
        {
            out << config_schema();
            return kExitOk;
        }
    }
    catch (const std::exception &e)
    {
        return report_failure(err, e);
    }
    return kExitUsage;
}

} // namespace zmw::app
