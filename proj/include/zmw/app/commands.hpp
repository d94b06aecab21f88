#pragma once

#include "zmw/analysis.hpp"
#include "zmw/app/config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace zmw::app
{
enum ExitCode : int
{
    kExitOk = 0,
    kExitUsage = 2,
    kExitNumerical = 3,
};

enum class SweepAxis
{
    Radius,
    Depth,
    AtomZ,
    AtomX,
    Xibar
};

SweepAxis parse_sweep_axis(const std::string &name);
const char *to_string(SweepAxis axis);

struct SpectrumRun
{
    Spectrum spectrum;
    SpectrumMetrics metrics;
    Warnings warnings;
    double lambda0_nm = 0.0;
    double coupling = 0.0; // Fano coupling, or the deep-PEC coefficient at lambda0
    double omega_tilde = 0.0;
    double gamma_tilde = 0.0;
    bool zero_mode = false;
    double decay_length_nm = 0.0;
    std::optional<double> shift_perpendicular;
    std::optional<double> shift_parallel;
};

// Evaluates the configured forward model on the wavelength grid. Throws
// ConfigError / DomainError / RegimeError on bad input.
SpectrumRun evaluate(const RunConfig &config, unsigned threads = 1);

void apply_sweep_value(RunConfig &config, SweepAxis axis, double value);

// "<stem>_<axis>_<value><ext>" next to config.output.
std::filesystem::path sweep_spectrum_path(const RunConfig &config, SweepAxis axis, double value);
std::filesystem::path sweep_summary_path(const RunConfig &config, SweepAxis axis);

int run_spectrum(const RunConfig &config, unsigned threads, std::ostream &out, std::ostream &err);
int run_sweep(const RunConfig &config, SweepAxis axis, const std::vector<double> &values, unsigned threads,
              std::ostream &out, std::ostream &err);
int run_fit(const std::filesystem::path &csv, std::optional<double> lambda0_nm, std::optional<double> radius_nm,
            std::ostream &out, std::ostream &err);
int run_modes(double radius_nm, double wavelength_nm, std::ostream &out, std::ostream &err);
int run_feasibility(const FeasibilityInput &input, std::ostream &out, std::ostream &err);

// Full command line: spectrum | sweep | fit | modes | feasibility | schema.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace zmw::app
