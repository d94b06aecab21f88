#pragma once

#include "zmw/transmission.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>

namespace zmw::app
{
// Configuration problem tied to a source line (0 when not line specific).
class ConfigError : public std::runtime_error
{
public:
    ConfigError(const std::string &source, int line, const std::string &message);
    int line() const { return line_; }

private:
    int line_;
};

enum class MaterialKind
{
    PerfectConductor,
    Drude,
    Tabulated
};

enum class AtomKind
{
    TwoLevel,
    MetaAtom
};

enum class ModelKind
{
    Fano,   // coupling from xibar and the (lambda0 / R)^3 geometry scaling
    PecDeep // deep perfectly conducting hole, TE11 only
};

// Flat "section.key = value" run description. Unset keys keep these defaults.
struct RunConfig
{
    double radius_nm = 50.0;
    double depth_nm = 100.0;

    MaterialKind material = MaterialKind::PerfectConductor;
    double plasma_frequency = 0.0; // rad/s, drude only
    std::filesystem::path material_table;

    AtomKind atom = AtomKind::MetaAtom;
    double resonance_wavelength_nm = 532.0;
    double linewidth_rel = 1e-6; // Gamma0 / omega0, two_level only
    double atom_x_nm = 0.0;
    double atom_y_nm = 0.0;
    double atom_z_nm = 50.0;
    double meta_atom_radius_nm = 3.0;

    ModelKind model = ModelKind::Fano;
    double xibar = 2.0;
    double green_re = 0.0; // nm^-3
    double green_im = 0.0; // nm^-3
    LineshapeSign sign = LineshapeSign::Retarded;

    double lambda_min_nm = 531.5;
    double lambda_max_nm = 533.0;
    std::size_t points = 501;

    std::filesystem::path output = "spectrum.csv";
    std::string format = "csv";

    std::string source = "<config>";
    std::map<std::string, int> key_lines; // key -> line it was set on

    int line_of(const std::string &key) const;
};

RunConfig parse_run_config(std::istream &in, const std::string &source = "<config>");
// A relative material.table is resolved against the config file directory.
RunConfig load_run_config(const std::filesystem::path &path);

// Cross-field checks; throws ConfigError citing the line of the offending key.
void validate(const RunConfig &config);

// One line per key with its default, in file syntax.
std::string config_schema();

} // namespace zmw::app
