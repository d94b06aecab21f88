#include "zmw/app/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace zmw::app
{
ConfigError::ConfigError(const std::string &source, int line, const std::string &message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message),
      line_(line)
{
}

int RunConfig::line_of(const std::string &key) const
{
    const auto it = key_lines.find(key);
    return it == key_lines.end() ? 0 : it->second;
}

namespace
{
std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string &text, const std::string &source, int line, const std::string &key)
{
    double v = 0.0;
    const char *begin = text.data();
    const char *end = text.data() + text.size();
    if (begin != end && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError(source, line, "'" + key + "' expects a number, got '" + text + "'");
    return v;
}

std::size_t to_count(const std::string &text, const std::string &source, int line, const std::string &key)
{
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(source, line, "'" + key + "' expects a non-negative integer, got '" + text + "'");
    return v;
}

template <class Enum>
Enum to_enum(const std::string &text, std::initializer_list<std::pair<const char *, Enum>> choices,
             const std::string &source, int line, const std::string &key)
{
    std::string allowed;
    for (const auto &[name, value] : choices)
    {
        if (text == name)
            return value;
        allowed += allowed.empty() ? name : std::string(" | ") + name;
    }
    throw ConfigError(source, line, "'" + key + "' must be one of " + allowed + ", got '" + text + "'");
}

using Setter = std::function<void(RunConfig &, const std::string &value, int line)>;

const std::map<std::string, Setter> &setters()
{
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto number = [&t](const std::string &key, double RunConfig::*field) {
            t[key] = [key, field](RunConfig &c, const std::string &v, int line) {
                c.*field = to_double(v, c.source, line, key);
            };
        };
        number("geometry.radius_nm", &RunConfig::radius_nm);
        number("geometry.depth_nm", &RunConfig::depth_nm);
        number("material.plasma_frequency_rad_s", &RunConfig::plasma_frequency);
        number("atom.resonance_wavelength_nm", &RunConfig::resonance_wavelength_nm);
        number("atom.linewidth_rel", &RunConfig::linewidth_rel);
        number("atom.x_nm", &RunConfig::atom_x_nm);
        number("atom.y_nm", &RunConfig::atom_y_nm);
        number("atom.z_nm", &RunConfig::atom_z_nm);
        number("atom.radius_nm", &RunConfig::meta_atom_radius_nm);
        number("model.xibar", &RunConfig::xibar);
        number("model.green_re", &RunConfig::green_re);
        number("model.green_im", &RunConfig::green_im);
        number("scan.lambda_min_nm", &RunConfig::lambda_min_nm);
        number("scan.lambda_max_nm", &RunConfig::lambda_max_nm);

        t["scan.points"] = [](RunConfig &c, const std::string &v, int line) {
            c.points = to_count(v, c.source, line, "scan.points");
        };
        t["material.kind"] = [](RunConfig &c, const std::string &v, int line) {
            c.material = to_enum<MaterialKind>(
                v, {{"pec", MaterialKind::PerfectConductor}, {"drude", MaterialKind::Drude}, {"tabulated", MaterialKind::Tabulated}},
                c.source, line, "material.kind");
        };
        t["material.table"] = [](RunConfig &c, const std::string &v, int) { c.material_table = v; };
        t["atom.kind"] = [](RunConfig &c, const std::string &v, int line) {
            c.atom = to_enum<AtomKind>(v, {{"two_level", AtomKind::TwoLevel}, {"meta_atom", AtomKind::MetaAtom}},
                                       c.source, line, "atom.kind");
        };
        t["model.kind"] = [](RunConfig &c, const std::string &v, int line) {
            c.model = to_enum<ModelKind>(v, {{"fano", ModelKind::Fano}, {"pec_deep", ModelKind::PecDeep}}, c.source,
                                         line, "model.kind");
        };
        t["model.lineshape_sign"] = [](RunConfig &c, const std::string &v, int line) {
            c.sign = to_enum<LineshapeSign>(
                v, {{"retarded", LineshapeSign::Retarded}, {"inverted", LineshapeSign::Inverted}}, c.source, line,
                "model.lineshape_sign");
        };
        t["output.path"] = [](RunConfig &c, const std::string &v, int) { c.output = v; };
        t["output.format"] = [](RunConfig &c, const std::string &v, int line) {
            if (v != "csv")
                throw ConfigError(c.source, line, "'output.format' must be csv, got '" + v + "'");
            c.format = v;
        };
        return t;
    }();
    return table;
}
} // namespace

RunConfig parse_run_config(std::istream &in, const std::string &source)
{
    RunConfig config;
    config.source = source;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        // '#' starts a comment at the beginning of a line or after whitespace.
        for (std::size_t i = 1; i < raw.size(); ++i)
            if (raw[i] == '#' && (raw[i - 1] == ' ' || raw[i - 1] == '\t'))
            {
                raw.resize(i);
                break;
            }
        std::string text = trim(raw);
        if (text.empty() || text.front() == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source, line, "expected 'key = value'");
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(source, line, "expected 'key = value'");
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError(source, line, "unknown key '" + key + "'");
        if (config.key_lines.count(key))
            throw ConfigError(source, line,
                              "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(config.key_lines[key]) + ")");
        it->second(config, value, line);
        config.key_lines[key] = line;
    }
    if (!config.key_lines.count("scan.lambda_min_nm") && !config.key_lines.count("scan.lambda_max_nm"))
    {
        config.lambda_min_nm = config.resonance_wavelength_nm - 0.5;
        config.lambda_max_nm = config.resonance_wavelength_nm + 1.0;
    }
    if (!config.key_lines.count("atom.z_nm"))
        config.atom_z_nm = 0.5 * config.depth_nm;
    return config;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string(), 0, "cannot open config file");
    RunConfig config = parse_run_config(in, path.string());
    if (!config.material_table.empty() && config.material_table.is_relative())
        config.material_table = path.parent_path() / config.material_table;
    validate(config);
    return config;
}

void validate(const RunConfig &c)
{
    auto fail = [&c](const std::string &key, const std::string &message) {
        throw ConfigError(c.source, c.line_of(key), message);
    };
    if (!(c.radius_nm > 0.0))
        fail("geometry.radius_nm", "geometry.radius_nm must be positive");
    if (!(c.depth_nm > 0.0))
        fail("geometry.depth_nm", "geometry.depth_nm must be positive");
    if (c.material == MaterialKind::Drude && !(c.plasma_frequency > 0.0))
        fail("material.plasma_frequency_rad_s", "drude material needs a positive material.plasma_frequency_rad_s");
    if (c.material == MaterialKind::Tabulated && c.material_table.empty())
        fail("material.kind", "tabulated material needs material.table");
    if (!(c.resonance_wavelength_nm > 0.0))
        fail("atom.resonance_wavelength_nm", "atom.resonance_wavelength_nm must be positive");
    if (c.atom == AtomKind::TwoLevel && !(c.linewidth_rel > 0.0))
        fail("atom.linewidth_rel", "atom.linewidth_rel must be positive");
    if (c.atom == AtomKind::MetaAtom && !(c.meta_atom_radius_nm > 0.0))
        fail("atom.radius_nm", "atom.radius_nm must be positive");
    if (!(c.atom_x_nm * c.atom_x_nm + c.atom_y_nm * c.atom_y_nm < c.radius_nm * c.radius_nm))
        fail(c.key_lines.count("atom.x_nm") ? "atom.x_nm" : "atom.y_nm", "atom position lies outside the hole radius");
    if (!(c.atom_z_nm >= 0.0 && c.atom_z_nm <= c.depth_nm))
        fail("atom.z_nm", "atom.z_nm must lie in [0, geometry.depth_nm]");
    if (!(c.lambda_min_nm > 0.0))
        fail("scan.lambda_min_nm", "scan.lambda_min_nm must be positive");
    if (!(c.lambda_min_nm < c.lambda_max_nm))
        fail(c.key_lines.count("scan.lambda_min_nm") ? "scan.lambda_min_nm" : "scan.lambda_max_nm",
             "scan.lambda_min_nm must be less than scan.lambda_max_nm");
    if (c.points < 2)
        fail("scan.points", "scan.points must be at least 2");
    if (c.output.empty())
        fail("output.path", "output.path must not be empty");
}

std::string config_schema()
{
    return R"(# geometry
geometry.radius_nm = 50
geometry.depth_nm = 100
# wall material: pec | drude | tabulated
material.kind = pec
material.plasma_frequency_rad_s = 0        # drude only
material.table = aluminum.csv              # tabulated only: wavelength_nm, eps_real, eps_imag
# scatterer: two_level | meta_atom
atom.kind = meta_atom
atom.resonance_wavelength_nm = 532
atom.linewidth_rel = 1e-6                  # Gamma0 / omega0, two_level only
atom.radius_nm = 3                         # meta_atom only
atom.x_nm = 0
atom.y_nm = 0
atom.z_nm = 50                             # default: half the depth
# forward model: fano | pec_deep
model.kind = fano
model.xibar = 2
model.green_re = 0                         # reflected Green component, nm^-3
model.green_im = 0
model.lineshape_sign = retarded            # retarded | inverted
# wavelength grid (default: resonance - 0.5 nm to resonance + 1 nm)
scan.lambda_min_nm = 531.5
scan.lambda_max_nm = 533
scan.points = 501
output.path = spectrum.csv
output.format = csv
)";
}

} // namespace zmw::app
