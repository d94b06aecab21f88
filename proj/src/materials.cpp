#include "zmw/materials.hpp"

#include "zmw/errors.hpp"
#include "zmw/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace zmw
{
complex drude_permittivity(double omega, double omega_pl)
{
    if (!(omega > 0.0))
        throw DomainError("drude_permittivity: omega must be positive");
    const double ratio = omega_pl / omega;
    return {1.0 - ratio * ratio, 0.0};
}

MaterialModel MaterialModel::perfect_conductor() { return MaterialModel{}; }

MaterialModel MaterialModel::drude(double plasma_frequency)
{
    if (!(plasma_frequency > 0.0) || !std::isfinite(plasma_frequency))
        throw DomainError("Drude material: plasma frequency must be positive");
    MaterialModel m;
    m.kind_ = Kind::Drude;
    m.plasma_frequency_ = plasma_frequency;
    return m;
}

MaterialModel MaterialModel::tabulated(std::vector<PermittivityRow> rows)
{
    if (rows.size() < 2)
        throw DomainError("tabulated material: at least 2 rows required");
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        if (!std::isfinite(rows[i].wavelength_nm) || !std::isfinite(rows[i].epsilon.real()) ||
            !std::isfinite(rows[i].epsilon.imag()))
            throw DomainError("tabulated material: non-finite value in row " + std::to_string(i + 1));
        if (i > 0 && !(rows[i].wavelength_nm > rows[i - 1].wavelength_nm))
            throw DomainError("tabulated material: wavelengths not strictly increasing at row " +
                              std::to_string(i + 1));
    }
    MaterialModel m;
    m.kind_ = Kind::Tabulated;
    m.table_ = std::move(rows);
    return m;
}

complex MaterialModel::permittivity(double wavelength_nm) const
{
    switch (kind_)
    {
    case Kind::PerfectConductor:
        return {-std::numeric_limits<double>::infinity(), 0.0};
    case Kind::Drude:
        return drude_permittivity(units::omega_from_wavelength(wavelength_nm), plasma_frequency_);
    case Kind::Tabulated:
        return tabulated_permittivity(*this, wavelength_nm);
    }
    return {};
}

complex tabulated_permittivity(const MaterialModel &model, double wavelength_nm)
{
    if (model.kind() != MaterialModel::Kind::Tabulated)
        throw DomainError("tabulated_permittivity: material is not tabulated");
    const auto &rows = model.table();
    const double lo = rows.front().wavelength_nm;
    const double hi = rows.back().wavelength_nm;
    if (!(wavelength_nm >= lo && wavelength_nm <= hi))
    {
        std::ostringstream msg;
        msg << "tabulated_permittivity: wavelength " << wavelength_nm << " nm outside table range [" << lo << ", "
            << hi << "] nm";
        throw RangeError(msg.str());
    }
    auto upper = std::lower_bound(rows.begin(), rows.end(), wavelength_nm,
                                  [](const PermittivityRow &row, double w) { return row.wavelength_nm < w; });
    if (upper->wavelength_nm == wavelength_nm)
        return upper->epsilon;
    const auto lower = upper - 1;
    const double t = (wavelength_nm - lower->wavelength_nm) / (upper->wavelength_nm - lower->wavelength_nm);
    return {lower->epsilon.real() + t * (upper->epsilon.real() - lower->epsilon.real()),
            lower->epsilon.imag() + t * (upper->epsilon.imag() - lower->epsilon.imag())};
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

bool parse_number(const std::string &field, double &value)
{
    const std::string t = trim(field);
    if (t.empty())
        return false;
    const char *begin = t.data();
    const char *end = t.data() + t.size();
    if (*begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc{} && ptr == end;
}
} // namespace

MaterialModel parse_material_table(std::istream &in)
{
    std::vector<PermittivityRow> rows;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line))
    {
        ++line_number;
        const std::string content = trim(line);
        if (content.empty() || content.front() == '#')
            continue;
        double fields[3];
        std::size_t count = 0;
        std::size_t start = 0;
        bool ok = true;
        while (ok)
        {
            const auto comma = content.find(',', start);
            const std::string field = content.substr(start, comma == std::string::npos ? comma : comma - start);
            if (count == 3 || !parse_number(field, fields[count]))
                ok = false;
            else
                ++count;
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (!ok || count != 3)
            throw DomainError("material table line " + std::to_string(line_number) +
                              ": expected 'wavelength_nm, eps_real, eps_imag'");
        if (!rows.empty() && !(fields[0] > rows.back().wavelength_nm))
            throw DomainError("material table line " + std::to_string(line_number) +
                              ": wavelengths must be strictly increasing");
        rows.push_back({fields[0], complex(fields[1], fields[2])});
    }
    return MaterialModel::tabulated(std::move(rows));
}

MaterialModel load_material_table(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open material table '" + path.string() + "'");
    return parse_material_table(in);
}

complex wall_contrast(complex epsilon)
{
    if (std::isinf(epsilon.real()) || std::isinf(epsilon.imag()))
        return {1.0, 0.0};
    return (epsilon - 1.0) / (epsilon + 1.0);
}

} // namespace zmw
