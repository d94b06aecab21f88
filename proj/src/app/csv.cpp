#include "zmw/app/csv.hpp"

#include "zmw/app/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace zmw::app
{
std::string format_exact(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_summary(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

void write_spectrum_csv(std::ostream &out, const Spectrum &spectrum)
{
    out << kSpectrumHeader << '\n';
    for (const auto &p : spectrum.points)
        out << format_exact(p.wavelength_nm) << ',' << format_exact(p.value) << '\n';
}

void write_spectrum_csv(const std::filesystem::path &path, const Spectrum &spectrum)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError(path.string(), 0, "cannot open for writing");
    write_spectrum_csv(out, spectrum);
    if (!out)
        throw ConfigError(path.string(), 0, "write failed");
}

namespace
{
bool parse_field(std::string_view field, double &v)
{
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
        field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    if (!field.empty() && field.front() == '+')
        field.remove_prefix(1);
    if (field.empty())
        return false;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    return ec == std::errc{} && ptr == field.data() + field.size() && std::isfinite(v);
}
} // namespace

Spectrum read_spectrum_csv(std::istream &in, const std::string &source)
{
    Spectrum spectrum;
    std::string line;
    int line_number = 0;
    bool seen_data_line = false;
    while (std::getline(in, line))
    {
        ++line_number;
        std::string_view text(line);
        while (!text.empty() && (text.back() == '\r' || text.back() == ' '))
            text.remove_suffix(1);
        if (text.empty() || text.front() == '#')
            continue;
        const auto comma = text.find(',');
        double w = 0.0;
        double v = 0.0;
        const bool ok = comma != std::string_view::npos && text.find(',', comma + 1) == std::string_view::npos &&
                        parse_field(text.substr(0, comma), w) && parse_field(text.substr(comma + 1), v);
        if (!ok)
        {
            if (!seen_data_line && spectrum.points.empty())
            {
                seen_data_line = true; // header
                continue;
            }
            throw ConfigError(source, line_number, "expected 'wavelength_nm,value'");
        }
        seen_data_line = true;
        if (!spectrum.points.empty() && !(w > spectrum.points.back().wavelength_nm))
            throw ConfigError(source, line_number, "wavelengths must be strictly increasing");
        if (v < 0.0)
            throw ConfigError(source, line_number, "transmission must be non-negative");
        spectrum.points.push_back({w, v});
    }
    if (spectrum.points.empty())
        throw ConfigError(source, 0, "no data rows");
    return spectrum;
}

Spectrum read_spectrum_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string(), 0, "cannot open file");
    return read_spectrum_csv(in, path.string());
}

} // namespace zmw::app
