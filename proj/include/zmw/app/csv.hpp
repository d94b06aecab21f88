#pragma once

#include "zmw/transmission.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

namespace zmw::app
{
inline constexpr const char *kSpectrumHeader = "wavelength_nm,transmission";

// %.17g: round-trips every double.
std::string format_exact(double v);
// Scientific notation, 9 significant digits.
std::string format_summary(double v);

void write_spectrum_csv(std::ostream &out, const Spectrum &spectrum);
void write_spectrum_csv(const std::filesystem::path &path, const Spectrum &spectrum);

// Two numeric columns; an optional non-numeric header on the first data line.
// Throws ConfigError naming the first bad line.
Spectrum read_spectrum_csv(std::istream &in, const std::string &source = "<csv>");
Spectrum read_spectrum_csv(const std::filesystem::path &path);

} // namespace zmw::app
