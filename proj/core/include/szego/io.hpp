#pragma once

#include <string>
#include <vector>

#include "szego/nlft.hpp"

namespace szego {

/// Shortest-round-trip decimal of a binary64, capped at 17 significant
/// digits; the emitted text parses back to the identical bit pattern.
std::string format_number(double x);

/// Schemas:
///   symbol        {"coeffs": [[re,im], ...]}
///   blaschke      {"angle": psi, "zeros": [[re,im], ...]}
///   spectral data {"s": [..], "psi": [blaschke, ...]}
std::string to_json(const HardySymbol& u);
std::string to_json(const BlaschkeProduct& b);
std::string to_json(const SpectralData& sd);

HardySymbol symbol_from_json(const std::string& text);
BlaschkeProduct blaschke_from_json(const std::string& text);
SpectralData spectral_from_json(const std::string& text);

/// RFC-4180 quoting: fields containing commas, quotes or newlines are
/// wrapped in double quotes with inner quotes doubled.
std::string csv_field(const std::string& raw);
std::string csv_row(const std::vector<std::string>& fields);

std::string read_file(const std::string& path);

/// Write to a temporary in the same directory, then rename over the target.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace szego
