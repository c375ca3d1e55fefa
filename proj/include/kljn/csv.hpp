#pragma once

// Plot-ready CSV exports. Doubles are written in shortest round-trip form.

#include "kljn/circuit.hpp"
#include "kljn/noise.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace kljn::csv {

std::string format_double(double value);

/// First column is t_s = i * sample_period_s; `columns` must have equal lengths.
void write_time_columns(const std::filesystem::path& path, double sample_period_s,
                        const std::vector<std::string>& names,
                        const std::vector<std::span<const double>>& columns);

/// t_s,value
void write_series(const std::filesystem::path& path, const noise::GaussianSeries& series);
/// freq_hz,power
void write_psd(const std::filesystem::path& path, const noise::PsdReport& report);
/// t_s,u_w_v,i_w_a
void write_wire(const std::filesystem::path& path, const circuit::WireRealization& wire);

} // namespace kljn::csv
