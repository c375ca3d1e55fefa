#include "kljn/csv.hpp"

#include "kljn/error.hpp"

#include <array>
#include <charconv>
#include <fstream>

namespace kljn::csv {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out)
        throw Error(ErrorKind::Io, "write failed for " + path.string());
}

} // namespace

std::string format_double(double value) {
    std::array<char, 32> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{})
        return "nan";
    return {buffer.data(), end};
}

void write_time_columns(const std::filesystem::path& path, double sample_period_s,
                        const std::vector<std::string>& names,
                        const std::vector<std::span<const double>>& columns) {
    if (names.size() != columns.size())
        throw Error(ErrorKind::InvalidConfig, "column names and data disagree");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows)
            throw Error(ErrorKind::LengthMismatch, "CSV columns differ in length");

    auto out = open_for_write(path);
    out << "t_s";
    for (const auto& name : names)
        out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        out << format_double(static_cast<double>(i) * sample_period_s);
        for (const auto& c : columns)
            out << ',' << format_double(c[i]);
        out << '\n';
    }
    finish(out, path);
}

void write_series(const std::filesystem::path& path, const noise::GaussianSeries& series) {
    write_time_columns(path, series.sample_period_s, {"value"}, {series.samples});
}

void write_psd(const std::filesystem::path& path, const noise::PsdReport& report) {
    auto out = open_for_write(path);
    out << "freq_hz,power\n";
    for (std::size_t k = 0; k < report.power.size(); ++k)
        out << format_double(report.frequency_hz[k]) << ',' << format_double(report.power[k])
            << '\n';
    finish(out, path);
}

void write_wire(const std::filesystem::path& path, const circuit::WireRealization& wire) {
    write_time_columns(path, wire.sample_period_s, {"u_w_v", "i_w_a"}, {wire.u_w, wire.i_w});
}

} // namespace kljn::csv
