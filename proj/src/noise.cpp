#include "kljn/noise.hpp"

#include "kljn/error.hpp"
#include "kljn/fft.hpp"
#include "kljn/rng.hpp"

#include <boost/math/distributions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace kljn::noise {
namespace {

constexpr std::size_t kMinReportSamples = std::size_t{1} << 10;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

void require_positive(double value, ErrorKind kind, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error(kind, std::string(name) + " must be positive and finite");
}

} // namespace

void validate(const NoiseConfig& config) {
    if (config.n_samples < 8 || !fft::is_power_of_two(config.n_samples))
        throw Error(ErrorKind::InvalidConfig,
                    "n_samples must be a power of two >= 8, got " +
                        std::to_string(config.n_samples));
    if (config.ensemble_count < 1)
        throw Error(ErrorKind::InvalidConfig, "ensemble_count must be >= 1");
    if (!(config.bandwidth_hz > 0.0) || !std::isfinite(config.bandwidth_hz))
        throw Error(ErrorKind::InvalidConfig, "bandwidth_hz must be positive");
}

std::size_t GaussianSeries::oversampling() const noexcept {
    if (!(sample_period_s > 0.0) || !(bandwidth_hz > 0.0))
        return 1;
    const auto factor = std::llround(nyquist_step_s() / sample_period_s);
    return factor < 1 ? 1 : static_cast<std::size_t>(factor);
}

GaussianSeries generate_raw_gaussian(const NoiseConfig& config) {
    validate(config);

    GaussianSeries out;
    out.samples.assign(config.n_samples, 0.0);
    out.bandwidth_hz = config.bandwidth_hz;
    out.sample_period_s = 1.0 / (2.0 * config.bandwidth_hz);

    for (std::size_t member = 0; member < config.ensemble_count; ++member) {
        rng::Stream stream(rng::derive(config.seed, rng::Domain::Noise, {member}));
        for (double& value : out.samples)
            value += stream.normal();
    }

    // mean of m unit-variance series has variance 1/m; sum / sqrt(m) restores 1.
    const double scale = 1.0 / std::sqrt(static_cast<double>(config.ensemble_count));
    for (double& value : out.samples)
        value *= scale;
    return out;
}

GaussianSeries antialias(const GaussianSeries& series) {
    const std::size_t n = series.size();
    if (n < 2 || !fft::is_power_of_two(n))
        throw Error(ErrorKind::InvalidLength,
                    "antialias input length " + std::to_string(n) + " is not a power of two >= 2");

    const auto spectrum = fft::forward_real(series.samples);
    const std::size_t half = n / 2;
    std::vector<std::complex<double>> padded(2 * n, {0.0, 0.0});
    for (std::size_t k = 0; k < half; ++k)
        padded[k] = spectrum[k];
    for (std::size_t k = 1; k < half; ++k)
        padded[2 * n - k] = spectrum[n - k];
    padded[half] = 0.5 * spectrum[half];
    padded[2 * n - half] = 0.5 * spectrum[half];
    fft::inverse(padded);

    GaussianSeries out;
    out.bandwidth_hz = series.bandwidth_hz;
    out.sample_period_s = series.sample_period_s / 2.0;
    out.samples.resize(2 * n);
    std::transform(padded.begin(), padded.end(), out.samples.begin(),
                   [](const std::complex<double>& c) { return c.real(); });

    const double var = variance(out.samples);
    if (var > 0.0) {
        const double scale = 1.0 / std::sqrt(var);
        for (double& value : out.samples)
            value *= scale;
    }
    return out;
}

GaussianSeries at_nyquist_step(const GaussianSeries& series) {
    const std::size_t factor = series.oversampling();
    GaussianSeries out;
    out.bandwidth_hz = series.bandwidth_hz;
    out.sample_period_s = series.sample_period_s * static_cast<double>(factor);
    out.samples.reserve(series.size() / factor + 1);
    for (std::size_t i = 0; i < series.size(); i += factor)
        out.samples.push_back(series.samples[i]);
    return out;
}

double johnson_rms(double resistance_ohm, double temperature_k, double bandwidth_hz) {
    require_positive(resistance_ohm, ErrorKind::NonPositiveResistance, "resistance_ohm");
    require_positive(temperature_k, ErrorKind::NonPositiveParameter, "temperature_k");
    require_positive(bandwidth_hz, ErrorKind::NonPositiveParameter, "bandwidth_hz");
    return std::sqrt(4.0 * kBoltzmann * temperature_k * resistance_ohm * bandwidth_hz);
}

ScaledNoise scale_to_johnson(const GaussianSeries& series, double resistance_ohm,
                             double temperature_k) {
    ScaledNoise out;
    out.target_rms_v = johnson_rms(resistance_ohm, temperature_k, series.bandwidth_hz);
    out.resistance_ohm = resistance_ohm;
    out.temperature_k = temperature_k;

    const double rms = series.samples.empty() ? 0.0 : empirical_rms(series.samples);
    if (!(rms > 0.0))
        throw Error(ErrorKind::DegenerateSeries, "series has zero RMS");

    out.series = series;
    const double scale = out.target_rms_v / rms;
    for (double& value : out.series.samples)
        value *= scale;
    return out;
}

double mean(std::span<const double> values) {
    if (values.empty())
        throw Error(ErrorKind::EmptyInput, "mean of empty range");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double mean_square(std::span<const double> values) {
    if (values.empty())
        throw Error(ErrorKind::EmptyInput, "mean square of empty range");
    double sum = 0.0;
    for (double v : values)
        sum += v * v;
    return sum / static_cast<double>(values.size());
}

double empirical_rms(std::span<const double> values) { return std::sqrt(mean_square(values)); }

double variance(std::span<const double> values) {
    const double mu = mean(values);
    double sum = 0.0;
    for (double v : values)
        sum += (v - mu) * (v - mu);
    return sum / static_cast<double>(values.size());
}

NormalityReport normality_report(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < kMinReportSamples)
        throw Error(ErrorKind::InvalidLength, "normality report needs at least 1024 samples");

    const double mu = mean(samples);
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : samples) {
        const double d = v - mu;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double count = static_cast<double>(n);
    m2 /= count;
    m3 /= count;
    m4 /= count;
    if (!(m2 > 0.0))
        throw Error(ErrorKind::DegenerateSeries, "series has zero variance");

    NormalityReport report;
    report.n = n;
    report.skewness = m3 / std::pow(m2, 1.5);
    report.excess_kurtosis = m4 / (m2 * m2) - 3.0;

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double sd = std::sqrt(m2);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = normal_cdf((sorted[i] - mu) / sd);
        const double below = phi - static_cast<double>(i) / count;
        const double above = static_cast<double>(i + 1) / count - phi;
        worst = std::max({worst, below, above});
    }
    report.max_probability_plot_deviation = worst;
    return report;
}

double kolmogorov_critical(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

PsdReport psd_report(const GaussianSeries& series, std::size_t segment_length) {
    const std::size_t total = series.size();
    if (total < kMinReportSamples || !fft::is_power_of_two(total))
        throw Error(ErrorKind::InvalidLength, "PSD series length must be a power of two >= 1024");
    if (segment_length < 4 || !fft::is_power_of_two(segment_length) || segment_length > total)
        throw Error(ErrorKind::InvalidLength,
                    "segment length must be a power of two in [4, series length]");
    if (!(series.sample_period_s > 0.0) || !(series.bandwidth_hz > 0.0))
        throw Error(ErrorKind::InvalidConfig, "series has no sample period or bandwidth");

    const double dt = series.sample_period_s;
    const double band = series.bandwidth_hz;
    constexpr double kBinSlack = 1e-9;

    PsdReport report;
    report.segments = total / segment_length;

    const std::size_t bins = segment_length / 2 + 1;
    std::vector<double> accumulated(bins, 0.0);
    std::vector<std::complex<double>> buffer(segment_length);
    for (std::size_t s = 0; s < report.segments; ++s) {
        const auto first = series.samples.begin() + static_cast<std::ptrdiff_t>(s * segment_length);
        std::copy(first, first + static_cast<std::ptrdiff_t>(segment_length), buffer.begin());
        fft::forward(buffer);
        for (std::size_t k = 0; k < bins; ++k)
            accumulated[k] += std::norm(buffer[k]);
    }

    const double length = static_cast<double>(segment_length);
    report.frequency_hz.resize(bins);
    report.power.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double one_sided = (k == 0 || k == bins - 1) ? 1.0 : 2.0;
        report.frequency_hz[k] = static_cast<double>(k) / (length * dt);
        report.power[k] =
            one_sided * accumulated[k] / static_cast<double>(report.segments) * dt / length;
    }

    const double edge_bin = band * length * dt;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = 1; k < bins && static_cast<double>(k) + kBinSlack < edge_bin; ++k) {
        lo = std::min(lo, report.power[k]);
        hi = std::max(hi, report.power[k]);
        ++report.in_band_bins;
    }
    if (report.in_band_bins == 0)
        throw Error(ErrorKind::InvalidLength, "segment length leaves no in-band bins");
    report.in_band_flatness = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();

    constexpr double kFamilyAlpha = 1e-3;
    const double k_avg = static_cast<double>(report.segments);
    const boost::math::gamma_distribution<double> chi2_scaled(k_avg, 1.0 / k_avg);
    const double tail = kFamilyAlpha / (2.0 * static_cast<double>(report.in_band_bins));
    report.white_flatness_bound = boost::math::quantile(chi2_scaled, 1.0 - tail) /
                                  boost::math::quantile(chi2_scaled, tail);

    // Out-of-band fraction from one full-record transform: the antialiased
    // series is exactly periodic and band-limited over its full length.
    const auto full = fft::forward_real(series.samples);
    const double full_edge = band * static_cast<double>(total) * dt;
    double all = 0.0;
    double above = 0.0;
    for (std::size_t k = 0; k <= total / 2; ++k) {
        const double weight = (k == 0 || k == total / 2) ? 1.0 : 2.0;
        const double p = weight * std::norm(full[k]);
        all += p;
        if (static_cast<double>(k) > full_edge + kBinSlack)
            above += p;
    }
    report.out_of_band_power = all > 0.0 ? above / all : 0.0;
    return report;
}

} // namespace kljn::noise
