#pragma once

// Gaussian band-limited white noise (GBLWN) synthesis and Johnson scaling.
//
// Pipeline: ensemble-average independent standard-normal series, restore unit
// variance, double the sampling rate by zero-padding the spectrum above the
// original Nyquist bin, inverse transform, then scale to the Johnson level
// sqrt(4 k T R B).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kljn::noise {

/// Boltzmann constant as used by the Johnson formula here, J/K.
inline constexpr double kBoltzmann = 1.38e-23;

struct NoiseConfig {
    std::size_t n_samples = std::size_t{1} << 20;
    std::size_t ensemble_count = 10;
    double bandwidth_hz = 500.0;
    std::uint64_t seed = 0;
};

/// Throws Error(InvalidConfig) when n_samples is not a power of two >= 8,
/// ensemble_count is zero, or bandwidth_hz is not positive.
void validate(const NoiseConfig& config);

struct GaussianSeries {
    std::vector<double> samples;
    double sample_period_s = 0.0;
    double bandwidth_hz = 0.0;

    /// tau = 1 / (2 B), the Nyquist step of the band. Raw series are sampled at
    /// exactly this step; antialiased series at tau / 2.
    [[nodiscard]] double nyquist_step_s() const noexcept { return 1.0 / (2.0 * bandwidth_hz); }

    /// Samples per Nyquist step (1 for raw series, 2 after antialias()).
    [[nodiscard]] std::size_t oversampling() const noexcept;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
};

struct ScaledNoise {
    GaussianSeries series;
    double resistance_ohm = 0.0;
    double temperature_k = 0.0;
    double target_rms_v = 0.0;
};

/// Elementwise mean of `ensemble_count` independent N(0,1) series times
/// sqrt(ensemble_count). Member m draws from substream derive(seed, Noise, {m}).
GaussianSeries generate_raw_gaussian(const NoiseConfig& config);

/// Zero-pads the spectrum to twice the length (all bins above the original
/// Nyquist frequency are zero, the Nyquist bin is split between its two
/// conjugate positions), inverse transforms, keeps the real part and
/// renormalizes to unit variance. Output has 2N samples at half the sample
/// period; bandwidth_hz is unchanged.
GaussianSeries antialias(const GaussianSeries& series);

/// Every oversampling()-th sample, giving a series at the Nyquist step.
GaussianSeries at_nyquist_step(const GaussianSeries& series);

/// rms = sqrt(4 k T R B)
double johnson_rms(double resistance_ohm, double temperature_k, double bandwidth_hz);

/// Divides by the empirical RMS and multiplies by johnson_rms(). Throws
/// NonPositiveParameter / NonPositiveResistance on bad inputs and
/// DegenerateSeries when the series RMS is zero.
ScaledNoise scale_to_johnson(const GaussianSeries& series, double resistance_ohm,
                             double temperature_k);

double mean(std::span<const double> values);
double mean_square(std::span<const double> values);
double empirical_rms(std::span<const double> values);
/// Population variance (divides by N).
double variance(std::span<const double> values);

struct NormalityReport {
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    /// max |Phi(z_(i)) - empirical CDF| over the standardized order statistics.
    double max_probability_plot_deviation = 0.0;
    std::size_t n = 0;
};

/// Requires at least 2^10 samples (InvalidLength). Zero-variance input is
/// reported as DegenerateSeries.
NormalityReport normality_report(std::span<const double> samples);

/// Asymptotic Kolmogorov critical value sqrt(-ln(alpha/2) / 2) / sqrt(n).
double kolmogorov_critical(std::size_t n, double alpha);

struct PsdReport {
    /// max / min of the segment-averaged periodogram over bins 1 <= k, f_k < B.
    double in_band_flatness = 0.0;
    /// Fraction of full-record periodogram power at frequencies above B.
    double out_of_band_power = 0.0;
    std::size_t segments = 0;
    std::size_t in_band_bins = 0;
    /// Ratio of Gamma(segments) quantiles at alpha/(2 bins) and 1 - alpha/(2 bins),
    /// alpha = 1e-3: the largest flatness expected from white noise.
    double white_flatness_bound = 0.0;
    /// One-sided averaged periodogram, V^2/Hz (or 1/Hz for unitless series).
    std::vector<double> frequency_hz;
    std::vector<double> power;

    [[nodiscard]] bool is_white() const noexcept { return in_band_flatness < white_flatness_bound; }
};

/// Bartlett estimate with rectangular, non-overlapping segments of
/// `segment_length` samples. Series and segment lengths must be powers of two,
/// the series at least 2^10 samples and at least one segment long.
PsdReport psd_report(const GaussianSeries& series, std::size_t segment_length);

} // namespace kljn::noise
