#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace seam {

// Mother wavelet. All three families are real-valued:
//   Gaussian(order n): n-th derivative of exp(-t^2/2), peak-normalized
//   Morlet(fc):        exp(-t^2/2) * cos(2*pi*fc*t)
//   Shannon(fb, fc):   sqrt(fb) * sinc(fb*t) * cos(2*pi*fc*t)
struct WaveletSpec {
    enum class Family { Gaussian, Morlet, Shannon };

    Family family = Family::Morlet;
    int gaussian_order = 1;
    double center_freq_cycles = 0.8125;  // Morlet / Shannon carrier
    double bandwidth = 0.1;              // Shannon only

    static WaveletSpec gaussian(int order = 1);
    static WaveletSpec morlet(double center_freq_cycles = 0.8125);
    static WaveletSpec shannon(double bandwidth = 0.1, double center_freq_cycles = 3.0);

    void validate() const;
    double evaluate(double t) const;

    // Center frequency in cycles per unit. For the Gaussian family this is
    // the numerically located peak of the analytic Fourier magnitude
    // |w|^n exp(-w^2/2); for Morlet and Shannon it is the carrier parameter.
    double center_frequency_cycles() const;

    // Radius T such that |psi(t)| < 1e-8 * peak for |t| >= T. The Shannon
    // sinc envelope decays slowly, so callers must clamp the resulting
    // kernel to the signal length.
    double support_radius() const;

    std::string describe() const;
};

struct Scalogram {
    std::vector<double> magnitudes;  // row-major, scales.size() x columns
    std::vector<double> scales;
    std::size_t columns = 0;
    WaveletSpec wavelet;
    int sample_rate_hz = 0;

    double at(std::size_t scale_index, std::size_t column) const {
        return magnitudes[scale_index * columns + column];
    }
};

// |sum_n x[n] * psi((n - t)/s) / sqrt(s)| via direct convolution with the
// wavelet truncated at support_radius() (clamped to the signal length) and
// zero extension at the boundaries. Rows may be computed concurrently.
Scalogram cwt(std::span<const double> signal, const WaveletSpec& wavelet,
              std::span<const double> scales, int sample_rate_hz, unsigned threads = 0);

double scale_to_frequency(const WaveletSpec& wavelet, double scale, int sample_rate_hz);
double frequency_to_scale(const WaveletSpec& wavelet, double frequency_hz, int sample_rate_hz);

enum class ScalogramFormat { Csv, Pgm };

ScalogramFormat scalogram_format_from_string(const std::string& name);

// csv: one row of magnitudes per scale (plus leading '#' metadata lines);
// pgm: binary 8-bit P5, min-max normalized, scale increasing top to bottom.
void export_scalogram(const Scalogram& sc, const std::filesystem::path& path,
                      ScalogramFormat format);

}  // namespace seam
