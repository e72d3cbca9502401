#include "seamsentinel/cwt.hpp"

#include <algorithm>
#include <cmath>

#include "seamsentinel/error.hpp"
#include "seamsentinel/parallel.hpp"
#include "seamsentinel/textio.hpp"

namespace seam {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSupportThreshold = 1e-8;  // relative to the wavelet peak

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

// Coefficients of P_n with d^n/dt^n exp(-t^2/2) = P_n(t) exp(-t^2/2),
// via P_{n+1} = P_n' - t * P_n.
std::vector<double> gaussian_poly(int order) {
    std::vector<double> p = {1.0};
    for (int k = 0; k < order; ++k) {
        std::vector<double> next(p.size() + 1, 0.0);
        for (std::size_t i = 1; i < p.size(); ++i)
            next[i - 1] += p[i] * static_cast<double>(i);
        for (std::size_t i = 0; i < p.size(); ++i) next[i + 1] -= p[i];
        p = std::move(next);
    }
    return p;
}

double eval_poly(const std::vector<double>& coeffs, double t) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
    return acc;
}

struct WaveletEval {
    explicit WaveletEval(const WaveletSpec& spec) : spec_(spec) {
        if (spec.family == WaveletSpec::Family::Gaussian)
            poly_ = gaussian_poly(spec.gaussian_order);
    }

    double operator()(double t) const {
        switch (spec_.family) {
            case WaveletSpec::Family::Gaussian:
                return eval_poly(poly_, t) * std::exp(-0.5 * t * t);
            case WaveletSpec::Family::Morlet:
                return std::exp(-0.5 * t * t) *
                       std::cos(2.0 * kPi * spec_.center_freq_cycles * t);
            case WaveletSpec::Family::Shannon:
                return std::sqrt(spec_.bandwidth) * sinc(spec_.bandwidth * t) *
                       std::cos(2.0 * kPi * spec_.center_freq_cycles * t);
        }
        fail(ErrorKind::Validation, "invalid wavelet family");
    }

    const WaveletSpec& spec_;
    std::vector<double> poly_;
};

double gaussian_peak_abs(const WaveletEval& eval, int order) {
    // coarse grid + golden-section refinement around the best cell
    const double hi = std::sqrt(static_cast<double>(order)) + 4.0;
    double best_t = 0.0;
    double best = 0.0;
    const int grid = 2048;
    for (int i = 0; i <= grid; ++i) {
        const double t = hi * i / grid;
        const double v = std::fabs(eval(t));
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double a = std::max(0.0, best_t - hi / grid);
    double b = std::min(hi, best_t + hi / grid);
    for (int it = 0; it < 200; ++it) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (std::fabs(eval(m1)) < std::fabs(eval(m2)))
            a = m1;
        else
            b = m2;
    }
    return std::fabs(eval(0.5 * (a + b)));
}

}  // namespace

WaveletSpec WaveletSpec::gaussian(int order) {
    WaveletSpec spec;
    spec.family = Family::Gaussian;
    spec.gaussian_order = order;
    spec.validate();
    return spec;
}

WaveletSpec WaveletSpec::morlet(double center_freq_cycles) {
    WaveletSpec spec;
    spec.family = Family::Morlet;
    spec.center_freq_cycles = center_freq_cycles;
    spec.validate();
    return spec;
}

WaveletSpec WaveletSpec::shannon(double bandwidth, double center_freq_cycles) {
    WaveletSpec spec;
    spec.family = Family::Shannon;
    spec.bandwidth = bandwidth;
    spec.center_freq_cycles = center_freq_cycles;
    spec.validate();
    return spec;
}

void WaveletSpec::validate() const {
    switch (family) {
        case Family::Gaussian:
            if (gaussian_order < 1 || gaussian_order > 32)
                fail(ErrorKind::Validation, "gaussian order must be in 1..32");
            return;
        case Family::Morlet:
            if (!(center_freq_cycles > 0))
                fail(ErrorKind::Validation, "morlet center frequency must be positive");
            return;
        case Family::Shannon:
            if (!(bandwidth > 0))
                fail(ErrorKind::Validation, "shannon bandwidth must be positive");
            if (!(center_freq_cycles > 0))
                fail(ErrorKind::Validation, "shannon center frequency must be positive");
            return;
    }
    fail(ErrorKind::Validation, "invalid wavelet family");
}

double WaveletSpec::evaluate(double t) const {
    validate();
    return WaveletEval(*this)(t);
}

double WaveletSpec::center_frequency_cycles() const {
    validate();
    switch (family) {
        case Family::Morlet:
        case Family::Shannon:
            return center_freq_cycles;
        case Family::Gaussian: {
            // peak of |w|^n exp(-w^2/2) located by ternary search
            const double n = static_cast<double>(gaussian_order);
            double a = 1e-9;
            double b = std::sqrt(n) * 4.0 + 8.0;
            const auto log_mag = [n](double w) { return n * std::log(w) - 0.5 * w * w; };
            for (int it = 0; it < 300; ++it) {
                const double m1 = a + (b - a) / 3.0;
                const double m2 = b - (b - a) / 3.0;
                if (log_mag(m1) < log_mag(m2))
                    a = m1;
                else
                    b = m2;
            }
            return 0.5 * (a + b) / (2.0 * kPi);
        }
    }
    fail(ErrorKind::Validation, "invalid wavelet family");
}

double WaveletSpec::support_radius() const {
    validate();
    switch (family) {
        case Family::Morlet:
            return std::sqrt(-2.0 * std::log(kSupportThreshold));
        case Family::Shannon:
            // envelope sqrt(fb)/(pi*fb*t) relative to the peak sqrt(fb)
            return 1.0 / (kPi * bandwidth * kSupportThreshold);
        case Family::Gaussian: {
            const WaveletEval eval(*this);
            const double peak = gaussian_peak_abs(eval, gaussian_order);
            const double threshold = kSupportThreshold * peak;
            // |P(t)| <= sum|c_i| * t^n for t >= 1; bisect the monotone bound
            double coeff_sum = 0.0;
            for (const double c : eval.poly_) coeff_sum += std::fabs(c);
            const double n = static_cast<double>(gaussian_order);
            const auto bound = [&](double t) {
                return std::log(coeff_sum) + n * std::log(t) - 0.5 * t * t -
                       std::log(threshold);
            };
            double a = std::max(1.0, std::sqrt(n));
            double b = 100.0;
            if (bound(a) <= 0) return a;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (bound(m) > 0)
                    a = m;
                else
                    b = m;
            }
            return b;
        }
    }
    fail(ErrorKind::Validation, "invalid wavelet family");
}

std::string WaveletSpec::describe() const {
    switch (family) {
        case Family::Gaussian:
            return "gaussian(order=" + format_int(gaussian_order) + ")";
        case Family::Morlet:
            return "morlet(fc=" + format_double(center_freq_cycles) + ")";
        case Family::Shannon:
            return "shannon(fb=" + format_double(bandwidth) +
                   ",fc=" + format_double(center_freq_cycles) + ")";
    }
    return "?";
}

Scalogram cwt(std::span<const double> signal, const WaveletSpec& wavelet,
              std::span<const double> scales, int sample_rate_hz, unsigned threads) {
    wavelet.validate();
    if (signal.size() < 2) fail(ErrorKind::Validation, "signal must have at least 2 samples");
    if (scales.empty()) fail(ErrorKind::Validation, "empty scale list");
    if (!(scales[0] > 0)) fail(ErrorKind::Validation, "scales must be positive");
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (!(scales[i] > scales[i - 1]))
            fail(ErrorKind::Validation, "scales must be strictly increasing");
    if (sample_rate_hz <= 0) fail(ErrorKind::Validation, "sample_rate_hz must be positive");

    const std::size_t n = signal.size();
    const std::size_t n_scales = scales.size();

    Scalogram sc;
    sc.scales.assign(scales.begin(), scales.end());
    sc.columns = n;
    sc.wavelet = wavelet;
    sc.sample_rate_hz = sample_rate_hz;
    sc.magnitudes.assign(n_scales * n, 0.0);

    const WaveletEval eval(wavelet);
    const double support = wavelet.support_radius();

    parallel_for(n_scales, threads, [&](std::size_t si) {
        const double s = sc.scales[si];
        const double radius_d =
            std::min(std::ceil(support * s), static_cast<double>(n - 1));
        const std::size_t radius = static_cast<std::size_t>(radius_d);
        const double inv_sqrt_s = 1.0 / std::sqrt(s);

        std::vector<double> kernel(2 * radius + 1);
        for (std::size_t j = 0; j < kernel.size(); ++j) {
            const double offset = static_cast<double>(j) - static_cast<double>(radius);
            kernel[j] = eval(offset / s) * inv_sqrt_s;
        }

        double* row = sc.magnitudes.data() + si * n;
        const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(radius);
        for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(-r, -t);
            const std::ptrdiff_t hi =
                std::min<std::ptrdiff_t>(r, static_cast<std::ptrdiff_t>(n) - 1 - t);
            double acc = 0.0;
            for (std::ptrdiff_t j = lo; j <= hi; ++j)
                acc += signal[static_cast<std::size_t>(t + j)] *
                       kernel[static_cast<std::size_t>(j + r)];
            row[t] = std::fabs(acc);
        }
    });
    return sc;
}

double scale_to_frequency(const WaveletSpec& wavelet, double scale, int sample_rate_hz) {
    if (!(scale > 0)) fail(ErrorKind::Validation, "scale must be positive");
    if (sample_rate_hz <= 0) fail(ErrorKind::Validation, "sample_rate_hz must be positive");
    return wavelet.center_frequency_cycles() * sample_rate_hz / scale;
}

double frequency_to_scale(const WaveletSpec& wavelet, double frequency_hz, int sample_rate_hz) {
    if (!(frequency_hz > 0)) fail(ErrorKind::Validation, "frequency must be positive");
    if (sample_rate_hz <= 0) fail(ErrorKind::Validation, "sample_rate_hz must be positive");
    return wavelet.center_frequency_cycles() * sample_rate_hz / frequency_hz;
}

ScalogramFormat scalogram_format_from_string(const std::string& name) {
    if (name == "csv") return ScalogramFormat::Csv;
    if (name == "pgm") return ScalogramFormat::Pgm;
    fail(ErrorKind::Config, "unknown scalogram format '" + name + "' (expected csv or pgm)");
}

void export_scalogram(const Scalogram& sc, const std::filesystem::path& path,
                      ScalogramFormat format) {
    if (sc.scales.empty() || sc.columns == 0)
        fail(ErrorKind::Validation, "empty scalogram");

    if (format == ScalogramFormat::Csv) {
        std::string out;
        out.reserve(sc.magnitudes.size() * 12 + 256);
        out += "# wavelet=" + sc.wavelet.describe() + "\n";
        out += "# sample_rate_hz=" + format_int(sc.sample_rate_hz) + "\n";
        out += "# scales=";
        for (std::size_t i = 0; i < sc.scales.size(); ++i) {
            if (i) out += ',';
            out += format_double(sc.scales[i]);
        }
        out += '\n';
        for (std::size_t i = 0; i < sc.scales.size(); ++i) {
            for (std::size_t t = 0; t < sc.columns; ++t) {
                if (t) out += ',';
                out += format_double(sc.at(i, t));
            }
            out += '\n';
        }
        write_text_file(path, out);
        return;
    }

    // P5: scale index grows downward, so the first (smallest) scale is the
    // top row
    double min_v = sc.magnitudes[0];
    double max_v = sc.magnitudes[0];
    for (const double v : sc.magnitudes) {
        min_v = std::min(min_v, v);
        max_v = std::max(max_v, v);
    }
    const double range = max_v - min_v;
    std::string out = "P5\n" + format_int(static_cast<long long>(sc.columns)) + " " +
                      format_int(static_cast<long long>(sc.scales.size())) + "\n255\n";
    out.reserve(out.size() + sc.magnitudes.size());
    for (const double v : sc.magnitudes) {
        const double norm = range > 0 ? (v - min_v) / range : 0.0;
        out.push_back(static_cast<char>(
            static_cast<unsigned char>(std::lround(norm * 255.0))));
    }
    write_text_file(path, out);
}

}  // namespace seam
