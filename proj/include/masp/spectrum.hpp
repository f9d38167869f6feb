#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "masp/errors.hpp"
#include "masp/grid.hpp"

namespace masp {

/// One sinusoidal component. amp is a power weight; PCM rendering takes
/// sqrt(amp) as the waveform amplitude.
struct Partial {
    double freq = 0.0;
    double amp = 1.0;

    Partial() = default;
    Partial(double f, double a) : freq(f), amp(a) {
        if (f <= 0.0) throw std::invalid_argument("Partial: freq must be > 0");
        if (a < 0.0) throw std::invalid_argument("Partial: amp must be >= 0");
    }
};

/// Non-negative power density on an arbitrary strictly increasing
/// frequency list.
struct LinearSpectrum {
    std::vector<double> freqs;
    std::vector<double> density;

    void validate() const {
        if (freqs.size() != density.size())
            throw std::invalid_argument("LinearSpectrum: freqs/density length mismatch");
        for (std::size_t i = 1; i < freqs.size(); ++i)
            if (freqs[i] <= freqs[i - 1])
                throw std::invalid_argument("LinearSpectrum: freqs must be strictly increasing");
        for (double d : density)
            if (d < 0.0 || !std::isfinite(d))
                throw std::invalid_argument("LinearSpectrum: density must be finite and >= 0");
    }
};

/// Non-negative power density on a LogGrid.
struct LogSpectrum {
    LogGrid grid = LogGrid::standard();
    std::vector<double> density;

    LogSpectrum() : density(grid.size(), 0.0) {}
    explicit LogSpectrum(const LogGrid& g) : grid(g), density(g.size(), 0.0) {}
    LogSpectrum(const LogGrid& g, std::vector<double> d) : grid(g), density(std::move(d)) {
        if (density.size() != grid.size())
            throw std::invalid_argument("LogSpectrum: density length must match grid");
    }

    std::size_t size() const { return density.size(); }
    double sum() const { return std::accumulate(density.begin(), density.end(), 0.0); }
};

namespace detail {

inline void normalize_in_place(std::vector<double>& v, const char* what) {
    double s = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(s > 0.0)) throw degenerate_error(std::string(what) + ": degenerate spectrum (all zero)");
    for (double& x : v) x /= s;
}

} // namespace detail

/// Scale so the values sum to 1 and the spectrum can act as a
/// probability distribution.
inline LogSpectrum strict_normalize(const LogSpectrum& s) {
    LogSpectrum out = s;
    detail::normalize_in_place(out.density, "strict_normalize");
    return out;
}

inline LinearSpectrum strict_normalize(const LinearSpectrum& s) {
    LinearSpectrum out = s;
    detail::normalize_in_place(out.density, "strict_normalize");
    return out;
}

/// Arithmetic mean over all grid bins (the <F> of the smoothing weights).
inline double mean_value(const LogSpectrum& s) {
    if (s.density.empty()) throw std::invalid_argument("mean_value: empty spectrum");
    return s.sum() / static_cast<double>(s.size());
}

/// Expectation of m under the strict-normalized density.
inline double expected_mel(const LogSpectrum& s) {
    double total = s.sum();
    if (!(total > 0.0)) throw degenerate_error("expected_mel: degenerate spectrum");
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += s.grid.mel_at(i) * s.density[i];
    return acc / total;
}

/// Expectation of linear frequency under the strict-normalized density.
/// The density lives on the log grid but the random variable is in Hz.
inline double expected_freq(const LogSpectrum& s) {
    double total = s.sum();
    if (!(total > 0.0)) throw degenerate_error("expected_freq: degenerate spectrum");
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += s.grid.freq_at(i) * s.density[i];
    return acc / total;
}

/// Sum of Gaussian bumps, one per partial, on the log grid.
/// sigma is in semitones (1/12 octave); the peak value of an on-center
/// partial equals its power weight. Mass outside the grid is truncated.
/// Partials whose 4-sigma support leaves the grid are still added but a
/// note is appended to *warnings when provided.
inline LogSpectrum gaussian_partials(const std::vector<Partial>& partials,
                                     double sigma_semitones, const LogGrid& grid,
                                     std::vector<std::string>* warnings = nullptr) {
    if (partials.empty()) throw std::invalid_argument("gaussian_partials: no partials");
    if (sigma_semitones <= 0.0) throw std::invalid_argument("gaussian_partials: sigma must be > 0");
    const double sigma_m = sigma_semitones / 12.0;
    LogSpectrum out(grid);
    const double m_lo = 0.0, m_hi = grid.mel_at(grid.size() - 1);
    for (const Partial& p : partials) {
        if (p.freq <= 0.0) throw std::invalid_argument("gaussian_partials: partial freq must be > 0");
        double mj = mel_of_freq(p.freq, grid);
        if (warnings && (mj - 4.0 * sigma_m < m_lo || mj + 4.0 * sigma_m > m_hi)) {
            warnings->push_back("partial at " + std::to_string(p.freq) +
                                " Hz extends outside the grid; mass truncated");
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            double d = grid.mel_at(i) - mj;
            out.density[i] += p.amp * std::exp(-d * d / (2.0 * sigma_m * sigma_m));
        }
    }
    return out;
}

} // namespace masp
