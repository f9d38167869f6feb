#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace masp {

/// Log2-frequency grid: bin i sits at m_i = i / bins_per_octave octaves
/// above the reference frequency omega0, so one unit of m is one octave
/// and 1/12 octave is one semitone.
class LogGrid {
public:
    LogGrid(double omega0, int bins_per_octave, int n_octaves)
        : omega0_(omega0), bpo_(bins_per_octave), n_octaves_(n_octaves) {
        if (omega0 <= 0.0) throw std::invalid_argument("LogGrid: omega0 must be > 0");
        if (bins_per_octave < 1) throw std::invalid_argument("LogGrid: bins_per_octave must be >= 1");
        if (n_octaves < 1) throw std::invalid_argument("LogGrid: n_octaves must be >= 1");
    }

    // C1 reference, quarter-semitone bins, ~32 Hz .. 8.4 kHz
    static LogGrid standard() { return LogGrid(32.703, 48, 8); }

    double omega0() const { return omega0_; }
    int bins_per_octave() const { return bpo_; }
    int n_octaves() const { return n_octaves_; }
    std::size_t size() const { return static_cast<std::size_t>(bpo_) * n_octaves_; }

    double mel_at(std::size_t bin) const { return static_cast<double>(bin) / bpo_; }
    double freq_at(std::size_t bin) const { return omega0_ * std::exp2(mel_at(bin)); }

    double max_freq() const { return freq_at(size() - 1); }

    /// Nearest bin to a frequency (may fall outside [0, size) for
    /// out-of-range frequencies; callers clamp or reject as appropriate).
    long bin_of_freq(double freq) const {
        return std::lround(std::log2(freq / omega0_) * bpo_);
    }

    std::vector<double> center_freqs() const {
        std::vector<double> f(size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = freq_at(i);
        return f;
    }

    bool operator==(const LogGrid& o) const {
        return omega0_ == o.omega0_ && bpo_ == o.bpo_ && n_octaves_ == o.n_octaves_;
    }
    bool operator!=(const LogGrid& o) const { return !(*this == o); }

private:
    double omega0_;
    int bpo_;
    int n_octaves_;
};

/// m = log2(omega / omega0), in octaves above the grid reference.
inline double mel_of_freq(double omega, const LogGrid& grid) {
    if (omega <= 0.0) throw std::invalid_argument("mel_of_freq: omega must be > 0");
    return std::log2(omega / grid.omega0());
}

inline double freq_of_mel(double m, const LogGrid& grid) {
    return grid.omega0() * std::exp2(m);
}

/// Uniform linear-frequency grid f_i = i * df, i = 0 .. size-1.
/// Used by the consonance pipeline, where subharmonic downsampling is an
/// index stride and needs the origin at 0 Hz.
struct LinearGrid {
    double df = 0.05;
    std::size_t size = 441000; // up to 22.05 kHz at the default spacing

    LinearGrid() = default;
    LinearGrid(double df_, double fmax) : df(df_) {
        if (df_ <= 0.0 || fmax <= 0.0) throw std::invalid_argument("LinearGrid: df and fmax must be > 0");
        size = static_cast<std::size_t>(fmax / df_);
        if (size < 2) throw std::invalid_argument("LinearGrid: fewer than two bins");
    }

    double freq_at(std::size_t i) const { return static_cast<double>(i) * df; }
    double fmax() const { return freq_at(size - 1); }
};

} // namespace masp
