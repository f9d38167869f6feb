#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "masp/errors.hpp"
#include "masp/grid.hpp"
#include "masp/parallel.hpp"
#include "masp/spectrum.hpp"

namespace masp {

struct CqtParams {
    LogGrid grid = LogGrid::standard();
    double hop_seconds = 0.05;
    double filter_scale = 0.5; // scales window length per bin; smaller -> wider bandwidth
    double sample_rate = 44100.0;

    double q_factor() const {
        return 1.0 / (std::exp2(1.0 / grid.bins_per_octave()) - 1.0);
    }

    /// Analysis window length for a bin, ceil(filter_scale * Q * sr / f).
    std::size_t window_length(std::size_t bin) const {
        double f = grid.freq_at(bin);
        return static_cast<std::size_t>(std::ceil(filter_scale * q_factor() * sample_rate / f));
    }

    void validate() const {
        if (hop_seconds <= 0.0) throw std::invalid_argument("CqtParams: hop_seconds must be > 0");
        if (filter_scale <= 0.0) throw std::invalid_argument("CqtParams: filter_scale must be > 0");
        if (sample_rate <= 0.0) throw std::invalid_argument("CqtParams: sample_rate must be > 0");
        if (grid.max_freq() >= sample_rate / 2.0)
            throw std::invalid_argument("CqtParams: grid max frequency must stay below Nyquist");
    }
};

struct LogSpectrogram {
    std::vector<LogSpectrum> frames;
    std::vector<double> frame_times;
    CqtParams params;
};

namespace detail {

/// |<windowed exponential at f, segment>|^2 with the supplied window
/// centered on `center`, normalized by the window sum so a unit-amp sine
/// at the bin frequency lands near 1/4. Out-of-range samples are zero.
/// The exponential advances by complex rotation, not per-sample trig.
inline double cqt_bin_power(const std::vector<double>& x, double sample_rate, double freq,
                            const std::vector<double>& window, double window_sum, long center) {
    const long n = static_cast<long>(x.size());
    const std::size_t len = window.size();
    const long start = center - static_cast<long>(len) / 2;
    const double phase_step = -2.0 * M_PI * freq / sample_rate;
    const std::complex<double> rot(std::cos(phase_step), std::sin(phase_step));
    std::complex<double> phase(std::cos(phase_step * static_cast<double>(start)),
                               std::sin(phase_step * static_cast<double>(start)));
    std::complex<double> acc(0.0, 0.0);
    long lo = std::max(0L, -start), hi = std::min<long>(static_cast<long>(len), n - start);
    if (lo > 0) {
        double ang = phase_step * static_cast<double>(start + lo);
        phase = {std::cos(ang), std::sin(ang)};
    }
    for (long j = lo; j < hi; ++j) {
        acc += (x[static_cast<std::size_t>(start + j)] * window[static_cast<std::size_t>(j)]) * phase;
        phase *= rot;
    }
    if (window_sum <= 0.0) return 0.0;
    double mag = std::abs(acc) / window_sum;
    return mag * mag;
}

inline std::vector<double> hann_window(std::size_t len) {
    std::vector<double> w(len);
    for (std::size_t j = 0; j < len; ++j)
        w[j] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(j) / static_cast<double>(len)));
    return w;
}

} // namespace detail

/// Constant-Q power spectrogram: frames every hop_seconds, each bin an
/// independent windowed inner product at its center frequency. Windows
/// exceeding the signal bounds are zero-padded.
inline LogSpectrogram cqt_power_spectrogram(const std::vector<double>& pcm,
                                            const CqtParams& params) {
    params.validate();
    if (pcm.empty()) throw std::invalid_argument("cqt_power_spectrogram: empty signal");
    for (double s : pcm)
        if (!std::isfinite(s)) throw std::invalid_argument("cqt_power_spectrogram: non-finite sample");

    const double duration = static_cast<double>(pcm.size()) / params.sample_rate;
    const std::size_t n_frames =
        static_cast<std::size_t>(std::floor(duration / params.hop_seconds)) + 1;
    const std::size_t n_bins = params.grid.size();

    // per-bin windows are frame-independent; build them once
    std::vector<std::vector<double>> windows(n_bins);
    std::vector<double> window_sums(n_bins);
    std::vector<double> freqs(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        windows[b] = detail::hann_window(params.window_length(b));
        window_sums[b] = std::accumulate(windows[b].begin(), windows[b].end(), 0.0);
        freqs[b] = params.grid.freq_at(b);
    }

    LogSpectrogram out;
    out.params = params;
    out.frames.assign(n_frames, LogSpectrum(params.grid));
    out.frame_times.resize(n_frames);
    for (std::size_t t = 0; t < n_frames; ++t)
        out.frame_times[t] = static_cast<double>(t) * params.hop_seconds;

    parallel_for(n_frames, [&](std::size_t t) {
        long center = std::lround(out.frame_times[t] * params.sample_rate);
        for (std::size_t b = 0; b < n_bins; ++b)
            out.frames[t].density[b] = detail::cqt_bin_power(
                pcm, params.sample_rate, freqs[b], windows[b], window_sums[b], center);
    });
    return out;
}

/// Time-varying partial lists, one entry per frame.
struct PartialTrack {
    std::vector<double> times;
    std::vector<std::vector<Partial>> frames;
};

/// Deterministic synthetic spectrogram: each frame is the Gaussian-bump
/// spectrum of that frame's partials. Bypasses PCM and the CQT entirely.
inline LogSpectrogram spectrogram_of_partials(const PartialTrack& track,
                                              double sigma_semitones,
                                              const CqtParams& params) {
    if (track.frames.empty()) throw std::invalid_argument("spectrogram_of_partials: empty track");
    if (track.frames.size() != track.times.size())
        throw std::invalid_argument("spectrogram_of_partials: times/frames length mismatch");
    LogSpectrogram out;
    out.params = params;
    out.frame_times = track.times;
    out.frames.reserve(track.frames.size());
    for (const auto& partials : track.frames)
        out.frames.push_back(gaussian_partials(partials, sigma_semitones, params.grid));
    return out;
}

} // namespace masp
