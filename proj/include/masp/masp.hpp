#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "masp/cqt.hpp"
#include "masp/errors.hpp"
#include "masp/grid.hpp"
#include "masp/parallel.hpp"
#include "masp/spectrum.hpp"

namespace masp {

struct MaspParams {
    double b = 0.5;           // smoothing exponent; larger favors low harmonic numbers
    int n = 32;               // number of subharmonic factors
    double voicing_threshold = -1.0; // < 0: resolved to 1e-8 * bin count at use

    double resolved_voicing_threshold(std::size_t bins) const {
        return voicing_threshold >= 0.0 ? voicing_threshold
                                        : 1e-8 * static_cast<double>(bins);
    }

    void validate() const {
        if (b <= 0.0) throw std::invalid_argument("MaspParams: b must be > 0");
        if (n < 1) throw std::invalid_argument("MaspParams: n must be >= 1");
    }
};

/// a = 1/(1 + k^b). Always 0.5 at k = 1, decreasing toward 0 with k.
inline double smoothing_weight(int k, double b) {
    if (k < 1) throw std::invalid_argument("smoothing_weight: k must be >= 1");
    if (b <= 0.0) throw std::invalid_argument("smoothing_weight: b must be > 0");
    return 1.0 / (1.0 + std::pow(static_cast<double>(k), b));
}

/// k-th smoothed subharmonic factor: a*F(m + log2 k) + (1-a)*<F>.
/// The shift is the nearest integer bin count; samples beyond the top of
/// the grid are taken as zero, so shifted-in bins settle at (1-a)*<F>.
inline LogSpectrum subharmonic_factor(const LogSpectrum& F, int k, double b) {
    if (F.density.empty()) throw std::invalid_argument("subharmonic_factor: empty spectrum");
    const double a = smoothing_weight(k, b);
    const double mean = mean_value(F);
    const double floor_term = (1.0 - a) * mean;
    const std::size_t n = F.size();
    const std::size_t shift = static_cast<std::size_t>(
        std::lround(std::log2(static_cast<double>(k)) * F.grid.bins_per_octave()));
    LogSpectrum out(F.grid);
    for (std::size_t i = 0; i < n; ++i) {
        double sample = (i + shift < n) ? F.density[i + shift] : 0.0;
        out.density[i] = a * sample + floor_term;
    }
    return out;
}

/// Bin-wise product of the smoothed subharmonic factors, k = 1..n.
/// Strictly positive everywhere whenever <F> > 0.
inline LogSpectrum masp_spectrum(const LogSpectrum& F, const MaspParams& params) {
    params.validate();
    if (!(F.sum() > 0.0))
        throw degenerate_error("masp_spectrum: unvoiced input; check voicing upstream");
    LogSpectrum out(F.grid);
    std::fill(out.density.begin(), out.density.end(), 1.0);
    for (int k = 1; k <= params.n; ++k) {
        LogSpectrum factor = subharmonic_factor(F, k, params.b);
        for (std::size_t i = 0; i < out.size(); ++i) out.density[i] *= factor.density[i];
    }
    return out;
}

/// S = log(1 + sum X) / sum(product spectrum). Natural log; silence maps
/// to S = 0 so the scaled pitch spectrum vanishes with the signal.
inline double loudness_scale(double x_linear_sum, double product_sum) {
    if (x_linear_sum < 0.0) throw std::invalid_argument("loudness_scale: negative spectral sum");
    if (!(product_sum > 0.0)) throw std::invalid_argument("loudness_scale: product_sum must be > 0");
    return std::log1p(x_linear_sum) / product_sum;
}

struct PitchEstimate {
    double f0 = 0.0;
    double peak_m = 0.0;
    double confidence = 0.0; // peak value / sum of pitch spectrum
};

struct MaspResult {
    LogSpectrum pitch_spectrum;
    double loudness = 0.0; // the S that scaled pitch_spectrum
    std::optional<PitchEstimate> pitch;
};

/// Full per-frame pipeline: product spectrum, loudness scaling, peak pick.
/// Frames whose energy falls below the voicing threshold come back
/// unvoiced with an all-zero pitch spectrum. Argmax ties break toward the
/// highest frequency.
inline MaspResult masp_frame(const LogSpectrum& F, const MaspParams& params) {
    params.validate();
    MaspResult res;
    res.pitch_spectrum = LogSpectrum(F.grid);
    const double energy = F.sum();
    if (!(energy >= params.resolved_voicing_threshold(F.size())) || !(energy > 0.0)) {
        return res; // unvoiced: S = 0, zero spectrum, no pitch
    }
    res.pitch_spectrum = masp_spectrum(F, params);
    res.loudness = loudness_scale(energy, res.pitch_spectrum.sum());
    double total = 0.0;
    for (double& v : res.pitch_spectrum.density) {
        v *= res.loudness;
        total += v;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.pitch_spectrum.size(); ++i)
        if (res.pitch_spectrum.density[i] >= res.pitch_spectrum.density[best]) best = i;
    PitchEstimate p;
    p.peak_m = F.grid.mel_at(best);
    p.f0 = F.grid.freq_at(best);
    p.confidence = total > 0.0 ? res.pitch_spectrum.density[best] / total : 0.0;
    res.pitch = p;
    return res;
}

struct PitchFrame {
    double time = 0.0;
    double f0 = 0.0;
    double confidence = 0.0;
    bool voiced = false;
};

struct PitchTrack {
    std::vector<PitchFrame> frames;
};

/// masp_frame across a spectrogram; frames are independent and run in
/// parallel. The track collates (time, f0, confidence, voiced).
inline std::pair<std::vector<MaspResult>, PitchTrack>
masp_spectrogram(const LogSpectrogram& spec, const MaspParams& params) {
    if (spec.frames.empty()) throw std::invalid_argument("masp_spectrogram: empty spectrogram");
    params.validate();
    std::vector<MaspResult> results(spec.frames.size());
    parallel_for(spec.frames.size(), [&](std::size_t t) {
        results[t] = masp_frame(spec.frames[t], params);
    });
    PitchTrack track;
    track.frames.resize(results.size());
    for (std::size_t t = 0; t < results.size(); ++t) {
        PitchFrame& f = track.frames[t];
        f.time = spec.frame_times[t];
        if (results[t].pitch) {
            f.f0 = results[t].pitch->f0;
            f.confidence = results[t].pitch->confidence;
            f.voiced = true;
        }
    }
    return {std::move(results), std::move(track)};
}

// ---------------------------------------------------------------------
// Linear-grid variant, used by the consonance measure. The k-th factor
// downsamples by index (bin i reads bin i*k) and the product is kept only
// where every factor is in range, i.e. the first size/n bins.
// ---------------------------------------------------------------------

/// Power density on a uniform LinearGrid, value i at frequency i*df.
struct BandSpectrum {
    LinearGrid grid;
    std::vector<double> density;

    BandSpectrum() = default;
    explicit BandSpectrum(const LinearGrid& g) : grid(g), density(g.size, 0.0) {}

    double sum() const {
        double s = 0.0;
        for (double d : density) s += d;
        return s;
    }
};

/// Smoothed harmonic product on the linear grid, scaled by the loudness
/// term. Output covers bins 0 .. size/n - 1 of the input grid.
inline BandSpectrum masp_product_linear(const BandSpectrum& X, const MaspParams& params) {
    params.validate();
    const std::size_t n = X.density.size();
    if (n == 0) throw std::invalid_argument("masp_product_linear: empty spectrum");
    const double total = X.sum();
    if (!(total > 0.0)) throw degenerate_error("masp_product_linear: degenerate spectrum");
    const double mean = total / static_cast<double>(n);
    const std::size_t m = n / static_cast<std::size_t>(params.n);
    if (m < 2) throw std::invalid_argument("masp_product_linear: grid too small for n factors");
    BandSpectrum out;
    out.grid = LinearGrid(X.grid.df, X.grid.df * static_cast<double>(m));
    out.density.assign(m, 1.0);
    for (int k = 1; k <= params.n; ++k) {
        const double a = smoothing_weight(k, params.b);
        const double floor_term = (1.0 - a) * mean;
        const std::size_t stride = static_cast<std::size_t>(k);
        for (std::size_t i = 0; i < m; ++i)
            out.density[i] *= a * X.density[i * stride] + floor_term;
    }
    double psum = out.sum();
    if (!(psum > 0.0)) throw degenerate_error("masp_product_linear: product underflowed to zero");
    const double scale = loudness_scale(total, psum);
    for (double& d : out.density) d *= scale;
    return out;
}

} // namespace masp
