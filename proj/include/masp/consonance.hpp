#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "masp/errors.hpp"
#include "masp/grid.hpp"
#include "masp/masp.hpp"
#include "masp/parallel.hpp"
#include "masp/spectrum.hpp"

namespace masp {

struct ToneSpec {
    std::vector<Partial> partials;
    std::string label;

    ToneSpec() = default;
    ToneSpec(std::vector<Partial> p, std::string l = {}) : partials(std::move(p)), label(std::move(l)) {
        if (partials.empty()) throw std::invalid_argument("ToneSpec: needs at least one partial");
    }

    static ToneSpec pure(double freq, std::string label = {}) {
        return ToneSpec({Partial(freq, 1.0)}, std::move(label));
    }

    /// Template rescaled so its first partial lands on `freq`.
    ToneSpec transposed_to(double freq) const {
        ToneSpec out = *this;
        double ref = partials.front().freq;
        for (Partial& p : out.partials) p.freq = p.freq / ref * freq;
        return out;
    }
};

struct HarmonicityResult {
    double h = 0.0;
    double expected_freq_masp = 0.0;     // <w> of the joint product spectrum
    double expected_freq_spectrum = 0.0; // <w> of the joint frequency spectrum
};

struct HCurve {
    std::vector<double> axis; // semitone offset, ratio, or time depending on producer
    std::vector<double> h_values;
};

// ---------------------------------------------------------------------
// Joint spectra on the log grid (the forms used for CQT-based tracks)
// ---------------------------------------------------------------------

/// Bin-wise product of the per-tone pitch spectra, strict-normalized.
/// Three and more tones extend the same product.
inline LogSpectrum joint_masp(const std::vector<LogSpectrum>& specs) {
    if (specs.size() < 2) throw std::invalid_argument("joint_masp: need >= 2 spectra");
    for (const auto& s : specs)
        if (s.grid != specs.front().grid) throw std::invalid_argument("joint_masp: grid mismatch");
    LogSpectrum out = specs.front();
    for (std::size_t k = 1; k < specs.size(); ++k)
        for (std::size_t i = 0; i < out.size(); ++i) out.density[i] *= specs[k].density[i];
    if (!(out.sum() > 0.0)) throw degenerate_error("joint_masp: product is zero everywhere");
    return strict_normalize(out);
}

/// Bin-wise sum of per-tone spectra, each strict-normalized first so that
/// tones enter with equal weight, then normalized again.
inline LogSpectrum joint_spectrum(const std::vector<LogSpectrum>& specs) {
    if (specs.size() < 2) throw std::invalid_argument("joint_spectrum: need >= 2 spectra");
    for (const auto& s : specs)
        if (s.grid != specs.front().grid) throw std::invalid_argument("joint_spectrum: grid mismatch");
    LogSpectrum out(specs.front().grid);
    for (const auto& s : specs) {
        LogSpectrum norm = strict_normalize(s);
        for (std::size_t i = 0; i < out.size(); ++i) out.density[i] += norm.density[i];
    }
    return strict_normalize(out);
}

/// Expectation-shift harmonicity: 2^(<m_F> - <m_P>). Unity when the
/// product spectrum sits where the frequency spectrum does; one octave of
/// downward shift doubles it.
inline double harmonicity_shift(const LogSpectrum& F, const LogSpectrum& P) {
    if (F.grid != P.grid) throw std::invalid_argument("harmonicity_shift: grid mismatch");
    return std::exp2(expected_mel(F) - expected_mel(P));
}

// ---------------------------------------------------------------------
// Ratio harmonicity on the linear grid
//
// Tone spectra are unit-area Gaussians (area = partial power weight) with
// sigma proportional to the partial frequency, so every tone carries the
// same total mass regardless of register. The subharmonic product
// narrows k-fold per factor here, which is what separates this measure
// from its log-grid counterpart.
// ---------------------------------------------------------------------

namespace detail {

struct SparseTone {
    double total = 0.0;                               // sum of sampled values
    double moment = 0.0;                              // sum of f * value
    std::vector<std::pair<std::size_t, double>> nz;   // sorted by bin
};

inline SparseTone sample_tone_linear(const ToneSpec& tone, double sigma_semitones,
                                     const LinearGrid& grid) {
    if (sigma_semitones <= 0.0) throw std::invalid_argument("harmonicity: sigma must be > 0");
    const double width_frac = std::exp2(sigma_semitones / 12.0) - 1.0;
    SparseTone out;
    std::vector<std::pair<std::size_t, double>> acc;
    for (const Partial& p : tone.partials) {
        double sigma = p.freq * width_frac;
        if (p.freq + 12.0 * sigma >= grid.fmax())
            throw std::invalid_argument("harmonicity: partial too close to the grid ceiling");
        double height = p.amp / (sigma * std::sqrt(2.0 * M_PI));
        std::size_t lo = static_cast<std::size_t>(
            std::max(0.0, std::floor((p.freq - 12.0 * sigma) / grid.df)));
        std::size_t hi = static_cast<std::size_t>(std::ceil((p.freq + 12.0 * sigma) / grid.df));
        for (std::size_t i = lo; i <= hi; ++i) {
            double d = grid.freq_at(i) - p.freq;
            acc.emplace_back(i, height * std::exp(-d * d / (2.0 * sigma * sigma)));
        }
    }
    std::sort(acc.begin(), acc.end());
    for (const auto& [i, v] : acc) {
        if (!out.nz.empty() && out.nz.back().first == i) out.nz.back().second += v;
        else out.nz.emplace_back(i, v);
    }
    for (const auto& [i, v] : out.nz) {
        out.total += v;
        out.moment += grid.freq_at(i) * v;
    }
    if (!(out.total > 0.0)) throw degenerate_error("harmonicity: tone sampled to zero");
    return out;
}

/// Same result bit-for-bit as masp_product_linear on the densified tone:
/// every bin runs the full k-loop in order, but factor values away from
/// the sparse support are the constant floor term.
inline std::vector<double> sparse_masp_product(const SparseTone& tone, const MaspParams& params,
                                               const LinearGrid& grid) {
    const std::size_t N = grid.size;
    const std::size_t m = N / static_cast<std::size_t>(params.n);
    if (m < 2) throw std::invalid_argument("harmonicity: grid too small for n factors");
    const double mean = tone.total / static_cast<double>(N);

    // (bin, k, sample) hits where factor k reads a nonzero sample
    std::vector<std::tuple<std::size_t, int, double>> hits;
    for (int k = 1; k <= params.n; ++k) {
        const std::size_t stride = static_cast<std::size_t>(k);
        for (const auto& [j, v] : tone.nz) {
            if (j % stride != 0) continue;
            std::size_t i = j / stride;
            if (i < m) hits.emplace_back(i, k, v);
        }
    }
    std::sort(hits.begin(), hits.end());

    std::vector<double> a(params.n + 1), floor_term(params.n + 1);
    for (int k = 1; k <= params.n; ++k) {
        a[k] = smoothing_weight(k, params.b);
        floor_term[k] = (1.0 - a[k]) * mean;
    }
    double baseline = 1.0;
    for (int k = 1; k <= params.n; ++k) baseline *= floor_term[k];

    std::vector<double> P(m, baseline);
    std::size_t h = 0;
    while (h < hits.size()) {
        std::size_t bin = std::get<0>(hits[h]);
        std::size_t h_end = h;
        while (h_end < hits.size() && std::get<0>(hits[h_end]) == bin) ++h_end;
        double prod = 1.0;
        std::size_t cursor = h;
        for (int k = 1; k <= params.n; ++k) {
            if (cursor < h_end && std::get<1>(hits[cursor]) == k) {
                prod *= a[k] * std::get<2>(hits[cursor]) + floor_term[k];
                ++cursor;
            } else {
                prod *= floor_term[k];
            }
        }
        P[bin] = prod;
        h = h_end;
    }
    double psum = 0.0;
    for (double p : P) psum += p;
    if (!(psum > 0.0)) throw degenerate_error("harmonicity: product underflowed to zero");
    double scale = loudness_scale(tone.total, psum);
    for (double& p : P) p *= scale;
    return P;
}

} // namespace detail

/// Ratio harmonicity of two or more tones: every tone gets its own
/// loudness-scaled subharmonic product; H is the expected frequency of
/// the normalized joint product over the expected frequency of the
/// normalized joint spectrum. Tones are evaluated in a canonical order
/// so any permutation of the input yields the identical result.
inline HarmonicityResult harmonicity_ratio(std::vector<ToneSpec> tones, double sigma_semitones,
                                           const LinearGrid& grid, const MaspParams& params) {
    if (tones.size() < 2) throw std::invalid_argument("harmonicity_ratio: need >= 2 tones");
    params.validate();
    std::sort(tones.begin(), tones.end(), [](const ToneSpec& a, const ToneSpec& b) {
        return std::lexicographical_compare(
            a.partials.begin(), a.partials.end(), b.partials.begin(), b.partials.end(),
            [](const Partial& x, const Partial& y) {
                return x.freq != y.freq ? x.freq < y.freq : x.amp < y.amp;
            });
    });

    const std::size_t m = grid.size / static_cast<std::size_t>(params.n);
    std::vector<double> joint(m, 1.0);
    double mean_freq_sum = 0.0;
    for (const ToneSpec& tone : tones) {
        detail::SparseTone st = detail::sample_tone_linear(tone, sigma_semitones, grid);
        std::vector<double> P = detail::sparse_masp_product(st, params, grid);
        for (std::size_t i = 0; i < m; ++i) joint[i] *= P[i];
        mean_freq_sum += st.moment / st.total; // per-tone normalized contribution
    }

    double jsum = 0.0, jmoment = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        jsum += joint[i];
        jmoment += grid.freq_at(i) * joint[i];
    }
    if (!(jsum > 0.0)) throw degenerate_error("harmonicity_ratio: joint product is zero");

    HarmonicityResult res;
    res.expected_freq_masp = jmoment / jsum;
    res.expected_freq_spectrum = mean_freq_sum / static_cast<double>(tones.size());
    res.h = res.expected_freq_masp / res.expected_freq_spectrum;
    return res;
}

inline MaspParams interval_params() { return MaspParams{0.5, 32, -1.0}; }
inline MaspParams chord_params() { return MaspParams{0.5, 48, -1.0}; }

/// One axis entry per offset: the second tone at base * 2^(offset/12)
/// when `offsets_are_ratios` is false, base * offset otherwise.
inline HCurve interval_sweep(double base, const std::vector<double>& offsets,
                             bool offsets_are_ratios, const ToneSpec& tone_template,
                             double sigma_semitones, const LinearGrid& grid,
                             const MaspParams& params) {
    if (offsets.empty()) throw std::invalid_argument("interval_sweep: no offsets");
    HCurve curve;
    curve.axis = offsets;
    curve.h_values.assign(offsets.size(), 0.0);
    parallel_for(offsets.size(), [&](std::size_t i) {
        double ratio = offsets_are_ratios ? offsets[i] : std::exp2(offsets[i] / 12.0);
        std::vector<ToneSpec> tones{tone_template.transposed_to(base),
                                    tone_template.transposed_to(base * ratio)};
        curve.h_values[i] =
            harmonicity_ratio(std::move(tones), sigma_semitones, grid, params).h;
    });
    return curve;
}

struct ChordGrid {
    std::vector<double> x_offsets; // semitones
    std::vector<double> y_offsets;
    std::vector<std::vector<double>> h; // h[yi][xi]
};

/// H(x, y) for tones (base, base*2^(x/12), base*2^(y/12)). Symmetric in
/// (x, y) because the tone list is canonically ordered.
inline ChordGrid chord_grid(double base, double x_min, double x_max, double y_min, double y_max,
                            double step, double sigma_semitones, const LinearGrid& grid,
                            const MaspParams& params) {
    if (step <= 0.0) throw std::invalid_argument("chord_grid: step must be > 0");
    ChordGrid out;
    for (std::size_t i = 0; x_min + static_cast<double>(i) * step <= x_max + 1e-9; ++i)
        out.x_offsets.push_back(x_min + static_cast<double>(i) * step);
    for (std::size_t i = 0; y_min + static_cast<double>(i) * step <= y_max + 1e-9; ++i)
        out.y_offsets.push_back(y_min + static_cast<double>(i) * step);
    out.h.assign(out.y_offsets.size(), std::vector<double>(out.x_offsets.size(), 0.0));
    parallel_for(out.y_offsets.size() * out.x_offsets.size(), [&](std::size_t cell) {
        std::size_t yi = cell / out.x_offsets.size();
        std::size_t xi = cell % out.x_offsets.size();
        std::vector<ToneSpec> tones{
            ToneSpec::pure(base),
            ToneSpec::pure(base * std::exp2(out.x_offsets[xi] / 12.0)),
            ToneSpec::pure(base * std::exp2(out.y_offsets[yi] / 12.0))};
        out.h[yi][xi] = harmonicity_ratio(std::move(tones), sigma_semitones, grid, params).h;
    });
    return out;
}

/// Per-frame ratio harmonicity of an unseparated two-tone track: each
/// frame's partials form one joint spectrum whose subharmonic product is
/// compared against it, H = <w_P> / <w_X>. The axis is frame time.
inline HCurve joint_h_track(const PartialTrack& track, double sigma_semitones,
                            const LinearGrid& grid, const MaspParams& params) {
    if (track.frames.empty()) throw std::invalid_argument("joint_h_track: empty track");
    params.validate();
    HCurve curve;
    curve.axis = track.times;
    curve.h_values.assign(track.frames.size(), 0.0);
    parallel_for(track.frames.size(), [&](std::size_t t) {
        detail::SparseTone st =
            detail::sample_tone_linear(ToneSpec(track.frames[t]), sigma_semitones, grid);
        std::vector<double> P = detail::sparse_masp_product(st, params, grid);
        double psum = 0.0, pmoment = 0.0;
        for (std::size_t i = 0; i < P.size(); ++i) {
            psum += P[i];
            pmoment += grid.freq_at(i) * P[i];
        }
        curve.h_values[t] = (pmoment / psum) / (st.moment / st.total);
    });
    return curve;
}

/// Expectation-shift H across a spectrogram (the CQT-side variant):
/// per frame, harmonicity_shift(frame, its masp product spectrum).
inline HCurve glissando_h_track(const LogSpectrogram& spec, const MaspParams& params) {
    if (spec.frames.empty()) throw std::invalid_argument("glissando_h_track: empty spectrogram");
    params.validate();
    HCurve curve;
    curve.axis = spec.frame_times;
    curve.h_values.assign(spec.frames.size(), 0.0);
    parallel_for(spec.frames.size(), [&](std::size_t t) {
        if (!(spec.frames[t].sum() > 0.0)) return; // silent frame: H stays 0
        LogSpectrum P = masp_spectrum(spec.frames[t], params);
        curve.h_values[t] = harmonicity_shift(spec.frames[t], P);
    });
    return curve;
}

} // namespace masp
