#pragma once

#include <cmath>
#include <set>
#include <vector>

#include "masp/cqt.hpp"
#include "masp/errors.hpp"
#include "masp/spectrum.hpp"

namespace masp {

enum class SignalKind { sawtooth, square, custom, glissando_pair };

struct GlissandoSpec {
    double start_offset = -1.0; // semitones relative to the fixed tone
    double end_offset = 12.0;
};

struct SignalSpec {
    SignalKind kind = SignalKind::sawtooth;
    double f0 = 100.0;
    double duration = 2.0;
    double sample_rate = 44100.0;
    int n_partials = 16;
    std::set<int> removed_harmonics;
    std::vector<Partial> custom_partials;
    GlissandoSpec glissando;

    void validate() const {
        if (duration <= 0.0) throw std::invalid_argument("SignalSpec: duration must be > 0");
        if (sample_rate <= 0.0) throw std::invalid_argument("SignalSpec: sample_rate must be > 0");
        if (f0 <= 0.0) throw std::invalid_argument("SignalSpec: f0 must be > 0");
    }
};

/// Harmonics h*f0 for h = 1..n_partials (minus removals) with power
/// weights (1/h)^2, i.e. amplitude falling as 1/h.
inline std::vector<Partial> sawtooth_partials(double f0, int n_partials,
                                              const std::set<int>& removed = {}) {
    if (n_partials < 1) throw std::invalid_argument("sawtooth_partials: n_partials must be >= 1");
    if (f0 <= 0.0) throw std::invalid_argument("sawtooth_partials: f0 must be > 0");
    std::vector<Partial> out;
    for (int h = 1; h <= n_partials; ++h) {
        if (removed.count(h)) continue;
        double inv = 1.0 / static_cast<double>(h);
        out.emplace_back(h * f0, inv * inv);
    }
    if (out.empty()) throw std::invalid_argument("sawtooth_partials: all partials removed");
    return out;
}

/// Odd harmonics only; same 1/h amplitude law. Removal is by harmonic
/// number, so removed={1} leaves 3*f0 as the lowest partial.
inline std::vector<Partial> square_partials(double f0, int n_partials,
                                            const std::set<int>& removed = {}) {
    if (n_partials < 1) throw std::invalid_argument("square_partials: n_partials must be >= 1");
    if (f0 <= 0.0) throw std::invalid_argument("square_partials: f0 must be > 0");
    std::vector<Partial> out;
    for (int h = 1; h <= n_partials; h += 2) {
        if (removed.count(h)) continue;
        double inv = 1.0 / static_cast<double>(h);
        out.emplace_back(h * f0, inv * inv);
    }
    if (out.empty()) throw std::invalid_argument("square_partials: all partials removed");
    return out;
}

/// The near-harmonic complex whose components sit 30 Hz off multiples of
/// 900 Hz. Its GCD period is 30 Hz but the heard pitch is ~900 Hz.
inline std::vector<Partial> inharmonic_shifted_complex() {
    std::vector<Partial> out;
    for (double f : {930.0, 1770.0, 2730.0, 3570.0, 4530.0, 5370.0}) out.emplace_back(f, 1.0);
    return out;
}

/// Five equally spaced components, 900..1700 Hz, deliberately ambiguous:
/// no fundamental fits them as consecutive harmonics.
inline std::vector<Partial> ambiguous_complex() {
    std::vector<Partial> out;
    for (double f : {900.0, 1100.0, 1300.0, 1500.0, 1700.0}) out.emplace_back(f, 1.0);
    return out;
}

/// Two-tone track: tone 1 fixed at base, tone 2 sliding from start to end
/// offset (semitones, linear in time, so logarithmic in frequency). The
/// default span covers -1..+12 semitones in 13 s, one semitone per
/// second. The optional template turns each tone into a harmonic
/// complex; by default both tones are pure.
inline PartialTrack glissando_pair(double base, double start_offset = -1.0,
                                   double end_offset = 12.0, double duration = 13.0,
                                   double frame_step = 0.05,
                                   const std::vector<Partial>& tone_template = {}) {
    if (duration <= 0.0) throw std::invalid_argument("glissando_pair: duration must be > 0");
    if (frame_step <= 0.0) throw std::invalid_argument("glissando_pair: frame_step must be > 0");
    if (base <= 0.0) throw std::invalid_argument("glissando_pair: base must be > 0");
    PartialTrack track;
    const std::size_t n_frames = static_cast<std::size_t>(std::floor(duration / frame_step)) + 1;
    for (std::size_t t = 0; t < n_frames; ++t) {
        double time = static_cast<double>(t) * frame_step;
        double offset = start_offset + (end_offset - start_offset) * time / duration;
        double f2 = base * std::exp2(offset / 12.0);
        std::vector<Partial> frame;
        if (tone_template.empty()) {
            frame.emplace_back(base, 1.0);
            frame.emplace_back(f2, 1.0);
        } else {
            for (const Partial& p : tone_template) {
                frame.emplace_back(p.freq / tone_template.front().freq * base, p.amp);
                frame.emplace_back(p.freq / tone_template.front().freq * f2, p.amp);
            }
        }
        track.times.push_back(time);
        track.frames.push_back(std::move(frame));
    }
    return track;
}

/// Sum of sinusoids, amplitude sqrt(power weight), zero phase at t = 0.
inline std::vector<double> render_pcm(const std::vector<Partial>& partials,
                                      double sample_rate, double duration) {
    if (partials.empty()) throw std::invalid_argument("render_pcm: no partials");
    if (duration <= 0.0) throw std::invalid_argument("render_pcm: duration must be > 0");
    double fmax = 0.0;
    for (const Partial& p : partials) fmax = std::max(fmax, p.freq);
    if (sample_rate < 4.0 * fmax)
        throw std::invalid_argument("render_pcm: sample_rate must be >= 4x highest partial");
    const std::size_t n = static_cast<std::size_t>(sample_rate * duration);
    if (n == 0) throw std::invalid_argument("render_pcm: zero-length output");
    std::vector<double> x(n, 0.0);
    for (const Partial& p : partials) {
        double amp = std::sqrt(p.amp);
        double w = 2.0 * M_PI * p.freq / sample_rate;
        for (std::size_t i = 0; i < n; ++i) x[i] += amp * std::sin(w * static_cast<double>(i));
    }
    return x;
}

/// Renders a PartialTrack by integrating each tone's instantaneous
/// frequency, so glissandi stay phase-continuous. Partials are matched
/// across frames by list position; frequency is interpolated linearly in
/// log-frequency between frame times.
inline std::vector<double> render_pcm(const PartialTrack& track, double sample_rate,
                                      double duration) {
    if (track.frames.empty()) throw std::invalid_argument("render_pcm: empty track");
    const std::size_t voices = track.frames.front().size();
    for (const auto& f : track.frames)
        if (f.size() != voices)
            throw std::invalid_argument("render_pcm: voice count must be constant over time");
    double fmax = 0.0;
    for (const auto& f : track.frames)
        for (const Partial& p : f) fmax = std::max(fmax, p.freq);
    if (sample_rate < 4.0 * fmax)
        throw std::invalid_argument("render_pcm: sample_rate must be >= 4x highest partial");
    const std::size_t n = static_cast<std::size_t>(sample_rate * duration);
    if (n == 0) throw std::invalid_argument("render_pcm: zero-length output");

    std::vector<double> x(n, 0.0);
    for (std::size_t v = 0; v < voices; ++v) {
        double phase = 0.0;
        std::size_t seg = 0;
        double amp = std::sqrt(track.frames.front()[v].amp);
        for (std::size_t i = 0; i < n; ++i) {
            double t = static_cast<double>(i) / sample_rate;
            while (seg + 1 < track.times.size() && track.times[seg + 1] <= t) ++seg;
            double f;
            if (seg + 1 >= track.times.size()) {
                f = track.frames.back()[v].freq;
            } else {
                double t0 = track.times[seg], t1 = track.times[seg + 1];
                double u = (t1 > t0) ? (t - t0) / (t1 - t0) : 0.0;
                f = track.frames[seg][v].freq *
                    std::pow(track.frames[seg + 1][v].freq / track.frames[seg][v].freq, u);
            }
            x[i] += amp * std::sin(phase);
            phase += 2.0 * M_PI * f / sample_rate;
        }
    }
    return x;
}

/// Renders any SignalSpec to PCM.
inline std::vector<double> render_signal(const SignalSpec& spec) {
    spec.validate();
    switch (spec.kind) {
    case SignalKind::sawtooth:
        return render_pcm(sawtooth_partials(spec.f0, spec.n_partials, spec.removed_harmonics),
                          spec.sample_rate, spec.duration);
    case SignalKind::square:
        return render_pcm(square_partials(spec.f0, spec.n_partials, spec.removed_harmonics),
                          spec.sample_rate, spec.duration);
    case SignalKind::custom:
        return render_pcm(spec.custom_partials, spec.sample_rate, spec.duration);
    case SignalKind::glissando_pair: {
        PartialTrack track = glissando_pair(spec.f0, spec.glissando.start_offset,
                                            spec.glissando.end_offset, spec.duration);
        return render_pcm(track, spec.sample_rate, spec.duration);
    }
    }
    throw std::invalid_argument("render_signal: unknown kind");
}

} // namespace masp
