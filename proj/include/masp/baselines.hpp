#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "masp/spectrum.hpp"

namespace masp {

/// Harmonic product spectrum by index downsampling: Y[i] = prod_k X[i*k],
/// zero once i*k runs off the end. A single missing harmonic zeroes the
/// product, which is the failure mode this baseline exists to exhibit.
inline LinearSpectrum hps(const LinearSpectrum& X, int n) {
    if (n < 1) throw std::invalid_argument("hps: n must be >= 1");
    X.validate();
    LinearSpectrum Y;
    Y.freqs = X.freqs;
    Y.density.assign(X.density.size(), 1.0);
    const std::size_t N = X.density.size();
    for (std::size_t i = 0; i < N; ++i) {
        double prod = 1.0;
        for (int k = 1; k <= n; ++k) {
            std::size_t j = i * static_cast<std::size_t>(k);
            prod *= (j < N) ? X.density[j] : 0.0;
            if (prod == 0.0) break;
        }
        Y.density[i] = prod;
    }
    return Y;
}

struct Histogram {
    double bin_width = 0.0;
    std::map<long, int> counts; // bin index -> count; freq = (index + 0.5) * width

    double bin_center(long idx) const { return (static_cast<double>(idx) + 0.5) * bin_width; }
};

/// For each partial, count f/d for d = 1..max_divisor into fixed-width
/// bins. The classic pattern-matching picture: pitch is read off as the
/// rightmost of the largest bins.
inline Histogram subharmonic_histogram(const std::vector<Partial>& partials, int max_divisor,
                                       double bin_width) {
    if (max_divisor < 1) throw std::invalid_argument("subharmonic_histogram: max_divisor must be >= 1");
    if (bin_width <= 0.0) throw std::invalid_argument("subharmonic_histogram: bin_width must be > 0");
    Histogram h;
    h.bin_width = bin_width;
    for (const Partial& p : partials)
        for (int d = 1; d <= max_divisor; ++d)
            h.counts[static_cast<long>(std::floor(p.freq / d / bin_width))] += 1;
    return h;
}

/// Rightmost (highest-frequency) bin among those with maximal count.
inline double histogram_pitch(const Histogram& h) {
    if (h.counts.empty()) throw std::invalid_argument("histogram_pitch: empty histogram");
    int best = 0;
    long best_idx = 0;
    for (const auto& [idx, c] : h.counts) {
        if (c > best || (c == best && idx > best_idx)) {
            best = c;
            best_idx = idx;
        }
    }
    return h.bin_center(best_idx);
}

/// GCD of the frequencies after quantization: round each to a multiple of
/// `quantum`, take the integer GCD, convert back to Hz.
inline double gcd_pitch(const std::vector<double>& freqs, double quantum) {
    if (freqs.empty()) throw std::invalid_argument("gcd_pitch: no frequencies");
    if (quantum <= 0.0) throw std::invalid_argument("gcd_pitch: quantum must be > 0");
    long long g = 0;
    for (double f : freqs) {
        if (f < quantum) throw std::invalid_argument("gcd_pitch: frequency below quantum");
        g = std::gcd(g, static_cast<long long>(std::llround(f / quantum)));
    }
    return static_cast<double>(g) * quantum;
}

/// Mean spacing of consecutive partials. Needs at least two.
inline double spacing_pitch(const std::vector<double>& freqs) {
    if (freqs.size() < 2) throw std::invalid_argument("spacing_pitch: need >= 2 frequencies");
    std::vector<double> sorted = freqs;
    std::sort(sorted.begin(), sorted.end());
    return (sorted.back() - sorted.front()) / static_cast<double>(sorted.size() - 1);
}

inline double lowest_partial(const std::vector<double>& freqs) {
    if (freqs.empty()) throw std::invalid_argument("lowest_partial: no frequencies");
    return *std::min_element(freqs.begin(), freqs.end());
}

} // namespace masp
