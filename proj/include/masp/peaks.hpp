#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace masp {

struct Peak {
    std::size_t index = 0;
    double value = 0.0;
    double prominence = 0.0;
};

/// Local maxima of a sequence with topographic prominence. Endpoints
/// count as candidates (the sequence is treated as dropping to -inf
/// beyond both ends); plateaus report their leftmost sample. Prominence
/// of a peak is its height above the higher of the two lowest saddles
/// separating it from taller terrain, and the global maximum takes its
/// height above the sequence minimum.
inline std::vector<Peak> find_peaks(const std::vector<double>& v) {
    std::vector<Peak> peaks;
    const std::size_t n = v.size();
    if (n == 0) return peaks;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && v[i] <= v[i - 1]) continue;
        std::size_t j = i;
        while (j + 1 < n && v[j + 1] == v[i]) ++j;
        bool right_ok = (j + 1 == n) || v[j + 1] < v[i];
        if (!right_ok) continue;
        peaks.push_back({i, v[i], 0.0});
    }
    double vmin = *std::min_element(v.begin(), v.end());
    for (Peak& p : peaks) {
        // walk outward until strictly taller terrain, tracking the saddle
        double left_saddle = p.value;
        bool left_higher = false;
        for (std::size_t k = p.index; k-- > 0;) {
            left_saddle = std::min(left_saddle, v[k]);
            if (v[k] > p.value) { left_higher = true; break; }
        }
        double right_saddle = p.value;
        bool right_higher = false;
        for (std::size_t k = p.index + 1; k < n; ++k) {
            right_saddle = std::min(right_saddle, v[k]);
            if (v[k] > p.value) { right_higher = true; break; }
        }
        double base;
        if (left_higher && right_higher) base = std::max(left_saddle, right_saddle);
        else if (left_higher) base = left_saddle;
        else if (right_higher) base = right_saddle;
        else base = vmin;
        p.prominence = p.value - base;
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.prominence != b.prominence) return a.prominence > b.prominence;
        return a.value > b.value;
    });
    return peaks;
}

} // namespace masp
