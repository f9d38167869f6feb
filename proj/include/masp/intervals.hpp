#pragma once

#include <string>
#include <vector>

namespace masp {

/// A musical interval given either as 12-TET steps or as a just ratio.
struct NamedInterval {
    std::string name;
    bool is_ratio = false;
    double value = 0.0; // semitone steps, or the frequency ratio
};

/// The interval catalog the `intervals` command reports: the 12-TET set
/// interleaved with the just-intonation intervals it approximates.
inline std::vector<NamedInterval> named_intervals() {
    return {
        {"unison", false, 0.0},
        {"octave", false, 12.0},
        {"perfect_fifth_just", true, 3.0 / 2.0},
        {"perfect_fifth_12tet", false, 7.0},
        {"perfect_fourth_just", true, 4.0 / 3.0},
        {"perfect_fourth_12tet", false, 5.0},
        {"major_sixth_just", true, 5.0 / 3.0},
        {"major_sixth_12tet", false, 9.0},
        {"major_third_just", true, 5.0 / 4.0},
        {"major_third_12tet", false, 4.0},
        {"septimal_minor_seventh_just", true, 7.0 / 4.0},
        {"minor_third_just", true, 6.0 / 5.0},
        {"diminished_fifth_just", true, 7.0 / 5.0},
        {"diminished_sixth_just", true, 8.0 / 5.0},
        {"minor_third_12tet", false, 3.0},
        {"minor_seventh_12tet", false, 10.0},
        {"tritone_12tet", false, 6.0},
        {"minor_sixth_12tet", false, 8.0},
        {"septimal_minor_third_just", true, 7.0 / 6.0},
        {"major_seventh_12tet", false, 11.0},
        {"major_second_12tet", false, 2.0},
        {"minor_second_12tet", false, 1.0},
    };
}

struct NamedTriad {
    std::string name;
    int a = 0, b = 0, c = 0; // semitone offsets from the chord root
};

/// Common triads/tetrad slices reported by the `chords` command.
inline std::vector<NamedTriad> named_triads() {
    return {
        {"major_second_inversion", 0, 5, 9},
        {"major", 0, 4, 7},
        {"dominant_seventh_shell", 0, 4, 10},
        {"minor_first_inversion", 0, 3, 8},
        {"minor", 0, 3, 7},
        {"minor_sixth_added", 0, 3, 9},
        {"major_first_inversion", 0, 4, 9},
        {"diminished", 0, 3, 6},
    };
}

} // namespace masp
