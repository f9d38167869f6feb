#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "masp/masp.hpp"
#include "masp/synth.hpp"

using namespace masp;

namespace {

std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

LogSpectrum random_spectrum(const LogGrid& grid, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(0.0, 2.0);
    LogSpectrum s(grid);
    for (double& v : s.density) v = amp(rng);
    return s;
}

} // namespace

TEST_CASE("smoothing_weight") {
    for (double b : {0.25, 0.5, 1.0, 4.0}) CHECK(smoothing_weight(1, b) == Catch::Approx(0.5));
    CHECK(smoothing_weight(4, 0.5) == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(smoothing_weight(100, 2.0) == Catch::Approx(1.0 / 10001.0).epsilon(1e-12));
    SECTION("strictly decreasing in k") {
        double prev = smoothing_weight(1, 0.5);
        for (int k = 2; k <= 64; ++k) {
            double a = smoothing_weight(k, 0.5);
            CHECK(a < prev);
            prev = a;
        }
    }
    CHECK_THROWS_AS(smoothing_weight(0, 0.5), std::invalid_argument);
}

TEST_CASE("subharmonic_factor") {
    SECTION("uniform spectrum is a fixed point wherever the shift stays in range") {
        LogGrid g(50.0, 4, 3);
        LogSpectrum s(g, std::vector<double>(g.size(), 0.7));
        for (int k : {1, 2, 5}) {
            auto out = subharmonic_factor(s, k, 0.5);
            std::size_t shift = static_cast<std::size_t>(
                std::lround(std::log2(static_cast<double>(k)) * g.bins_per_octave()));
            double a = smoothing_weight(k, 0.5);
            for (std::size_t i = 0; i < out.size(); ++i) {
                double want = (i + shift < out.size()) ? 0.7 : (1.0 - a) * 0.7;
                CHECK(out.density[i] == Catch::Approx(want).epsilon(1e-12));
            }
        }
    }

    SECTION("k = 1 blends half spectrum, half mean, no shift") {
        LogGrid g(50.0, 2, 3);
        LogSpectrum s(g, {0, 1, 0, 2, 0, 0});
        double mean = mean_value(s);
        auto out = subharmonic_factor(s, 1, 0.5);
        for (std::size_t i = 0; i < s.size(); ++i)
            CHECK(out.density[i] == Catch::Approx(0.5 * s.density[i] + 0.5 * mean).epsilon(1e-12));
    }

    SECTION("octave shift of a delta lands 48 bins down at weight a") {
        LogGrid grid = LogGrid::standard();
        LogSpectrum s(grid);
        long bin880 = grid.bin_of_freq(880.0);
        s.density[static_cast<std::size_t>(bin880)] = 1.0;
        auto out = subharmonic_factor(s, 2, 0.5);
        double a = 1.0 / (1.0 + std::sqrt(2.0));
        double mean = mean_value(s);
        std::size_t bin440 = static_cast<std::size_t>(bin880 - 48);
        CHECK(grid.freq_at(bin440) == Catch::Approx(440.0).epsilon(2e-3));
        CHECK(out.density[bin440] == Catch::Approx(a * 1.0 + (1.0 - a) * mean).epsilon(1e-12));
        CHECK(argmax(out.density) == bin440);
        // elsewhere only the floor term remains
        CHECK(out.density[0] == Catch::Approx((1.0 - a) * mean).epsilon(1e-12));
        // shifted-in region beyond the top decays to the floor as well
        CHECK(out.density[out.size() - 1] == Catch::Approx((1.0 - a) * mean).epsilon(1e-12));
    }
}

TEST_CASE("masp_spectrum basics") {
    SECTION("uniform input gives c^n where every factor sees the spectrum") {
        LogGrid g(50.0, 1, 4);
        LogSpectrum s(g, std::vector<double>(4, 2.0));
        auto out = masp_spectrum(s, MaspParams{0.5, 3, -1.0});
        std::size_t deepest = static_cast<std::size_t>(std::lround(std::log2(3.0))); // 2 bins
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i + deepest < out.size())
                CHECK(out.density[i] == Catch::Approx(8.0).epsilon(1e-12));
            else
                CHECK(out.density[i] > 0.0);
        }
    }

    SECTION("n = 1 reduces to the k=1 blend") {
        LogGrid g(50.0, 2, 2);
        LogSpectrum s(g, {1, 0, 3, 0});
        double mean = mean_value(s);
        auto out = masp_spectrum(s, MaspParams{0.5, 1, -1.0});
        for (std::size_t i = 0; i < s.size(); ++i)
            CHECK(out.density[i] == Catch::Approx(0.5 * s.density[i] + 0.5 * mean).epsilon(1e-12));
    }

    SECTION("all-zero input is refused") {
        LogSpectrum z(LogGrid(50.0, 2, 2));
        CHECK_THROWS_AS(masp_spectrum(z, MaspParams{}), degenerate_error);
    }
}

TEST_CASE("masp toy-grid oracle, one bin per octave") {
    // 8 bins, delta at bin 3, n = 2, b = 1. Hand evaluation:
    //   F1 = 0.5 F + 0.5/8, F2 = (1/3) shift1(F) + (2/3)/8 with zero fill,
    //   P = F1 * F2 bin-wise.
    LogGrid g(10.0, 1, 8);
    LogSpectrum F(g, {0, 0, 0, 1, 0, 0, 0, 0});
    auto P = masp_spectrum(F, MaspParams{1.0, 2, -1.0});
    const double expected[8] = {1.0 / 192, 1.0 / 192, 5.0 / 192, 9.0 / 192,
                                1.0 / 192, 1.0 / 192, 1.0 / 192, 1.0 / 192};
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(P.density[i] == Catch::Approx(expected[i]).epsilon(1e-12));
    CHECK(argmax(P.density) == 3);
}

TEST_CASE("masp_spectrum properties") {
    LogGrid grid = LogGrid::standard();
    MaspParams params; // b = 0.5, n = 32

    SECTION("never zero when the mean is positive") {
        for (unsigned seed : {1u, 2u, 3u}) {
            LogSpectrum s = random_spectrum(grid, seed);
            // zero out most bins to stress the floor term
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i % 7) s.density[i] = 0.0;
            auto out = masp_spectrum(s, params);
            for (double v : out.density) CHECK(v > 0.0);
        }
    }

    SECTION("positive scaling multiplies by c^n and leaves the argmax alone") {
        auto F = gaussian_partials(sawtooth_partials(220.0, 8), 0.1, grid);
        auto base = masp_spectrum(F, params);
        const double c = 3.7;
        LogSpectrum scaled = F;
        for (double& v : scaled.density) v *= c;
        auto out = masp_spectrum(scaled, params);
        const double cn = std::pow(c, params.n);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(out.density[i] == Catch::Approx(cn * base.density[i]).epsilon(1e-9));
        CHECK(argmax(out.density) == argmax(base.density));
    }

    SECTION("factors approach the mean as k grows") {
        LogSpectrum s = random_spectrum(grid, 17);
        double mean = mean_value(s);
        double lo = *std::min_element(s.density.begin(), s.density.end());
        double hi = *std::max_element(s.density.begin(), s.density.end());
        for (int k : {1, 2, 8, 32, 128}) {
            auto f = subharmonic_factor(s, k, 0.5);
            double dev = 0.0;
            for (double v : f.density) dev = std::max(dev, std::abs(v - mean));
            CHECK(dev <= smoothing_weight(k, 0.5) * (hi - lo) + 1e-12);
        }
    }

    SECTION("transposition moves the argmax bin-for-bin") {
        // support well inside the grid: tone at 100 Hz, 8 harmonics <= 800
        auto partials = sawtooth_partials(100.0, 8);
        auto F = gaussian_partials(partials, 0.1, grid);
        auto base = masp_spectrum(F, MaspParams{0.5, 8, -1.0});
        for (int j : {-12, 7, 24}) {
            std::vector<Partial> moved;
            for (const Partial& p : partials)
                moved.emplace_back(p.freq * std::exp2(j / 48.0), p.amp);
            auto Fm = gaussian_partials(moved, 0.1, grid);
            auto out = masp_spectrum(Fm, MaspParams{0.5, 8, -1.0});
            CHECK(static_cast<long>(argmax(out.density)) ==
                  static_cast<long>(argmax(base.density)) + j);
        }
    }

    SECTION("missing fundamental is recovered at 100 and 440 Hz") {
        for (double f0 : {100.0, 440.0}) {
            auto F = gaussian_partials(sawtooth_partials(f0, 10, {1}), 0.1, grid);
            auto out = masp_spectrum(F, params);
            long want = grid.bin_of_freq(f0);
            CHECK(std::labs(static_cast<long>(argmax(out.density)) - want) <= 1);
        }
    }
}

TEST_CASE("loudness_scale") {
    CHECK(loudness_scale(0.0, 5.0) == 0.0);
    CHECK(loudness_scale(std::exp(1.0) - 1.0, 1.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(loudness_scale(10.0, 2.0) == Catch::Approx(std::log(11.0) / 2.0).epsilon(1e-12));
    CHECK(loudness_scale(10.0, 2.0) == Catch::Approx(1.19895).margin(1e-5));
    CHECK_THROWS_AS(loudness_scale(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("masp_frame") {
    LogGrid grid = LogGrid::standard();
    MaspParams params;

    SECTION("silence comes back unvoiced with a zero spectrum") {
        LogSpectrum silence(grid);
        auto res = masp_frame(silence, params);
        CHECK_FALSE(res.pitch.has_value());
        CHECK(res.loudness == 0.0);
        for (double v : res.pitch_spectrum.density) CHECK(v == 0.0);
    }

    SECTION("full sawtooth at 100 Hz lands within a bin") {
        auto F = gaussian_partials(sawtooth_partials(100.0, 10), 0.1, grid);
        auto res = masp_frame(F, params);
        REQUIRE(res.pitch.has_value());
        CHECK(std::abs(12.0 * std::log2(res.pitch->f0 / 100.0)) <= 0.25 + 1e-9);
        CHECK(res.pitch->confidence > 0.0);
        CHECK(res.pitch->confidence <= 1.0);
    }

    SECTION("a lone pure tone keeps its own pitch") {
        auto F = gaussian_partials({Partial(440.0, 1.0)}, 0.1, grid);
        auto res = masp_frame(F, params);
        REQUIRE(res.pitch.has_value());
        CHECK(std::abs(12.0 * std::log2(res.pitch->f0 / 440.0)) <= 0.25 + 1e-9);
    }

    SECTION("positive-mean input yields a strictly positive pitch spectrum") {
        auto F = gaussian_partials({Partial(200.0, 0.3)}, 0.1, grid);
        auto res = masp_frame(F, params);
        for (double v : res.pitch_spectrum.density) CHECK(v > 0.0);
    }
}

TEST_CASE("masp_spectrogram") {
    LogGrid grid = LogGrid::standard();
    CqtParams cqt;
    cqt.grid = grid;

    SECTION("constant tone gives a constant track") {
        PartialTrack track;
        for (int t = 0; t < 6; ++t) {
            track.times.push_back(0.05 * t);
            track.frames.push_back({Partial(330.0, 1.0)});
        }
        auto spec = spectrogram_of_partials(track, 0.1, cqt);
        auto [results, pitch] = masp_spectrogram(spec, MaspParams{});
        REQUIRE(pitch.frames.size() == 6);
        for (const auto& f : pitch.frames) {
            CHECK(f.voiced);
            CHECK(f.f0 == Catch::Approx(pitch.frames.front().f0));
        }
    }

    SECTION("silence then tone flips the voiced flag") {
        LogSpectrogram spec;
        spec.params.grid = grid;
        for (int t = 0; t < 4; ++t) {
            spec.frame_times.push_back(0.05 * t);
            if (t < 2) {
                spec.frames.emplace_back(grid);
            } else {
                spec.frames.push_back(gaussian_partials({Partial(220.0, 1.0)}, 0.1, grid));
            }
        }
        auto [results, pitch] = masp_spectrogram(spec, MaspParams{});
        CHECK_FALSE(pitch.frames[0].voiced);
        CHECK_FALSE(pitch.frames[1].voiced);
        CHECK(pitch.frames[2].voiced);
        CHECK(pitch.frames[3].voiced);
        CHECK(std::abs(12.0 * std::log2(pitch.frames[3].f0 / 220.0)) <= 0.25 + 1e-9);
    }
}
