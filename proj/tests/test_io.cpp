#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <vector>

#include "masp/csv.hpp"
#include "masp/peaks.hpp"
#include "masp/synth.hpp"
#include "masp/wav.hpp"

using namespace masp;

TEST_CASE("wav round trip at 16 bits") {
    auto x = render_pcm({Partial(440.0, 0.25)}, 8000.0, 0.1);
    write_wav("/tmp/masp_io_rt.wav", x, 8000.0);
    WavData w = read_wav("/tmp/masp_io_rt.wav");
    CHECK(w.sample_rate == 8000.0);
    CHECK_FALSE(w.downmixed);
    REQUIRE(w.samples.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(w.samples[i] == Catch::Approx(x[i]).margin(1.0 / 32768.0));
}

namespace {

// minimal hand-assembled WAV for the formats write_wav does not produce
void write_raw_wav(const std::string& path, int bits, int channels,
                   const std::vector<long>& frames, unsigned rate) {
    std::ofstream out(path, std::ios::binary);
    auto u32 = [&](std::uint32_t v) {
        char b[4] = {char(v), char(v >> 8), char(v >> 16), char(v >> 24)};
        out.write(b, 4);
    };
    auto u16 = [&](std::uint16_t v) {
        char b[2] = {char(v), char(v >> 8)};
        out.write(b, 2);
    };
    int bytes_per = bits / 8;
    std::uint32_t dlen = static_cast<std::uint32_t>(frames.size() * bytes_per);
    out.write("RIFF", 4);
    u32(36 + dlen);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    u32(16);
    u16(1);
    u16(static_cast<std::uint16_t>(channels));
    u32(rate);
    u32(rate * channels * bytes_per);
    u16(static_cast<std::uint16_t>(channels * bytes_per));
    u16(static_cast<std::uint16_t>(bits));
    out.write("data", 4);
    u32(dlen);
    for (long v : frames) {
        for (int b = 0; b < bytes_per; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
    }
}

} // namespace

TEST_CASE("24-bit samples scale to unit range") {
    write_raw_wav("/tmp/masp_io_24.wav", 24, 1, {4194304, -8388608, 0}, 48000); // 0.5, -1, 0
    WavData w = read_wav("/tmp/masp_io_24.wav");
    REQUIRE(w.samples.size() == 3);
    CHECK(w.samples[0] == Catch::Approx(0.5));
    CHECK(w.samples[1] == Catch::Approx(-1.0));
    CHECK(w.samples[2] == 0.0);
    CHECK(w.sample_rate == 48000.0);
}

TEST_CASE("stereo averages to mono and flags the downmix") {
    write_raw_wav("/tmp/masp_io_st.wav", 16, 2, {16384, -16384, 8192, 8192}, 44100);
    WavData w = read_wav("/tmp/masp_io_st.wav");
    CHECK(w.downmixed);
    REQUIRE(w.samples.size() == 2);
    CHECK(w.samples[0] == Catch::Approx(0.0).margin(1e-9));
    CHECK(w.samples[1] == Catch::Approx(0.25).margin(1e-4));
}

TEST_CASE("unreadable and malformed files raise io errors") {
    CHECK_THROWS_AS(read_wav("/tmp/masp_io_missing.wav"), io_error);
    std::ofstream("/tmp/masp_io_junk.wav") << "not a riff container";
    CHECK_THROWS_AS(read_wav("/tmp/masp_io_junk.wav"), io_error);
}

TEST_CASE("csv numbers use six significant digits") {
    CHECK(csv_num(0.0) == "0");
    CHECK(csv_num(32.703) == "32.703");
    CHECK(csv_num(1.0 / 3.0) == "0.333333");
    CHECK(csv_num(123456789.0) == "1.23457e+08");
}

TEST_CASE("find_peaks") {
    SECTION("ranks by prominence and keeps endpoint maxima") {
        std::vector<double> v{5, 1, 3, 2, 4, 0};
        auto peaks = find_peaks(v);
        REQUIRE(peaks.size() == 3);
        CHECK(peaks[0].index == 0); // tallest, endpoint
        CHECK(peaks[0].prominence == 5.0);
        CHECK(peaks[1].index == 4);
        CHECK(peaks[1].prominence == 3.0); // saddle at 1 toward the taller 5
        CHECK(peaks[2].index == 2);
        CHECK(peaks[2].prominence == 1.0); // higher saddle, 2
    }

    SECTION("plateaus count once, at their left edge") {
        std::vector<double> v{0, 2, 2, 2, 0, 1, 0};
        auto peaks = find_peaks(v);
        REQUIRE(peaks.size() == 2);
        CHECK(peaks[0].index == 1);
        CHECK(peaks[1].index == 5);
    }

    SECTION("monotone input has a single endpoint peak") {
        std::vector<double> v{0, 1, 2, 3};
        auto peaks = find_peaks(v);
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0].index == 3);
    }

    SECTION("empty input gives no peaks") { CHECK(find_peaks({}).empty()); }
}
