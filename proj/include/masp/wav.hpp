#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "masp/errors.hpp"

namespace masp {

struct WavData {
    std::vector<double> samples; // mono, [-1, 1]
    double sample_rate = 44100.0;
    bool downmixed = false; // true when a stereo source was averaged
};

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

} // namespace detail

/// PCM 16- or 24-bit WAV reader. Stereo is downmixed by averaging; other
/// channel counts and compressed formats are rejected.
inline WavData read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw io_error(path + ": not a RIFF/WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        std::uint32_t chunk_len = detail::read_u32(&bytes[pos + 4]);
        if (std::memcmp(&bytes[pos], "fmt ", 4) == 0 && pos + 8 + 16 <= bytes.size()) {
            format = detail::read_u16(&bytes[pos + 8]);
            channels = detail::read_u16(&bytes[pos + 10]);
            rate = detail::read_u32(&bytes[pos + 12]);
            bits = detail::read_u16(&bytes[pos + 22]);
        } else if (std::memcmp(&bytes[pos], "data", 4) == 0) {
            data = &bytes[pos + 8];
            data_len = chunk_len;
            if (pos + 8 + data_len > bytes.size()) data_len = static_cast<std::uint32_t>(bytes.size() - pos - 8);
        }
        pos += 8 + chunk_len + (chunk_len & 1);
    }
    if (format != 1) throw io_error(path + ": only uncompressed PCM is supported");
    if (channels != 1 && channels != 2) throw io_error(path + ": only mono or stereo supported");
    if (bits != 16 && bits != 24) throw io_error(path + ": only 16/24-bit PCM supported");
    if (!data || rate == 0) throw io_error(path + ": missing fmt/data chunk");

    const std::size_t bytes_per = bits / 8;
    const std::size_t n_frames = data_len / (bytes_per * channels);
    WavData wav;
    wav.sample_rate = static_cast<double>(rate);
    wav.downmixed = channels == 2;
    wav.samples.resize(n_frames);
    const double scale = bits == 16 ? 32768.0 : 8388608.0;
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (unsigned c = 0; c < channels; ++c) {
            const unsigned char* s = data + (i * channels + c) * bytes_per;
            std::int32_t v;
            if (bits == 16) {
                v = static_cast<std::int16_t>(s[0] | (s[1] << 8));
            } else {
                v = static_cast<std::int32_t>(s[0] | (s[1] << 8) | (s[2] << 16));
                if (v & 0x800000) v -= 0x1000000;
            }
            acc += static_cast<double>(v) / scale;
        }
        wav.samples[i] = acc / channels;
    }
    return wav;
}

/// 16-bit mono PCM writer. Samples are clipped to [-1, 1].
inline void write_wav(const std::string& path, const std::vector<double>& samples,
                      double sample_rate) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    auto put_u32 = [&](std::uint32_t v) {
        char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                     static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
        out.write(b, 4);
    };
    auto put_u16 = [&](std::uint16_t v) {
        char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
        out.write(b, 2);
    };
    std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
    out.write("RIFF", 4);
    put_u32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(1); // PCM
    put_u16(1); // mono
    put_u32(static_cast<std::uint32_t>(sample_rate));
    put_u32(static_cast<std::uint32_t>(sample_rate) * 2);
    put_u16(2);
    put_u16(16);
    out.write("data", 4);
    put_u32(data_len);
    for (double s : samples) {
        double clipped = s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s);
        auto v = static_cast<std::int16_t>(std::lround(clipped * 32767.0));
        put_u16(static_cast<std::uint16_t>(v));
    }
    if (!out) throw io_error("short write to " + path);
}

} // namespace masp
