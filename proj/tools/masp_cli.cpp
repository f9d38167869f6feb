// masp: synthesize test tones, extract pitch tracks, and score the
// consonance of tone combinations. WAV in, CSV out.

#include <CLI11.hpp>

#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "masp/baselines.hpp"
#include "masp/consonance.hpp"
#include "masp/cqt.hpp"
#include "masp/csv.hpp"
#include "masp/errors.hpp"
#include "masp/intervals.hpp"
#include "masp/masp.hpp"
#include "masp/spectrum.hpp"
#include "masp/synth.hpp"
#include "masp/wav.hpp"

namespace {

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::set<int> parse_int_set(const std::string& csv) {
    std::set<int> out;
    for (double v : parse_list(csv)) out.insert(static_cast<int>(v));
    return out;
}

struct GridFlags {
    double omega0 = 32.703;
    int bins_per_octave = 48;
    int octaves = 8;

    void attach(CLI::App* cmd) {
        cmd->add_option("--omega0", omega0, "log-grid reference frequency, Hz");
        cmd->add_option("--bins-per-octave", bins_per_octave, "log-grid resolution");
        cmd->add_option("--octaves", octaves, "log-grid span in octaves");
    }
    masp::LogGrid grid() const { return masp::LogGrid(omega0, bins_per_octave, octaves); }
};

struct LinearFlags {
    double df = 0.05;
    double fmax = 22050.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--df", df, "linear-grid spacing, Hz");
        cmd->add_option("--fmax", fmax, "linear-grid ceiling, Hz");
    }
    masp::LinearGrid grid() const { return masp::LinearGrid(df, fmax); }
};

int run_synth(const std::string& kind, double f0, int n_partials, const std::string& remove,
              const std::string& custom, const std::string& amps, double duration,
              double sample_rate, double gliss_start, double gliss_end, const std::string& out) {
    masp::SignalSpec spec;
    spec.f0 = f0;
    spec.duration = duration;
    spec.sample_rate = sample_rate;
    spec.n_partials = n_partials;
    spec.removed_harmonics = parse_int_set(remove);
    spec.glissando = {gliss_start, gliss_end};
    if (kind == "sawtooth") spec.kind = masp::SignalKind::sawtooth;
    else if (kind == "square") spec.kind = masp::SignalKind::square;
    else if (kind == "glissando") spec.kind = masp::SignalKind::glissando_pair;
    else if (kind == "custom") {
        spec.kind = masp::SignalKind::custom;
        std::vector<double> freqs = parse_list(custom);
        std::vector<double> weights = parse_list(amps);
        if (freqs.empty()) throw std::invalid_argument("synth: --partials-list is required for --kind custom");
        if (!weights.empty() && weights.size() != freqs.size())
            throw std::invalid_argument("synth: --amps must match --partials-list length");
        for (std::size_t i = 0; i < freqs.size(); ++i)
            spec.custom_partials.emplace_back(freqs[i], weights.empty() ? 1.0 : weights[i]);
    } else {
        throw std::invalid_argument("synth: unknown kind " + kind);
    }
    std::vector<double> pcm = masp::render_signal(spec);
    // normalize to 0.9 peak so the 16-bit write never clips
    double peak = 0.0;
    for (double s : pcm) peak = std::max(peak, std::abs(s));
    if (peak > 0.0)
        for (double& s : pcm) s *= 0.9 / peak;
    masp::write_wav(out, pcm, sample_rate);
    std::cerr << "wrote " << out << " (" << pcm.size() << " samples at " << sample_rate << " Hz)\n";
    return 0;
}

int run_analyze(const std::string& in, const std::string& out, const std::string& matrix_out,
                const GridFlags& gridf, double hop, double filter_scale, int n, double b,
                double voicing_threshold) {
    masp::WavData wav = masp::read_wav(in);
    if (wav.downmixed) std::cerr << "warning: stereo input downmixed to mono\n";
    masp::CqtParams cqt;
    cqt.grid = gridf.grid();
    cqt.hop_seconds = hop;
    cqt.filter_scale = filter_scale;
    cqt.sample_rate = wav.sample_rate;
    masp::LogSpectrogram spec = masp::cqt_power_spectrogram(wav.samples, cqt);
    masp::MaspParams params{b, n, voicing_threshold};
    auto [results, track] = masp::masp_spectrogram(spec, params);

    masp::CsvWriter csv(out);
    csv.row({"time_s", "f0_hz", "confidence", "voiced"});
    for (const auto& f : track.frames)
        csv.row({masp::csv_num(f.time), masp::csv_num(f.f0), masp::csv_num(f.confidence),
                 f.voiced ? "true" : "false"});

    if (!matrix_out.empty()) {
        masp::CsvWriter mcsv(matrix_out);
        std::vector<std::string> header{"time_s"};
        for (double f : cqt.grid.center_freqs()) header.push_back(masp::csv_num(f));
        mcsv.row(header);
        for (std::size_t t = 0; t < results.size(); ++t) {
            std::vector<double> row{spec.frame_times[t]};
            row.insert(row.end(), results[t].pitch_spectrum.density.begin(),
                       results[t].pitch_spectrum.density.end());
            mcsv.numeric_row(row);
        }
    }
    return 0;
}

int run_intervals(double base, double sigma, int n, double b, const LinearFlags& linf,
                  const std::string& out) {
    masp::LinearGrid grid = linf.grid();
    masp::MaspParams params{b, n, -1.0};
    masp::CsvWriter csv(out);
    csv.row({"name", "steps_or_ratio", "h"});
    for (const auto& ivl : masp::named_intervals()) {
        double ratio = ivl.is_ratio ? ivl.value : std::exp2(ivl.value / 12.0);
        auto res = masp::harmonicity_ratio(
            {masp::ToneSpec::pure(base), masp::ToneSpec::pure(base * ratio)}, sigma, grid, params);
        csv.row({ivl.name, masp::csv_num(ivl.value), masp::csv_num(res.h)});
    }
    return 0;
}

int run_chords(double base, double sigma, int n, double b, const LinearFlags& linf, double x_min,
               double x_max, double y_min, double y_max, double step, const std::string& grid_out,
               const std::string& table_out) {
    if (grid_out.empty() && table_out.empty())
        throw std::invalid_argument("chords: pass --grid-out and/or --table-out");
    masp::LinearGrid grid = linf.grid();
    masp::MaspParams params{b, n, -1.0};
    if (!table_out.empty()) {
        masp::CsvWriter csv(table_out);
        csv.row({"name", "offsets_st", "h"});
        for (const auto& triad : masp::named_triads()) {
            std::vector<masp::ToneSpec> tones;
            for (int s : {triad.a, triad.b, triad.c})
                tones.push_back(masp::ToneSpec::pure(base * std::exp2(s / 12.0)));
            auto res = masp::harmonicity_ratio(tones, sigma, grid, params);
            std::ostringstream offs;
            offs << "(" << triad.a << " " << triad.b << " " << triad.c << ")";
            csv.row({triad.name, offs.str(), masp::csv_num(res.h)});
        }
    }
    if (!grid_out.empty()) {
        masp::ChordGrid cg =
            masp::chord_grid(base, x_min, x_max, y_min, y_max, step, sigma, grid, params);
        masp::CsvWriter csv(grid_out);
        std::vector<std::string> header{"y_st\\x_st"};
        for (double x : cg.x_offsets) header.push_back(masp::csv_num(x));
        csv.row(header);
        for (std::size_t yi = 0; yi < cg.y_offsets.size(); ++yi) {
            std::vector<double> row{cg.y_offsets[yi]};
            row.insert(row.end(), cg.h[yi].begin(), cg.h[yi].end());
            csv.numeric_row(row);
        }
    }
    return 0;
}

int run_hcurve(double base, double start, double end, double step, double sigma, int n, double b,
               const LinearFlags& linf, const GridFlags& gridf, bool glissando,
               const std::string& form, double duration, double hop, const std::string& in,
               const std::string& out) {
    masp::MaspParams params{b, n, -1.0};
    masp::CsvWriter csv(out);
    if (!in.empty()) {
        // shift-form H track of recorded audio via the constant-Q front end
        masp::WavData wav = masp::read_wav(in);
        if (wav.downmixed) std::cerr << "warning: stereo input downmixed to mono\n";
        masp::CqtParams cqt;
        cqt.grid = gridf.grid();
        cqt.hop_seconds = hop;
        cqt.sample_rate = wav.sample_rate;
        masp::LogSpectrogram spec = masp::cqt_power_spectrogram(wav.samples, cqt);
        masp::HCurve curve = masp::glissando_h_track(spec, params);
        csv.row({"time_s", "h"});
        for (std::size_t i = 0; i < curve.axis.size(); ++i)
            csv.row({masp::csv_num(curve.axis[i]), masp::csv_num(curve.h_values[i])});
        return 0;
    }
    if (glissando) {
        masp::PartialTrack track = masp::glissando_pair(base, start, end, duration, hop);
        masp::HCurve curve;
        if (form == "ratio") {
            curve = masp::joint_h_track(track, sigma, linf.grid(), params);
        } else if (form == "shift") {
            masp::CqtParams cqt;
            cqt.grid = gridf.grid();
            cqt.hop_seconds = hop;
            masp::LogSpectrogram spec = masp::spectrogram_of_partials(track, sigma, cqt);
            curve = masp::glissando_h_track(spec, params);
        } else {
            throw std::invalid_argument("hcurve: --form must be ratio or shift");
        }
        csv.row({"time_s", "offset_st", "h"});
        for (std::size_t i = 0; i < curve.axis.size(); ++i) {
            double off = start + (end - start) * curve.axis[i] / duration;
            csv.row({masp::csv_num(curve.axis[i]), masp::csv_num(off),
                     masp::csv_num(curve.h_values[i])});
        }
        return 0;
    }
    if (form != "ratio")
        throw std::invalid_argument("hcurve: sweep mode supports --form ratio only");
    std::vector<double> offsets;
    for (std::size_t i = 0; start + static_cast<double>(i) * step <= end + 1e-9; ++i)
        offsets.push_back(start + static_cast<double>(i) * step);
    masp::HCurve curve = masp::interval_sweep(base, offsets, false, masp::ToneSpec::pure(base),
                                              sigma, linf.grid(), params);
    csv.row({"offset_st", "h"});
    for (std::size_t i = 0; i < curve.axis.size(); ++i)
        csv.row({masp::csv_num(curve.axis[i]), masp::csv_num(curve.h_values[i])});
    return 0;
}

int run_baseline(const std::string& model, const std::string& freqs_csv, double quantum, int n,
                 double df, int max_divisor, double bin_width, const std::string& out) {
    std::vector<double> freqs = parse_list(freqs_csv);
    if (freqs.empty()) throw std::invalid_argument("baseline: --freqs is required");
    masp::CsvWriter csv(out);
    if (model == "gcd") {
        csv.row({"model", "pitch_hz"});
        csv.row({"gcd", masp::csv_num(masp::gcd_pitch(freqs, quantum))});
    } else if (model == "spacing") {
        csv.row({"model", "pitch_hz"});
        csv.row({"spacing", masp::csv_num(masp::spacing_pitch(freqs))});
    } else if (model == "lowest") {
        csv.row({"model", "pitch_hz"});
        csv.row({"lowest", masp::csv_num(masp::lowest_partial(freqs))});
    } else if (model == "histogram") {
        std::vector<masp::Partial> partials;
        for (double f : freqs) partials.emplace_back(f, 1.0);
        masp::Histogram h = masp::subharmonic_histogram(partials, max_divisor, bin_width);
        csv.row({"bin_center_hz", "count"});
        for (const auto& [idx, c] : h.counts)
            csv.row({masp::csv_num(h.bin_center(idx)), std::to_string(c)});
    } else if (model == "hps") {
        // delta spectrum on a uniform grid, one bin per df
        double fmax = 0.0;
        for (double f : freqs) fmax = std::max(fmax, f);
        std::size_t bins = static_cast<std::size_t>(fmax / df) + 2;
        masp::LinearSpectrum X;
        X.freqs.resize(bins);
        X.density.assign(bins, 0.0);
        for (std::size_t i = 0; i < bins; ++i) X.freqs[i] = static_cast<double>(i) * df;
        X.freqs[0] = 0.0;
        for (double f : freqs) X.density[static_cast<std::size_t>(std::llround(f / df))] = 1.0;
        masp::LinearSpectrum Y = masp::hps(X, n);
        csv.row({"freq_hz", "y"});
        for (std::size_t i = 0; i < Y.freqs.size(); ++i)
            if (Y.density[i] > 0.0) csv.row({masp::csv_num(Y.freqs[i]), masp::csv_num(Y.density[i])});
    } else {
        throw std::invalid_argument("baseline: unknown model " + model);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MASP pitch estimation and consonance toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "render a test signal to WAV");
    std::string kind = "sawtooth", remove, custom, amps, synth_out;
    double f0 = 100.0, duration = 2.0, sample_rate = 44100.0, gl_start = -1.0, gl_end = 12.0;
    int n_partials = 16;
    synth->add_option("--kind", kind, "sawtooth|square|custom|glissando");
    synth->add_option("--f0", f0, "fundamental (or glissando base), Hz");
    synth->add_option("--partials", n_partials, "harmonic count for sawtooth/square");
    synth->add_option("--remove", remove, "harmonic numbers to remove, comma separated");
    synth->add_option("--partials-list", custom, "custom partial frequencies, comma separated");
    synth->add_option("--amps", amps, "custom partial power weights");
    synth->add_option("--duration", duration, "seconds");
    synth->add_option("--sample-rate", sample_rate, "Hz");
    synth->add_option("--gliss-start", gl_start, "glissando start offset, semitones");
    synth->add_option("--gliss-end", gl_end, "glissando end offset, semitones");
    synth->add_option("--out", synth_out, "output WAV path")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "pitch-track a WAV file");
    std::string an_in, an_out, an_matrix;
    GridFlags an_grid;
    double an_hop = 0.05, an_fs = 0.5, an_b = 0.5, an_voicing = -1.0;
    int an_n = 12;
    analyze->add_option("--in", an_in, "input WAV")->required();
    analyze->add_option("--out", an_out, "pitch track CSV")->required();
    analyze->add_option("--matrix", an_matrix, "optional pitch-spectrum matrix CSV");
    an_grid.attach(analyze);
    analyze->add_option("--hop", an_hop, "hop, seconds");
    analyze->add_option("--filter-scale", an_fs, "CQT window scale (smaller = wider bandwidth)");
    analyze->add_option("--n", an_n, "subharmonic factor count");
    analyze->add_option("--b", an_b, "smoothing exponent");
    analyze->add_option("--voicing-threshold", an_voicing, "frame energy floor");

    // intervals
    auto* intervals = app.add_subcommand("intervals", "H for the named interval set");
    std::string iv_out;
    LinearFlags iv_lin;
    double iv_base = 440.0, iv_sigma = 0.1, iv_b = 0.5;
    int iv_n = 32;
    intervals->add_option("--base", iv_base, "first tone, Hz");
    intervals->add_option("--sigma", iv_sigma, "tone width, semitones");
    intervals->add_option("--n", iv_n, "subharmonic factor count");
    intervals->add_option("--b", iv_b, "smoothing exponent");
    iv_lin.attach(intervals);
    intervals->add_option("--out", iv_out, "output CSV")->required();

    // chords
    auto* chords = app.add_subcommand("chords", "three-tone H table and grid");
    std::string ch_grid_out, ch_table_out;
    LinearFlags ch_lin;
    double ch_base = 440.0, ch_sigma = 0.1, ch_b = 0.5;
    double ch_xmin = 0.0, ch_xmax = 12.0, ch_ymin = 0.0, ch_ymax = 12.0, ch_step = 0.1;
    int ch_n = 48;
    chords->add_option("--base", ch_base, "root tone, Hz");
    chords->add_option("--sigma", ch_sigma, "tone width, semitones");
    chords->add_option("--n", ch_n, "subharmonic factor count");
    chords->add_option("--b", ch_b, "smoothing exponent");
    ch_lin.attach(chords);
    chords->add_option("--x-min", ch_xmin);
    chords->add_option("--x-max", ch_xmax);
    chords->add_option("--y-min", ch_ymin);
    chords->add_option("--y-max", ch_ymax);
    chords->add_option("--step", ch_step, "grid step, semitones");
    chords->add_option("--grid-out", ch_grid_out, "H(x,y) matrix CSV");
    chords->add_option("--table-out", ch_table_out, "named triad CSV");

    // hcurve
    auto* hcurve = app.add_subcommand("hcurve", "H curve over an interval sweep or glissando");
    std::string hc_out, hc_form = "ratio", hc_in;
    LinearFlags hc_lin;
    GridFlags hc_grid;
    bool hc_gliss = false;
    double hc_base = 440.0, hc_start = -1.0, hc_end = 12.0, hc_step = 0.05, hc_sigma = 0.1,
           hc_b = 0.5, hc_duration = 13.0, hc_hop = 0.05;
    int hc_n = 32;
    hcurve->add_option("--base", hc_base, "first tone, Hz");
    hcurve->add_option("--start", hc_start, "first offset, semitones");
    hcurve->add_option("--end", hc_end, "last offset, semitones");
    hcurve->add_option("--step", hc_step, "sweep step, semitones");
    hcurve->add_option("--sigma", hc_sigma, "tone width, semitones");
    hcurve->add_option("--n", hc_n, "subharmonic factor count");
    hcurve->add_option("--b", hc_b, "smoothing exponent");
    hcurve->add_flag("--glissando", hc_gliss, "time-track mode instead of sweep");
    hcurve->add_option("--form", hc_form, "h variant: ratio|shift");
    hcurve->add_option("--duration", hc_duration, "glissando length, seconds");
    hcurve->add_option("--hop", hc_hop, "glissando frame step, seconds");
    hcurve->add_option("--in", hc_in, "WAV input for a shift-form track of recorded audio");
    hc_lin.attach(hcurve);
    hc_grid.attach(hcurve);
    hcurve->add_option("--out", hc_out, "output CSV")->required();

    // baseline
    auto* baseline = app.add_subcommand("baseline", "reference pitch models");
    std::string bl_model, bl_freqs, bl_out;
    double bl_quantum = 1.0, bl_df = 25.0, bl_bin_width = 5.0;
    int bl_n = 5, bl_max_div = 10;
    baseline->add_option("--model", bl_model, "hps|gcd|spacing|lowest|histogram")->required();
    baseline->add_option("--freqs", bl_freqs, "partial frequencies, comma separated")->required();
    baseline->add_option("--quantum", bl_quantum, "gcd quantization, Hz");
    baseline->add_option("--n", bl_n, "hps harmonic count");
    baseline->add_option("--df", bl_df, "hps grid spacing, Hz");
    baseline->add_option("--max-divisor", bl_max_div, "histogram divisor depth");
    baseline->add_option("--bin-width", bl_bin_width, "histogram bin width, Hz");
    baseline->add_option("--out", bl_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
        if (*synth)
            return run_synth(kind, f0, n_partials, remove, custom, amps, duration, sample_rate,
                             gl_start, gl_end, synth_out);
        if (*analyze)
            return run_analyze(an_in, an_out, an_matrix, an_grid, an_hop, an_fs, an_n, an_b,
                               an_voicing);
        if (*intervals) return run_intervals(iv_base, iv_sigma, iv_n, iv_b, iv_lin, iv_out);
        if (*chords)
            return run_chords(ch_base, ch_sigma, ch_n, ch_b, ch_lin, ch_xmin, ch_xmax, ch_ymin,
                              ch_ymax, ch_step, ch_grid_out, ch_table_out);
        if (*hcurve)
            return run_hcurve(hc_base, hc_start, hc_end, hc_step, hc_sigma, hc_n, hc_b, hc_lin,
                              hc_grid, hc_gliss, hc_form, hc_duration, hc_hop, hc_in, hc_out);
        if (*baseline)
            return run_baseline(bl_model, bl_freqs, bl_quantum, bl_n, bl_df, bl_max_div,
                                bl_bin_width, bl_out);
        return 2;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const masp::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const masp::degenerate_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
