#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "masp/wav.hpp"

namespace {

std::string cli() { return MASP_CLI_PATH; }

int run(const std::string& args) {
    std::string cmd = cli() + " " + args + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

// most frequent voiced f0 in an analyze CSV
double modal_f0(const std::string& path) {
    auto rows = read_csv(path);
    std::vector<double> f0s;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].size() == 4 && rows[i][3] == "true") f0s.push_back(std::stod(rows[i][1]));
    REQUIRE(!f0s.empty());
    double best = f0s[0];
    int best_count = 0;
    for (double v : f0s) {
        int c = 0;
        for (double w : f0s)
            if (w == v) ++c;
        if (c > best_count) {
            best_count = c;
            best = v;
        }
    }
    return best;
}

} // namespace

TEST_CASE("synth then analyze recovers a missing fundamental") {
    REQUIRE(run("synth --kind sawtooth --f0 100 --remove 1,2 --duration 0.8 --out /tmp/cli_saw.wav") == 0);
    REQUIRE(run("analyze --in /tmp/cli_saw.wav --out /tmp/cli_saw.csv") == 0);
    double f0 = modal_f0("/tmp/cli_saw.csv");
    CHECK(std::abs(12.0 * std::log2(f0 / 100.0)) <= 0.25 + 1e-9);
}

TEST_CASE("round trip across the pitch range") {
    for (double f0 : {65.41, 220.0, 440.0, 987.77}) {
        std::ostringstream synth;
        synth << "synth --kind sawtooth --f0 " << f0
              << " --partials 8 --duration 0.8 --out /tmp/cli_rt.wav";
        REQUIRE(run(synth.str()) == 0);
        REQUIRE(run("analyze --in /tmp/cli_rt.wav --out /tmp/cli_rt.csv") == 0);
        CHECK(std::abs(12.0 * std::log2(modal_f0("/tmp/cli_rt.csv") / f0)) <= 0.25 + 1e-9);
    }
}

TEST_CASE("silence analyzes as unvoiced") {
    masp::write_wav("/tmp/cli_silence.wav", std::vector<double>(22050, 0.0), 44100.0);
    REQUIRE(run("analyze --in /tmp/cli_silence.wav --out /tmp/cli_silence.csv") == 0);
    auto rows = read_csv("/tmp/cli_silence.csv");
    REQUIRE(rows.size() > 1);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][3] == "false");
}

TEST_CASE("interval table is deterministic and shaped right") {
    REQUIRE(run("intervals --out /tmp/cli_iv1.csv") == 0);
    REQUIRE(run("intervals --out /tmp/cli_iv2.csv") == 0);
    CHECK(slurp("/tmp/cli_iv1.csv") == slurp("/tmp/cli_iv2.csv"));
    auto rows = read_csv("/tmp/cli_iv1.csv");
    REQUIRE(rows.size() == 23); // header + 22 interval rows
    CHECK(rows[0] == std::vector<std::string>{"name", "steps_or_ratio", "h"});
}

TEST_CASE("baseline models") {
    REQUIRE(run("baseline --model gcd --freqs 930,1770,2730,3570,4530,5370 --out /tmp/cli_gcd.csv") == 0);
    auto rows = read_csv("/tmp/cli_gcd.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][1] == "30");
}

TEST_CASE("matrix output carries bin centers in its header") {
    masp::write_wav("/tmp/cli_tone.wav",
                    std::vector<double>(8820, 0.1), 44100.0); // DC-ish stub, still analyzable
    REQUIRE(run("analyze --in /tmp/cli_tone.wav --out /tmp/cli_tone.csv "
                "--matrix /tmp/cli_tone_matrix.csv") == 0);
    auto rows = read_csv("/tmp/cli_tone_matrix.csv");
    REQUIRE(!rows.empty());
    CHECK(rows[0].size() == 1 + 384);
    CHECK(rows[0][0] == "time_s");
    CHECK(rows[0][1] == "32.703");
}

TEST_CASE("exit codes") {
    CHECK(run("synth --kind sawtooth --f0 100 --duration 0 --out /tmp/cli_bad.wav") == 2);
    CHECK(run("analyze --in /tmp/does_not_exist.wav --out /tmp/cli_bad.csv") == 3);
    CHECK(run("baseline --model nosuch --freqs 100 --out /tmp/cli_bad.csv") == 2);
}
