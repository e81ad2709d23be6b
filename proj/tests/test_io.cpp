#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kickrot/gs_circuit.hpp"
#include "kickrot/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace kickrot;
namespace fs = std::filesystem;

namespace {
fs::path temp_dir() {
    auto d = fs::temp_directory_path() / "kickrot_io_test";
    fs::create_directories(d);
    return d;
}
} // namespace

TEST_CASE("doubles survive the 17-digit round trip") {
    for (double x : {1.0 / 3.0, 12.345678901234567, -0x1.fffffffffffffp1023, 5e-324, 0.1}) {
        const std::string s = io::format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("csv writer: header, rows, atomic save") {
    const auto dir = temp_dir();
    io::CsvWriter w({"t", "mean_n", "var_n"});
    w.row({0.0, 0.5, 0.25});
    w.row({1.0, 1.0 / 3.0, 2.0});
    const auto path = dir / "series.csv";
    w.save(path);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,mean_n,var_n");
    std::getline(in, line);
    CHECK(line == "0,0.5,0.25");
    CHECK(!fs::exists(path.string() + ".tmp"));
    CHECK_THROWS_AS(w.row({1.0}), std::invalid_argument);
}

TEST_CASE("wavefunction binary round trip with sidecar") {
    const auto dir = temp_dir();
    std::vector<std::complex<double>> amps{{0.6, 0.0}, {0.0, 0.8}};
    const auto path = dir / "psi.bin";
    io::write_wavefunction(path, amps, {{"N", 2}, {"k", 5.0}, {"T", 0.5}, {"t", 7}});
    const auto back = io::read_wavefunction(path);
    REQUIRE(back.size() == amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) CHECK(back[i] == amps[i]);

    std::ifstream sc(path.string() + ".json");
    REQUIRE(sc.good());
    nlohmann::json j;
    sc >> j;
    CHECK(j["N"] == 2);
    CHECK(j["k"] == 5.0);
}

TEST_CASE("ledger export carries per-step counters") {
    gs::AlgorithmConfig cfg;
    cfg.n_q = 4;
    cfg.p = 8;
    cfg.k = 5.0;
    cfg.T = 0.5;
    auto s = gs::prepare_initial(cfg, circuit::Representation::CorrelatedAncilla, cfg.N() / 2);
    gs::kick_cycle(s, cfg);
    const auto j = io::ledger_to_json(s.ledger());
    CHECK(j["steps"]["step_V"]["one_qubit"] == cfg.p);
    CHECK(j["steps"]["step_II"]["two_qubit"] == cfg.n_q * (cfg.n_q - 1) / 2);
    CHECK(j["total"]["arithmetic_blocks"] == 2 * cfg.n_q);
    CHECK(j["steps"]["step_IV"]["elementary_estimate"] ==
          cfg.n_q * (4 * cfg.p * cfg.p + 2 * cfg.p) + 1);
}
