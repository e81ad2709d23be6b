#pragma once

#include "kickrot/circuit.hpp"

#include <json.hpp>

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace kickrot::io {

// 17 significant digits: round-trip exact for 64-bit floats.
std::string format_double(double x);

// All writers go through a temp file + rename, so readers never see a
// partially written artifact.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
void write_bytes_atomic(const std::filesystem::path& path, const void* data, std::size_t size);

struct CsvWriter {
    explicit CsvWriter(std::vector<std::string> columns);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);
    void save(const std::filesystem::path& path) const;

private:
    std::string body_;
    std::size_t n_cols_;
};

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);

// Wavefunction snapshot: interleaved (re, im) little-endian doubles plus a
// JSON sidecar next to it (same path with ".json" appended).
void write_wavefunction(const std::filesystem::path& path,
                        const std::vector<std::complex<double>>& amps,
                        const nlohmann::json& sidecar);
std::vector<std::complex<double>> read_wavefunction(const std::filesystem::path& path);

// Row-major float64 grid plus JSON sidecar.
void write_grid(const std::filesystem::path& path, const std::vector<double>& values,
                const nlohmann::json& sidecar);

nlohmann::json ledger_to_json(const circuit::GateLedger& ledger);

} // namespace kickrot::io
