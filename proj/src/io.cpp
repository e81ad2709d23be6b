#include "kickrot/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kickrot::io {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_bytes_atomic(const std::filesystem::path& path, const void* data, std::size_t size) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out) throw std::runtime_error("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    write_bytes_atomic(path, content.data(), content.size());
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : n_cols_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) body_ += ',';
        body_ += columns[i];
    }
    body_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_cols_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) body_ += ',';
        body_ += format_double(values[i]);
    }
    body_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

void CsvWriter::save(const std::filesystem::path& path) const { write_text_atomic(path, body_); }

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

void write_wavefunction(const std::filesystem::path& path,
                        const std::vector<std::complex<double>>& amps,
                        const nlohmann::json& sidecar) {
    static_assert(sizeof(std::complex<double>) == 2 * sizeof(double));
    write_bytes_atomic(path, amps.data(), amps.size() * sizeof(std::complex<double>));
    write_json_atomic(path.string() + ".json", sidecar);
}

std::vector<std::complex<double>> read_wavefunction(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    in.seekg(0, std::ios::end);
    const std::streamoff bytes = in.tellg();
    in.seekg(0);
    if (bytes % sizeof(std::complex<double>) != 0)
        throw std::runtime_error("truncated wavefunction file: " + path.string());
    std::vector<std::complex<double>> amps(static_cast<std::size_t>(bytes) /
                                           sizeof(std::complex<double>));
    in.read(reinterpret_cast<char*>(amps.data()), bytes);
    if (!in) throw std::runtime_error("short read: " + path.string());
    return amps;
}

void write_grid(const std::filesystem::path& path, const std::vector<double>& values,
                const nlohmann::json& sidecar) {
    write_bytes_atomic(path, values.data(), values.size() * sizeof(double));
    write_json_atomic(path.string() + ".json", sidecar);
}

nlohmann::json ledger_to_json(const circuit::GateLedger& ledger) {
    nlohmann::json steps = nlohmann::json::object();
    for (const auto& [name, c] : ledger.steps()) {
        steps[name] = {{"one_qubit", c.one_qubit},
                       {"two_qubit", c.two_qubit},
                       {"arithmetic_blocks", c.arithmetic_blocks},
                       {"elementary_estimate", c.elementary_estimate}};
    }
    const auto t = ledger.total();
    return {{"steps", steps},
            {"total",
             {{"one_qubit", t.one_qubit},
              {"two_qubit", t.two_qubit},
              {"arithmetic_blocks", t.arithmetic_blocks},
              {"elementary_estimate", t.elementary_estimate}}}};
}

} // namespace kickrot::io
