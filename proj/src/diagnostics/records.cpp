#include "vmfp/diagnostics/records.hpp"

#include <cstdio>
#include <sstream>

#include "vmfp/core/errors.hpp"

namespace vmfp {

namespace {

constexpr double DiagnosticsRecord::*kFields[] = {
    &DiagnosticsRecord::t,
    &DiagnosticsRecord::eps,
    &DiagnosticsRecord::mass,
    &DiagnosticsRecord::kinetic_energy,
    &DiagnosticsRecord::field_energy,
    &DiagnosticsRecord::free_energy,
    &DiagnosticsRecord::entropy_dissipation,
    &DiagnosticsRecord::modulated_energy,
    &DiagnosticsRecord::kinetic_relative_entropy,
    &DiagnosticsRecord::l1_distance,
    &DiagnosticsRecord::gauss_residual,
    &DiagnosticsRecord::flux_equivalence_residual,
};

}  // namespace

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "t", "eps", "mass", "kinetic_energy", "field_energy", "free_energy",
        "entropy_dissipation", "modulated_energy", "kinetic_relative_entropy",
        "l1_distance", "gauss_residual", "flux_equivalence_residual"};
    return cols;
}

std::string format_record(const DiagnosticsRecord& r) {
    std::string line;
    char buf[40];
    for (std::size_t k = 0; k < std::size(kFields); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", r.*kFields[k]);
        if (k) line += ',';
        line += buf;
    }
    return line;
}

RecordWriter::RecordWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw StateError("cannot open " + path.string());
    const auto& cols = record_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) out_ << (k ? "," : "") << cols[k];
    out_ << '\n';
}

void RecordWriter::write(const DiagnosticsRecord& r) {
    out_ << format_record(r) << '\n';
    out_.flush();
}

std::vector<DiagnosticsRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StateError("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    std::vector<DiagnosticsRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        DiagnosticsRecord r;
        std::size_t k = 0;
        while (std::getline(ss, cell, ',')) {
            if (k >= std::size(kFields))
                throw StateError(path.string() + ":" + std::to_string(lineno) + ": too many columns");
            r.*kFields[k++] = std::stod(cell);
        }
        if (k != std::size(kFields))
            throw StateError(path.string() + ":" + std::to_string(lineno) + ": too few columns");
        out.push_back(r);
    }
    return out;
}

}  // namespace vmfp
