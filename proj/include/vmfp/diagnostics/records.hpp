#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vmfp/diagnostics/diagnostics.hpp"

namespace vmfp {

/// Column order of records.csv.
const std::vector<std::string>& record_columns();

std::string format_record(const DiagnosticsRecord& r);

/// Append-only CSV writer; the header is written on open, rows use %.17g.
class RecordWriter {
public:
    explicit RecordWriter(const std::filesystem::path& path);
    void write(const DiagnosticsRecord& r);

private:
    std::ofstream out_;
};

std::vector<DiagnosticsRecord> read_records(const std::filesystem::path& path);

}  // namespace vmfp
