#pragma once

// Output formatting: every artifact starts with a provenance comment block
// (resolved config, version, timestamp) and numeric columns are written with
// full round-trip precision so downstream diffs can use exact tolerances.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <string>

#include "rindler/errors.hpp"
#include "rindler/version.hpp"

namespace rindler {

// 17 significant digits: enough to round-trip any double.
inline std::string format_full(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

// Opens an output file and writes the provenance block. Rerunning with the
// echoed config reproduces identical numeric (non-'#') lines.
inline std::ofstream open_artifact(const std::string& path, const std::string& mode,
                                   const std::map<std::string, std::string>& resolved_config) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    out << "# rindler-sim " << kVersion << "\n";
    out << "# timestamp: " << utc_timestamp() << "\n";
    out << "# mode: " << mode << "\n";
    out << "# config:\n";
    for (const auto& [key, value] : resolved_config) out << "#   " << key << " = " << value << "\n";
    return out;
}

} // namespace rindler
