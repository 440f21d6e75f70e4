#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "deltanls/core.hpp"
#include "deltanls/errors.hpp"
#include "deltanls/phase.hpp"

namespace deltanls::io {

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_profile_csv(std::ostream& out, const GridFunction& u) {
    out << "x,u\n";
    for (std::size_t i = 0; i < u.size(); ++i) out << format_double(u.grid().node(i)) << ',' << format_double(u[i]) << '\n';
}

inline void write_phase_csv(std::ostream& out, const std::vector<PhaseRow>& rows) {
    out << "mu,verdict,infimum,critical_mass\n";
    for (const auto& r : rows) {
        out << format_double(r.mu) << ',' << to_string(r.regime.verdict) << ',' << to_string(r.regime.infimum) << ',';
        if (r.regime.critical_mass) out << format_double(*r.regime.critical_mass);
        out << '\n';
    }
}

inline nlohmann::json phase_json(const std::vector<PhaseRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"mu", r.mu},
                           {"verdict", std::string(to_string(r.regime.verdict))},
                           {"infimum", std::string(to_string(r.regime.infimum))}};
        row["critical_mass"] = r.regime.critical_mass ? nlohmann::json(*r.regime.critical_mass) : nlohmann::json(nullptr);
        arr.push_back(std::move(row));
    }
    return arr;
}

inline nlohmann::json profile_json(const GridFunction& u) {
    return {{"half_width", u.grid().half_width()},
            {"count", u.grid().count()},
            {"x", u.grid().nodes()},
            {"u", std::vector<double>(u.values().begin(), u.values().end())}};
}

/// Opens path for writing, creating parent directories.
inline std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path.string());
    return out;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
}

/// path with its extension replaced by .json (appended when there is none).
inline std::filesystem::path sidecar_path(std::filesystem::path path) { return path.replace_extension(".json"); }

}  // namespace deltanls::io
