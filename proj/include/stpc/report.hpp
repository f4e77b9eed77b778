#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stpc/version.hpp"

namespace stpc {

// Machine-parseable run report. nlohmann's ordered std::map keeps keys in
// canonical (sorted) order, so identical inputs emit identical bytes and
// parse -> dump is a fixed point. Wall-clock timing never enters the report
// body (it would break byte-identity across runs); the CLI prints it to
// stderr instead.
struct Report {
    nlohmann::json config;
    nlohmann::json results;
};

inline nlohmann::json report_json(const Report& r) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["tool"]["name"] = kToolName;
    j["tool"]["version"] = kToolVersion;
    j["config"] = r.config;
    j["results"] = r.results;
    return j;
}

inline std::string emit_json(const Report& r) { return report_json(r).dump(2) + "\n"; }

namespace detail {

inline std::string csv_escape(const nlohmann::json& v) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        bool quote = s.find_first_of(",\"\n") != std::string::npos;
        if (!quote) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += "\"\"";
            else out.push_back(c);
        }
        return out + "\"";
    }
    return v.dump();
}

} // namespace detail

// CSV layout: a `# key,value` preamble echoing the flattened config, then
// either the results table (when results.table is an array of flat objects;
// columns in sorted key order) or flattened key,value rows.
inline std::string emit_csv(const Report& r) {
    std::ostringstream os;
    const nlohmann::json j = report_json(r);
    os << "# schema," << j["schema"].get<std::string>() << "\n";
    os << "# tool," << j["tool"]["name"].get<std::string>() << " "
       << j["tool"]["version"].get<std::string>() << "\n";
    const nlohmann::json flat_config = j["config"].flatten();
    for (auto& [key, val] : flat_config.items())
        os << "# config" << key << "," << detail::csv_escape(val) << "\n";
    const auto& res = j["results"];
    if (res.contains("table") && res["table"].is_array() && !res["table"].empty()) {
        const auto& first = res["table"][0];
        std::vector<std::string> cols;
        for (auto& [key, val] : first.items()) cols.push_back(key);
        for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << "\n";
        for (const auto& row : res["table"]) {
            for (size_t i = 0; i < cols.size(); ++i)
                os << (i ? "," : "") << detail::csv_escape(row.value(cols[i], nlohmann::json()));
            os << "\n";
        }
        for (auto& [key, val] : res.items())
            if (key != "table") os << key << "," << detail::csv_escape(val) << "\n";
    } else {
        os << "key,value\n";
        const nlohmann::json flat = res.flatten();
        for (auto& [key, val] : flat.items())
            os << key << "," << detail::csv_escape(val) << "\n";
    }
    return os.str();
}

} // namespace stpc
