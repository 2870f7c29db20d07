#pragma once

// JSON chart documents:
//   {"type": "catalog", "name": "legendrian-clifford"}
//   {"type": "homogeneous-torus", "radii": [r1, r2, r3],
//    "freq": [[m1, n1], [m2, n2], [m3, n3]], "phases": [p1, p2, p3]}
// "phases" is optional.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "s5frames/catalog.hpp"

namespace s5frames {

/// Malformed chart document; the message names the offending line or field.
class ChartSpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <std::size_t N>
std::array<double, N> number_array(const nlohmann::json& doc, const char* field) {
    const auto it = doc.find(field);
    if (it == doc.end()) throw ChartSpecError(std::string("field '") + field + "': missing");
    if (!it->is_array() || it->size() != N)
        throw ChartSpecError(std::string("field '") + field + "': expected an array of " + std::to_string(N) +
                             " numbers");
    std::array<double, N> out{};
    for (std::size_t k = 0; k < N; ++k) {
        if (!(*it)[k].is_number())
            throw ChartSpecError(std::string("field '") + field + "[" + std::to_string(k) + "]': not a number");
        out[k] = (*it)[k].get<double>();
    }
    return out;
}

} // namespace detail

inline ChartSpec chart_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ChartSpecError("chart document must be a JSON object");
    const auto type = doc.find("type");
    if (type == doc.end() || !type->is_string()) throw ChartSpecError("field 'type': missing or not a string");

    if (*type == "catalog") {
        const auto name = doc.find("name");
        if (name == doc.end() || !name->is_string()) throw ChartSpecError("field 'name': missing or not a string");
        try {
            return chart_by_name(name->get<std::string>());
        } catch (const GeometryError& e) {
            throw ChartSpecError(std::string("field 'name': ") + e.what());
        }
    }
    if (*type == "homogeneous-torus") {
        const auto radii = detail::number_array<3>(doc, "radii");
        std::array<double, 3> phases{};
        if (doc.contains("phases")) phases = detail::number_array<3>(doc, "phases");
        const auto freq = doc.find("freq");
        if (freq == doc.end() || !freq->is_array() || freq->size() != 3)
            throw ChartSpecError("field 'freq': expected three [m, n] integer pairs");
        FrequencySet f{};
        for (std::size_t j = 0; j < 3; ++j) {
            const auto& pair = (*freq)[j];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
                throw ChartSpecError("field 'freq[" + std::to_string(j) + "]': expected an integer pair");
            f[j] = {pair[0].get<int>(), pair[1].get<int>()};
        }
        try {
            return build_torus(make_torus_spec(radii, f, phases));
        } catch (const GeometryError& e) {
            throw ChartSpecError(std::string("field 'radii'/'freq': ") + e.what());
        }
    }
    throw ChartSpecError("field 'type': unknown chart type '" + type->get<std::string>() + "'");
}

inline ChartSpec load_chart_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ChartSpecError("cannot open chart file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ChartSpecError(path.string() + ": " + detail::line_col(text, e.byte) + ": invalid JSON");
    }
    try {
        return chart_from_json(doc);
    } catch (const ChartSpecError& e) {
        throw ChartSpecError(path.string() + ": " + e.what());
    }
}

} // namespace s5frames
