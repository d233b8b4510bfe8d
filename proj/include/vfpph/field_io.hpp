#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vfpph/error.hpp"
#include "vfpph/field.hpp"

namespace vfpph {

enum class FieldFormat { Csv, Json };

namespace io_detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
        if (k == s.size() || s[k] == sep) {
            out.push_back(trim(s.substr(start, k - start)));
            start = k + 1;
        }
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end && !s.empty();
}

} // namespace io_detail

/// Formats a double with 17 significant digits, which round-trips exactly.
inline std::string format_real(double v, int digits = 17) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline FieldFormat format_from_name(std::string_view name) {
    if (name == "csv" || name == "CSV") return FieldFormat::Csv;
    if (name == "json" || name == "JSON") return FieldFormat::Json;
    throw FormatError("unsupported format '" + std::string(name) + "'");
}

/// Picks the format from a file extension.
inline FieldFormat format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) throw FormatError("cannot infer format of '" + path + "'");
    return format_from_name(path.substr(dot + 1));
}

// ---------------------------------------------------------------------------
// CSV: header `m=<int>,n=<int>,eps=<float>,x0=<float>,y0=<float>` then one
// `i,j,u,v` row per grid point.

inline GridField read_field_csv(std::istream& in) {
    using namespace io_detail;
    std::string line;
    std::size_t lineno = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!trim(line).empty()) return true;
        }
        return false;
    };

    if (!next_line()) throw ParseError(1, "missing header");
    std::map<std::string, std::string_view, std::less<>> kv;
    for (auto item : split(trim(line), ',')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError(lineno, "header item without '=': " + std::string(item));
        kv.emplace(std::string(trim(item.substr(0, eq))), trim(item.substr(eq + 1)));
    }

    GridSpec spec;
    auto need = [&](const char* key, auto& out) {
        auto it = kv.find(key);
        if (it == kv.end()) throw ParseError(lineno, std::string("header lacks '") + key + "'");
        if (!parse_number(it->second, out)) throw ParseError(lineno, std::string("bad header value for '") + key + "'");
        kv.erase(it);
    };
    need("m", spec.cols);
    need("n", spec.rows);
    need("eps", spec.eps);
    need("x0", spec.x0);
    need("y0", spec.y0);
    for (const char* key : {"epsx", "epsy"}) {
        auto it = kv.find(key);
        if (it == kv.end()) continue;
        double e = 0.0;
        if (!parse_number(it->second, e)) throw ParseError(lineno, std::string("bad header value for '") + key + "'");
        if (e != spec.eps) throw GridError("non-square grid spacing is not supported");
        kv.erase(it);
    }
    if (!kv.empty()) throw ParseError(lineno, "unknown header key '" + kv.begin()->first + "'");
    spec.check();

    GridField field{spec, std::vector<Vec2>(spec.num_points())};
    std::vector<bool> seen(spec.num_points(), false);
    std::size_t count = 0;
    while (next_line()) {
        const auto cells = split(trim(line), ',');
        if (cells.size() != 4) throw ParseError(lineno, "expected 4 columns i,j,u,v");
        GridPoint p;
        Vec2 v;
        if (!parse_number(cells[0], p.i) || !parse_number(cells[1], p.j))
            throw ParseError(lineno, "grid indices must be integers");
        if (!parse_number(cells[2], v.x) || !parse_number(cells[3], v.y))
            throw ParseError(lineno, "vector components must be decimal numbers");
        if (!spec.contains(p))
            throw GridError("line " + std::to_string(lineno) + ": point (" + std::to_string(p.i) + ", " +
                            std::to_string(p.j) + ") outside the declared grid");
        const auto k = spec.index(p);
        if (seen[k])
            throw GridError("line " + std::to_string(lineno) + ": duplicate point (" + std::to_string(p.i) + ", " +
                            std::to_string(p.j) + ")");
        seen[k] = true;
        field.vectors[k] = v;
        ++count;
    }
    if (count != spec.num_points())
        throw GridError("declared " + std::to_string(spec.cols) + "x" + std::to_string(spec.rows) + " grid but read " +
                        std::to_string(count) + " points");
    return field;
}

inline void write_field_csv(const GridField& field, std::ostream& out) {
    field.check();
    const auto& s = field.spec;
    out << "m=" << s.cols << ",n=" << s.rows << ",eps=" << format_real(s.eps) << ",x0=" << format_real(s.x0)
        << ",y0=" << format_real(s.y0) << '\n';
    for (int j = 0; j < s.rows; ++j)
        for (int i = 0; i < s.cols; ++i) {
            const Vec2 v = field.at(i, j);
            out << i << ',' << j << ',' << format_real(v.x) << ',' << format_real(v.y) << '\n';
        }
}

// ---------------------------------------------------------------------------
// JSON: {"spec": {m, n, eps, x0, y0}, "vectors": [[u, v], ...]} row-major.

inline nlohmann::json spec_to_json(const GridSpec& s) {
    return {{"m", s.cols}, {"n", s.rows}, {"eps", s.eps}, {"x0", s.x0}, {"y0", s.y0}};
}

inline GridSpec spec_from_json(const nlohmann::json& j) {
    GridSpec s;
    try {
        s.cols = j.at("m").get<int>();
        s.rows = j.at("n").get<int>();
        s.eps = j.at("eps").get<double>();
        s.x0 = j.at("x0").get<double>();
        s.y0 = j.at("y0").get<double>();
        for (const char* key : {"epsx", "epsy"})
            if (j.contains(key) && j.at(key).get<double>() != s.eps)
                throw GridError("non-square grid spacing is not supported");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("bad grid spec: ") + e.what());
    }
    s.check();
    return s;
}

inline nlohmann::json field_to_json(const GridField& field) {
    field.check();
    nlohmann::json vecs = nlohmann::json::array();
    for (const auto& v : field.vectors) vecs.push_back({v.x, v.y});
    return {{"spec", spec_to_json(field.spec)}, {"vectors", std::move(vecs)}};
}

inline GridField field_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("spec") || !j.contains("vectors"))
        throw ParseError(1, "field JSON needs 'spec' and 'vectors'");
    GridField field{spec_from_json(j.at("spec")), {}};
    const auto& vecs = j.at("vectors");
    if (!vecs.is_array()) throw ParseError(1, "'vectors' must be an array");
    field.vectors.reserve(vecs.size());
    try {
        for (const auto& v : vecs) {
            if (!v.is_array() || v.size() != 2) throw ParseError(1, "each vector must be a [u, v] pair");
            field.vectors.push_back({v[0].get<double>(), v[1].get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("bad vector entry: ") + e.what());
    }
    field.check();
    return field;
}

inline nlohmann::json parse_json(std::istream& in) {
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(1, std::string("invalid JSON: ") + e.what());
    }
}

inline GridField read_field(std::istream& in, FieldFormat format) {
    if (format == FieldFormat::Csv) return read_field_csv(in);
    return field_from_json(parse_json(in));
}

inline void write_field(const GridField& field, std::ostream& out, FieldFormat format) {
    if (format == FieldFormat::Csv)
        write_field_csv(field, out);
    else
        out << field_to_json(field).dump(1) << '\n';
}

inline GridField load_field(const std::string& path, FieldFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_field(in, format);
}

inline GridField load_field(const std::string& path) { return load_field(path, format_from_path(path)); }

inline void store_field(const GridField& field, const std::string& path, FieldFormat format) {
    field.check();
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_field(field, out, format);
    if (!out) throw IoError("write to '" + path + "' failed");
}

/// Format given by name, e.g. "csv"; unknown names raise FormatError.
inline void store_field(const GridField& field, const std::string& path, std::string_view format) {
    store_field(field, path, format_from_name(format));
}

} // namespace vfpph
