#pragma once

/// Kymograph persistence. Two equivalent encodings:
///   - plain text: header `L=<m> T=<s> ns=<int> fps=<float>`, then nt rows
///     of ns space-separated intensities
///   - JSON: {"format":"punch-kymograph","version":1,...} for tooling
/// Both round-trip bit-exactly (17 significant digits).

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "punch/grid.hpp"

namespace punch {

inline std::string kymo_to_text(const Kymograph& k) {
    k.validate();
    std::ostringstream os;
    os << "L=" << format_g17(k.grid.L) << " T=" << format_g17(k.grid.T)
       << " ns=" << k.grid.ns() << " fps=" << format_g17(k.grid.fps) << "\n";
    for (const auto& row : k.intensity) {
        for (int i = 0; i < static_cast<int>(row.size()); ++i) {
            if (i) os << ' ';
            os << format_g17(row[i]);
        }
        os << "\n";
    }
    return os.str();
}

inline Kymograph kymo_from_text(const std::string& text, const std::string& origin = "<string>") {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw DataError(origin + ": empty kymograph file");

    double L = 0, T = 0, fps = 0;
    int ns = 0;
    if (std::sscanf(header.c_str(), "L=%lf T=%lf ns=%d fps=%lf", &L, &T, &ns, &fps) != 4)
        throw DataError(origin + ": malformed kymograph header: " + header);

    Kymograph k;
    k.grid = build_grid(L, T, ns, fps);
    k.intensity.reserve(k.grid.nt());
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> row;
        row.reserve(ns);
        double v;
        while (ls >> v) row.push_back(v);
        if (static_cast<int>(row.size()) != ns)
            throw DataError(origin + ": row has " + std::to_string(row.size()) +
                            " values, expected " + std::to_string(ns));
        k.intensity.push_back(std::move(row));
    }
    if (static_cast<int>(k.intensity.size()) != k.grid.nt())
        throw DataError(origin + ": found " + std::to_string(k.intensity.size()) +
                        " rows, header implies " + std::to_string(k.grid.nt()));
    return k;
}

inline nlohmann::json kymo_to_json(const Kymograph& k) {
    k.validate();
    nlohmann::json j;
    j["format"] = "punch-kymograph";
    j["version"] = 1;
    j["L"] = k.grid.L;
    j["T"] = k.grid.T;
    j["ns"] = k.grid.ns();
    j["fps"] = k.grid.fps;
    j["intensity"] = k.intensity;
    return j;
}

inline Kymograph kymo_from_json(const nlohmann::json& j, const std::string& origin = "<json>") {
    if (!j.is_object() || j.value("format", "") != "punch-kymograph")
        throw DataError(origin + ": not a punch-kymograph document");
    Kymograph k;
    k.grid = build_grid(j.at("L").get<double>(), j.at("T").get<double>(),
                        j.at("ns").get<int>(), j.at("fps").get<double>());
    k.intensity = j.at("intensity").get<std::vector<std::vector<double>>>();
    k.validate();
    return k;
}

/// Save by extension: ".json" selects the JSON encoding, anything else text.
inline void save_kymograph(const Kymograph& k, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        os << kymo_to_json(k).dump();
    else
        os << kymo_to_text(k);
    if (!os) throw IoError("write failed: " + path);
}

inline Kymograph load_kymograph(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    // Sniff the encoding: JSON documents open with '{'.
    for (char c : text) {
        if (c == ' ' || c == '\n' || c == '\t' || c == '\r') continue;
        if (c == '{') {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
                throw DataError(path + ": JSON parse error: " + e.what());
            }
            return kymo_from_json(j, path);
        }
        break;
    }
    return kymo_from_text(text, path);
}

}  // namespace punch
