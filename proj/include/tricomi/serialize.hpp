#pragma once

// Field snapshot format: magic, little-endian u64 header length, JSON header
// (grid metadata + time stamps), then raw interleaved re/im doubles, one
// space block per time slice.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "tricomi/grid.hpp"

namespace tricomi {

inline constexpr char kFieldMagic[8] = {'T', 'R', 'I', 'C', 'O', 'M', 'I', '1'};

inline void save_field(const std::string& path, const SpaceTimeField& field,
                       const nlohmann::json& extra = {}) {
    const Grid& g = *field.grid;
    nlohmann::json header;
    header["dim"] = g.dim;
    header["points"] = g.points;
    header["extent"] = g.extent;
    header["times"] = g.times;
    header["slices"] = field.slices.size();
    if (!extra.is_null() && !extra.empty()) header["extra"] = extra;
    std::string htext = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_field: cannot open " + path);
    out.write(kFieldMagic, 8);
    std::uint64_t hlen = htext.size();
    out.write(reinterpret_cast<const char*>(&hlen), 8);
    out.write(htext.data(), htext.size());
    for (const auto& slice : field.slices) {
        out.write(reinterpret_cast<const char*>(slice.coeffs.data()),
                  static_cast<std::streamsize>(slice.coeffs.size() * sizeof(cplx)));
    }
    if (!out) throw std::runtime_error("save_field: write failed for " + path);
}

// The grid object must outlive the returned field.
inline SpaceTimeField load_field(const std::string& path, Grid& grid_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, kFieldMagic, 8) != 0)
        throw std::runtime_error("load_field: bad magic in " + path);
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), 8);
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    auto header = nlohmann::json::parse(htext);

    grid_out.dim = header.at("dim").get<int>();
    grid_out.points = header.at("points").get<int>();
    grid_out.extent = header.at("extent").get<double>();
    grid_out.times = header.at("times").get<std::vector<double>>();
    grid_out.validate();

    SpaceTimeField field(grid_out);
    std::size_t slices = header.at("slices").get<std::size_t>();
    if (slices != field.slices.size()) throw std::runtime_error("load_field: slice count mismatch");
    for (auto& slice : field.slices) {
        in.read(reinterpret_cast<char*>(slice.coeffs.data()),
                static_cast<std::streamsize>(slice.coeffs.size() * sizeof(cplx)));
    }
    if (!in) throw std::runtime_error("load_field: truncated file " + path);
    return field;
}

} // namespace tricomi
