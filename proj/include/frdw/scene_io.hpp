#pragma once
// Human-readable scene files (JSON):
//
//   {
//     "frame": "physical" | "virtual",
//     "boundary": [[x, y], ...],
//     "obstacles": [ [[x, y], ...], ... ]
//   }
//
// Coordinates are meters. Polygons may be given in either winding; they are
// stored counter-clockwise. Doubles are written with round-trip precision.

#include <filesystem>
#include <string>
#include <string_view>

#include "frdw/space_map.hpp"

namespace frdw {

std::string scene_to_string(const SpaceMap& space);
/// Throws std::runtime_error on malformed input, GeometryError on invalid geometry.
SpaceMap scene_from_string(std::string_view text);

void write_scene_file(const std::filesystem::path& path, const SpaceMap& space);
SpaceMap read_scene_file(const std::filesystem::path& path);

}  // namespace frdw
