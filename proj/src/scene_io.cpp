#include "frdw/scene_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace frdw {

namespace {

using nlohmann::json;

json polygon_json(const Polygon& p) {
    json arr = json::array();
    for (const Vec2& v : p.vertices()) arr.push_back({v.x, v.y});
    return arr;
}

Polygon polygon_from(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw std::runtime_error(where + ": expected an array of [x, y] points");
    std::vector<Vec2> pts;
    for (const auto& pt : arr) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
            throw std::runtime_error(where + ": each point must be [x, y]");
        pts.push_back(Vec2::make(pt[0].get<double>(), pt[1].get<double>()));
    }
    return Polygon(std::move(pts));
}

}  // namespace

std::string scene_to_string(const SpaceMap& space) {
    json j;
    j["frame"] = std::string(to_string(space.kind()));
    j["boundary"] = polygon_json(space.boundary());
    j["obstacles"] = json::array();
    for (const auto& o : space.obstacles()) j["obstacles"].push_back(polygon_json(o));
    return j.dump(2) + "\n";
}

SpaceMap scene_from_string(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("scene: ") + e.what());
    }
    if (!j.is_object() || !j.contains("frame") || !j.contains("boundary"))
        throw std::runtime_error("scene: requires keys 'frame' and 'boundary'");
    const SpaceKind kind = space_kind_from_string(j.at("frame").get<std::string>());
    Polygon boundary = polygon_from(j.at("boundary"), "scene.boundary");
    std::vector<Polygon> obstacles;
    if (j.contains("obstacles")) {
        const auto& arr = j.at("obstacles");
        if (!arr.is_array()) throw std::runtime_error("scene.obstacles: expected an array of polygons");
        for (std::size_t i = 0; i < arr.size(); ++i)
            obstacles.push_back(polygon_from(arr[i], "scene.obstacles[" + std::to_string(i) + "]"));
    }
    return {std::move(boundary), std::move(obstacles), kind};
}

void write_scene_file(const std::filesystem::path& path, const SpaceMap& space) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << scene_to_string(space);
}

SpaceMap read_scene_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return scene_from_string(ss.str());
}

}  // namespace frdw
