#include "capsynth/scene.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace capsynth {

using geom::Mat3;
using geom::RigidTransform;
using geom::Vec3;
using nlohmann::json;
using sensor::PrimitiveKind;
using sensor::ScenePrimitive;

namespace {

Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected [x,y,z] array");
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

RigidTransform pose_from(const json& j) {
    RigidTransform t;
    if (j.contains("rotation")) {
        const auto& r = j.at("rotation");
        if (!r.is_array() || r.size() != 9)
            throw std::runtime_error("pose rotation must be 9 numbers, row-major");
        for (int i = 0; i < 9; ++i) t.rotation.m[static_cast<size_t>(i)] = r.at(i).get<double>();
    }
    if (j.contains("translation")) t.translation = vec3_from(j.at("translation"));
    if (!t.is_orthonormal())
        throw std::runtime_error("pose rotation is not orthonormal with det +1");
    return t;
}

json pose_to(const RigidTransform& t) {
    json j;
    j["rotation"] = t.rotation.m;
    j["translation"] = vec3_to(t.translation);
    return j;
}

ScenePrimitive primitive_from(const json& j) {
    ScenePrimitive p;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "box") {
        p.kind = PrimitiveKind::Box;
        p.box_size = vec3_from(j.at("size"));
    } else if (kind == "cylinder") {
        p.kind = PrimitiveKind::Cylinder;
        p.radius = j.at("radius").get<double>();
        p.height = j.at("height").get<double>();
    } else if (kind == "mesh") {
        p.kind = PrimitiveKind::Mesh;
        for (const auto& v : j.at("vertices")) p.mesh_vertices.push_back(vec3_from(v));
        for (const auto& f : j.at("faces")) {
            if (!f.is_array() || f.size() != 3)
                throw std::runtime_error("mesh face must be a triple of vertex indices");
            p.mesh_faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
        }
    } else {
        throw std::runtime_error("unknown primitive kind '" + kind + "'");
    }
    p.instance_id = j.value("id", 0);
    p.albedo = j.value("albedo", 0.8);
    p.point_return = j.value("point_return", true);
    if (j.contains("pose")) p.pose = pose_from(j.at("pose"));
    p.validate();
    return p;
}

json primitive_to(const ScenePrimitive& p) {
    json j;
    switch (p.kind) {
        case PrimitiveKind::Box:
            j["kind"] = "box";
            j["size"] = vec3_to(p.box_size);
            break;
        case PrimitiveKind::Cylinder:
            j["kind"] = "cylinder";
            j["radius"] = p.radius;
            j["height"] = p.height;
            break;
        case PrimitiveKind::Mesh: {
            j["kind"] = "mesh";
            json verts = json::array();
            for (const auto& v : p.mesh_vertices) verts.push_back(vec3_to(v));
            j["vertices"] = verts;
            json faces = json::array();
            for (const auto& f : p.mesh_faces) faces.push_back(json::array({f[0], f[1], f[2]}));
            j["faces"] = faces;
            break;
        }
    }
    j["id"] = p.instance_id;
    j["albedo"] = p.albedo;
    j["point_return"] = p.point_return;
    j["pose"] = pose_to(p.pose);
    return j;
}

}  // namespace

view::SceneGeometry SceneFile::view_geometry() const {
    view::SceneGeometry g;
    g.camera_origin = camera.position();
    g.hand_model.vertices = hand_vertices;
    g.arm_links = arm_links;
    return g;
}

SceneFile load_scene(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read scene file " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("scene file " + path + ": " + e.what());
    }

    SceneFile s;
    const auto& cam = j.at("camera");
    s.camera.fx = cam.at("fx").get<double>();
    s.camera.fy = cam.at("fy").get<double>();
    s.camera.cx = cam.at("cx").get<double>();
    s.camera.cy = cam.at("cy").get<double>();
    s.camera.width = cam.at("width").get<int>();
    s.camera.height = cam.at("height").get<int>();
    s.camera.extrinsics = pose_from(cam.at("pose"));
    s.camera.validate();

    if (j.contains("light")) s.light = vec3_from(j.at("light"));
    if (j.contains("primitives"))
        for (const auto& p : j.at("primitives")) s.primitives.push_back(primitive_from(p));

    if (j.contains("hand")) {
        const auto& hand = j.at("hand");
        for (const auto& v : hand.at("vertices")) s.hand_vertices.push_back(vec3_from(v));
        s.finger_top_height = hand.value("finger_top_height", 0.02);
        if (hand.contains("render"))
            for (const auto& p : hand.at("render")) s.hand_render.push_back(primitive_from(p));
    }

    if (j.contains("arm_links"))
        for (const auto& link : j.at("arm_links")) {
            geom::ConvexShape shape;
            for (const auto& v : link.at("vertices")) shape.vertices.push_back(vec3_from(v));
            if (shape.vertices.empty()) throw std::runtime_error("arm link without vertices");
            if (link.contains("pose")) shape.pose = pose_from(link.at("pose"));
            s.arm_links.push_back(std::move(shape));
        }
    return s;
}

void save_scene(const std::string& path, const SceneFile& scene) {
    json j;
    j["camera"] = {{"fx", scene.camera.fx},   {"fy", scene.camera.fy},
                   {"cx", scene.camera.cx},   {"cy", scene.camera.cy},
                   {"width", scene.camera.width}, {"height", scene.camera.height},
                   {"pose", pose_to(scene.camera.extrinsics)}};
    j["light"] = vec3_to(scene.light);
    json prims = json::array();
    for (const auto& p : scene.primitives) prims.push_back(primitive_to(p));
    j["primitives"] = prims;

    json hand;
    json hv = json::array();
    for (const auto& v : scene.hand_vertices) hv.push_back(vec3_to(v));
    hand["vertices"] = hv;
    hand["finger_top_height"] = scene.finger_top_height;
    json hr = json::array();
    for (const auto& p : scene.hand_render) hr.push_back(primitive_to(p));
    hand["render"] = hr;
    j["hand"] = hand;

    json links = json::array();
    for (const auto& link : scene.arm_links) {
        json l;
        json lv = json::array();
        for (const auto& v : link.vertices) lv.push_back(vec3_to(v));
        l["vertices"] = lv;
        l["pose"] = pose_to(link.pose);
        links.push_back(l);
    }
    j["arm_links"] = links;

    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write scene file " + path);
    os << j.dump(2) << "\n";
}

}  // namespace capsynth
