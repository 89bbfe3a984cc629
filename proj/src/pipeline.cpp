#include "capsynth/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "capsynth/image_io.hpp"
#include "capsynth/manifest.hpp"
#include "capsynth/point_frame.hpp"
#include "capsynth/render.hpp"
#include "capsynth/segmentation.hpp"
#include "capsynth/yolo.hpp"

namespace capsynth::pipeline {

namespace fs = std::filesystem;
using geom::Vec3;
using nlohmann::json;
using sensor::PointFrame;
using sensor::PrimitiveKind;
using sensor::ScenePrimitive;

namespace {

Vec3 vec3_from(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

std::string format_index(const char* prefix, int value, int width) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
    return buf;
}

std::vector<std::string> list_files(const std::string& dir, const std::string& suffix) {
    std::vector<std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string name = e.path().filename().string();
        if (name.size() >= suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string path_stem(const std::string& path) { return fs::path(path).stem().string(); }

void write_run_log(const std::string& dir, const PipelineConfig& config,
                   const std::vector<std::pair<std::string, std::string>>& counts) {
    std::ofstream os(dir + "/run.log");
    os << "seed " << config.seed << "\n";
    os << "digest " << config_digest(config) << "\n";
    for (const auto& [k, v] : counts) os << k << " " << v << "\n";
}

view::ViewPlanConfig effective_viewplan(const PipelineConfig& config, const SceneFile& scene) {
    view::ViewPlanConfig vp = config.viewplan;
    if (config.clip_positions_to_frustum) vp.frustum = scene.camera;
    return vp;
}

ScenePrimitive reposed(const ScenePrimitive& prim, const geom::RigidTransform& parent) {
    ScenePrimitive out = prim;
    out.pose = parent * prim.pose;
    return out;
}

/// Tube body and cap in the hand frame: body top at grip_offset, cap above
/// it. The body yields no point returns, like a translucent tube under
/// structured light.
std::vector<ScenePrimitive> tube_primitives(const TubeSpec& tube,
                                            const geom::RigidTransform& hand_pose) {
    ScenePrimitive body;
    body.kind = PrimitiveKind::Cylinder;
    body.radius = tube.body_radius;
    body.height = tube.body_length;
    body.pose.translation = {0, 0, tube.grip_offset - tube.body_length / 2.0};
    body.instance_id = kBodyIdBase + tube.class_id;
    body.albedo = tube.body_albedo;
    body.point_return = false;

    ScenePrimitive cap;
    cap.kind = PrimitiveKind::Cylinder;
    cap.radius = tube.cap_radius;
    cap.height = tube.cap_length;
    cap.pose.translation = {0, 0, tube.grip_offset + tube.cap_length / 2.0};
    cap.instance_id = kCapIdBase + tube.class_id;
    cap.albedo = tube.cap_albedo;

    return {reposed(body, hand_pose), reposed(cap, hand_pose)};
}

struct TubeFrameRecord {
    std::string stem;
    int class_id = 0;
    int pose_index = 0;
    double grasp_deg = 0.0;
    geom::RigidTransform hand_pose;
};

void write_tube_manifest(const std::string& path, const std::vector<TubeFrameRecord>& records) {
    json j;
    j["frames"] = json::array();
    for (const auto& r : records) {
        json e;
        e["stem"] = r.stem;
        e["class_id"] = r.class_id;
        e["pose_index"] = r.pose_index;
        e["grasp_deg"] = r.grasp_deg;
        e["rotation"] = r.hand_pose.rotation.m;
        e["translation"] = vec3_to(r.hand_pose.translation);
        j["frames"].push_back(e);
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << "\n";
}

std::vector<TubeFrameRecord> read_tube_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    json j = json::parse(is);
    std::vector<TubeFrameRecord> records;
    for (const auto& e : j.at("frames")) {
        TubeFrameRecord r;
        r.stem = e.at("stem").get<std::string>();
        r.class_id = e.at("class_id").get<int>();
        r.pose_index = e.at("pose_index").get<int>();
        r.grasp_deg = e.at("grasp_deg").get<double>();
        for (int i = 0; i < 9; ++i)
            r.hand_pose.rotation.m[static_cast<size_t>(i)] = e.at("rotation").at(i).get<double>();
        r.hand_pose.translation = vec3_from(e.at("translation"));
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<TubeSpec> default_tubes() {
    // Four cap classes, distinct albedos and heights; class 0 is the short
    // tube that tolerates heavier occlusion.
    TubeSpec blue{"blue", 0, 0.0115, 0.018, 0.008, 0.070, 0.030, 0.90, 0.35, 0.050};
    TubeSpec purple{"purple", 1, 0.0110, 0.022, 0.008, 0.100, 0.035, 0.70, 0.35, 0.080};
    TubeSpec white{"white", 2, 0.0105, 0.020, 0.008, 0.095, 0.034, 0.98, 0.35, 0.075};
    TubeSpec ring{"purple_ring", 3, 0.0120, 0.024, 0.008, 0.105, 0.036, 0.55, 0.35, 0.085};
    return {blue, purple, white, ring};
}

}  // namespace

void PipelineConfig::validate() const {
    viewplan.validate();
    synth.validate();
    augment.validate();
    if (tubes.empty()) throw std::invalid_argument("config has no tube classes");
    for (const auto& t : tubes) {
        if (t.cap_radius <= 0 || t.cap_length <= 0 || t.body_radius <= 0 || t.body_length <= 0)
            throw std::invalid_argument("tube '" + t.name + "' has non-positive dimensions");
        if (t.class_id < 0) throw std::invalid_argument("tube class ids must be >= 0");
    }
    if (capture_pose_limit < 0) throw std::invalid_argument("capture_pose_limit must be >= 0");
    if (dropout_prob < 0.0 || dropout_prob > 1.0)
        throw std::invalid_argument("dropout_prob must be in [0,1]");
    if (rack_frame_count < 1) throw std::invalid_argument("rack_frame_count must be >= 1");
    if (trim_fraction < 0.0 || trim_fraction >= 0.5)
        throw std::invalid_argument("trim_fraction must be in [0,0.5)");
    if (merge_frame_count < 1) throw std::invalid_argument("merge_frame_count must be >= 1");
    if (rack_band <= 0.0) throw std::invalid_argument("rack_band must be positive");
    if (synth_count < 1) throw std::invalid_argument("synth count must be >= 1");
    if (split_train <= 0 || split_val <= 0)
        throw std::invalid_argument("split ratios must be positive");
    if (iou_threshold <= 0.0 || iou_threshold >= 1.0)
        throw std::invalid_argument("iou_threshold must be in (0,1)");
}

PipelineConfig parse_config(const json& j) {
    PipelineConfig c;
    c.seed = j.value("seed", std::uint64_t{1});
    c.out_root = j.value("out_root", std::string("out"));
    c.scene_path = j.value("scene", std::string("scene.json"));

    if (j.contains("viewplan")) {
        const auto& v = j.at("viewplan");
        c.viewplan.max_tilt_deg = v.value("max_tilt_deg", c.viewplan.max_tilt_deg);
        c.viewplan.grasp_step_deg = v.value("grasp_step_deg", c.viewplan.grasp_step_deg);
        c.viewplan.icosphere_level = v.value("icosphere_level", c.viewplan.icosphere_level);
        if (v.contains("workspace_min")) c.viewplan.workspace.min = vec3_from(v.at("workspace_min"));
        if (v.contains("workspace_max")) c.viewplan.workspace.max = vec3_from(v.at("workspace_max"));
        c.viewplan.grid_step = v.value("grid_step", c.viewplan.grid_step);
        if (v.contains("up_axis")) c.viewplan.up_axis = vec3_from(v.at("up_axis"));
        c.clip_positions_to_frustum = v.value("clip_to_frustum", c.clip_positions_to_frustum);
    }

    if (j.contains("capture")) {
        const auto& v = j.at("capture");
        c.capture_pose_limit = v.value("pose_limit", c.capture_pose_limit);
        c.dropout_prob = v.value("dropout_prob", c.dropout_prob);
        c.rack_frame_count = v.value("rack_frames", c.rack_frame_count);
        if (v.contains("rack_size")) c.rack_size = vec3_from(v.at("rack_size"));
        c.rack_albedo = v.value("rack_albedo", c.rack_albedo);
        c.rack_jitter = v.value("rack_jitter", c.rack_jitter);
        if (v.contains("tubes")) {
            for (const auto& t : v.at("tubes")) {
                TubeSpec spec;
                spec.name = t.value("name", spec.name);
                spec.class_id = t.at("class_id").get<int>();
                spec.cap_radius = t.value("cap_radius", spec.cap_radius);
                spec.cap_length = t.value("cap_length", spec.cap_length);
                spec.body_radius = t.value("body_radius", spec.body_radius);
                spec.body_length = t.value("body_length", spec.body_length);
                spec.grip_offset = t.value("grip_offset", spec.grip_offset);
                spec.cap_albedo = t.value("cap_albedo", spec.cap_albedo);
                spec.body_albedo = t.value("body_albedo", spec.body_albedo);
                spec.rack_height = t.value("rack_height", spec.rack_height);
                c.tubes.push_back(spec);
            }
        }
    }
    if (c.tubes.empty()) c.tubes = default_tubes();

    if (j.contains("segment")) {
        const auto& v = j.at("segment");
        c.trim_fraction = v.value("trim_fraction", c.trim_fraction);
        if (v.contains("mask_offset_min")) c.mask_offset_min = vec3_from(v.at("mask_offset_min"));
        if (v.contains("mask_offset_max")) c.mask_offset_max = vec3_from(v.at("mask_offset_max"));
        c.merge_frame_count = v.value("merge_frames", c.merge_frame_count);
        c.table_height = v.value("table_height", c.table_height);
        c.rack_band = v.value("rack_band", c.rack_band);
    }

    if (j.contains("synth")) {
        const auto& v = j.at("synth");
        c.synth_count = v.value("count", c.synth_count);
        c.synth.max_instances = v.value("max_instances", c.synth.max_instances);
        c.synth.occlusion_limit_default =
            v.value("occlusion_limit_default", c.synth.occlusion_limit_default);
        if (v.contains("occlusion_limit_per_class"))
            for (const auto& [key, val] : v.at("occlusion_limit_per_class").items())
                c.synth.occlusion_limit_per_class[std::stoi(key)] = val.get<double>();
        c.synth.max_attempts_per_paste =
            v.value("max_attempts_per_paste", c.synth.max_attempts_per_paste);
        c.synth.background_swap_prob =
            v.value("background_swap_prob", c.synth.background_swap_prob);
        if (v.contains("canvas")) {
            c.synth.canvas_width = v.at("canvas").at(0).get<int>();
            c.synth.canvas_height = v.at("canvas").at(1).get<int>();
        }
        c.background_dir = v.value("background_dir", c.background_dir);
    }

    if (j.contains("augment")) {
        const auto& v = j.at("augment");
        if (v.contains("scale")) {
            c.augment.scale_min = v.at("scale").at(0).get<double>();
            c.augment.scale_max = v.at("scale").at(1).get<double>();
        }
        c.augment.scale_prob = v.value("scale_prob", c.augment.scale_prob);
        c.augment.blur_prob = v.value("blur_prob", c.augment.blur_prob);
        if (v.contains("brightness")) {
            c.augment.brightness_min = v.at("brightness").at(0).get<double>();
            c.augment.brightness_max = v.at("brightness").at(1).get<double>();
        }
        c.augment.brightness_prob = v.value("brightness_prob", c.augment.brightness_prob);
        if (v.contains("contrast")) {
            c.augment.contrast_min = v.at("contrast").at(0).get<double>();
            c.augment.contrast_max = v.at("contrast").at(1).get<double>();
        }
        c.augment.contrast_prob = v.value("contrast_prob", c.augment.contrast_prob);
    }

    if (j.contains("split")) {
        c.split_train = j.at("split").value("train", c.split_train);
        c.split_val = j.at("split").value("val", c.split_val);
    }

    if (j.contains("eval")) {
        c.iou_threshold = j.at("eval").value("iou_threshold", c.iou_threshold);
        c.detections_path = j.at("eval").value("detections", c.detections_path);
    }

    c.validate();
    return c;
}

json to_json(const PipelineConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["out_root"] = c.out_root;
    j["scene"] = c.scene_path;

    json vp;
    vp["max_tilt_deg"] = c.viewplan.max_tilt_deg;
    vp["grasp_step_deg"] = c.viewplan.grasp_step_deg;
    vp["icosphere_level"] = c.viewplan.icosphere_level;
    vp["workspace_min"] = vec3_to(c.viewplan.workspace.min);
    vp["workspace_max"] = vec3_to(c.viewplan.workspace.max);
    vp["grid_step"] = c.viewplan.grid_step;
    vp["up_axis"] = vec3_to(c.viewplan.up_axis);
    vp["clip_to_frustum"] = c.clip_positions_to_frustum;
    j["viewplan"] = vp;

    json cap;
    cap["pose_limit"] = c.capture_pose_limit;
    cap["dropout_prob"] = c.dropout_prob;
    cap["rack_frames"] = c.rack_frame_count;
    cap["rack_size"] = vec3_to(c.rack_size);
    cap["rack_albedo"] = c.rack_albedo;
    cap["rack_jitter"] = c.rack_jitter;
    cap["tubes"] = json::array();
    for (const auto& t : c.tubes) {
        json tj;
        tj["name"] = t.name;
        tj["class_id"] = t.class_id;
        tj["cap_radius"] = t.cap_radius;
        tj["cap_length"] = t.cap_length;
        tj["body_radius"] = t.body_radius;
        tj["body_length"] = t.body_length;
        tj["grip_offset"] = t.grip_offset;
        tj["cap_albedo"] = t.cap_albedo;
        tj["body_albedo"] = t.body_albedo;
        tj["rack_height"] = t.rack_height;
        cap["tubes"].push_back(tj);
    }
    j["capture"] = cap;

    json seg;
    seg["trim_fraction"] = c.trim_fraction;
    seg["mask_offset_min"] = vec3_to(c.mask_offset_min);
    seg["mask_offset_max"] = vec3_to(c.mask_offset_max);
    seg["merge_frames"] = c.merge_frame_count;
    seg["table_height"] = c.table_height;
    seg["rack_band"] = c.rack_band;
    j["segment"] = seg;

    json sy;
    sy["count"] = c.synth_count;
    sy["max_instances"] = c.synth.max_instances;
    sy["occlusion_limit_default"] = c.synth.occlusion_limit_default;
    json tmap;
    for (const auto& [cls, t] : c.synth.occlusion_limit_per_class)
        tmap[std::to_string(cls)] = t;
    sy["occlusion_limit_per_class"] = tmap;
    sy["max_attempts_per_paste"] = c.synth.max_attempts_per_paste;
    sy["background_swap_prob"] = c.synth.background_swap_prob;
    sy["canvas"] = json::array({c.synth.canvas_width, c.synth.canvas_height});
    sy["background_dir"] = c.background_dir;
    j["synth"] = sy;

    json aug;
    aug["scale"] = json::array({c.augment.scale_min, c.augment.scale_max});
    aug["scale_prob"] = c.augment.scale_prob;
    aug["blur_prob"] = c.augment.blur_prob;
    aug["brightness"] = json::array({c.augment.brightness_min, c.augment.brightness_max});
    aug["brightness_prob"] = c.augment.brightness_prob;
    aug["contrast"] = json::array({c.augment.contrast_min, c.augment.contrast_max});
    aug["contrast_prob"] = c.augment.contrast_prob;
    j["augment"] = aug;

    j["split"] = {{"train", c.split_train}, {"val", c.split_val}};
    j["eval"] = {{"iou_threshold", c.iou_threshold}, {"detections", c.detections_path}};
    return j;
}

PipelineConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config file " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config file " + path + ": " + e.what());
    }

    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("override '" + ov + "' is not key.path=value");
        std::string keypath = ov.substr(0, eq);
        std::string value = ov.substr(eq + 1);
        std::string pointer = "/";
        for (char ch : keypath) pointer += ch == '.' ? '/' : ch;
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            parsed = value;  // plain string
        }
        j[json::json_pointer(pointer)] = parsed;
    }
    return parse_config(j);
}

std::string config_digest(const PipelineConfig& config) {
    json j = to_json(config);
    j.erase("out_root");  // placement does not change what gets generated
    return data::fnv1a_hex(j.dump());
}

void write_config_snapshot(const std::string& dir, const PipelineConfig& config) {
    std::ofstream os(dir + "/config.json");
    if (!os) throw std::runtime_error("cannot write config snapshot in " + dir);
    os << to_json(config).dump(2) << "\n";
}

void stage_plan_views(const PipelineConfig& config, const SceneFile& scene,
                      const std::string& out_dir, Exec exec) {
    config.validate();
    fs::create_directories(out_dir);

    auto poses = view::plan_observations(effective_viewplan(config, scene), scene.view_geometry(),
                                         exec);
    view::write_pose_list(out_dir + "/poses.txt", poses);

    size_t feasible = 0;
    for (const auto& p : poses) feasible += p.feasible;
    write_config_snapshot(out_dir, config);
    write_run_log(out_dir, config,
                  {{"poses", std::to_string(poses.size())},
                   {"feasible", std::to_string(feasible)}});
}

CaptureSummary stage_capture(const PipelineConfig& config, const SceneFile& scene,
                             const std::string& plan_dir, const std::string& out_dir, Exec exec) {
    config.validate();
    for (const auto& t : config.tubes)
        if (t.grip_offset <= scene.finger_top_height)
            throw std::runtime_error("tube '" + t.name +
                                     "' cap does not clear the fingertip plane");

    auto all_poses = view::read_pose_list(plan_dir + "/poses.txt");
    struct Selected {
        view::ObservationPose pose;
        int index;
    };
    std::vector<Selected> selected;
    for (size_t i = 0; i < all_poses.size(); ++i)
        if (all_poses[i].feasible) selected.push_back({all_poses[i], static_cast<int>(i)});
    if (config.capture_pose_limit > 0 &&
        selected.size() > static_cast<size_t>(config.capture_pose_limit))
        selected.resize(static_cast<size_t>(config.capture_pose_limit));
    if (selected.empty()) throw std::runtime_error("no feasible observation poses to capture");

    const std::string tubes_dir = out_dir + "/tubes";
    const std::string racks_dir = out_dir + "/racks";
    fs::create_directories(tubes_dir);
    fs::create_directories(racks_dir);

    sensor::RenderOptions opts;
    opts.light_dir = scene.light;
    opts.exec = exec;

    CaptureSummary summary;
    std::vector<TubeFrameRecord> records;
    int frame_counter = 0;
    for (const auto& tube : config.tubes) {
        for (size_t k = 0; k < selected.size(); ++k) {
            const auto& sel = selected[k];
            geom::RigidTransform hand_pose = view::hand_pose_for(
                sel.pose.position, sel.pose.tube_axis, sel.pose.grasp_angle_deg);

            std::vector<ScenePrimitive> prims = scene.primitives;
            for (const auto& hp : scene.hand_render) prims.push_back(reposed(hp, hand_pose));
            for (auto& tp : tube_primitives(tube, hand_pose)) prims.push_back(std::move(tp));

            PointFrame frame = sensor::render_frame(prims, scene.camera, opts);
            if (config.dropout_prob > 0.0) {
                Rng rng = Rng::for_stream(config.seed, 100000 + frame_counter);
                frame = sensor::apply_dropout(frame, config.dropout_prob, rng);
            }

            std::string stem = format_index(("t" + std::to_string(tube.class_id) + "_p").c_str(),
                                            static_cast<int>(k), 6);
            sensor::save_point_frame(tubes_dir, stem, frame);
            records.push_back({stem, tube.class_id, sel.index, sel.pose.grasp_angle_deg, hand_pose});
            ++summary.tube_frames;
            ++frame_counter;
        }
    }
    write_tube_manifest(tubes_dir + "/manifest.json", records);

    json rack_manifest;
    rack_manifest["frames"] = json::array();
    for (int i = 0; i < config.rack_frame_count; ++i) {
        Rng rng = Rng::for_stream(config.seed, 200000 + i);
        ScenePrimitive rack;
        rack.kind = PrimitiveKind::Box;
        rack.box_size = config.rack_size;
        rack.instance_id = kRackId;
        rack.albedo = config.rack_albedo;
        rack.pose.rotation = geom::rotation_z(rng.uniform(0.0, 2.0 * geom::kPi));
        rack.pose.translation = {rng.uniform(-config.rack_jitter, config.rack_jitter),
                                 rng.uniform(-config.rack_jitter, config.rack_jitter),
                                 config.table_height + config.rack_size.z / 2.0};

        std::vector<ScenePrimitive> prims = scene.primitives;
        prims.push_back(rack);
        PointFrame frame = sensor::render_frame(prims, scene.camera, opts);

        std::string stem = format_index("rack_", i, 3);
        sensor::save_point_frame(racks_dir, stem, frame);
        rack_manifest["frames"].push_back({{"stem", stem}});
        ++summary.rack_frames;
    }
    {
        std::ofstream os(racks_dir + "/manifest.json");
        os << rack_manifest.dump(2) << "\n";
    }

    write_config_snapshot(out_dir, config);
    write_run_log(out_dir, config,
                  {{"tube_frames", std::to_string(summary.tube_frames)},
                   {"rack_frames", std::to_string(summary.rack_frames)},
                   {"poses_used", std::to_string(selected.size())}});
    return summary;
}

SegmentSummary stage_segment(const PipelineConfig& config, const SceneFile& scene,
                             const std::string& capture_dir, const std::string& out_dir) {
    config.validate();
    const std::string tubes_dir = capture_dir + "/tubes";
    const std::string racks_dir = capture_dir + "/racks";
    const std::string cut_dir = out_dir + "/cutouts";
    const std::string rack_out = out_dir + "/racks";
    const std::string mask_dir = out_dir + "/masks";
    fs::create_directories(cut_dir);
    fs::create_directories(rack_out);
    fs::create_directories(mask_dir);

    auto records = read_tube_manifest(tubes_dir + "/manifest.json");
    std::map<int, std::vector<size_t>> by_class;
    for (size_t i = 0; i < records.size(); ++i) by_class[records[i].class_id].push_back(i);

    SegmentSummary summary;
    for (const auto& [cls, indices] : by_class) {
        // Fit one annotation mask per tube class from the first few views.
        size_t n_merge = std::min(indices.size(), static_cast<size_t>(config.merge_frame_count));
        std::vector<PointFrame> merge_frames;
        std::vector<geom::RigidTransform> merge_poses;
        for (size_t k = 0; k < n_merge; ++k) {
            const auto& rec = records[indices[k]];
            merge_frames.push_back(sensor::load_point_frame(tubes_dir, rec.stem));
            merge_poses.push_back(rec.hand_pose);
        }
        auto cloud = seg::merge_in_hand_frame(merge_frames, merge_poses, scene.finger_top_height);
        seg::AnnotationMask mask = seg::fit_annotation_mask(cloud, config.trim_fraction,
                                                            config.mask_offset_min,
                                                            config.mask_offset_max);
        {
            json mj;
            mj["class_id"] = cls;
            mj["box_min"] = vec3_to(mask.box.min);
            mj["box_max"] = vec3_to(mask.box.max);
            mj["offset_min"] = vec3_to(mask.offset_min);
            mj["offset_max"] = vec3_to(mask.offset_max);
            mj["points"] = cloud.size();
            std::ofstream os(mask_dir + "/mask_c" + std::to_string(cls) + ".json");
            os << mj.dump(2) << "\n";
        }
        merge_frames.clear();
        merge_poses.clear();

        for (size_t k = 0; k < indices.size(); ++k) {
            const auto& rec = records[indices[k]];
            PointFrame frame = sensor::load_point_frame(tubes_dir, rec.stem);
            auto pixels = seg::extract_cap_pixels(frame, rec.hand_pose, mask);
            if (pixels.empty()) {
                ++summary.skipped_frames;
                continue;
            }
            seg::Cutout cut = seg::hull_crop(frame, pixels);
            cut.class_id = cls;
            cut.pose_id = rec.pose_index;
            cut.frame_id = static_cast<int>(k);
            std::string name = format_index(("cut_c" + std::to_string(cls) + "_").c_str(),
                                            static_cast<int>(k), 6);
            save_cutout(cut_dir + "/" + name + ".png", cut);
            ++summary.cutouts;
        }
    }

    // Rack backgrounds: full frame plus the paste polygon.
    std::ifstream rm(racks_dir + "/manifest.json");
    if (!rm) throw std::runtime_error("cannot read " + racks_dir + "/manifest.json");
    json rack_manifest = json::parse(rm);
    for (const auto& e : rack_manifest.at("frames")) {
        std::string stem = e.at("stem").get<std::string>();
        PointFrame frame = sensor::load_point_frame(racks_dir, stem);
        seg::RackSegment rs = seg::segment_rack(frame, config.table_height, config.rack_band);

        ImageU8 gray(frame.width, frame.height);
        for (size_t i = 0; i < frame.gray.size(); ++i) gray.data[i] = float_to_u8(frame.gray[i]);
        write_png_gray8(rack_out + "/" + stem + ".png", gray);

        rs.cutout.class_id = 0;
        save_cutout(rack_out + "/" + stem + "_cutout.png", rs.cutout);

        json rj;
        rj["stem"] = stem;
        rj["width"] = frame.width;
        rj["height"] = frame.height;
        json poly = json::array();
        for (const auto& v : rs.polygon.vertices) poly.push_back(json::array({v.x, v.y}));
        rj["polygon"] = poly;
        rj["other_regions"] = rs.other_regions;
        std::ofstream os(rack_out + "/" + stem + ".json");
        os << rj.dump(2) << "\n";
        ++summary.racks;
    }

    write_config_snapshot(out_dir, config);
    write_run_log(out_dir, config,
                  {{"cutouts", std::to_string(summary.cutouts)},
                   {"racks", std::to_string(summary.racks)},
                   {"skipped_frames", std::to_string(summary.skipped_frames)}});
    return summary;
}

std::vector<seg::Cutout> load_cutout_pool(const std::string& segment_dir) {
    std::vector<seg::Cutout> pool;
    for (const auto& path : list_files(segment_dir + "/cutouts", ".png"))
        pool.push_back(seg::load_cutout(path));
    return pool;
}

std::vector<synth::RackBackground> load_rack_backgrounds(const std::string& segment_dir) {
    std::vector<synth::RackBackground> out;
    for (const auto& path : list_files(segment_dir + "/racks", ".json")) {
        std::ifstream is(path);
        json j = json::parse(is);
        synth::RackBackground bg;
        std::string stem = j.at("stem").get<std::string>();
        bg.frame = read_png_gray_f(segment_dir + "/racks/" + stem + ".png");
        for (const auto& v : j.at("polygon"))
            bg.polygon.vertices.push_back({v.at(0).get<int>(), v.at(1).get<int>()});
        bg.polygon.degenerate = bg.polygon.vertices.size() < 3;
        out.push_back(std::move(bg));
    }
    return out;
}

std::vector<ImageF> load_background_pool(const std::string& dir) {
    std::vector<ImageF> out;
    for (const auto& path : list_files(dir, ".png")) out.push_back(read_png_gray_f(path));
    return out;
}

SynthSummary stage_synth(const PipelineConfig& config, const std::string& segment_dir,
                         const std::string& out_dir, Exec exec) {
    config.validate();
    auto pool = load_cutout_pool(segment_dir);
    auto backgrounds = load_rack_backgrounds(segment_dir);
    if (pool.empty()) throw std::runtime_error("no cutouts found under " + segment_dir);
    if (backgrounds.empty()) throw std::runtime_error("no rack backgrounds under " + segment_dir);

    std::vector<ImageF> bg_pool;
    if (!config.background_dir.empty()) bg_pool = load_background_pool(config.background_dir);
    if (config.synth.background_swap_prob > 0.0 && bg_pool.empty())
        throw std::runtime_error(
            "background_swap_prob > 0 but no background images found (synth.background_dir = '" +
            config.background_dir + "')");

    fs::create_directories(out_dir + "/images");
    fs::create_directories(out_dir + "/labels");

    auto batch = synth::synthesize_batch(backgrounds, pool, config.synth, config.augment, bg_pool,
                                         config.seed, config.synth_count, exec);

    data::DatasetManifest manifest;
    manifest.master_seed = config.seed;
    manifest.config_digest = config_digest(config);

    SynthSummary summary;
    int clamped_boxes = 0;
    for (size_t i = 0; i < batch.size(); ++i) {
        const auto& img = batch[i];
        std::string stem = format_index("img_", static_cast<int>(i), 6);

        write_png_gray8(out_dir + "/images/" + stem + ".png", to_u8(img.image));

        std::vector<data::Label> labels;
        for (const auto& lab : img.labels) {
            bool clamped = false;
            labels.push_back(data::label_from_pixel_box(lab.box, config.synth.canvas_width,
                                                        config.synth.canvas_height, lab.class_id,
                                                        &clamped));
            clamped_boxes += clamped;
        }
        std::ofstream os(out_dir + "/labels/" + stem + ".txt");
        if (!os) throw std::runtime_error("cannot write label file for " + stem);
        os << data::emit_yolo(labels);

        manifest.entries.push_back(
            {"images/" + stem + ".png", "labels/" + stem + ".txt", data::Split::Train});
        summary.instances += static_cast<int>(img.instances.size());
        summary.background_swaps += img.stats.background_swapped;
        ++summary.images;
    }
    data::write_manifest(out_dir + "/manifest.txt", manifest);

    write_config_snapshot(out_dir, config);
    write_run_log(out_dir, config,
                  {{"images", std::to_string(summary.images)},
                   {"instances", std::to_string(summary.instances)},
                   {"background_swaps", std::to_string(summary.background_swaps)},
                   {"clamped_boxes", std::to_string(clamped_boxes)}});
    return summary;
}

void stage_split(const PipelineConfig& config, const std::string& dataset_dir) {
    config.validate();
    auto manifest = data::read_manifest(dataset_dir + "/manifest.txt");
    auto split = data::split_manifest(manifest, config.split_train, config.split_val, config.seed);
    data::write_manifest(dataset_dir + "/manifest.txt", split);

    size_t train = 0;
    for (const auto& e : split.entries) train += e.split == data::Split::Train;
    std::ofstream os(dataset_dir + "/split.log");
    os << "seed " << config.seed << "\n";
    os << "train " << train << "\n";
    os << "val " << split.entries.size() - train << "\n";
}

eval::EvalReport stage_eval(const PipelineConfig& config, const std::string& dataset_dir,
                            const std::string& detections_path, const std::string& out_dir) {
    config.validate();
    fs::create_directories(out_dir);
    auto manifest = data::read_manifest(dataset_dir + "/manifest.txt");

    std::vector<eval::GroundTruth> gts;
    for (const auto& e : manifest.entries) {
        int w = 0, h = 0;
        png_dimensions(dataset_dir + "/" + e.image_path, w, h);
        std::ifstream ls(dataset_dir + "/" + e.label_path);
        if (!ls) throw std::runtime_error("missing label file " + e.label_path);
        std::ostringstream buf;
        buf << ls.rdbuf();
        for (const auto& lab : data::parse_yolo(buf.str())) {
            seg::PixelBox pb = data::pixel_box_from_label(lab, w, h);
            eval::GroundTruth gt;
            gt.image_id = path_stem(e.image_path);
            gt.class_id = lab.class_id;
            gt.box = {static_cast<double>(pb.x0), static_cast<double>(pb.y0),
                      static_cast<double>(pb.x1 + 1), static_cast<double>(pb.y1 + 1)};
            gts.push_back(std::move(gt));
        }
    }

    auto dets = eval::read_detections(detections_path);
    eval::EvalReport report = eval::evaluate(dets, gts, config.iou_threshold);
    eval::write_report(out_dir + "/report.txt", out_dir + "/report.kv", report);
    write_config_snapshot(out_dir, config);
    write_run_log(out_dir, config,
                  {{"detections", std::to_string(dets.size())},
                   {"ground_truths", std::to_string(gts.size())},
                   {"classes", std::to_string(report.per_class.size())}});
    return report;
}

}  // namespace capsynth::pipeline
