#include "footlift/io/formats.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "footlift/io/file_io.hpp"

namespace footlift::io {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string out((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof()) throw IoError("read failed: " + path);
  return out;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename " + tmp + " -> " + path + ": " + ec.message());
}

namespace {

json parse(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw FormatError("invalid JSON in " + what);
  return j;
}

void check_version(const json& j, const std::string& what) {
  if (!j.contains("format_version") ||
      j.at("format_version").get<int>() != kFormatVersion)
    throw FormatError(what + ": unsupported or missing format_version");
}

double finite(const json& j, const std::string& what) {
  if (!j.is_number()) throw FormatError(what + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(what + ": non-finite number");
  return v;
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw FormatError(what + ": expected [x, y, z]");
  return {finite(j[0], what), finite(j[1], what), finite(j[2], what)};
}

json camera_json(const CameraIntrinsics& cam) {
  return {{"f", cam.f}, {"cx", cam.cx}, {"cy", cam.cy},
          {"width", cam.width}, {"height", cam.height}};
}

CameraIntrinsics camera_from(const json& j) {
  CameraIntrinsics cam;
  cam.f = finite(j.at("f"), "camera.f");
  cam.cx = finite(j.at("cx"), "camera.cx");
  cam.cy = finite(j.at("cy"), "camera.cy");
  cam.width = finite(j.at("width"), "camera.width");
  cam.height = finite(j.at("height"), "camera.height");
  cam.validate();
  return cam;
}

json skeleton_json(const Skeleton& skel) {
  json joints = json::array();
  for (const auto& jt : skel.joints)
    joints.push_back({{"name", jt.name},
                      {"parent", jt.parent},
                      {"offset", vec3_json(jt.rest_offset)}});
  auto markers = [](const std::array<Vec3, kMarkersPerFoot>& m) {
    json out;
    for (int k = 0; k < kMarkersPerFoot; ++k)
      out[kMarkerNames[k]] = vec3_json(m[k]);
    return out;
  };
  return {{"format_version", kFormatVersion},
          {"joints", joints},
          {"foot_markers",
           {{"left", markers(skel.left_markers)},
            {"right", markers(skel.right_markers)}}}};
}

Skeleton skeleton_from(const json& j) {
  check_version(j, "skeleton");
  Skeleton skel;
  for (const auto& jt : j.at("joints"))
    skel.joints.push_back({jt.at("name").get<std::string>(),
                           jt.at("parent").get<int>(),
                           vec3_from(jt.at("offset"), "joint offset")});
  const auto& fm = j.at("foot_markers");
  for (int k = 0; k < kMarkersPerFoot; ++k) {
    skel.left_markers[k] =
        vec3_from(fm.at("left").at(kMarkerNames[k]), "left marker");
    skel.right_markers[k] =
        vec3_from(fm.at("right").at(kMarkerNames[k]), "right marker");
  }
  skel.validate();
  return skel;
}

}  // namespace

void save_skeleton(const std::string& path, const Skeleton& skel) {
  write_file_atomic(path, skeleton_json(skel).dump(2) + "\n");
}

Skeleton load_skeleton(const std::string& path) {
  return skeleton_from(parse(read_file(path), path));
}

void save_motion(const std::string& path, const MotionSequence& seq,
                 const Skeleton& skel, const std::string& skeleton_ref) {
  json frames = json::array();
  for (const auto& f : seq.frames) {
    json rot = json::array();
    for (const auto& r : f.rel6) {
      json row = json::array();
      for (int k = 0; k < 6; ++k) {
        if (!std::isfinite(r[k])) throw FormatError("non-finite rotation");
        row.push_back(r[k]);
      }
      rot.push_back(row);
    }
    frames.push_back({{"rot6d", rot}, {"trans", vec3_json(f.trans)}});
  }
  json j = {{"format_version", kFormatVersion},
            {"fps", seq.fps},
            {"frames", frames}};
  j["skeleton"] = skeleton_ref.empty() ? skeleton_json(skel) : json(skeleton_ref);
  write_file_atomic(path, j.dump(2) + "\n");
}

LoadedMotion load_motion(const std::string& path) {
  const json j = parse(read_file(path), path);
  check_version(j, path);
  LoadedMotion out;
  out.seq.fps = finite(j.at("fps"), "fps");
  const auto& sk = j.at("skeleton");
  if (sk.is_string()) {
    const std::filesystem::path base =
        std::filesystem::path(path).parent_path();
    out.skeleton = load_skeleton((base / sk.get<std::string>()).string());
  } else {
    out.skeleton = skeleton_from(sk);
  }
  for (const auto& f : j.at("frames")) {
    MotionFrame frame;
    const auto& rot = f.at("rot6d");
    if (!rot.is_array() || rot.size() != kNumJoints)
      throw FormatError(path + ": rot6d must list 9 joints");
    for (int i = 0; i < kNumJoints; ++i) {
      if (!rot[i].is_array() || rot[i].size() != 6)
        throw FormatError(path + ": each rot6d entry must have 6 numbers");
      for (int k = 0; k < 6; ++k)
        frame.rel6[i][k] = finite(rot[i][k], "rot6d");
    }
    frame.trans = vec3_from(f.at("trans"), "trans");
    out.seq.frames.push_back(frame);
  }
  out.seq.validate();
  return out;
}

void save_observation(const std::string& path, const ObservationSequence& obs) {
  json frames = json::array();
  for (const auto& f : obs.frames) {
    json kps = json::array();
    for (const auto& kp : f.keypoints) {
      if (!std::isfinite(kp.uv.x()) || !std::isfinite(kp.uv.y()))
        throw FormatError("non-finite keypoint");
      kps.push_back(json::array({kp.uv.x(), kp.uv.y(), kp.conf}));
    }
    frames.push_back(
        {{"keypoints", kps},
         {"bbox", json::array({f.bbox.center.x(), f.bbox.center.y(),
                               f.bbox.size})}});
  }
  const json j = {{"format_version", kFormatVersion},
                  {"fps", obs.fps},
                  {"camera", camera_json(obs.camera)},
                  {"frames", frames}};
  write_file_atomic(path, j.dump(2) + "\n");
}

ObservationSequence load_observation(const std::string& path) {
  const json j = parse(read_file(path), path);
  check_version(j, path);
  ObservationSequence obs;
  obs.fps = finite(j.at("fps"), "fps");
  obs.camera = camera_from(j.at("camera"));
  for (const auto& f : j.at("frames")) {
    ObservationFrame frame;
    const auto& kps = f.at("keypoints");
    if (!kps.is_array() || kps.size() != kNumMarkers)
      throw FormatError(path + ": keypoints must list 8 entries");
    for (int k = 0; k < kNumMarkers; ++k) {
      if (!kps[k].is_array() || kps[k].size() != 3)
        throw FormatError(path + ": keypoint must be [u, v, conf]");
      frame.keypoints[k].uv =
          Vec2(finite(kps[k][0], "u"), finite(kps[k][1], "v"));
      frame.keypoints[k].conf = finite(kps[k][2], "conf");
    }
    const auto& bb = f.at("bbox");
    if (!bb.is_array() || bb.size() != 3)
      throw FormatError(path + ": bbox must be [cu, cv, b]");
    frame.bbox.center = Vec2(finite(bb[0], "cu"), finite(bb[1], "cv"));
    frame.bbox.size = finite(bb[2], "b");
    if (!(frame.bbox.size > 0)) throw FormatError(path + ": bbox size <= 0");
    obs.frames.push_back(frame);
  }
  return obs;
}

void save_manifest(const std::string& path, const Manifest& m) {
  json files = json::array();
  for (const auto& f : m.files)
    files.push_back({{"motion", f.motion},
                     {"observation", f.observation},
                     {"initial", f.initial}});
  const json j = {
      {"format_version", kFormatVersion},
      {"seed", m.seed},
      {"num_sequences", m.num_sequences},
      {"length", m.length},
      {"fps", m.fps},
      {"profile", m.profile},
      {"noise",
       {{"kp_sigma_px", m.noise.kp_sigma_px},
        {"drop_prob", m.noise.drop_prob},
        {"init_rot_sigma_deg", m.noise.init_rot_sigma_deg}}},
      {"camera", camera_json(m.camera)},
      {"files", files}};
  write_file_atomic(path, j.dump(2) + "\n");
}

Manifest load_manifest(const std::string& path) {
  const json j = parse(read_file(path), path);
  check_version(j, path);
  Manifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.num_sequences = j.at("num_sequences").get<int>();
  m.length = j.at("length").get<int>();
  m.fps = finite(j.at("fps"), "fps");
  m.profile = j.at("profile").get<std::string>();
  m.noise.kp_sigma_px = finite(j.at("noise").at("kp_sigma_px"), "noise");
  m.noise.drop_prob = finite(j.at("noise").at("drop_prob"), "noise");
  m.noise.init_rot_sigma_deg =
      finite(j.at("noise").at("init_rot_sigma_deg"), "noise");
  m.camera = camera_from(j.at("camera"));
  for (const auto& f : j.at("files"))
    m.files.push_back({f.at("motion").get<std::string>(),
                       f.at("observation").get<std::string>(),
                       f.at("initial").get<std::string>()});
  return m;
}

namespace {

json sequence_eval_json(const SequenceEval& s) {
  return {{"name", s.name},
          {"frames", s.frames},
          {"ajae_deg", s.ajae_deg},
          {"n_mpjpe_f_mm", s.n_mpjpe_f_mm},
          {"pck_f", s.pck_f},
          {"n_fke_2d", s.n_fke_2d},
          {"accel_f_ms2", s.accel_f_ms2},
          {"keypoints_evaluated", s.keypoints_evaluated},
          {"feet_skipped", s.feet_skipped},
          {"per_frame_ajae", s.per_frame_ajae}};
}

SequenceEval sequence_eval_from(const json& j) {
  SequenceEval s;
  s.name = j.at("name").get<std::string>();
  s.frames = j.at("frames").get<long>();
  s.ajae_deg = finite(j.at("ajae_deg"), "ajae_deg");
  s.n_mpjpe_f_mm = finite(j.at("n_mpjpe_f_mm"), "n_mpjpe_f_mm");
  s.pck_f = finite(j.at("pck_f"), "pck_f");
  s.n_fke_2d = finite(j.at("n_fke_2d"), "n_fke_2d");
  s.accel_f_ms2 = finite(j.at("accel_f_ms2"), "accel_f_ms2");
  s.keypoints_evaluated = j.at("keypoints_evaluated").get<long>();
  s.feet_skipped = j.at("feet_skipped").get<long>();
  for (const auto& v : j.at("per_frame_ajae"))
    s.per_frame_ajae.push_back(finite(v, "per_frame_ajae"));
  return s;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json seqs = json::array();
  for (const auto& s : report.sequences) seqs.push_back(sequence_eval_json(s));
  const json j = {{"format_version", kFormatVersion},
                  {"sequences", seqs},
                  {"aggregate", sequence_eval_json(report.aggregate)}};
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  const json j = parse(text, "eval report");
  check_version(j, "eval report");
  EvalReport report;
  for (const auto& s : j.at("sequences"))
    report.sequences.push_back(sequence_eval_from(s));
  report.aggregate = sequence_eval_from(j.at("aggregate"));
  return report;
}

std::string report_to_csv(const EvalReport& report) {
  std::string out =
      "name,frames,ajae_deg,n_mpjpe_f_mm,pck_f,n_fke_2d,accel_f_ms2,"
      "keypoints_evaluated,feet_skipped\n";
  auto row = [&out](const SequenceEval& s) {
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%s,%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%ld,%ld\n",
                  s.name.c_str(), s.frames, s.ajae_deg, s.n_mpjpe_f_mm, s.pck_f,
                  s.n_fke_2d, s.accel_f_ms2, s.keypoints_evaluated,
                  s.feet_skipped);
    out += buf;
  };
  for (const auto& s : report.sequences) row(s);
  row(report.aggregate);
  return out;
}

}  // namespace footlift::io
