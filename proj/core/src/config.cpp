#include "footlift/io/config.hpp"

#include <cstdio>
#include <sstream>

#include "footlift/io/file_io.hpp"

namespace footlift {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(d);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not an unsigned integer: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': not a bool: '" + v + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string input_joints_to_string(const std::vector<InputJoint>& joints) {
  if (joints.empty()) return "none";
  std::string out;
  for (size_t i = 0; i < joints.size(); ++i) {
    if (i) out += ",";
    out += to_string(joints[i]);
  }
  return out;
}

std::vector<InputJoint> input_joints_from_string(const std::string& s) {
  if (trim(s) == "none" || trim(s).empty()) return {};
  std::vector<InputJoint> out;
  for (const auto& part : split(s, ','))
    out.push_back(input_joint_from_string(part));
  return normalize_input_joints(out);
}

void AppConfig::finalize() {
  train.seed = seed;
  train.noise.seed = seed;
  train.fps = fps;
  model.input_joints = normalize_input_joints(model.input_joints);
  model.validate();
  train.validate();
  camera.validate();
}

AppConfig default_config() {
  AppConfig cfg;
  apply_preset(cfg, "toy");
  cfg.finalize();
  return cfg;
}

void apply_preset(AppConfig& cfg, const std::string& name) {
  if (name == "paper") {
    cfg.model = ModelConfig{};
    cfg.train.lr = 2e-4;
    cfg.train.lr_halving_epochs = {200, 350};
    cfg.train.batch_size = 256;
    cfg.train.epochs = 500;
    cfg.train.seq_len = 120;
    cfg.train.weights = LossWeights{};
    cfg.train.augment = true;
  } else if (name == "toy") {
    cfg.model = ModelConfig{};
    cfg.train.lr = 2e-4;
    cfg.train.lr_halving_epochs = {80, 140};
    cfg.train.batch_size = 16;
    cfg.train.epochs = 200;
    cfg.train.seq_len = 120;
    cfg.train.num_sequences = 512;
    cfg.train.weights = LossWeights{};
    cfg.train.augment = true;
  } else {
    throw ConfigError("unknown preset: " + name);
  }
}

AppConfig parse_config_text(const std::string& text, AppConfig cfg,
                            const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(lineno) +
                        ": expected key=value, got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "d_h") cfg.model.d_h = to_int(key, value);
    else if (key == "layers") cfg.model.layers = to_int(key, value);
    else if (key == "heads") cfg.model.heads = to_int(key, value);
    else if (key == "window") cfg.model.window = to_int(key, value);
    else if (key == "output_mode")
      cfg.model.output_mode = output_mode_from_string(value);
    else if (key == "input_joints")
      cfg.model.input_joints = input_joints_from_string(value);
    else if (key == "rope_base") cfg.model.rope_base = to_double(key, value);
    else if (key == "lr") cfg.train.lr = to_double(key, value);
    else if (key == "lr_halving_epochs") {
      cfg.train.lr_halving_epochs.clear();
      if (trim(value) != "none" && !trim(value).empty())
        for (const auto& part : split(value, ','))
          cfg.train.lr_halving_epochs.push_back(to_int(key, part));
    } else if (key == "batch_size") cfg.train.batch_size = to_int(key, value);
    else if (key == "epochs") cfg.train.epochs = to_int(key, value);
    else if (key == "seq_len") cfg.train.seq_len = to_int(key, value);
    else if (key == "lambda_theta") cfg.train.weights.theta = to_double(key, value);
    else if (key == "lambda_j3d") cfg.train.weights.j3d = to_double(key, value);
    else if (key == "lambda_j2d") cfg.train.weights.j2d = to_double(key, value);
    else if (key == "lambda_v3d") cfg.train.weights.v3d = to_double(key, value);
    else if (key == "lambda_v2d") cfg.train.weights.v2d = to_double(key, value);
    else if (key == "weight_decay") cfg.train.weight_decay = to_double(key, value);
    else if (key == "num_sequences") cfg.train.num_sequences = to_int(key, value);
    else if (key == "val_sequences") cfg.train.val_sequences = to_int(key, value);
    else if (key == "max_steps") cfg.train.max_steps = to_int(key, value);
    else if (key == "augment") cfg.train.augment = to_bool(key, value);
    else if (key == "profile") cfg.train.profile = value;
    else if (key == "kp_sigma_px") cfg.train.noise.kp_sigma_px = to_double(key, value);
    else if (key == "drop_prob") cfg.train.noise.drop_prob = to_double(key, value);
    else if (key == "init_rot_sigma_deg")
      cfg.train.noise.init_rot_sigma_deg = to_double(key, value);
    else if (key == "camera_f") cfg.camera.f = to_double(key, value);
    else if (key == "camera_cx") cfg.camera.cx = to_double(key, value);
    else if (key == "camera_cy") cfg.camera.cy = to_double(key, value);
    else if (key == "camera_width") cfg.camera.width = to_double(key, value);
    else if (key == "camera_height") cfg.camera.height = to_double(key, value);
    else if (key == "skeleton") cfg.skeleton_path = value;
    else if (key == "seed") cfg.seed = to_u64(key, value);
    else if (key == "fps") cfg.fps = to_double(key, value);
    else
      throw ConfigError(source_name + ":" + std::to_string(lineno) +
                        ": unknown config key '" + key + "'");
  }
  cfg.finalize();
  return cfg;
}

AppConfig parse_config_file(const std::string& path, AppConfig base) {
  return parse_config_text(io::read_file(path), std::move(base), path);
}

std::string config_to_text(const AppConfig& cfg) {
  std::ostringstream os;
  os << "d_h = " << cfg.model.d_h << "\n";
  os << "layers = " << cfg.model.layers << "\n";
  os << "heads = " << cfg.model.heads << "\n";
  os << "window = " << cfg.model.window << "\n";
  os << "output_mode = " << to_string(cfg.model.output_mode) << "\n";
  os << "input_joints = " << input_joints_to_string(cfg.model.input_joints)
     << "\n";
  os << "rope_base = " << fmt(cfg.model.rope_base) << "\n";
  os << "lr = " << fmt(cfg.train.lr) << "\n";
  os << "lr_halving_epochs = ";
  if (cfg.train.lr_halving_epochs.empty()) {
    os << "none";
  } else {
    for (size_t i = 0; i < cfg.train.lr_halving_epochs.size(); ++i)
      os << (i ? "," : "") << cfg.train.lr_halving_epochs[i];
  }
  os << "\n";
  os << "batch_size = " << cfg.train.batch_size << "\n";
  os << "epochs = " << cfg.train.epochs << "\n";
  os << "seq_len = " << cfg.train.seq_len << "\n";
  os << "lambda_theta = " << fmt(cfg.train.weights.theta) << "\n";
  os << "lambda_j3d = " << fmt(cfg.train.weights.j3d) << "\n";
  os << "lambda_j2d = " << fmt(cfg.train.weights.j2d) << "\n";
  os << "lambda_v3d = " << fmt(cfg.train.weights.v3d) << "\n";
  os << "lambda_v2d = " << fmt(cfg.train.weights.v2d) << "\n";
  os << "weight_decay = " << fmt(cfg.train.weight_decay) << "\n";
  os << "num_sequences = " << cfg.train.num_sequences << "\n";
  os << "val_sequences = " << cfg.train.val_sequences << "\n";
  os << "max_steps = " << cfg.train.max_steps << "\n";
  os << "augment = " << (cfg.train.augment ? "true" : "false") << "\n";
  os << "profile = " << cfg.train.profile << "\n";
  os << "kp_sigma_px = " << fmt(cfg.train.noise.kp_sigma_px) << "\n";
  os << "drop_prob = " << fmt(cfg.train.noise.drop_prob) << "\n";
  os << "init_rot_sigma_deg = " << fmt(cfg.train.noise.init_rot_sigma_deg)
     << "\n";
  os << "camera_f = " << fmt(cfg.camera.f) << "\n";
  os << "camera_cx = " << fmt(cfg.camera.cx) << "\n";
  os << "camera_cy = " << fmt(cfg.camera.cy) << "\n";
  os << "camera_width = " << fmt(cfg.camera.width) << "\n";
  os << "camera_height = " << fmt(cfg.camera.height) << "\n";
  os << "skeleton = " << cfg.skeleton_path << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "fps = " << fmt(cfg.fps) << "\n";
  return os.str();
}

}  // namespace footlift
