#include "arsq/config_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace arsq {

namespace {

using nlohmann::json;

json vec3_to_json(const Eigen::Vector3d& v) {
  return json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector3d vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("config: expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vecx_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vecx_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

std::string task_kind_name(TaskKind k) {
  return k == TaskKind::Hover ? "hover" : "takeoff";
}

TaskKind task_kind_from(const std::string& s) {
  if (s == "hover") return TaskKind::Hover;
  if (s == "takeoff") return TaskKind::Takeoff;
  throw std::invalid_argument("config: unknown task kind '" + s + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["master_seed"] = c.master_seed;
  j["hyperparams"] = {{"step_size", c.hyperparams.step_size},
                      {"num_directions", c.hyperparams.num_directions},
                      {"noise_std", c.hyperparams.noise_std},
                      {"top_directions", c.hyperparams.top_directions},
                      {"num_iterations", c.hyperparams.num_iterations},
                      {"episode_length", c.hyperparams.episode_length}};
  j["task"] = {{"kind", task_kind_name(c.task.kind)},
               {"init_position", vec3_to_json(c.task.init_position)},
               {"init_velocity", vec3_to_json(c.task.init_velocity)},
               {"init_euler", vec3_to_json(c.task.init_euler)},
               {"init_body_rates", vec3_to_json(c.task.init_body_rates)},
               {"runtime", c.task.runtime},
               {"target", vec3_to_json(c.task.target)},
               {"max_steps", c.task.max_steps}};
  j["plant"] = {{"mass", c.plant.mass},
                {"gravity", c.plant.gravity},
                {"arm_length", c.plant.arm_length},
                {"inertia_diag", vec3_to_json(c.plant.inertia_diag)},
                {"k_thrust", c.plant.k_thrust},
                {"k_torque", c.plant.k_torque},
                {"rotor_min", c.plant.rotor_min},
                {"rotor_max", c.plant.rotor_max},
                {"dt", c.plant.dt}};
  j["action_scale"] = c.action_scale;
  j["eval_every"] = c.eval_every;
  j["noise_table_len"] = c.noise_table_len;
  j["save_noise"] = c.save_noise;
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                             e.what());
  }
  try {
  RunConfig c;
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  const json& h = j.at("hyperparams");
  c.hyperparams.step_size = h.at("step_size").get<double>();
  c.hyperparams.num_directions = h.at("num_directions").get<int>();
  c.hyperparams.noise_std = h.at("noise_std").get<double>();
  c.hyperparams.top_directions = h.at("top_directions").get<int>();
  c.hyperparams.num_iterations = h.at("num_iterations").get<int>();
  c.hyperparams.episode_length = h.at("episode_length").get<int>();
  const json& t = j.at("task");
  c.task.kind = task_kind_from(t.at("kind").get<std::string>());
  c.task.init_position = vec3_from_json(t.at("init_position"));
  c.task.init_velocity = vec3_from_json(t.at("init_velocity"));
  c.task.init_euler = vec3_from_json(t.at("init_euler"));
  c.task.init_body_rates = vec3_from_json(t.at("init_body_rates"));
  c.task.runtime = t.at("runtime").get<double>();
  c.task.target = vec3_from_json(t.at("target"));
  c.task.max_steps = t.at("max_steps").get<int>();
  const json& p = j.at("plant");
  c.plant.mass = p.at("mass").get<double>();
  c.plant.gravity = p.at("gravity").get<double>();
  c.plant.arm_length = p.at("arm_length").get<double>();
  c.plant.inertia_diag = vec3_from_json(p.at("inertia_diag"));
  c.plant.k_thrust = p.at("k_thrust").get<double>();
  c.plant.k_torque = p.at("k_torque").get<double>();
  c.plant.rotor_min = p.at("rotor_min").get<double>();
  c.plant.rotor_max = p.at("rotor_max").get<double>();
  c.plant.dt = p.at("dt").get<double>();
  c.action_scale = j.at("action_scale").get<double>();
  c.eval_every = j.at("eval_every").get<int>();
  c.noise_table_len = j.at("noise_table_len").get<std::size_t>();
  c.save_noise = j.at("save_noise").get<bool>();
  c.out_dir = j.at("out_dir").get<std::string>();
  return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

void save_run_config(const std::string& path, const RunConfig& config) {
  write_file(path, run_config_to_json(config));
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(read_file(path));
}

void save_policy(const std::string& path, const PolicyFile& file) {
  json j;
  j["rows"] = file.policy.m.rows();
  j["cols"] = file.policy.m.cols();
  json m = json::array();
  for (Eigen::Index r = 0; r < file.policy.m.rows(); ++r)
    for (Eigen::Index c = 0; c < file.policy.m.cols(); ++c)
      m.push_back(file.policy.m(r, c));
  j["m"] = std::move(m);
  j["iteration"] = file.policy.iteration;
  j["mean"] = vecx_to_json(file.stats.mean);
  j["sigma"] = vecx_to_json(file.stats.variance);
  j["count"] = file.stats.count;
  write_file(path, j.dump(2) + "\n");
}

PolicyFile load_policy(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("policy file " + path + ": " + e.what());
  }
  try {
  PolicyFile f;
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const json& m = j.at("m");
  if (rows < 1 || cols < 1 || m.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("policy file " + path + ": bad matrix shape");
  f.policy.m.resize(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      f.policy.m(r, c) = m[static_cast<std::size_t>(r) * cols + c].get<double>();
  f.policy.iteration = j.at("iteration").get<int>();
  f.stats.mean = vecx_from_json(j.at("mean"));
  f.stats.variance = vecx_from_json(j.at("sigma"));
  f.stats.count = j.at("count").get<std::int64_t>();
  if (f.stats.mean.size() != cols || f.stats.variance.size() != cols)
    throw std::invalid_argument("policy file " + path + ": normalizer size mismatch");
  return f;
  } catch (const json::exception& e) {
    throw std::invalid_argument("policy file " + path + ": " + e.what());
  }
}

}  // namespace arsq
