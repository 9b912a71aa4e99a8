#include "vrrt/serialization.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace vrrt {

namespace {

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw std::invalid_argument(std::string("unknown key '") + key + "' in " + what);
  }
}

Vec2 vec2_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_from(const Json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

}  // namespace

void to_json(Json& j, const RobotModel& m) {
  Json limits = Json::array();
  for (std::size_t i = 0; i < m.joint_lower.size(); ++i) limits.push_back({m.joint_lower[i], m.joint_upper[i]});
  j = Json{{"link_lengths", m.link_lengths}, {"joint_limits", limits}, {"blobs_per_link", m.blobs_per_link}};
}

void from_json(const Json& j, RobotModel& m) {
  require_object(j, "robot");
  reject_unknown(j, {"link_lengths", "joint_limits", "blobs_per_link"}, "robot");
  m = RobotModel{};
  m.link_lengths = j.at("link_lengths").get<std::vector<double>>();
  for (const Json& lim : j.at("joint_limits")) {
    const Vec2 l = vec2_from(lim);
    m.joint_lower.push_back(l.x());
    m.joint_upper.push_back(l.y());
  }
  m.blobs_per_link = j.value("blobs_per_link", 8);
  m.validate();
}

void to_json(Json& j, const Box& b) {
  j = Json{{"min", {b.min.x(), b.min.y()}}, {"max", {b.max.x(), b.max.y()}}};
}

void from_json(const Json& j, Box& b) {
  require_object(j, "box");
  reject_unknown(j, {"min", "max"}, "box");
  b.min = vec2_from(j.at("min"));
  b.max = vec2_from(j.at("max"));
}

void to_json(Json& j, const Scene& s) { j = Json{{"workspace", s.workspace}, {"obstacles", s.obstacles}}; }

void from_json(const Json& j, Scene& s) {
  require_object(j, "scene");
  reject_unknown(j, {"workspace", "obstacles"}, "scene");
  s = Scene{};
  if (j.contains("workspace")) s.workspace = j.at("workspace").get<Box>();
  s.obstacles = j.value("obstacles", std::vector<Box>{});
  s.validate();
}

void to_json(Json& j, const Camera& c) {
  j = Json{{"width", c.width}, {"height", c.height}, {"scale", c.scale}, {"offset_x", c.offset_x},
           {"offset_y", c.offset_y}};
}

void from_json(const Json& j, Camera& c) {
  require_object(j, "camera");
  reject_unknown(j, {"width", "height", "scale", "offset_x", "offset_y"}, "camera");
  c = Camera::desk();
  c.width = j.value("width", c.width);
  c.height = j.value("height", c.height);
  c.scale = j.value("scale", c.scale);
  c.offset_x = j.value("offset_x", c.offset_x);
  c.offset_y = j.value("offset_y", c.offset_y);
  c.validate();
}

void to_json(Json& j, const RenderParams& r) {
  j = Json{{"blob_sigma", r.blob_sigma}, {"blob_weight", r.blob_weight}};
}

void from_json(const Json& j, RenderParams& r) {
  require_object(j, "render");
  reject_unknown(j, {"blob_sigma", "blob_weight"}, "render");
  r = RenderParams{};
  r.blob_sigma = j.value("blob_sigma", r.blob_sigma);
  r.blob_weight = j.value("blob_weight", r.blob_weight);
  r.validate();
}

Json configuration_to_json(const Configuration& q) {
  return Json(std::vector<double>(q.data(), q.data() + q.size()));
}

Configuration configuration_from_json(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

const std::vector<std::string>& planner_param_keys() {
  static const std::vector<std::string> keys = {
      "epsilon",       "alpha",          "beta1",          "beta2",          "delta",
      "momentum",      "optimizer",      "kappa",          "frontier_size",  "frontier_policy",
      "top_k",         "rho",            "explore_ratio",  "frontier_ratio", "batch",
      "plateau_eps",   "plateau_iters",  "max_iters",      "rewire",         "rewire_radius",
      "edge_resolution", "shortcut_attempts", "seed",      "noisy_fraction", "noisy_sigma",
      "rrt_step",      "rrt_goal_bias",  "rrt_budget",     "rrt_rewire_radius"};
  return keys;
}

Json planner_params_to_json(const PlannerParams& p) {
  return Json{{"epsilon", p.step_size},
              {"alpha", p.optimizer.alpha},
              {"beta1", p.optimizer.beta1},
              {"beta2", p.optimizer.beta2},
              {"delta", p.optimizer.delta},
              {"momentum", p.optimizer.momentum},
              {"optimizer", std::string(to_string(p.optimizer.strategy))},
              {"kappa", p.frontier.kappa},
              {"frontier_size", p.frontier.capacity},
              {"frontier_policy", std::string(to_string(p.frontier.policy))},
              {"top_k", p.frontier.top_k},
              {"rho", p.ball_radius},
              {"explore_ratio", p.explore_ratio},
              {"frontier_ratio", p.frontier_ratio},
              {"batch", p.batch},
              {"plateau_eps", p.plateau_eps},
              {"plateau_iters", p.plateau_iters},
              {"max_iters", p.max_iters},
              {"rewire", p.rewire},
              {"rewire_radius", p.rewire_radius},
              {"edge_resolution", p.edge_resolution},
              {"shortcut_attempts", p.shortcut_attempts},
              {"seed", p.seed},
              {"noisy_fraction", p.noisy_fraction},
              {"noisy_sigma", p.noisy_sigma},
              {"rrt_step", p.rrt_step},
              {"rrt_goal_bias", p.rrt_goal_bias},
              {"rrt_budget", p.rrt_budget},
              {"rrt_rewire_radius", p.rrt_rewire_radius}};
}

void apply_planner_params(const Json& j, PlannerParams& p) {
  require_object(j, "planner params");
  const auto& keys = planner_param_keys();
  for (const auto& [key, _] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw std::invalid_argument("unknown planner parameter '" + key + "'");
    }
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("epsilon", p.step_size);
  get("alpha", p.optimizer.alpha);
  get("beta1", p.optimizer.beta1);
  get("beta2", p.optimizer.beta2);
  get("delta", p.optimizer.delta);
  get("momentum", p.optimizer.momentum);
  if (j.contains("optimizer")) p.optimizer.strategy = parse_strategy(j.at("optimizer").get<std::string>());
  get("kappa", p.frontier.kappa);
  get("frontier_size", p.frontier.capacity);
  if (j.contains("frontier_policy")) {
    p.frontier.policy = parse_frontier_policy(j.at("frontier_policy").get<std::string>());
  }
  get("top_k", p.frontier.top_k);
  get("rho", p.ball_radius);
  get("explore_ratio", p.explore_ratio);
  get("frontier_ratio", p.frontier_ratio);
  get("batch", p.batch);
  get("plateau_eps", p.plateau_eps);
  get("plateau_iters", p.plateau_iters);
  get("max_iters", p.max_iters);
  get("rewire", p.rewire);
  get("rewire_radius", p.rewire_radius);
  get("edge_resolution", p.edge_resolution);
  get("shortcut_attempts", p.shortcut_attempts);
  get("seed", p.seed);
  get("noisy_fraction", p.noisy_fraction);
  get("noisy_sigma", p.noisy_sigma);
  get("rrt_step", p.rrt_step);
  get("rrt_goal_bias", p.rrt_goal_bias);
  get("rrt_budget", p.rrt_budget);
  get("rrt_rewire_radius", p.rrt_rewire_radius);
  p.validate();
}

Json plan_result_to_json(const PlanResult& r) {
  Json path = Json::array();
  for (const auto& q : r.path) path.push_back(configuration_to_json(q));
  Json trace = Json::array();
  for (double v : r.loss_trace) trace.push_back(number_or_null(v));
  return Json{{"planner", r.planner},
              {"termination", std::string(to_string(r.termination))},
              {"iterations", r.iterations},
              {"node_count", r.node_count},
              {"wall_time", r.wall_time},
              {"best_loss", number_or_null(r.best_loss)},
              {"best_config", configuration_to_json(r.best_config)},
              {"feasible", r.feasible},
              {"reached", r.reached},
              {"path_length", path_length(r.path)},
              {"raw_path_length", r.raw_path_length},
              {"path", path},
              {"loss_trace", trace}};
}

PlanResult plan_result_from_json(const Json& j) {
  PlanResult r;
  r.planner = j.at("planner").get<std::string>();
  r.termination = parse_termination(j.at("termination").get<std::string>());
  r.iterations = j.at("iterations").get<std::size_t>();
  r.node_count = j.at("node_count").get<std::size_t>();
  r.wall_time = j.at("wall_time").get<double>();
  r.best_loss = number_from(j.at("best_loss"), std::numeric_limits<double>::quiet_NaN());
  r.best_config = configuration_from_json(j.at("best_config"));
  r.feasible = j.at("feasible").get<bool>();
  r.reached = j.at("reached").get<bool>();
  r.raw_path_length = j.value("raw_path_length", 0.0);
  for (const Json& q : j.at("path")) r.path.push_back(configuration_from_json(q));
  for (const Json& v : j.at("loss_trace")) r.loss_trace.push_back(number_from(v, std::numeric_limits<double>::infinity()));
  return r;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace vrrt
