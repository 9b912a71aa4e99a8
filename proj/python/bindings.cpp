#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vrrt/bench.hpp"
#include "vrrt/gradcheck.hpp"
#include "vrrt/image_io.hpp"
#include "vrrt/serialization.hpp"

namespace py = pybind11;
using namespace vrrt;

namespace {

using ImageArray = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

ImageArray to_array(const Image& img) {
  return Eigen::Map<const ImageArray>(img.pixels.data(), img.height, img.width);
}

Image from_array(const ImageArray& a) {
  Image img(static_cast<int>(a.cols()), static_cast<int>(a.rows()));
  Eigen::Map<ImageArray>(img.pixels.data(), a.rows(), a.cols()) = a;
  return img;
}

// Parameters cross the boundary as JSON text so Python sees plain dicts.
PlannerParams params_from(const std::string& json_text) {
  PlannerParams p;
  if (!json_text.empty()) apply_planner_params(Json::parse(json_text), p);
  p.validate();
  return p;
}

py::dict result_dict(const PlanResult& r) {
  py::dict d;
  d["planner"] = r.planner;
  d["path"] = r.path;
  d["path_length"] = path_length(r.path);
  d["raw_path_length"] = r.raw_path_length;
  d["best_loss"] = r.best_loss;
  d["best_config"] = r.best_config;
  d["iterations"] = r.iterations;
  d["node_count"] = r.node_count;
  d["loss_trace"] = r.loss_trace;
  d["termination"] = std::string(to_string(r.termination));
  d["feasible"] = r.feasible;
  d["reached"] = r.reached;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vrrt, m) {
  m.doc() = "Visual-goal RRT planning for planar arms";

  py::class_<RobotModel>(m, "RobotModel")
      .def(py::init<>())
      .def_readwrite("link_lengths", &RobotModel::link_lengths)
      .def_readwrite("joint_lower", &RobotModel::joint_lower)
      .def_readwrite("joint_upper", &RobotModel::joint_upper)
      .def_readwrite("blobs_per_link", &RobotModel::blobs_per_link)
      .def_property_readonly("dof", &RobotModel::dof)
      .def("validate", &RobotModel::validate)
      .def_static("desk_arm", &RobotModel::desk_arm)
      .def_static("uniform_arm", &RobotModel::uniform_arm, py::arg("links"), py::arg("length"), py::arg("limit"),
                  py::arg("blobs_per_link") = 8);

  py::class_<Camera>(m, "Camera")
      .def(py::init<>())
      .def_readwrite("width", &Camera::width)
      .def_readwrite("height", &Camera::height)
      .def_readwrite("scale", &Camera::scale)
      .def_readwrite("offset_x", &Camera::offset_x)
      .def_readwrite("offset_y", &Camera::offset_y)
      .def_static("desk", &Camera::desk)
      .def_static("framing", &Camera::framing);

  py::class_<RenderParams>(m, "RenderParams")
      .def(py::init<>())
      .def_readwrite("blob_sigma", &RenderParams::blob_sigma)
      .def_readwrite("blob_weight", &RenderParams::blob_weight);

  py::class_<Box>(m, "Box")
      .def(py::init([](const Vec2& lo, const Vec2& hi) { return Box{lo, hi}; }), py::arg("min"), py::arg("max"))
      .def_readwrite("min", &Box::min)
      .def_readwrite("max", &Box::max);

  py::class_<Scene>(m, "Scene")
      .def(py::init<>())
      .def(py::init([](std::vector<Box> obstacles) {
             Scene s;
             s.obstacles = std::move(obstacles);
             return s;
           }),
           py::arg("obstacles"))
      .def_readwrite("workspace", &Scene::workspace)
      .def_readwrite("obstacles", &Scene::obstacles);

  m.def("joint_positions", [](const RobotModel& model, const Configuration& q) {
    const auto pts = joint_positions(model, q);
    Eigen::MatrixX2d out(pts.size(), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    return out;
  });
  m.def(
      "render",
      [](const RobotModel& model, const Configuration& q, const Camera& camera, const RenderParams& params) {
        return to_array(render(model, q, camera, params));
      },
      py::arg("model"), py::arg("q"), py::arg("camera") = Camera::desk(), py::arg("params") = RenderParams{});
  m.def(
      "loss_and_grad",
      [](const RobotModel& model, const Configuration& q, const ImageArray& goal, const Camera& camera,
         const RenderParams& params) {
        const LossGradient lg = render_loss_grad(model, q, from_array(goal), camera, params);
        return py::make_tuple(lg.loss, lg.grad);
      },
      py::arg("model"), py::arg("q"), py::arg("goal"), py::arg("camera") = Camera::desk(),
      py::arg("params") = RenderParams{});
  m.def("psnr", [](const ImageArray& a, const ImageArray& b) { return psnr(from_array(a), from_array(b)); });
  m.def("read_pgm", [](const std::filesystem::path& p) { return to_array(read_pgm(p)); });
  m.def("write_pgm", [](const std::filesystem::path& p, const ImageArray& a) { write_pgm(p, from_array(a)); });

  m.def("config_valid", &config_valid, py::arg("scene"), py::arg("model"), py::arg("q"));
  m.def("edge_collision_free", &edge_collision_free, py::arg("scene"), py::arg("model"), py::arg("q1"),
        py::arg("q2"), py::arg("resolution") = kDefaultEdgeResolution);

  m.def("p_frontier", &p_frontier, py::arg("k"), py::arg("kappa"), py::arg("m"));

  m.def(
      "gradient_check",
      [](std::size_t cases, std::uint64_t seed) {
        GradCheckOptions o;
        o.cases = cases;
        o.seed = seed;
        const GradCheckReport r = gradient_check(o);
        return py::dict(py::arg("cases") = r.cases, py::arg("max_rel_error") = r.max_rel_error);
      },
      py::arg("cases") = 100, py::arg("seed") = 0);

  m.def("_default_params", [] { return planner_params_to_json(PlannerParams{}).dump(); });
  m.def(
      "_plan",
      [](const std::string& planner, const Scene& scene, const RobotModel& model, const ImageArray& goal,
         const Configuration& q_start, const std::string& params_json, const Camera& camera,
         const RenderParams& render, const std::optional<Configuration>& goal_config) {
        const PlannerParams p = params_from(params_json);
        const VisualObjective obj(model, camera, render, from_array(goal));
        PlanResult r;
        {
          py::gil_scoped_release release;
          switch (parse_planner_kind(planner)) {
            case PlannerKind::VRrt: r = plan_vrrt(scene, obj, q_start, p, goal_config); break;
            case PlannerKind::GradientOnly: r = gradient_only_plan(scene, obj, q_start, p); break;
            case PlannerKind::TwoStage: r = two_stage_plan(scene, obj, q_start, p); break;
            case PlannerKind::Rrt:
            case PlannerKind::RrtStar:
              if (!goal_config) throw std::invalid_argument(planner + " needs goal_config");
              r = planner == "rrt" ? rrt_plan(scene, model, q_start, *goal_config,
                                              RrtOptions{p.rrt_goal_bias, p.rrt_step, p.rrt_budget, p.seed,
                                                         p.edge_resolution})
                                   : rrt_star_plan(scene, model, q_start, *goal_config, p);
              break;
          }
        }
        return result_dict(r);
      },
      py::arg("planner"), py::arg("scene"), py::arg("model"), py::arg("goal"), py::arg("q_start"),
      py::arg("params_json"), py::arg("camera"), py::arg("render"), py::arg("goal_config"));

  m.def("canonical_pose", &canonical_pose);
  m.def("generate_scene", [](std::uint64_t seed, const RobotModel& model, std::size_t n_obstacles) {
    SceneGenOptions o;
    o.n_obstacles = n_obstacles;
    return generate_scene(seed, o, model, canonical_pose(model));
  }, py::arg("seed"), py::arg("model"), py::arg("n_obstacles") = 4);

  m.def(
      "_run_benchmark",
      [](const std::filesystem::path& manifest, const std::vector<std::string>& planners,
         const std::string& params_json, double bin, const std::filesystem::path& out_dir, std::size_t workers) {
        Dataset d = load_manifest(manifest);
        if (bin > 0) d = filter_bin(d, bin);
        std::vector<PlannerSpec> specs;
        for (const auto& name : planners) specs.push_back({name, parse_planner_kind(name), params_from(params_json)});
        BenchReport rep;
        {
          py::gil_scoped_release release;
          rep = run_benchmark(d, specs, out_dir, BenchOptions{workers, false});
        }
        py::list rows;
        for (const SummaryRow& s : rep.summary) {
          rows.append(py::dict(py::arg("planner") = s.planner, py::arg("bin") = s.bin,
                               py::arg("success_rate") = s.success_rate, py::arg("path_length_mean") = s.path_length_mean,
                               py::arg("n_success") = s.n_success, py::arg("n_total") = s.n_total));
        }
        return rows;
      },
      py::arg("manifest"), py::arg("planners"), py::arg("params_json"), py::arg("bin"), py::arg("out_dir"),
      py::arg("workers"));
}
