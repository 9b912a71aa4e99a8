"""Visual-goal RRT planning for planar N-link arms.

Images are 2-D float arrays (rows top to bottom), configurations 1-D arrays
of joint angles in radians. Planner parameters are plain dicts keyed like the
JSON config files (``alpha``, ``explore_ratio``, ``max_iters``, ...).
"""

import json

from ._vrrt import (
    Box,
    Camera,
    RenderParams,
    RobotModel,
    Scene,
    canonical_pose,
    config_valid,
    edge_collision_free,
    generate_scene,
    gradient_check,
    joint_positions,
    loss_and_grad,
    p_frontier,
    psnr,
    read_pgm,
    render,
    write_pgm,
)
from . import _vrrt

__all__ = [
    "Box",
    "Camera",
    "RenderParams",
    "RobotModel",
    "Scene",
    "canonical_pose",
    "config_valid",
    "default_params",
    "edge_collision_free",
    "generate_scene",
    "gradient_check",
    "joint_positions",
    "loss_and_grad",
    "p_frontier",
    "plan",
    "psnr",
    "read_pgm",
    "render",
    "run_benchmark",
    "write_pgm",
]


def default_params():
    return json.loads(_vrrt._default_params())


def plan(goal, q_start, scene=None, model=None, planner="vrrt", params=None, camera=None, render_params=None,
         goal_config=None):
    """Plan from q_start toward a goal image. Returns a dict with path, losses and counters.

    planner is one of vrrt, gd, two-stage, rrt, rrt-star; the last two need goal_config.
    For vrrt, goal_config acts as a noisy goal hint.
    """
    return _vrrt._plan(
        planner,
        scene if scene is not None else Scene(),
        model if model is not None else RobotModel.desk_arm(),
        goal,
        q_start,
        json.dumps(params or {}),
        camera if camera is not None else Camera.desk(),
        render_params if render_params is not None else RenderParams(),
        goal_config,
    )


def run_benchmark(manifest, planners=("vrrt", "gd"), out_dir="vrrt_out", params=None, bin=0.0, workers=1):
    """Benchmark a dataset manifest; writes summary.csv and tasks_log.csv and returns the summary rows."""
    return _vrrt._run_benchmark(str(manifest), list(planners), json.dumps(params or {}), bin, str(out_dir), workers)
