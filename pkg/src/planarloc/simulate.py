"""Synthetic planar localization worlds for benchmarking.

Generates ground-truth poses, 3D points in a cube, and mixed 2D-3D / 2D-2D
correspondence sets with controllable pixel noise, depth noise, outlier
contamination, and depth availability. Multi-camera rigs are supported
through the same frame-graph mechanism the estimators consume.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    CameraModel,
    CorrespondenceDP,
    CorrespondenceP,
    FramePoseGraph,
    PlanarPose,
    RelativeTransform,
    normalize,
)

# candidate 3D points drawn per camera per pose attempt before declaring
# the slot unfillable and redrawing the pose
_SLOT_DRAW_CAP = 10000
# fresh ground-truth poses tried before giving up on the configuration
_POSE_REDRAW_CAP = 200
# minimum distance from the reference camera after depth noise
_MIN_RANGE = 0.05


class VisibilityExhausted(RuntimeError):
    """No pose/point draw satisfied the visibility requirements."""


@dataclass(frozen=True)
class CorrLabel:
    """Ground-truth bookkeeping for one generated correspondence."""

    is_outlier: bool
    has_reliable_depth: bool


@dataclass(frozen=True)
class SimConfig:
    """Knobs for one synthetic localization instance.

    Attributes
    ----------
    n_points_per_camera : visible correspondences generated per rig camera.
    cube_half_extent : half side length (m) of the world-point cube.
    translation_range : ground-truth t_x, t_z drawn uniformly in +-range (m).
    rotation_range : ground-truth heading drawn uniformly in +-range (rad).
    pixel_noise_sigma : isotropic Gaussian pixel noise per observation (px).
    depth_noise_sigma : Gaussian range noise along the reference ray (m).
    outlier_rate : fraction (ceil) of matches re-projected through a wrong pose.
    reliable_depth_rate : fraction (ceil) of matches that keep their depth.
    rig : camera-to-anchor transforms, identity first (single camera default).
    seed : RNG seed; int or sequence of ints.
    """

    n_points_per_camera: int = 50
    cube_half_extent: float = 8.0
    translation_range: float = 2.0
    rotation_range: float = math.pi
    pixel_noise_sigma: float = 0.0
    depth_noise_sigma: float = 0.05
    outlier_rate: float = 0.0
    reliable_depth_rate: float = 1.0
    rig: tuple = field(default_factory=lambda: (RelativeTransform.identity(),))
    seed: object = 0

    def __post_init__(self):
        if self.n_points_per_camera < 1:
            raise ValueError("n_points_per_camera must be at least 1")
        if self.cube_half_extent <= 0:
            raise ValueError("cube_half_extent must be positive")
        if self.translation_range < 0 or self.rotation_range < 0:
            raise ValueError("pose ranges must be non-negative")
        if self.pixel_noise_sigma < 0 or self.depth_noise_sigma < 0:
            raise ValueError("noise sigmas must be non-negative")
        for name in ("outlier_rate", "reliable_depth_rate"):
            r = getattr(self, name)
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        rig = tuple(self.rig)
        if not rig:
            raise ValueError("rig must contain at least one camera")
        first = rig[0]
        dev = max(np.abs(first.rotation - np.eye(3)).max(),
                  np.abs(first.translation).max())
        if dev > 1e-12:
            raise ValueError("first rig camera must be the identity transform")
        object.__setattr__(self, "rig", rig)


@dataclass
class SimInstance:
    """One generated localization problem with its ground truth.

    dps/ps hold the correspondences handed to the estimators; labels_dp and
    labels_p run parallel to them and record how each match was constructed.
    """

    gt_pose: PlanarPose
    dps: list
    ps: list
    graph: FramePoseGraph
    labels_dp: tuple
    labels_p: tuple


def make_rig(n_cameras: int = 3, yaw_step_deg: float = 60.0,
             spacing_m: float = 0.25) -> list:
    """Planar multi-camera rig: yawed cameras on a regular polygon.

    Camera i sits at vertex i of a regular n-gon with side length
    `spacing_m` (circumradius spacing / (2 sin(pi/n))) and is yawed by
    i * yaw_step_deg about the vertical axis. Transforms map camera-i
    coordinates into camera-0 coordinates; the first entry is the exact
    identity.
    """
    if n_cameras < 1:
        raise ValueError("rig needs at least one camera")
    if n_cameras == 1:
        return [RelativeTransform.identity()]
    if spacing_m <= 0:
        raise ValueError("spacing_m must be positive")
    radius = spacing_m / (2.0 * math.sin(math.pi / n_cameras))
    base = radius * np.array([1.0, 0.0, 0.0])
    rig = [RelativeTransform.identity()]
    for i in range(1, n_cameras):
        phi = 2.0 * math.pi * i / n_cameras
        center = radius * np.array([math.cos(phi), 0.0, math.sin(phi)]) - base
        yaw = math.radians(yaw_step_deg) * i
        rig.append(RelativeTransform(PlanarPose(yaw, 0.0, 0.0).rotation(), center))
    return rig


def _pixels_batch(points_cam: np.ndarray, camera: CameraModel):
    """Project (m, 3) camera-frame points; returns (pixels, in_view mask)."""
    z = points_cam[:, 2]
    raw = points_cam @ camera.alignment
    ok = (z > 1e-6) & (raw[:, 2] > 1e-12)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = camera.fx * raw[:, 0] / raw[:, 2] + camera.cx
        v = camera.fy * raw[:, 1] / raw[:, 2] + camera.cy
    ok &= (u >= 0.0) & (u < camera.width) & (v >= 0.0) & (v < camera.height)
    return np.stack([u, v], axis=1), ok


def _pixel(point_cam: np.ndarray, camera: CameraModel) -> np.ndarray:
    raw = camera.alignment.T @ point_cam
    return np.array([camera.fx * raw[0] / raw[2] + camera.cx,
                     camera.fy * raw[1] / raw[2] + camera.cy])


def _draw_pose(rng: np.random.Generator, cfg: SimConfig) -> PlanarPose:
    theta = rng.uniform(-cfg.rotation_range, cfg.rotation_range)
    t_x = rng.uniform(-cfg.translation_range, cfg.translation_range)
    t_z = rng.uniform(-cfg.translation_range, cfg.translation_range)
    return PlanarPose(theta, t_x, t_z)


def _visible_world_points(rng, cfg, camera, gt, inv):
    """Per camera, the first n cube draws visible in both its views.

    Draws in fixed-size chunks so cheap instances stay cheap while the
    total budget per camera still reaches the slot cap.
    """
    T = gt.as_transform()
    n = cfg.n_points_per_camera
    chunk = 2048
    world = []
    for B_inv in inv:
        accepted = []
        have = 0
        for _ in range(-(-_SLOT_DRAW_CAP // chunk)):
            cand = rng.uniform(-cfg.cube_half_extent, cfg.cube_half_extent,
                               size=(chunk, 3))
            _, ok_ref = _pixels_batch(B_inv.apply(cand), camera)
            _, ok_qry = _pixels_batch(B_inv.apply(T.apply(cand)), camera)
            keep = np.flatnonzero(ok_ref & ok_qry)[:n - have]
            if len(keep):
                accepted.append(cand[keep])
                have += len(keep)
            if have == n:
                break
        if have < n:
            return None
        world.append(np.concatenate(accepted, axis=0))
    return world


def generate_instance(cfg: SimConfig, camera: CameraModel) -> SimInstance:
    """Generate one synthetic localization instance.

    Protocol per rig camera: draw cube points until exactly
    n_points_per_camera are visible (positive depth, inside the image) in
    both the reference and the query view; add isotropic pixel noise to
    each observation; place the 3D point along the noisy reference ray at
    the true range plus Gaussian noise; re-project an outlier subset
    through independent random poses (reference side and depth kept); and
    demote everything outside the reliable-depth subset to a 2D-2D match.

    Raises VisibilityExhausted when no pose admits enough visible points.
    """
    rng = np.random.default_rng(cfg.seed)
    inv = [B.inverse() for B in cfg.rig]
    n = cfg.n_points_per_camera

    for _ in range(_POSE_REDRAW_CAP):
        gt = _draw_pose(rng, cfg)
        world = _visible_world_points(rng, cfg, camera, gt, inv)
        if world is not None:
            break
    else:
        raise VisibilityExhausted(
            "no ground-truth pose kept every rig camera populated; "
            "check rig geometry against the point cube")

    T = gt.as_transform()
    k_out = math.ceil(cfg.outlier_rate * n)
    k_rel = math.ceil(cfg.reliable_depth_rate * n)
    dps, ps, labels_dp, labels_p = [], [], [], []

    for i, B_inv in enumerate(inv):
        out_set = set(rng.choice(n, size=k_out, replace=False).tolist()) if k_out else set()
        rel_set = set(rng.choice(n, size=k_rel, replace=False).tolist()) if k_rel else set()
        for j in range(n):
            P = world[i][j]
            P_ref = B_inv.apply(P)

            px_ref = _pixel(P_ref, camera) + rng.normal(0.0, cfg.pixel_noise_sigma, size=2)
            ref_ray = normalize(px_ref, camera)

            true_range = float(np.linalg.norm(P_ref))
            delta = rng.normal(0.0, cfg.depth_noise_sigma)
            for _ in range(100):
                if true_range + delta > _MIN_RANGE:
                    break
                delta = rng.normal(0.0, cfg.depth_noise_sigma)
            else:
                delta = 0.0
            ray = ref_ray.ray()
            point3d = ray / np.linalg.norm(ray) * (true_range + delta)

            is_outlier = j in out_set
            if is_outlier:
                px_qry = None
                for _ in range(_SLOT_DRAW_CAP):
                    wrong = _draw_pose(rng, cfg)
                    P_w = B_inv.apply(wrong.apply(P))[None, :]
                    px, ok = _pixels_batch(P_w, camera)
                    if ok[0]:
                        px_qry = px[0]
                        break
                if px_qry is None:
                    raise VisibilityExhausted(
                        "no random pose produced an in-view outlier observation")
            else:
                P_qry = B_inv.apply(T.apply(P))
                px_qry = _pixel(P_qry, camera) + rng.normal(0.0, cfg.pixel_noise_sigma, size=2)
            query = normalize(px_qry, camera)

            label = CorrLabel(is_outlier=is_outlier, has_reliable_depth=j in rel_set)
            if j in rel_set:
                dps.append(CorrespondenceDP(query, point3d, ref_frame=i,
                                            query_frame=i, reliable=True))
                labels_dp.append(label)
            else:
                ps.append(CorrespondenceP(query, ref_ray, ref_frame=i, query_frame=i))
                labels_p.append(label)

    n_cams = len(cfg.rig)
    graph = FramePoseGraph({i: cfg.rig[i] for i in range(1, n_cams)},
                           {i: inv[i] for i in range(1, n_cams)})
    return SimInstance(gt_pose=gt, dps=dps, ps=ps, graph=graph,
                       labels_dp=tuple(labels_dp), labels_p=tuple(labels_p))
