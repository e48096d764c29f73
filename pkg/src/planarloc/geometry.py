"""Camera geometry for absolute pose estimation under planar motion.

Poses map points from a reference camera frame into a query camera frame.
Motion is constrained to a rotation about the gravity-aligned y axis plus a
translation in the x-z plane, so a pose has three degrees of freedom
(theta, t_x, t_z). Image observations are represented as gravity-aligned
normalized rays scaled to unit forward component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

# Map points farther than this (meters, forward coordinate) are treated as
# having unreliable depth when ingesting correspondence records.
DEPTH_RELIABILITY_THRESHOLD = 5.0


class CheiralityViolation(ValueError):
    """Point does not lie in front of the camera."""


class DegenerateRay(ValueError):
    """Pixel back-projects to a ray with near-zero forward component."""


class ZeroBaseline(ValueError):
    """Epipolar geometry undefined: relative translation is near zero."""


class UnknownFrame(KeyError):
    """Frame index not present in the pose graph."""


def wrap_angle(theta: float) -> float:
    """Wrap an angle in radians to the interval (-pi, pi]."""
    t = math.remainder(theta, TWO_PI)
    if t <= -math.pi:
        t += TWO_PI
    return t


def skew(v) -> np.ndarray:
    """Cross-product matrix: skew(v) @ w == cross(v, w)."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def _check_rotation(R: np.ndarray, tol: float = 1e-12) -> None:
    if R.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got {R.shape}")
    err = np.abs(R.T @ R - np.eye(3)).max()
    if err > tol:
        raise ValueError(f"rotation not orthonormal (deviation {err:.3e})")
    if abs(np.linalg.det(R) - 1.0) > tol:
        raise ValueError("rotation must have determinant +1")


@dataclass(frozen=True)
class PlanarPose:
    """Rigid motion with a single rotational DoF about the y axis.

    Maps reference-frame points P to query-frame points R(theta) @ P + t with

        R(theta) = [[cos t, 0, sin t], [0, 1, 0], [-sin t, 0, cos t]],
        t = [t_x, 0, t_z].

    theta is stored wrapped to (-pi, pi].
    """

    theta: float
    t_x: float
    t_z: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))
        object.__setattr__(self, "t_x", float(self.t_x))
        object.__setattr__(self, "t_z", float(self.t_z))

    @classmethod
    def identity(cls) -> "PlanarPose":
        return cls(0.0, 0.0, 0.0)

    def rotation(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])

    def translation(self) -> np.ndarray:
        return np.array([self.t_x, 0.0, self.t_z])

    def matrix(self) -> np.ndarray:
        """4x4 homogeneous transform."""
        T = np.eye(4)
        T[:3, :3] = self.rotation()
        T[:3, 3] = self.translation()
        return T

    def apply(self, points) -> np.ndarray:
        """Transform one (3,) point or an (n, 3) array of points."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation().T + self.translation()

    def compose(self, other: "PlanarPose") -> "PlanarPose":
        """Pose equivalent to applying `other` first, then `self`."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        return PlanarPose(
            self.theta + other.theta,
            c * other.t_x + s * other.t_z + self.t_x,
            -s * other.t_x + c * other.t_z + self.t_z,
        )

    def inverse(self) -> "PlanarPose":
        c, s = math.cos(self.theta), math.sin(self.theta)
        # -R(-theta) @ t
        return PlanarPose(-self.theta, -(c * self.t_x - s * self.t_z),
                          -(s * self.t_x + c * self.t_z))

    def as_transform(self) -> "RelativeTransform":
        return RelativeTransform(self.rotation(), self.translation())


@dataclass(frozen=True)
class RelativeTransform:
    """General rigid transform between two camera frames."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        R = np.array(self.rotation, dtype=float)
        t = np.array(self.translation, dtype=float)
        if t.shape != (3,):
            raise ValueError(f"translation must be (3,), got {t.shape}")
        _check_rotation(R)
        R.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "RelativeTransform":
        return cls(np.eye(3), np.zeros(3))

    def matrix(self) -> np.ndarray:
        T = np.eye(4)
        T[:3, :3] = self.rotation
        T[:3, 3] = self.translation
        return T

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.translation

    def compose(self, other: "RelativeTransform") -> "RelativeTransform":
        """Transform equivalent to applying `other` first, then `self`."""
        return RelativeTransform(self.rotation @ other.rotation,
                                 self.rotation @ other.translation + self.translation)

    def inverse(self) -> "RelativeTransform":
        return RelativeTransform(self.rotation.T, -self.rotation.T @ self.translation)


@dataclass(frozen=True)
class NormalizedPoint:
    """Gravity-aligned normalized image coordinates.

    The underlying ray is [u, v, 1]: the camera ray after intrinsic
    correction and gravity alignment, rescaled to unit forward component.
    """

    u: float
    v: float

    def ray(self) -> np.ndarray:
        return np.array([self.u, self.v, 1.0])


@dataclass(frozen=True)
class CorrespondenceDP:
    """Query observation matched to a reference map point with depth.

    point3d is expressed in the camera frame of `ref_frame` and must have
    positive forward coordinate. `reliable` marks whether the depth is
    trusted for hypothesis sampling.
    """

    query: NormalizedPoint
    point3d: np.ndarray
    ref_frame: int = 0
    query_frame: int = 0
    reliable: bool = True

    def __post_init__(self):
        P = np.array(self.point3d, dtype=float)
        if P.shape != (3,):
            raise ValueError(f"point3d must be (3,), got {P.shape}")
        if P[2] <= 0.0:
            raise CheiralityViolation("map point must be in front of its reference camera")
        P.setflags(write=False)
        object.__setattr__(self, "point3d", P)

    @classmethod
    def from_depth(cls, query: NormalizedPoint, point3d, ref_frame: int = 0,
                   query_frame: int = 0,
                   depth_threshold: float = DEPTH_RELIABILITY_THRESHOLD) -> "CorrespondenceDP":
        """Build a correspondence, flagging depth reliable iff z < depth_threshold."""
        P = np.asarray(point3d, dtype=float)
        return cls(query, P, ref_frame, query_frame, reliable=bool(P[2] < depth_threshold))

    def as_point_pair(self) -> "CorrespondenceP":
        """Drop the depth: reference observation is the map point's viewing ray."""
        x, y, z = self.point3d
        return CorrespondenceP(self.query, NormalizedPoint(x / z, y / z),
                               self.ref_frame, self.query_frame)


@dataclass(frozen=True)
class CorrespondenceP:
    """2D-2D feature match between a query view and a reference view."""

    query: NormalizedPoint
    reference: NormalizedPoint
    ref_frame: int = 0
    query_frame: int = 0


@dataclass(frozen=True)
class FramePoseGraph:
    """Known rigid links tying auxiliary views to the anchor query/reference pair.

    ref_poses[j] takes points from reference frame j into the anchor
    reference frame; query_offsets[i] takes points from the anchor query
    frame into query frame i. Index 0 is the anchor on both sides and is
    always the exact identity.
    """

    ref_poses: dict = field(default_factory=dict)
    query_offsets: dict = field(default_factory=dict)

    def __post_init__(self):
        ident = RelativeTransform.identity()
        for name in ("ref_poses", "query_offsets"):
            table = dict(getattr(self, name))
            if 0 in table:
                T = table[0]
                dev = max(np.abs(T.rotation - np.eye(3)).max(),
                          np.abs(T.translation).max())
                if dev > 1e-12:
                    raise ValueError(f"anchor entry of {name} must be the identity")
            table[0] = ident
            object.__setattr__(self, name, table)

    @classmethod
    def single_camera(cls) -> "FramePoseGraph":
        return cls({}, {})

    def ref_pose(self, ref_frame: int) -> RelativeTransform:
        try:
            return self.ref_poses[ref_frame]
        except KeyError:
            raise UnknownFrame(f"reference frame {ref_frame} not in graph") from None

    def query_offset(self, query_frame: int) -> RelativeTransform:
        try:
            return self.query_offsets[query_frame]
        except KeyError:
            raise UnknownFrame(f"query frame {query_frame} not in graph") from None

    def relative(self, pose: PlanarPose, query_frame: int, ref_frame: int) -> RelativeTransform:
        """Transform from reference frame `ref_frame` into query frame `query_frame`."""
        T = self.query_offset(query_frame).compose(pose.as_transform())
        return T.compose(self.ref_pose(ref_frame))


@dataclass(frozen=True)
class CameraModel:
    """Pinhole camera with a gravity-alignment rotation.

    `alignment` rotates raw camera rays (K^-1 applied to a pixel) into the
    gravity-aligned frame that planar poses live in; identity when the
    camera is already upright.
    """

    fx: float
    fy: float
    cx: float
    cy: float
    width: int = 1280
    height: int = 960
    alignment: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        A = np.array(self.alignment, dtype=float)
        _check_rotation(A, tol=1e-9)
        A.setflags(write=False)
        object.__setattr__(self, "alignment", A)
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")

    def K(self) -> np.ndarray:
        return np.array([[self.fx, 0.0, self.cx],
                         [0.0, self.fy, self.cy],
                         [0.0, 0.0, 1.0]])

    def K_inv(self) -> np.ndarray:
        return np.array([[1.0 / self.fx, 0.0, -self.cx / self.fx],
                         [0.0, 1.0 / self.fy, -self.cy / self.fy],
                         [0.0, 0.0, 1.0]])

    def contains(self, pixel) -> bool:
        u, v = float(pixel[0]), float(pixel[1])
        return 0.0 <= u < self.width and 0.0 <= v < self.height


def normalize(pixel, camera: CameraModel) -> NormalizedPoint:
    """Back-project a pixel to a gravity-aligned normalized point.

    Parameters
    ----------
    pixel : (2,) array-like, pixel coordinates (u, v).
    camera : CameraModel.

    Returns
    -------
    NormalizedPoint with ray alignment @ K^-1 @ [u, v, 1] rescaled to unit
    forward component.

    Raises
    ------
    DegenerateRay if the aligned ray has |z| < 1e-12.
    """
    u, v = float(pixel[0]), float(pixel[1])
    raw = np.array([(u - camera.cx) / camera.fx, (v - camera.cy) / camera.fy, 1.0])
    ray = camera.alignment @ raw
    if abs(ray[2]) < 1e-12:
        raise DegenerateRay("aligned ray parallel to the image plane")
    return NormalizedPoint(float(ray[0] / ray[2]), float(ray[1] / ray[2]))


def denormalize(point: NormalizedPoint, camera: CameraModel) -> np.ndarray:
    """Invert `normalize`: map a normalized point back to pixel coordinates."""
    raw = camera.alignment.T @ point.ray()
    if raw[2] < 1e-12:
        raise DegenerateRay("normalized point maps behind the raw camera")
    return np.array([camera.fx * raw[0] / raw[2] + camera.cx,
                     camera.fy * raw[1] / raw[2] + camera.cy])


def _project_point(transform: RelativeTransform, point3d, camera: CameraModel) -> np.ndarray:
    P = transform.apply(np.asarray(point3d, dtype=float))
    if P[2] <= 0.0:
        raise CheiralityViolation("transformed point behind the query camera")
    raw = camera.alignment.T @ P
    if raw[2] <= 1e-12:
        raise CheiralityViolation("transformed point behind the raw image plane")
    return np.array([camera.fx * raw[0] / raw[2] + camera.cx,
                     camera.fy * raw[1] / raw[2] + camera.cy])


def project(pose: PlanarPose, point3d, camera: CameraModel) -> np.ndarray:
    """Project a reference-frame 3D point into the query view.

    Returns the (2,) pixel of R @ P + t through the camera intrinsics;
    raises CheiralityViolation when the transformed point is not in front
    of the camera.
    """
    return _project_point(pose.as_transform(), point3d, camera)


def reprojection_residual(pose: PlanarPose, corr: CorrespondenceDP, camera: CameraModel,
                          graph: FramePoseGraph | None = None) -> float:
    """Pixel distance between the projected map point and the observation.

    Frames outside the anchor pair require `graph`. Returns +inf when the
    point projects behind the camera.
    """
    if graph is None:
        if corr.query_frame != 0 or corr.ref_frame != 0:
            raise UnknownFrame("non-anchor correspondence requires a pose graph")
        T = pose.as_transform()
    else:
        T = graph.relative(pose, corr.query_frame, corr.ref_frame)
    try:
        pix = _project_point(T, corr.point3d, camera)
    except CheiralityViolation:
        return math.inf
    obs = denormalize(corr.query, camera)
    return float(np.linalg.norm(pix - obs))


def sampson_residual(pose_pair, corr: CorrespondenceP) -> float:
    """First-order geometric distance to the epipolar constraint.

    Parameters
    ----------
    pose_pair : RelativeTransform or PlanarPose between the correspondence's
        reference and query frames.
    corr : CorrespondenceP with normalized query and reference observations.

    Returns
    -------
    Non-negative scalar in normalized-ray units:
    |q^T E r| / sqrt((E r)_1^2 + (E r)_2^2 + (E^T q)_1^2 + (E^T q)_2^2)
    with E = skew(t) @ R. Exactly zero when the constraint holds and the
    denominator is nonzero.

    Raises
    ------
    ZeroBaseline when the relative translation norm is below 1e-9.
    """
    if isinstance(pose_pair, PlanarPose):
        pose_pair = pose_pair.as_transform()
    t = pose_pair.translation
    if float(np.linalg.norm(t)) < 1e-9:
        raise ZeroBaseline("relative translation too small for an epipolar constraint")
    E = skew(t) @ pose_pair.rotation
    q = corr.query.ray()
    r = corr.reference.ray()
    Er = E @ r
    Etq = E.T @ q
    num = float(q @ Er)
    den = Er[0] ** 2 + Er[1] ** 2 + Etq[0] ** 2 + Etq[1] ** 2
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return abs(num) / math.sqrt(den)


def rotation_error(R_est, R_gt) -> float:
    """Geodesic rotation distance in degrees.

    Accepts 3x3 matrices or PlanarPose instances.
    """
    if isinstance(R_est, PlanarPose):
        R_est = R_est.rotation()
    if isinstance(R_gt, PlanarPose):
        R_gt = R_gt.rotation()
    c = 0.5 * (float(np.trace(np.asarray(R_est).T @ np.asarray(R_gt))) - 1.0)
    return math.degrees(math.acos(min(1.0, max(-1.0, c))))


def translation_error(t_est, t_gt) -> float:
    """Euclidean translation distance in meters.

    Accepts 3-vectors or PlanarPose instances.
    """
    if isinstance(t_est, PlanarPose):
        t_est = t_est.translation()
    if isinstance(t_gt, PlanarPose):
        t_gt = t_gt.translation()
    return float(np.linalg.norm(np.asarray(t_est, dtype=float) - np.asarray(t_gt, dtype=float)))


def pose_success(est: PlanarPose, gt: PlanarPose, t_tol: float = 0.1,
                 r_tol_deg: float = 1.0) -> bool:
    """Localization success: translation under t_tol meters and rotation under r_tol_deg."""
    return (translation_error(est, gt) < t_tol
            and rotation_error(est, gt) < r_tol_deg)
