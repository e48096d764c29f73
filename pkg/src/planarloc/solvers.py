"""Minimal solvers for absolute pose under planar motion.

A depth-bearing correspondence makes the translation an affine function of
the rotation, so one further constraint closes the 3-DoF system: a second
depth point gives a linear system with a unique angle, while a 2D-2D match
restricts (cos, sin) to a conic whose unit-circle intersections come from
a quartic in the tangent half-angle.

Observations from auxiliary rigidly-linked views enter through a
FramePoseGraph; the returned poses always relate the anchor pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    CorrespondenceDP,
    CorrespondenceP,
    FramePoseGraph,
    PlanarPose,
    RelativeTransform,
    wrap_angle,
)
from .quartic import IdenticallyZero, solve_quartic

# R(theta) = cos * _ROT_C + sin * _ROT_S + _ROT_1
_ROT_C = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
_ROT_S = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
_ROT_1 = np.array([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])

_ANCHOR_ONLY = FramePoseGraph.single_camera()

# angle candidates closer than this are one root seen twice
_THETA_DEDUPE = 1e-9
# circle-conic residual bound (relative to coefficient scale) for accepting
# an angle candidate
_CONIC_RESIDUAL_TOL = 1e-8
# vanishing leading quartic coefficient admits the half-turn angle
_PI_CANDIDATE_TOL = 1e-10


class DegenerateSample(ValueError):
    """Sample geometry leaves the pose underdetermined."""


@dataclass(frozen=True)
class PoseCandidateSet:
    """Solver output: up to four pose hypotheses plus their provenance."""

    candidates: tuple
    source: str

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self):
        return len(self.candidates)

    def __bool__(self):
        return bool(self.candidates)


def build_relative_pose(pose: PlanarPose, graph: FramePoseGraph | None,
                        query_frame: int = 0, ref_frame: int = 0) -> RelativeTransform:
    """Transform taking ref_frame points to query_frame points under `pose`."""
    return (graph or _ANCHOR_ONLY).relative(pose, query_frame, ref_frame)


def _dp_constraint_rows(dp: CorrespondenceDP, graph: FramePoseGraph):
    """Linear constraints a depth correspondence puts on (cos, sin, t_x, t_z).

    Returns (rows, rhs) with rows @ (c, s, t_x, t_z) - rhs equal to the two
    collinearity residuals (v X - u Y, v Z - Y) between the transformed map
    point (X, Y, Z) and the observed ray (u, v, 1).
    """
    off = graph.query_offset(dp.query_frame)
    base = graph.ref_pose(dp.ref_frame)
    Ra, ta = off.rotation, off.translation
    Pr = base.apply(dp.point3d)
    g_c = Ra @ (_ROT_C @ Pr)
    g_s = Ra @ (_ROT_S @ Pr)
    g_0 = Ra @ (_ROT_1 @ Pr) + ta
    cols = (g_c, g_s, Ra[:, 0], Ra[:, 2])
    u, v = dp.query.u, dp.query.v
    rows = np.array([[v * w[0] - u * w[1] for w in cols],
                     [v * w[2] - w[1] for w in cols]])
    rhs = -np.array([v * g_0[0] - u * g_0[1], v * g_0[2] - g_0[1]])
    return rows, rhs


def _t_map(rows: np.ndarray, rhs: np.ndarray):
    """Affine map (c, s) -> (t_x, t_z) solving the depth-point constraints.

    Raises DegenerateSample when the translation block is rank deficient,
    which happens when the observed ray lies in the motion plane.
    """
    M = rows[:, 2:4]
    if np.linalg.svd(M, compute_uv=False)[-1] < 1e-8:
        raise DegenerateSample("translation unobservable from this depth point")
    G = -np.linalg.solve(M, rows[:, :2])
    h = np.linalg.solve(M, rhs)
    return G, h


def _conic_coefficients(t_map, p: CorrespondenceP, graph: FramePoseGraph):
    """Epipolar constraint as a quadratic in (cos, sin).

    With the translation eliminated through `t_map`, the triple product
    q . (t_rel x R_rel r) becomes A c^2 + B c s + C s^2 + D c + E s + F.
    Returns (coeffs, mag) where mag bounds the coefficient magnitude
    reachable from the inputs; coefficients vanishing relative to mag mean
    the pair carries no rotational information.
    """
    G, h = t_map
    off = graph.query_offset(p.query_frame)
    base = graph.ref_pose(p.ref_frame)
    Ra, ta = off.rotation, off.translation
    Rb, tb = base.rotation, base.translation
    r3 = Rb @ p.reference.ray()
    u_c = Ra @ (_ROT_C @ r3)
    u_s = Ra @ (_ROT_S @ r3)
    u_0 = Ra @ (_ROT_1 @ r3)
    v_c = np.array([G[0, 0], 0.0, G[1, 0]])
    v_s = np.array([G[0, 1], 0.0, G[1, 1]])
    v_0 = np.array([h[0], 0.0, h[1]])
    w_c = Ra @ (_ROT_C @ tb + v_c)
    w_s = Ra @ (_ROT_S @ tb + v_s)
    w_0 = Ra @ (_ROT_1 @ tb + v_0) + ta
    q2 = p.query.ray()
    coeffs = np.array([
        q2 @ np.cross(w_c, u_c),
        q2 @ (np.cross(w_c, u_s) + np.cross(w_s, u_c)),
        q2 @ np.cross(w_s, u_s),
        q2 @ (np.cross(w_c, u_0) + np.cross(w_0, u_c)),
        q2 @ (np.cross(w_s, u_0) + np.cross(w_0, u_s)),
        q2 @ np.cross(w_0, u_0),
    ])
    w_mag = max(np.linalg.norm(w) for w in (w_c, w_s, w_0))
    u_mag = max(np.linalg.norm(u) for u in (u_c, u_s, u_0))
    mag = float(np.linalg.norm(q2) * w_mag * u_mag)
    return coeffs, mag


def _source_tag(base: str, *corrs) -> str:
    aux = any(c.ref_frame != 0 or c.query_frame != 0 for c in corrs)
    return ("mc" + base) if aux else base


def solve_1p1dp(dp: CorrespondenceDP, p: CorrespondenceP,
                graph: FramePoseGraph | None = None) -> PoseCandidateSet:
    """Pose candidates from one depth point plus one 2D-2D match.

    Returns up to four candidates (the circle-conic intersections), sorted
    by angle. An empty set means the conic misses the unit circle, which
    under outliers or noise is a valid no-solution outcome.

    Raises DegenerateSample when the pair cannot constrain the pose: depth
    ray in the motion plane, or an epipolar constraint that vanishes
    identically (e.g. both correspondences are the same feature).
    """
    graph = graph or _ANCHOR_ONLY
    rows, rhs = _dp_constraint_rows(dp, graph)
    G, h = _t_map(rows, rhs)
    coeffs, mag = _conic_coefficients((G, h), p, graph)
    scale = float(np.abs(coeffs).max())
    if scale <= 1e-12 * max(mag, 1e-12):
        raise DegenerateSample("epipolar constraint vanishes for this pair")
    A, B, C, D, E, F = coeffs / scale

    # Weierstrass substitution c = (1-q^2)/(1+q^2), s = 2q/(1+q^2)
    quartic = np.array([
        A - D + F,
        2.0 * (E - B),
        -2.0 * A + 4.0 * C + 2.0 * F,
        2.0 * (B + E),
        A + D + F,
    ])
    try:
        q_roots = solve_quartic(quartic)
    except IdenticallyZero:
        raise DegenerateSample("rotation unconstrained for this pair") from None
    thetas = [2.0 * math.atan(q) for q in q_roots]
    if abs(A - D + F) <= _PI_CANDIDATE_TOL:
        # the half-angle parameterization misses theta = pi exactly
        thetas.append(math.pi)

    sel = []
    for th in thetas:
        c, s = math.cos(th), math.sin(th)
        g = A * c * c + B * c * s + C * s * s + D * c + E * s + F
        if abs(g) > _CONIC_RESIDUAL_TOL:
            continue
        dup = False
        for i, (th0, g0) in enumerate(sel):
            if abs(wrap_angle(th - th0)) <= _THETA_DEDUPE:
                if abs(g) < abs(g0):
                    sel[i] = (th, g)
                dup = True
                break
        if not dup:
            sel.append((th, g))
    if len(sel) > 4:
        sel = sorted(sel, key=lambda item: abs(item[1]))[:4]

    out = []
    for th, _ in sorted(sel):
        t = h + G @ np.array([math.cos(th), math.sin(th)])
        out.append(PlanarPose(th, t[0], t[1]))
    return PoseCandidateSet(tuple(out), _source_tag("1p1dp", dp, p))


def solve_2dp(dp_a: CorrespondenceDP, dp_b: CorrespondenceDP,
              graph: FramePoseGraph | None = None) -> PoseCandidateSet:
    """Unique pose from two depth points.

    Stacks both pairs of linear constraints into a 4x4 system in
    (cos, sin, t_x, t_z), projects the rotation part onto the unit circle,
    and re-solves the translation at the projected angle.

    Raises DegenerateSample for rank-deficient geometry (duplicate feature,
    points sharing (x, z), rays in the motion plane).
    """
    graph = graph or _ANCHOR_ONLY
    rows_a, rhs_a = _dp_constraint_rows(dp_a, graph)
    rows_b, rhs_b = _dp_constraint_rows(dp_b, graph)
    A4 = np.vstack([rows_a, rows_b])
    b4 = np.concatenate([rhs_a, rhs_b])
    if np.linalg.cond(A4) > 1e12:
        raise DegenerateSample("depth pair leaves the pose underdetermined")
    x = np.linalg.solve(A4, b4)
    n = math.hypot(x[0], x[1])
    if n < 1e-8:
        raise DegenerateSample("rotation direction unresolved by depth pair")
    c, s = x[0] / n, x[1] / n
    theta = math.atan2(s, c)

    cs = np.array([c, s])
    M = np.vstack([rows_a[:, 2:4], rows_b[:, 2:4]])
    rt = np.concatenate([rhs_a - rows_a[:, :2] @ cs, rhs_b - rows_b[:, :2] @ cs])
    t, *_ = np.linalg.lstsq(M, rt, rcond=None)
    pose = PlanarPose(theta, t[0], t[1])
    return PoseCandidateSet((pose,), _source_tag("2dp", dp_a, dp_b))
