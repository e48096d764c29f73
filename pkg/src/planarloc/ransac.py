"""Robust planar pose estimation from mixed correspondence sets.

RANSAC over depth-bearing and 2D-2D matches with the two minimal solvers,
plus Gauss-Newton refinement on the inlier set. Hypothesis generation and
scoring are vectorized over iterations; randomness comes from a
counter-based generator with one row of draws per iteration, so the result
depends only on the inputs and the seed, never on chunking or on how many
iterations end up executed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    CameraModel,
    CheiralityViolation,
    FramePoseGraph,
    PlanarPose,
    ZeroBaseline,
    _project_point,
    denormalize,
    sampson_residual,
)
from .quartic import IdenticallyZero, solve_quartic
from .selector import NoViableSolver, Solver, select_solver

# the batch paths reuse the scalar constraint construction so both routes
# share a single derivation
from .solvers import (
    _CONIC_RESIDUAL_TOL,
    _PI_CANDIDATE_TOL,
    _ROT_1,
    _ROT_C,
    _ROT_S,
    DegenerateSample,
    _dp_constraint_rows,
    _t_map,
)

_ANCHOR = FramePoseGraph.single_camera()

# iterations processed per vectorized block; adaptive mode uses small blocks
# so the stopping rule is checked often
_FIXED_CHUNK = 512
_ADAPTIVE_CHUNK = 64

# minimal sample size shared by both solvers: one depth point plus one match,
# or two depth points
_MIN_SAMPLE = 2


class InsufficientCorrespondences(ValueError):
    """Input set cannot form even one minimal sample."""


class EstimationFailed(RuntimeError):
    """No hypothesis reached minimal inlier support."""


@dataclass(frozen=True)
class RansacConfig:
    """Knobs for the robust estimator.

    reproj_threshold_px gates depth correspondences by reprojection error;
    sampson_threshold gates 2D-2D matches in normalized-ray units. With
    adaptive=True iteration stops once the standard confidence bound on the
    best support is met; the default runs the full budget. refine=True runs
    a Gauss-Newton polish on the winning inlier set.
    """

    max_iterations: int = 500
    confidence: float = 0.99
    reproj_threshold_px: float = 4.0
    sampson_threshold: float = 1e-3
    solver: Solver = Solver.MIX
    seed: int = 0
    adaptive: bool = False
    refine: bool = False
    refine_weight: float = 1e6

    def __post_init__(self):
        if int(self.max_iterations) < 1:
            raise ValueError("max_iterations must be at least 1")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie strictly between 0 and 1")
        if self.reproj_threshold_px <= 0.0:
            raise ValueError("reproj_threshold_px must be positive")
        if self.sampson_threshold <= 0.0:
            raise ValueError("sampson_threshold must be positive")
        if not isinstance(self.solver, Solver):
            raise ValueError("solver must be a Solver member")
        if self.refine_weight <= 0.0:
            raise ValueError("refine_weight must be positive")


@dataclass(eq=False)
class RansacResult:
    """Winning pose with its support.

    score always equals the popcount of the two inlier masks. refined says
    whether the returned pose went through the Gauss-Newton polish.
    """

    pose: PlanarPose
    inlier_mask_dp: np.ndarray
    inlier_mask_p: np.ndarray
    iterations_used: int
    score: int
    refined: bool


@dataclass(eq=False)
class RefinementResult:
    """Pose polish outcome. singular=True means the normal equations were
    too ill-conditioned to proceed and the pose is returned as it was."""

    pose: PlanarPose
    singular: bool
    iterations: int
    cost: float


def expected_iterations(success_probability: float, confidence: float,
                        cap: int = 100000) -> int:
    """Trials needed before one all-inlier sample appears with the given
    confidence. Saturates at `cap` for hopeless rates and floors at 1."""
    p = float(success_probability)
    if p >= 1.0:
        return 1
    if p <= 0.0:
        return int(cap)
    conf = float(confidence)
    if conf >= 1.0:
        return int(cap)
    if conf <= 0.0:
        return 1
    need = math.log1p(-conf) / math.log1p(-p)
    return int(max(1, min(math.ceil(need), int(cap))))


# ---------------------------------------------------------------------------
# packed correspondence arrays


class _Packed:
    """Correspondence data flattened into arrays for vectorized iterations.

    The 2D-2D pool is the P list followed by every depth correspondence
    demoted to a point pair, so a depth-plus-match sample can draw its
    second element from everything except the depth point itself.
    """

    def __init__(self, dps, ps, graph, camera):
        self.n_dp = len(dps)
        self.n_p = len(ps)
        n = self.n_dp
        self.Ra_dp = np.zeros((n, 3, 3))
        self.ta_dp = np.zeros((n, 3))
        self.Pr = np.zeros((n, 3))
        self.obs_px = np.zeros((n, 2))
        self.rows = np.zeros((n, 2, 4))
        self.rhs = np.zeros((n, 2))
        self.G = np.zeros((n, 2, 2))
        self.h = np.zeros((n, 2))
        self.ok_tmap = np.zeros(n, dtype=bool)
        for i, dp in enumerate(dps):
            off = graph.query_offset(dp.query_frame)
            base = graph.ref_pose(dp.ref_frame)
            self.Ra_dp[i] = off.rotation
            self.ta_dp[i] = off.translation
            self.Pr[i] = base.apply(dp.point3d)
            self.obs_px[i] = denormalize(dp.query, camera)
            rows, rhs = _dp_constraint_rows(dp, graph)
            self.rows[i] = rows
            self.rhs[i] = rhs
            try:
                G, h = _t_map(rows, rhs)
            except DegenerateSample:
                continue
            self.G[i] = G
            self.h[i] = h
            self.ok_tmap[i] = True
        self.rel_idx = np.array(
            [i for i, dp in enumerate(dps) if dp.reliable], dtype=np.int64)

        pool = list(ps) + [dp.as_point_pair() for dp in dps]
        m = len(pool)
        self.Ra_pool = np.zeros((m, 3, 3))
        self.pre_wc = np.zeros((m, 3))
        self.pre_ws = np.zeros((m, 3))
        self.pre_w0 = np.zeros((m, 3))
        self.u_c = np.zeros((m, 3))
        self.u_s = np.zeros((m, 3))
        self.u_0 = np.zeros((m, 3))
        self.q2 = np.zeros((m, 3))
        k = self.n_p
        self.Ra_s = np.zeros((k, 3, 3))
        self.Rb_s = np.zeros((k, 3, 3))
        self.ta_s = np.zeros((k, 3))
        self.tb_s = np.zeros((k, 3))
        self.q_s = np.zeros((k, 3))
        self.r3_s = np.zeros((k, 3))
        for j, p in enumerate(pool):
            off = graph.query_offset(p.query_frame)
            base = graph.ref_pose(p.ref_frame)
            Ra, ta = off.rotation, off.translation
            Rb, tb = base.rotation, base.translation
            r3 = Rb @ p.reference.ray()
            self.Ra_pool[j] = Ra
            self.u_c[j] = Ra @ (_ROT_C @ r3)
            self.u_s[j] = Ra @ (_ROT_S @ r3)
            self.u_0[j] = Ra @ (_ROT_1 @ r3)
            self.pre_wc[j] = Ra @ (_ROT_C @ tb)
            self.pre_ws[j] = Ra @ (_ROT_S @ tb)
            self.pre_w0[j] = Ra @ (_ROT_1 @ tb) + ta
            self.q2[j] = p.query.ray()
            if j < k:
                self.Ra_s[j] = Ra
                self.Rb_s[j] = Rb
                self.ta_s[j] = ta
                self.tb_s[j] = tb
                self.q_s[j] = self.q2[j]
                self.r3_s[j] = r3


# ---------------------------------------------------------------------------
# per-iteration randomness


def _draw_uniforms(seed: int, n: int) -> np.ndarray:
    """(n, 2) uniforms; row i is the full random budget of iteration i."""
    bits = np.random.Philox(key=[int(seed) % (1 << 64), 0])
    return np.random.Generator(bits).random((n, 2))


def _sample_1p1dp(u: np.ndarray, packed: _Packed):
    """Depth index plus pool index per iteration, never the same feature.

    The second draw picks uniformly among pool elements excluding the depth
    point's own demoted pair (skip-one trick keeps it exactly uniform).
    """
    rel = packed.rel_idx
    r = len(rel)
    m = packed.n_p + packed.n_dp
    d = np.minimum((u[:, 0] * r).astype(np.int64), r - 1)
    dp_i = rel[d]
    forbidden = packed.n_p + dp_i
    j = np.minimum((u[:, 1] * (m - 1)).astype(np.int64), m - 2)
    j = j + (j >= forbidden)
    return dp_i, j


def _sample_2dp(u: np.ndarray, packed: _Packed):
    """Two distinct reliable depth indices per iteration."""
    rel = packed.rel_idx
    r = len(rel)
    a = np.minimum((u[:, 0] * r).astype(np.int64), r - 1)
    b = np.minimum((u[:, 1] * (r - 1)).astype(np.int64), r - 2)
    b = b + (b >= a)
    return rel[a], rel[b]


# ---------------------------------------------------------------------------
# batched hypothesis generation


def _newton_batch(coeffs: np.ndarray, x: np.ndarray, steps: int = 6) -> np.ndarray:
    """A few Newton steps on each row's quartic to sharpen eigenvalue roots."""
    d1 = coeffs[:, :4] * np.array([4.0, 3.0, 2.0, 1.0])
    for _ in range(steps):
        f = np.broadcast_to(coeffs[:, 0:1], x.shape).astype(complex)
        for j in range(1, 5):
            f = f * x + coeffs[:, j:j + 1]
        g = np.broadcast_to(d1[:, 0:1], x.shape).astype(complex)
        for j in range(1, 4):
            g = g * x + d1[:, j:j + 1]
        with np.errstate(all="ignore"):
            step = np.where(np.abs(g) > 1e-300, f / g, 0.0)
        x = x - np.where(np.isfinite(step), step, 0.0)
    return x


def _batch_quartic_real(quart: np.ndarray) -> np.ndarray:
    """Real roots of each row's quartic, NaN-padded to four slots.

    Well-led rows go through companion eigenvalues plus Newton polish; rows
    whose leading coefficient has collapsed (angle near the half turn, or a
    degenerate pairing) fall back to the robust scalar solver.
    """
    n = quart.shape[0]
    roots = np.full((n, 4), np.nan)
    rowmax = np.abs(quart).max(axis=1)
    solvable = rowmax > 0.0
    lead_ok = solvable & (np.abs(quart[:, 0]) >= 1e-8 * rowmax)
    if lead_ok.any():
        sub = quart[lead_ok]
        monic = sub[:, 1:] / sub[:, 0:1]
        comp = np.zeros((len(sub), 4, 4))
        comp[:, 0, :] = -monic
        comp[:, 1, 0] = 1.0
        comp[:, 2, 1] = 1.0
        comp[:, 3, 2] = 1.0
        ev = _newton_batch(sub, np.linalg.eigvals(comp))
        re, im = ev.real, ev.imag
        with np.errstate(all="ignore"):
            real = np.where(np.abs(im) <= 1e-8 * (1.0 + np.abs(re)), re, np.nan)
        roots[lead_ok] = real
    for i in np.flatnonzero(solvable & ~lead_ok):
        try:
            rr = solve_quartic(quart[i])
        except IdenticallyZero:
            continue
        roots[i, :min(len(rr), 4)] = rr[:4]
    return roots


def _candidates_1p1dp(packed: _Packed, dp_i: np.ndarray, pool_j: np.ndarray):
    """Up to five angle candidates per iteration (four roots plus the half
    turn when admissible) with their translations. Returns (theta (N, 5),
    t (N, 5, 2), valid (N, 5))."""
    N = len(dp_i)
    G = packed.G[dp_i]
    h = packed.h[dp_i]
    valid_it = packed.ok_tmap[dp_i]

    v_c = np.zeros((N, 3))
    v_c[:, 0] = G[:, 0, 0]
    v_c[:, 2] = G[:, 1, 0]
    v_s = np.zeros((N, 3))
    v_s[:, 0] = G[:, 0, 1]
    v_s[:, 2] = G[:, 1, 1]
    v_0 = np.zeros((N, 3))
    v_0[:, 0] = h[:, 0]
    v_0[:, 2] = h[:, 1]

    Rp = packed.Ra_pool[pool_j]
    w_c = packed.pre_wc[pool_j] + np.einsum("nij,nj->ni", Rp, v_c)
    w_s = packed.pre_ws[pool_j] + np.einsum("nij,nj->ni", Rp, v_s)
    w_0 = packed.pre_w0[pool_j] + np.einsum("nij,nj->ni", Rp, v_0)
    u_c = packed.u_c[pool_j]
    u_s = packed.u_s[pool_j]
    u_0 = packed.u_0[pool_j]
    q2 = packed.q2[pool_j]

    def dot(a, b):
        return np.einsum("ni,ni->n", a, b)

    A = dot(q2, np.cross(w_c, u_c))
    B = dot(q2, np.cross(w_c, u_s) + np.cross(w_s, u_c))
    C = dot(q2, np.cross(w_s, u_s))
    D = dot(q2, np.cross(w_c, u_0) + np.cross(w_0, u_c))
    E = dot(q2, np.cross(w_s, u_0) + np.cross(w_0, u_s))
    F = dot(q2, np.cross(w_0, u_0))
    coeffs = np.stack([A, B, C, D, E, F], axis=1)

    w_mag = np.maximum.reduce([np.linalg.norm(w, axis=1) for w in (w_c, w_s, w_0)])
    u_mag = np.maximum.reduce([np.linalg.norm(u, axis=1) for u in (u_c, u_s, u_0)])
    mag = np.linalg.norm(q2, axis=1) * w_mag * u_mag
    scale = np.abs(coeffs).max(axis=1)
    valid_it = valid_it & (scale > 1e-12 * np.maximum(mag, 1e-12))

    with np.errstate(all="ignore"):
        cf = coeffs / np.where(valid_it, scale, 1.0)[:, None]
        cf = np.where(valid_it[:, None], cf, 0.0)
        A, B, C, D, E, F = cf.T
        quart = np.stack([
            A - D + F,
            2.0 * (E - B),
            -2.0 * A + 4.0 * C + 2.0 * F,
            2.0 * (B + E),
            A + D + F,
        ], axis=1)
        quart = np.where(valid_it[:, None], quart, 0.0)
        q_roots = _batch_quartic_real(quart)

        theta = np.full((N, 5), np.nan)
        theta[:, :4] = 2.0 * np.arctan(q_roots)
        theta[:, 4] = np.where(
            valid_it & (np.abs(quart[:, 0]) <= _PI_CANDIDATE_TOL), np.pi, np.nan)

        c = np.cos(theta)
        s = np.sin(theta)
        g = (A[:, None] * c * c + B[:, None] * c * s + C[:, None] * s * s
             + D[:, None] * c + E[:, None] * s + F[:, None])
        ok = valid_it[:, None] & np.isfinite(theta) & (np.abs(g) <= _CONIC_RESIDUAL_TOL)
        theta = np.where(ok, theta, np.nan)
        cs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        ts = h[:, None, :] + np.einsum("nij,nkj->nki", G, cs)
    return theta, ts, ok


def _candidates_2dp(packed: _Packed, i_idx: np.ndarray, j_idx: np.ndarray):
    """One candidate per iteration from a stacked 4x4 solve; the rotation
    part is projected to the unit circle and the translation re-solved at
    the projected angle. Returns (theta (N, 1), t (N, 1, 2), valid (N, 1))."""
    A4 = np.concatenate([packed.rows[i_idx], packed.rows[j_idx]], axis=1)
    b4 = np.concatenate([packed.rhs[i_idx], packed.rhs[j_idx]], axis=1)
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(A4)
        ok = np.isfinite(cond) & (cond <= 1e12)
        safe = np.where(ok[:, None, None], A4, np.eye(4))
        x = np.linalg.solve(safe, b4[:, :, None])[:, :, 0]
        norm = np.hypot(x[:, 0], x[:, 1])
        ok = ok & (norm >= 1e-8)
        denom = np.where(norm > 0.0, norm, 1.0)
        c = x[:, 0] / denom
        s = x[:, 1] / denom
        theta = np.arctan2(s, c)

        cs = np.stack([c, s], axis=1)
        M = A4[:, :, 2:4]
        rt = b4 - np.einsum("nij,nj->ni", A4[:, :, :2], cs)
        MtM = np.einsum("nki,nkj->nij", M, M)
        Mtr = np.einsum("nki,nk->ni", M, rt)
        det = MtM[:, 0, 0] * MtM[:, 1, 1] - MtM[:, 0, 1] * MtM[:, 1, 0]
        ok = ok & (np.abs(det) > 1e-300)
        safe_det = np.where(ok, det, 1.0)
        tx = (MtM[:, 1, 1] * Mtr[:, 0] - MtM[:, 0, 1] * Mtr[:, 1]) / safe_det
        tz = (MtM[:, 0, 0] * Mtr[:, 1] - MtM[:, 1, 0] * Mtr[:, 0]) / safe_det

    theta = np.where(ok, theta, np.nan)
    ts = np.stack([tx, tz], axis=1)[:, None, :]
    return theta[:, None], ts, ok[:, None]


# ---------------------------------------------------------------------------
# batched scoring


def _cross3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cross product over the last axis without np.cross's moveaxis churn."""
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1]
    out[..., 1] = a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2]
    out[..., 2] = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return out


def _score(packed: _Packed, camera: CameraModel, cfg: RansacConfig,
           theta: np.ndarray, ts: np.ndarray):
    """Support of a flat batch of candidates ((M,) angles, (M, 2)
    translations): inlier count plus a truncated residual sum (each residual
    clipped at its threshold and rescaled to [0, 1]) used to break count
    ties. Callers pass only valid candidates; NaN-slot padding is gone by
    the time scoring runs."""
    M = theta.shape[0]
    counts = np.zeros(M, dtype=np.int64)
    trunc = np.zeros(M)
    with np.errstate(all="ignore"):
        c = np.cos(theta)[:, None]
        s = np.sin(theta)[:, None]
        if packed.n_dp:
            X = packed.Pr
            Vx = c * X[:, 0] + s * X[:, 2] + ts[:, 0:1]
            Vy = np.broadcast_to(X[:, 1], (M, packed.n_dp))
            Vz = -s * X[:, 0] + c * X[:, 2] + ts[:, 1:2]
            V = np.stack([Vx, Vy, Vz], axis=-1)
            Q = np.einsum("dij,mdj->mdi", packed.Ra_dp, V) + packed.ta_dp
            raw = np.einsum("ji,mdj->mdi", camera.alignment, Q)
            pu = camera.fx * raw[..., 0] / raw[..., 2] + camera.cx
            pv = camera.fy * raw[..., 1] / raw[..., 2] + camera.cy
            res = np.hypot(pu - packed.obs_px[:, 0], pv - packed.obs_px[:, 1])
            bad = (Q[..., 2] <= 0.0) | (raw[..., 2] <= 1e-12) | ~np.isfinite(res)
            res = np.where(bad, np.inf, res)
            counts += (res < cfg.reproj_threshold_px).sum(axis=-1)
            trunc += np.minimum(res / cfg.reproj_threshold_px, 1.0).sum(axis=-1)
        if packed.n_p:
            r3 = packed.r3_s
            q = packed.q_s
            tb = packed.tb_s
            Rr = np.stack([
                c * r3[:, 0] + s * r3[:, 2],
                np.broadcast_to(r3[:, 1], (M, packed.n_p)),
                -s * r3[:, 0] + c * r3[:, 2],
            ], axis=-1)
            y = np.einsum("pij,mpj->mpi", packed.Ra_s, Rr)
            Rtb = np.stack([
                c * tb[:, 0] + s * tb[:, 2] + ts[:, 0:1],
                np.broadcast_to(tb[:, 1], (M, packed.n_p)),
                -s * tb[:, 0] + c * tb[:, 2] + ts[:, 1:2],
            ], axis=-1)
            t_rel = np.einsum("pij,mpj->mpi", packed.Ra_s, Rtb) + packed.ta_s
            tnorm2 = (t_rel ** 2).sum(axis=-1)
            Er = _cross3(t_rel, y)
            z = _cross3(t_rel, q)
            w1 = np.einsum("pji,mpj->mpi", packed.Ra_s, z)
            w2 = np.stack([
                c * w1[..., 0] - s * w1[..., 2],
                w1[..., 1],
                s * w1[..., 0] + c * w1[..., 2],
            ], axis=-1)
            Etq = -np.einsum("pji,mpj->mpi", packed.Rb_s, w2)
            num = np.einsum("pi,mpi->mp", q, Er)
            den = Er[..., 0] ** 2 + Er[..., 1] ** 2 + Etq[..., 0] ** 2 + Etq[..., 1] ** 2
            sres = np.where(den > 0.0, np.abs(num) / np.sqrt(den),
                            np.where(num == 0.0, 0.0, np.inf))
            sres = np.where(tnorm2 < 1e-18, np.inf, sres)
            sres = np.where(np.isfinite(sres), sres, np.inf)
            counts += (sres < cfg.sampson_threshold).sum(axis=-1)
            trunc += np.minimum(sres / cfg.sampson_threshold, 1.0).sum(axis=-1)
    trunc = np.where(np.isfinite(trunc), trunc, np.inf)
    return counts, trunc


def _chunk_best(packed, camera, cfg, offset, theta, ts, ok):
    """Lexicographic winner of one block: highest count, then lowest
    truncated residual, then earliest iteration, then lowest candidate slot.
    Only the valid (non-NaN) candidate slots are scored. None when the whole
    block is degenerate."""
    K = ok.shape[1]
    flat = np.flatnonzero(ok.ravel())
    if flat.size == 0:
        return None
    it_ids, cand_ids = np.divmod(flat, K)
    theta_f = theta.ravel()[flat]
    ts_f = ts.reshape(-1, 2)[flat]
    counts, trunc = _score(packed, camera, cfg, theta_f, ts_f)
    order = np.lexsort((cand_ids, it_ids, trunc, -counts))
    k = int(order[0])
    return (-int(counts[k]), float(trunc[k]), offset + int(it_ids[k]),
            int(cand_ids[k]), float(theta_f[k]), float(ts_f[k, 0]),
            float(ts_f[k, 1]))


def _scalar_masks(pose, dps, ps, graph, camera, cfg):
    """Inlier masks recomputed with the scalar residual definitions, so the
    reported support never depends on batch arithmetic details. The relative
    transform is built once per frame pair, not per correspondence."""
    rels: dict = {}

    def rel(query_frame, ref_frame):
        key = (query_frame, ref_frame)
        T = rels.get(key)
        if T is None:
            T = graph.relative(pose, query_frame, ref_frame)
            rels[key] = T
        return T

    mask_dp = np.zeros(len(dps), dtype=bool)
    for i, dp in enumerate(dps):
        try:
            pix = _project_point(rel(dp.query_frame, dp.ref_frame),
                                 dp.point3d, camera)
            r = float(np.linalg.norm(pix - denormalize(dp.query, camera)))
        except CheiralityViolation:
            r = math.inf
        mask_dp[i] = r < cfg.reproj_threshold_px
    mask_p = np.zeros(len(ps), dtype=bool)
    for i, p in enumerate(ps):
        try:
            r = sampson_residual(rel(p.query_frame, p.ref_frame), p)
        except ZeroBaseline:
            r = math.inf
        mask_p[i] = r < cfg.sampson_threshold
    return mask_dp, mask_p


# ---------------------------------------------------------------------------
# the estimator


def ransac_estimate(dps, ps, graph: FramePoseGraph | None, cfg: RansacConfig,
                    camera: CameraModel) -> RansacResult:
    """Robust pose from depth-bearing plus 2D-2D correspondences.

    Samples only reliable depth points; the 2D-2D half of a depth-plus-match
    sample comes from the union of the P list and every depth correspondence
    demoted to a point pair. Candidate support counts depth entries by
    reprojection error and P entries by Sampson error. With solver=MIX the
    minimal solver is chosen once per call from the observed reliable-depth
    fraction, and the iteration draws are shared across solvers so the mixed
    run replays the chosen solver exactly.

    Raises InsufficientCorrespondences when no minimal sample can be formed
    and EstimationFailed when no hypothesis explains at least two entries.
    """
    graph = graph or _ANCHOR
    dps = list(dps)
    ps = list(ps)
    n_dp, n_p = len(dps), len(ps)
    n_rel = sum(1 for d in dps if d.reliable)

    solver = cfg.solver
    if solver is Solver.MIX:
        total = n_dp + n_p
        gamma_hat = n_rel / total if total else 0.0
        try:
            solver = select_solver(gamma_hat, n_rel, total - n_rel)
        except NoViableSolver as exc:
            raise InsufficientCorrespondences(str(exc)) from exc

    if solver is Solver.TWO_DP:
        if n_rel < 2:
            raise InsufficientCorrespondences(
                "two-depth-point sampling needs at least 2 reliable depth "
                f"correspondences, got {n_rel}")
    else:
        if n_rel < 1:
            raise InsufficientCorrespondences(
                "depth-plus-match sampling needs at least 1 reliable depth "
                f"correspondence, got {n_rel}")
        if n_dp + n_p < 2:
            raise InsufficientCorrespondences(
                "depth-plus-match sampling needs a second correspondence, "
                f"got {n_dp + n_p} in total")

    packed = _Packed(dps, ps, graph, camera)
    uniforms = _draw_uniforms(cfg.seed, cfg.max_iterations)

    best = None
    done = 0
    chunk = _ADAPTIVE_CHUNK if cfg.adaptive else _FIXED_CHUNK
    while done < cfg.max_iterations:
        nc = min(chunk, cfg.max_iterations - done)
        u = uniforms[done:done + nc]
        if solver is Solver.TWO_DP:
            i_idx, j_idx = _sample_2dp(u, packed)
            theta, ts, ok = _candidates_2dp(packed, i_idx, j_idx)
        else:
            dp_i, pool_j = _sample_1p1dp(u, packed)
            theta, ts, ok = _candidates_1p1dp(packed, dp_i, pool_j)
        cand = _chunk_best(packed, camera, cfg, done, theta, ts, ok)
        if cand is not None and (best is None or cand[:4] < best[:4]):
            best = cand
        done += nc
        if cfg.adaptive and best is not None and -best[0] >= _MIN_SAMPLE:
            ratio = -best[0] / max(n_dp + n_p, 1)
            if done >= expected_iterations(ratio * ratio, cfg.confidence):
                break

    if best is None:
        raise EstimationFailed("every sampled hypothesis was degenerate")
    pose = PlanarPose(best[4], best[5], best[6])
    mask_dp, mask_p = _scalar_masks(pose, dps, ps, graph, camera, cfg)
    score = int(mask_dp.sum()) + int(mask_p.sum())
    if score < _MIN_SAMPLE:
        raise EstimationFailed(
            "best hypothesis explains fewer correspondences than a minimal sample")

    refined = False
    if cfg.refine:
        in_dps = [d for d, m in zip(dps, mask_dp) if m]
        in_ps = [p for p, m in zip(ps, mask_p) if m]
        result = refine_pose(pose, in_dps, in_ps, graph, camera,
                             weight=cfg.refine_weight)
        if not result.singular and math.isfinite(result.cost):
            pose = result.pose
            refined = True
            mask_dp, mask_p = _scalar_masks(pose, dps, ps, graph, camera, cfg)
            score = int(mask_dp.sum()) + int(mask_p.sum())

    return RansacResult(pose=pose, inlier_mask_dp=mask_dp, inlier_mask_p=mask_p,
                        iterations_used=done, score=score, refined=refined)


# ---------------------------------------------------------------------------
# Gauss-Newton refinement


def _rot_apply(c, s, v):
    return np.array([c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]])


def _drot_apply(c, s, v):
    return np.array([-s * v[0] + c * v[2], 0.0, -c * v[0] - s * v[2]])


def _dp_res_jac(c, s, tx, tz, dp, obs, graph, camera):
    """Pixel residual (2,) and its Jacobian (2, 3) wrt (theta, t_x, t_z);
    None when the point leaves the visible half space."""
    off = graph.query_offset(dp.query_frame)
    base = graph.ref_pose(dp.ref_frame)
    Ra, ta = off.rotation, off.translation
    Pr = base.apply(dp.point3d)
    inner = _rot_apply(c, s, Pr) + np.array([tx, 0.0, tz])
    P = Ra @ inner + ta
    if P[2] <= 0.0:
        return None
    At = camera.alignment.T
    raw = At @ P
    if raw[2] <= 1e-12:
        return None
    px = np.array([camera.fx * raw[0] / raw[2] + camera.cx,
                   camera.fy * raw[1] / raw[2] + camera.cy])
    res = px - obs
    dP = np.column_stack([Ra @ _drot_apply(c, s, Pr), Ra[:, 0], Ra[:, 2]])
    draw = At @ dP
    z = raw[2]
    dpx = np.array([[camera.fx / z, 0.0, -camera.fx * raw[0] / (z * z)],
                    [0.0, camera.fy / z, -camera.fy * raw[1] / (z * z)]])
    return res, dpx @ draw


def _cross_v(a, b):
    """3-vector cross product without np.cross's axis bookkeeping."""
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def _p_res_jac(c, s, tx, tz, p, graph, sqw):
    """Signed Sampson residual and gradient (3,), scaled by the epipolar
    weight; None when the relative translation degenerates."""
    off = graph.query_offset(p.query_frame)
    base = graph.ref_pose(p.ref_frame)
    Ra, ta = off.rotation, off.translation
    Rb, tb = base.rotation, base.translation
    tvec = np.array([tx, 0.0, tz])
    Rcs = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    dRcs = np.array([[-s, 0.0, c], [0.0, 0.0, 0.0], [-c, 0.0, -s]])

    r3 = Rb @ p.reference.ray()
    q = p.query.ray()
    y = Ra @ (Rcs @ r3)
    t_rel = Ra @ (Rcs @ tb + tvec) + ta
    if float(np.linalg.norm(t_rel)) < 1e-9:
        return None
    Er = _cross_v(t_rel, y)
    R_rel = Ra @ Rcs @ Rb
    Etq = -R_rel.T @ _cross_v(t_rel, q)
    g = float(q @ Er)
    den = Er[0] ** 2 + Er[1] ** 2 + Etq[0] ** 2 + Etq[1] ** 2
    if den <= 0.0:
        return None

    dy = Ra @ (dRcs @ r3)
    dt_rel = [Ra @ (dRcs @ tb), Ra[:, 0], Ra[:, 2]]
    dR = Ra @ dRcs @ Rb
    dg = np.zeros(3)
    dden = np.zeros(3)
    tq = _cross_v(t_rel, q)
    for k in range(3):
        dEr = _cross_v(dt_rel[k], y) + (_cross_v(t_rel, dy) if k == 0 else 0.0)
        dEtq = -R_rel.T @ _cross_v(dt_rel[k], q)
        if k == 0:
            dEtq = dEtq - dR.T @ tq
        dg[k] = float(q @ dEr)
        dden[k] = 2.0 * (Er[0] * dEr[0] + Er[1] * dEr[1]
                         + Etq[0] * dEtq[0] + Etq[1] * dEtq[1])
    sq = math.sqrt(den)
    res = g / sq
    jac = dg / sq - g * dden / (2.0 * den * sq)
    return sqw * res, sqw * jac


def _residual_stack(x, dps, ps, obs_list, graph, camera, sqw):
    """Stacked residual vector and Jacobian at parameters (theta, t_x, t_z);
    None when any entry is infeasible there (treated as infinite cost)."""
    theta, tx, tz = float(x[0]), float(x[1]), float(x[2])
    c, s = math.cos(theta), math.sin(theta)
    res = []
    jac = []
    for dp, obs in zip(dps, obs_list):
        out = _dp_res_jac(c, s, tx, tz, dp, obs, graph, camera)
        if out is None:
            return None
        res.extend(out[0])
        jac.extend(out[1])
    for p in ps:
        out = _p_res_jac(c, s, tx, tz, p, graph, sqw)
        if out is None:
            return None
        res.append(out[0])
        jac.append(out[1])
    return np.array(res), np.array(jac)


def refine_pose(initial: PlanarPose, dps, ps, graph: FramePoseGraph | None = None,
                camera: CameraModel | None = None, max_iters: int = 10,
                tol: float = 1e-9, weight: float = 1e6) -> RefinementResult:
    """Gauss-Newton polish of a pose on its inlier set.

    Minimizes the squared pixel reprojection error of the depth entries plus
    `weight` times the squared Sampson error of the P entries. Steps are
    halved until the cost does not increase, so the returned cost never
    exceeds the starting cost. Stops when the step norm drops below `tol`
    or after `max_iters` accepted steps. When the 3x3 normal equations are
    too ill-conditioned the incoming pose is returned with singular=True.
    """
    dps = list(dps)
    ps = list(ps)
    if len(dps) + len(ps) < _MIN_SAMPLE:
        raise InsufficientCorrespondences(
            "refinement needs at least two correspondences")
    if dps and camera is None:
        raise ValueError("camera required when depth correspondences are present")
    graph = graph or _ANCHOR
    sqw = math.sqrt(weight)
    obs_list = [denormalize(dp.query, camera) for dp in dps]

    x = np.array([initial.theta, initial.t_x, initial.t_z])
    stacked = _residual_stack(x, dps, ps, obs_list, graph, camera, sqw)
    if stacked is None:
        return RefinementResult(initial, singular=False, iterations=0, cost=math.inf)
    r, J = stacked
    cost = float(r @ r)

    iterations = 0
    for iterations in range(1, max_iters + 1):
        JtJ = J.T @ J
        if not np.all(np.isfinite(JtJ)) or np.linalg.cond(JtJ) > 1e12:
            return RefinementResult(PlanarPose(x[0], x[1], x[2]), singular=True,
                                    iterations=iterations - 1, cost=cost)
        step = np.linalg.solve(JtJ, -(J.T @ r))
        if float(np.linalg.norm(step)) < tol:
            break
        alpha = 1.0
        moved = False
        for _ in range(8):
            trial = x + alpha * step
            stacked = _residual_stack(trial, dps, ps, obs_list, graph, camera, sqw)
            if stacked is not None:
                trial_cost = float(stacked[0] @ stacked[0])
                if trial_cost <= cost:
                    x, cost = trial, trial_cost
                    r, J = stacked
                    moved = True
                    break
            alpha *= 0.5
        if not moved:
            break
        if float(np.linalg.norm(alpha * step)) < tol:
            break
    return RefinementResult(PlanarPose(x[0], x[1], x[2]), singular=False,
                            iterations=iterations, cost=cost)
