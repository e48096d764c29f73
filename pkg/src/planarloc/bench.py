"""Benchmark harness and command-line entry points.

Subcommands: `run` sweeps solvers over synthetic worlds and emits a
versioned results CSV, `localize` estimates a pose from a correspondence
file, `gen` writes a synthetic instance to a correspondence file, and
`model` prints the minimal-sample success probabilities with the
iteration counts they imply.

Exit codes: 0 success, 2 parse/config error, 3 not enough
correspondences, 4 estimation failure.
"""

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .corrfile import ParseError, read_corr_file, write_corr_file
from .geometry import (
    CameraModel,
    NormalizedPoint,
    CorrespondenceP,
    rotation_error,
    translation_error,
)
from .ransac import (
    EstimationFailed,
    InsufficientCorrespondences,
    RansacConfig,
    expected_iterations,
    ransac_estimate,
)
from .selector import (
    EnvironmentProfile,
    Setting,
    Solver,
    select_solver,
    trial_success_probability,
)
from .simulate import SimConfig, VisibilityExhausted, generate_instance, make_rig
from .solvers import DegenerateSample, solve_1p1dp, solve_2dp

CSV_SCHEMA_TAG = "# bench-results-v1"
_THREADS_ENV = "PLANARLOC_THREADS"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INSUFFICIENT = 3
EXIT_FAILED = 4

_DEFAULT_CAMERA = dict(fx=800.0, fy=800.0, cx=640.0, cy=480.0,
                       width=1280, height=960)

_SOLVER_BY_NAME = {"1p1dp": Solver.ONE_P1DP, "2dp": Solver.TWO_DP,
                   "mix": Solver.MIX}

EXPERIMENTS = ("accuracy-vs-noise", "success-vs-outliers", "selector-study")


class SpecError(ValueError):
    """Experiment or generator spec file invalid."""


# ------------------------------------------------------------ spec parsing


def parse_kv_file(path) -> dict:
    """Key-value text config: one `key = value` per line, '#' comments."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SpecError(f"cannot read spec file: {exc}") from exc
    for i, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"line {i}: expected 'key = value', got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if not key or not val:
            raise SpecError(f"line {i}: empty key or value")
        out[key] = val
    return out


def _as_float(key, val):
    try:
        return float(val)
    except ValueError:
        raise SpecError(f"{key}: expected a number, got {val!r}") from None


def _as_int(key, val):
    try:
        return int(val)
    except ValueError:
        raise SpecError(f"{key}: expected an integer, got {val!r}") from None


def _as_bool(key, val):
    low = val.lower()
    if low in ("on", "true", "1", "yes"):
        return True
    if low in ("off", "false", "0", "no"):
        return False
    raise SpecError(f"{key}: expected on/off, got {val!r}")


def _as_float_list(key, val):
    items = [v.strip() for v in val.split(",") if v.strip()]
    if not items:
        raise SpecError(f"{key}: empty list")
    return tuple(_as_float(key, v) for v in items)


# ------------------------------------------------------- experiment spec


@dataclass(frozen=True)
class ExperimentSpec:
    """One benchmark sweep: which experiment, its grid, and its budget."""

    experiment: str
    noise_sigmas: tuple = (0.0, 1.0, 2.0, 3.0, 4.0, 5.0)
    outlier_rates: tuple = (0.5, 0.6, 0.7, 0.8)
    depth_rates: tuple = (0.5, 0.4, 0.3, 0.2, 0.1)
    trials_per_cell: int = 100
    ransac_iterations: int = 0  # 0 = experiment default (5000 accuracy / 500 sweep)
    solvers: tuple = ()         # () = experiment default
    rig: bool = False
    t_success_m: float = 0.1
    r_success_deg: float = 1.0
    seed: int = 0
    n_points_per_camera: int = 50
    # Operating noise for the rate sweeps (accuracy cells sweep their own).
    # Low pixel noise keeps the fixed inlier gates discriminative, so the
    # sweep measures sampling structure rather than gate leakage.
    pixel_noise_sigma: float = 0.25
    depth_noise_sigma: float = 0.0
    timing: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise SpecError(f"unknown experiment {self.experiment!r}; "
                            f"expected one of {', '.join(EXPERIMENTS)}")
        if not self.noise_sigmas or not self.outlier_rates or not self.depth_rates:
            raise SpecError("sweep lists must be non-empty")
        if self.t_success_m <= 0 or self.r_success_deg <= 0:
            raise SpecError("success thresholds must be positive")
        if self.trials_per_cell < 1:
            raise SpecError("trials_per_cell must be at least 1")
        if self.ransac_iterations == 0:
            iters = 5000 if self.experiment == "accuracy-vs-noise" else 500
            object.__setattr__(self, "ransac_iterations", iters)
        if self.ransac_iterations < 1:
            raise SpecError("ransac_iterations must be at least 1")
        if not self.solvers:
            object.__setattr__(self, "solvers", self._default_solvers())
        for tag in self.solvers:
            base = tag.split("-", 1)[1] if "-" in tag else tag
            prefix = tag[: -len(base) - 1] if "-" in tag else ""
            if prefix not in ("", "mc", "single") or base not in _SOLVER_BY_NAME:
                raise SpecError(f"unknown solver tag {tag!r}")

    def _default_solvers(self):
        if self.experiment == "accuracy-vs-noise":
            tags = ["1p1dp", "2dp", "single-1p1dp", "single-2dp"]
        elif self.experiment == "success-vs-outliers":
            tags = ["1p1dp", "2dp"]
        else:
            tags = ["1p1dp", "2dp", "mix"]
        if self.rig:
            tags += [f"mc-{t}" for t in tags if not t.startswith("single-")]
        return tuple(tags)

    def cells(self):
        """Sweep cells in output order, as (column names, value tuples)."""
        if self.experiment == "accuracy-vs-noise":
            return ("noise_sigma",), [(s,) for s in self.noise_sigmas]
        grid = [(o, d) for o in self.outlier_rates for d in self.depth_rates]
        return ("outlier_rate", "depth_rate"), grid


_SPEC_KEYS = {
    "experiment": str,
    "noise_sigmas": _as_float_list,
    "outlier_rates": _as_float_list,
    "depth_rates": _as_float_list,
    "trials_per_cell": _as_int,
    "ransac_iterations": _as_int,
    "solvers": lambda k, v: tuple(s.strip() for s in v.split(",") if s.strip()),
    "rig": _as_bool,
    "t_success_m": _as_float,
    "r_success_deg": _as_float,
    "seed": _as_int,
    "n_points_per_camera": _as_int,
    "pixel_noise_sigma": _as_float,
    "depth_noise_sigma": _as_float,
}


def build_experiment_spec(pairs: dict) -> ExperimentSpec:
    kwargs = {}
    for key, val in pairs.items():
        if key not in _SPEC_KEYS:
            raise SpecError(f"unknown spec key {key!r}")
        conv = _SPEC_KEYS[key]
        kwargs[key] = val if conv is str else conv(key, val)
    if "experiment" not in kwargs:
        raise SpecError("spec must set 'experiment'")
    try:
        return ExperimentSpec(**kwargs)
    except TypeError as exc:
        raise SpecError(str(exc)) from exc


# --------------------------------------------------------------- sim spec


_SIM_KEYS = {
    "n_points_per_camera": _as_int,
    "cube_half_extent": _as_float,
    "translation_range": _as_float,
    "rotation_range": _as_float,
    "pixel_noise_sigma": _as_float,
    "depth_noise_sigma": _as_float,
    "outlier_rate": _as_float,
    "reliable_depth_rate": _as_float,
    "seed": _as_int,
    "rig_cameras": _as_int,
    "rig_yaw_step_deg": _as_float,
    "rig_spacing_m": _as_float,
    "fx": _as_float, "fy": _as_float, "cx": _as_float, "cy": _as_float,
    "width": _as_int, "height": _as_int,
}


def build_sim_config(pairs: dict):
    """(SimConfig, CameraModel) from generator spec key-values."""
    cam_kw = dict(_DEFAULT_CAMERA)
    sim_kw = {}
    rig_kw = {}
    for key, val in pairs.items():
        if key not in _SIM_KEYS:
            raise SpecError(f"unknown generator key {key!r}")
        parsed = _SIM_KEYS[key](key, val)
        if key in cam_kw:
            cam_kw[key] = parsed
        elif key.startswith("rig_"):
            rig_kw[key] = parsed
        else:
            sim_kw[key] = parsed
    if rig_kw:
        sim_kw["rig"] = make_rig(
            n_cameras=rig_kw.get("rig_cameras", 3),
            yaw_step_deg=rig_kw.get("rig_yaw_step_deg", 60.0),
            spacing_m=rig_kw.get("rig_spacing_m", 0.25))
    try:
        return SimConfig(**sim_kw), CameraModel(**cam_kw)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


# ------------------------------------------------------------- benchmark


def _dp_as_pair(dp) -> CorrespondenceP:
    P = dp.point3d
    return CorrespondenceP(dp.query, NormalizedPoint(P[0] / P[2], P[1] / P[2]),
                           ref_frame=dp.ref_frame, query_frame=dp.query_frame)


def _single_candidate(dps, ps, graph, solver: Solver, seed, tries: int = 100):
    """Unrefined baseline: first candidate of the first valid random sample."""
    rng = np.random.default_rng(seed)
    rel = [i for i, dp in enumerate(dps) if dp.reliable]
    pool = list(ps) + [_dp_as_pair(dp) for dp in dps]
    for _ in range(tries):
        try:
            if solver is Solver.TWO_DP:
                if len(rel) < 2:
                    return None
                a, b = rng.choice(len(rel), size=2, replace=False)
                cands = solve_2dp(dps[rel[a]], dps[rel[b]], graph)
            else:
                if not rel or len(pool) < 2:
                    return None
                d = int(rng.integers(len(rel)))
                forbidden = len(ps) + rel[d]
                j = int(rng.integers(len(pool) - 1))
                j += j >= forbidden
                cands = solve_1p1dp(dps[rel[d]], pool[j], graph)
        except DegenerateSample:
            continue
        if len(cands):
            return cands.candidates[0]
    return None


@dataclass
class _TrialOutcome:
    t_err: float = math.nan
    r_err: float = math.nan
    success: bool = False
    iterations: float = 0.0


def _split_tag(tag: str):
    if tag.startswith("mc-"):
        return "mc", _SOLVER_BY_NAME[tag[3:]]
    if tag.startswith("single-"):
        return "single", _SOLVER_BY_NAME[tag[7:]]
    return "", _SOLVER_BY_NAME[tag]


def _trial_sim_config(spec: ExperimentSpec, cell, rig: bool, seed) -> SimConfig:
    if spec.experiment == "accuracy-vs-noise":
        noise, outlier, depth_rate, depth_noise = cell[0], 0.0, 1.0, 0.0
    else:
        noise, depth_noise = spec.pixel_noise_sigma, spec.depth_noise_sigma
        outlier, depth_rate = cell
    return SimConfig(n_points_per_camera=spec.n_points_per_camera,
                     pixel_noise_sigma=noise, depth_noise_sigma=depth_noise,
                     outlier_rate=outlier, reliable_depth_rate=depth_rate,
                     rig=make_rig() if rig else (SimConfig().rig),
                     seed=seed)


def run_trial(spec: ExperimentSpec, cell_idx: int, cell, tag: str,
              trial: int, camera: CameraModel) -> _TrialOutcome:
    """One (cell, solver, trial) evaluation. Pure given its arguments."""
    variant, solver = _split_tag(tag)
    rig = variant == "mc"
    sim_seed = (spec.seed, cell_idx, trial, 1 if rig else 0)
    try:
        inst = generate_instance(_trial_sim_config(spec, cell, rig, sim_seed), camera)
    except VisibilityExhausted:
        return _TrialOutcome()
    run_seed = int(np.random.SeedSequence([spec.seed, cell_idx, trial]).generate_state(1)[0])

    if variant == "single":
        pose = _single_candidate(inst.dps, inst.ps, inst.graph, solver, run_seed)
        iters = 1.0
    else:
        cfg = RansacConfig(max_iterations=spec.ransac_iterations, solver=solver,
                           seed=run_seed, refine=True)
        try:
            res = ransac_estimate(inst.dps, inst.ps, inst.graph, cfg, camera)
            pose, iters = res.pose, float(res.iterations_used)
        except (InsufficientCorrespondences, EstimationFailed):
            return _TrialOutcome()
    if pose is None:
        return _TrialOutcome()
    t_err = translation_error(pose, inst.gt_pose)
    r_err = rotation_error(pose, inst.gt_pose)
    return _TrialOutcome(t_err=t_err, r_err=r_err,
                         success=t_err < spec.t_success_m and r_err < spec.r_success_deg,
                         iterations=iters)


def _run_trial_star(args):
    return run_trial(*args)


def _format_cell(value: float) -> str:
    return f"{value:g}"


def _format_row(spec, cell, tag, outcomes, wall_ms) -> str:
    n = len(outcomes)
    succ = sum(o.success for o in outcomes) / n
    t_errs = [o.t_err for o in outcomes if math.isfinite(o.t_err)]
    r_errs = [o.r_err for o in outcomes if math.isfinite(o.r_err)]
    mean_t = sum(t_errs) / len(t_errs) if t_errs else math.nan
    mean_r = sum(r_errs) / len(r_errs) if r_errs else math.nan
    mean_iters = sum(o.iterations for o in outcomes) / n
    cells = ",".join(_format_cell(v) for v in cell)
    return (f"{spec.experiment},{cells},{tag},{n},{succ:.4f},"
            f"{mean_t:.6e},{mean_r:.6e},{mean_iters:.2f},{wall_ms:.1f},{spec.seed}")


def _existing_rows(path, header_line):
    """Set of (cell..., solver) keys already present in a partial CSV."""
    done = set()
    if not os.path.exists(path):
        return done
    with open(path) as fh:
        lines = fh.read().splitlines()
    if len(lines) < 2 or lines[0] != CSV_SCHEMA_TAG or lines[1] != header_line:
        raise SpecError(f"existing output {path} does not match the current "
                        "schema; move it aside or change -o")
    n_cells = header_line.count(",") - 8  # columns besides the fixed nine
    for line in lines[2:]:
        parts = line.split(",")
        done.add(tuple(parts[1:1 + n_cells + 1]))
    return done


def run_experiment(spec: ExperimentSpec, out_path, camera: CameraModel = None,
                   progress=None) -> None:
    """Execute the sweep, appending one CSV row per finished (cell, solver).

    Already-present rows are skipped, so an interrupted run resumes at the
    first unfinished cell. Deterministic given (spec, seed): each trial
    derives its own generator and estimator seeds from the spec seed.
    """
    camera = camera or CameraModel(**_DEFAULT_CAMERA)
    col_names, cells = spec.cells()
    header_line = (f"experiment,{','.join(col_names)},solver,trials,success_rate,"
                   "mean_t_err_m,mean_r_err_deg,mean_iters,wall_ms,seed")
    done = _existing_rows(out_path, header_line)
    fresh = not os.path.exists(out_path)
    threads = int(os.environ.get(_THREADS_ENV, "1") or "1")

    with open(out_path, "a") as fh:
        if fresh:
            fh.write(CSV_SCHEMA_TAG + "\n")
            fh.write(header_line + "\n")
            fh.flush()
        pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
        try:
            for cell_idx, cell in enumerate(cells):
                for tag in spec.solvers:
                    key = tuple(_format_cell(v) for v in cell) + (tag,)
                    if key in done:
                        continue
                    args = [(spec, cell_idx, cell, tag, t, camera)
                            for t in range(spec.trials_per_cell)]
                    t0 = time.perf_counter()
                    if pool is not None:
                        outcomes = list(pool.map(_run_trial_star, args))
                    else:
                        outcomes = [run_trial(*a) for a in args]
                    wall = (time.perf_counter() - t0) * 1e3 if spec.timing else 0.0
                    fh.write(_format_row(spec, cell, tag, outcomes, wall) + "\n")
                    fh.flush()
                    if progress is not None:
                        progress(cell, tag, outcomes)
        finally:
            if pool is not None:
                pool.shutdown()


def write_normalized_csv(src_path, dst_path) -> None:
    """Per-cell normalization of success_rate against the best solver."""
    with open(src_path) as fh:
        lines = fh.read().splitlines()
    if len(lines) < 2 or lines[0] != CSV_SCHEMA_TAG:
        raise SpecError(f"{src_path} is not a recognized results CSV")
    header = lines[1].split(",")
    i_solver = header.index("solver")
    i_rate = header.index("success_rate")
    best = {}
    rows = []
    for line in lines[2:]:
        parts = line.split(",")
        cell = tuple(parts[1:i_solver])
        rate = float(parts[i_rate])
        best[cell] = max(best.get(cell, 0.0), rate)
        rows.append((cell, parts))
    with open(dst_path, "w") as fh:
        fh.write(CSV_SCHEMA_TAG + " normalized\n")
        fh.write(lines[1] + "\n")
        for cell, parts in rows:
            top = best[cell]
            norm = float(parts[i_rate]) / top if top > 0 else 0.0
            parts = list(parts)
            parts[i_rate] = f"{norm:.4f}"
            fh.write(",".join(parts) + "\n")


# ----------------------------------------------------------- subcommands


def _cmd_run(args) -> int:
    try:
        pairs = parse_kv_file(args.spec)
        for override in args.set or []:
            if "=" not in override:
                raise SpecError(f"--set expects key=value, got {override!r}")
            key, val = override.split("=", 1)
            pairs[key.strip()] = val.strip()
        spec = build_experiment_spec(pairs)
        if args.timing:
            spec = replace(spec, timing=True)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = args.output or f"{spec.experiment}.csv"

    def progress(cell, tag, outcomes):
        succ = sum(o.success for o in outcomes) / len(outcomes)
        label = ",".join(_format_cell(v) for v in cell)
        print(f"[{spec.experiment}] cell=({label}) solver={tag} "
              f"success={succ:.2f}", file=sys.stderr)

    try:
        run_experiment(spec, out, progress=progress if args.verbose else None)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.normalize:
        write_normalized_csv(out, _normalized_path(out))
    print(out)
    return EXIT_OK


def _normalized_path(out):
    root, ext = os.path.splitext(out)
    return f"{root}.normalized{ext or '.csv'}"


def _cmd_localize(args) -> int:
    try:
        data = read_corr_file(args.corr_file)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    solver = Solver.MIX if args.solver == "auto" else _SOLVER_BY_NAME[args.solver]
    try:
        cfg = RansacConfig(max_iterations=args.iters, solver=solver,
                           seed=args.seed, reproj_threshold_px=args.threshold,
                           refine=not args.no_refine, adaptive=args.adaptive)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    n_rel = sum(dp.reliable for dp in data.dps)
    total = len(data.dps) + len(data.ps)
    try:
        res = ransac_estimate(data.dps, data.ps, data.graph, cfg, data.camera)
    except InsufficientCorrespondences as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except EstimationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED

    if solver is Solver.MIX:
        chosen = select_solver(n_rel / total if total else 0.0,
                               n_rel, total - n_rel)
    else:
        chosen = solver
    n_inl = int(res.inlier_mask_dp.sum() + res.inlier_mask_p.sum())
    lam_hat = n_inl / total if total else 0.0
    gamma_hat = n_rel / total if total else 0.0
    p_trial = trial_success_probability(
        EnvironmentProfile(lambda_=lam_hat, gamma=gamma_hat), chosen)

    pose = res.pose
    print(f"pose: theta {math.degrees(pose.theta):+.6f} deg  "
          f"t_x {pose.t_x:+.6f} m  t_z {pose.t_z:+.6f} m")
    print(f"inliers: {int(res.inlier_mask_dp.sum())}/{len(data.dps)} dp, "
          f"{int(res.inlier_mask_p.sum())}/{len(data.ps)} p")
    print(f"solver: {chosen.value}")
    print(f"modeled trial success: {p_trial:.4f} "
          f"(lambda_hat {lam_hat:.3f}, gamma_hat {gamma_hat:.3f})")
    print(f"iterations: {res.iterations_used}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    try:
        cfg, camera = build_sim_config(parse_kv_file(args.sim_config))
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        inst = generate_instance(cfg, camera)
    except VisibilityExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    write_corr_file(args.output, inst.dps, inst.ps, camera,
                    graph=inst.graph, gt_pose=inst.gt_pose)
    print(f"{args.output}: {len(inst.dps)} dp + {len(inst.ps)} p "
          f"correspondences")
    return EXIT_OK


def _cmd_model(args) -> int:
    lam, gamma = getattr(args, "lambda"), args.gamma
    lam_d = args.lambda_d
    try:
        profile = EnvironmentProfile(lambda_=lam, gamma=gamma)
        rows = [("1p1dp", trial_success_probability(profile, Solver.ONE_P1DP)),
                ("2dp", trial_success_probability(profile, Solver.TWO_DP))]
        if lam_d is not None:
            dense = EnvironmentProfile(lambda_=lam, gamma=gamma,
                                       lambda_d=lam_d, setting=Setting.DCSD)
            rows.append(("1p1dp-dense",
                         trial_success_probability(dense, Solver.ONE_P1DP)))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    for name, p in rows:
        iters = expected_iterations(p, args.confidence)
        print(f"{name:12s} trial success {p:.6f}   "
              f"expected iterations ({args.confidence:g}): {iters}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bench",
                                 description="planar localization benchmarks")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment sweep to CSV")
    p_run.add_argument("spec", help="experiment spec file (key = value lines)")
    p_run.add_argument("-o", "--output", help="results CSV path "
                                              "(default <experiment>.csv)")
    p_run.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a spec key (repeatable; flags win)")
    p_run.add_argument("--normalize", action="store_true",
                       help="also write a per-cell normalized success CSV")
    p_run.add_argument("--timing", action="store_true",
                       help="record wall time per row (breaks byte determinism)")
    p_run.add_argument("--verbose", action="store_true",
                       help="print per-cell progress to stderr")

    p_loc = sub.add_parser("localize", help="estimate a pose from a file")
    p_loc.add_argument("corr_file")
    p_loc.add_argument("--solver", choices=["1p1dp", "2dp", "auto"],
                       default="auto")
    p_loc.add_argument("--iters", type=int, default=500)
    p_loc.add_argument("--seed", type=int, default=0)
    p_loc.add_argument("--threshold", type=float, default=4.0,
                       help="inlier reprojection gate in pixels")
    p_loc.add_argument("--no-refine", action="store_true")
    p_loc.add_argument("--adaptive", action="store_true",
                       help="stop early once enough iterations succeeded")

    p_gen = sub.add_parser("gen", help="generate a synthetic instance file")
    p_gen.add_argument("sim_config", help="generator spec file")
    p_gen.add_argument("-o", "--output", required=True)

    p_model = sub.add_parser("model",
                             help="print minimal-sample success probabilities")
    p_model.add_argument("--lambda", type=float, required=True,
                         help="sparse 2D-2D inlier rate")
    p_model.add_argument("--gamma", type=float, required=True,
                         help="reliable depth rate")
    p_model.add_argument("--lambda-d", type=float, default=None,
                         help="dense 2D-2D inlier rate")
    p_model.add_argument("--confidence", type=float, default=0.99)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "localize": _cmd_localize,
               "gen": _cmd_gen, "model": _cmd_model}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
