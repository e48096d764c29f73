"""Tests for the benchmark CLI and experiment runner."""

import math
import os

import numpy as np
import pytest

from planarloc.bench import (
    CSV_SCHEMA_TAG,
    EXIT_FAILED,
    EXIT_INSUFFICIENT,
    EXIT_OK,
    EXIT_PARSE,
    ExperimentSpec,
    SpecError,
    _single_candidate,
    build_experiment_spec,
    build_sim_config,
    main,
    parse_kv_file,
    run_experiment,
    write_normalized_csv,
)
from planarloc.corrfile import read_corr_file, write_corr_file
from planarloc.geometry import (
    CorrespondenceDP,
    CorrespondenceP,
    FramePoseGraph,
    NormalizedPoint,
    PlanarPose,
    rotation_error,
    translation_error,
)
from planarloc.selector import Solver
from planarloc.simulate import SimConfig, generate_instance

from testkit import default_camera

CAM = default_camera()


def write_spec(tmp_path, name="exp.cfg", **pairs):
    lines = [f"{k} = {v}" for k, v in pairs.items()]
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


# ------------------------------------------------------------- kv parsing


def test_parse_kv_file_basics(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text(
        "# full-line comment\n"
        "experiment = accuracy-vs-noise\n"
        "\n"
        "trials_per_cell = 7   # trailing comment\n"
        "noise_sigmas = 0, 1, 2\n")
    pairs = parse_kv_file(path)
    assert pairs == {"experiment": "accuracy-vs-noise",
                     "trials_per_cell": "7",
                     "noise_sigmas": "0, 1, 2"}


def test_parse_kv_file_rejects_bad_lines(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text("just some words\n")
    with pytest.raises(SpecError, match="line 1"):
        parse_kv_file(path)
    path.write_text("key =\n")
    with pytest.raises(SpecError, match="empty key or value"):
        parse_kv_file(path)
    with pytest.raises(SpecError, match="cannot read"):
        parse_kv_file(tmp_path / "missing.cfg")


def test_build_experiment_spec_requires_experiment():
    with pytest.raises(SpecError, match="experiment"):
        build_experiment_spec({"trials_per_cell": "5"})
    with pytest.raises(SpecError, match="unknown spec key"):
        build_experiment_spec({"experiment": "accuracy-vs-noise",
                               "typo_key": "1"})


def test_spec_converts_types(tmp_path):
    spec = build_experiment_spec({
        "experiment": "success-vs-outliers",
        "outlier_rates": "0.5,0.8",
        "depth_rates": "0.1",
        "trials_per_cell": "3",
        "rig": "on",
        "seed": "11",
    })
    assert spec.outlier_rates == (0.5, 0.8)
    assert spec.depth_rates == (0.1,)
    assert spec.trials_per_cell == 3
    assert spec.rig and spec.seed == 11
    with pytest.raises(SpecError, match="expected a number"):
        build_experiment_spec({"experiment": "selector-study",
                               "depth_rates": "0.1,abc"})
    with pytest.raises(SpecError, match="expected on/off"):
        build_experiment_spec({"experiment": "selector-study",
                               "rig": "maybe"})


# -------------------------------------------------------- spec defaults


def test_iteration_defaults_per_experiment():
    acc = ExperimentSpec(experiment="accuracy-vs-noise")
    assert acc.ransac_iterations == 5000
    rob = ExperimentSpec(experiment="success-vs-outliers")
    assert rob.ransac_iterations == 500
    sel = ExperimentSpec(experiment="selector-study", ransac_iterations=77)
    assert sel.ransac_iterations == 77


def test_solver_defaults_per_experiment():
    acc = ExperimentSpec(experiment="accuracy-vs-noise")
    assert acc.solvers == ("1p1dp", "2dp", "single-1p1dp", "single-2dp")
    rob = ExperimentSpec(experiment="success-vs-outliers")
    assert rob.solvers == ("1p1dp", "2dp")
    sel = ExperimentSpec(experiment="selector-study")
    assert sel.solvers == ("1p1dp", "2dp", "mix")
    rig = ExperimentSpec(experiment="success-vs-outliers", rig=True)
    assert rig.solvers == ("1p1dp", "2dp", "mc-1p1dp", "mc-2dp")


def test_spec_validation_errors():
    with pytest.raises(SpecError, match="unknown experiment"):
        ExperimentSpec(experiment="nope")
    with pytest.raises(SpecError, match="non-empty"):
        ExperimentSpec(experiment="accuracy-vs-noise", noise_sigmas=())
    with pytest.raises(SpecError, match="thresholds"):
        ExperimentSpec(experiment="accuracy-vs-noise", t_success_m=0.0)
    with pytest.raises(SpecError, match="trials_per_cell"):
        ExperimentSpec(experiment="accuracy-vs-noise", trials_per_cell=0)
    with pytest.raises(SpecError, match="unknown solver tag"):
        ExperimentSpec(experiment="accuracy-vs-noise", solvers=("3dp",))
    with pytest.raises(SpecError, match="unknown solver tag"):
        ExperimentSpec(experiment="accuracy-vs-noise", solvers=("fast-2dp",))


def test_cells_layout():
    acc = ExperimentSpec(experiment="accuracy-vs-noise",
                         noise_sigmas=(0.0, 2.0))
    names, cells = acc.cells()
    assert names == ("noise_sigma",)
    assert cells == [(0.0,), (2.0,)]
    rob = ExperimentSpec(experiment="success-vs-outliers",
                         outlier_rates=(0.5, 0.8), depth_rates=(0.5, 0.1))
    names, cells = rob.cells()
    assert names == ("outlier_rate", "depth_rate")
    assert cells == [(0.5, 0.5), (0.5, 0.1), (0.8, 0.5), (0.8, 0.1)]


def test_build_sim_config_splits_keys():
    cfg, camera = build_sim_config({
        "n_points_per_camera": "9",
        "cube_half_extent": "4",
        "rig_cameras": "3",
        "rig_yaw_step_deg": "60",
        "fx": "700", "width": "1000",
    })
    assert cfg.n_points_per_camera == 9
    assert cfg.cube_half_extent == 4.0
    assert len(cfg.rig) == 3
    assert camera.fx == 700.0 and camera.width == 1000
    with pytest.raises(SpecError, match="unknown generator key"):
        build_sim_config({"experiment": "accuracy-vs-noise"})


# --------------------------------------------------------------- CSV runs


TINY_ACCURACY = dict(
    experiment="accuracy-vs-noise",
    noise_sigmas="0,1",
    trials_per_cell="3",
    ransac_iterations="60",
    solvers="1p1dp,2dp",
    n_points_per_camera="12",
    seed="5",
)


def run_cli(*argv):
    return main(list(argv))


def test_run_writes_schema_and_rows(tmp_path, capsys):
    spec_path = write_spec(tmp_path, **TINY_ACCURACY)
    out = str(tmp_path / "acc.csv")
    assert run_cli("run", spec_path, "-o", out) == EXIT_OK
    assert capsys.readouterr().out.strip() == out

    lines = open(out).read().splitlines()
    assert lines[0] == CSV_SCHEMA_TAG
    assert lines[1] == ("experiment,noise_sigma,solver,trials,success_rate,"
                        "mean_t_err_m,mean_r_err_deg,mean_iters,wall_ms,seed")
    # 2 noise levels x 2 solvers
    assert len(lines) == 2 + 4
    for line in lines[2:]:
        parts = line.split(",")
        assert parts[0] == "accuracy-vs-noise"
        assert parts[2] in ("1p1dp", "2dp")
        assert parts[3] == "3" and parts[9] == "5"


def test_noise_free_column_is_exact(tmp_path):
    spec_path = write_spec(tmp_path, **TINY_ACCURACY)
    out = str(tmp_path / "acc.csv")
    assert run_cli("run", spec_path, "-o", out) == EXIT_OK
    for line in open(out).read().splitlines()[2:]:
        parts = line.split(",")
        if parts[1] == "0":
            assert float(parts[5]) < 1e-6
            assert float(parts[6]) < 1e-6
            assert parts[4] == "1.0000"


def test_rerun_is_byte_identical(tmp_path):
    spec_path = write_spec(tmp_path, **TINY_ACCURACY)
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert run_cli("run", spec_path, "-o", a) == EXIT_OK
    assert run_cli("run", spec_path, "-o", b) == EXIT_OK
    assert open(a, "rb").read() == open(b, "rb").read()


def test_interrupted_run_resumes_to_identical_csv(tmp_path):
    spec_path = write_spec(tmp_path, **TINY_ACCURACY)
    full, part = str(tmp_path / "full.csv"), str(tmp_path / "part.csv")
    assert run_cli("run", spec_path, "-o", full) == EXIT_OK
    lines = open(full).read().splitlines()
    with open(part, "w") as fh:
        fh.write("\n".join(lines[:4]) + "\n")  # schema + header + 2 rows
    assert run_cli("run", spec_path, "-o", part) == EXIT_OK
    assert open(part, "rb").read() == open(full, "rb").read()


def test_mismatched_existing_output_rejected(tmp_path):
    spec_path = write_spec(tmp_path, **TINY_ACCURACY)
    out = tmp_path / "acc.csv"
    out.write_text("not,a,results,file\n")
    assert run_cli("run", spec_path, "-o", str(out)) == EXIT_PARSE


def test_set_overrides_spec_file(tmp_path):
    spec_path = write_spec(tmp_path, **TINY_ACCURACY)
    out = str(tmp_path / "acc.csv")
    assert run_cli("run", spec_path, "-o", out,
                   "--set", "noise_sigmas=0", "--set", "solvers=1p1dp") == EXIT_OK
    rows = open(out).read().splitlines()[2:]
    assert len(rows) == 1 and rows[0].split(",")[1] == "0"


def test_bad_spec_exits_parse_error(tmp_path):
    spec_path = write_spec(tmp_path, experiment="warp-drive")
    assert run_cli("run", spec_path, "-o", str(tmp_path / "x.csv")) == EXIT_PARSE


def test_normalized_csv(tmp_path):
    src = tmp_path / "r.csv"
    src.write_text(
        CSV_SCHEMA_TAG + "\n"
        "experiment,outlier_rate,depth_rate,solver,trials,success_rate,"
        "mean_t_err_m,mean_r_err_deg,mean_iters,wall_ms,seed\n"
        "success-vs-outliers,0.5,0.1,1p1dp,4,0.8000,1e-2,1e-1,100.00,0.0,0\n"
        "success-vs-outliers,0.5,0.1,2dp,4,0.4000,1e-2,1e-1,100.00,0.0,0\n"
        "success-vs-outliers,0.8,0.1,1p1dp,4,0.0000,nan,nan,100.00,0.0,0\n"
        "success-vs-outliers,0.8,0.1,2dp,4,0.0000,nan,nan,100.00,0.0,0\n")
    dst = tmp_path / "n.csv"
    write_normalized_csv(src, dst)
    lines = dst.read_text().splitlines()
    assert lines[0] == CSV_SCHEMA_TAG + " normalized"
    rates = [line.split(",")[5] for line in lines[2:]]
    assert rates == ["1.0000", "0.5000", "0.0000", "0.0000"]
    junk = tmp_path / "junk.csv"
    junk.write_text("experiment,whatever\n")
    with pytest.raises(SpecError, match="not a recognized"):
        write_normalized_csv(junk, dst)


def test_run_normalize_flag_writes_sibling(tmp_path):
    spec_path = write_spec(tmp_path, **TINY_ACCURACY)
    out = str(tmp_path / "acc.csv")
    assert run_cli("run", spec_path, "-o", out, "--normalize") == EXIT_OK
    norm = tmp_path / "acc.normalized.csv"
    assert norm.exists()
    assert norm.read_text().splitlines()[0] == CSV_SCHEMA_TAG + " normalized"


def test_robustness_rows_and_failed_trials(tmp_path):
    spec_path = write_spec(
        tmp_path,
        experiment="success-vs-outliers",
        outlier_rates="0.5",
        depth_rates="0.5,0.1",
        trials_per_cell="2",
        ransac_iterations="40",
        n_points_per_camera="10",
        pixel_noise_sigma="0.5",
        depth_noise_sigma="0",
        seed="3",
    )
    out = str(tmp_path / "rob.csv")
    assert run_cli("run", spec_path, "-o", out) == EXIT_OK
    lines = open(out).read().splitlines()
    # 2 cells x 2 default solvers, every row well-formed even if trials fail
    assert len(lines) == 2 + 4
    for line in lines[2:]:
        parts = line.split(",")
        assert parts[0] == "success-vs-outliers"
        assert 0.0 <= float(parts[5]) <= 1.0 or math.isnan(float(parts[5]))


# ---------------------------------------------------------------- localize


def near_field_instance(seed=4, gamma=0.5, n=14):
    return generate_instance(
        SimConfig(n_points_per_camera=n, cube_half_extent=4.0,
                  translation_range=1.0, pixel_noise_sigma=0.0,
                  depth_noise_sigma=0.0, reliable_depth_rate=gamma,
                  seed=seed), CAM)


def test_localize_recovers_embedded_gt(tmp_path, capsys):
    inst = near_field_instance()
    path = str(tmp_path / "inst.jsonl")
    write_corr_file(path, inst.dps, inst.ps, CAM, graph=inst.graph,
                    gt_pose=inst.gt_pose)
    assert run_cli("localize", path, "--solver", "1p1dp",
                   "--seed", "9") == EXIT_OK
    out = capsys.readouterr().out
    fields = {}
    for token in ("theta", "t_x", "t_z"):
        idx = out.index(token)
        fields[token] = float(out[idx:].split()[1])
    est = PlanarPose(math.radians(fields["theta"]), fields["t_x"], fields["t_z"])
    assert rotation_error(est, inst.gt_pose) < 1e-6
    assert translation_error(est, inst.gt_pose) < 1e-6
    assert "solver: 1p1dp" in out
    assert "inliers:" in out and "iterations:" in out


def test_localize_auto_selects_2dp_with_dense_depth(tmp_path, capsys):
    inst = near_field_instance(seed=6, gamma=0.9, n=20)
    path = str(tmp_path / "dense.jsonl")
    write_corr_file(path, inst.dps, inst.ps, CAM, graph=inst.graph)
    assert run_cli("localize", path) == EXIT_OK
    out = capsys.readouterr().out
    assert "solver: 2dp" in out
    assert "modeled trial success" in out


def test_localize_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{onk\n")
    assert run_cli("localize", str(bad)) == EXIT_PARSE
    assert "error:" in capsys.readouterr().err


def test_localize_insufficient_exit(tmp_path, capsys):
    # every map point beyond the reliability range: no usable depth sample
    far = [CorrespondenceDP.from_depth(NormalizedPoint(0.01 * i, 0.0),
                                       np.array([0.1 * i, 0.0, 7.0 + i]))
           for i in range(3)]
    path = str(tmp_path / "far.jsonl")
    write_corr_file(path, far, [], CAM)
    assert run_cli("localize", path, "--solver", "1p1dp") == EXIT_INSUFFICIENT
    assert "error:" in capsys.readouterr().err


def test_localize_estimation_failed_exit(tmp_path, capsys):
    # the only sample pairs the depth point with itself as a 2D-2D match,
    # which is degenerate in every iteration
    dp = CorrespondenceDP.from_depth(NormalizedPoint(0.0, 0.0),
                                     np.array([0.0, 0.0, 2.0]))
    p = CorrespondenceP(NormalizedPoint(0.0, 0.0), NormalizedPoint(0.0, 0.0))
    path = str(tmp_path / "degen.jsonl")
    write_corr_file(path, [dp], [p], CAM)
    assert run_cli("localize", path, "--solver", "1p1dp",
                   "--iters", "8") == EXIT_FAILED
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------- gen


def test_gen_then_localize_pipeline(tmp_path, capsys):
    cfg = write_spec(tmp_path, name="sim.cfg", **{
        "n_points_per_camera": "14",
        "cube_half_extent": "4",
        "translation_range": "1",
        "pixel_noise_sigma": "0",
        "depth_noise_sigma": "0",
        "reliable_depth_rate": "0.5",
        "seed": "12",
    })
    inst_path = str(tmp_path / "inst.jsonl")
    assert run_cli("gen", cfg, "-o", inst_path) == EXIT_OK
    assert "7 dp + 7 p" in capsys.readouterr().out

    data = read_corr_file(inst_path)
    assert data.gt_pose is not None
    assert run_cli("localize", inst_path, "--solver", "1p1dp") == EXIT_OK
    out = capsys.readouterr().out
    idx = out.index("theta")
    theta = math.radians(float(out[idx:].split()[1]))
    assert abs(theta - data.gt_pose.theta) < 1e-6


def test_gen_rejects_bad_config(tmp_path, capsys):
    cfg = write_spec(tmp_path, name="sim.cfg", outlier_rate="1.5")
    assert run_cli("gen", cfg, "-o", str(tmp_path / "x.jsonl")) == EXIT_PARSE
    assert "error:" in capsys.readouterr().err


def test_gen_reports_visibility_failure(tmp_path, capsys):
    # a camera looking away from a tiny cube cannot fill its quota
    cfg = write_spec(tmp_path, name="sim.cfg", **{
        "cube_half_extent": "0.2",
        "translation_range": "0",
        "rotation_range": "0",
        "seed": "1",
    })
    rc = run_cli("gen", cfg, "-o", str(tmp_path / "x.jsonl"))
    captured = capsys.readouterr()
    if rc == EXIT_FAILED:
        assert "error:" in captured.err
    else:
        assert rc == EXIT_OK


# ---------------------------------------------------------------- model


def test_model_prints_probabilities(capsys):
    assert run_cli("model", "--lambda", "0.5", "--gamma", "0.3",
                   "--lambda-d", "0.7") == EXIT_OK
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("1p1dp") and "0.075000" in lines[0]
    assert lines[1].startswith("2dp") and "0.022500" in lines[1]
    assert lines[2].startswith("1p1dp-dense") and "0.105000" in lines[2]
    # expected-iteration counts for 0.99 confidence at those rates
    assert lines[0].rstrip().endswith("60")
    assert lines[1].rstrip().endswith("203")
    assert lines[2].rstrip().endswith("42")


def test_model_rejects_bad_rates(capsys):
    assert run_cli("model", "--lambda", "1.5", "--gamma", "0.3") == EXIT_PARSE
    assert "error:" in capsys.readouterr().err


# ----------------------------------------------------- single-candidate


def test_single_candidate_deterministic_and_feasible():
    inst = near_field_instance(seed=8)
    a = _single_candidate(inst.dps, inst.ps, inst.graph, Solver.ONE_P1DP, 21)
    b = _single_candidate(inst.dps, inst.ps, inst.graph, Solver.ONE_P1DP, 21)
    assert a is not None and b is not None
    assert a.theta == b.theta and a.t_x == b.t_x and a.t_z == b.t_z
    # noise-free: the raw candidate already solves its own sample exactly,
    # and with zero outliers it matches the ground truth
    assert rotation_error(a, inst.gt_pose) < 1e-6


def test_single_candidate_starved_returns_none():
    inst = near_field_instance(seed=8)
    unreliable = [CorrespondenceDP(dp.query, dp.point3d, dp.ref_frame,
                                   dp.query_frame, reliable=False)
                  for dp in inst.dps]
    out = _single_candidate(unreliable, inst.ps, inst.graph,
                            Solver.TWO_DP, 21)
    assert out is None
