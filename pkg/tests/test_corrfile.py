"""Tests for correspondence file serialization."""

import json
import math

import numpy as np
import pytest

from planarloc.corrfile import (
    FORMAT_VERSION,
    ParseError,
    read_corr_file,
    write_corr_file,
)
from planarloc.geometry import (
    DEPTH_RELIABILITY_THRESHOLD,
    CorrespondenceDP,
    CorrespondenceP,
    NormalizedPoint,
    PlanarPose,
    denormalize,
    rotation_error,
    translation_error,
)
from planarloc.ransac import RansacConfig, ransac_estimate
from planarloc.selector import Solver
from planarloc.simulate import SimConfig, generate_instance, make_rig

from testkit import default_camera

CAM = default_camera()


def noise_free_instance(seed=3, rig=None):
    kw = dict(n_points_per_camera=12, pixel_noise_sigma=0.0,
              depth_noise_sigma=0.0, reliable_depth_rate=0.5, seed=seed)
    if rig is not None:
        kw["rig"] = rig
    return generate_instance(SimConfig(**kw), CAM)


# --------------------------------------------------------------- round trip


def test_round_trip_preserves_counts_and_pixels(tmp_path):
    inst = noise_free_instance()
    path = tmp_path / "corr.jsonl"
    write_corr_file(path, inst.dps, inst.ps, CAM, graph=inst.graph,
                    gt_pose=inst.gt_pose)
    loaded = read_corr_file(path)

    assert len(loaded.dps) == len(inst.dps)
    assert len(loaded.ps) == len(inst.ps)
    for orig, back in zip(inst.dps, loaded.dps):
        # pixels survive the JSON round trip bit-exactly, rays to fp error
        np.testing.assert_array_equal(denormalize(back.query, CAM),
                                      denormalize(orig.query, CAM))
        np.testing.assert_array_equal(back.point3d, orig.point3d)
        assert back.ref_frame == orig.ref_frame
        assert back.query_frame == orig.query_frame
    for orig, back in zip(inst.ps, loaded.ps):
        np.testing.assert_array_equal(denormalize(back.query, CAM),
                                      denormalize(orig.query, CAM))
        np.testing.assert_array_equal(denormalize(back.reference, CAM),
                                      denormalize(orig.reference, CAM))


def test_round_trip_preserves_camera_graph_and_gt(tmp_path):
    rig = make_rig()
    inst = noise_free_instance(seed=9, rig=rig)
    path = tmp_path / "corr.jsonl"
    write_corr_file(path, inst.dps, inst.ps, CAM, graph=inst.graph,
                    gt_pose=inst.gt_pose)
    loaded = read_corr_file(path)

    assert loaded.camera.fx == CAM.fx and loaded.camera.fy == CAM.fy
    assert loaded.camera.cx == CAM.cx and loaded.camera.cy == CAM.cy
    assert loaded.camera.width == CAM.width
    assert loaded.camera.height == CAM.height
    for k in range(3):
        np.testing.assert_array_equal(loaded.graph.ref_pose(k).rotation,
                                      inst.graph.ref_pose(k).rotation)
        np.testing.assert_array_equal(loaded.graph.ref_pose(k).translation,
                                      inst.graph.ref_pose(k).translation)
        np.testing.assert_array_equal(loaded.graph.query_offset(k).rotation,
                                      inst.graph.query_offset(k).rotation)
        np.testing.assert_array_equal(loaded.graph.query_offset(k).translation,
                                      inst.graph.query_offset(k).translation)
    assert loaded.gt_pose is not None
    assert loaded.gt_pose.theta == inst.gt_pose.theta
    assert loaded.gt_pose.t_x == inst.gt_pose.t_x
    assert loaded.gt_pose.t_z == inst.gt_pose.t_z


def test_gt_pose_omitted_reads_none(tmp_path):
    inst = noise_free_instance()
    path = tmp_path / "corr.jsonl"
    write_corr_file(path, inst.dps, inst.ps, CAM, graph=inst.graph)
    assert read_corr_file(path).gt_pose is None


def test_exported_noise_free_instance_recovers_gt(tmp_path):
    for seed in range(5):
        # near-field world so re-derived depth reliability keeps the dps
        inst = generate_instance(
            SimConfig(n_points_per_camera=12, cube_half_extent=4.0,
                      translation_range=1.0, pixel_noise_sigma=0.0,
                      depth_noise_sigma=0.0, reliable_depth_rate=0.5,
                      seed=seed), CAM)
        path = tmp_path / f"corr{seed}.jsonl"
        write_corr_file(path, inst.dps, inst.ps, CAM, graph=inst.graph,
                        gt_pose=inst.gt_pose)
        loaded = read_corr_file(path)
        cfg = RansacConfig(max_iterations=64, solver=Solver.ONE_P1DP, seed=17)
        res = ransac_estimate(loaded.dps, loaded.ps, loaded.graph, cfg,
                              loaded.camera)
        assert rotation_error(res.pose, loaded.gt_pose) < 1e-6
        assert translation_error(res.pose, loaded.gt_pose) < 1e-6


def test_blank_lines_are_ignored(tmp_path):
    inst = noise_free_instance()
    path = tmp_path / "corr.jsonl"
    write_corr_file(path, inst.dps, inst.ps, CAM, graph=inst.graph)
    padded = tmp_path / "padded.jsonl"
    lines = path.read_text().splitlines()
    padded.write_text("\n".join([lines[0], ""] + lines[1:] + ["", ""]) + "\n")
    loaded = read_corr_file(padded)
    assert len(loaded.dps) == len(inst.dps)
    assert len(loaded.ps) == len(inst.ps)


# -------------------------------------------------- reliability re-derived


def test_depth_reliability_assigned_on_load(tmp_path):
    near = CorrespondenceDP.from_depth(
        NormalizedPoint(0.01, 0.02),
        np.array([0.1, 0.2, DEPTH_RELIABILITY_THRESHOLD - 1.0]))
    far = CorrespondenceDP.from_depth(
        NormalizedPoint(-0.03, 0.01),
        np.array([0.3, -0.1, DEPTH_RELIABILITY_THRESHOLD + 1.0]))
    assert near.reliable and not far.reliable

    path = tmp_path / "corr.jsonl"
    write_corr_file(path, [near, far], [], CAM)
    loaded = read_corr_file(path)
    assert loaded.dps[0].reliable
    assert not loaded.dps[1].reliable


# ------------------------------------------------------------ parse errors


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n")
    return path


def header_line(**overrides):
    header = {
        "type": "header", "version": FORMAT_VERSION,
        "camera": {"fx": 800.0, "fy": 800.0, "cx": 640.0, "cy": 480.0,
                   "width": 1280, "height": 960,
                   "alignment": np.eye(3).tolist()},
        "ref_poses": {}, "query_offsets": {}, "gt_pose": None,
    }
    header.update(overrides)
    return json.dumps(header)


def dp_line(**overrides):
    rec = {"type": "dp", "query_px": [640.0, 480.0],
           "point3d": [0.0, 0.0, 2.0], "ref_frame": 0, "query_frame": 0}
    rec.update(overrides)
    return json.dumps(rec)


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "corr.jsonl"
    path.write_text("")
    with pytest.raises(ParseError, match="empty"):
        read_corr_file(path)


def test_invalid_json_rejected(tmp_path):
    path = write_lines(tmp_path / "c.jsonl", [header_line(), "{not json"])
    with pytest.raises(ParseError, match="line 2"):
        read_corr_file(path)


def test_missing_header_rejected(tmp_path):
    path = write_lines(tmp_path / "c.jsonl", [dp_line()])
    with pytest.raises(ParseError, match="header"):
        read_corr_file(path)


def test_version_mismatch_rejected(tmp_path):
    path = write_lines(tmp_path / "c.jsonl",
                       [header_line(version=FORMAT_VERSION + 1)])
    with pytest.raises(ParseError, match="version"):
        read_corr_file(path)


def test_duplicate_header_rejected(tmp_path):
    path = write_lines(tmp_path / "c.jsonl", [header_line(), header_line()])
    with pytest.raises(ParseError, match="duplicate header"):
        read_corr_file(path)


def test_unknown_record_type_rejected(tmp_path):
    path = write_lines(tmp_path / "c.jsonl",
                       [header_line(), json.dumps({"type": "dq"})])
    with pytest.raises(ParseError, match="unknown record type"):
        read_corr_file(path)


def test_missing_field_rejected(tmp_path):
    rec = json.loads(dp_line())
    del rec["query_px"]
    path = write_lines(tmp_path / "c.jsonl", [header_line(), json.dumps(rec)])
    with pytest.raises(ParseError, match="query_px"):
        read_corr_file(path)


def test_wrong_vector_length_rejected(tmp_path):
    path = write_lines(tmp_path / "c.jsonl",
                       [header_line(), dp_line(point3d=[1.0, 2.0])])
    with pytest.raises(ParseError, match="point3d"):
        read_corr_file(path)


def test_non_finite_vector_rejected(tmp_path):
    path = write_lines(
        tmp_path / "c.jsonl",
        [header_line(), dp_line(point3d=[1.0, 2.0, float("nan")])])
    with pytest.raises(ParseError, match="point3d"):
        read_corr_file(path)


def test_non_integer_frame_rejected(tmp_path):
    for bad in ("1", 1.5, True):
        path = write_lines(tmp_path / "c.jsonl",
                           [header_line(), dp_line(ref_frame=bad)])
        with pytest.raises(ParseError, match="ref_frame"):
            read_corr_file(path)


def test_non_positive_depth_rejected(tmp_path):
    path = write_lines(tmp_path / "c.jsonl",
                       [header_line(), dp_line(point3d=[0.0, 0.0, -2.0])])
    with pytest.raises(ParseError, match="line 2"):
        read_corr_file(path)


def test_bad_camera_rejected(tmp_path):
    path = write_lines(tmp_path / "c.jsonl",
                       [header_line(camera={"fx": 800.0})])
    with pytest.raises(ParseError, match="camera"):
        read_corr_file(path)


def test_bad_transform_rejected(tmp_path):
    path = write_lines(
        tmp_path / "c.jsonl",
        [header_line(ref_poses={"1": {"rotation": [[1.0]]}})])
    with pytest.raises(ParseError, match="transform"):
        read_corr_file(path)
