"""Line-oriented JSON serialization of correspondence sets.

One JSON object per line: a header record carrying the camera intrinsics,
the frame graph, and (optionally) an embedded ground-truth pose, followed
by one record per correspondence. Pixels are stored instead of normalized
rays so files stay language-neutral; depth reliability is re-derived on
load from the stored 3D point.
"""

import json
from dataclasses import dataclass

import numpy as np

from .geometry import (
    CameraModel,
    CheiralityViolation,
    CorrespondenceDP,
    CorrespondenceP,
    FramePoseGraph,
    PlanarPose,
    RelativeTransform,
    denormalize,
    normalize,
)

FORMAT_VERSION = 1


class ParseError(ValueError):
    """Correspondence file malformed or violating record contracts."""


@dataclass
class CorrFile:
    """Parsed contents of a correspondence file."""

    camera: CameraModel
    graph: FramePoseGraph
    dps: list
    ps: list
    gt_pose: PlanarPose | None = None


def _transform_to_json(T: RelativeTransform) -> dict:
    return {"rotation": T.rotation.tolist(), "translation": T.translation.tolist()}


def _transform_from_json(obj) -> RelativeTransform:
    try:
        return RelativeTransform(np.array(obj["rotation"], dtype=float),
                                 np.array(obj["translation"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad rigid transform record: {exc}") from exc


def write_corr_file(path, dps, ps, camera: CameraModel,
                    graph: FramePoseGraph | None = None,
                    gt_pose: PlanarPose | None = None) -> None:
    """Serialize correspondences; observations are written as pixels."""
    graph = graph or FramePoseGraph.single_camera()
    header = {
        "type": "header",
        "version": FORMAT_VERSION,
        "camera": {
            "fx": camera.fx, "fy": camera.fy,
            "cx": camera.cx, "cy": camera.cy,
            "width": camera.width, "height": camera.height,
            "alignment": camera.alignment.tolist(),
        },
        "ref_poses": {str(k): _transform_to_json(v)
                      for k, v in sorted(graph.ref_poses.items()) if k != 0},
        "query_offsets": {str(k): _transform_to_json(v)
                          for k, v in sorted(graph.query_offsets.items()) if k != 0},
        "gt_pose": None if gt_pose is None else
        {"theta": gt_pose.theta, "t_x": gt_pose.t_x, "t_z": gt_pose.t_z},
    }
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for dp in dps:
            rec = {"type": "dp",
                   "query_px": denormalize(dp.query, camera).tolist(),
                   "point3d": dp.point3d.tolist(),
                   "ref_frame": dp.ref_frame, "query_frame": dp.query_frame}
            fh.write(json.dumps(rec) + "\n")
        for p in ps:
            rec = {"type": "p",
                   "query_px": denormalize(p.query, camera).tolist(),
                   "ref_px": denormalize(p.reference, camera).tolist(),
                   "ref_frame": p.ref_frame, "query_frame": p.query_frame}
            fh.write(json.dumps(rec) + "\n")


def _require(record: dict, key: str, line_no: int):
    try:
        return record[key]
    except KeyError:
        raise ParseError(f"line {line_no}: missing field '{key}'") from None


def _vector(record: dict, key: str, length: int, line_no: int) -> np.ndarray:
    val = _require(record, key, line_no)
    arr = np.asarray(val, dtype=float)
    if arr.shape != (length,) or not np.isfinite(arr).all():
        raise ParseError(f"line {line_no}: '{key}' must be {length} finite numbers")
    return arr


def _frame(record: dict, key: str, line_no: int) -> int:
    val = _require(record, key, line_no)
    if not isinstance(val, int) or isinstance(val, bool):
        raise ParseError(f"line {line_no}: '{key}' must be an integer")
    return val


def read_corr_file(path) -> CorrFile:
    """Parse a correspondence file.

    Depth reliability is assigned on load: a DP record is flagged reliable
    iff its stored point has forward coordinate below the depth
    reliability threshold. Raises ParseError on any malformed record.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty correspondence file")

    records = []
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append((i, json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {i}: invalid JSON: {exc}") from exc

    line_no, header = records[0]
    if not isinstance(header, dict) or header.get("type") != "header":
        raise ParseError("first record must be the header")
    if header.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {header.get('version')!r}")
    cam = _require(header, "camera", line_no)
    try:
        camera = CameraModel(fx=cam["fx"], fy=cam["fy"], cx=cam["cx"], cy=cam["cy"],
                             width=cam["width"], height=cam["height"],
                             alignment=np.array(cam["alignment"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad camera record: {exc}") from exc
    graph = FramePoseGraph(
        {int(k): _transform_from_json(v)
         for k, v in header.get("ref_poses", {}).items()},
        {int(k): _transform_from_json(v)
         for k, v in header.get("query_offsets", {}).items()})
    gt = header.get("gt_pose")
    gt_pose = None if gt is None else PlanarPose(gt["theta"], gt["t_x"], gt["t_z"])

    dps, ps = [], []
    for line_no, rec in records[1:]:
        if not isinstance(rec, dict):
            raise ParseError(f"line {line_no}: record must be a JSON object")
        kind = rec.get("type")
        if kind == "dp":
            query = normalize(_vector(rec, "query_px", 2, line_no), camera)
            point3d = _vector(rec, "point3d", 3, line_no)
            try:
                dps.append(CorrespondenceDP.from_depth(
                    query, point3d,
                    ref_frame=_frame(rec, "ref_frame", line_no),
                    query_frame=_frame(rec, "query_frame", line_no)))
            except CheiralityViolation as exc:
                raise ParseError(f"line {line_no}: {exc}") from exc
        elif kind == "p":
            ps.append(CorrespondenceP(
                normalize(_vector(rec, "query_px", 2, line_no), camera),
                normalize(_vector(rec, "ref_px", 2, line_no), camera),
                ref_frame=_frame(rec, "ref_frame", line_no),
                query_frame=_frame(rec, "query_frame", line_no)))
        elif kind == "header":
            raise ParseError(f"line {line_no}: duplicate header")
        else:
            raise ParseError(f"line {line_no}: unknown record type {kind!r}")
    return CorrFile(camera=camera, graph=graph, dps=dps, ps=ps, gt_pose=gt_pose)
