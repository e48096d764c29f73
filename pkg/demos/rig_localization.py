"""Multi-camera localization: one RANSAC over a calibrated rig.

Builds a three-camera rig (60 deg yaw steps, 0.25 m spacing), generates a
contaminated instance observed by every camera, and compares localizing
from the anchor camera alone against localizing from the full rig. Every
correspondence is tagged with its (reference, query) camera pair and the
frame graph folds the rig calibration into each minimal solve, so all
three cameras vote in the same consensus loop.
"""

import math

from planarloc.geometry import CameraModel, rotation_error, translation_error
from planarloc.ransac import RansacConfig, Solver, ransac_estimate
from planarloc.simulate import SimConfig, generate_instance, make_rig

CAMERA = CameraModel(fx=800.0, fy=800.0, cx=640.0, cy=480.0)


def main():
    rig = make_rig(n_cameras=3, yaw_step_deg=60.0, spacing_m=0.25)
    inst = generate_instance(
        SimConfig(n_points_per_camera=50, outlier_rate=0.6,
                  reliable_depth_rate=0.2, pixel_noise_sigma=0.25,
                  rig=rig, seed=7), CAMERA)
    gt = inst.gt_pose
    print(f"ground truth: theta={math.degrees(gt.theta):+.3f} deg "
          f"t=({gt.t_x:+.3f}, {gt.t_z:+.3f}) m")
    print(f"{len(inst.dps)} depth + {len(inst.ps)} plain correspondences "
          f"across 3 cameras, 60% outliers, 20% reliable depth\n")

    anchor_dps = [d for d in inst.dps if d.ref_frame == 0 and d.query_frame == 0]
    anchor_ps = [p for p in inst.ps if p.ref_frame == 0 and p.query_frame == 0]

    cfg = RansacConfig(max_iterations=500, solver=Solver.ONE_P1DP, seed=0,
                       refine=True)
    for label, dps, ps, graph in [
            ("anchor camera only", anchor_dps, anchor_ps, None),
            ("full rig          ", inst.dps, inst.ps, inst.graph)]:
        res = ransac_estimate(dps, ps, graph, cfg, CAMERA)
        r_err = rotation_error(res.pose, gt)
        t_err = translation_error(res.pose, gt)
        print(f"{label}: {len(dps) + len(ps):3d} corrs, "
              f"score {res.score:3d}, "
              f"err {r_err:7.4f} deg / {t_err:7.4f} m")

    print("\nThe rig triples the vote pool and adds wide-baseline geometry,")
    print("so the consensus is tighter for the same iteration budget.")


if __name__ == "__main__":
    main()
