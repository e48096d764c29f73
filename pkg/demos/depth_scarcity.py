"""Why the mixed minimal sample wins when reliable depth is scarce.

Sweeps the reliable-depth rate at a fixed 70% outlier rate and tallies
how often each RANSAC variant lands within 0.1 m / 1 deg of the truth.
A 2dp sample needs two good depth points, so its success probability
collapses quadratically as depth gets scarce; 1p1dp only needs one and
degrades linearly. The auto-selecting estimator reads the instance
composition and should track whichever solver is better.
"""

import math

from planarloc.geometry import CameraModel, rotation_error, translation_error
from planarloc.ransac import RansacConfig, Solver, ransac_estimate
from planarloc.ransac import EstimationFailed, InsufficientCorrespondences
from planarloc.simulate import SimConfig, generate_instance

CAMERA = CameraModel(fx=800.0, fy=800.0, cx=640.0, cy=480.0)
TRIALS = 40
SOLVERS = [("1p1dp", Solver.ONE_P1DP), ("2dp", Solver.TWO_DP),
           ("auto", Solver.MIX)]


def success_rate(solver, depth_rate):
    wins = 0
    for trial in range(TRIALS):
        inst = generate_instance(
            SimConfig(n_points_per_camera=50, outlier_rate=0.7,
                      reliable_depth_rate=depth_rate,
                      pixel_noise_sigma=0.25, seed=(11, trial)), CAMERA)
        cfg = RansacConfig(max_iterations=500, solver=solver, seed=trial,
                           refine=True)
        try:
            res = ransac_estimate(inst.dps, inst.ps, inst.graph, cfg, CAMERA)
        except (InsufficientCorrespondences, EstimationFailed):
            continue
        if (translation_error(res.pose, inst.gt_pose) < 0.1
                and rotation_error(res.pose, inst.gt_pose) < 1.0):
            wins += 1
    return wins / TRIALS


def main():
    print(f"outlier rate 0.70, {TRIALS} trials per cell, 500 iterations")
    print(f"{'depth rate':>10}  " + "  ".join(f"{n:>6}" for n, _ in SOLVERS))
    for depth_rate in (0.5, 0.3, 0.1):
        rates = [success_rate(s, depth_rate) for _, s in SOLVERS]
        print(f"{depth_rate:>10.1f}  " + "  ".join(f"{r:6.2f}" for r in rates))
    print("\n2dp falls off first: its sample succeeds only when both draws")
    print("hit the shrinking reliable-depth subset.")


if __name__ == "__main__":
    main()
