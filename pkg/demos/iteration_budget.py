"""Closed-form success model vs measured single-sample success.

For an environment with match inlier rate lambda and reliable-depth rate
gamma, the probability that one random minimal sample is all-inlier has a
closed form per solver: a depth slot costs lambda*gamma (the drawn feature
must have trusted depth AND match correctly), a plain match slot costs
lambda. That number drives the iteration budget: the solver with better
single-sample odds needs exponentially fewer draws for the same
confidence. This demo prints the model, then verifies it by drawing
samples from the feature pool of an actual synthetic instance.
"""

import numpy as np

from planarloc.geometry import CameraModel
from planarloc.ransac import Solver, expected_iterations
from planarloc.selector import EnvironmentProfile, trial_success_probability
from planarloc.simulate import SimConfig, generate_instance

CAMERA = CameraModel(fx=800.0, fy=800.0, cx=640.0, cy=480.0)
N_DRAWS = 200_000


def measured(lam, gamma, rng):
    """Sample-success frequency over features pooled from 20 instances.

    Pooling matters: within a single instance the overlap between the
    outlier subset and the reliable-depth subset fluctuates around its
    expectation, so one instance's joint rate is only accurate to ~1/sqrt(n).
    """
    labels = []
    for k in range(20):
        inst = generate_instance(
            SimConfig(n_points_per_camera=800, outlier_rate=1.0 - lam,
                      reliable_depth_rate=gamma, translation_range=0.5,
                      rotation_range=0.3, seed=(3, int(lam * 10), k)), CAMERA)
        labels += list(inst.labels_dp) + list(inst.labels_p)
    has_depth = np.array([l.has_reliable_depth for l in labels])
    inlier = np.array([not l.is_outlier for l in labels])
    a = rng.integers(0, len(labels), N_DRAWS)
    b = rng.integers(0, len(labels), N_DRAWS)
    freq_1p1dp = float(np.mean(has_depth[a] & inlier[a] & inlier[b]))
    freq_2dp = float(np.mean(has_depth[a] & inlier[a]
                             & has_depth[b] & inlier[b]))
    return freq_1p1dp, freq_2dp


def main():
    rng = np.random.default_rng(0)
    print(f"{'lambda':>7} {'gamma':>6} | {'model 1p1dp':>12} {'drawn':>7} "
          f"| {'model 2dp':>10} {'drawn':>7} | iters(0.99) 1p1dp vs 2dp")
    for lam, gamma in [(0.5, 0.5), (0.3, 0.5), (0.3, 0.2), (0.2, 0.1)]:
        profile = EnvironmentProfile(lam, gamma)
        p1 = trial_success_probability(profile, Solver.ONE_P1DP)
        p2 = trial_success_probability(profile, Solver.TWO_DP)
        f1, f2 = measured(lam, gamma, rng)
        n1 = expected_iterations(p1, 0.99)
        n2 = expected_iterations(p2, 0.99)
        print(f"{lam:>7.2f} {gamma:>6.2f} | {p1:>12.4f} {f1:>7.4f} "
              f"| {p2:>10.4f} {f2:>7.4f} | {n1:>6d} vs {n2:>6d}")
    print("\nThe mixed sample's linear depth dependence buys it an order of")
    print("magnitude fewer iterations once reliable depth is scarce.")


if __name__ == "__main__":
    main()
