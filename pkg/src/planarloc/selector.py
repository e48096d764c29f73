"""Minimal-sample success model and rule-based solver selection.

Correspondence quality is modeled with independent Bernoulli draws: a
sparse 2D-2D match is an inlier with rate lambda_, a reference feature
carries trusted depth with rate gamma, and a dense matcher (when present)
supplies 2D-2D inliers at rate lambda_d. A minimal sample succeeds when
every drawn constraint is an inlier with the depth it needs, which gives
closed-form per-trial success probabilities and a simple selection rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class MissingDenseRate(ValueError):
    """Dense-correspondence inlier rate required but absent."""


class NoViableSolver(ValueError):
    """No solver's sample preconditions can be met by the data."""


class Setting(Enum):
    """Correspondence regime: sparse/dense 2D-2D matches x sparse/dense depth."""

    SCSD = "scsd"
    DCSD = "dcsd"
    DCDD = "dcdd"


class Solver(Enum):
    ONE_P1DP = "1p1dp"
    TWO_DP = "2dp"
    # auto-selection at estimation time; not a minimal solver itself, so the
    # success model rejects it
    MIX = "mix"


MINIMAL_SOLVERS = (Solver.ONE_P1DP, Solver.TWO_DP)


@dataclass(frozen=True)
class EnvironmentProfile:
    """Quality rates describing a localization environment.

    lambda_ : inlier rate of sparse 2D-2D correspondences, in [0, 1].
    gamma : reliable depth rate of reference features, in [0, 1].
    lambda_d : inlier rate of dense 2D-2D correspondences; only meaningful
        outside SCSD and may be None while an estimate is unavailable.
    """

    lambda_: float
    gamma: float
    lambda_d: float | None = None
    setting: Setting = Setting.SCSD

    def __post_init__(self):
        for name in ("lambda_", "gamma"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {rate}")
        if self.lambda_d is not None:
            if not 0.0 <= self.lambda_d <= 1.0:
                raise ValueError(f"lambda_d must be in [0, 1], got {self.lambda_d}")
            if self.setting is Setting.SCSD:
                raise ValueError("lambda_d has no meaning without a dense matcher")


def trial_success_probability(profile: EnvironmentProfile, solver: Solver) -> float:
    """Probability that one random minimal sample is all-inlier.

    A depth-bearing draw must be an inlier with trusted depth
    (rate lambda_ * gamma). The 2D-2D draw uses the sparse rate, or the
    dense rate when a dense matcher provides the matches. Dense depth
    enters only through gamma, so that regime scores like the sparse one.

    Raises MissingDenseRate when the dense 2D-2D rate is needed but absent.
    """
    if solver not in MINIMAL_SOLVERS:
        raise ValueError("success model is defined for minimal solvers only")
    lam_gam = profile.lambda_ * profile.gamma
    if solver is Solver.TWO_DP:
        return lam_gam ** 2
    if profile.setting is Setting.DCSD:
        if profile.lambda_d is None:
            raise MissingDenseRate("dense 2D-2D inlier rate not provided")
        return profile.lambda_d * lam_gam
    return profile.lambda_ * lam_gam


def select_solver(gamma_hat: float, n_dp: int, n_p: int,
                  setting: Setting = Setting.SCSD,
                  lambda_hat: float | None = None,
                  lambda_d_hat: float | None = None,
                  tau: float = 0.6) -> Solver:
    """Pick the minimal solver for the data at hand. Pure function.

    Parameters
    ----------
    gamma_hat : estimated fraction of correspondences carrying reliable depth.
    n_dp : count of reliable-depth correspondences available for sampling.
    n_p : count of additional 2D-2D correspondences.
    setting, lambda_hat, lambda_d_hat : with a dense matcher and both rate
        estimates, the modeled per-trial probabilities decide; otherwise a
        threshold on gamma_hat does.
    tau : depth-rate threshold above which the depth-pair solver wins.

    Raises NoViableSolver when neither solver's sample preconditions hold.
    """
    feasible_one = n_dp >= 1 and n_dp + n_p >= 2
    feasible_two = n_dp >= 2
    if not (feasible_one or feasible_two):
        raise NoViableSolver(
            f"need 1 depth point + 1 match or 2 depth points, have {n_dp} dp / {n_p} p")
    if not feasible_two:
        return Solver.ONE_P1DP
    if (setting is Setting.DCSD and lambda_hat is not None
            and lambda_d_hat is not None):
        profile = EnvironmentProfile(lambda_hat, gamma_hat, lambda_d_hat, setting)
        p_one = trial_success_probability(profile, Solver.ONE_P1DP)
        p_two = trial_success_probability(profile, Solver.TWO_DP)
        return Solver.ONE_P1DP if p_one > p_two else Solver.TWO_DP
    return Solver.TWO_DP if gamma_hat >= tau else Solver.ONE_P1DP


def empirical_trial_success(profile: EnvironmentProfile, solver: Solver,
                            n_samples: int, seed: int = 0) -> float:
    """Monte-Carlo frequency of an all-inlier minimal sample.

    Draws each quality independently (inlier coin, depth coin) instead of
    using the product rates, so the estimate exercises the Bernoulli model
    rather than the closed form it is checked against.
    """
    if n_samples < 1000:
        raise ValueError("need at least 1000 samples for a meaningful frequency")
    rng = np.random.default_rng(seed)
    lam, gam = profile.lambda_, profile.gamma

    def dp_draw():
        return (rng.random(n_samples) < lam) & (rng.random(n_samples) < gam)

    if solver is Solver.TWO_DP:
        ok = dp_draw() & dp_draw()
    else:
        if profile.setting is Setting.DCSD:
            if profile.lambda_d is None:
                raise MissingDenseRate("dense 2D-2D inlier rate not provided")
            second = profile.lambda_d
        else:
            second = lam
        ok = dp_draw() & (rng.random(n_samples) < second)
    return float(ok.mean())
