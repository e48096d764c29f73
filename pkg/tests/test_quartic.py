import numpy as np
import pytest

from planarloc.quartic import IdenticallyZero, solve_quartic


def oracle_real_roots(coeffs, polish_steps=6):
    """Companion-matrix eigenvalue oracle, independently Newton-polished."""
    arr = np.asarray(coeffs, dtype=float)
    arr = np.trim_zeros(arr, "f")
    if len(arr) <= 1:
        return np.empty(0)
    roots = np.roots(arr)
    der = np.polyder(arr)
    for _ in range(polish_steps):
        fp = np.polyval(der, roots)
        fv = np.polyval(arr, roots)
        step = np.where(np.abs(fp) > 1e-300, fv / np.where(fp == 0, 1.0, fp), 0.0)
        roots = roots - step
    real = roots[np.abs(roots.imag) < 1e-8 * (1.0 + np.abs(roots.real))].real
    real = np.sort(real)
    out = []
    for x in real:
        if not out or x - out[-1] > 1e-8:
            out.append(x)
    return np.asarray(out)


def test_frozen_examples():
    assert np.allclose(solve_quartic([1, 0, -5, 0, 4]), [-2, -1, 1, 2], atol=1e-10)
    assert np.allclose(solve_quartic([1, -4, 6, -4, 1]), [1.0], atol=1e-6)


def test_no_real_roots_returns_empty():
    assert solve_quartic([1, 0, 0, 0, 1]).size == 0  # x^4 = -1
    assert solve_quartic([0, 0, 1, 0, 1]).size == 0  # x^2 = -1


def test_degree_degrades_with_leading_zeros():
    assert np.allclose(solve_quartic([0, 0, 1, -3, 2]), [1, 2], atol=1e-10)
    assert np.allclose(solve_quartic([0, 1, 0, -7, 6]), [-3, 1, 2], atol=1e-9)
    assert np.allclose(solve_quartic([0, 0, 0, 2, -4]), [2], atol=1e-12)
    assert solve_quartic([0, 0, 0, 0, 5]).size == 0


def test_identically_zero_raises():
    with pytest.raises(IdenticallyZero):
        solve_quartic([0, 0, 0, 0, 0])
    with pytest.raises(IdenticallyZero):
        solve_quartic([1e-15, -1e-15, 0, 1e-16, 0])


def test_input_validation():
    with pytest.raises(ValueError):
        solve_quartic([1, 2, 3])
    with pytest.raises(ValueError):
        solve_quartic([1, 2, 3, 4, 5, 6])


def test_repeated_roots_deduplicated():
    # (x - 2)^2 (x^2 + 1)
    coeffs = np.polymul(np.polymul([1, -2], [1, -2]), [1, 0, 1])
    roots = solve_quartic(coeffs)
    assert roots.shape == (1,)
    assert roots[0] == pytest.approx(2.0, abs=1e-6)


def test_near_multiple_roots():
    # (x - 1)^2 (x - 1.001) (x + 5)
    coeffs = np.polymul(np.polymul([1, -1], [1, -1]), np.polymul([1, -1.001], [1, 5]))
    roots = solve_quartic(coeffs)
    assert roots.min() == pytest.approx(-5.0, abs=1e-9)
    assert np.all((np.abs(roots - 1.0) < 5e-3) | (np.abs(roots + 5.0) < 1e-9))


def test_matches_companion_oracle_random():
    rng = np.random.default_rng(50)
    checked = 0
    for _ in range(1000):
        coeffs = rng.normal(size=5)
        want = oracle_real_roots(coeffs)
        got = solve_quartic(coeffs)
        assert len(got) == len(want), f"coeffs {coeffs}: {got} vs oracle {want}"
        if len(want):
            assert np.abs(got - want).max() < 1e-7 * (1 + np.abs(want).max())
        checked += 1
    assert checked == 1000


def test_matches_companion_oracle_mixed_scales():
    # wildly scaled coefficients push roots toward their conditioning limit,
    # so the agreement tolerance is proportionally looser
    rng = np.random.default_rng(53)
    for _ in range(500):
        coeffs = rng.normal(size=5) * rng.choice([0.01, 1.0, 100.0], size=5)
        want = oracle_real_roots(coeffs)
        got = solve_quartic(coeffs)
        assert len(got) == len(want), f"coeffs {coeffs}: {got} vs oracle {want}"
        if len(want):
            assert np.abs(got - want).max() < 1e-6 * (1 + np.abs(want).max())


def test_matches_companion_oracle_constructed_real_roots():
    rng = np.random.default_rng(51)
    for _ in range(500):
        roots = np.sort(rng.uniform(-10, 10, size=4))
        if np.diff(roots).min() < 1e-3:
            continue
        coeffs = np.poly(roots) * rng.uniform(0.1, 10.0)
        got = solve_quartic(coeffs)
        assert len(got) == 4
        assert np.abs(got - roots).max() < 1e-7 * (1 + np.abs(roots).max())


def test_candidate_count_never_exceeds_four():
    rng = np.random.default_rng(52)
    for _ in range(500):
        got = solve_quartic(rng.normal(size=5))
        assert got.size <= 4
        assert np.all(np.diff(got) > 0)
