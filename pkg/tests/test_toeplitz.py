import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import crandn, unit
from toeplitz_opsys.linalg import matrix_rank, vec
from toeplitz_opsys.toeplitz import (
    ToeplitzCoeffs,
    ToeplitzSystem,
    delta,
    embed,
    fourier_from_samples,
    is_member,
    project,
    tau,
    toeplitz_residual,
    truncate,
)


def samples(f, m):
    t = 2 * np.pi * np.arange(m) / m
    return f(t)


def test_system_shape():
    sys = ToeplitzSystem(3)
    assert sys.dim == 5
    assert list(sys.offsets) == [-2, -1, 0, 1, 2]
    basis = sys.basis()
    assert len(basis) == 5
    assert all(b.shape == (3, 3) for b in basis)


@pytest.mark.parametrize("bad", [0, -1, 2.5])
def test_system_rejects_bad_n(bad):
    with pytest.raises(ValueError):
        ToeplitzSystem(bad)


def test_tau_3_1():
    np.testing.assert_array_equal(tau(3, 1), unit(3, 0, 1) + unit(3, 1, 2))


def test_tau_zero_and_range():
    np.testing.assert_array_equal(tau(4, 0), np.eye(4))
    with pytest.raises(ValueError):
        tau(3, 3)


def test_tau_products_shift():
    # tau_1 tau_-1 = I - E_nn
    n = 4
    np.testing.assert_array_equal(tau(n, 1) @ tau(n, -1), np.eye(n) - unit(n, n - 1, n - 1))


def test_coeffs_indexing():
    c = ToeplitzCoeffs(2, np.array([5, 6, 7]))
    assert (c[-1], c[0], c[1]) == (5, 6, 7)
    with pytest.raises(IndexError):
        c[2]
    with pytest.raises(ValueError):
        ToeplitzCoeffs(2, np.array([1, 2]))


def test_embed_entry_rule(rng):
    n = 4
    d = crandn(rng, 2 * n - 1)
    t = embed(ToeplitzCoeffs(n, d))
    for i, j in itertools.product(range(n), repeat=2):
        assert t[i, j] == d[(j - i) + n - 1]


def test_embed_project_round_trip(rng):
    for n in range(1, 7):
        c = ToeplitzCoeffs(n, crandn(rng, 2 * n - 1))
        np.testing.assert_allclose(project(embed(c), ToeplitzSystem(n)).diag, c.diag, atol=1e-14)


def test_project_tau_indicator():
    n = 3
    for k in range(-2, 3):
        expected = np.zeros(5)
        expected[k + 2] = 1
        np.testing.assert_array_equal(project(tau(n, k), ToeplitzSystem(n)).diag, expected)


def test_project_e12_in_m2():
    np.testing.assert_array_equal(project(unit(2, 0, 1), ToeplitzSystem(2)).diag, [0, 0, 1])


def test_project_is_nearest_by_grid_search(rng):
    # brute-force oracle: no Toeplitz point on a grid around the projection is closer
    t = rng.normal(size=(2, 2))
    p = project(t, ToeplitzSystem(2)).diag.real
    best = np.linalg.norm(t - embed(ToeplitzCoeffs(2, p)))
    steps = np.linspace(-0.2, 0.2, 9)
    for dx in itertools.product(steps, repeat=3):
        cand = embed(ToeplitzCoeffs(2, p + np.array(dx)))
        assert np.linalg.norm(t - cand) >= best - 1e-15


def test_project_idempotent_and_orthogonal(rng):
    sys = ToeplitzSystem(5)
    t = crandn(rng, 5, 5)
    p = embed(project(t, sys))
    np.testing.assert_allclose(embed(project(p, sys)), p, atol=1e-14)
    for b in sys.basis():
        assert abs(np.vdot(b, t - p)) <= 1e-12


def test_membership_examples():
    assert is_member(np.eye(3), ToeplitzSystem(3))
    assert not is_member(unit(3, 0, 1), ToeplitzSystem(3))
    assert toeplitz_residual(unit(3, 0, 1), ToeplitzSystem(3)) > 0.5


def test_membership_schur_toeplitz_mask(rng):
    n = 5
    w = np.exp(0.3j)
    mask = np.array([[w ** (i - j) if i >= j else np.conj(w) ** (j - i) for j in range(n)] for i in range(n)])
    t = embed(ToeplitzCoeffs(n, crandn(rng, 2 * n - 1)))
    assert is_member(mask * t, ToeplitzSystem(n))


def test_membership_wrong_shape():
    with pytest.raises(ValueError):
        is_member(np.eye(3), ToeplitzSystem(2))


def test_delta_2_display():
    np.testing.assert_array_equal(delta(2), [[0, 1, 0], [1, 0, 0], [0, 0, 1], [0, 1, 0]])


def test_delta_columns():
    n = 4
    d = delta(n)
    assert d.shape == (16, 7)
    for k in range(-n + 1, n):
        np.testing.assert_array_equal(d[:, [k + n - 1]], vec(tau(n, k)))


@pytest.mark.parametrize("n", range(1, 10))
def test_delta_gram_is_diagonal(n):
    # columns are orthogonal with squared norms n - |k|
    d = delta(n)
    expected = np.diag([n - abs(k) for k in range(-n + 1, n)])
    np.testing.assert_array_equal((d.conj().T @ d).real, expected)
    assert matrix_rank(d) == 2 * n - 1


def test_truncate_examples():
    n = 4
    np.testing.assert_array_equal(truncate([1], n), np.eye(n))
    np.testing.assert_array_equal(truncate([0, 0, 1], n), tau(n, -1))
    np.testing.assert_array_equal(truncate([1, 0, 1], n), tau(n, 1) + tau(n, -1))


def test_truncate_drops_wide_coefficients():
    out = truncate([9, 0, 0, 0, 9], 2)
    np.testing.assert_array_equal(out, np.zeros((2, 2)))


def test_truncate_even_length_rejected():
    with pytest.raises(ValueError):
        truncate([1, 2], 3)


def test_fourier_constant():
    a = fourier_from_samples(np.full(8, 2.5), 2)
    np.testing.assert_allclose(a, [0, 0, 2.5, 0, 0], atol=1e-14)


def test_fourier_exp_it():
    a = fourier_from_samples(samples(lambda t: np.exp(1j * t), 16), 3)
    expected = np.zeros(7)
    expected[3 + 1] = 1
    np.testing.assert_allclose(a, expected, atol=1e-12)


def test_fourier_two_modes():
    a = fourier_from_samples(samples(lambda t: np.exp(2j * t) + np.exp(-1j * t), 16), 3)
    expected = np.zeros(7)
    expected[3 + 2] = 1
    expected[3 - 1] = 1
    np.testing.assert_allclose(a, expected, atol=1e-12)


def test_fourier_too_few_samples():
    with pytest.raises(ValueError):
        fourier_from_samples(np.ones(4), 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_fourier_recovers_trig_polynomial(k, seed):
    rng = np.random.default_rng(seed)
    coeffs = crandn(rng, 2 * k + 1)
    m = 2 * k + 1 + int(rng.integers(0, 6))
    f = lambda t: sum(coeffs[j + k] * np.exp(1j * j * t) for j in range(-k, k + 1))  # noqa: E731
    np.testing.assert_allclose(fourier_from_samples(samples(f, m), k), coeffs, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_random_toeplitz_is_member(n, seed):
    rng = np.random.default_rng(seed)
    t = embed(ToeplitzCoeffs(n, crandn(rng, 2 * n - 1)))
    assert is_member(t, ToeplitzSystem(n))
    assert is_member(t.T, ToeplitzSystem(n))
