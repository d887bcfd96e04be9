import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import crandn, haar_unitary, unit
from toeplitz_opsys.gauge import GaugeElement, Kind, act, random_gauge, random_toeplitz
from toeplitz_opsys.linalg import gamma, hermitian_defect, is_psd, kron, matrix_rank
from toeplitz_opsys.pert import (
    KrausFamily,
    MapMatrixW,
    NotInvariantError,
    PertElement,
    apply_map,
    apply_map_omega,
    check_conditions,
    diagonal_compression,
    elementary_family,
    family_from_hermitian_choi,
    gauge_pert,
    is_pert,
    is_pert_plus,
    kraus_from_choi,
    omega_from_family,
    random_pert,
    random_pert_plus,
    toep2_parametrized,
    transpose_pert,
    w_from_map,
    w_from_omega_solve,
)

X = unit(2, 0, 1) + unit(2, 1, 0)
ANTI3 = np.fliplr(np.eye(3))


def omega2():
    return omega_from_family(KrausFamily(2, ((X, X),)))


def symmetric_family(n, rng, k=2):
    pairs = []
    for _ in range(k):
        a, b = crandn(rng, n, n), crandn(rng, n, n)
        pairs += [(a, b), (b.conj().T, a.conj().T)]
    return KrausFamily(n, tuple(pairs))


def test_family_validation():
    with pytest.raises(ValueError):
        KrausFamily(2, ())
    with pytest.raises(ValueError):
        KrausFamily(2, ((np.eye(2), np.eye(3)),))


def test_identity_family_omega():
    f = KrausFamily(3, ((np.eye(3), np.eye(3)),))
    np.testing.assert_array_equal(f.omega(), np.eye(9))


def test_omega2_is_kron_flip():
    np.testing.assert_array_equal(omega2().omega, np.kron(X, X))


def test_omega1_entries():
    # sum_ij kron(E_ij, E_ji): the swap of C^2 (x) C^2
    w = transpose_pert(2).omega
    np.testing.assert_array_equal(w, np.eye(4)[[0, 2, 1, 3]])


def test_element_family_mismatch_rejected():
    f = KrausFamily(2, ((X, X),))
    with pytest.raises(ValueError):
        PertElement(2, np.eye(4), f)
    with pytest.raises(ValueError):
        PertElement(2, np.eye(3))


def test_from_omega():
    p = PertElement.from_omega(np.eye(9))
    assert p.n == 3 and p.family is None


def test_apply_paths_agree(rng):
    for n in range(1, 6):
        pairs = tuple((crandn(rng, n, n), crandn(rng, n, n)) for _ in range(3))
        p = omega_from_family(KrausFamily(n, pairs))
        x = crandn(rng, n, n)
        expected = sum(a @ x @ b for a, b in pairs)
        np.testing.assert_allclose(apply_map(p, x), expected, atol=1e-11)
        np.testing.assert_allclose(apply_map_omega(p, x), expected, atol=1e-11)


def test_transpose_examples():
    t = np.array([[1, 2], [3, 1]], dtype=complex)
    np.testing.assert_array_equal(apply_map(omega2(), t), t.T)
    np.testing.assert_array_equal(apply_map(transpose_pert(2), t), t.T)
    assert is_pert(omega2()) and is_pert(transpose_pert(2))


def test_apply_shape_check():
    with pytest.raises(ValueError):
        apply_map(omega2(), np.eye(3))


def test_conditions_non_unital():
    c = check_conditions(omega_from_family(KrausFamily(2, ((2 * np.eye(2), np.eye(2)),))))
    assert not c.unital and c.invariant and c.symmetric
    assert not c


def test_conditions_asymmetric_unit():
    e = unit(2, 0, 1)
    assert not check_conditions(omega_from_family(KrausFamily(2, ((e, e),)))).symmetric


def test_conditions_not_invariant():
    # pinching onto the first coordinate breaks the diagonals of tau_1
    e = unit(3, 0, 0)
    f = KrausFamily(3, ((e, e), (np.eye(3) - e, np.eye(3) - e)))
    c = check_conditions(omega_from_family(f))
    assert c.unital and not c.invariant


def test_gamma_hermitian_iff_symmetric_family(rng):
    for n in (1, 2, 3, 4):
        p = omega_from_family(symmetric_family(n, rng))
        assert hermitian_defect(gamma(p.omega)) <= 1e-10 * np.linalg.norm(p.omega)
        # and the induced map is Hermitian-preserving
        x = crandn(rng, n, n)
        x = x + x.conj().T
        y = apply_map(p, x)
        np.testing.assert_allclose(y, y.conj().T, atol=1e-10 * np.abs(y).max())


def test_gauge_pert_plus(rng):
    for _ in range(10):
        g = random_gauge(int(rng.integers(1, 6)), rng)
        assert is_pert_plus(gauge_pert(g))


def test_transpose_not_pert_plus():
    p = transpose_pert(2)
    assert is_pert(p)
    assert not is_pert_plus(p)
    assert np.linalg.eigvalsh(gamma(p.omega))[0] < -0.5


def test_product_is_composition(rng):
    n = 3
    p, q = random_pert_plus(n, rng), random_pert(n, rng)
    x = crandn(rng, n, n)
    pq = p @ q
    nested = apply_map(p, apply_map(q, x))
    np.testing.assert_allclose(apply_map(pq, x), nested, atol=1e-10)
    np.testing.assert_allclose(apply_map_omega(pq, x), nested, atol=1e-10)
    assert is_pert(pq)
    assert is_pert_plus(p @ random_pert_plus(n, rng))


def test_product_size_mismatch():
    with pytest.raises(ValueError):
        transpose_pert(2) @ transpose_pert(3)


def test_gauge_pert_is_multiplicative(rng):
    g, h = random_gauge(4, rng), random_gauge(4, rng)
    # x -> (uv)^* x (uv) = phi_h(phi_g(x))
    np.testing.assert_allclose(gauge_pert(g @ h).omega, (gauge_pert(h) @ gauge_pert(g)).omega, atol=1e-12)


def test_w_identity():
    p = omega_from_family(KrausFamily(3, ((np.eye(3), np.eye(3)),)))
    np.testing.assert_allclose(w_from_map(p).w, np.eye(5))
    np.testing.assert_allclose(w_from_omega_solve(p).w, np.eye(5), atol=1e-12)


def test_w_transpose_both_paths():
    for p in (omega2(), transpose_pert(2)):
        np.testing.assert_allclose(w_from_map(p).w, ANTI3, atol=1e-12)
        np.testing.assert_allclose(w_from_omega_solve(p).w, ANTI3, atol=1e-12)


def test_w_gauge_diagonal(rng):
    n = 4
    g = GaugeElement(n, Kind.DIAGONAL, np.exp(0.3j), np.exp(1.7j))
    w = w_from_map(gauge_pert(g))
    expected = np.diag([np.conj(g.omega) ** k if k >= 0 else g.omega ** (-k) for k in range(-n + 1, n)])
    np.testing.assert_allclose(w.w, expected, atol=1e-12)
    np.testing.assert_allclose(w_from_omega_solve(gauge_pert(g)).w, expected, atol=1e-10)


def test_w_matches_action_in_tau_basis(rng):
    n = 4
    g = random_gauge(n, rng)
    w = w_from_map(gauge_pert(g))
    for j in range(-n + 1, n):
        image = act(g, np.eye(n, k=j))
        rebuilt = sum(w.entry(i, j) * np.eye(n, k=i) for i in range(-n + 1, n))
        np.testing.assert_allclose(rebuilt, image, atol=1e-12)


def test_w_not_invariant_raises():
    e = unit(3, 0, 0)
    p = omega_from_family(KrausFamily(3, ((e, e), (np.eye(3) - e, np.eye(3) - e))))
    with pytest.raises(NotInvariantError):
        w_from_map(p)
    with pytest.raises(NotInvariantError):
        w_from_omega_solve(p)


def test_map_matrix_invariants():
    w = MapMatrixW(2, np.eye(3))
    assert w.is_unital() and w.is_hermitian_symmetric()
    raw = MapMatrixW(2, 3 * np.eye(3))
    assert not raw.is_unital()
    skew = np.eye(3, dtype=complex)
    skew[0, 2] = 1j
    assert not MapMatrixW(2, skew).is_hermitian_symmetric()
    with pytest.raises(ValueError):
        MapMatrixW(2, np.eye(4))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_random_pert_w_invariants(n, seed):
    rng = np.random.default_rng(seed)
    p = random_pert(n, rng)
    assert is_pert(p)
    w = w_from_map(p)
    assert w.unital_residual() <= 1e-10
    assert w.hermitian_residual() <= 1e-10
    np.testing.assert_allclose(w_from_omega_solve(p).w, w.w, atol=1e-9)


def test_kraus_identity_choi():
    f = kraus_from_choi(gamma(np.eye(4)))
    assert len(f) == 1
    x = np.array([[1, 2j], [3, 4]])
    np.testing.assert_allclose(omega_from_family(f).omega, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(apply_map(omega_from_family(f), x), x, atol=1e-12)


def test_kraus_rank_one_unitary(rng):
    u = haar_unitary(3, rng)
    c = gamma(kron(u.conj().T, u.T))
    f = kraus_from_choi(c)
    assert len(f) == 1
    a, b = f.pairs[0]
    # recovered up to a global phase
    phase = np.vdot(u.conj().T.ravel(), a.ravel()) / 3
    assert abs(abs(phase) - 1) <= 1e-10
    np.testing.assert_allclose(a, phase * u.conj().T, atol=1e-10)
    np.testing.assert_allclose(b, a.conj().T, atol=1e-14)


def test_kraus_count_equals_rank(rng):
    for r in (1, 2, 5):
        v = crandn(rng, 9, r)
        c = v @ v.conj().T
        f = kraus_from_choi(c)
        assert len(f) == matrix_rank(c) == r
        np.testing.assert_allclose(gamma(f.omega()), c, atol=1e-9 * np.linalg.norm(c))


def test_kraus_rejects_indefinite():
    with pytest.raises(ValueError):
        kraus_from_choi(gamma(transpose_pert(2).omega))


def test_hermitian_choi_signed_family():
    c = gamma(transpose_pert(2).omega)
    f = family_from_hermitian_choi(c)
    np.testing.assert_allclose(gamma(f.omega()), c, atol=1e-10)


def test_elementary_family_reconstructs(rng):
    omega = crandn(rng, 9, 9)
    np.testing.assert_allclose(elementary_family(omega).omega(), omega, atol=1e-14)
    assert len(elementary_family(np.zeros((4, 4)))) == 1


def test_toep2_grid():
    values = (0, 1, 1j)
    for a, b, c in itertools.product(values, repeat=3):
        for z1, z2, z4 in itertools.product((0, 1 + 1j), (-0.5, 0, 0.7), (-0.5, 0, 0.7)):
            assert is_pert(toep2_parametrized(a, b, c, z1, z2, z4))
            assert not check_conditions(toep2_parametrized(a, b, c, z1, z2, z4, z3=z1 + 1)).symmetric


def test_toep2_w_matches_parametrization(rng):
    a, b, c = crandn(rng, 3)
    p = toep2_parametrized(a, b, c, 0.2 + 0.1j, 0.3, -0.4)
    expected = np.array([[a, 0, np.conj(c)], [b, 1, np.conj(b)], [c, 0, np.conj(a)]])
    np.testing.assert_allclose(w_from_map(p).w, expected, atol=1e-12)
    np.testing.assert_allclose(w_from_omega_solve(p).w, expected, atol=1e-10)


def test_toep2_transpose_choice():
    p = toep2_parametrized(0, 0, 1, 0.25j, 0.5, 0.0)
    np.testing.assert_allclose(w_from_map(p).w, ANTI3, atol=1e-12)
    t = random_toeplitz(2, np.random.default_rng(4))
    np.testing.assert_allclose(apply_map(p, t), t.T, atol=1e-12)


def test_toep2_positive_display():
    p = toep2_parametrized(1, 0, 0, 0, 0, 1)
    expected = [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]]
    np.testing.assert_allclose(gamma(p.omega), expected, atol=0)
    assert is_pert_plus(p)


def test_toep2_non_real_z2_fails():
    assert not check_conditions(toep2_parametrized(1, 0, 0, 0, 0.1j, 0)).symmetric


def test_compressions_of_toep2_agree():
    t = random_toeplitz(2, np.random.default_rng(2))
    d = diagonal_compression(2)
    q = omega_from_family(KrausFamily(2, ((unit(2, 0, 1), unit(2, 1, 0)), (unit(2, 1, 0), unit(2, 0, 1)))))
    np.testing.assert_allclose(apply_map(d, t), t[0, 0] * np.eye(2))
    np.testing.assert_allclose(apply_map(q, t), t[0, 0] * np.eye(2))


def test_random_generators(rng):
    for n in (1, 2, 3, 5):
        assert is_pert_plus(random_pert_plus(n, rng))
        assert is_pert(random_pert(n, rng))
