import numpy as np
import pytest

from ncg_lab.clifford import build_gammas, chirality, from_matrices, verify_clifford


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6, 8])
def test_relations(N):
    rep = build_gammas(N)
    assert rep.s == 2 ** ((N + 1) // 2)
    r = verify_clifford(rep)
    assert r.passed, r.checks
    for g in rep.gammas:
        assert np.abs(g @ g + np.eye(rep.s)).max() == 0.0


def test_two_generators_pinned():
    rep = build_gammas(2)
    assert np.array_equal(rep.gammas[0], 1j * np.array([[0, 1], [1, 0]]))
    assert np.array_equal(rep.gammas[1], 1j * np.array([[0, -1j], [1j, 0]]))


@pytest.mark.parametrize("N", [2, 4, 6])
def test_chirality_even(N):
    rep = build_gammas(N)
    chi = chirality(rep)
    eye = np.eye(rep.s)
    assert np.abs(chi @ chi - eye).max() < 1e-14
    assert np.abs(chi - chi.conj().T).max() < 1e-14
    for g in rep.gammas:
        assert np.abs(chi @ g + g @ chi).max() < 1e-14


def test_chirality_odd_is_none():
    assert chirality(build_gammas(3)) is None


def test_from_matrices_rejects_commuting_pair():
    with pytest.raises(ValueError):
        from_matrices([1j * np.eye(2), 1j * np.eye(2)])
    rep = from_matrices(build_gammas(3).gammas)
    assert rep.N == 3
