import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncg_lab.cocycle import (
    GOLDEN_BETA,
    Bicharacter,
    BranchCutError,
    EmbeddingData,
    EmbeddingError,
    Product,
    QuotientError,
    Tabulated,
    bicharacter_from_theta,
    cocycle_from_json,
    default_beta,
    innerify,
    normalize_from_theta,
    trivial,
    verify_cocycle,
    verify_embedding,
)
from ncg_lab.lattice import INF, Shape, Window


def clock_shift_theta(n):
    return np.array([[0.0, -1.0 / n], [1.0 / n, 0.0]])


def test_golden_beta():
    assert GOLDEN_BETA == pytest.approx(0.6180339887498949)


@pytest.mark.parametrize("n", [3, 5, 8, 13])
def test_clock_shift_cocycle_exhaustive(n):
    sigma = normalize_from_theta(clock_shift_theta(n), Shape.of(n, n), beta=GOLDEN_BETA)
    rep = verify_cocycle(sigma)
    assert rep.passed, rep.failures()
    assert rep.data.get("exhaustive", True)


def test_normalized_values_pinned():
    sigma = normalize_from_theta(clock_shift_theta(5), Shape.of(5, 5), beta=GOLDEN_BETA)
    # sigma(m, -m) = 1 and the unit vectors have sigma(e_j, t e_j) = 1
    m = np.array([[2, -1], [1, 1], [-2, 2]])
    assert np.allclose(sigma(m, -m), 1.0, atol=1e-15)
    assert np.array_equal(sigma(np.array([[1, 0]] * 3), np.array([[1, 0], [2, 0], [-2, 0]])), np.ones(3))
    # the commutation factor is the bicharacter's: exp(2 pi i <theta m, m'>)
    e1, e2 = np.array([1, 0]), np.array([0, 1])
    assert sigma.commutation(e1, e2) == pytest.approx(np.exp(2j * np.pi / 5), abs=1e-15)


def test_quotient_incompatible_omega_rejected():
    with pytest.raises(QuotientError) as info:
        Bicharacter(Shape.of(5, 5), np.array([[0.0, 0.3], [0.0, 0.0]]))
    assert info.value.pair == (0, 1)


def test_branch_cut_collision_raises():
    theta = clock_shift_theta(5)
    s = Shape.of(5, 5)
    # angles -<omega m, m> are multiples of 1/5, so beta = 0.4 is hit
    with pytest.raises(BranchCutError):
        normalize_from_theta(theta, s, beta=0.4)


def test_default_beta_avoids_window_angles():
    s = Shape.of(7, 7)
    sigma = normalize_from_theta(clock_shift_theta(7), s)
    beta = sigma.beta
    ang = np.arange(7) / 7
    assert np.min(np.abs(((ang - beta + 0.5) % 1) - 0.5)) > 1e-3
    assert beta == default_beta(sigma.omega, s)


@given(st.integers(0, 10**6))
def test_bicharacter_on_infinite_group(seed):
    rng = np.random.default_rng(seed)
    th = rng.uniform(-1, 1)
    sigma = bicharacter_from_theta(np.array([[0, th], [-th, 0]]), Shape.of(INF, INF))
    rep = verify_cocycle(sigma, samples=200, seed=seed)
    assert rep.passed, rep.failures()


def test_tabulated_perturbation_is_detected():
    s = Shape.of(3, 3)
    tab = Tabulated.from_cocycle(normalize_from_theta(clock_shift_theta(3), s, beta=GOLDEN_BETA))
    assert verify_cocycle(tab).passed
    bad = tab.perturbed(1, 2, np.exp(0.3j))
    assert not verify_cocycle(bad).passed


def test_json_round_trip():
    s = Shape.of(5, 5)
    sigma = normalize_from_theta(clock_shift_theta(5), s, beta=GOLDEN_BETA)
    back = cocycle_from_json(sigma.to_json())
    pts = Window.full(s).points()
    assert np.allclose(back(pts, pts[::-1]), sigma(pts, pts[::-1]), atol=0)
    prod = Product((sigma, trivial(s)))
    assert np.allclose(cocycle_from_json(prod.to_json())(pts, pts), sigma(pts, pts), atol=0)


@pytest.mark.parametrize("shape,th", [
    (Shape.of(5, 5), 0.2),
    (Shape.of(5), None),
    (Shape.of(INF, INF), 0.37),
    (Shape.of(4, INF), 0.25),
])
def test_innerify_embedding_conditions(shape, th):
    theta = np.zeros((1, 1)) if th is None else np.array([[0, th], [-th, 0]])
    e = innerify(shape, theta, beta=GOLDEN_BETA)
    assert e.d_outer == 2 * shape.d
    rep = verify_embedding(e, samples=10)
    assert rep.passed, rep.failures()


def test_embedding_rejects_bad_permutation():
    s = Shape.of(4, 4)
    sig = trivial(s)
    with pytest.raises(EmbeddingError):
        EmbeddingData(s, s, (0, 1), sig, sig)
    with pytest.raises(EmbeddingError):
        EmbeddingData(s, s, (1, 1), sig, sig)


def test_clock_shift_orientation():
    s = Shape.of(6, 6)
    sig = normalize_from_theta(clock_shift_theta(6), s, beta=GOLDEN_BETA)
    e = EmbeddingData(s, s, (1, 0), sig, sig)
    assert e.orientation == (-1, 1)
    assert verify_embedding(e).passed
