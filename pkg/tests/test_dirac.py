import math

import numpy as np
import pytest

from ncg_lab.algebra import (
    AlgebraElement,
    WindowError,
    element_norm,
    jordan,
    lie,
    random_element,
    represent,
)
from ncg_lab.clifford import chirality
from ncg_lab.cocycle import GOLDEN_BETA, innerify
from ncg_lab.dirac import (
    TripleConfig,
    anticommutation_violation,
    apply_dirac,
    assemble_dirac,
    commutator_bound_table,
    gradient,
    gradient_operator,
    graph_norm,
    random_spinor,
    resolvent_bound_check,
    seminorm,
    spectrum,
)
from ncg_lab.lab import clock_shift_config, theta_sequence_config
from ncg_lab.lattice import INF, Shape, Window


def sym_violation(ev):
    ev = np.sort(ev)
    return np.abs(ev + ev[::-1]).max()


@pytest.mark.parametrize("n", [3, 4, 6])
def test_clock_shift_dirac_structure(n):
    cfg = clock_shift_config(n)
    D = assemble_dirac(cfg)
    Dm = D.dense()
    assert Dm.shape == (n * n * cfg.s,) * 2
    assert np.abs(Dm - Dm.conj().T).max() <= 1e-12 * np.abs(Dm).max()
    for J in range(cfg.n_gammas):
        assert anticommutation_violation(cfg, J, D) <= 1e-12
    chi = np.kron(np.eye(n * n), chirality(cfg.clifford))
    assert np.abs(chi @ Dm + Dm @ chi).max() < 1e-12
    assert sym_violation(spectrum(D)) < 1e-9


def test_generic_innerified_dirac_hermitian():
    cfg = theta_sequence_config(np.array([[0, 0.4], [-0.4, 0]]), 3)
    assert cfg.d_outer == 4 and cfg.n_gammas == 6
    D = assemble_dirac(cfg)
    Dm = D.dense()
    assert np.abs(Dm - Dm.conj().T).max() <= 1e-12 * np.abs(Dm).max()
    assert anticommutation_violation(cfg, 4, D) <= 1e-12


@pytest.mark.parametrize("cfg", [clock_shift_config(5), theta_sequence_config(np.array([[0, 0.4], [-0.4, 0]]), 3)])
def test_gradient_matches_commutator(cfg):
    rng = np.random.default_rng(7)
    Dm = assemble_dirac(cfg).dense()
    eye = np.eye(cfg.s)
    inner = cfg.embedding.inner_shape
    for _ in range(5):
        a = random_element(inner, rng, support=4)
        A = np.kron(represent(a.embed(cfg.shape), cfg.sigma).dense(), eye)
        G = gradient_operator(a, cfg).dense()
        assert np.abs(G - (Dm @ A - A @ Dm)).max() < 1e-12
        assert len(gradient(a, cfg)) == 2 * cfg.d


def test_seminorm_of_scalars_is_zero():
    for cfg in (clock_shift_config(6), clock_shift_config(INF)):
        one = AlgebraElement.one(cfg.embedding.inner_shape)
        assert seminorm(one, cfg).value == 0.0


def test_seminorm_rejects_non_self_adjoint():
    cfg = clock_shift_config(5)
    with pytest.raises(ValueError):
        seminorm(AlgebraElement.delta(cfg.shape, [1, 0], 1j), cfg)


def test_seminorm_values_approach_limit():
    a_of = lambda s: AlgebraElement.re_delta(s, [1, 0]) + AlgebraElement.re_delta(s, [0, 1])
    vals = [seminorm(a_of(Shape.of(n, n)), clock_shift_config(n)).value for n in (8, 16, 32)]
    assert vals[0] < vals[1] < vals[2] < math.sqrt(2)
    lim = clock_shift_config(INF)
    w = [seminorm(a_of(lim.shape), lim, radius=r).value for r in (4, 8)]
    assert w[0] <= w[1] <= math.sqrt(2) + 1e-12


@pytest.mark.parametrize("op", [jordan, lie])
def test_leibniz_inequality(op):
    cfg = clock_shift_config(6)
    rng = np.random.default_rng(3)
    sigma = cfg.embedding.sigma
    for _ in range(5):
        a = random_element(cfg.shape, rng, self_adjoint=True)
        b = random_element(cfg.shape, rng, self_adjoint=True)
        lhs = seminorm(op(a, b, sigma), cfg).value
        rhs = seminorm(a, cfg).value * element_norm(b, sigma) + element_norm(a, sigma) * seminorm(b, cfg).value
        assert lhs <= rhs * (1 + 1e-9)


def test_windowed_dirac_margin_enforced():
    cfg = clock_shift_config(INF)
    W = Window.box(cfg.shape, 3)
    xi = random_spinor(cfg, np.random.default_rng(0), W)
    with pytest.raises(WindowError):
        apply_dirac(cfg, xi, W)
    inner = random_spinor(cfg, np.random.default_rng(0), W.shrink(1))
    out = apply_dirac(cfg, inner, W)
    assert np.all(W.contains(out.points.points))
    assert graph_norm(inner, cfg, W) == pytest.approx(inner.norm() + out.norm())


def test_dirac_on_finite_group_vector_matches_matrix():
    cfg = clock_shift_config(5)
    xi = random_spinor(cfg, np.random.default_rng(1))
    D = assemble_dirac(cfg)
    assert np.allclose(apply_dirac(cfg, xi).vector(), D.dense() @ xi.vector(), atol=1e-13)


def test_commutator_table_cases():
    cfg = TripleConfig(innerify(Shape.of(INF), np.zeros((1, 1)), beta=GOLDEN_BETA))
    # J = 0 inner-x, 1 inner-y, 2 outer on axis 1 = f(0)
    assert commutator_bound_table(cfg, 0, 1) == 0.0
    assert commutator_bound_table(cfg, 0, 2) == pytest.approx(math.sqrt(2) / 2)
    assert commutator_bound_table(cfg, 1, 2) == pytest.approx(math.sqrt(2) / 2)


def test_resolvent_check_d1_infinite():
    cfg = TripleConfig(innerify(Shape.of(INF), np.zeros((1, 1)), beta=GOLDEN_BETA))
    rep = resolvent_bound_check(cfg, radius=8)
    assert rep.passed, rep.failures()
    assert rep.data["sqrtK_norm"] == pytest.approx(1 / 10, abs=1e-12)
    assert rep.data["FK_norm"] < 1
