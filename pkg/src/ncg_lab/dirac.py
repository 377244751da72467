"""Dirac operators on l^2(Z^d'_k') (x) C^s, the Lipschitz seminorm and resolvent checks.

Gamma operators are indexed 0 .. d + d' - 1. With X_j = Re U_{f(j)} and
Y_j = orientation[j] Im U_{f(j)} for inner axes j < d:

* j < d, k(j) infinite:     Gamma_j = X_j d_j,  Gamma_{d+j} = Y_j d_j
* j < d, k(j) finite:       Gamma_j = -(k/2 pi i)[Y_j, .],  Gamma_{d+j} = (k/2 pi i)[X_j, .]
* outer axis j >= d, infinite: Gamma_{d+j} = d_j (multiplication by i p_j)
* outer axis j >= d, finite:   Gamma_{d+j} = multiplication by i (k/pi) sin(pi p_j / k)

where d_j is multiplication by i p_j and [Y, xi] = Y xi - xi Y uses the
bimodule structure. D = sum_j Gamma_j (x) gamma_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .algebra import (
    AlgebraElement,
    OperatorWindow,
    WindowError,
    _as_point_set,
    align_rows,
    assemble,
    convolve,
    derive,
    diagonal_op,
    left_terms,
    operator_norm,
    right_terms,
)
from .clifford import CliffordRep, build_gammas
from .cocycle import EmbeddingData
from .lattice import INF, PointSet, Shape, ShapeError, Window, pairing
from .report import Report

SPECTRUM_CAP = 4096


@dataclass(frozen=True, eq=False)
class TripleConfig:
    """Embedding data, gamma matrices and the window policy for one spectral triple."""

    embedding: EmbeddingData
    clifford: CliffordRep | None = None
    M: float | None = None
    radius: int = 8
    margin: int = 1

    def __post_init__(self):
        N = self.embedding.d + self.embedding.d_outer
        if self.clifford is None:
            object.__setattr__(self, "clifford", build_gammas(N))
        elif self.clifford.N != N:
            raise ShapeError(f"need {N} gamma matrices, got {self.clifford.N}")
        if self.M is None:
            object.__setattr__(self, "M", 10.0 * self.embedding.d)
        if self.margin < 1:
            raise ValueError("window margin must cover the reach 1 of every Gamma")

    @property
    def d(self) -> int:
        return self.embedding.d

    @property
    def d_outer(self) -> int:
        return self.embedding.d_outer

    @property
    def n_gammas(self) -> int:
        return self.d + self.d_outer

    @property
    def shape(self) -> Shape:
        return self.embedding.outer_shape

    @property
    def sigma(self):
        return self.embedding.sigma_outer

    @property
    def s(self) -> int:
        return self.clifford.s

    @property
    def finite(self) -> bool:
        return self.shape.is_finite()

    def window(self, radius: int | None = None) -> Window:
        return Window.box(self.shape, self.radius if radius is None else radius)

    def unit(self, axis: int) -> np.ndarray:
        return self.embedding.unit(axis)

    def X(self, j: int) -> AlgebraElement:
        return AlgebraElement.re_delta(self.shape, self.unit(self.embedding.f[j]))

    def Y(self, j: int) -> AlgebraElement:
        return AlgebraElement.im_delta(self.shape, self.unit(self.embedding.f[j])) * self.embedding.fsgn(j)

    def gamma_kind(self, J: int) -> tuple[str, int]:
        """('inner-x' | 'inner-y' | 'outer', axis) for the Gamma index J."""
        d = self.d
        if not 0 <= J < self.n_gammas:
            raise ValueError(f"Gamma index {J} out of range 0..{self.n_gammas - 1}")
        if J < d:
            return "inner-x", J
        if J < 2 * d:
            return "inner-y", J - d
        return "outer", J - d

    def infinite_type(self, J: int) -> bool:
        _, axis = self.gamma_kind(J)
        return not self.shape.is_finite(axis)


def _resolve_domain(cfg: TripleConfig, window):
    if window is None:
        if not cfg.finite:
            raise WindowError("infinite shapes need an explicit window")
        return Window.full(cfg.shape)
    return window


def gamma_terms(cfg: TripleConfig, J: int, pts: np.ndarray):
    """Shift terms of Gamma_J over the domain points."""
    kind, j = cfg.gamma_kind(J)
    shape, sigma = cfg.shape, cfg.sigma
    if kind == "outer":
        k = shape.entries[j]
        p = pts[:, j].astype(float)
        if k == INF:
            return [(np.zeros(shape.d, np.int64), 1j * p)]
        return [(np.zeros(shape.d, np.int64), 1j * (k / math.pi) * np.sin(math.pi * p / k))]
    k = shape.entries[j]
    if k == INF:
        mult = cfg.X(j) if kind == "inner-x" else cfg.Y(j)
        dj = 1j * pts[:, j].astype(float)
        return [(y, ph * dj) for y, ph in left_terms(mult, sigma, pts)]
    if kind == "inner-x":
        elem, coeff = cfg.Y(j), -k / (2j * math.pi)
    else:
        elem, coeff = cfg.X(j), k / (2j * math.pi)
    terms = [(y, coeff * ph) for y, ph in left_terms(elem, sigma, pts)]
    terms += [(y, -coeff * ph) for y, ph in right_terms(elem, sigma, pts)]
    return terms


def _codomain_for(cfg: TripleConfig, dom: PointSet, window, codomain):
    if codomain is not None:
        return codomain
    if cfg.finite and len(dom) == cfg.shape.order():
        return dom
    if isinstance(window, Window):
        return window.expand(1)
    return None


def build_gamma_op(cfg: TripleConfig, J: int, window=None, codomain=None, mode: str = "exact") -> OperatorWindow:
    """Gamma_J as a scalar windowed operator.

    The default codomain is the domain window grown by one on infinite axes,
    which holds the exact image because every Gamma has reach at most one.
    """
    win = _resolve_domain(cfg, window)
    dom = _as_point_set(win)
    cod = _codomain_for(cfg, dom, win, codomain)
    return assemble(cfg.shape, dom, gamma_terms(cfg, J, dom.points), cod, mode)


def assemble_dirac(cfg: TripleConfig, window=None, codomain=None, mode: str = "exact",
                   indices=None) -> OperatorWindow:
    """D = sum_J Gamma_J (x) gamma_J over the given window."""
    win = _resolve_domain(cfg, window)
    dom = _as_point_set(win)
    cod = _codomain_for(cfg, dom, win, codomain)
    if cod is None:
        raise WindowError("give a Window or an explicit codomain for infinite shapes")
    cod = _as_point_set(cod)
    total = None
    for J in (range(cfg.n_gammas) if indices is None else indices):
        g = build_gamma_op(cfg, J, dom, cod, mode).tensor(cfg.clifford.gammas[J])
        total = g if total is None else total + g
    return total


def spinor_op(cfg: TripleConfig, op: OperatorWindow, spin: np.ndarray) -> OperatorWindow:
    return op.tensor(spin)


def clifford_multiplier(cfg: TripleConfig, J: int, window=None) -> OperatorWindow:
    """E_J = 1 (x) gamma_J on the window."""
    dom = _as_point_set(_resolve_domain(cfg, window))
    eye = OperatorWindow(cfg.shape, dom, dom, sp.identity(len(dom), dtype=complex, format="csr"))
    return eye.tensor(cfg.clifford.gammas[J])


def spectrum(D: OperatorWindow, cap: int = SPECTRUM_CAP, residual_tol: float = 1e-9) -> np.ndarray:
    """All eigenvalues of a Hermitian windowed operator, ascending."""
    if not D.hermitian:
        raise ValueError("spectrum needs a Hermitian operator on a square window")
    n = D.dims[0]
    if n > cap:
        raise ValueError(f"dimension {n} exceeds the dense cap {cap}; use operator_norm for extremal values")
    dense = D.dense()
    vals, vecs = scipy.linalg.eigh(dense)
    scale = max(abs(vals[0]), abs(vals[-1]), 1e-300) if n else 1.0
    if n:
        res = np.linalg.norm(dense @ vecs - vecs * vals, axis=0).max()
        if res > residual_tol * scale and scale > 1e-300:
            raise ArithmeticError(f"eigen residual {res:.3e} exceeds {residual_tol} * ||D||")
    return vals


# ---------------------------------------------------------------------------
# gradient and seminorm


def _inner_outer(a: AlgebraElement, cfg: TripleConfig) -> AlgebraElement:
    if a.shape == cfg.shape:
        if not a.is_inner(cfg.d):
            raise ShapeError("element must be supported on the inner coordinates")
        return a
    if a.shape == cfg.embedding.inner_shape:
        return a.embed(cfg.shape)
    raise ShapeError("element shape matches neither the inner nor the outer shape")


def gradient(a: AlgebraElement, cfg: TripleConfig) -> list[AlgebraElement]:
    """The 2d outer elements g_J with [D, a] = sum_J pi(g_J) (x) gamma_J.

    Infinite inner axis j: g_j = X_j derive_j(a), g_{d+j} = Y_j derive_j(a).
    Finite inner axis j: g_j = -(k/2 pi i)(Y_j a - a Y_j), g_{d+j} = (k/2 pi i)(X_j a - a X_j).
    Gamma indices beyond 2d commute with inner elements and contribute nothing.
    """
    b = _inner_outer(a, cfg)
    sigma = cfg.sigma
    d = cfg.d
    out: list[AlgebraElement | None] = [None] * (2 * d)
    for j in range(d):
        k = cfg.shape.entries[j]
        X, Y = cfg.X(j), cfg.Y(j)
        if k == INF:
            db = derive(j, b)
            out[j] = convolve(X, db, sigma)
            out[d + j] = convolve(Y, db, sigma)
        else:
            c = k / (2j * math.pi)
            out[j] = (convolve(Y, b, sigma) - convolve(b, Y, sigma)) * (-c)
            out[d + j] = (convolve(X, b, sigma) - convolve(b, X, sigma)) * c
    return out


def gradient_operator(a: AlgebraElement, cfg: TripleConfig, window=None, codomain=None,
                      mode: str = "exact") -> OperatorWindow:
    """sum_J pi(g_J) (x) gamma_J, which equals [D, a] on the window."""
    win = _resolve_domain(cfg, window)
    dom = _as_point_set(win)
    cod = codomain
    if cod is None and cfg.finite and len(dom) == cfg.shape.order():
        cod = dom
    grads = gradient(a, cfg)
    if cod is None:
        reach = max(int(max((g.reach().max(initial=0) for g in grads if len(g)), default=0)), 0)
        cod = win.expand(reach) if isinstance(win, Window) else None
    cod = _as_point_set(cod) if cod is not None else None
    total = None
    for J, g in enumerate(grads):
        op = assemble(cfg.shape, dom, left_terms(g, cfg.sigma, dom.points), cod, mode)
        cod = op.codomain
        term = op.tensor(cfg.clifford.gammas[J])
        total = term if total is None else total + term
    return total


@dataclass
class SeminormResult:
    value: float
    converged: bool
    window: dict | None = None
    stability: float | None = None

    def to_json(self) -> dict:
        return {"value": self.value, "converged": self.converged, "window": self.window,
                "stability": self.stability}


def _check_self_adjoint(a: AlgebraElement):
    from .algebra import adjoint

    if (a - adjoint(a)).max_abs() > 1e-12 * max(a.max_abs(), 1.0):
        raise ValueError("the seminorm is defined on self-adjoint elements")


def seminorm(a: AlgebraElement, cfg: TripleConfig, tol: float = 1e-12, radius: int | None = None,
             seed: int = 0, check: bool = True) -> SeminormResult:
    """L(a) = ||[D, a]||.

    Exact on full finite groups. With infinite axes the compression of i[D, a]
    to the radius box is used, a lower bound that grows with the box; the
    relative change against the box of radius - 2 is reported as stability.
    """
    if check:
        _check_self_adjoint(a)
    if cfg.finite:
        op = gradient_operator(a, cfg).scale(1j)
        val, conv = operator_norm(op, tol=tol, seed=seed)
        return SeminormResult(val, conv)
    r = cfg.radius if radius is None else radius

    def windowed(rr):
        w = cfg.window(rr)
        op = gradient_operator(a, cfg, w, codomain=w, mode="compress").scale(1j)
        return operator_norm(op, tol=tol, seed=seed)

    val, conv = windowed(r)
    prev = windowed(max(r - 2, 1))[0] if r > 1 else 0.0
    stab = abs(val - prev) / max(val, 1e-300)
    return SeminormResult(val, conv, cfg.window(r).to_json(), stab)


def L(a: AlgebraElement, cfg: TripleConfig, **kw) -> float:
    return seminorm(a, cfg, **kw).value


# ---------------------------------------------------------------------------
# spinor fields


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Values in C^s at finitely many lattice points (rows follow ``points``)."""

    points: PointSet
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 2 or vals.shape[0] != len(self.points):
            raise ShapeError("values must have one row per point")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, points, s: int) -> "SpinorField":
        ps = _as_point_set(points)
        return cls(ps, np.zeros((len(ps), s), complex))

    @classmethod
    def basis(cls, points, s: int, m, a: int) -> "SpinorField":
        ps = _as_point_set(points)
        vals = np.zeros((len(ps), s), complex)
        idx = ps.index(np.asarray(m, np.int64))[0]
        if idx < 0:
            raise WindowError("basis point outside the point set")
        vals[idx, a] = 1.0
        return cls(ps, vals)

    @property
    def s(self) -> int:
        return self.values.shape[1]

    def vector(self) -> np.ndarray:
        return self.values.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def support(self) -> np.ndarray:
        return self.points.points[np.any(self.values != 0, axis=1)]


def random_spinor(cfg: TripleConfig, rng: np.random.Generator, window=None, support: int | None = None) -> SpinorField:
    """Seeded spinor field on the window (full group when finite)."""
    win = _resolve_domain(cfg, window)
    ps = _as_point_set(win)
    vals = rng.normal(size=(len(ps), cfg.s)) + 1j * rng.normal(size=(len(ps), cfg.s))
    if support is not None and support < len(ps):
        mask = np.zeros(len(ps), bool)
        mask[rng.choice(len(ps), size=support, replace=False)] = True
        vals[~mask] = 0
    return SpinorField(ps, vals)


def _check_margin(cfg: TripleConfig, xi: SpinorField, window: Window | None):
    if cfg.finite or window is None:
        return
    inner = window.shrink(cfg.margin)
    supp = xi.support()
    if len(supp) and not np.all(inner.contains(supp)):
        raise WindowError("spinor support reaches into the window margin")


def apply_dirac(cfg: TripleConfig, xi: SpinorField, window: Window | None = None) -> SpinorField:
    """D xi, exact: D is assembled on the field's own points with its full image."""
    _check_margin(cfg, xi, window)
    D = assemble_dirac(cfg, xi.points, codomain=_exact_image(cfg, xi.points))
    return SpinorField(D.codomain, (D.matrix @ xi.vector()).reshape(-1, cfg.s))


def _exact_image(cfg: TripleConfig, ps: PointSet):
    if cfg.finite and len(ps) == cfg.shape.order():
        return ps
    from .lattice import unique_points

    shifts = [np.zeros(cfg.shape.d, np.int64)]
    for j in range(cfg.shape.d):
        for sgn in (1, -1):
            e = np.zeros(cfg.shape.d, np.int64)
            e[j] = sgn
            shifts.append(e)
    from .lattice import canonical_rep

    pts = np.concatenate([canonical_rep(ps.points + e, cfg.shape) for e in shifts])
    return PointSet(unique_points(pts))


def graph_norm(xi: SpinorField, cfg: TripleConfig, window: Window | None = None) -> float:
    """DN(xi) = ||xi|| + ||D xi||."""
    return xi.norm() + apply_dirac(cfg, xi, window).norm()


def smooth_spinor_support(xi: SpinorField) -> np.ndarray:
    return xi.support()


# ---------------------------------------------------------------------------
# resolvent ingredients


def _chain(cfg: TripleConfig, A: int, B: int, W: Window) -> OperatorWindow:
    """Gamma_A Gamma_B on W, exact, via W -> W+1 -> W+2."""
    gb = build_gamma_op(cfg, B, W, codomain=W.expand(1))
    ga = build_gamma_op(cfg, A, W.expand(1), codomain=W.expand(2))
    return ga @ gb


def commutator_bound_table(cfg: TripleConfig, J: int, S: int) -> float:
    """Upper bound for ||[Gamma_J, Gamma_S] sqrt(K)|| by the case table."""
    d = cfg.d
    f = cfg.embedding.f
    kj, aj = cfg.gamma_kind(J)
    ks, as_ = cfg.gamma_kind(S)
    inner_j, inner_s = kj != "outer", ks != "outer"
    if inner_j and inner_s:
        return math.sqrt(2.0) if f[aj] == as_ or f[as_] == aj else 0.0
    if inner_j != inner_s:
        j, s = (aj, as_) if inner_j else (as_, aj)
        return math.sqrt(2.0) / 2.0 if f[j] == s else 0.0
    return 0.0


def resolvent_bound_check(cfg: TripleConfig, radius: int | None = None, tol: float = 1e-9) -> Report:
    """K = diag 1/(M^2 + <p,p>), F = sum_{J<S} [Gamma_J, Gamma_S] (x) gamma_J gamma_S.

    Only Gamma operators of infinite type enter F. Everything is computed on
    the radius box W with exact images in W+2. Reports ||sqrt K|| (equal to
    1/M), ||F K||, ||F sqrt K||, the per-pair commutator norms against their
    case-table bounds, and the identity D_inf^2 = Delta + F on W.
    """
    rep = Report("resolvent", tol)
    r = cfg.radius if radius is None else radius
    inf_types = [J for J in range(cfg.n_gammas) if cfg.infinite_type(J)]
    if not cfg.shape.infinite_axes:
        rep.notes.append("no infinite axis: F is vacuous")
    W = cfg.window(r)
    W2 = W.expand(2)
    pts = W.points()
    shape = cfg.shape
    pp = pairing(pts, pts, shape).astype(float)
    kdiag = 1.0 / (cfg.M ** 2 + pp)
    sqrt_k = np.sqrt(kdiag)
    rep.record("sqrtK_norm", abs(float(sqrt_k.max()) - 1.0 / cfg.M))
    rep.data["sqrtK_norm"] = float(sqrt_k.max())
    rep.data["M"] = cfg.M
    gam = cfg.clifford.gammas
    s = cfg.s
    F = None
    pairs = {}
    for a_i, J in enumerate(inf_types):
        for S in inf_types[a_i + 1:]:
            comm = _chain(cfg, J, S, W) - _chain(cfg, S, J, W)
            scaled = comm.matrix @ sp.diags(sqrt_k)
            val = operator_norm(scaled)[0]
            bound = commutator_bound_table(cfg, J, S)
            pairs[f"{J + 1},{S + 1}"] = {"norm": val, "bound": bound}
            rep.record("commutator_table", max(0.0, val - bound))
            term = comm.tensor(gam[J] @ gam[S])
            F = term if F is None else F + term
    rep.data["pairs"] = pairs
    if F is None:
        rep.data["FK_norm"] = 0.0
        rep.data["FsqrtK_norm"] = 0.0
        return rep
    kk = sp.diags(np.repeat(kdiag, s))
    fk = operator_norm(F.matrix @ kk)[0]
    fsk = operator_norm(F.matrix @ sp.diags(np.repeat(sqrt_k, s)))[0]
    rep.data["FK_norm"] = fk
    rep.data["FsqrtK_norm"] = fsk
    rep.flag("FK_below_one", fk < 1.0)
    # D_inf^2 = Delta + F on W
    Dinf1 = assemble_dirac(cfg, W, codomain=W.expand(1), indices=inf_types)
    Dinf2 = assemble_dirac(cfg, W.expand(1), codomain=W2, indices=inf_types)
    sq = Dinf2 @ Dinf1
    lap = assemble(shape, W, [(np.zeros(shape.d, np.int64), pp)], codomain=W2).tensor(np.eye(s))
    diff = sq - lap - F
    scale = max(np.abs(sq.matrix.data).max(initial=0.0), 1.0)
    rep.record("square_identity", float(np.abs(diff.matrix.data).max(initial=0.0)) / scale)
    return rep


def anticommutation_violation(cfg: TripleConfig, J: int, D: OperatorWindow | None = None) -> float:
    """max entry of E_J D + D E_J + 2 Gamma_J (x) 1 on a full finite group."""
    if D is None:
        D = assemble_dirac(cfg)
    E = clifford_multiplier(cfg, J)
    G = build_gamma_op(cfg, J).tensor(np.eye(cfg.s))
    lhs = (E @ D) + (D @ E) + G.scale(2.0)
    return float(np.abs(lhs.matrix.data).max(initial=0.0))
