"""Twisted convolution algebra on Z^d_k, its regular representation and windowed operators.

Elements are finitely supported coefficient maps. Operators on l^2 are stored
as scipy sparse matrices between two ordered point sets (the domain and the
codomain), tensored with C^s in point-major layout: the basis vector of point
index p and spinor index a sits at position p * s + a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .cocycle import Cocycle
from .lattice import (
    INF,
    PointSet,
    Shape,
    ShapeError,
    TorusPoint,
    Window,
    as_points,
    canonical_rep,
    character,
    point_keys,
    unique_points,
    window_points,
)

DENSE_LIMIT = 2048
HERMITIAN_TOL = 1e-12


class WindowError(ValueError):
    """An operator image left a pinned codomain."""


# ---------------------------------------------------------------------------
# algebra elements


class AlgebraElement:
    """Finitely supported function on Z^d_k with canonical, sorted, distinct support."""

    __slots__ = ("shape", "points", "coeffs")

    def __init__(self, shape: Shape, points, coeffs, drop_zeros: bool = True):
        pts = as_points(points, shape.d) if len(np.asarray(points)) else np.zeros((0, shape.d), np.int64)
        vals = np.asarray(coeffs, dtype=complex).reshape(-1)
        if pts.shape[0] != vals.shape[0]:
            raise ShapeError("points and coefficients differ in length")
        pts = canonical_rep(pts, shape) if len(pts) else pts
        keys = point_keys(pts)
        uniq, first, inv = np.unique(keys, return_index=True, return_inverse=True)
        summed = np.zeros(len(uniq), dtype=complex)
        np.add.at(summed, inv.reshape(-1), vals)
        pts = pts[first]
        if drop_zeros and len(summed):
            keep = summed != 0
            pts, summed = pts[keep], summed[keep]
        pts.setflags(write=False)
        summed.setflags(write=False)
        self.shape = shape
        self.points = pts
        self.coeffs = summed

    # constructors
    @classmethod
    def zero(cls, shape: Shape) -> "AlgebraElement":
        return cls(shape, np.zeros((0, shape.d), np.int64), [])

    @classmethod
    def delta(cls, shape: Shape, m, coeff: complex = 1.0) -> "AlgebraElement":
        return cls(shape, as_points(m, shape.d), [coeff])

    @classmethod
    def one(cls, shape: Shape) -> "AlgebraElement":
        return cls.delta(shape, np.zeros(shape.d, np.int64))

    @classmethod
    def from_dict(cls, shape: Shape, mapping: dict) -> "AlgebraElement":
        if not mapping:
            return cls.zero(shape)
        pts = np.array([list(k) for k in mapping], dtype=np.int64).reshape(-1, shape.d)
        return cls(shape, pts, list(mapping.values()))

    @classmethod
    def re_delta(cls, shape: Shape, m) -> "AlgebraElement":
        """Real part (W^m + W^-m) / 2."""
        m = np.asarray(m, dtype=np.int64)
        return cls(shape, np.stack([m, -m]), [0.5, 0.5])

    @classmethod
    def im_delta(cls, shape: Shape, m) -> "AlgebraElement":
        """Imaginary part (W^m - W^-m) / 2i."""
        m = np.asarray(m, dtype=np.int64)
        return cls(shape, np.stack([m, -m]), [-0.5j, 0.5j])

    # arithmetic
    def _combine(self, other: "AlgebraElement", sign: float) -> "AlgebraElement":
        if other.shape != self.shape:
            raise ShapeError("elements on different shapes")
        return AlgebraElement(
            self.shape,
            np.concatenate([self.points, other.points]),
            np.concatenate([self.coeffs, sign * other.coeffs]),
        )

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return AlgebraElement(self.shape, self.points, -self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraElement):
            raise TypeError("use convolve for products of elements")
        return AlgebraElement(self.shape, self.points, self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return AlgebraElement(self.shape, self.points, self.coeffs / scalar)

    def __len__(self) -> int:
        return len(self.coeffs)

    def coefficient(self, m) -> complex:
        m = canonical_rep(np.asarray(m, dtype=np.int64), self.shape)
        hit = np.all(self.points == m, axis=1)
        return complex(self.coeffs[hit][0]) if hit.any() else 0j

    def as_dict(self) -> dict:
        return {tuple(int(x) for x in p): complex(c) for p, c in zip(self.points, self.coeffs)}

    def l1(self) -> float:
        return float(np.abs(self.coeffs).sum())

    def max_abs(self) -> float:
        return float(np.abs(self.coeffs).max(initial=0.0))

    def reach(self) -> np.ndarray:
        """Largest |coordinate| per axis over the support."""
        if len(self) == 0:
            return np.zeros(self.shape.d, np.int64)
        return np.abs(self.points).max(axis=0)

    def is_inner(self, d: int) -> bool:
        return bool(np.all(self.points[:, d:] == 0))

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        return (self - adjoint(self)).max_abs() <= tol

    def embed(self, outer: Shape) -> "AlgebraElement":
        """Zero-pad coordinates into a larger shape extending this one."""
        d = self.shape.d
        if outer.entries[:d] != self.shape.entries:
            raise ShapeError("outer shape does not extend the element's shape")
        pad = np.zeros((len(self), outer.d - d), np.int64)
        return AlgebraElement(outer, np.hstack([self.points, pad]), self.coeffs)

    def restrict(self, inner: Shape) -> "AlgebraElement":
        d = inner.d
        if not self.is_inner(d):
            raise ShapeError("element has support outside the inner coordinates")
        return AlgebraElement(inner, self.points[:, :d], self.coeffs)

    def reshape(self, shape: Shape) -> "AlgebraElement":
        """Same coordinates read in another shape of equal dimension."""
        return AlgebraElement(shape, self.points, self.coeffs)

    def to_json(self) -> list:
        return [
            {"coords": [int(x) for x in p], "re": float(c.real), "im": float(c.imag)}
            for p, c in zip(self.points, self.coeffs)
        ]

    @classmethod
    def from_json(cls, shape: Shape, data: Sequence[dict]) -> "AlgebraElement":
        if not data:
            return cls.zero(shape)
        pts = np.array([e["coords"] for e in data], dtype=np.int64)
        vals = [complex(e.get("re", 0.0), e.get("im", 0.0)) for e in data]
        return cls(shape, pts, vals)

    def __repr__(self) -> str:
        terms = ", ".join(f"{tuple(p)}: {c:.4g}" for p, c in zip(self.points.tolist(), self.coeffs))
        return f"AlgebraElement({self.shape}, {{{terms}}})"


def random_element(
    shape: Shape,
    rng: np.random.Generator,
    support: int = 5,
    radius: int = 2,
    self_adjoint: bool = False,
    inner: int | None = None,
) -> AlgebraElement:
    """Seeded element with up to ``support`` random points in the radius box.

    ``inner`` restricts the support to the first ``inner`` coordinates.
    """
    d = shape.d
    active = d if inner is None else inner
    cols = []
    for j, e in enumerate(shape.entries):
        if j >= active:
            cols.append(np.zeros(support, np.int64))
            continue
        r = radius if e == INF else min(radius, (e - 1) // 2)
        lo = -r if e == INF or e % 2 else max(-r, (1 - e) // 2)
        cols.append(rng.integers(lo, r + 1, size=support))
    pts = np.stack(cols, axis=1)
    vals = rng.normal(size=support) + 1j * rng.normal(size=support)
    a = AlgebraElement(shape, pts, vals)
    if self_adjoint:
        a = (a + adjoint(a)) * 0.5
    return a


def adjoint(f: AlgebraElement) -> AlgebraElement:
    """f*(m) = conj(f(-m))."""
    return AlgebraElement(f.shape, -f.points, np.conj(f.coeffs))


def convolve(f: AlgebraElement, g: AlgebraElement, sigma: Cocycle) -> AlgebraElement:
    """(f * g)(n) = sum_m f(m) g(n - m) sigma(m, n - m), exact on finite supports."""
    if f.shape != g.shape or sigma.shape != f.shape:
        raise ShapeError("shape mismatch in convolution")
    if len(f) == 0 or len(g) == 0:
        return AlgebraElement.zero(f.shape)
    a = np.repeat(f.points, len(g), axis=0)
    b = np.tile(g.points, (len(f), 1))
    vals = np.repeat(f.coeffs, len(g)) * np.tile(g.coeffs, len(f)) * sigma(a, b)
    return AlgebraElement(f.shape, a + b, vals)


def dual_action(z: TorusPoint, a: AlgebraElement) -> AlgebraElement:
    """Fourier multiplier a(m) -> z^m a(m); inner z is padded with ones."""
    if z.d < a.shape.d:
        z = z.pad(a.shape.d)
    elif z.d > a.shape.d:
        z = TorusPoint(z.angles[: a.shape.d])
    if len(a) == 0:
        return a
    return AlgebraElement(a.shape, a.points, a.coeffs * character(z, a.points))


def derive(j: int, a: AlgebraElement) -> AlgebraElement:
    """i m_j a(m) on an infinite axis j; zero on a finite axis."""
    if not 0 <= j < a.shape.d:
        raise ShapeError(f"axis {j} out of range")
    if a.shape.is_finite(j):
        return AlgebraElement.zero(a.shape)
    return AlgebraElement(a.shape, a.points, 1j * a.points[:, j] * a.coeffs)


def trace(a: AlgebraElement) -> complex:
    return a.coefficient(np.zeros(a.shape.d, np.int64))


def jordan(a: AlgebraElement, b: AlgebraElement, sigma: Cocycle) -> AlgebraElement:
    return (convolve(a, b, sigma) + convolve(b, a, sigma)) * 0.5


def lie(a: AlgebraElement, b: AlgebraElement, sigma: Cocycle) -> AlgebraElement:
    return (convolve(a, b, sigma) - convolve(b, a, sigma)) / 2j


# ---------------------------------------------------------------------------
# windowed operators


def _as_point_set(x) -> PointSet:
    if isinstance(x, PointSet):
        return x
    return PointSet(window_points(x))


@dataclass(frozen=True, eq=False)
class OperatorWindow:
    """A linear map l^2(domain) (x) C^s -> l^2(codomain) (x) C^s."""

    shape: Shape
    domain: PointSet
    codomain: PointSet
    matrix: sp.csr_matrix
    s: int = 1

    def __post_init__(self):
        m = sp.csr_matrix(self.matrix)
        expected = (len(self.codomain) * self.s, len(self.domain) * self.s)
        if m.shape != expected:
            raise ShapeError(f"matrix shape {m.shape} does not match windows {expected}")
        object.__setattr__(self, "matrix", m)

    @property
    def square(self) -> bool:
        return len(self.domain) == len(self.codomain) and bool(
            np.array_equal(self.domain.points, self.codomain.points)
        )

    @property
    def hermitian(self) -> bool:
        """Entrywise test: ||A - A*||_F <= 1e-12 max|A_ij|, which implies the operator-norm test."""
        if not hasattr(self, "_herm"):
            ok = False
            if self.square:
                diff = self.matrix - self.matrix.getH()
                scale = np.abs(self.matrix.data).max(initial=0.0)
                ok = sp.linalg.norm(diff) <= HERMITIAN_TOL * max(scale, 1e-300)
            object.__setattr__(self, "_herm", bool(ok))
        return self._herm

    @property
    def dims(self) -> tuple[int, int]:
        return self.matrix.shape

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def adjoint(self) -> "OperatorWindow":
        return OperatorWindow(self.shape, self.codomain, self.domain, self.matrix.getH().tocsr(), self.s)

    def __matmul__(self, other: "OperatorWindow") -> "OperatorWindow":
        if other.s != self.s:
            raise ShapeError("spinor dimensions differ")
        mid = align_rows(other, self.domain)
        return OperatorWindow(self.shape, other.domain, self.codomain, (self.matrix @ mid).tocsr(), self.s)

    def __add__(self, other: "OperatorWindow") -> "OperatorWindow":
        cod = _union(self.codomain, other.codomain) if not np.array_equal(
            self.codomain.points, other.codomain.points) else self.codomain
        if other.s != self.s or not np.array_equal(self.domain.points, other.domain.points):
            raise ShapeError("operators act on different spaces")
        m = pad_rows(self, cod) + pad_rows(other, cod)
        return OperatorWindow(self.shape, self.domain, cod, m.tocsr(), self.s)

    def __sub__(self, other: "OperatorWindow") -> "OperatorWindow":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "OperatorWindow":
        return OperatorWindow(self.shape, self.domain, self.codomain, self.matrix * c, self.s)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def tensor(self, spin: np.ndarray) -> "OperatorWindow":
        """self (x) spin, for a scalar operator (s = 1) and an s x s matrix."""
        if self.s != 1:
            raise ShapeError("tensoring needs a scalar operator")
        spin = np.asarray(spin)
        return OperatorWindow(
            self.shape, self.domain, self.codomain, sp.kron(self.matrix, sp.csr_matrix(spin)).tocsr(), spin.shape[0]
        )

    def compress(self, codomain) -> "OperatorWindow":
        """Keep only the rows of the points in ``codomain`` (a compression P A)."""
        cod = _as_point_set(codomain)
        return OperatorWindow(self.shape, self.domain, cod, pad_rows(self, cod).tocsr(), self.s)

    def restrict(self, domain) -> "OperatorWindow":
        """Keep only the columns of the points in ``domain`` (A restricted to a subspace)."""
        dom = _as_point_set(domain)
        idx = self.domain.index(dom.points)
        if np.any(idx < 0):
            raise WindowError("restriction domain is not contained in the operator domain")
        cols = (idx[:, None] * self.s + np.arange(self.s)[None, :]).ravel()
        return OperatorWindow(self.shape, dom, self.codomain, self.matrix[:, cols].tocsr(), self.s)


def _union(a: PointSet, b: PointSet) -> PointSet:
    return PointSet(unique_points(np.concatenate([a.points, b.points])))


def pad_rows(op: OperatorWindow, codomain: PointSet) -> sp.csr_matrix:
    """Matrix of op re-indexed onto ``codomain`` rows; rows outside it are dropped."""
    target = codomain.index(op.codomain.points)
    s = op.s
    coo = op.matrix.tocoo()
    pt = coo.row // s
    new_pt = target[pt]
    keep = new_pt >= 0
    rows = new_pt[keep] * s + coo.row[keep] % s
    return sp.csr_matrix((coo.data[keep], (rows, coo.col[keep])), shape=(len(codomain) * s, op.matrix.shape[1]))


def align_rows(op: OperatorWindow, codomain: PointSet) -> sp.csr_matrix:
    """Like pad_rows but refuses to drop nonzero rows (keeps compositions exact)."""
    target = codomain.index(op.codomain.points)
    coo = op.matrix.tocoo()
    lost = target[coo.row // op.s] < 0
    if np.any(lost & (coo.data != 0)):
        raise WindowError("composition would leave the intermediate window; enlarge it")
    return pad_rows(op, codomain)


def assemble(
    shape: Shape,
    domain,
    terms: Iterable[tuple[np.ndarray, np.ndarray]],
    codomain=None,
    mode: str = "exact",
) -> OperatorWindow:
    """Scalar operator sum_t phase_t(p) |p + y_t><p| over the domain points.

    ``terms`` yields (shift y, phases over the domain points). With no codomain
    the image points are collected automatically; with a codomain, ``mode``
    decides whether leaving it is an error ("exact") or rows are dropped
    ("compress").
    """
    dom = _as_point_set(domain)
    pts = dom.points
    rows_pts, cols, vals = [], [], []
    col_idx = np.arange(len(pts))
    for y, phase in terms:
        phase = np.broadcast_to(np.asarray(phase, dtype=complex), (len(pts),))
        nz = phase != 0
        if not nz.any():
            continue
        tgt = canonical_rep(pts[nz] + np.asarray(y, dtype=np.int64), shape)
        rows_pts.append(tgt)
        cols.append(col_idx[nz])
        vals.append(phase[nz])
    if not rows_pts:
        cod = _as_point_set(codomain) if codomain is not None else dom
        return OperatorWindow(shape, dom, cod, sp.csr_matrix((len(cod), len(dom)), dtype=complex))
    tp = np.concatenate(rows_pts)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    if codomain is None:
        cod = PointSet(unique_points(np.concatenate([tp, pts])))
    else:
        cod = _as_point_set(codomain)
    rows = cod.index(tp)
    outside = rows < 0
    if outside.any():
        if mode == "exact":
            raise WindowError(
                f"{int(outside.sum())} image entries fall outside the pinned codomain; enlarge it"
            )
        rows, cols, vals = rows[~outside], cols[~outside], vals[~outside]
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(len(cod), len(dom)), dtype=complex)
    mat.sum_duplicates()
    return OperatorWindow(shape, dom, cod, mat)


def identity_op(shape: Shape, domain, s: int = 1) -> OperatorWindow:
    dom = _as_point_set(domain)
    return OperatorWindow(shape, dom, dom, sp.identity(len(dom) * s, dtype=complex, format="csr"), s)


def diagonal_op(shape: Shape, domain, values: np.ndarray) -> OperatorWindow:
    dom = _as_point_set(domain)
    return OperatorWindow(shape, dom, dom, sp.diags(np.asarray(values, dtype=complex)).tocsr())


def _check(f: AlgebraElement, sigma: Cocycle):
    if f.shape != sigma.shape:
        raise ShapeError("element and cocycle live on different shapes")


def left_terms(f: AlgebraElement, sigma: Cocycle, pts: np.ndarray):
    """Shift terms of pi(f): |p> -> f(m) sigma(m, p) |p + m>."""
    for m, c in zip(f.points, f.coeffs):
        yield m, c * sigma(np.broadcast_to(m, pts.shape), pts)


def right_terms(b: AlgebraElement, sigma: Cocycle, pts: np.ndarray):
    """Shift terms of xi -> xi * b: |p> -> b(y) sigma(p, y) |p + y>."""
    for y, c in zip(b.points, b.coeffs):
        yield y, c * sigma(pts, np.broadcast_to(y, pts.shape))


def _default_domain(shape: Shape, window):
    if window is None:
        if not shape.is_finite():
            raise WindowError("infinite shapes need an explicit window")
        return Window.full(shape)
    return window


def represent(f: AlgebraElement, sigma: Cocycle, window=None, codomain=None, mode: str = "exact") -> OperatorWindow:
    """Windowed matrix of left multiplication pi(f).

    Finite shapes default to the full group, where the matrix is pi(f) itself.
    On infinite axes the codomain grows by the reach of f unless pinned.
    """
    _check(f, sigma)
    dom = _as_point_set(_default_domain(f.shape, window))
    if codomain is None and f.shape.is_finite() and len(dom) == f.shape.order():
        codomain = dom
    return assemble(f.shape, dom, left_terms(f, sigma, dom.points), codomain, mode)


def right_represent(b: AlgebraElement, sigma: Cocycle, window=None, codomain=None, mode: str = "exact") -> OperatorWindow:
    """Windowed matrix of the right action xi -> xi * b."""
    _check(b, sigma)
    dom = _as_point_set(_default_domain(b.shape, window))
    if codomain is None and b.shape.is_finite() and len(dom) == b.shape.order():
        codomain = dom
    return assemble(b.shape, dom, right_terms(b, sigma, dom.points), codomain, mode)


def commutator_represent(a: AlgebraElement, sigma: Cocycle, window=None, codomain=None, mode: str = "exact") -> OperatorWindow:
    """xi -> a xi - xi a as one windowed operator."""
    _check(a, sigma)
    dom = _as_point_set(_default_domain(a.shape, window))
    if codomain is None and a.shape.is_finite() and len(dom) == a.shape.order():
        codomain = dom
    pts = dom.points
    terms = list(left_terms(a, sigma, pts)) + [(y, -ph) for y, ph in right_terms(a, sigma, pts)]
    return assemble(a.shape, dom, terms, codomain, mode)


def vector_to_element(shape: Shape, pts: np.ndarray, vec: np.ndarray) -> AlgebraElement:
    return AlgebraElement(shape, pts, vec)


def right_multiply(xi: AlgebraElement, b: AlgebraElement, sigma: Cocycle) -> AlgebraElement:
    """xi * b for finitely supported xi (exact)."""
    return convolve(xi, b, sigma)


def j_involution(xi: AlgebraElement) -> AlgebraElement:
    """(J xi)(m) = conj(xi(-m)); on coefficient maps this coincides with the adjoint."""
    return adjoint(xi)


def commutator_apply(a: AlgebraElement, xi: AlgebraElement, sigma: Cocycle) -> AlgebraElement:
    """[a, xi] = a xi - xi a."""
    return convolve(a, xi, sigma) - convolve(xi, a, sigma)


def j_matrix_apply(points: PointSet, shape: Shape, vec: np.ndarray) -> np.ndarray:
    """J on a vector over a negation-closed point set."""
    neg = points.index(canonical_rep(-points.points, shape))
    if np.any(neg < 0):
        raise WindowError("point set is not closed under negation")
    return np.conj(vec[neg])


# ---------------------------------------------------------------------------
# operator norms


def _dense_norm(m: np.ndarray, hermitian: bool) -> float:
    if m.size == 0:
        return 0.0
    if hermitian:
        ev = scipy.linalg.eigvalsh(m)
        return float(max(abs(ev[0]), abs(ev[-1])))
    return float(scipy.linalg.svdvals(m)[0])


def power_norm(
    matrix, tol: float = 1e-12, max_iter: int = 5000, seed: int = 0, restarts: int = 3
) -> tuple[float, bool]:
    """Power iteration on A*A with seeded restarts; returns the best ||A v|| seen."""
    a = sp.csr_matrix(matrix)
    ah = a.getH().tocsr()
    n = a.shape[1]
    if n == 0 or a.nnz == 0:
        return 0.0, True
    rng = np.random.default_rng(seed)
    best, converged = 0.0, False
    for _ in range(restarts):
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        v /= np.linalg.norm(v)
        prev = 0.0
        for _ in range(max_iter):
            w = a @ v
            val = float(np.linalg.norm(w))
            best = max(best, val)
            u = ah @ w
            nu = np.linalg.norm(u)
            if nu == 0:
                break
            v = u / nu
            if abs(val - prev) <= tol * max(val, 1e-300):
                converged = True
                break
            prev = val
    return best, converged


def operator_norm(
    A: OperatorWindow | np.ndarray | sp.spmatrix,
    tol: float = 1e-12,
    max_iter: int = 5000,
    seed: int = 0,
) -> tuple[float, bool]:
    """Largest singular value, together with a convergence flag.

    Up to ``DENSE_LIMIT`` columns and rows the value is computed by dense
    eigen- or singular-value decomposition. Larger operators use seeded
    Lanczos (ARPACK) on A (Hermitian case) or on A*A, and report ||A v|| for the
    returned unit Ritz vector v, which never exceeds ||A||. Power iteration with
    restarts is the fallback when ARPACK does not converge.
    """
    if isinstance(A, OperatorWindow):
        mat = A.matrix
        herm = A.hermitian
    else:
        mat = A
        herm = None
    if sp.issparse(mat):
        rows, cols = mat.shape
    else:
        mat = np.asarray(mat)
        rows, cols = mat.shape
    if herm is None:
        if rows == cols:
            d = mat - (mat.getH() if sp.issparse(mat) else mat.conj().T)
            dn = sp.linalg.norm(d) if sp.issparse(d) else np.linalg.norm(d)
            scale = np.abs(mat.data if sp.issparse(mat) else mat).max(initial=0.0)
            herm = dn <= HERMITIAN_TOL * max(scale, 1e-300)
        else:
            herm = False
    if rows == 0 or cols == 0:
        return 0.0, True
    if max(rows, cols) <= DENSE_LIMIT:
        dense = mat.toarray() if sp.issparse(mat) else mat
        return _dense_norm(dense, herm), True
    a = sp.csr_matrix(mat)
    a.eliminate_zeros()
    if a.nnz == 0:
        return 0.0, True
    rng = np.random.default_rng(seed)
    try:
        if herm:
            v0 = rng.normal(size=cols) + 1j * rng.normal(size=cols)
            _, vec = spla.eigsh(a, k=1, which="LM", v0=v0, tol=0, maxiter=max_iter)
        else:
            ah = a.getH().tocsr()
            op = spla.LinearOperator((cols, cols), matvec=lambda x: ah @ (a @ x), dtype=complex)
            v0 = rng.normal(size=cols) + 1j * rng.normal(size=cols)
            _, vec = spla.eigsh(op, k=1, which="LA", v0=v0, tol=0, maxiter=max_iter)
        v = vec[:, 0] / np.linalg.norm(vec[:, 0])
        return float(np.linalg.norm(a @ v)), True
    except spla.ArpackNoConvergence:
        return power_norm(a, tol=tol, max_iter=max_iter, seed=seed)


def element_norm(a: AlgebraElement, sigma: Cocycle, window=None) -> float:
    """||pi(a)|| on the full finite group, or the windowed compression norm."""
    if a.shape.is_finite() and window is None:
        op = represent(a, sigma)
    else:
        op = represent(a, sigma, window, codomain=window, mode="compress")
    return operator_norm(op)[0]


def windowed_norms(
    build: Callable[[int], OperatorWindow], radii: Sequence[int], seed: int = 0
) -> dict:
    """Norms over growing windows plus the relative change over the last enlargement."""
    vals = [operator_norm(build(r), seed=seed)[0] for r in radii]
    rel = abs(vals[-1] - vals[-2]) / max(vals[-1], 1e-300) if len(vals) > 1 else math.inf
    return {"radii": list(radii), "values": vals, "value": vals[-1], "stability": rel}
