"""Normalized 2-cocycles on Z^d_k and embedding data for the outer algebra.

Conventions used throughout the package:

* the bicharacter attached to a real matrix omega is
  ``s(m, m') = exp(2 pi i <omega m, m'>)`` with ``<x, y> = sum_i x_i y_i``;
* its commutation factor is ``s(m, m') conj(s(m', m)) = exp(2 pi i <theta m, m'>)``
  with ``theta = omega - omega^T``, so that ``W^m W^m' = exp(2 pi i <theta m, m'>) W^m' W^m``;
* every cocycle is evaluated on canonical representatives, which is how a
  cocycle of Z^d descends to the quotient Z^d_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lattice import INF, Shape, ShapeError, Window, as_points, canonical_rep, point_keys
from .report import Report

GOLDEN_BETA = (math.sqrt(5.0) - 1.0) / 2.0
TABULATE_LIMIT = 4096
DEFAULT_BRANCH_TOL = 1e-9
# default radius of the infinite-axis box used to place the branch cut
BRANCH_RADIUS = 8
_ANGLE_POINT_CAP = 1 << 18


class QuotientError(ValueError):
    """A bicharacter that does not descend to the requested finite quotient."""

    def __init__(self, i: int, j: int, message: str):
        super().__init__(message)
        self.pair = (i, j)


class BranchCutError(ValueError):
    """An angle <omega m, -m> landed on the branch cut of the square root."""


class EmbeddingError(ValueError):
    """Embedding data that violates the structural conditions."""


def _reduce(t: np.ndarray) -> np.ndarray:
    """t mod 1 mapped into (-1/2, 1/2]."""
    r = t - np.floor(t + 0.5)
    return np.where(r <= -0.5, r + 1.0, r)


def _phase(t: np.ndarray) -> np.ndarray:
    """exp(2 pi i t), reducing first so that integer angles give exactly 1."""
    return np.exp(2j * np.pi * _reduce(np.asarray(t, dtype=float)))


class Cocycle:
    """Base class: a function Z^d_k x Z^d_k -> U(1) evaluated pointwise on batches."""

    shape: Shape

    def __call__(self, m, mp):
        a = as_points(m, self.shape.d)
        b = as_points(mp, self.shape.d)
        if a.shape[0] != b.shape[0]:
            if a.shape[0] == 1:
                a = np.repeat(a, b.shape[0], axis=0)
            elif b.shape[0] == 1:
                b = np.repeat(b, a.shape[0], axis=0)
            else:
                raise ShapeError("point batches of different length")
        vals = self._eval(canonical_rep(a, self.shape), canonical_rep(b, self.shape))
        if np.asarray(m).ndim == 1 and np.asarray(mp).ndim == 1:
            return complex(vals[0])
        return vals

    def _eval(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def commutation(self, m, mp):
        """sigma(m, m') conj(sigma(m', m)), the factor with W^m W^m' = c W^m' W^m."""
        return self(m, mp) * np.conj(self(mp, m))

    def to_json(self) -> dict:
        raise NotImplementedError


def _check_omega(omega, d: int) -> np.ndarray:
    om = np.asarray(omega, dtype=float)
    if om.shape != (d, d):
        raise ShapeError(f"omega must be {d}x{d}, got {om.shape}")
    return om


def quotient_violations(omega: np.ndarray, shape: Shape, tol: float = 1e-12) -> list[tuple[int, int]]:
    """Generator pairs (i, j) at which exp(2 pi i <omega m, m'>) fails to descend.

    Shifting m by k(j) e_j changes the exponent by omega_ij k(j) m'_i, and shifting
    m' by k(i) e_i changes it by omega_ij k(i) m_j; both must be integers.
    """
    bad = []
    for i in range(shape.d):
        for j in range(shape.d):
            w = omega[i, j]
            if w == 0:
                continue
            for axis in (i, j):
                k = shape.entries[axis]
                if k != INF and abs(w * k - round(w * k)) > tol:
                    bad.append((i, j))
                    break
    return bad


@dataclass(frozen=True, eq=False)
class Bicharacter(Cocycle):
    """exp(2 pi i <omega m, m'>); a cocycle, normalized only when omega is antisymmetric."""

    shape: Shape
    omega: np.ndarray

    def __post_init__(self):
        om = _check_omega(self.omega, self.shape.d)
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)
        bad = quotient_violations(om, self.shape)
        if bad:
            i, j = bad[0]
            raise QuotientError(
                i, j,
                f"omega[{i},{j}] = {om[i, j]!r} does not descend to shape {self.shape}: "
                f"generators e_{i + 1}, e_{j + 1} of the finite quotient clash",
            )

    def exponent(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("ni,ij,nj->n", b, self.omega, a)

    def _eval(self, a, b):
        return _phase(self.exponent(a, b))

    def raw(self, m, mp) -> np.ndarray:
        """Evaluation on the given integer vectors without canonicalization."""
        return _phase(self.exponent(as_points(m, self.shape.d), as_points(mp, self.shape.d)))

    def to_json(self) -> dict:
        return {"type": "bicharacter", "shape": self.shape.to_json(), "omega": self.omega.tolist()}


@dataclass(frozen=True, eq=False)
class NormalizedFromTheta(Cocycle):
    """The bicharacter of omega made normalized by a square-root coboundary.

    With s the bicharacter, let t0(m) = -<omega m, m> (the angle of s(m, -m) on
    canonical representatives), lift it to t in (beta - 1, beta] and put
    g(m) = exp(-i pi t). Then sigma(m, m') = g(m) g(m') conj(g(m + m')) s(m, m').
    Since beta lies in (0, 1), the lift of angle 0 is 0 and g(0) = 1 exactly.
    """

    shape: Shape
    omega: np.ndarray
    beta: float
    tol: float = DEFAULT_BRANCH_TOL
    base: Bicharacter = field(init=False, repr=False)

    def __post_init__(self):
        if not (0.0 < self.beta < 1.0):
            raise ValueError(f"beta must lie strictly between 0 and 1, got {self.beta}")
        object.__setattr__(self, "base", Bicharacter(self.shape, self.omega))
        object.__setattr__(self, "omega", self.base.omega)

    def angle(self, a: np.ndarray) -> np.ndarray:
        """Lifted angle t(m) in (beta - 1, beta] for canonical points a."""
        t0 = -np.einsum("ni,ij,nj->n", a, self.omega, a)
        shifted = t0 - self.beta
        dist = np.abs(shifted - np.round(shifted))
        if np.any(dist < self.tol):
            bad = a[int(np.argmin(dist))]
            raise BranchCutError(
                f"angle of point {bad.tolist()} is within {self.tol:g} of the branch cut beta={self.beta}"
            )
        return t0 - np.ceil(shifted)

    def coboundary(self, a: np.ndarray) -> np.ndarray:
        return np.exp(-1j * np.pi * self.angle(a))

    def _eval(self, a, b):
        s = canonical_rep(a + b, self.shape)
        g = self.coboundary(np.concatenate([a, b, s]))
        n = a.shape[0]
        return g[:n] * g[n:2 * n] * np.conj(g[2 * n:]) * self.base._eval(a, b)

    def to_json(self) -> dict:
        return {
            "type": "normalized",
            "shape": self.shape.to_json(),
            "omega": self.omega.tolist(),
            "beta": self.beta,
            "tol": self.tol,
        }


@dataclass(frozen=True, eq=False)
class Product(Cocycle):
    """Pointwise product of cocycles on the same shape."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("empty product")
        shape = factors[0].shape
        if any(c.shape != shape for c in factors):
            raise ShapeError("product factors live on different shapes")
        object.__setattr__(self, "factors", factors)

    @property
    def shape(self) -> Shape:
        return self.factors[0].shape

    def _eval(self, a, b):
        out = np.ones(a.shape[0], dtype=complex)
        for c in self.factors:
            out = out * c._eval(a, b)
        return out

    def to_json(self) -> dict:
        return {"type": "product", "factors": [c.to_json() for c in self.factors]}


@dataclass(frozen=True, eq=False)
class Pullback(Cocycle):
    """sigma(q m, q m') where q keeps the first ``inner.shape.d`` coordinates."""

    inner: Cocycle
    shape: Shape

    def __post_init__(self):
        d = self.inner.shape.d
        if self.shape.d < d or self.shape.entries[:d] != self.inner.shape.entries:
            raise ShapeError("pullback shape must extend the inner shape")

    def _eval(self, a, b):
        d = self.inner.shape.d
        return self.inner._eval(a[:, :d], b[:, :d])

    def to_json(self) -> dict:
        return {"type": "pullback", "shape": self.shape.to_json(), "inner": self.inner.to_json()}


@dataclass(frozen=True, eq=False)
class Tabulated(Cocycle):
    """Dense |G| x |G| table indexed by lexicographic position in the full window."""

    shape: Shape
    table: np.ndarray

    def __post_init__(self):
        if not self.shape.is_finite():
            raise ShapeError("tabulated cocycles need a finite shape")
        size = self.shape.order()
        if size > TABULATE_LIMIT:
            raise ShapeError(f"group of order {size} exceeds the tabulation limit {TABULATE_LIMIT}")
        tab = np.array(self.table, dtype=complex)
        if tab.shape != (size, size):
            raise ShapeError(f"table must be {size}x{size}")
        tab.setflags(write=False)
        object.__setattr__(self, "table", tab)
        object.__setattr__(self, "_window", Window.full(self.shape))

    @classmethod
    def from_cocycle(cls, sigma: Cocycle) -> "Tabulated":
        pts = Window.full(sigma.shape).points()
        n = len(pts)
        a = np.repeat(pts, n, axis=0)
        b = np.tile(pts, (n, 1))
        return cls(sigma.shape, sigma(a, b).reshape(n, n))

    def _eval(self, a, b):
        return self.table[self._window.index(a), self._window.index(b)]

    def perturbed(self, i: int, j: int, factor: complex) -> "Tabulated":
        tab = self.table.copy()
        tab[i, j] *= factor
        return Tabulated(self.shape, tab)

    def to_json(self) -> dict:
        flat = self.table.ravel()
        return {
            "type": "tabulated",
            "shape": self.shape.to_json(),
            "table": [[float(z.real), float(z.imag)] for z in flat],
        }


def trivial(shape: Shape) -> Bicharacter:
    return Bicharacter(shape, np.zeros((shape.d, shape.d)))


def cocycle_from_json(data: dict) -> Cocycle:
    kind = data.get("type")
    if kind == "product":
        return Product(tuple(cocycle_from_json(c) for c in data["factors"]))
    shape = Shape.from_json(data["shape"])
    if kind == "bicharacter":
        return Bicharacter(shape, np.asarray(data["omega"], dtype=float))
    if kind == "normalized":
        return NormalizedFromTheta(
            shape, np.asarray(data["omega"], dtype=float), float(data["beta"]),
            float(data.get("tol", DEFAULT_BRANCH_TOL)),
        )
    if kind == "pullback":
        return Pullback(cocycle_from_json(data["inner"]), shape)
    if kind == "tabulated":
        pairs = np.asarray(data["table"], dtype=float)
        n = shape.order()
        return Tabulated(shape, (pairs[:, 0] + 1j * pairs[:, 1]).reshape(n, n))
    raise ValueError(f"unknown cocycle type {kind!r}")


def _antisymmetric(theta, d: int) -> np.ndarray:
    th = _check_omega(theta, d)
    if np.max(np.abs(th + th.T), initial=0.0) > 1e-14:
        raise ValueError("theta must be antisymmetric")
    return th


def omega_from_theta(theta, shape: Shape) -> np.ndarray:
    """The upper-triangular omega with omega - omega^T = theta."""
    th = _antisymmetric(theta, shape.d)
    return np.triu(th, k=1)


def bicharacter_from_theta(theta, shape: Shape) -> Bicharacter:
    """A bicharacter with commutation factors exp(2 pi i <theta m, m'>).

    All-infinite shapes get the symmetric choice omega = theta / 2, which is
    already normalized; with finite axes the upper-triangular omega is used
    because theta / 2 rarely descends to the quotient.
    """
    th = _antisymmetric(theta, shape.d)
    if not shape.finite_axes:
        return Bicharacter(shape, th / 2.0)
    return Bicharacter(shape, omega_from_theta(th, shape))


def window_angles(omega: np.ndarray, window: Window) -> np.ndarray:
    """Distinct values of -<omega m, m> mod 1 in [0, 1) over the window (0 included)."""
    if len(window) > _ANGLE_POINT_CAP:
        raise ValueError(
            f"window of {len(window)} points is too large to place the branch cut; pin beta explicitly"
        )
    pts = window.points()
    t0 = -np.einsum("ni,ij,nj->n", pts, omega, pts)
    ang = np.mod(t0, 1.0)
    ang = np.where(ang > 1.0 - 1e-13, 0.0, ang)
    return np.unique(np.concatenate([[0.0], np.round(ang, 13)]))


def default_beta(omega: np.ndarray, shape: Shape, window: Window | None = None) -> float:
    """Midpoint of the widest gap between the window angles on the circle.

    Ties go to the midpoint closest to 1/2, then to the smaller one.
    """
    if window is None:
        window = Window.box(shape, BRANCH_RADIUS)
    ang = window_angles(np.asarray(omega, dtype=float), window)
    ext = np.concatenate([ang, [1.0]])
    gaps = np.diff(ext)
    mids = ext[:-1] + gaps / 2
    widest = gaps.max()
    cand = mids[gaps >= widest - 1e-12]
    order = np.lexsort((cand, np.abs(cand - 0.5)))
    return float(cand[order[0]])


def normalize_from_theta(
    theta,
    shape: Shape,
    beta: float | None = None,
    window: Window | None = None,
    tol: float = DEFAULT_BRANCH_TOL,
) -> NormalizedFromTheta:
    """Normalized cocycle with commutation factors exp(2 pi i <theta m, m'>).

    ``beta`` defaults to the widest-gap midpoint on ``window`` (the full window
    on finite axes, radius ``BRANCH_RADIUS`` on infinite ones). Separation from
    the cut is checked on that window here and on every later evaluation.
    """
    omega = omega_from_theta(theta, shape)
    if window is None:
        window = Window.box(shape, BRANCH_RADIUS)
    if beta is None:
        beta = default_beta(omega, shape, window)
    sigma = NormalizedFromTheta(shape, omega, float(beta), tol)
    if len(window) <= _ANGLE_POINT_CAP:
        sigma.angle(window.points())
    return sigma


def _triple_indices(size: int, count: int, rng: np.random.Generator):
    return rng.integers(0, size, size=(3, count))


def _sample_points(shape: Shape, count: int, rng: np.random.Generator, radius: int) -> np.ndarray:
    cols = []
    for e in shape.entries:
        if e == INF:
            cols.append(rng.integers(-radius, radius + 1, size=count))
        else:
            cols.append(rng.integers((1 - e) // 2, (e - 1) // 2 + 1, size=count))
    return np.stack(cols, axis=1).astype(np.int64)


def verify_cocycle(
    sigma: Cocycle,
    samples: int = 1000,
    seed: int = 0,
    tol: float = 1e-12,
    exhaustive_limit: int = 512,
    radius: int = 6,
) -> Report:
    """Cocycle identity, normalization, unit modulus and conjugation rule.

    Finite groups with at most ``exhaustive_limit`` elements are checked on all
    triples through a precomputed table; otherwise ``samples`` seeded triples
    are drawn (infinite axes from the box of the given radius).
    """
    shape = sigma.shape
    rep = Report("cocycle", tol)
    zero = np.zeros((1, shape.d), dtype=np.int64)
    if shape.is_finite() and shape.order() <= exhaustive_limit:
        win = Window.full(shape)
        pts = win.points()
        n = len(pts)
        a = np.repeat(pts, n, axis=0)
        b = np.tile(pts, (n, 1))
        table = sigma(a, b).reshape(n, n)
        add = win.index(canonical_rep(a + b, shape)).reshape(n, n)
        neg = win.index(canonical_rep(-pts, shape))
        worst = 0.0
        for x in range(n):
            lhs = table[x][:, None] * table[add[x]]  # sigma(x,y) sigma(x+y,z)
            rhs = table[x][add] * table  # sigma(x,y+z) sigma(y,z)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        rep.record("identity", worst)
        rep.record("normalization", float(np.abs(table[np.arange(n), neg] - 1).max()))
        rep.record("unit_modulus", float(np.abs(np.abs(table) - 1).max()))
        rep.record("conjugation", float(np.abs(np.conj(table) - table[neg][:, neg].T).max()))
        rep.record("unit_at_zero", float(np.abs(table[win.index(zero)[0]] - 1).max()))
        rep.data["mode"] = "exhaustive"
        rep.data["triples"] = n ** 3
    else:
        rng = np.random.default_rng(seed)
        x = _sample_points(shape, samples, rng, radius)
        y = _sample_points(shape, samples, rng, radius)
        z = _sample_points(shape, samples, rng, radius)
        lhs = sigma(x, y) * sigma(x + y, z)
        rhs = sigma(x, y + z) * sigma(y, z)
        rep.record("identity", float(np.abs(lhs - rhs).max()))
        rep.record("normalization", float(np.abs(sigma(x, -x) - 1).max()))
        vals = sigma(x, y)
        rep.record("unit_modulus", float(np.abs(np.abs(vals) - 1).max()))
        rep.record("conjugation", float(np.abs(np.conj(vals) - sigma(-y, -x)).max()))
        rep.record("unit_at_zero", float(np.abs(sigma(np.repeat(zero, samples, 0), x) - 1).max()))
        rep.data["mode"] = "sampled"
        rep.data["triples"] = samples
    base = sigma.base if isinstance(sigma, NormalizedFromTheta) else sigma
    if isinstance(base, Bicharacter) and shape.finite_axes:
        rng = np.random.default_rng(seed + 1)
        x = _sample_points(shape, 64, rng, radius)
        y = _sample_points(shape, 64, rng, radius)
        worst = 0.0
        for j in shape.finite_axes:
            shift = np.zeros(shape.d, dtype=np.int64)
            shift[j] = shape.entries[j]
            worst = max(worst, float(np.abs(base.raw(x + shift, y) - base.raw(x, y)).max()))
            worst = max(worst, float(np.abs(base.raw(x, y + shift) - base.raw(x, y)).max()))
        rep.record("representative_independence", worst)
    return rep


# ---------------------------------------------------------------------------
# embedding data


def paper_orientation(f: Sequence[int], d: int) -> tuple[int, ...]:
    """+1 when f(j) > j, -1 otherwise, for each inner axis j."""
    return tuple(1 if f[j] > j else -1 for j in range(d))


@dataclass(frozen=True, eq=False)
class EmbeddingData:
    """Inner algebra on Z^d_k sitting inside an outer algebra on Z^d'_k'.

    ``f`` is a 0-based involution of the outer axes without fixed points.
    ``orientation[j]`` is the sign e with U_{f(j)} U_j U_{f(j)}^* = exp(2 pi i e / k(j)) U_j;
    on finite axes it is read off the outer cocycle, on infinite axes it is
    taken from the argument or from the f(j) > j rule.
    """

    inner_shape: Shape
    outer_shape: Shape
    f: tuple
    sigma: Cocycle
    sigma_outer: Cocycle
    orientation: tuple | None = None

    def __post_init__(self):
        d, dp = self.inner_shape.d, self.outer_shape.d
        f = tuple(int(x) for x in self.f)
        object.__setattr__(self, "f", f)
        if dp < d:
            raise EmbeddingError("outer dimension must be at least the inner dimension")
        if sorted(f) != list(range(dp)):
            raise EmbeddingError(f"f = {f} is not a permutation of the {dp} outer axes")
        if any(f[f[j]] != j for j in range(dp)):
            raise EmbeddingError("f must be an involution")
        if any(f[j] == j for j in range(dp)):
            raise EmbeddingError("f must not have fixed points")
        if not set(range(d, dp)) <= {f[j] for j in range(d)}:
            raise EmbeddingError("every extra outer axis must be the image of an inner axis")
        for j in range(d):
            kj = self.inner_shape.entries[j]
            if self.outer_shape.entries[j] != kj or self.outer_shape.entries[f[j]] != kj:
                raise EmbeddingError(f"outer orders on axes {j} and f({j}) must equal k({j})")
        if self.sigma.shape != self.inner_shape or self.sigma_outer.shape != self.outer_shape:
            raise EmbeddingError("cocycle shapes do not match the embedding shapes")
        given = self.orientation
        rule = paper_orientation(f, d)
        orient = []
        for j in range(d):
            kj = self.inner_shape.entries[j]
            if kj == INF:
                orient.append(int(given[j]) if given is not None else rule[j])
                continue
            c = complex(self.sigma_outer.commutation(self.unit(f[j]), self.unit(j)))
            found = [e for e in (1, -1) if abs(c - np.exp(2j * np.pi * e / kj)) < 1e-9]
            if not found:
                raise EmbeddingError(
                    f"U_f({j}) does not rotate U_{j} by exp(+-2 pi i / {kj}); commutation factor {c}"
                )
            e = rule[j] if rule[j] in found else found[0]
            if given is not None and int(given[j]) not in found:
                raise EmbeddingError(f"orientation {given[j]} on axis {j} contradicts the outer cocycle")
            orient.append(int(given[j]) if given is not None else e)
        object.__setattr__(self, "orientation", tuple(orient))

    @property
    def d(self) -> int:
        return self.inner_shape.d

    @property
    def d_outer(self) -> int:
        return self.outer_shape.d

    def unit(self, axis: int) -> np.ndarray:
        e = np.zeros(self.d_outer, dtype=np.int64)
        e[axis] = 1
        return e

    def fsgn(self, j: int) -> int:
        return self.orientation[j]

    def rotation_step(self, j: int):
        """The dual point implemented by conjugation with U_{f(j)}: z_j raised to orientation[j]."""
        from .lattice import TorusPoint

        z = TorusPoint.unit_step(self.outer_shape, j)
        return z if self.orientation[j] > 0 else z.conj()

    def to_json(self) -> dict:
        return {
            "inner_shape": self.inner_shape.to_json(),
            "outer_shape": self.outer_shape.to_json(),
            "f": [x + 1 for x in self.f],
            "sigma": self.sigma.to_json(),
            "sigma_outer": self.sigma_outer.to_json(),
            "orientation": list(self.orientation),
        }


def innerify(
    shape: Shape,
    sigma_or_theta,
    beta: float | None = None,
    window: Window | None = None,
) -> EmbeddingData:
    """Generic embedding with d' = 2d, f(j) = d + j and k' = (k, k).

    The outer cocycle is sigma pulled back along the projection onto the first
    d coordinates, times a normalized cocycle c whose commutation form is
    omega_n = [[0, r], [-r, 0]] with r = diag(1/k(j)) (1/inf = 0). Then
    U_{d+j} U_j = exp(2 pi i / k(j)) U_j U_{d+j} and c is identically 1 on the
    inner block, so sigma' restricts to sigma exactly.
    """
    d = shape.d
    if isinstance(sigma_or_theta, Cocycle):
        sigma = sigma_or_theta
        if sigma.shape != shape:
            raise ShapeError("inner cocycle shape mismatch")
    else:
        sigma = normalize_from_theta(sigma_or_theta, shape, beta=beta, window=window)
    outer = shape.concat(shape)
    r = np.diag(shape.reciprocal())
    omega_n = np.block([[np.zeros((d, d)), r], [-r, np.zeros((d, d))]])
    if beta is None and len(Window.box(outer, BRANCH_RADIUS)) > _ANGLE_POINT_CAP:
        beta = GOLDEN_BETA
    c = normalize_from_theta(omega_n, outer, beta=beta)
    sigma_outer = Product((Pullback(sigma, outer), c))
    f = tuple(list(range(d, 2 * d)) + list(range(d)))
    return EmbeddingData(shape, outer, f, sigma, sigma_outer)


def verify_embedding(e: EmbeddingData, samples: int = 20, seed: int = 0, tol: float = 1e-12) -> Report:
    """Item-by-item check of the embedding conditions on generators and samples.

    * every U_{f(j)} commutes with all U_s, s != j, and rotates U_j by
      exp(2 pi i orientation[j] / k(j)) (commutes when k(j) is infinite);
    * sigma' restricted to the inner block equals sigma;
    * U_{f(j)} a U_{f(j)}^* equals the dual action of the rotation step on
      seeded elements a of the outer algebra, which also covers the bimodule
      form U_{f(j)} xi U_{f(j)}^* = v xi since both act by the same convolution.
    """
    from .algebra import AlgebraElement, convolve, dual_action, random_element

    rep = Report("embedding", tol)
    d, dp = e.d, e.d_outer
    for j in range(d):
        kj = e.inner_shape.entries[j]
        for s in range(dp):
            c = complex(e.sigma_outer.commutation(e.unit(e.f[j]), e.unit(s)))
            if s == j and kj != INF:
                target = np.exp(2j * np.pi * e.orientation[j] / kj)
            else:
                target = 1.0
            rep.record("commutation", abs(c - target))
    if e.orientation != paper_orientation(e.f, d):
        rep.notes.append(f"orientation {e.orientation} differs from the f(j) > j rule")
    rng = np.random.default_rng(seed)
    x = _sample_points(e.inner_shape, 200, rng, 5)
    y = _sample_points(e.inner_shape, 200, rng, 5)
    pad = np.zeros((200, dp - d), dtype=np.int64)
    lhs = e.sigma_outer(np.hstack([x, pad]), np.hstack([y, pad]))
    rep.record("inner_restriction", float(np.abs(lhs - e.sigma(x, y)).max()))
    for j in range(d):
        uf = AlgebraElement.delta(e.outer_shape, e.unit(e.f[j]))
        ufs = AlgebraElement.delta(e.outer_shape, -e.unit(e.f[j]))
        z = e.rotation_step(j)
        for t in range(samples):
            a = random_element(e.outer_shape, rng, support=6, radius=3)
            conj = convolve(convolve(uf, a, e.sigma_outer), ufs, e.sigma_outer)
            rep.record("conjugation", (conj - dual_action(z, a)).max_abs())
    return rep
