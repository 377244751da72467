"""Fejer kernels on the dual group and the smoothing maps they induce.

The one-axis kernel of order N has Fourier coefficients 1 - |p|/(N+1) for
|p| <= N. On a finite axis of order k the coefficients are folded onto the
canonical window and divided by the folded constant term, so the kernel keeps
unit integral; at N = k - 1 every folded coefficient is 1 and the kernel is
the point mass at the identity. A kernel on several axes is the product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement
from .lattice import INF, Shape, ShapeError, TorusPoint, Window, as_points, canonical_rep, character, point_keys

DEFAULT_GRID = 4096


def axis_coefficients(N: int, k) -> tuple[np.ndarray, np.ndarray]:
    """(frequencies, coefficients) of one folded Fejer factor."""
    if N < 0:
        raise ValueError("kernel order must be nonnegative")
    p = np.arange(-N, N + 1, dtype=np.int64)
    c = 1.0 - np.abs(p) / (N + 1.0)
    if k == INF:
        return p, c
    lo = (1 - k) // 2
    q = np.mod(p - lo, k) + lo
    freqs = np.arange(lo, lo + k, dtype=np.int64)
    folded = np.zeros(k)
    np.add.at(folded, q - lo, c)
    folded /= folded[-lo]
    keep = folded != 0
    return freqs[keep], folded[keep]


@dataclass(frozen=True, eq=False)
class Kernel:
    """Product Fejer kernel f(z) = sum_p fhat(p) z^p on the dual of ``shape``."""

    shape: Shape
    orders: tuple

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if len(orders) != self.shape.d:
            raise ShapeError("one order per axis is required")
        object.__setattr__(self, "orders", orders)
        factors = tuple(axis_coefficients(n, k) for n, k in zip(orders, self.shape.entries))
        object.__setattr__(self, "factors", factors)
        grids = np.meshgrid(*[fr for fr, _ in factors], indexing="ij")
        vals = np.meshgrid(*[c for _, c in factors], indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        coeff = np.prod(np.stack([v.ravel() for v in vals], axis=1), axis=1)
        order = np.argsort(point_keys(pts), kind="stable")
        object.__setattr__(self, "points", pts[order])
        object.__setattr__(self, "coeffs", coeff[order])
        object.__setattr__(self, "_keys", point_keys(pts[order]))

    @classmethod
    def uniform(cls, shape: Shape, N: int) -> "Kernel":
        return cls(shape, (N,) * shape.d)

    def fhat(self, m) -> np.ndarray:
        """Fourier coefficients at a batch of points (zero off the support)."""
        pts = canonical_rep(as_points(m, self.shape.d), self.shape)
        keys = point_keys(pts)
        pos = np.clip(np.searchsorted(self._keys, keys), 0, len(self._keys) - 1)
        hit = self._keys[pos] == keys
        return np.where(hit, self.coeffs[pos], 0.0)

    def __call__(self, z: TorusPoint) -> float:
        return float(np.real(np.sum(self.coeffs * character(z, self.points))))

    def evaluate(self, angles: np.ndarray) -> np.ndarray:
        """f at a batch of angle vectors of shape (count, d)."""
        t = np.atleast_2d(np.asarray(angles, dtype=float))
        out = np.ones(t.shape[0])
        for j, (fr, c) in enumerate(self.factors):
            out = out * (np.cos(2 * np.pi * np.outer(t[:, j], fr)) @ c)
        return out

    def integral(self) -> float:
        return float(self.fhat(np.zeros(self.shape.d, np.int64))[0])

    def to_json(self) -> dict:
        return {"orders": list(self.orders), "shape": self.shape.to_json()}


def fejer_kernel(orders: Sequence[int] | int, shape: Shape) -> Kernel:
    if np.isscalar(orders):
        return Kernel.uniform(shape, int(orders))
    return Kernel(shape, tuple(orders))


def _multiplier(kernel: Kernel, points: np.ndarray) -> np.ndarray:
    """fhat(-m) for points of the kernel shape or of a leading sub-shape."""
    d = kernel.shape.d
    pts = as_points(points)
    if pts.shape[1] > d:
        raise ShapeError("kernel has fewer axes than the element")
    if pts.shape[1] < d:
        pts = np.hstack([pts, np.zeros((len(pts), d - pts.shape[1]), np.int64)])
    return kernel.fhat(-pts)


def smooth_element(kernel: Kernel, a: AlgebraElement) -> AlgebraElement:
    """Integral of f(z) alpha^z(a): the multiplier a(m) -> fhat(-m) a(m).

    An element on fewer axes (the inner algebra) sees the kernel with the
    remaining coordinates of z integrated out, i.e. fhat(-m, 0).
    """
    if a.shape.entries != kernel.shape.entries[: a.shape.d]:
        raise ShapeError("element shape does not match the kernel axes")
    if len(a) == 0:
        return a
    return AlgebraElement(a.shape, a.points, a.coeffs * _multiplier(kernel, a.points))


def smooth_vector(kernel: Kernel, xi):
    """V^f xi: xi(m) -> fhat(-m) xi(m) on a spinor field."""
    from .dirac import SpinorField

    mult = _multiplier(kernel, xi.points.points)
    return SpinorField(xi.points, xi.values * mult[:, None])


def direct_average(kernel: Kernel, a: AlgebraElement) -> AlgebraElement:
    """(1/|G|) sum_z f(z) alpha^z(a) over a finite dual group, by brute force."""
    from .algebra import dual_action
    from .lattice import iter_group

    if not kernel.shape.is_finite():
        raise ShapeError("direct averaging needs a finite group")
    total = AlgebraElement.zero(a.shape)
    order = kernel.shape.order()
    for z in iter_group(kernel.shape):
        total = total + dual_action(z, a) * (kernel(z) / order)
    return total


# ---------------------------------------------------------------------------
# budgets


def _axis_moment(freqs: np.ndarray, coeffs: np.ndarray, k, weight, grid: int) -> tuple[float, float]:
    """Integral of (one-axis kernel) * weight(t) over the circle, with a doubling diagnostic.

    Finite axes: exact average over the k-th roots of unity (diagnostic 0).
    Infinite axes: midpoint rule on [0, 1/2] (the integrand is even), at
    ``grid`` and ``grid/2`` nodes; the difference is the diagnostic.
    """
    if k != INF:
        t = (np.arange(k) + (1 - k) // 2) / k
        vals = np.cos(2 * np.pi * np.outer(t, freqs)) @ coeffs
        return float(np.mean(vals * weight(t))), 0.0

    def rule(nodes):
        t = (np.arange(nodes) + 0.5) / (2 * nodes)
        vals = np.cos(2 * np.pi * np.outer(t, freqs)) @ coeffs
        return float(np.mean(vals * weight(t)))

    fine, coarse = rule(grid), rule(max(grid // 2, 1))
    return fine, abs(fine - coarse)


def _abs_angle(t):
    return 2 * np.pi * np.abs(t)


def _chord(t):
    return np.abs(1 - np.exp(2j * np.pi * t))


@dataclass(frozen=True)
class Budget:
    slen: float
    dil: float
    diagnostic: float

    def approximation_eps(self) -> float:
        """Bound factor for ||a - alpha^f(a)|| <= eps L(a) (twice the slen integral)."""
        return 2.0 * self.slen


def kernel_budget(kernel: Kernel, f: Sequence[int] | None = None, d: int | None = None,
                  grid: int = DEFAULT_GRID) -> Budget:
    """(integral of f * slen, integral of f * dil) for a product kernel.

    slen is additive over axes and dil = 2 sum_{j<d} |1 - z_{f(j)}|, so both
    integrals split into one-axis moments times unit integrals of the other
    factors. ``f`` is the 0-based permutation; without it the dil part is 0.
    """
    moments_s, moments_c, diag = [], [], 0.0
    for (fr, c), k in zip(kernel.factors, kernel.shape.entries):
        ms, ds = _axis_moment(fr, c, k, _abs_angle, grid)
        mc, dc = _axis_moment(fr, c, k, _chord, grid)
        moments_s.append(ms)
        moments_c.append(mc)
        diag = max(diag, ds, dc)
    i_slen = float(sum(moments_s))
    i_dil = 0.0
    if f is not None:
        dd = len(f) if d is None else d
        i_dil = 2.0 * float(sum(moments_c[f[j]] for j in range(dd)))
    return Budget(i_slen, i_dil, diag)


def fejer_abs_moment(N: int) -> float:
    """Closed form of the integral of F_N(t) * 2 pi |t| over [-1/2, 1/2]."""
    total = 0.25
    for p in range(1, N + 1):
        c = 1.0 - p / (N + 1.0)
        total += 2 * c * ((-1) ** p - 1) / (2 * np.pi ** 2 * p ** 2)
    return 2 * np.pi * total


def fejer_chord_moment(N: int) -> float:
    """Closed form of the integral of F_N(t) * |1 - exp(2 pi i t)|."""
    total = 4 / np.pi
    for p in range(1, N + 1):
        c = 1.0 - p / (N + 1.0)
        total += 2 * c * 4 / (np.pi * (1 - 4 * p * p))
    return total


def kernel_for_budget(eps: float, shape: Shape, f: Sequence[int] | None = None, d: int | None = None,
                      grid: int = DEFAULT_GRID, max_order: int = 100000) -> tuple[Kernel, Budget]:
    """Smallest uniform order N with 2 * I_slen <= eps and I_dil <= eps."""
    cap = max_order
    if shape.is_finite():
        cap = min(cap, max(shape.entries) - 1)
    for N in range(0, cap + 1):
        kern = Kernel.uniform(shape, N)
        bud = kernel_budget(kern, f, d, grid)
        if 2 * bud.slen <= eps and bud.dil <= eps:
            return kern, bud
    raise ValueError(f"no kernel of order <= {cap} meets budget {eps}")


def dn_budget(budget: Budget, n_gammas: int) -> float:
    """Factor c with DN(V^f xi) <= (1 + c) DN(xi): each Gamma contributes 2 * I_dil."""
    return 2.0 * n_gammas * budget.dil
