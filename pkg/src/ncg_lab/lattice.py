"""Finite and infinite cyclic products Z^d_k, their dual tori, and windows.

Points of Z^d_k are always stored through their canonical representative: on a
finite axis of order k the centered interval floor((1-k)/2) .. floor((k-1)/2),
on an infinite axis the integer itself. Point batches are int64 arrays of shape
(count, d); every enumeration in this package is lexicographic so that matrices
assembled from windows are reproducible bit for bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

# coordinates are packed into one sortable int64 key; |coord| < 2**_KEY_BITS-1
_KEY_BITS = 15


class ShapeError(ValueError):
    """Raised on malformed shapes or dimension mismatches."""


def _parse_entry(value) -> float | int:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        try:
            value = int(value)
        except ValueError:
            raise ShapeError(f"shape entry {value!r} is neither an integer nor 'inf'") from None
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        if not value.is_integer():
            raise ShapeError(f"shape entry {value!r} is not an integer")
        value = int(value)
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, np.integer)):
        raise ShapeError(f"shape entry {value!r} has unsupported type")
    if value < 2:
        raise ShapeError(f"finite shape entries must be >= 2, got {value}")
    return int(value)


@dataclass(frozen=True)
class Shape:
    """The order vector k of Z^d_k; entries are integers >= 2 or ``INF``."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(_parse_entry(e) for e in self.entries)
        if len(entries) == 0:
            raise ShapeError("a shape needs at least one axis")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries) -> "Shape":
        if len(entries) == 1 and isinstance(entries[0], (list, tuple)):
            entries = tuple(entries[0])
        return cls(tuple(entries))

    @property
    def d(self) -> int:
        return len(self.entries)

    def is_finite(self, axis: int | None = None) -> bool:
        if axis is None:
            return all(e != INF for e in self.entries)
        return self.entries[axis] != INF

    @property
    def finite_axes(self) -> tuple[int, ...]:
        return tuple(j for j, e in enumerate(self.entries) if e != INF)

    @property
    def infinite_axes(self) -> tuple[int, ...]:
        return tuple(j for j, e in enumerate(self.entries) if e == INF)

    def order(self) -> int:
        if not self.is_finite():
            raise ShapeError("infinite shape has no finite order")
        return int(np.prod(self.entries))

    def lower(self) -> np.ndarray:
        """Lower end of the canonical window on finite axes (0 placeholder on infinite ones)."""
        return np.array([(1 - e) // 2 if e != INF else 0 for e in self.entries], dtype=np.int64)

    def moduli(self) -> np.ndarray:
        """Axis orders with 0 standing for an infinite axis."""
        return np.array([e if e != INF else 0 for e in self.entries], dtype=np.int64)

    def reciprocal(self) -> np.ndarray:
        """1/k(j) with the convention 1/inf = 0."""
        return np.array([1.0 / e if e != INF else 0.0 for e in self.entries])

    def concat(self, other: "Shape") -> "Shape":
        return Shape(self.entries + other.entries)

    def to_json(self) -> list:
        return ["inf" if e == INF else int(e) for e in self.entries]

    @classmethod
    def from_json(cls, data: Sequence) -> "Shape":
        if not isinstance(data, (list, tuple)):
            raise ShapeError("shape must be an array")
        return cls(tuple(data))

    def __str__(self) -> str:
        return "(" + ",".join("inf" if e == INF else str(e) for e in self.entries) + ")"


def as_points(m, d: int | None = None) -> np.ndarray:
    """Coerce a point or batch of points into an int64 array of shape (count, d)."""
    arr = np.asarray(m, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ShapeError("points must be a vector or a 2-d batch")
    if d is not None and arr.shape[1] != d:
        raise ShapeError(f"dimension mismatch: expected {d} coordinates, got {arr.shape[1]}")
    return arr


def canonical_rep(m, shape: Shape) -> np.ndarray:
    """Window representative of m modulo k (identity on infinite axes).

    Accepts a single point or a batch; returns the same layout it was given.
    """
    arr = np.asarray(m, dtype=np.int64)
    single = arr.ndim == 1
    pts = as_points(arr, shape.d)
    mod = shape.moduli()
    lo = shape.lower()
    out = pts.copy()
    fin = mod > 0
    if fin.any():
        out[:, fin] = np.mod(pts[:, fin] - lo[fin], mod[fin]) + lo[fin]
    return out[0] if single else out


def pairing(m, mp, shape: Shape) -> np.ndarray | int:
    """Sum of coordinate products over the infinite axes only."""
    a = as_points(m, shape.d)
    b = as_points(mp, shape.d)
    inf = shape.moduli() == 0
    val = (a[:, inf] * b[:, inf]).sum(axis=1)
    if np.asarray(m).ndim == 1 and np.asarray(mp).ndim == 1:
        return int(val[0])
    return val


def point_keys(pts: np.ndarray) -> np.ndarray:
    """Pack points into int64 keys whose numeric order is lexicographic order."""
    pts = np.asarray(pts, dtype=np.int64)
    bias = 1 << (_KEY_BITS - 1)
    if pts.size and np.abs(pts).max() >= bias:
        raise ShapeError("coordinates too large for key packing")
    key = np.zeros(pts.shape[0], dtype=np.int64)
    for j in range(pts.shape[1]):
        key = (key << _KEY_BITS) + (pts[:, j] + bias)
    return key


def unique_points(pts: np.ndarray) -> np.ndarray:
    """Distinct points in lexicographic order."""
    pts = as_points(pts)
    _, idx = np.unique(point_keys(pts), return_index=True)
    return pts[idx]


class PointSet:
    """An ordered list of distinct lattice points with fast index lookup."""

    def __init__(self, points: np.ndarray, sort: bool = True):
        pts = as_points(points)
        keys = point_keys(pts)
        if sort:
            order = np.argsort(keys, kind="stable")
            pts, keys = pts[order], keys[order]
        if len(np.unique(keys)) != len(keys):
            raise ShapeError("PointSet points must be distinct")
        self.points = pts
        self._keys = keys
        self._sorted = sort
        if not sort:
            self._order = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[self._order]

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def index(self, pts: np.ndarray) -> np.ndarray:
        """Positions of pts in this set, -1 where absent."""
        keys = point_keys(as_points(pts, self.d))
        sk = self._keys if self._sorted else self._sorted_keys
        if len(sk) == 0:
            return np.full(len(keys), -1, dtype=np.int64)
        pos = np.clip(np.searchsorted(sk, keys), 0, len(sk) - 1)
        found = sk[pos] == keys
        if not self._sorted:
            pos = self._order[pos]
        return np.where(found, pos, -1)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return self.index(pts) >= 0


@dataclass(frozen=True)
class Window:
    """A box of lattice points, one integer interval per axis.

    On finite axes the interval is the whole canonical window; on infinite
    axes it is any nonempty interval (usually centered of some radius).
    """

    shape: Shape
    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        if len(self.lo) != self.shape.d or len(self.hi) != self.shape.d:
            raise ShapeError("window bounds do not match the shape dimension")
        for j, e in enumerate(self.shape.entries):
            if self.lo[j] > self.hi[j]:
                raise ShapeError("empty window interval")
            if e != INF and (self.lo[j], self.hi[j]) != ((1 - e) // 2, (e - 1) // 2):
                raise ShapeError(f"finite axis {j} must use its full canonical window")

    @classmethod
    def full(cls, shape: Shape) -> "Window":
        if not shape.is_finite():
            raise ShapeError("full window requires a finite shape; use Window.box")
        return cls.box(shape, 0)

    @classmethod
    def box(cls, shape: Shape, radius: int | Sequence[int]) -> "Window":
        radii = [radius] * shape.d if np.isscalar(radius) else list(radius)
        lo, hi = [], []
        for j, e in enumerate(shape.entries):
            if e == INF:
                lo.append(-int(radii[j]))
                hi.append(int(radii[j]))
            else:
                lo.append((1 - e) // 2)
                hi.append((e - 1) // 2)
        return cls(shape, tuple(lo), tuple(hi))

    def expand(self, reach: int = 1) -> "Window":
        """Grow infinite-axis intervals by ``reach`` on both sides."""
        lo = tuple(l - reach if e == INF else l for l, e in zip(self.lo, self.shape.entries))
        hi = tuple(h + reach if e == INF else h for h, e in zip(self.hi, self.shape.entries))
        return Window(self.shape, lo, hi)

    def shrink(self, margin: int = 1) -> "Window":
        return self.expand(-margin)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(h - l + 1 for l, h in zip(self.lo, self.hi))

    def __len__(self) -> int:
        return int(np.prod(self.sizes))

    def points(self) -> np.ndarray:
        axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(self.lo, self.hi)]
        grid = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grid], axis=1)

    def index(self, pts: np.ndarray) -> np.ndarray:
        """Lexicographic position of each point, -1 when outside the box."""
        pts = as_points(pts, self.shape.d)
        lo = np.array(self.lo, dtype=np.int64)
        hi = np.array(self.hi, dtype=np.int64)
        inside = np.all((pts >= lo) & (pts <= hi), axis=1)
        idx = np.zeros(pts.shape[0], dtype=np.int64)
        for j, size in enumerate(self.sizes):
            idx = idx * size + (pts[:, j] - lo[j])
        return np.where(inside, idx, -1)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return self.index(pts) >= 0

    def point_set(self) -> PointSet:
        return PointSet(self.points())

    def to_json(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}


def window_points(window_or_points) -> np.ndarray:
    if isinstance(window_or_points, Window):
        return window_or_points.points()
    if isinstance(window_or_points, PointSet):
        return window_or_points.points
    return as_points(window_or_points)


def box_points(d: int, radius: int) -> np.ndarray:
    """All integer points of {-radius..radius}^d in lexicographic order."""
    axes = [range(-radius, radius + 1)] * d
    return np.array(list(itertools.product(*axes)), dtype=np.int64).reshape(-1, d)


def _reduce_angle(t: np.ndarray) -> np.ndarray:
    """Representative of t mod 1 in (-1/2, 1/2]."""
    r = t - np.floor(t + 0.5)
    return np.where(r <= -0.5, r + 1.0, r)


@dataclass(frozen=True)
class TorusPoint:
    """A point z of the dual group, stored as angles t_j with z_j = exp(2 pi i t_j).

    The angles are the minimal lifts in (-1/2, 1/2]; on a finite axis of order
    k they are multiples of 1/k.
    """

    angles: tuple[float, ...]

    def __post_init__(self):
        t = _reduce_angle(np.asarray(self.angles, dtype=float))
        object.__setattr__(self, "angles", tuple(float(x) for x in t))

    @classmethod
    def identity(cls, d: int) -> "TorusPoint":
        return cls((0.0,) * d)

    @classmethod
    def from_steps(cls, steps: Sequence[int], shape: Shape) -> "TorusPoint":
        """z_j = exp(2 pi i p_j / k(j)); infinite axes take p_j as a plain angle numerator of 0."""
        if len(steps) != shape.d:
            raise ShapeError("step vector does not match the shape")
        angles = []
        for p, e in zip(steps, shape.entries):
            if e == INF:
                if p != 0:
                    raise ShapeError("integer steps are only meaningful on finite axes")
                angles.append(0.0)
            else:
                q = int(p) % e
                if 2 * q > e:
                    q -= e
                angles.append(q / e)
        return cls(tuple(angles))

    @classmethod
    def unit_step(cls, shape: Shape, axis: int) -> "TorusPoint":
        """The point with exp(2 pi i / k(axis)) at ``axis`` and 1 elsewhere (1 on infinite axes)."""
        steps = [0] * shape.d
        if shape.is_finite(axis):
            steps[axis] = 1
        return cls.from_steps(steps, shape)

    @property
    def d(self) -> int:
        return len(self.angles)

    def values(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.asarray(self.angles))

    def conj(self) -> "TorusPoint":
        return TorusPoint(tuple(-t for t in self.angles))

    def __mul__(self, other: "TorusPoint") -> "TorusPoint":
        if self.d != other.d:
            raise ShapeError("torus points of different dimension")
        return TorusPoint(tuple(a + b for a, b in zip(self.angles, other.angles)))

    def pad(self, d_outer: int) -> "TorusPoint":
        """Identify z in the inner torus with (z, 1, ..., 1)."""
        if d_outer < self.d:
            raise ShapeError("cannot pad to a smaller dimension")
        return TorusPoint(self.angles + (0.0,) * (d_outer - self.d))

    def is_member(self, shape: Shape, tol: float = 1e-12) -> bool:
        for t, e in zip(self.angles, shape.entries):
            if e != INF and abs(t * e - round(t * e)) > tol:
                return False
        return self.d == shape.d

    def to_json(self) -> list[float]:
        return list(self.angles)


def random_torus_point(shape: Shape, rng: np.random.Generator) -> TorusPoint:
    """Uniform sample of the dual group (Haar measure)."""
    angles = []
    for e in shape.entries:
        if e == INF:
            angles.append(float(rng.uniform(-0.5, 0.5)))
        else:
            angles.append(int(rng.integers(0, e)) / e)
    return TorusPoint(tuple(angles))


def character(z: TorusPoint, m) -> np.ndarray | complex:
    """z^m = prod_j exp(2 pi i t_j m_j) for a point or batch of points."""
    pts = as_points(m, z.d)
    phase = pts @ np.asarray(z.angles)
    # reduce before exponentiating so periodic lifts give identical values
    vals = np.exp(2j * np.pi * _reduce_angle(phase))
    return complex(vals[0]) if np.asarray(m).ndim == 1 else vals


def length(z: TorusPoint) -> float:
    return 2 * math.pi * math.sqrt(sum(t * t for t in z.angles))


def slen(z: TorusPoint) -> float:
    return 2 * math.pi * sum(abs(t) for t in z.angles)


def dil(z: TorusPoint, f: Sequence[int], d: int | None = None) -> float:
    """2 * sum_{j < d} |1 - z_{f(j)}|, with f a 0-based permutation of the outer axes.

    An inner point (fewer coordinates than f) is padded with ones first.
    """
    d = d if d is not None else len(f)
    zz = z.pad(len(f)) if z.d < len(f) else z
    vals = zz.values()
    return 2.0 * float(sum(abs(1 - vals[f[j]]) for j in range(d)))


def geometry(z: TorusPoint, f: Sequence[int] | None = None, d: int | None = None):
    """(length, slen, dil) of z; dil is None when no permutation is supplied."""
    return length(z), slen(z), (dil(z, f, d) if f is not None else None)


def iter_group(shape: Shape) -> Iterable[TorusPoint]:
    """All points of a finite dual group U^d_k, in lexicographic step order."""
    if not shape.is_finite():
        raise ShapeError("only finite dual groups can be enumerated")
    for steps in itertools.product(*[range(e) for e in shape.entries]):
        yield TorusPoint.from_steps(steps, shape)
