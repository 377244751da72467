"""Convergence experiments along sequences of spectral triples.

A sequence is indexed by n in a grid of integers plus the limit n = inf. The
finite members live on full finite groups; the limit lives on Z^d' and is
only ever applied to finitely supported vectors, so every gap below compares
two exact finite matrices.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .algebra import (
    AlgebraElement,
    OperatorWindow,
    _as_point_set,
    _union,
    adjoint,
    derive,
    dual_action,
    pad_rows,
    random_element,
    represent,
    trace,
)
from .approx import Kernel, smooth_element, smooth_vector
from .cocycle import (
    GOLDEN_BETA,
    EmbeddingData,
    innerify,
    normalize_from_theta,
    trivial,
)
from .dirac import (
    SpinorField,
    TripleConfig,
    apply_dirac,
    assemble_dirac,
    build_gamma_op,
    graph_norm,
    random_spinor,
    seminorm,
)
from .lattice import (
    INF,
    PointSet,
    Shape,
    ShapeError,
    TorusPoint,
    Window,
    box_points,
    canonical_rep,
    character,
    dil,
    random_torus_point,
    slen,
)
from .report import Report

FAMILIES = ("clock-shift", "theta-sequence", "custom")


class GridError(ValueError):
    """A requested window does not fit in the finite group."""


# ---------------------------------------------------------------------------
# presets


def clock_shift_config(n, beta: float = GOLDEN_BETA, radius: int = 8) -> TripleConfig:
    """d = d' = 2, f swaps the axes, U_1 U_2 = exp(2 pi i / n) U_2 U_1.

    n = inf gives the commutative limit with trivial cocycle, carrying the
    same orientation (-1, +1) as the finite members.
    """
    if n == INF:
        shape = Shape.of(INF, INF)
        sig = trivial(shape)
        emb = EmbeddingData(shape, shape, (1, 0), sig, sig, orientation=(-1, 1))
        return TripleConfig(emb, radius=radius)
    n = int(n)
    shape = Shape.of(n, n)
    theta = np.array([[0.0, -1.0 / n], [1.0 / n, 0.0]])
    sig = normalize_from_theta(theta, shape, beta=beta)
    emb = EmbeddingData(shape, shape, (1, 0), sig, sig)
    return TripleConfig(emb, radius=radius)


def round_theta(theta_inf: np.ndarray, n) -> np.ndarray:
    """theta_n = round(n theta) / n, which descends to (Z_n)^d."""
    th = np.asarray(theta_inf, dtype=float)
    if n == INF:
        return th
    return np.round(th * n) / n


def theta_sequence_config(theta_inf, n, beta: float = GOLDEN_BETA, radius: int = 8) -> TripleConfig:
    """Generic embedding (d' = 2d) of the rational approximant theta_n on (Z_n)^d."""
    th = np.asarray(theta_inf, dtype=float)
    d = th.shape[0]
    shape = Shape.of(*([INF if n == INF else int(n)] * d))
    emb = innerify(shape, round_theta(th, n), beta=beta)
    return TripleConfig(emb, radius=radius)


@dataclass
class SequenceSpec:
    """A family of triples indexed by n (integers, plus the limit)."""

    family: str
    n_grid: tuple = (8, 16, 32, 64)
    theta_inf: np.ndarray | None = None
    beta: float = GOLDEN_BETA
    radius: int = 8
    custom: Callable | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        grid = tuple(int(n) for n in self.n_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("n grid must be strictly increasing")
        self.n_grid = grid
        if self.family == "theta-sequence" and self.theta_inf is None:
            raise ValueError("theta-sequence needs theta_inf")
        if self.family == "custom" and self.custom is None:
            raise ValueError("custom family needs a config factory")

    def config(self, n) -> TripleConfig:
        if self.family == "clock-shift":
            return clock_shift_config(n, self.beta, self.radius)
        if self.family == "theta-sequence":
            return theta_sequence_config(self.theta_inf, n, self.beta, self.radius)
        return self.custom(n)

    def limit(self) -> TripleConfig:
        return self.config(INF)


# ---------------------------------------------------------------------------
# embeddings rho_n


def canonical_window(shape: Shape) -> Window:
    return Window.full(shape)


def embed_field(xi: SpinorField, to_shape: Shape) -> SpinorField:
    """rho_n: a field on the canonical window of a finite group read on Z^d'."""
    return SpinorField(PointSet(xi.points.points), xi.values)


def restrict_field(xi: SpinorField, from_shape: Shape) -> SpinorField:
    """rho_n^*: keep the values at points of the canonical window of ``from_shape``.

    The result lives on the full finite group of ``from_shape``.
    """
    win = Window.full(from_shape)
    idx = win.index(xi.points.points)
    vals = np.zeros((len(win), xi.s), complex)
    keep = idx >= 0
    vals[idx[keep]] = xi.values[keep]
    return SpinorField(win.point_set(), vals)


def embed_restrict(xi: SpinorField, from_shape: Shape, to_shape: Shape) -> SpinorField:
    """rho (finite to infinite) or rho^* (infinite to finite), chosen by the shapes."""
    if from_shape.is_finite() and not to_shape.is_finite():
        return embed_field(xi, to_shape)
    if to_shape.is_finite() and not from_shape.is_finite():
        return restrict_field(xi, to_shape)
    raise ShapeError("embed_restrict maps between a finite shape and its infinite limit")


def _fits(F: Window | np.ndarray, shape: Shape) -> bool:
    pts = F.points() if isinstance(F, Window) else F
    return bool(np.array_equal(canonical_rep(pts, shape), pts))


def _box(shape_inf: Shape, F) -> Window:
    if isinstance(F, Window):
        return F
    return Window.box(shape_inf, int(F))


def _difference(A: OperatorWindow, B: OperatorWindow) -> np.ndarray:
    """Dense A - B over the union of their codomains (same domain points)."""
    cod = _union(A.codomain, B.codomain)
    return (pad_rows(A, cod) - pad_rows(B, cod)).toarray()


def _norm2(m: np.ndarray) -> float:
    return float(scipy.linalg.svdvals(m)[0]) if m.size else 0.0


def gamma_gap(seq: SequenceSpec, n: int, J: int, F=2) -> float:
    """|| rho Gamma_{n,J} rho^* - Gamma_{inf,J} || on l^2(F), computed exactly.

    F is a box (radius or Window) of the limit shape and must fit in the
    canonical window of the finite group.
    """
    cn, ci = seq.config(n), seq.limit()
    Fw = _box(ci.shape, F)
    if not _fits(Fw, cn.shape):
        raise GridError(f"window F does not fit in the canonical window of n={n}")
    pts = Fw.points()
    A = build_gamma_op(cn, J, pts, codomain=_auto_gamma_image(cn, pts))
    B = build_gamma_op(ci, J, pts, codomain=Fw.expand(1))
    return _norm2(_difference(A, B))


@dataclass
class DiracGap:
    gap: float
    graph_norm_discrepancy: float
    gamma_gaps: list


def dirac_gap(seq: SequenceSpec, n: int, F=2, probes: int = 8, seed: int = 0) -> DiracGap:
    """Spinor-level gap || rho D_n rho^* - D_inf || on l^2(F) (x) C^s.

    Also returns the largest |DN_n(rho^* xi) - DN_inf(xi)| seen over the top
    singular vector and ``probes`` seeded unit vectors; it never exceeds the gap.
    """
    cn, ci = seq.config(n), seq.limit()
    Fw = _box(ci.shape, F)
    if not _fits(Fw, cn.shape):
        raise GridError(f"window F does not fit in the canonical window of n={n}")
    pts = Fw.points()
    A = assemble_dirac(cn, pts, codomain=_auto_gamma_image(cn, pts))
    B = assemble_dirac(ci, pts, codomain=Fw.expand(1))
    cod = _union(A.codomain, B.codomain)
    Am, Bm = pad_rows(A, cod).toarray(), pad_rows(B, cod).toarray()
    diff = Am - Bm
    u, sv, vh = np.linalg.svd(diff)
    gap = float(sv[0]) if sv.size else 0.0
    rng = np.random.default_rng(seed)
    vecs = [vh[0].conj()] if sv.size else []
    for _ in range(probes):
        v = rng.normal(size=diff.shape[1]) + 1j * rng.normal(size=diff.shape[1])
        vecs.append(v / np.linalg.norm(v))
    disc = max((abs(np.linalg.norm(Am @ v) - np.linalg.norm(Bm @ v)) for v in vecs), default=0.0)
    gg = [gamma_gap(seq, n, J, Fw) for J in range(cn.n_gammas)]
    return DiracGap(gap, float(disc), gg)


def _auto_gamma_image(cfg: TripleConfig, pts: np.ndarray) -> PointSet:
    from .dirac import _exact_image

    return _exact_image(cfg, PointSet(pts))


# ---------------------------------------------------------------------------
# seminorm continuity


def transfer(a: AlgebraElement, shape: Shape) -> AlgebraElement | None:
    """a composed with the inverse of q_n: the same coordinates on another shape.

    Returns None when the support does not fit in the canonical window.
    """
    if a.shape.d != shape.d:
        raise ShapeError("dimension mismatch")
    if not _fits(a.points, shape):
        return None
    return AlgebraElement(shape, a.points, a.coeffs)


def limit_seminorm(a: AlgebraElement, seq: SequenceSpec, radii: Sequence[int] = (8, 16, 24)) -> dict:
    """Windowed L_inf over growing boxes; values increase towards the limit."""
    ci = seq.limit()
    b = transfer(a, ci.embedding.inner_shape)
    vals = [seminorm(b, ci, radius=r).value for r in radii]
    stab = abs(vals[-1] - vals[-2]) / max(vals[-1], 1e-300) if len(vals) > 1 else math.inf
    return {"radii": list(radii), "values": vals, "value": vals[-1], "stability": stab}


@dataclass
class SeminormTrace:
    rows: list  # (n, L_n or None)
    limit: float
    limit_detail: dict
    final_rel_gap: float

    def csv_rows(self):
        out = []
        for n, val in self.rows:
            if val is None:
                out.append((n, "skipped", "skipped"))
            else:
                rel = abs(val - self.limit) / self.limit if self.limit > 0 else abs(val)
                out.append((n, val, rel))
        return out


def seminorm_trace(a: AlgebraElement, seq: SequenceSpec, n_grid: Sequence[int] | None = None,
                   limit_value: float | None = None, radii: Sequence[int] = (8, 16, 24)) -> SeminormTrace:
    """L_n of a along the grid, the limit estimate, and the final relative gap.

    ``limit_value`` overrides the windowed limit estimate (for example by a
    closed form); otherwise the largest-box windowed value is used.
    """
    grid = seq.n_grid if n_grid is None else tuple(n_grid)
    rows = []
    for n in grid:
        cn = seq.config(n)
        b = transfer(a, cn.embedding.inner_shape)
        rows.append((n, None if b is None else seminorm(b, cn).value))
    detail = {} if limit_value is not None else limit_seminorm(a, seq, radii)
    lim = float(limit_value) if limit_value is not None else detail["value"]
    last = [v for _, v in rows if v is not None]
    if not last:
        rel = math.inf
    else:
        rel = abs(last[-1] - lim) / lim if lim > 0 else abs(last[-1])
    return SeminormTrace(rows, lim, detail, rel)


# ---------------------------------------------------------------------------
# inequality suite


def inner_norm(a: AlgebraElement, cfg: TripleConfig) -> float:
    """||pi(a)|| in the inner algebra on its full group (or windowed)."""
    from .algebra import element_norm

    inner = cfg.embedding.inner_shape
    b = a if a.shape == inner else a.restrict(inner)
    if inner.is_finite():
        return element_norm(b, cfg.embedding.sigma)
    return element_norm(b, cfg.embedding.sigma, Window.box(inner, cfg.radius))


def dual_vector(z: TorusPoint, xi: SpinorField) -> SpinorField:
    """v^z xi: xi(m) -> z^m xi(m)."""
    return SpinorField(xi.points, xi.values * character(z, xi.points.points)[:, None])


def _unit_step_inner(cfg: TripleConfig, j: int) -> TorusPoint:
    return TorusPoint.unit_step(cfg.embedding.inner_shape, j)


def inequality_suite(cfg: TripleConfig, samples: int = 100, seed: int = 0, slack: float = 1e-9,
                     l_scale: float = 1.0, support: int = 4, radius: int = 2) -> Report:
    """Seeded check of the mean-value, dilation, Hilbert mean-value and derivation bounds.

    Every inequality LHS <= RHS passes when LHS <= RHS (1 + slack). The margin
    (RHS - LHS) / RHS of the tightest case is kept per inequality.
    ``l_scale`` multiplies every seminorm value (fault injection).
    """
    rep = Report("inequalities", 0.0)
    rng = np.random.default_rng(seed)
    inner = cfg.embedding.inner_shape
    f = cfg.embedding.f
    d = cfg.d
    one = AlgebraElement.one(inner)
    L1 = seminorm(one, cfg).value
    rep.flag("L_one_zero", L1 == 0.0)
    rep.data["L_one"] = L1
    margins: dict[str, float] = {}
    violations: dict[str, list] = {}

    def check(name, lhs, rhs):
        ok = lhs <= rhs * (1 + slack)
        rep.flag(name, ok)
        if not ok:
            violations.setdefault(name, []).append({"sample": t, "lhs": float(lhs), "rhs": float(rhs)})
        if rhs > 0:
            margins[name] = min(margins.get(name, math.inf), (rhs - lhs) / rhs)
        elif lhs > 0:
            margins[name] = -math.inf

    window = None if cfg.finite else cfg.window()
    for t in range(samples):
        a = random_element(inner, rng, support=support, radius=radius, self_adjoint=True)
        z = random_torus_point(cfg.shape, rng)
        xi = random_spinor(cfg, rng, None if cfg.finite else cfg.window().shrink(cfg.margin))
        La = seminorm(a, cfg, check=False).value * l_scale
        az = dual_action(z, a)
        Laz = seminorm(az, cfg, check=False).value * l_scale
        sl = slen(z)
        dz = dil(z, f, d)
        check("mvt", inner_norm(a - az, cfg), 2 * sl * La)
        check("dilation", abs(La - Laz), dz * La)
        dn = graph_norm(xi, cfg, window)
        check("hilbert_mvt", float(np.linalg.norm(xi.values - dual_vector(z, xi).values)), 2 * sl * dn)
        for j in range(d):
            k = inner.entries[j]
            if k == INF:
                lhs = inner_norm(derive(j, a), cfg)
            else:
                step = _unit_step_inner(cfg, j)
                lhs = inner_norm((dual_action(step, a) - a) * (k / (2 * math.pi)), cfg)
            check("derivation", lhs, 2 * La)
    rep.data["margins"] = {k: margins[k] for k in sorted(margins)}
    rep.data["violations"] = {k: violations[k] for k in sorted(violations)}
    rep.data["samples"] = samples
    return rep


# ---------------------------------------------------------------------------
# dynamics


def unitary_gap(A: np.ndarray, B: np.ndarray, t: float, columns: np.ndarray | None = None) -> float:
    """|| (exp(itA) - exp(itB)) P || via Hermitian eigendecompositions."""
    ua = _expi(A, t)
    ub = _expi(B, t)
    diff = ua - ub
    if columns is not None:
        diff = diff[:, columns]
    return _norm2(diff)


def _expi(H: np.ndarray, t: float) -> np.ndarray:
    if t == 0:
        return np.eye(H.shape[0], dtype=complex)
    # the divide-and-conquer driver keeps eigenvectors orthonormal on the
    # heavily degenerate Dirac spectra, where the default driver drifts to 1e-12
    w, v = scipy.linalg.eigh(H, driver="evd")
    return (v * np.exp(1j * t * w)) @ v.conj().T


def _spin_columns(idx: np.ndarray, s: int) -> np.ndarray:
    return (idx[:, None] * s + np.arange(s)[None, :]).ravel()


@dataclass
class DynamicsRow:
    n: int
    t: float
    gap: float
    bound: float
    truncation: float


def dynamics_gap(seq: SequenceSpec, n: int, F=2, t_grid: Sequence[float] = (0.1, 0.5, 1.0),
                 W: int = 3, W_big: int | None = None) -> list[DynamicsRow]:
    """exp(itA) - exp(itB) on vectors supported in F, against |t| ||A - B||.

    A and B are the compressions of rho D_n rho^* and D_inf to the common box W.
    The truncation column compares exp(itB) on W with exp(itB') on a larger box
    W_big (default 2W), restricted to F and read in W.
    """
    cn, ci = seq.config(n), seq.limit()
    Ww = Window.box(ci.shape, W)
    if not _fits(Ww, cn.shape):
        raise GridError(f"window W does not fit in the canonical window of n={n}")
    Fw = _box(ci.shape, F)
    pts = Ww.points()
    A = assemble_dirac(cn, pts, codomain=PointSet(pts), mode="compress").dense()
    B = assemble_dirac(ci, Ww, codomain=Ww, mode="compress").dense()
    s = cn.s
    cols = _spin_columns(Ww.index(Fw.points()), s)
    if np.any(cols < 0):
        raise GridError("F must lie inside W")
    bound_norm = _norm2(A - B)
    big = Window.box(ci.shape, W_big if W_big is not None else 2 * W)
    Bb = assemble_dirac(ci, big, codomain=big, mode="compress").dense()
    rows_in_big = _spin_columns(big.index(pts), s)
    cols_big = _spin_columns(big.index(Fw.points()), s)
    out = []
    for t in t_grid:
        gap = unitary_gap(A, B, t, cols)
        trunc = _norm2((_expi(B, t)[:, cols]) - _expi(Bb, t)[np.ix_(rows_in_big, cols_big)])
        out.append(DynamicsRow(n, float(t), gap, abs(t) * bound_norm, trunc))
    return out


# ---------------------------------------------------------------------------
# states and the Monge-Kantorovich estimator


@dataclass(frozen=True, eq=False)
class State:
    """Density matrix on l^2 of the inner group; phi(a) = Tr(rho pi(a))."""

    shape: Shape
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        n = self.shape.order()
        if rho.shape != (n, n):
            raise ShapeError("density matrix must cover the full group")
        if abs(np.trace(rho) - 1) > 1e-12:
            raise ValueError("density matrix must have unit trace")
        if np.abs(rho - rho.conj().T).max() > 1e-12 or np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("density matrix must be positive semidefinite")
        object.__setattr__(self, "rho", rho)

    def __call__(self, a: AlgebraElement, sigma) -> complex:
        A = represent(a, sigma).dense()
        return complex(np.sum(self.rho.T * A))


def canonical_trace_state(cfg: TripleConfig) -> State:
    inner = cfg.embedding.inner_shape
    if not inner.is_finite():
        raise ShapeError("the trace state needs a finite group")
    n = inner.order()
    return State(inner, np.eye(n) / n)


def vector_state(shape: Shape, vec: np.ndarray) -> State:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return State(shape, np.outer(v, v.conj()))


def axis_state(cfg: TripleConfig, axis: int) -> State:
    """Pure state of the unit vector spread evenly along one axis through 0."""
    inner = cfg.embedding.inner_shape
    win = Window.full(inner)
    pts = win.points()
    others = [j for j in range(inner.d) if j != axis]
    mask = np.all(pts[:, others] == 0, axis=1)
    return vector_state(inner, mask.astype(float))


def _search_basis(inner: Shape, radius: int) -> list[AlgebraElement]:
    """Re and Im parts of W^m for one m out of each pair {m, -m}, m != 0."""
    pts = Window.box(inner, radius).points()
    seen, basis = set(), []
    for p in pts:
        key = tuple(canonical_rep(p, inner).tolist())
        neg = tuple(canonical_rep(-p, inner).tolist())
        if key == tuple([0] * inner.d) or key in seen or neg in seen:
            continue
        seen.add(key)
        basis.append(AlgebraElement.re_delta(inner, p))
        if neg != key:
            basis.append(AlgebraElement.im_delta(inner, p))
    return basis


@dataclass
class MKResult:
    value: float
    witness: AlgebraElement
    witness_L: float
    evaluations: int

    @property
    def support_size(self) -> int:
        return len(self.witness)


def mk_lower_bound(phi: State, psi: State, cfg: TripleConfig, budget: int = 200, seed: int = 0,
                   radius: int = 2, steps: Sequence[float] = (1.0, 0.5, 0.25, -0.25, -0.5, -1.0)) -> MKResult:
    """Certified lower bound for sup{|phi(a) - psi(a)| : L(a) <= 1}.

    Candidates are self-adjoint, trace-free combinations of the Re/Im basis;
    each is scored by |phi(a) - psi(a)| / L(a). The search is a fixed seeded
    sequence of seminorm evaluations (single basis elements in random order,
    then coordinate moves a + t b), so a larger budget only extends it and the
    result is nondecreasing in the budget. The witness is rescaled to L = 1 and
    its seminorm re-verified.
    """
    inner = cfg.embedding.inner_shape
    if phi.shape != inner or psi.shape != inner:
        raise ShapeError("states must live on the inner group of the configuration")
    sigma = cfg.embedding.sigma
    rng = np.random.default_rng(seed)
    basis = _search_basis(inner, radius)
    order = rng.permutation(len(basis))
    diff_rho = phi.rho - psi.rho

    def delta(a):
        return abs(complex(np.sum(diff_rho.T * represent(a, sigma).dense())))

    evals = 0
    best_val, best = 0.0, None
    if np.abs(diff_rho).max() == 0:
        zero = AlgebraElement.zero(inner)
        return MKResult(0.0, zero, 0.0, 0)

    def score(a):
        nonlocal evals
        evals += 1
        La = seminorm(a, cfg, check=False).value
        if La < 1e-12:
            return 0.0, La
        return delta(a) / La, La

    for i in order:
        if evals >= budget:
            break
        val, _ = score(basis[i])
        if val > best_val:
            best_val, best = val, basis[i]
    while evals < budget and best is not None:
        improved = False
        for i in order:
            for t in steps:
                if evals >= budget:
                    break
                cand = best + basis[i] * t
                val, _ = score(cand)
                if val > best_val * (1 + 1e-12):
                    best_val, best, improved = val, cand, True
            if evals >= budget:
                break
        if not improved:
            steps = tuple(s / 2 for s in steps)
            if max(abs(s) for s in steps) < 1e-6:
                break
    if best is None:
        return MKResult(0.0, AlgebraElement.zero(inner), 0.0, evals)
    Lb = seminorm(best, cfg, check=False).value
    witness = best / Lb
    Lw = seminorm(witness, cfg, check=False).value
    if Lw > 1 + 1e-8:
        raise ArithmeticError(f"witness seminorm {Lw} exceeds 1")
    return MKResult(delta(witness), witness, Lw, evals)


# ---------------------------------------------------------------------------
# scan helpers


def convergence_scan(seq: SequenceSpec, F=2, n_grid: Sequence[int] | None = None, jobs: int = 1) -> dict:
    """gamma_gap(n, J) for every J and dirac_gap(n) along the grid."""
    grid = seq.n_grid if n_grid is None else tuple(n_grid)
    results = parallel_map(_scan_task, [(seq, n, F) for n in grid], jobs)
    rows, dgaps = [], []
    for n, dg in zip(grid, results):
        for J, g in enumerate(dg.gamma_gaps):
            rows.append((n, J + 1, g))
        dgaps.append((n, dg.gap, dg.graph_norm_discrepancy))
    return {"gamma": rows, "dirac": dgaps}


def _scan_task(args):
    seq, n, F = args
    return dirac_gap(seq, n, F)


def parallel_map(fn, items: list, jobs: int = 1) -> list:
    """Order-preserving map, optionally over a process pool."""
    if jobs is None or jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("NCG_LAB_JOBS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# full structural check of one finite configuration


def verify_config(cfg: TripleConfig, samples: int = 20, seed: int = 0, tol: float = 1e-12,
                  inequality_samples: int = 20) -> Report:
    """Cocycle, embedding, Clifford and Dirac structure plus the inequality suite."""
    from .clifford import verify_clifford
    from .cocycle import verify_cocycle, verify_embedding
    from .dirac import anticommutation_violation, gradient_operator

    if not cfg.finite:
        raise ShapeError("verify needs a finite configuration")
    rep = Report("verify", tol)
    rep.merge(verify_cocycle(cfg.embedding.sigma, seed=seed, tol=tol), "cocycle")
    rep.merge(verify_embedding(cfg.embedding, samples=samples, seed=seed, tol=tol), "embedding")
    rep.merge(verify_clifford(cfg.clifford), "clifford")
    D = assemble_dirac(cfg)
    Dm = D.dense()
    scale = max(np.abs(Dm).max(), 1.0)
    rep.record("dirac.hermitian", np.abs(Dm - Dm.conj().T).max() / scale)
    for J in range(cfg.n_gammas):
        rep.record("dirac.anticommutation", anticommutation_violation(cfg, J, D))
    rng = np.random.default_rng(seed)
    inner = cfg.embedding.inner_shape
    eye = np.eye(cfg.s)
    for _ in range(samples):
        a = random_element(inner, rng, support=4, radius=2, self_adjoint=True)
        A = represent(a.embed(cfg.shape), cfg.sigma).tensor(eye).dense()
        G = gradient_operator(a, cfg).dense()
        rep.record("dirac.gradient", np.abs(G - (Dm @ A - A @ Dm)).max())
    ineq = inequality_suite(cfg, samples=inequality_samples, seed=seed)
    for k, v in ineq.flags.items():
        rep.flag("inequalities." + k, v)
    rep.data["margins"] = ineq.data["margins"]
    return rep
