"""Signature partitions of the eta-line and exact Morse-type integrals.

The pencil determinant p(eta) = det(R - 2*eta*L) changes signature only at
its real roots, so the eta-line splits into cells of constant signature.
On each cell |p| integrates in closed form (polynomial antiderivative with
one sign per cell), giving the Morse-inequality right-hand sides without
quadrature error.  Divergence over unbounded cells is reported as a value,
not an exception: the weak bounds of the truncated theory always exist,
while the untruncated ones need the signature condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import CurvaturePoint, density_diagonal, y_condition
from .errors import (
    DegreeOutOfRange,
    DivergentIntegral,
    EmptyDescriptor,
    IdenticallyDegeneratePencil,
    MixedDimension,
    ZeroPolynomial,
)
from .hermitian import eig_hermitian, pencil_det_poly, pencil_real_roots


class _DivergentType:
    """Singleton marker for an infinite Morse integral."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Divergent"

    def __reduce__(self):
        return (_DivergentType, ())


Divergent = _DivergentType()


@dataclass(frozen=True)
class Cell:
    """Open interval of constant pencil signature; lo/hi may be infinite."""

    lo: float
    hi: float
    negatives: int
    positives: int
    zeros: int

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)


@dataclass(frozen=True)
class EtaPartition:
    breakpoints: tuple
    cells: tuple


@dataclass(frozen=True)
class ManifoldDescriptor:
    """A weighted point cloud standing in for integration over the manifold."""

    name: str
    points: tuple
    q_max: int | None = None

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise EmptyDescriptor("descriptor has no points")
        dims = {p.n for p in pts}
        if len(dims) != 1:
            raise MixedDimension(f"points of mixed dimension {sorted(dims)}")

    @property
    def n(self) -> int:
        return self.points[0].n


@dataclass(frozen=True)
class MorseReport:
    """Weak bounds, alternating strong sums, and per-degree feasibility.

    per_j_weak[j] is nan when some point's integral diverges at degree j;
    strong_partial_sums[m] is nan when any j <= m is infeasible for the
    strong inequality (divergent, or, without a truncation, the signature
    condition failing at some point).
    """

    per_j_weak: tuple
    strong_partial_sums: tuple
    delta: float | None
    feasibility: tuple


def _signature_at(R: np.ndarray, L: np.ndarray, eta: float):
    M = R - 2.0 * eta * L
    mu = eig_hermitian(M).eigenvalues
    dead = 1e-10 * float(np.linalg.norm(M))
    neg = int(np.sum(mu < -dead))
    pos = int(np.sum(mu > dead))
    return neg, pos, len(mu) - neg - pos


def rx_partition(R, L) -> EtaPartition:
    """Split the eta-line at the pencil roots and record each cell's signature."""
    Rm = np.asarray(R, dtype=complex)
    Lm = np.asarray(L, dtype=complex)
    try:
        coeffs = pencil_det_poly(Rm, Lm)
        roots = pencil_real_roots(coeffs)
    except ZeroPolynomial as exc:
        raise IdenticallyDegeneratePencil(
            "pencil determinant vanishes identically"
        ) from exc
    span = 1.0 + float(np.linalg.norm(Rm)) / max(1.0, float(np.linalg.norm(Lm)))
    cells = []
    if not roots:
        neg, pos, zero = _signature_at(Rm, Lm, 0.0)
        cells.append(Cell(-math.inf, math.inf, neg, pos, zero))
        return EtaPartition((), tuple(cells))
    edges = [-math.inf] + list(roots) + [math.inf]
    for lo, hi in zip(edges[:-1], edges[1:]):
        if math.isinf(lo):
            probe = hi - span
        elif math.isinf(hi):
            probe = lo + span
        else:
            probe = 0.5 * (lo + hi)
        neg, pos, zero = _signature_at(Rm, Lm, probe)
        cells.append(Cell(lo, hi, neg, pos, zero))
    return EtaPartition(tuple(roots), tuple(cells))


def _antiderivative(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    return np.concatenate([[0.0], c / np.arange(1, len(c) + 1)])


def morse_local(R, L, j: int, delta: float | None = None):
    """Exact integral of |det(R - 2*eta*L)| over the signature-j region.

    The region is intersected with [-delta, delta] when delta is given.
    Returns the Divergent sentinel when some signature-j cell is unbounded
    and no truncation applies (the polynomial is nonzero there, so the
    integral is infinite); an identically zero pencil integrates to 0.
    """
    Rm = np.asarray(R, dtype=complex)
    Lm = np.asarray(L, dtype=complex)
    n = Rm.shape[0]
    if not 0 <= j <= n:
        raise DegreeOutOfRange(f"degree j={j} outside 0..{n}")
    try:
        coeffs = pencil_det_poly(Rm, Lm)
    except ZeroPolynomial:
        return 0.0
    part = rx_partition(Rm, Lm)
    anti = _antiderivative(coeffs)
    total = 0.0
    for cell in part.cells:
        if cell.negatives != j:
            continue
        lo, hi = cell.lo, cell.hi
        if delta is not None:
            lo, hi = max(lo, -delta), min(hi, delta)
            if lo >= hi:
                continue
        elif not cell.bounded:
            return Divergent
        mid = 0.5 * (lo + hi)
        sign = 1.0 if np.polynomial.polynomial.polyval(mid, coeffs) >= 0 else -1.0
        total += sign * float(
            np.polynomial.polynomial.polyval(hi, anti)
            - np.polynomial.polynomial.polyval(lo, anti)
        )
    return total


def morse_global(d: ManifoldDescriptor, q: int, delta: float | None = None) -> MorseReport:
    """Weighted Morse bounds over a descriptor, for every degree j = 0..q.

    Weak bound at j: (2*pi)^-(n+1) * sum_i w_i * morse_local(R_i, L_i, j).
    The strong alternating sum at level m is populated only when every
    j <= m is finite and, without a truncation, the signature condition
    holds at every point for every j <= m (the untruncated strong
    inequalities assume it).
    """
    n = d.n
    cap = n if d.q_max is None else min(n, d.q_max)
    if not 0 <= q <= cap:
        raise DegreeOutOfRange(f"degree q={q} outside 0..{cap}")
    norm = (2.0 * math.pi) ** (-(n + 1))
    weak = []
    feasible = []
    y_ok = []
    for j in range(q + 1):
        acc = 0.0
        finite = True
        for p in d.points:
            v = morse_local(p.curvature.mat, p.levi.mat, j, delta)
            if v is Divergent:
                finite = False
                break
            acc += p.weight * v
        weak.append(norm * acc if finite else math.nan)
        feasible.append(finite)
        if delta is None:
            y_ok.append(
                all(
                    y_condition(eig_hermitian(p.levi.mat).eigenvalues, j)
                    for p in d.points
                )
            )
        else:
            y_ok.append(True)
    strong = []
    for m in range(q + 1):
        usable = all(feasible[: m + 1]) and all(y_ok[: m + 1])
        if usable:
            strong.append(sum((-1.0) ** (m - j) * weak[j] for j in range(m + 1)))
        else:
            strong.append(math.nan)
    return MorseReport(tuple(weak), tuple(strong), delta, tuple(feasible))


def heat_trace(d: ManifoldDescriptor, q: int, t: float, delta: float | None = None) -> list:
    """Weighted heat-trace comparators sum_i w_i tr density_diagonal(p_i, j, t).

    One entry per j = 0..q.  A degree whose integral diverges at some point
    yields the Divergent sentinel; only if every degree diverges is the
    DivergentIntegral propagated.  Traces must be real up to a 1e-10
    relative imaginary residue, which is checked and discarded.
    """
    n = d.n
    cap = n if d.q_max is None else min(n, d.q_max)
    if not 0 <= q <= cap:
        raise DegreeOutOfRange(f"degree q={q} outside 0..{cap}")
    out = []
    last_error = None
    for j in range(q + 1):
        acc = 0.0
        entry = None
        for p in d.points:
            try:
                tr = density_diagonal(p, j, t, delta).trace
            except DivergentIntegral as exc:
                entry = Divergent
                last_error = exc
                break
            if abs(tr.imag) > 1e-10 * max(1.0, abs(tr.real)):
                raise RuntimeError(f"trace has non-negligible imaginary part {tr.imag}")
            acc += p.weight * tr.real
        out.append(acc if entry is None else Divergent)
    if all(v is Divergent for v in out):
        raise DivergentIntegral(
            "every degree diverges without truncation", direction=last_error.direction
        )
    return out
