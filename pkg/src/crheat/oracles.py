"""Independent brute-force validators for the closed-form kernels.

Nothing here reuses the main-path quadrature or eigen plumbing beyond the
data types: the PDE oracle time-steps the fiber operator on a grid, the
reference quadrature is plain adaptive Simpson, and the semigroup and
residual checks discretize the defining identities directly.  Tolerances
when comparing against the closed forms are deliberately looser than the
main path's internal ones; these are cross-checks, not reimplementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import CurvaturePoint
from .errors import BoundaryContamination, MaxSubdivisions

# fourth-order central stencils used by the residual check
_D1_4TH = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2_4TH = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


@dataclass(frozen=True)
class GridSpec:
    """Square grid [-half_width, half_width]^2 with spacing and time step."""

    half_width: float
    spacing: float
    dt: float

    def __post_init__(self):
        if not (self.half_width > 0 and self.spacing > 0 and self.dt > 0):
            raise ValueError("grid parameters must be positive")
        if self.half_width / self.spacing > 400:
            raise ValueError("more than 400 points per half-axis; reduce resolution")
        if self.dt > self.spacing ** 2:
            raise ValueError("dt must not exceed spacing^2")

    @property
    def axis(self) -> np.ndarray:
        m = int(round(self.half_width / self.spacing))
        return self.spacing * np.arange(-m, m + 1)


def reference_quadrature(f, a: float, b: float, tol: float = 1e-9):
    """Adaptive Simpson integration of a scalar- or array-valued function.

    Refines until the Richardson error estimate falls below a tenth of tol
    scaled per subinterval; raises MaxSubdivisions past 2^18 intervals.
    Used only in tests, as a rule unrelated to the main path's panels.
    """
    a, b = float(a), float(b)
    inner = tol / 10.0
    budget = [1 << 18]

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, depth):
        budget[0] -= 1
        if budget[0] <= 0:
            raise MaxSubdivisions("adaptive Simpson exceeded its subdivision budget")
        m = 0.5 * (lo + hi)
        fl = np.asarray(f(0.5 * (lo + m)))
        fr = np.asarray(f(0.5 * (m + hi)))
        left = simpson(lo, m, flo, fl, fmid)
        right = simpson(m, hi, fmid, fr, fhi)
        err = np.max(np.abs(left + right - whole))
        if err < 15.0 * inner * (hi - lo) / (b - a) or depth > 48:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, m, flo, fl, fmid, left, depth + 1) + recurse(
            m, hi, fmid, fr, fhi, right, depth + 1
        )

    fa, fm, fb = np.asarray(f(a)), np.asarray(f(0.5 * (a + b))), np.asarray(f(b))
    whole = simpson(a, b, fa, fm, fb)
    out = recurse(a, b, fa, fm, fb, whole, 0)
    return out if out.ndim else out[()]


def _pencil_scalar(p: CurvaturePoint, eta: float) -> float:
    if p.n != 1:
        raise ValueError("the PDE oracle handles n = 1 only")
    m = p.curvature.mat[0, 0] - 2.0 * eta * p.levi.mat[0, 0]
    return float(m.real)


def _check_input_boundary(u0: np.ndarray):
    peak = float(np.max(np.abs(u0)))
    edge = max(
        float(np.max(np.abs(u0[0, :]))),
        float(np.max(np.abs(u0[-1, :]))),
        float(np.max(np.abs(u0[:, 0]))),
        float(np.max(np.abs(u0[:, -1]))),
    )
    if peak == 0.0 or edge > 1e-8 * peak:
        raise BoundaryContamination(
            "initial field is not supported well inside the domain"
        )


def _thomas_factors(sub, diag, sup):
    """Precompute forward-elimination factors for batched tridiagonal solves.

    sub and sup are per-line scalars (1d over lines), diag is 2d
    (unknown index, line).  Returns (W, Dp) with the same diag shape.
    """
    K = diag.shape[0]
    W = np.zeros_like(diag)
    Dp = diag.copy()
    for k in range(1, K):
        W[k] = sub / Dp[k - 1]
        Dp[k] = diag[k] - W[k] * sup
    return W, Dp


def _thomas_solve(W, Dp, sup, rhs):
    K = rhs.shape[0]
    y = rhs.copy()
    for k in range(1, K):
        y[k] -= W[k] * y[k - 1]
    u = np.empty_like(y)
    u[K - 1] = y[K - 1] / Dp[K - 1]
    for k in range(K - 2, -1, -1):
        u[k] = (y[k] - sup * u[k + 1]) / Dp[k]
    return u


def pde_evolve(p: CurvaturePoint, eta: float, g: GridSpec, t: float, u0) -> np.ndarray:
    """Evolve u0 under the discretized fiber operator for time t (n=1, q=0).

    The operator -1/4*Laplacian - (i*m/2)*(x2*d1 - x1*d2) + (m^2/4)*|x|^2
    - m/2 (m the 1x1 pencil value) is split direction-by-direction and
    stepped with the Crank-Nicolson alternating-direction scheme (implicit
    half-step in x1 first, then x2; order fixed).  Dirichlet boundary;
    global error O(spacing^2 + dt^2).
    """
    m = _pencil_scalar(p, eta)
    ax = g.axis
    N = len(ax)
    u0 = np.asarray(u0, dtype=complex)
    if u0.shape != (N, N):
        raise ValueError(f"field shape {u0.shape} does not match the {N}x{N} grid")
    _check_input_boundary(u0)
    nsteps = int(round(t / g.dt))
    if abs(nsteps * g.dt - t) > 1e-9 * max(1.0, abs(t)):
        raise ValueError("t must be an integer multiple of dt")
    if nsteps == 0:
        return u0.copy()

    h = g.spacing
    xi = ax[1:-1]
    K = N - 2
    X1 = xi[:, None]
    X2 = xi[None, :]
    V = (m * m / 4.0) * (X1 ** 2 + X2 ** 2) - m / 2.0
    half = g.dt / 2.0
    diag = 1.0 + half * (0.5 / h ** 2 + V / 2.0) + 0j

    # direction 1: solve along x1, one line per interior x2 value
    sub1 = half * (-0.25 / h ** 2 + 1j * m * xi / (4.0 * h))
    sup1 = half * (-0.25 / h ** 2 - 1j * m * xi / (4.0 * h))
    W1, Dp1 = _thomas_factors(sub1, diag, sup1)
    # direction 2: solve along x2 (arrays transposed), lines indexed by x1
    sub2 = half * (-0.25 / h ** 2 - 1j * m * xi / (4.0 * h))
    sup2 = half * (-0.25 / h ** 2 + 1j * m * xi / (4.0 * h))
    W2, Dp2 = _thomas_factors(sub2, diag.T, sup2)

    u = u0[1:-1, 1:-1].copy()
    for _ in range(nsteps):
        rhs = (2.0 - diag) * u
        rhs[:, 1:] -= sub2[:, None] * u[:, :-1]
        rhs[:, :-1] -= sup2[:, None] * u[:, 1:]
        u = _thomas_solve(W1, Dp1, sup1, rhs)
        rhs = (2.0 - diag) * u
        rhs[1:, :] -= sub1 * u[:-1, :]
        rhs[:-1, :] -= sup1 * u[1:, :]
        u = _thomas_solve(W2, Dp2, sup2, rhs.T).T
    out = np.zeros((N, N), dtype=complex)
    out[1:-1, 1:-1] = u
    ring = max(
        float(np.max(np.abs(u[0, :]))),
        float(np.max(np.abs(u[-1, :]))),
        float(np.max(np.abs(u[:, 0]))),
        float(np.max(np.abs(u[:, -1]))),
    )
    if ring > 1e-4 * float(np.max(np.abs(u))):
        raise BoundaryContamination("evolved field reached the domain boundary")
    return out


def fiber_kernel_apply(p: CurvaturePoint, eta: float, g: GridSpec, t: float, u0) -> np.ndarray:
    """Apply the closed-form fiber kernel to a grid field by quadrature (n=1).

    The kernel factorizes as c * exp(-f(|z|^2+|w|^2) + 2f*Re(conj(w) z)
    + i*m*Im(conj(w) z)), which separates in (y1, y2) for fixed x; the sum
    over the grid then reduces to one matrix product per x-chunk.  Volume
    convention dv = 2 dx.
    """
    from .hermitian import bose_ratio, tanh_ratio

    m = _pencil_scalar(p, eta)
    ax = g.axis
    N = len(ax)
    u0 = np.asarray(u0, dtype=complex)
    if u0.shape != (N, N):
        raise ValueError(f"field shape {u0.shape} does not match the {N}x{N} grid")
    f = float(tanh_ratio(np.array([m]), t)[0])
    pref = float(bose_ratio(np.array([m]), t)[0]) / (2.0 * math.pi)
    X1 = np.repeat(ax, N)
    X2 = np.tile(ax, N)
    alpha = 2.0 * f * X1 + 1j * m * X2
    beta = 2.0 * f * X2 - 1j * m * X1
    A = np.exp(-f * (X1 ** 2 + X2 ** 2))
    B = np.exp(-f * (ax[:, None] ** 2 + ax[None, :] ** 2))
    C = (B * u0) * (2.0 * g.spacing ** 2)
    out = np.empty(N * N, dtype=complex)
    chunk = max(1, (1 << 21) // N)
    for lo in range(0, N * N, chunk):
        hi = min(lo + chunk, N * N)
        M2 = np.exp(np.outer(beta[lo:hi], ax))
        T = M2 @ C.T
        M1 = np.exp(np.outer(alpha[lo:hi], ax))
        out[lo:hi] = np.sum(M1 * T, axis=1)
    return (pref * A * out).reshape(N, N)


_PROBE_PAIRS = (
    (np.array([0.3, -0.2]), np.array([-0.6, 0.5])),
    (np.array([0.0, 0.0]), np.array([0.5, 0.4])),
    (np.array([-0.4, 0.7]), np.array([0.2, -0.5])),
)


def semigroup_check(kernel, t: float, s: float, g: GridSpec) -> float:
    """Max relative Chapman-Kolmogorov deviation of a 2D (n=1) scalar kernel.

    kernel(tau, x, y) is evaluated pointwise; the middle variable is summed
    over the grid with volume 2*spacing^2.  Times below 4*dt are rejected
    (a near-delta kernel is not representable on the grid), and the kernel
    must have decayed below 1e-10 of its peak at the boundary.
    """
    if t < 4.0 * g.dt or s < 4.0 * g.dt:
        raise ValueError("t and s must be at least 4*dt")
    ax = g.axis
    pts = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    on_edge = (
        (np.abs(pts[:, 0]) >= ax[-1] - 1e-12) | (np.abs(pts[:, 1]) >= ax[-1] - 1e-12)
    )
    worst = 0.0
    for x, y in _PROBE_PAIRS:
        row_t = np.array([kernel(t, x, u) for u in pts])
        row_s = np.array([kernel(s, u, y) for u in pts])
        for row in (row_t, row_s):
            peak = float(np.max(np.abs(row)))
            if float(np.max(np.abs(row[on_edge]))) > 1e-10 * peak:
                raise BoundaryContamination(
                    "kernel has not decayed at the grid boundary"
                )
        conv = np.sum(row_t * row_s) * 2.0 * g.spacing ** 2
        direct = kernel(t + s, x, y)
        worst = max(worst, abs(conv - direct) / abs(direct))
    return worst


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    discretization_error: float


def scaled_laplacian_applier(c: float):
    """Applier for -c * Laplacian, for classical-kernel residual checks."""

    def apply(f, x, h):
        x1, x2 = float(x[0]), float(x[1])
        s1 = np.array([f(np.array([x1 + k * h, x2])) for k in range(-2, 3)])
        s2 = np.array([f(np.array([x1, x2 + k * h])) for k in range(-2, 3)])
        return -c * (np.dot(_D2_4TH, s1) + np.dot(_D2_4TH, s2)) / h ** 2

    return apply


def box_eta_applier(m: float):
    """Discrete fiber operator at pencil value m, fourth-order stencils.

    Returns a callable (f, x, h) -> complex evaluating
    -1/4*Laplacian - (i*m/2)*(x2*d1 - x1*d2) + ((m^2/4)*|x|^2 - m/2) f
    at the point x from 5-point function samples per axis.
    """

    def apply(f, x, h):
        x1, x2 = float(x[0]), float(x[1])
        s1 = np.array([f(np.array([x1 + k * h, x2])) for k in range(-2, 3)])
        s2 = np.array([f(np.array([x1, x2 + k * h])) for k in range(-2, 3)])
        d1 = np.dot(_D1_4TH, s1) / h
        d2 = np.dot(_D1_4TH, s2) / h
        lap = (np.dot(_D2_4TH, s1) + np.dot(_D2_4TH, s2)) / h ** 2
        v = (m * m / 4.0) * (x1 * x1 + x2 * x2) - m / 2.0
        return -0.25 * lap - 0.5j * m * (x2 * d1 - x1 * d2) + v * s1[2]

    return apply


_DEFAULT_PROBES = tuple(
    np.array([0.15 * i - 0.9, 0.13 * ((7 * i) % 11) - 0.65]) for i in range(20)
)


def heat_residual_check(kernel, box, t: float, probes=None, h: float = 0.05, h_t: float = 1e-3) -> ResidualReport:
    """Max |d/dt K + box K| over probe points, fourth-order differences.

    kernel(tau, x) -> complex; box(f, x, h) -> complex applies the spatial
    operator.  The reported discretization error is the Richardson estimate
    from recomputing the spatial part at h/2 (the residual itself is
    dominated by the h^4 spatial term).
    """
    if t < 0.5:
        raise ValueError("residual check needs t >= 0.5")
    if probes is None:
        probes = _DEFAULT_PROBES
    worst = 0.0
    worst_err = 0.0
    for x in probes:
        taus = np.array([t - 2 * h_t, t - h_t, t + h_t, t + 2 * h_t])
        ks = np.array([kernel(tau, x) for tau in taus])
        dt_k = (ks[0] - 8.0 * ks[1] + 8.0 * ks[2] - ks[3]) / (12.0 * h_t)
        space = box(lambda xx: kernel(t, xx), x, h)
        space_fine = box(lambda xx: kernel(t, xx), x, 0.5 * h)
        res = abs(dt_k + space)
        worst = max(worst, res)
        worst_err = max(worst_err, abs(space - space_fine) * 16.0 / 15.0)
    return ResidualReport(worst, worst_err)
