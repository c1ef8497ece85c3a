"""Block Nystrom engine for Fredholm determinants.

Gauss-Legendre quadrature rules, det(Id + z K) for matrix-valued kernels on
the half-line and on the contour gamma_plus (two rays in the upper half
plane), and power-iteration spectral estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DomainError
from .kernels import CouplingMatrix, ShiftVector, contour_symbol

__all__ = [
    "QuadratureRule",
    "DetResult",
    "gauss_legendre",
    "half_line_rule",
    "nystrom_det",
    "nystrom_det_contour",
    "spectral_radius",
    "half_line_cutoff",
]

_DEFAULT_M = 40
_REFINE_CAP = 320


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights together with a domain descriptor."""

    nodes: np.ndarray
    weights: np.ndarray
    domain: dict

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise DomainError("node and weight counts differ")
        if np.any(self.weights <= 0):
            raise DomainError("quadrature weights must be positive")

    @property
    def m(self) -> int:
        return self.nodes.size


@dataclass(frozen=True)
class DetResult:
    """A Fredholm determinant value with refinement diagnostics."""

    value: complex
    log_abs: float
    nodes_used: int
    est_error: float
    converged: bool


def gauss_legendre(m: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1].

    Nodes are Newton-refined roots of the degree-m Legendre polynomial
    starting from Chebyshev guesses; weights use 2 / ((1-x^2) P_m'(x)^2).
    """
    if not (2 <= m <= 512):
        raise DomainError("gauss_legendre order must lie in [2, 512]")
    k = np.arange(1, m + 1)
    x = -np.cos(math.pi * (k - 0.25) / (m + 0.5))
    for it in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for n in range(2, m + 1):
            p0, p1 = p1, ((2 * n - 1) * x * p1 - (n - 1) * p0) / n
        dp = m * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    else:
        raise ConvergenceFailure("Legendre root Newton iteration did not converge")
    p0 = np.ones_like(x)
    p1 = x.copy()
    for n in range(2, m + 1):
        p0, p1 = p1, ((2 * n - 1) * x * p1 - (n - 1) * p0) / n
    dp = m * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # enforce exact symmetry about 0
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(x, w, {"kind": "interval", "a": -1.0, "b": 1.0})


def half_line_cutoff(s: ShiftVector) -> float:
    """Truncation point for [0, inf): far enough that the Airy tail is dust."""
    return 40.0 + 2.0 * max(0.0, -2.0 * float(np.min(s.s)))


def half_line_rule(m: int, cutoff: float) -> QuadratureRule:
    """Gauss-Legendre rule mapped affinely from [-1,1] to [0, cutoff]."""
    base = gauss_legendre(m)
    half = 0.5 * cutoff
    return QuadratureRule(
        half * (base.nodes + 1.0), half * base.weights, {"kind": "half_line", "cutoff": cutoff}
    )


def _lu_logdet(a: np.ndarray) -> tuple[complex, float]:
    """det and log|det| of a complex matrix via LAPACK LU."""
    sign, logabs = np.linalg.slogdet(a)
    if sign == 0:
        return 0.0 + 0.0j, -math.inf
    return sign * np.exp(min(logabs, 700.0)), float(logabs)


def _assemble_block(kernel, r: int, z: complex, nodes: np.ndarray, weights: np.ndarray,
                    split: bool = True) -> np.ndarray:
    """Id + z B with block (i,k) = sqrt(w_i) K(x_i,x_k) sqrt(w_k) (or K w_k)."""
    m = nodes.size
    kmat = np.asarray(kernel(nodes[:, None], nodes[None, :]), dtype=complex)
    if kmat.shape != (m, m, r, r):
        kmat = kmat.reshape(m, m, r, r)
    if split:
        sw = np.sqrt(weights)
        kmat = kmat * sw[:, None, None, None] * sw[None, :, None, None]
    else:
        kmat = kmat * weights[None, :, None, None]
    big = kmat.transpose(0, 2, 1, 3).reshape(m * r, m * r)
    return np.eye(m * r, dtype=complex) + z * big


def nystrom_det(kernel, r: int, z: complex, rule: QuadratureRule,
                refine: bool = True, tol: float = 1e-10, cap: int = _REFINE_CAP,
                split: bool = True) -> DetResult:
    """det(Id + z K) on the rule's real domain by block Nystrom.

    With refine=True the node count doubles until the change in log det
    falls below tol or the cap is reached; est_error is the last change.
    """
    dom = rule.domain
    if dom.get("kind") == "half_line":
        cutoff = dom["cutoff"]

        def make(m):
            rr = half_line_rule(m, cutoff)
            return rr.nodes, rr.weights
    else:
        a, b = dom.get("a", -1.0), dom.get("b", 1.0)

        def make(m):
            base = gauss_legendre(m)
            half = 0.5 * (b - a)
            return a + half * (base.nodes + 1.0), half * base.weights

    m = rule.m
    a_mat = _assemble_block(kernel, r, z, rule.nodes, rule.weights, split=split)
    val, logabs = _lu_logdet(a_mat)
    est = math.inf
    if not refine:
        return DetResult(val, logabs, m, 0.0, True)
    prev_log = None
    while True:
        cur_log = np.log(val) if val != 0 else complex(-math.inf)
        if prev_log is not None:
            est = abs(cur_log - prev_log)
            if est <= tol:
                return DetResult(val, logabs, m, est, True)
        if 2 * m > cap:
            if prev_log is None:
                raise ConvergenceFailure("refinement cap reached before any comparison")
            return DetResult(val, logabs, m, est, est <= tol)
        prev_log = cur_log
        m *= 2
        nodes, weights = make(m)
        a_mat = _assemble_block(kernel, r, z, nodes, weights, split=split)
        val, logabs = _lu_logdet(a_mat)


def _contour_nodes(m_per_ray: int, radius: float, basepoint: complex = 0.5j):
    """Nodes and complex weights w_k dlambda/dt along gamma_plus, left to right.

    The contour runs from basepoint + radius e^{i 5pi/6} down to the basepoint
    and out to basepoint + radius e^{i pi/6}; each straight ray carries an
    affinely mapped Gauss-Legendre rule and the direction factor of dlambda.
    """
    base = gauss_legendre(m_per_ray)
    t = 0.5 * radius * (base.nodes + 1.0)
    wt = 0.5 * radius * base.weights
    d_right = np.exp(1j * math.pi / 6.0)
    d_left = np.exp(5j * math.pi / 6.0)
    # left ray traversed toward the basepoint: lambda = bp + (radius - t) d_left
    lam_left = basepoint + (radius - t) * d_left
    w_left = -wt * d_left
    lam_right = basepoint + t * d_right
    w_right = wt * d_right
    lam = np.concatenate([lam_left, lam_right])
    w = np.concatenate([w_left, w_right])
    return lam, w


def nystrom_det_contour(s: ShiftVector, C: CouplingMatrix, z: complex,
                        m_per_ray: int = 60, radius: float = 10.0,
                        refine: bool = True, tol: float = 1e-10,
                        cap: int = _REFINE_CAP) -> DetResult:
    """det(Id + z K) for the contour kernel on gamma_plus.

    One-sided complex weights (no square-root splitting); the determinant is
    invariant under this similarity of the weighted block matrix.
    """
    r = s.r

    def build(mpr):
        lam, w = _contour_nodes(mpr, radius)
        e1 = np.empty((lam.size, r, r), dtype=complex)
        e2 = np.empty((lam.size, r, r), dtype=complex)
        for i, la in enumerate(lam):
            e1[i], e2[i] = contour_symbol(la, s, C)
        denom = lam[:, None] + lam[None, :]
        kmat = np.einsum("ial,jak->ijlk", e1, e2) / denom[:, :, None, None]
        kmat = kmat * w[None, :, None, None]
        big = kmat.transpose(0, 2, 1, 3).reshape(lam.size * r, lam.size * r)
        return np.eye(lam.size * r, dtype=complex) + z * big

    m = m_per_ray
    val, logabs = _lu_logdet(build(m))
    if not refine:
        return DetResult(val, logabs, 2 * m, 0.0, True)
    est = math.inf
    prev_log = None
    while True:
        cur_log = np.log(val) if val != 0 else complex(-math.inf)
        if prev_log is not None:
            est = abs(cur_log - prev_log)
            if est <= tol:
                return DetResult(val, logabs, 2 * m, est, True)
        if 2 * m > cap:
            return DetResult(val, logabs, 2 * m, est, est <= tol)
        prev_log = cur_log
        m *= 2
        val, logabs = _lu_logdet(build(m))


def spectral_radius(kernel, r: int, rule: QuadratureRule,
                    tol: float = 1e-8, maxit: int = 10000) -> float:
    """Largest-modulus eigenvalue of the discretized operator, power iteration."""
    a = _assemble_block(kernel, r, 1.0, rule.nodes, rule.weights) - np.eye(rule.m * r)
    rng = np.random.default_rng(2718)
    v = rng.standard_normal(a.shape[0]) + 1j * rng.standard_normal(a.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(maxit):
        w = a @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v_new = w / nw
        lam_new = abs(np.vdot(v_new, a @ v_new))
        if abs(lam_new - lam) <= tol * max(1.0, lam_new):
            return float(lam_new)
        lam, v = lam_new, v_new
    raise ConvergenceFailure("power iteration exhausted its budget")
