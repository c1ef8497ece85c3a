"""Closed-form kernel evaluations for the matrix Airy convolution operator.

Provides the r x r matrix kernel with entries c_jk * Ai(x+y+s_j+s_k), its
square (expressed through the scalar Airy kernel, no numerical z-integration),
and the complex contour-side symbols used by the contour-determinant route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .airy import ai_arrays
from .errors import DivisionByZero, DomainError, OverflowRisk

__all__ = [
    "ShiftVector",
    "CouplingMatrix",
    "matrix_airy_kernel",
    "scalar_airy_kernel",
    "matrix_airy_sq_kernel",
    "contour_symbol",
    "contour_kernel",
]

_EXP_GUARD = 700.0  # double exp() overflows near 709


@dataclass(frozen=True)
class ShiftVector:
    """The r real shifts s_j with barycenter S and offsets delta_j = s_j - S."""

    s: np.ndarray
    S: float = field(init=False)
    delta: np.ndarray = field(init=False)
    m: float = field(init=False)

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.s, dtype=float))
        if s.ndim != 1 or s.size < 1:
            raise DomainError("shift vector must be a nonempty 1-D real array")
        if not np.all(np.isfinite(s)):
            raise DomainError("shift entries must be finite")
        object.__setattr__(self, "s", s)
        S = float(np.mean(s))
        delta = s - S
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "m", float(np.max(np.abs(delta))))

    @property
    def r(self) -> int:
        return self.s.size

    def diag(self) -> np.ndarray:
        """The diagonal matrix diag(s_1, ..., s_r)."""
        return np.diag(self.s).astype(complex)


def _power_iteration_sigma_max(c: np.ndarray, tol: float = 1e-12, maxit: int = 10000) -> float:
    """Largest singular value via power iteration on C^dagger C (cross-check path)."""
    h = c.conj().T @ c
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(c.shape[0]) + 1j * rng.standard_normal(c.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(maxit):
        w = h @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v_new = w / nw
        lam_new = float(np.real(np.vdot(v_new, h @ v_new)))
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return math.sqrt(max(lam_new, 0.0))
        lam, v = lam_new, v_new
    return math.sqrt(max(lam, 0.0))


@dataclass(frozen=True)
class CouplingMatrix:
    """The r x r complex coupling matrix C with structure flags and sigma_max."""

    entries: np.ndarray
    is_real: bool = field(init=False)
    is_hermitean: bool = field(init=False)
    sigma_max: float = field(init=False)

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.entries, dtype=complex))
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DomainError("coupling matrix must be square")
        if not np.all(np.isfinite(c)):
            raise DomainError("coupling entries must be finite")
        object.__setattr__(self, "entries", c)
        scale = max(1.0, float(np.max(np.abs(c))))
        object.__setattr__(self, "is_real", bool(np.max(np.abs(c.imag)) <= 1e-14 * scale))
        object.__setattr__(
            self, "is_hermitean", bool(np.max(np.abs(c - c.conj().T)) <= 1e-14 * scale)
        )
        object.__setattr__(self, "sigma_max", float(np.linalg.svd(c, compute_uv=False)[0]) if c.size else 0.0)

    @property
    def r(self) -> int:
        return self.entries.shape[0]

    def sigma_max_crosscheck(self) -> float:
        """Independent power-iteration estimate of sigma_max."""
        return _power_iteration_sigma_max(self.entries)

    def negated(self) -> "CouplingMatrix":
        return CouplingMatrix(-self.entries)


def matrix_airy_kernel(x, y, s: ShiftVector, C: CouplingMatrix) -> np.ndarray:
    """Entry (j,k) = c_jk * Ai(x + y + s_j + s_k).

    x, y may be scalars or broadcastable arrays; the result has shape
    broadcast(x, y).shape + (r, r).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ss = s.s[:, None] + s.s[None, :]
    args = (x + y)[..., None, None] + ss
    ai, _ = ai_arrays(args)
    return C.entries * ai


def scalar_airy_kernel(a, b) -> np.ndarray:
    """The scalar Airy kernel (Ai(a)Ai'(b) - Ai'(a)Ai(b)) / (a - b).

    Near the diagonal (|a-b| < 1e-6) switches to the confluent form
    Ai'(a)^2 - a Ai(a)^2 with a first-order correction in (b - a).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    aa, aap = ai_arrays(a)
    ba, bap = ai_arrays(b)
    d = a - b
    near = np.abs(d) < 1e-6
    with np.errstate(divide="ignore", invalid="ignore"):
        off = (aa * bap - aap * ba) / d
    diag = aap * aap - a * aa * aa - 0.5 * (b - a) * aa * aa
    out = np.where(near, diag, off)
    if out.ndim == 0:
        return float(out)
    return out


def matrix_airy_sq_kernel(x, y, s: ShiftVector, C: CouplingMatrix) -> np.ndarray:
    """Kernel of the squared operator, in closed form.

    Entry (j1, j2) = sum_k c_{j1 k} c_{k j2} K_Ai(x + s_j1 + s_k, y + s_j2 + s_k)
    where K_Ai is the scalar Airy kernel; no z-quadrature is performed.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    r = s.r
    # arguments: a[j1,k] = x + s_j1 + s_k, b[j2,k] = y + s_j2 + s_k
    a = x[..., None, None] + (s.s[:, None] + s.s[None, :])
    b = y[..., None, None] + (s.s[:, None] + s.s[None, :])
    # K[j1, j2, k] = K_Ai(a[j1,k], b[j2,k])
    k_ai = scalar_airy_kernel(a[..., :, None, :], b[..., None, :, :])
    w = C.entries[:, None, :] * C.entries.T[None, :, :]  # w[j1,j2,k] = c_{j1 k} c_{k j2}
    return np.sum(w * np.asarray(k_ai).reshape(x.shape + (r, r, r)), axis=-1)


def _theta_exponents(lam, s: ShiftVector) -> np.ndarray:
    """Exponents i lam^3/6 + i s_j lam, shape lam.shape + (r,)."""
    lam = np.asarray(lam, dtype=complex)
    return 1j * lam[..., None] ** 3 / 6.0 + 1j * s.s * lam[..., None]


def contour_symbol(lam, s: ShiftVector, C: CouplingMatrix) -> tuple[np.ndarray, np.ndarray]:
    """The contour-side factors (E1, E2) at lambda.

    E2 = diag(exp(i lam^3/6 + i s_j lam)); E1 = -(1/(2 i pi)) E2 C.  The kernel
    convention is fixed so that [E1^T(lam) E2(mu)]_{j,k} =
    -(1/(2 i pi)) c_{kj} exp(theta_j(lam) + theta_k(mu)).
    """
    th = _theta_exponents(lam, s)
    if np.any(th.real > _EXP_GUARD):
        raise OverflowRisk("contour symbol exponent exceeds the exp() range")
    with np.errstate(under="ignore"):
        e = np.exp(th)
    e2 = np.zeros(np.shape(lam) + (s.r, s.r), dtype=complex) if np.ndim(lam) else np.zeros((s.r, s.r), dtype=complex)
    idx = np.arange(s.r)
    e2[..., idx, idx] = e
    e1 = (-1.0 / (2j * math.pi)) * (e2 @ C.entries)
    return e1, e2


def contour_kernel(lam, mu, s: ShiftVector, C: CouplingMatrix) -> np.ndarray:
    """K(lam, mu) = E1^T(lam) E2(mu) / (lam + mu)."""
    lam_c = complex(lam) if np.ndim(lam) == 0 else np.asarray(lam, dtype=complex)
    mu_c = complex(mu) if np.ndim(mu) == 0 else np.asarray(mu, dtype=complex)
    denom = np.asarray(lam_c + mu_c)
    if np.any(np.abs(denom) < 1e-14):
        raise DivisionByZero("lambda + mu is numerically zero")
    e1_l, _ = contour_symbol(lam, s, C)
    _, e2_m = contour_symbol(mu, s, C)
    num = np.swapaxes(e1_l, -1, -2) @ e2_m
    return num / denom[..., None, None]
