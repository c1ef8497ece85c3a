"""Matrix Painleve II in Hastings-McLeod normalization.

The matrix unknown beta1(S) solves D^2 beta1 = 4{s, beta1} + 8 beta1^3 with
s = diag(S + delta_j) and decays like -C o Ai at +infinity.  The tail is
produced by Picard iteration on the equivalent integral equation, then
continued leftward by fixed-step RK4.  Auxiliary quantities (alpha1, Lax
matrices, residual diagnostics) are derived from the stored grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .airy import ai_arrays, airy_arrays
from .errors import (ConvergenceFailure, DomainError, NoContraction,
                     OutOfRange, PoleEncountered)
from .fredholm import gauss_legendre
from .kernels import CouplingMatrix, scalar_airy_kernel

__all__ = [
    "PicardTail",
    "HMGrid",
    "LaxPair",
    "hm_tail_picard",
    "hm_continue",
    "hm_solve",
    "alpha1",
    "beta2",
    "ncp2_residual",
    "lax_matrices",
    "zero_curvature_residual_p2",
    "SIGMA1",
    "SIGMA2",
    "SIGMA3",
]

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

_BLOWUP = 1e8


def _aibi(x, y):
    """Ai(x) * Bi(y) without intermediate overflow (scaled values + one exp)."""
    ai_s, _, _, _, zx = airy_arrays(np.asarray(x, dtype=float))
    _, _, bi_s, _, zy = airy_arrays(np.asarray(y, dtype=float))
    return ai_s * bi_s * np.exp(zy - zx)


def _aipbi(x, y):
    """Ai'(x) * Bi(y), same scaling strategy."""
    _, aip_s, _, _, zx = airy_arrays(np.asarray(x, dtype=float))
    _, _, bi_s, _, zy = airy_arrays(np.asarray(y, dtype=float))
    return aip_s * bi_s * np.exp(zy - zx)


def _aibip(x, y):
    """Ai(x) * Bi'(y)."""
    ai_s, _, _, _, zx = airy_arrays(np.asarray(x, dtype=float))
    _, _, _, bip_s, zy = airy_arrays(np.asarray(y, dtype=float))
    return ai_s * bip_s * np.exp(zy - zx)


def _bary_weights(nodes: np.ndarray) -> np.ndarray:
    """Barycentric weights for arbitrary interpolation nodes."""
    d = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(d, 1.0)
    w = 1.0 / np.prod(d, axis=1)
    return w / np.max(np.abs(w))


def _bary_matrix(nodes: np.ndarray, bw: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Row-stochastic matrix P with (P f(nodes))[p] = interpolant at pts[p]."""
    diff = pts[:, None] - nodes[None, :]
    exact = np.abs(diff) < 1e-14
    diff = np.where(exact, 1.0, diff)
    terms = bw[None, :] / diff
    p = terms / np.sum(terms, axis=1)[:, None]
    hit = exact.any(axis=1)
    p[hit] = exact[hit].astype(float)
    return p


def _matcube(b: np.ndarray) -> np.ndarray:
    """b @ b @ b along the last two axes."""
    return np.einsum("...ij,...jk,...kl->...il", b, b, b)


@dataclass
class PicardTail:
    """Converged tail samples of (beta1, Dbeta1) on Gauss-Legendre nodes."""

    C: CouplingMatrix
    delta: np.ndarray
    S0: float
    S_max: float
    nodes: np.ndarray
    beta: np.ndarray
    sweeps: int
    final_change: float
    _bw: np.ndarray = field(repr=False, default=None)
    _sub_nodes: np.ndarray = field(repr=False, default=None)
    _sub_weights: np.ndarray = field(repr=False, default=None)

    def _offsets(self) -> np.ndarray:
        return self.delta[:, None] + self.delta[None, :]

    def _u(self, s_pts: np.ndarray) -> np.ndarray:
        a = 2.0 * s_pts[:, None, None] + self._offsets()
        ai, _ = ai_arrays(a)
        return -self.C.entries * ai

    def _du(self, s_pts: np.ndarray) -> np.ndarray:
        a = 2.0 * s_pts[:, None, None] + self._offsets()
        _, aip = ai_arrays(a)
        return -2.0 * self.C.entries * aip

    def _integral(self, s_pts: np.ndarray, beta_nodes: np.ndarray, deriv: bool) -> np.ndarray:
        """4 pi int_S^{S_max} G(S, t) o beta^3(t) dt at each S in s_pts.

        With deriv=True uses d/dS of the Green factor (chain factor 2); the
        boundary term vanishes since G(S, S) = 0.
        """
        n_s = s_pts.size
        half = 0.5 * (self.S_max - s_pts)
        t = s_pts[:, None] + half[:, None] * (self._sub_nodes[None, :] + 1.0)
        wt = half[:, None] * self._sub_weights[None, :]
        p = _bary_matrix(self.nodes, self._bw, t.ravel())
        b_t = np.einsum("pm,mij->pij", p, beta_nodes).reshape(t.shape + self.C.entries.shape)
        b3 = _matcube(b_t)
        a = self._offsets()
        x_s = 2.0 * s_pts[:, None, None, None] + a
        x_t = 2.0 * t[:, :, None, None] + a
        if deriv:
            g = 2.0 * (_aipbi(x_s, x_t) - _aibip(x_t, x_s))
        else:
            g = _aibi(x_s, x_t) - _aibi(x_t, x_s)
        return 4.0 * math.pi * np.einsum("pt,ptij,ptij->pij", wt, g, b3)

    def beta1_at(self, s_pts) -> np.ndarray:
        s_pts = np.atleast_1d(np.asarray(s_pts, dtype=float))
        return self._u(s_pts) + self._integral(s_pts, self.beta, deriv=False)

    def dbeta1_at(self, s_pts) -> np.ndarray:
        s_pts = np.atleast_1d(np.asarray(s_pts, dtype=float))
        return self._du(s_pts) + self._integral(s_pts, self.beta, deriv=True)


def hm_tail_picard(C: CouplingMatrix, delta, S0: float, S_max: float | None = None,
                   n_tail: int = 64, tol: float = 1e-12,
                   max_sweeps: int = 200) -> PicardTail:
    """Fixed-point solve of the tail integral equation on [S0, S_max].

    Starts from the pure Airy seed and iterates until the sup-norm change
    drops below tol.  Raises NoContraction if the change grows for three
    consecutive sweeps (S0 too far left).
    """
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    if n_tail < 64:
        raise DomainError("n_tail must be at least 64")
    m = float(np.max(np.abs(delta))) if delta.size else 0.0
    if S0 < 1.0 + m:
        raise DomainError("tail start S0 must satisfy S0 >= 1 + max|delta|")
    if S_max is None:
        S_max = S0 + 8.0
    base = gauss_legendre(n_tail)
    nodes = S0 + 0.5 * (S_max - S0) * (base.nodes + 1.0)
    tail = PicardTail(C, delta, S0, S_max, nodes, None, 0, math.inf)
    tail._bw = _bary_weights(nodes)
    tail._sub_nodes = base.nodes
    tail._sub_weights = base.weights
    beta = tail._u(nodes)
    prev_change = math.inf
    grow_streak = 0
    for sweep in range(1, max_sweeps + 1):
        new = tail._u(nodes) + tail._integral(nodes, beta, deriv=False)
        change = float(np.max(np.abs(new - beta)))
        beta = new
        if change <= tol:
            tail.beta = beta
            tail.sweeps = sweep
            tail.final_change = change
            return tail
        if change > prev_change:
            grow_streak += 1
            if grow_streak >= 3:
                raise NoContraction("Picard sweeps diverging; raise the tail start S0")
        else:
            grow_streak = 0
        prev_change = change
    raise ConvergenceFailure("Picard iteration exhausted its sweep budget")


@dataclass
class HMGrid:
    """Uniform-grid samples of the Hastings-McLeod solution and derivative."""

    C: CouplingMatrix
    delta: np.ndarray
    S_values: np.ndarray
    beta1: np.ndarray
    dbeta1: np.ndarray
    S_tail: float
    h: float
    pole_at: float | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def r(self) -> int:
        return self.delta.size

    def s_matrix(self, S: float) -> np.ndarray:
        return np.diag(S + self.delta).astype(complex)

    def index_of(self, S: float) -> int:
        i = int(round((S - self.S_values[0]) / self.h))
        if i < 0 or i >= self.S_values.size or abs(self.S_values[i] - S) > 0.5 * self.h:
            raise OutOfRange(f"S = {S} not on the stored grid")
        return i

    def _local_cubic(self, data: np.ndarray, S: float) -> np.ndarray:
        """Evaluate grid data at S; exact at nodes, 4-point Lagrange between."""
        sv = self.S_values
        if S < sv[0] - 1e-12 or S > sv[-1] + 1e-12:
            raise OutOfRange(f"S = {S} outside the grid [{sv[0]}, {sv[-1]}]")
        pos = (S - sv[0]) / self.h
        i = int(round(pos))
        if 0 <= i < sv.size and abs(pos - i) < 1e-9:
            return data[i]
        i0 = min(max(int(math.floor(pos)) - 1, 0), sv.size - 4)
        xs = sv[i0:i0 + 4]
        out = np.zeros_like(data[0])
        for j in range(4):
            lj = 1.0
            for k in range(4):
                if k != j:
                    lj *= (S - xs[k]) / (xs[j] - xs[k])
            out = out + lj * data[i0 + j]
        return out

    def beta1_at(self, S: float) -> np.ndarray:
        return self._local_cubic(self.beta1, S)

    def dbeta1_at(self, S: float) -> np.ndarray:
        return self._local_cubic(self.dbeta1, S)

    def d2beta1_at(self, S: float) -> np.ndarray:
        b = self.beta1_at(S)
        sm = self.s_matrix(S)
        return 4.0 * (sm @ b + b @ sm) + 8.0 * b @ b @ b

    def _cumulative(self, key: str, values: np.ndarray, tail_const: np.ndarray) -> np.ndarray:
        if key not in self._cache:
            self._cache[key] = _reverse_cumulative(values, self.h, tail_const)
        return self._cache[key]

    def _beta_sq_tail_const(self) -> np.ndarray:
        """int_{S_max}^infty beta1^2 dt via the Airy-product closed form."""
        s_max = self.S_values[-1]
        c = self.C.entries
        d = self.delta
        r = self.r
        out = np.zeros((r, r), dtype=complex)
        for mid in range(r):
            a = 2.0 * s_max + d[:, None] + d[mid]
            b = 2.0 * s_max + d[mid] + d[None, :]
            k = scalar_airy_kernel(a + 0.0 * b, b + 0.0 * a)
            out += c[:, mid:mid + 1] * c[mid:mid + 1, :] * 0.5 * np.asarray(k)
        return out

    def int_beta_sq(self, S: float) -> np.ndarray:
        """int_S^infty beta1(t)^2 dt."""
        b2 = np.einsum("nij,njk->nik", self.beta1, self.beta1)
        cum = self._cumulative("beta_sq", b2, self._beta_sq_tail_const())
        return self._cumulative_at(cum, S)

    def int_t_beta_sq(self, S: float) -> complex:
        """int_S^infty (t - S) Tr beta1(t)^2 dt."""
        b2tr = np.einsum("nij,nji->n", self.beta1, self.beta1)
        cum_t = self._cumulative("t_tr_beta_sq", self.S_values * b2tr, np.zeros(()))
        cum_0 = self._cumulative("tr_beta_sq", b2tr, np.zeros(()))
        a = self._cumulative_at(cum_t, S)
        b = self._cumulative_at(cum_0, S)
        return complex(a - S * b)

    def int_tr_beta(self, S: float) -> complex:
        """int_S^infty Tr beta1(t) dt."""
        btr = np.einsum("nii->n", self.beta1)
        cum = self._cumulative("tr_beta", btr, np.zeros(()))
        return complex(self._cumulative_at(cum, S))

    def _cumulative_at(self, cum: np.ndarray, S: float):
        return self._local_cubic(cum, S)


def _reverse_cumulative(f: np.ndarray, h: float, tail_const) -> np.ndarray:
    """I[i] = tail_const + int_{S_i}^{S_max} f dt on a uniform grid.

    Panel integrals use the cubic through four neighboring samples, giving
    O(h^4) global accuracy (plain trapezoid is not accurate enough for the
    cross-route determinant comparisons).
    """
    n = f.shape[0]
    out = np.empty_like(np.asarray(f, dtype=complex))
    out[-1] = tail_const
    if n >= 4:
        # interior panels [i, i+1] via nodes i-1..i+2
        panel = np.empty(f.shape[:1] + f.shape[1:], dtype=complex)[: n - 1]
        panel[1:n - 2] = (h / 24.0) * (-f[0:n - 3] + 13.0 * f[1:n - 2]
                                       + 13.0 * f[2:n - 1] - f[3:n])
        panel[0] = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
        panel[n - 2] = (h / 24.0) * (9.0 * f[n - 1] + 19.0 * f[n - 2]
                                     - 5.0 * f[n - 3] + f[n - 4])
        rev = np.cumsum(panel[::-1], axis=0)[::-1]
        out[:-1] = tail_const + rev
    elif n >= 2:
        for i in range(n - 2, -1, -1):
            out[i] = out[i + 1] + 0.5 * h * (f[i] + f[i + 1])
    return out


def _rk4_rhs(S: float, b: np.ndarray, db: np.ndarray, delta: np.ndarray):
    sm = np.diag(S + delta).astype(complex)
    return db, 4.0 * (sm @ b + b @ sm) + 8.0 * b @ b @ b


def _rk4_step(S: float, b: np.ndarray, db: np.ndarray, step: float, delta: np.ndarray):
    k1b, k1d = _rk4_rhs(S, b, db, delta)
    k2b, k2d = _rk4_rhs(S + 0.5 * step, b + 0.5 * step * k1b, db + 0.5 * step * k1d, delta)
    k3b, k3d = _rk4_rhs(S + 0.5 * step, b + 0.5 * step * k2b, db + 0.5 * step * k2d, delta)
    k4b, k4d = _rk4_rhs(S + step, b + step * k3b, db + step * k3d, delta)
    bn = b + (step / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
    dbn = db + (step / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
    return bn, dbn


def _fill_uniform_tail(tail: PicardTail, s_up: np.ndarray, h: float,
                       tol: float = 1e-13, max_sweeps: int = 20):
    """Resample the converged tail on a uniform grid.

    Uses the separable form of the Green factor: the integral equation
    becomes Ai(2S+a) * int_S Bi(2t+a) b^3 dt - Bi(2S+a) * int_S Ai(2t+a) b^3 dt,
    so two reverse-cumulative integrals cover every grid point at once.
    The interpolated Picard iterate seeds one or two polishing sweeps.
    """
    a = tail._offsets()
    args = 2.0 * s_up[:, None, None] + a
    ai_s, aip_s, bi_s, bip_s, z = airy_arrays(args)
    with np.errstate(under="ignore"):
        ai = ai_s * np.exp(-z)
        aip = aip_s * np.exp(-z)
        bi = bi_s * np.exp(z)
        bip = bip_s * np.exp(z)
    u = -tail.C.entries * ai
    du = -2.0 * tail.C.entries * aip
    p = _bary_matrix(tail.nodes, tail._bw, s_up)
    b = np.einsum("pm,mij->pij", p, tail.beta)
    four_pi = 4.0 * math.pi
    prev = None
    for _ in range(max_sweeps):
        b3 = _matcube(b)
        f_bi = _reverse_cumulative(bi * b3, h, np.zeros(a.shape))
        f_ai = _reverse_cumulative(ai * b3, h, np.zeros(a.shape))
        new = u + four_pi * (ai * f_bi - bi * f_ai)
        change = float(np.max(np.abs(new - b)))
        b = new
        if prev is not None and change <= tol:
            break
        prev = change
    b3 = _matcube(b)
    f_bi = _reverse_cumulative(bi * b3, h, np.zeros(a.shape))
    f_ai = _reverse_cumulative(ai * b3, h, np.zeros(a.shape))
    db = du + 2.0 * four_pi * (aip * f_bi - bip * f_ai)
    return b, db


def _blown(b: np.ndarray) -> bool:
    return (not np.all(np.isfinite(b))) or float(np.max(np.abs(b))) > _BLOWUP


def hm_continue(C: CouplingMatrix, delta, start, S_min: float, h: float = 1e-3) -> HMGrid:
    """Continue the tail solution leftward by fixed-step RK4.

    start is either a PicardTail (its samples populate the grid above S0) or
    a bare (S0, beta1, dbeta1) triple.  On blow-up the pole is bracketed to
    h/16 and PoleEncountered is raised with the valid grid attached.
    """
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    if h > 1e-2:
        raise DomainError("continuation step must satisfy h <= 1e-2")
    if isinstance(start, PicardTail):
        tail = start
        s0 = tail.S0
        n_up = int(round((tail.S_max - s0) / h))
        s_up = s0 + h * np.arange(n_up + 1)
        b_up, db_up = _fill_uniform_tail(tail, s_up, h)
        b0, db0 = b_up[0], db_up[0]
    else:
        s0, b0, db0 = start
        b0 = np.asarray(b0, dtype=complex)
        db0 = np.asarray(db0, dtype=complex)
        s_up = np.array([s0])
        b_up = b0[None]
        db_up = db0[None]
        tail = None
    n_down = int(round((s0 - S_min) / h))
    s_list = [s0]
    b_list = [b0]
    db_list = [db0]
    b, db = b0, db0
    pole_at = None
    for i in range(n_down):
        s_cur = s0 - i * h
        bn, dbn = _rk4_step(s_cur, b, db, -h, delta)
        if _blown(bn):
            lo, hi = s_cur - h, s_cur
            bb, dbb = b, db
            step = h
            while step > h / 16.0:
                step *= 0.5
                bt, dbt = _rk4_step(hi, bb, dbb, -step, delta)
                if _blown(bt):
                    lo = hi - step
                else:
                    bb, dbb = bt, dbt
                    hi = hi - step
                    lo = hi - step
            pole_at = 0.5 * (lo + hi)
            break
        b, db = bn, dbn
        s_list.append(s_cur - h)
        b_list.append(b)
        db_list.append(db)
    s_down = np.array(s_list[1:][::-1])
    s_all = np.concatenate([s_down, s_up])
    b_all = np.concatenate([np.array(b_list[1:][::-1]).reshape(-1, *b0.shape), b_up])
    db_all = np.concatenate([np.array(db_list[1:][::-1]).reshape(-1, *b0.shape), db_up])
    grid = HMGrid(C, delta, s_all, b_all, db_all, S_tail=s0, h=h, pole_at=pole_at)
    if pole_at is not None:
        err = PoleEncountered(pole_at)
        err.grid = grid
        raise err
    return grid


_GRID_CACHE: dict = {}


def hm_solve(C: CouplingMatrix, delta, S_min: float = -1.5, h: float = 1e-3,
             s0: float = 2.0, n_tail: int = 64, tol: float = 1e-12,
             cached: bool = True) -> HMGrid:
    """Tail Picard solve plus leftward continuation, with adaptive tail start.

    The tail start is raised by 0.5 (at most four times) if the Picard map
    fails to contract.  The start is snapped to a multiple of h so query
    points that are multiples of h land exactly on grid nodes.
    """
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    m = float(np.max(np.abs(delta))) if delta.size else 0.0
    s0 = max(s0, 1.0 + m)
    s0 = round(s0 / h) * h
    key = (C.entries.tobytes(), delta.tobytes(), float(S_min), float(h), s0, n_tail, tol)
    if cached and key in _GRID_CACHE:
        return _GRID_CACHE[key]
    last_exc = None
    for attempt in range(5):
        try:
            tail = hm_tail_picard(C, delta, s0 + 0.5 * attempt, n_tail=n_tail, tol=tol)
            grid = hm_continue(C, delta, tail, S_min, h)
            if cached:
                _GRID_CACHE[key] = grid
            return grid
        except NoContraction as exc:
            last_exc = exc
    raise last_exc


def alpha1(grid: HMGrid, S: float) -> np.ndarray:
    """alpha1(S) = 2i int_S^infty beta1(t)^2 dt.

    This is the antiderivative of -2i beta1^2 vanishing at +infinity; the
    sign is fixed by that differential relation (which also makes the
    log-derivative identities of the determinants come out right), not by
    the integral form sometimes quoted with the opposite sign.
    """
    return 2.0j * grid.int_beta_sq(S)


def beta2(grid: HMGrid, S: float) -> np.ndarray:
    """beta2 = -(i/2) D beta1 - i beta1 alpha1."""
    return -0.5j * grid.dbeta1_at(S) - 1.0j * grid.beta1_at(S) @ alpha1(grid, S)


def ncp2_residual(grid: HMGrid, S: float) -> float:
    """Sup-norm defect of D^2 beta1 = 4{s, beta1} + 8 beta1^3 at a grid point.

    The second derivative comes from the five-point central stencil on the
    stored grid, so the value reflects both solver and grid-spacing error.
    """
    i = grid.index_of(S)
    if i < 2 or i > grid.S_values.size - 3:
        raise OutOfRange("residual stencil needs two neighbors on each side")
    f = grid.beta1
    h = grid.h
    d2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h)
    b = f[i]
    sm = grid.s_matrix(grid.S_values[i])
    rhs = 4.0 * (sm @ b + b @ sm) + 8.0 * b @ b @ b
    return float(np.max(np.abs(d2 - rhs)))


@dataclass(frozen=True)
class LaxPair:
    """Coefficients of A(lambda) and U_D(lambda) plus the per-shift pieces."""

    A2: np.ndarray
    A1: np.ndarray
    A0: np.ndarray
    UD1: np.ndarray
    UD0: np.ndarray
    U_j: tuple
    sigmas: dict

    def a_at(self, lam: complex) -> np.ndarray:
        return self.A2 * lam * lam + self.A1 * lam + self.A0

    def ud_at(self, lam: complex) -> np.ndarray:
        return self.UD1 * lam + self.UD0


def lax_matrices(grid: HMGrid, S: float) -> LaxPair:
    """Assemble A(lambda), U_D(lambda) and the U_j at the point S."""
    r = grid.r
    ir = np.eye(r, dtype=complex)
    b = grid.beta1_at(S)
    db = grid.dbeta1_at(S)
    al = alpha1(grid, S)
    sm = grid.s_matrix(S)
    a2 = 0.5j * np.kron(ir, SIGMA3)
    a1 = np.kron(b, SIGMA1)
    a0 = -0.5 * np.kron(db, SIGMA2) + 1.0j * np.kron(b @ b + sm, SIGMA3)
    ud1 = 1.0j * np.kron(ir, SIGMA3)
    ud0 = 2.0 * np.kron(b, SIGMA1)
    u_j = []
    for j in range(r):
        e = np.zeros((r, r), dtype=complex)
        e[j, j] = 1.0
        lin = 1.0j * np.kron(e, SIGMA3)
        const = 1.0j * np.kron(al @ e - e @ al, np.eye(2, dtype=complex)) \
            + np.kron(b @ e + e @ b, SIGMA1)
        u_j.append((lin, const))
    return LaxPair(a2, a1, a0, ud1, ud0, tuple(u_j),
                   {"sigma1": SIGMA1, "sigma2": SIGMA2, "sigma3": SIGMA3})


def zero_curvature_residual_p2(grid: HMGrid, S: float, lambda_samples) -> float:
    """Max defect of the compatibility condition for (U_D, A) over lambda.

    DA is assembled analytically (Dbeta1 from the grid, D^2 beta1 from the
    equation, Ds = 1); the commutator ordering is fixed so the residual
    vanishes identically on exact solutions.
    """
    r = grid.r
    ir = np.eye(r, dtype=complex)
    pair = lax_matrices(grid, S)
    b = grid.beta1_at(S)
    db = grid.dbeta1_at(S)
    d2b = grid.d2beta1_at(S)
    da1 = np.kron(db, SIGMA1)
    da0 = -0.5 * np.kron(d2b, SIGMA2) + 1.0j * np.kron(b @ db + db @ b + ir, SIGMA3)
    dlam_ud = 1.0j * np.kron(ir, SIGMA3)
    worst = 0.0
    for lam in lambda_samples:
        a = pair.a_at(lam)
        ud = pair.ud_at(lam)
        da = da1 * lam + da0
        res = dlam_ud - da + (a @ ud - ud @ a)
        worst = max(worst, float(np.max(np.abs(res))))
    return worst
