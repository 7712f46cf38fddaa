"""Secrecy rate and closed-form secure beamforming for a fixed selection.

For a selection with stacked channels ``h_B`` and ``h_E`` the best
beamformer maximises the generalized Rayleigh quotient

    (sigma2 + P_t |f^H h_B|^2) / (sigma2 + P_t |f^H h_E|^2),   ||f|| = 1,

i.e. it is the principal generalized eigenvector of the pencil
``(sigma2 I + P_t h_B h_B^H, sigma2 I + P_t h_E h_E^H)`` and the maximum
secrecy rate is ``log2(lambda_max)``.

Both matrices are identity plus rank one, so every eigenvalue other than
the two living in ``span{h_B, h_E}`` equals one. The production path works
on that 2-D subspace only. Writing ``u, v`` for the channels scaled by
``sqrt(P_t/sigma2)``, the excess ``mu = lambda_max - 1`` is the largest
root of

    mu**2 - t*mu - g = 0,
    t = ||u||^2 - (||v||^2 + |u^H v|^2) / (1 + ||v||^2),
    g = (||u||^2 ||v||^2 - |u^H v|^2) / (1 + ||v||^2) >= 0,

which has no cancellation in its discriminant and depends on the
selection only through the additive sums ``||u||^2``, ``||v||^2`` and
``u^H v``. The enumeration solvers exploit this through
:class:`SelectionEvaluator`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import ChannelTable, complex_to_pairs
from .errors import IndexOutOfRange, InfeasibleSelection
from .grid import GridSpec

LN2 = math.log(2.0)


@dataclass(frozen=True)
class SystemParams:
    """Transmit power and receiver noise power, both linear."""

    P_t: float = 1.0
    sigma2: float = 1.0

    def __post_init__(self):
        if not (self.P_t > 0 and self.sigma2 > 0):
            raise ValueError("P_t and sigma2 must be strictly positive")

    @classmethod
    def from_snr_db(cls, snr_db: float) -> SystemParams:
        return cls(P_t=10 ** (snr_db / 10), sigma2=1.0)

    @property
    def snr(self) -> float:
        return self.P_t / self.sigma2


@dataclass(frozen=True)
class Selection:
    """One sampling point per antenna, validated against `grid`."""

    indices: tuple[int, ...]
    grid: GridSpec

    def __post_init__(self):
        idx = tuple(int(a) for a in self.indices)
        object.__setattr__(self, "indices", idx)
        g = self.grid
        if len(idx) != g.N:
            raise InfeasibleSelection(f"expected {g.N} indices, got {len(idx)}")
        for n, a in enumerate(idx, start=1):
            if not 1 <= a <= g.M:
                raise IndexOutOfRange(f"index {a} outside 1..{g.M}")
            if not g.b * (n - 1) + 1 <= a <= g.b * n:
                raise InfeasibleSelection(f"a_{n}={a} is outside zone {n}")
        for i, j in zip(idx, idx[1:]):
            if j - i < g.a_min:
                raise InfeasibleSelection(f"points {i} and {j} closer than a_min={g.a_min}")

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True, eq=False)
class RateReport:
    rate: float
    lambda_max: float
    w: np.ndarray
    degenerate: bool = False  # Bob's channel is identically zero

    def to_dict(self) -> dict:
        return {"rate": self.rate, "lambda_max": self.lambda_max,
                "w": complex_to_pairs(self.w), "degenerate": self.degenerate}


def channels_of(sel: Selection, table: ChannelTable) -> tuple[np.ndarray, np.ndarray]:
    """Stacked channel vectors of a selection.

    Entries are conjugated tabulated gains so that the received amplitude is
    ``w^H h`` with ``h = [h_a1, ..., h_aN]^H``.
    """
    idx = np.fromiter(sel.indices, dtype=int)
    if np.any(idx < 1) or np.any(idx > table.grid.M):
        raise IndexOutOfRange(f"selection {sel.indices} does not fit a grid of M={table.grid.M}")
    return np.conj(table.h_B[idx - 1]), np.conj(table.h_E[idx - 1])


def secrecy_rate_given_w(w, h_B, h_E, p: SystemParams) -> float:
    """Secrecy rate in bits/s/Hz of beamformer `w`; may be negative."""
    snr_b = abs(np.vdot(w, h_B)) ** 2 / p.sigma2
    snr_e = abs(np.vdot(w, h_E)) ** 2 / p.sigma2
    return (math.log1p(snr_b) - math.log1p(snr_e)) / LN2


def excess_eigenvalue(p: float, q: float, c: float, g: float) -> float:
    """``lambda_max - 1`` of the 2-D pencil from its Gram invariants.

    `p`, `q` are the squared norms of the scaled Bob/Eve channels, `c` is
    ``|u^H v|^2`` and `g` is ``(p*q - c)/(1+q)``.
    """
    t = p - (q + c) / (1.0 + q)
    disc = math.sqrt(t * t + 4.0 * g)
    if t >= 0:
        return 0.5 * (t + disc)
    return 2.0 * g / (disc - t)


def rate_from_sums(p: float, q: float, s: complex, n: int) -> float:
    """Max secrecy rate from the additive sums ``||u||^2, ||v||^2, u^H v``."""
    if n == 1:
        return (math.log1p(p) - math.log1p(q)) / LN2
    c = s.real * s.real + s.imag * s.imag
    g = max(p * q - c, 0.0) / (1.0 + q)
    return math.log1p(excess_eigenvalue(p, q, c, g)) / LN2


def _orthonormal_pair(u, v):
    """Orthonormal e1, e2 whose span contains u and v (up to round-off)."""
    n = len(u)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu > 0:
        e1 = u / nu
    elif nv > 0:
        e1 = v / nv
    else:
        e1 = np.zeros(n, dtype=complex)
        e1[0] = 1.0
    r = v - np.vdot(e1, v) * e1
    r = r - np.vdot(e1, r) * e1
    nr = np.linalg.norm(r)
    if nr <= 1e-10 * nv:
        # v is (numerically) parallel to u: complete with a canonical vector
        k = int(np.argmin(np.abs(e1)))
        r = -np.conj(e1[k]) * e1
        r[k] += 1.0
        r = r - np.vdot(e1, r) * e1
        nr = np.linalg.norm(r)
    return e1, r / nr


def _solve_pencil(h_B, h_E, p: SystemParams):
    h_B = np.asarray(h_B, dtype=complex)
    h_E = np.asarray(h_E, dtype=complex)
    if h_B.shape != h_E.shape or h_B.ndim != 1 or len(h_B) == 0:
        raise ValueError("h_B and h_E must be nonempty vectors of equal length")
    n = len(h_B)
    scale = math.sqrt(p.snr)
    u = scale * h_B
    v = scale * h_E
    pu = float(np.vdot(u, u).real)
    qv = float(np.vdot(v, v).real)
    degenerate = pu == 0.0

    if n == 1:
        lam = (1.0 + pu) / (1.0 + qv)
        rate = (math.log1p(pu) - math.log1p(qv)) / LN2
        return lam, rate, np.array([math.sqrt(p.P_t) + 0j]), degenerate

    e1, e2 = _orthonormal_pair(u, v)
    s = np.vdot(u, v)
    c = abs(s) ** 2
    # p*q - |u^H v|^2 = ||u||^2 * ||v - proj_u v||^2, computed without cancellation
    if pu > 0:
        r = v - np.vdot(e1, v) * e1
        g = pu * float(np.vdot(r, r).real) / (1.0 + qv)
    else:
        g = 0.0
    mu = excess_eigenvalue(pu, qv, c, g)

    ut = np.array([np.vdot(e1, u), np.vdot(e2, u)])
    vt = np.array([np.vdot(e1, v), np.vdot(e2, v)])
    # (B - lambda E) y = 0 with B = I + ut ut^H, E = I + vt vt^H, lambda = 1 + mu
    m2 = np.outer(ut, ut.conj()) - mu * np.eye(2) - (1.0 + mu) * np.outer(vt, vt.conj())
    norms = np.linalg.norm(m2, axis=1)
    row = m2[int(np.argmax(norms))]
    if norms.max() <= 1e-13 * (1.0 + pu + qv):
        y = np.array([1.0 + 0j, 0j])
    else:
        y = np.array([row[1], -row[0]])
    f = y[0] * e1 + y[1] * e2
    f = f / np.linalg.norm(f)
    return 1.0 + mu, math.log1p(mu) / LN2, math.sqrt(p.P_t) * f, degenerate


def optimal_beamformer(h_B, h_E, p: SystemParams) -> np.ndarray:
    """Secrecy-optimal beamformer with ``||w||^2 = P_t``.

    If `h_B` is identically zero the returned direction is orthogonal to
    `h_E` (zero rate) whenever that is possible; `max_secrecy_rate` flags
    this case in its report.
    """
    return _solve_pencil(h_B, h_E, p)[2]


def max_secrecy_rate(h_B, h_E, p: SystemParams) -> RateReport:
    lam, rate, w, degenerate = _solve_pencil(h_B, h_E, p)
    return RateReport(rate=rate, lambda_max=lam, w=w, degenerate=degenerate)


def mrt_beamformer(h_B, p: SystemParams) -> np.ndarray:
    h_B = np.asarray(h_B, dtype=complex)
    nrm = np.linalg.norm(h_B)
    if nrm == 0:
        w = np.zeros(len(h_B), dtype=complex)
        w[0] = 1.0
        return math.sqrt(p.P_t) * w
    return math.sqrt(p.P_t) * h_B / nrm


def dense_pencil_oracle(h_B, h_E, p: SystemParams) -> tuple[float, np.ndarray]:
    """Reference solve of the full N x N generalized eigenproblem (tests only)."""
    h_B = np.asarray(h_B, dtype=complex)
    h_E = np.asarray(h_E, dtype=complex)
    eye = np.eye(len(h_B))
    A_B = p.sigma2 * eye + p.P_t * np.outer(h_B, h_B.conj())
    A_E = p.sigma2 * eye + p.P_t * np.outer(h_E, h_E.conj())
    vals, vecs = scipy.linalg.eigh(A_B, A_E)
    return float(vals[-1]), vecs[:, -1]


class SelectionEvaluator:
    """Max secrecy rate of selections on one channel table.

    Per-point terms are precomputed so that evaluating a selection costs N
    scalar additions; `rate` sums in index order, which lets prefix-based
    enumeration reproduce it bit for bit. `evaluations` counts calls.
    """

    def __init__(self, table: ChannelTable, p: SystemParams):
        x = p.snr
        hb = np.asarray(table.h_B)
        he = np.asarray(table.h_E)
        self.N = table.grid.N
        self.bob = (x * np.abs(hb) ** 2).tolist()
        self.eve = (x * np.abs(he) ** 2).tolist()
        self.cross = (x * hb * np.conj(he)).tolist()
        self.evaluations = 0

    def sums(self, indices):
        pb = qe = 0.0
        s = 0j
        for a in indices:
            pb += self.bob[a - 1]
            qe += self.eve[a - 1]
            s += self.cross[a - 1]
        return pb, qe, s

    def rate_from_sums(self, pb, qe, s) -> float:
        self.evaluations += 1
        return rate_from_sums(pb, qe, s, self.N)

    def rate(self, indices) -> float:
        return self.rate_from_sums(*self.sums(indices))
