"""Closed-form asymptotic variance and the momentum-space moment oracle.

Two independent routes to the walk's moments live here:

* the closed form ``sigma^2(t) ~ a t^2 + b t + c`` built from the Hadamard
  constants ``A``, ``B``, ``C`` (long-time limits of power sums of the
  transfer matrix ``W_k``);
* :func:`spectral_moment_oracle`, which evaluates the exact finite-``t``
  moment sums on a uniform momentum grid.  Every integrand is a trigonometric
  polynomial of degree at most ``2t``, so the rectangle rule on ``K > 2t``
  nodes is exact up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import HomogeneousChannel, channel_invariants, ChannelInvariants
from .core import PHYSICAL_TOL, as_coin, walk_transfer_matrix, zl_zr_matrices
from .exceptions import DomainError, GridTooCoarse, MixedShiftOp, UnphysicalState

SQRT2 = np.sqrt(2.0)
ALPHA = 1 - SQRT2 / 2

A = np.array(
    [
        [1, 0, 0, 0],
        [0, ALPHA, 0, ALPHA],
        [0, 0, 1 - 2 * ALPHA, 0],
        [0, ALPHA, 0, ALPHA],
    ]
)
B = np.array(
    [
        [0, 0, 0, 0],
        [0, SQRT2 / 4, 0, 3 * SQRT2 / 4 - 1],
        [0, 0, ALPHA, 0],
        [0, -SQRT2 / 4, 0, SQRT2 / 4],
    ]
)
C = np.array(
    [
        [0, 0, 0, 0],
        [0, 3 * SQRT2 / 16, 0, -SQRT2 / 16],
        [0, 0, SQRT2 / 8, 0],
        [0, -SQRT2 / 16, 0, 3 * SQRT2 / 16],
    ]
)


def _check_t(t):
    if int(t) != t or t < 0:
        raise DomainError(f"t must be a non-negative integer, got {t!r}")


def gamma1(t: int) -> np.ndarray:
    """Long-time form of ``mean_k sum_{m=1}^t W_k^m``: ``t A - B``."""
    _check_t(t)
    return t * A - B


def gamma2(t: int) -> np.ndarray:
    """Long-time form of ``mean_k sum_{m=1}^t (m - 1) W_k^m``."""
    _check_t(t)
    return t * (t - 1) / 2 * A + B - C


def gamma2_prime(t: int) -> np.ndarray:
    """Long-time form of ``mean_k sum_{m=1}^t sum_{m'<m} W_k^{m'}``."""
    _check_t(t)
    return t * (t - 1) / 2 * A - t * B + C


@dataclass(frozen=True)
class VarianceModel:
    a: float
    b: float
    c: float
    mu_drift: float

    def variance(self, t):
        t = np.asarray(t, dtype=float)
        return self.a * t * t + self.b * t + self.c


def variance_model(r, inv: ChannelInvariants) -> VarianceModel:
    """Asymptotic variance coefficients for the Hadamard walk.

    ``r`` is the initial coin Bloch vector ``(1/2, r1, r2, r3)``.  The drift is
    the asymptotic slope of the mean, ``mu - 2 alpha (r1 + r3)``; the minus
    sign comes from ``|L>`` (``r3 > 0``) stepping to the left.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (4,) or not np.all(np.isfinite(r)):
        raise UnphysicalState(f"expected a finite Bloch 4-vector, got {r!r}")
    if abs(r[0] - 0.5) > PHYSICAL_TOL or r[1:] @ r[1:] > 0.25 + PHYSICAL_TOL:
        raise UnphysicalState(f"Bloch vector {r!r} is not a physical coin state")
    _, r1, _, r3 = r
    a = ALPHA - 4 * ALPHA**2 * (r3 + r1) ** 2
    b = 2 * SQRT2 * ALPHA * (r3**2 - r1**2) + inv.g
    c = -0.5 * (r3 - r1) ** 2 + 3 * SQRT2 / 8
    return VarianceModel(a=float(a), b=float(b), c=float(c), mu_drift=float(inv.mu - 2 * ALPHA * (r1 + r3)))


def variance_at(model: VarianceModel, t) -> float:
    return model.variance(t)


def hadamard_dispersion(k):
    """Quasi-energy of the Hadamard walk, ``arccos(cos(k)^2)`` in ``[0, pi/2]``."""
    return np.arccos(np.clip(np.cos(k) ** 2, -1.0, 1.0))


def k_grid(k_points: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(k_points) / k_points


def transfer_power_sums(coin, t: int, k_points: int | None = None):
    """Grid averages of the three power sums of ``W_k`` behind the Gamma matrices.

    Returns ``(S1, S2, S2p)`` with ``S1 = sum_{m=1}^t W^m``,
    ``S2 = sum_{m=1}^t (m-1) W^m`` and ``S2p = sum_{m'=1}^{t-1} (t-m') W^{m'}``,
    each averaged over ``k``.  Exact for ``k_points > 2t``.
    """
    _check_t(t)
    if k_points is None:
        k_points = max(64, 2 * t + 2)
    if k_points <= 2 * t:
        raise GridTooCoarse(f"{k_points} nodes cannot integrate degree {2 * t} exactly")
    w = walk_transfer_matrix(coin, k_grid(k_points))
    power = np.broadcast_to(np.eye(4), w.shape).copy()
    s1 = np.zeros((4, 4))
    s2 = np.zeros((4, 4))
    s2p = np.zeros((4, 4))
    for m in range(1, t + 1):
        power = w @ power
        avg = power.mean(axis=0)
        s1 += avg
        s2 += (m - 1) * avg
        s2p += (t - m) * avg
    return s1, s2, s2p


def asymptotic_matrices(coin, k_points: int = 512, tol: float = 1e-9):
    """Independent quadrature of the long-time constants ``(A, B, C)``.

    ``A`` averages the projector onto the eigenvalue-1 subspace of ``W_k``;
    ``B`` and ``C`` are Abel sums of ``sum_m W^m`` and ``sum_m m W^m`` over the
    complementary subspace, ``-W (I - W)^+`` and ``-W ((I - W)^+)^2``.  The
    integrands are analytic in ``k`` when that subspace has fixed dimension,
    so the periodic rectangle rule converges geometrically.
    """
    w = walk_transfer_matrix(coin, k_grid(k_points))
    eye = np.eye(4)
    u, sv, vt = np.linalg.svd(eye - w)
    kernel = sv < tol
    proj = np.einsum("kai,ki,kib->kab", np.swapaxes(vt, -1, -2), kernel, vt)
    inv_sv = np.where(kernel, 0.0, 1.0 / np.where(kernel, 1.0, sv))
    pinv = np.einsum("kai,ki,kib->kab", np.swapaxes(vt, -1, -2), inv_sv, np.swapaxes(u, -1, -2))
    a = proj.mean(axis=0)
    b = -(w @ pinv).mean(axis=0)
    c = -(w @ pinv @ pinv).mean(axis=0)
    return a, b, c


def spectral_moment_oracle(coin, channel: HomogeneousChannel, r, t: int, k_points: int | None = None):
    """Exact ``(<x>_t, <x^2>_t)`` from the momentum-space moment sums.

    With ``f = <F|F'> = i mu`` and ``s = <F'|F'>`` the superoperators are::

        G    = (f - i Z_L) W
        Gdag = (-f + i Z_R) W
        J    = (s + i f (Z_L + Z_R) + Z_L Z_R) W

    and, writing ``v_m = W^(m-1) r``::

        <x>   = i  mean_k sum_m Tr(Gdag v_m)
        <x^2> = mean_k sum_m [Tr(J v_m)
                 + sum_{m'<m} Tr(Gdag W^(m-m'-1) G v_m' + G W^(m-m'-1) Gdag v_m')]

    The inner sum over ``m'`` is carried as a running vector, so the cost is
    ``O(t * k_points)``.
    """
    _check_t(t)
    if not channel.is_pure_shift:
        raise MixedShiftOp("the spectral oracle needs a pure-shift channel")
    need = max(64, 4 * t + 4)
    if k_points is None:
        k_points = need
    if k_points % 2:
        raise DomainError(f"k_points must be even, got {k_points}")
    if k_points < need:
        raise GridTooCoarse(f"k_points={k_points} < {need} required for t={t}")
    coin = as_coin(coin)
    inv = channel_invariants(channel)
    f = 1j * inv.mu
    zl, zr = zl_zr_matrices()
    eye = np.eye(4)

    # every superoperator is a constant 4x4 matrix times W_k
    g = f * eye - 1j * zl
    gd = -f * eye + 1j * zr
    j = inv.s * eye + 1j * f * (zl + zr) + zl @ zr

    # k is the last axis so each step is a few long vector operations
    w = np.moveaxis(walk_transfer_matrix(coin, k_grid(k_points)), 0, -1)[:, :, None, :]
    # x[:, 0] = W^(m-1) r; x[:, 1] = sum_{m'<m} W^(m-1-m') G v_m'; x[:, 2] likewise with Gdag
    x = np.zeros((4, 3, k_points), dtype=complex)
    x[:, 0] = np.asarray(r, dtype=complex)[:, None]
    first = np.zeros(k_points, dtype=complex)
    second = np.zeros(k_points, dtype=complex)
    for _ in range(t):
        y = w[:, 0] * x[0] + w[:, 1] * x[1] + w[:, 2] * x[2] + w[:, 3] * x[3]
        wv = y[:, 0]
        # Tr(O) = 2 r_0, so only row 0 of each constant factor enters
        first += 2 * (gd[0] @ wv)
        second += 2 * (j[0] @ wv + gd[0] @ y[:, 1] + g[0] @ y[:, 2])
        y[:, 1] += g @ wv
        y[:, 2] += gd @ wv
        x = y
    mean = (1j * first.mean()).real
    return float(mean), float(second.mean().real)
