"""Exact density-matrix evolution of the decoherent walk on a finite lattice.

The state is a dense array ``rho[x, c, y, d]`` (position-major, coin fastest,
so ``rho.reshape(2N, 2N)`` is the usual matrix).  The lattice is sized up
front from ``t_max`` and the largest channel shift, so probability never
reaches the edge and no wraparound or resizing is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channel import HomogeneousChannel
from .core import as_coin
from .exceptions import BoundaryBreach, DomainError, NotNormalized

# coin index -> conditional displacement; L = 0 moves left, R = 1 moves right
COIN_SHIFT = (-1, 1)


@dataclass(frozen=True)
class WalkState:
    rho: np.ndarray
    x_min: int
    x_max: int
    t: int
    t_max: int
    d_max: int

    @property
    def n_sites(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.x_min, self.x_max + 1)

    @property
    def matrix(self) -> np.ndarray:
        n = 2 * self.n_sites
        return self.rho.reshape(n, n)


@dataclass
class WalkObservables:
    t: int
    positions: np.ndarray
    distribution: np.ndarray
    mean: float
    second_moment: float
    variance: float
    negativity: float | None = None


def lattice_size(t_max: int, d_max: int) -> int:
    return 2 * (1 + d_max) * t_max + 1


def init_state(psi_coin, t_max: int, channel: HomogeneousChannel, atol=1e-12) -> WalkState:
    """Walker localised at ``x = 0`` with coin state ``psi_coin``.

    ``psi_coin`` is either two amplitudes or a 2x2 coin density matrix.
    """
    if int(t_max) != t_max or t_max < 0:
        raise DomainError(f"t_max must be a non-negative integer, got {t_max!r}")
    t_max = int(t_max)
    psi = np.asarray(psi_coin, dtype=complex)
    if psi.shape == (2,):
        norm = np.vdot(psi, psi).real
        if abs(norm - 1) > atol:
            raise NotNormalized(f"coin state has norm^2 {norm!r}")
        coin_rho = np.outer(psi, psi.conj())
    elif psi.shape == (2, 2):
        tr = np.trace(psi).real
        if abs(tr - 1) > atol:
            raise NotNormalized(f"coin density matrix has trace {tr!r}")
        coin_rho = psi
    else:
        raise NotNormalized(f"expected 2 amplitudes or a 2x2 matrix, got shape {psi.shape}")

    d_max = channel.max_shift
    n = lattice_size(t_max, d_max)
    half = n // 2
    rho = np.zeros((n, 2, n, 2), dtype=complex)
    rho[half, :, half, :] = coin_rho
    return WalkState(rho=rho, x_min=-half, x_max=half, t=0, t_max=t_max, d_max=d_max)


def _translate(rho: np.ndarray, row: int, col: int, out: np.ndarray, weight: complex = 1.0):
    """``out[x + row, :, y + col, :] += weight * rho[x, :, y, :]`` with zero fill."""
    n = rho.shape[0]
    src_r = slice(max(-row, 0), n - max(row, 0))
    dst_r = slice(max(row, 0), n - max(-row, 0))
    src_c = slice(max(-col, 0), n - max(col, 0))
    dst_c = slice(max(col, 0), n - max(-col, 0))
    out[dst_r, :, dst_c, :] += weight * rho[src_r, :, src_c, :]


def _mix_coin(rho: np.ndarray, coin: np.ndarray) -> np.ndarray:
    """``(I x coin) rho (I x coin)^dag`` as explicit 2x2 combinations."""
    left = np.empty_like(rho)
    for a in range(2):
        left[:, a] = coin[a, 0] * rho[:, 0] + coin[a, 1] * rho[:, 1]
    out = np.empty_like(rho)
    cc = coin.conj()
    for d in range(2):
        out[:, :, :, d] = left[:, :, :, 0] * cc[d, 0] + left[:, :, :, 1] * cc[d, 1]
    return out


def _walk(rho: np.ndarray, coin: np.ndarray) -> np.ndarray:
    rho = _mix_coin(rho, coin)
    out = np.zeros_like(rho)
    for c, sc in enumerate(COIN_SHIFT):
        for c2, sc2 in enumerate(COIN_SHIFT):
            block = (slice(None), slice(c, c + 1), slice(None), slice(c2, c2 + 1))
            _translate(rho[block], sc, sc2, out[block])
    return out


def apply_channel(rho: np.ndarray, channel: HomogeneousChannel) -> np.ndarray:
    """``sum_n P_n rho P_n^dag`` with each ``P_n`` realised as index shifts."""
    out = np.zeros_like(rho)
    if channel.is_pure_shift:
        weights: dict[int, float] = {}
        for op in channel.ops:
            (l, a), = op.terms
            weights[l] = weights.get(l, 0.0) + abs(a) ** 2
        for l in sorted(weights):
            _translate(rho, l, l, out, weights[l])
        return out
    for op in channel.ops:
        for l, a in op.terms:
            for l2, a2 in op.terms:
                _translate(rho, l, l2, out, a * np.conj(a2))
    return out


def step(state: WalkState, coin, channel: HomogeneousChannel) -> WalkState:
    """One walk step ``U = S (I x coin)`` followed by the position channel."""
    if state.t >= state.t_max:
        raise BoundaryBreach(f"state already at t_max={state.t_max}; lattice was sized for that many steps")
    margin = 1 + state.d_max
    if channel.max_shift > state.d_max:
        raise BoundaryBreach(
            f"channel shift {channel.max_shift} exceeds the d_max={state.d_max} the lattice was sized for"
        )
    edge = np.concatenate([np.arange(margin), np.arange(state.n_sites - margin, state.n_sites)])
    if np.any(state.rho[edge]) or np.any(state.rho[:, :, edge]):
        raise BoundaryBreach("support reaches the lattice edge")
    # after this step the support lies within (1 + d_max)(t + 1) of the origin
    reach = margin * (state.t + 1)
    centre = -state.x_min
    win = slice(max(centre - reach, 0), min(centre + reach + 1, state.n_sites))
    rho = np.zeros_like(state.rho)
    rho[win, :, win, :] = apply_channel(_walk(state.rho[win, :, win, :], as_coin(coin)), channel)
    return replace(state, rho=rho, t=state.t + 1)


def partial_transpose_coin(rho: np.ndarray) -> np.ndarray:
    """Partial transpose over the coin of ``rho[x, c, y, d]``."""
    return rho.transpose(0, 3, 2, 1)


def negativity(rho: np.ndarray) -> float:
    """Sum of the absolute values of the negative eigenvalues of the coin partial transpose.

    Equals ``(||rho^T_c||_1 - 1) / 2``.  Sites that carry no probability
    contribute only zero rows and are skipped.
    """
    diag = np.einsum("xcxc->x", rho).real
    keep = np.flatnonzero(diag > 0)
    sub = rho[np.ix_(keep, [0, 1], keep, [0, 1])]
    pt = partial_transpose_coin(sub).reshape(2 * len(keep), 2 * len(keep))
    ev = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    return float(-ev[ev < 0].sum())


def observables(state: WalkState, with_negativity: bool = False) -> WalkObservables:
    x = state.positions
    p = np.einsum("xcxc->x", state.rho).real
    mean = float(x @ p)
    m2 = float((x * x) @ p)
    return WalkObservables(
        t=state.t,
        positions=x,
        distribution=p,
        mean=mean,
        second_moment=m2,
        variance=m2 - mean * mean,
        negativity=negativity(state.rho) if with_negativity else None,
    )


def run(coin, channel: HomogeneousChannel, psi_coin, t_max: int, stride: int = 1, with_negativity: bool = False):
    """Evolve from ``t = 0`` to ``t_max`` and record observables every ``stride`` steps.

    The final step is always recorded.
    """
    if int(stride) != stride or stride < 1:
        raise DomainError(f"stride must be a positive integer, got {stride!r}")
    coin = as_coin(coin)
    state = init_state(psi_coin, t_max, channel)
    records = [observables(state, with_negativity)]
    while state.t < t_max:
        state = step(state, coin, channel)
        if state.t % stride == 0 or state.t == t_max:
            records.append(observables(state, with_negativity))
    return records
