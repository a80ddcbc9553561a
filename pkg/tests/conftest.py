import numpy as np
import pytest

from dqwalk.channel import coherent_channel, tunneling_from_bias

SQRT_HALF = np.sqrt(0.5)


@pytest.fixture
def psi_plus_i():
    """(|L> + i|R>)/sqrt(2), the symmetric start used throughout."""
    return np.array([SQRT_HALF, 1j * SQRT_HALF])


@pytest.fixture
def standard_channels():
    return {
        "coherent": coherent_channel(),
        "d1_P0.25": tunneling_from_bias(1, 0.5, 0.25),
        "d2_P0.75": tunneling_from_bias(2, 0.5, 0.75),
    }


def pure_state_walk(coin, psi, t_max):
    """Amplitudes psi[x, c] of the coherent walk, written without the density-matrix code."""
    n = 2 * t_max + 1
    amp = np.zeros((n, 2), dtype=complex)
    amp[t_max] = psi
    states = [amp.copy()]
    for _ in range(t_max):
        amp = amp @ np.asarray(coin).T
        nxt = np.zeros_like(amp)
        nxt[:-1, 0] = amp[1:, 0]  # L: x -> x - 1
        nxt[1:, 1] = amp[:-1, 1]  # R: x -> x + 1
        amp = nxt
        states.append(amp.copy())
    return states


def haar_unitary(rng, n=2):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_coin_state(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)
