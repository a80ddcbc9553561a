"""Pauli/Bloch algebra, coin operators and the momentum-space transfer matrix.

Conventions used everywhere in the package:

* coin basis ordered ``(|L>, |R>)``; ``sigma_z = diag(1, -1)`` so ``|L>`` has
  Bloch vector ``(1/2, 0, 0, 1/2)``;
* Pauli index order ``(I, X, Y, Z)``;
* the conditional shift moves ``|R>`` to ``x + 1`` and ``|L>`` to ``x - 1``;
* momentum states are ``|k> = sum_x exp(-i k x) |x>``.  With this choice the
  coin-conditioned shift is ``diag(exp(-ik), exp(ik))`` in the ``(L, R)``
  basis and a position translation by ``l`` sites multiplies ``|k>`` by
  ``exp(i l k)``.

A 2x2 operator ``O`` is represented by the real 4-vector ``r_i = Tr(O s_i)/2``
(complex for non-hermitian ``O``), and a superoperator by the 4x4 matrix
``M_ij = Tr(s_i S(s_j)) / 2``.
"""

from __future__ import annotations

import numpy as np

from .exceptions import BadTrace, NonHermitian, NotUnitary

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
IDENTITY = np.eye(2, dtype=complex)

UNITARY_TOL = 1e-12
PHYSICAL_TOL = 1e-10


def as_coin(coin, atol=UNITARY_TOL) -> np.ndarray:
    """Validate a 2x2 coin and return it as a complex array."""
    u = np.asarray(coin, dtype=complex)
    if u.shape != (2, 2):
        raise NotUnitary(f"coin must be 2x2, got shape {u.shape}")
    err = np.abs(u.conj().T @ u - IDENTITY).max()
    if err > atol:
        raise NotUnitary(f"coin is not unitary (max |U^dag U - I| = {err:.3g})")
    return u


def bloch_from_density(rho, atol=PHYSICAL_TOL) -> np.ndarray:
    """Bloch vector ``(Tr(rho s_i)/2)_i`` of a physical 2x2 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise NonHermitian(f"expected a 2x2 matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > atol:
        raise NonHermitian("density matrix is not hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1) > atol:
        raise BadTrace(f"density matrix has trace {tr!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise NonHermitian("density matrix is not positive semidefinite")
    return np.einsum("iab,ba->i", PAULI, rho).real / 2


def density_from_bloch(r) -> np.ndarray:
    """Inverse of :func:`bloch_from_density`: ``sum_i r_i s_i``."""
    r = np.asarray(r)
    return np.einsum("...i,iab->...ab", r, PAULI)


def bloch_of_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return bloch_from_density(np.outer(psi, psi.conj()))


def superop_matrix(left, right) -> np.ndarray:
    """Bloch matrix of the superoperator ``O -> left @ O @ right``.

    ``left`` and ``right`` may carry leading batch dimensions.
    """
    return 0.5 * np.einsum("iab,...bc,jcd,...da->...ij", PAULI, left, PAULI, right)


def momentum_coin(coin, k) -> np.ndarray:
    """``U(k) = diag(exp(-ik), exp(ik)) @ coin``; ``k`` may be an array."""
    k = np.asarray(k, dtype=float)
    phase = np.stack([np.exp(-1j * k), np.exp(1j * k)], axis=-1)
    return phase[..., :, None] * np.asarray(coin, dtype=complex)


def walk_transfer_matrix(coin, k) -> np.ndarray:
    """Real 4x4 Bloch matrix of ``O -> U(k) O U(k)^dag``.

    Vectorised over ``k``: an array of shape ``s`` gives shape ``s + (4, 4)``.
    For the Hadamard coin this is::

        [[1, 0,        0,        0       ],
         [0, 0,        sin(2k),  cos(2k) ],
         [0, 0,       -cos(2k),  sin(2k) ],
         [0, 1,        0,        0       ]]
    """
    u = momentum_coin(as_coin(coin), k)
    m = superop_matrix(u, np.conj(np.swapaxes(u, -1, -2)))
    return m.real


def zl_zr_matrices() -> tuple[np.ndarray, np.ndarray]:
    """Bloch matrices of left (``O -> Z O``) and right (``O -> O Z``) multiplication by sigma_z."""
    z = PAULI[3]
    return superop_matrix(z, IDENTITY), superop_matrix(IDENTITY, z)
