"""Homogeneous position-decoherence channels.

A Kraus operator acting only on position and commuting with translations is
``P = sum_{x,l} p_l |x + l><x| (x) I``.  It is stored as its list of
``(l, p_l)`` terms.  In momentum space it is the multiplier
``F(k) = sum_l p_l exp(i l k)`` (see :mod:`dqwalk.core` for the sign).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, isfinite, sqrt

import numpy as np

from .exceptions import BadProbability, ConfigError, DomainError, IncompleteChannel, MixedShiftOp

COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class ShiftKrausOp:
    terms: tuple[tuple[int, complex], ...]

    def __post_init__(self):
        terms = tuple((int(l), complex(a)) for l, a in self.terms)
        if not terms:
            raise ValueError("a Kraus operator needs at least one term")
        shifts = [l for l, _ in terms]
        if len(set(shifts)) != len(shifts):
            raise ValueError(f"repeated shift in Kraus operator terms: {shifts}")
        object.__setattr__(self, "terms", terms)

    @property
    def is_pure_shift(self) -> bool:
        return len(self.terms) == 1

    def symbol(self, k):
        """``F(k) = sum_l p_l exp(i l k)``."""
        k = np.asarray(k, dtype=float)
        return sum(a * np.exp(1j * l * k) for l, a in self.terms)


@dataclass(frozen=True)
class HomogeneousChannel:
    ops: tuple[ShiftKrausOp, ...]

    def __post_init__(self):
        ops = tuple(op if isinstance(op, ShiftKrausOp) else ShiftKrausOp(tuple(op)) for op in self.ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        object.__setattr__(self, "ops", ops)

    @property
    def max_shift(self) -> int:
        return max(abs(l) for op in self.ops for l, _ in op.terms)

    @property
    def is_pure_shift(self) -> bool:
        return all(op.is_pure_shift for op in self.ops)

    def to_dict(self) -> dict:
        return {
            "type": "kraus",
            "ops": [[{"l": l, "re": a.real, "im": a.imag} for l, a in op.terms] for op in self.ops],
        }


@dataclass(frozen=True)
class ChannelInvariants:
    """Shift statistics of a pure-shift channel.

    ``mu`` is the mean shift per step, ``s`` the second moment and
    ``g = s - mu**2`` the per-step variance it adds.
    """

    mu: float
    s: float
    g: float


def coherent_channel() -> HomogeneousChannel:
    return HomogeneousChannel((ShiftKrausOp(((0, 1.0),)),))


def pure_shift_channel(weights) -> HomogeneousChannel:
    """Channel that translates by ``l`` with probability ``w``, for each ``(l, w)``."""
    return HomogeneousChannel(tuple(ShiftKrausOp(((l, sqrt(w)),)) for l, w in weights if w > 0))


def completeness_deviation(channel: HomogeneousChannel) -> tuple[float, int]:
    """Largest violation of ``sum_n |F_n(k)|^2 = 1`` in coefficient space.

    Returns ``(deviation, relative_shift)``.  The Fourier coefficient of
    ``sum_n |F_n|^2`` at relative shift ``m`` is ``sum_n sum_l conj(p_l) p_{l+m}``.
    """
    coeff: dict[int, complex] = {0: 0j}
    for op in channel.ops:
        for l1, a1 in op.terms:
            for l2, a2 in op.terms:
                m = l2 - l1
                coeff[m] = coeff.get(m, 0j) + np.conj(a1) * a2
    worst, worst_m = 0.0, 0
    for m in sorted(coeff, key=lambda m: (abs(m), m)):
        dev = abs(coeff[m] - (1.0 if m == 0 else 0.0))
        if dev > worst:
            worst, worst_m = dev, m
    return worst, worst_m


def validate(channel: HomogeneousChannel, atol=COMPLETENESS_TOL) -> HomogeneousChannel:
    """Check the completeness relation; returns the channel or raises IncompleteChannel."""
    dev, m = completeness_deviation(channel)
    if dev > atol:
        raise IncompleteChannel(dev, m)
    k = 2 * np.pi * np.arange(128) / 128 - np.pi
    total = sum(np.abs(op.symbol(k)) ** 2 for op in channel.ops)
    grid_dev = float(np.abs(total - 1).max())
    if grid_dev > atol:
        i = int(np.abs(total - 1).argmax())
        raise IncompleteChannel(grid_dev, f"k={k[i]:.6g}")
    return channel


def _check_prob(name, x):
    if not isfinite(x) or x < 0:
        raise BadProbability(f"{name} must be a finite non-negative number, got {x!r}")


def tunneling_channel(d: int, p: float, q: float) -> HomogeneousChannel:
    """Walker tunnels to its d-th neighbours with per-direction probabilities p (right) and q (left).

    One Kraus operator leaves the position alone with amplitude
    ``sqrt(1 - (p+q)^d)``; the others shift by ``d - 2j`` sites with amplitude
    ``sqrt(C(d, j) p^(d-j) q^j)`` for ``j = 0..d``.  Zero-amplitude operators
    are dropped.
    """
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    d = int(d)
    _check_prob("p", p)
    _check_prob("q", q)
    total = p + q
    if total > 1 + 1e-15:
        raise BadProbability(f"p + q = {total!r} exceeds 1")
    ops = []
    stay = 1 - min(total, 1.0) ** d
    if stay > 0:
        ops.append(ShiftKrausOp(((0, sqrt(stay)),)))
    for j in range(d + 1):
        w = comb(d, j) * p ** (d - j) * q**j
        if w > 0:
            ops.append(ShiftKrausOp(((d - 2 * j, sqrt(w)),)))
    return HomogeneousChannel(tuple(ops))


def tunneling_from_bias(d: int, beta: float, P: float) -> HomogeneousChannel:
    """Tunneling channel parametrised by rightward bias beta and movement probability P."""
    if not 0 <= beta <= 1:
        raise DomainError(f"beta must lie in [0, 1], got {beta!r}")
    if not 0 <= P <= 1:
        raise DomainError(f"P must lie in [0, 1], got {P!r}")
    return tunneling_channel(d, beta * P, (1 - beta) * P)


def channel_invariants(channel: HomogeneousChannel) -> ChannelInvariants:
    if not channel.is_pure_shift:
        raise MixedShiftOp(
            "closed-form invariants need every Kraus operator to be a single shift; "
            "simulate this channel instead"
        )
    mu = 0.0
    s = 0.0
    for op in channel.ops:
        (l, a), = op.terms
        w = abs(a) ** 2
        mu += w * l
        s += w * l * l
    return ChannelInvariants(mu=mu, s=s, g=s - mu * mu)


def g_function(beta: float, d: int, P: float) -> float:
    """Variance increment per step for the d-neighbour tunneling channel.

    ``G = d P^d (d (2 beta - 1)^2 (1 - P^d) + 4 beta (1 - beta))``
    """
    if not 0 <= beta <= 1:
        raise DomainError(f"beta must lie in [0, 1], got {beta!r}")
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    if not 0 <= P <= 1:
        raise DomainError(f"P must lie in [0, 1], got {P!r}")
    pd = P**d
    return d * pd * (d * (2 * beta - 1) ** 2 * (1 - pd) + 4 * beta * (1 - beta))


def _number(spec, key, where):
    if key not in spec:
        raise ConfigError(f"{where}.{key}: missing")
    v = spec[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    return v


def channel_from_dict(spec: dict, where="channel") -> HomogeneousChannel:
    """Build a channel from its JSON description.

    Accepted forms::

        {"type": "coherent"}
        {"type": "tunneling", "d": 2, "p": 0.375, "q": 0.375}
        {"type": "tunneling", "d": 2, "beta": 0.5, "P": 0.75}      # or "P_t" = P**d
        {"type": "kraus", "ops": [[{"l": 0, "re": 0.8, "im": 0.0}], ...]}
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"{where}: expected an object with a 'type' field")
    kind = spec["type"]
    try:
        if kind == "coherent":
            return coherent_channel()
        if kind == "tunneling":
            d = _number(spec, "d", where)
            if "p" in spec or "q" in spec:
                ch = tunneling_channel(d, _number(spec, "p", where), _number(spec, "q", where))
            else:
                beta = _number(spec, "beta", where)
                if "P_t" in spec:
                    P = _number(spec, "P_t", where) ** (1 / d)
                else:
                    P = _number(spec, "P", where)
                ch = tunneling_from_bias(d, beta, P)
            return validate(ch)
        if kind == "kraus":
            ops = spec.get("ops")
            if not isinstance(ops, list) or not ops:
                raise ConfigError(f"{where}.ops: expected a non-empty list")
            parsed = []
            for i, op in enumerate(ops):
                if not isinstance(op, list) or not op:
                    raise ConfigError(f"{where}.ops[{i}]: expected a non-empty list of terms")
                terms = []
                for j, term in enumerate(op):
                    loc = f"{where}.ops[{i}][{j}]"
                    l = term.get("l") if isinstance(term, dict) else None
                    if isinstance(l, bool) or not isinstance(l, int):
                        raise ConfigError(f"{loc}.l: expected an integer shift")
                    terms.append((l, complex(_number(term, "re", loc), term.get("im", 0.0))))
                parsed.append(ShiftKrausOp(tuple(terms)))
            return validate(HomogeneousChannel(tuple(parsed)))
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}.type: unknown channel type {kind!r}")
