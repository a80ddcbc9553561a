"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (``pytest tests/test_acceptance.py -v -s``) or directly
(``python tests/test_acceptance.py``) for the bare report.
"""

import sys
import time

import numpy as np
import pytest

from dqwalk.analytic import (
    ALPHA,
    gamma1,
    gamma2,
    gamma2_prime,
    spectral_moment_oracle,
    transfer_power_sums,
    variance_model,
)
from dqwalk.channel import (
    channel_invariants,
    coherent_channel,
    completeness_deviation,
    g_function,
    pure_shift_channel,
    tunneling_from_bias,
    tunneling_channel,
)
from dqwalk.core import HADAMARD, bloch_of_state, density_from_bloch, walk_transfer_matrix
from dqwalk.simulator import init_state, negativity, run, step

PSI = np.array([1, 1j]) / np.sqrt(2)
R_PSI = bloch_of_state(PSI)

CONFIGS = {
    "coherent": coherent_channel(),
    "d=1,P=0.25": tunneling_from_bias(1, 0.5, 0.25),
    "d=2,P=0.75": tunneling_from_bias(2, 0.5, 0.75),
}

REL_TOL_20 = 0.005
RUNTIME_LIMIT = 10.0
FIT_REL_TOL = 0.02
BOOST_PP = 6.0
REFERENCE_BOOST = {"d=2,P=0.75": {20: 24.0, 30: 18.0}, "d=1,P=0.25": {20: 5.0, 30: 3.5}}
GAMMA_TOL = 1e-8
ORACLE_TOL = 1e-8
G_TOL = 1e-12
COMPLETENESS_TOL = 1e-12
TRACE_TOL = 1e-10
NEG_FLOOR = 0.02
NEG_SATURATION = 0.05
WK_TOL = 1e-12


def _variance_series(channel, t_max):
    return np.array([rec.variance for rec in run(HADAMARD, channel, PSI, t_max)])


def check_1():
    parts, ok = [], True
    for name, ch in CONFIGS.items():
        start = time.perf_counter()
        sim = _variance_series(ch, 20)[20]
        elapsed = time.perf_counter() - start
        model = variance_model(R_PSI, channel_invariants(ch))
        err = abs(sim - model.variance(20)) / sim
        ok &= err <= REL_TOL_20 and elapsed < RUNTIME_LIMIT
        parts.append(f"{name}: rel_err={err:.3%} ({elapsed:.2f}s)")
    return ok, "; ".join(parts)


def check_2():
    parts, ok = [], True
    t = np.arange(30, 61)
    for name, ch in CONFIGS.items():
        var = _variance_series(ch, 60)[30:]
        lead = np.polyfit(t, var, 2)[0]
        dev = abs(lead - ALPHA) / ALPHA
        ok &= dev <= FIT_REL_TOL
        parts.append(f"{name}: a_fit={lead:.5f} ({dev:.2%} from alpha)")
    return ok, "; ".join(parts)


def check_3():
    base = _variance_series(coherent_channel(), 30)
    base_model = variance_model(R_PSI, channel_invariants(coherent_channel()))
    parts, ok = [], True
    for name, reference in REFERENCE_BOOST.items():
        ch = CONFIGS[name]
        var = _variance_series(ch, 30)
        model = variance_model(R_PSI, channel_invariants(ch))
        for t, expected in reference.items():
            boost = 100 * (var[t] / base[t] - 1)
            poly = 100 * (model.variance(t) / base_model.variance(t) - 1)
            ok &= boost > 0 and abs(boost - expected) <= BOOST_PP
            parts.append(f"{name} t={t}: sim {boost:.2f}% poly {poly:.2f}% (reference {expected}%)")
    return ok, "; ".join(parts)


def check_4():
    worst, where = 0.0, None
    for t in range(0, 51):
        s1, s2, s2p = transfer_power_sums(HADAMARD, t)
        for label, closed, numeric in (("gamma1", gamma1(t), s1), ("gamma2", gamma2(t), s2), ("gamma2'", gamma2_prime(t), s2p)):
            dev = np.abs(closed - numeric).max()
            if dev > worst:
                worst, where = dev, f"{label} at t={t}"
    return worst <= GAMMA_TOL, f"max entrywise deviation {worst:.3e} ({where}); tolerance {GAMMA_TOL:g}"


def _random_config(rng):
    z = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    coin = q * (np.diag(r) / np.abs(np.diag(r)))
    v = rng.normal(size=3)
    v *= rng.uniform(0, 0.5) / np.linalg.norm(v)
    bloch = np.array([0.5, *v])
    shifts = rng.choice(np.arange(-3, 4), size=int(rng.integers(1, 4)), replace=False)
    weights = rng.dirichlet(np.ones(len(shifts)))
    channel = pure_shift_channel(list(zip(shifts.tolist(), weights.tolist())))
    return coin, bloch, channel


def check_5():
    rng = np.random.default_rng(20240501)
    worst = 0.0
    for _ in range(20):
        coin, bloch, channel = _random_config(rng)
        for rec in run(coin, channel, density_from_bloch(bloch), 30):
            mean, m2 = spectral_moment_oracle(coin, channel, bloch, rec.t)
            worst = max(worst, abs(rec.mean - mean), abs(rec.second_moment - m2))
    return worst <= ORACLE_TOL, f"20 configs, t<=30: max moment deviation {worst:.3e}"


def check_6():
    betas = np.round(np.arange(11) / 10, 12)
    ps = np.round(np.arange(11) / 10, 12)
    neg, sym, half = 0.0, 0.0, 0.0
    for d in range(1, 6):
        for P in ps:
            for beta in betas:
                g = g_function(beta, d, P)
                neg = min(neg, g)
                sym = max(sym, abs(g - g_function(1 - beta, d, P)))
            half = max(half, abs(g_function(0.5, d, P) - d * P**d))
    ok = neg >= 0 and sym <= G_TOL and half <= G_TOL
    return ok, f"min G={neg:.3g}, max |G(b)-G(1-b)|={sym:.3g}, max |G(1/2)-dP^d|={half:.3g}"


def check_7():
    worst = 0.0
    count = 0
    for d in range(1, 6):
        for P in np.arange(11) / 10:
            for beta in np.arange(11) / 10:
                worst = max(worst, completeness_deviation(tunneling_from_bias(d, beta, P))[0])
                count += 1
    ch = tunneling_channel(2, 0.375, 0.375)
    state = init_state(PSI, 100, ch)
    drift = 0.0
    for _ in range(100):
        state = step(state, HADAMARD, ch)
        drift = max(drift, abs(np.trace(state.matrix).real - 1))
    ok = worst <= COMPLETENESS_TOL and drift <= TRACE_TOL
    return ok, f"{count} channels: max completeness deviation {worst:.3g}; trace drift over 100 steps {drift:.3g}"


def check_8():
    curves = {}
    channels = {"coherent": coherent_channel()}
    channels.update({f"d={d}": tunneling_from_bias(d, 0.5, 0.25 ** (1 / d)) for d in (1, 2, 3)})
    for name, ch in channels.items():
        state = init_state(PSI, 50, ch)
        for t in range(1, 51):
            state = step(state, HADAMARD, ch)
            if t in (40, 50):
                curves.setdefault(name, {})[t] = negativity(state.rho)
    n50 = [curves[k][50] for k in ("coherent", "d=1", "d=2", "d=3")]
    ordered = all(a > b for a, b in zip(n50, n50[1:])) and n50[-1] > NEG_FLOOR
    changes = {k: abs(v[50] - v[40]) / v[40] for k, v in curves.items() if k != "coherent"}
    saturated = all(c < NEG_SATURATION for c in changes.values())
    detail = ", ".join(f"{k}: {v[40]:.4f}->{v[50]:.4f}" for k, v in curves.items())
    return ordered and saturated, detail


def _printed_wk(k):
    w = np.zeros(k.shape + (4, 4))
    w[..., 0, 0] = w[..., 3, 1] = 1
    w[..., 1, 2] = w[..., 2, 3] = np.sin(2 * k)
    w[..., 1, 3] = np.cos(2 * k)
    w[..., 2, 2] = -np.cos(2 * k)
    return w


def check_9():
    k = np.random.default_rng(9).uniform(-np.pi, np.pi, 1000)
    dev = np.abs(walk_transfer_matrix(HADAMARD, k) - _printed_wk(k)).max()
    return dev <= WK_TOL, f"1000 k samples: max deviation {dev:.3g}"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


def _report(n, ok, detail):
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    return line


@pytest.mark.parametrize("n", range(1, len(CHECKS) + 1))
def test_criterion(n):
    ok, detail = CHECKS[n - 1]()
    line = _report(n, ok, detail)
    assert ok, line


if __name__ == "__main__":
    results = [CHECKS[n - 1]() for n in range(1, len(CHECKS) + 1)]
    for n, (ok, detail) in enumerate(results, 1):
        _report(n, ok, detail)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
