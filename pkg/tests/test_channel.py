from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqwalk.channel import (
    HomogeneousChannel,
    ShiftKrausOp,
    channel_from_dict,
    channel_invariants,
    coherent_channel,
    completeness_deviation,
    g_function,
    pure_shift_channel,
    tunneling_channel,
    tunneling_from_bias,
    validate,
)
from dqwalk.exceptions import BadProbability, ConfigError, DomainError, IncompleteChannel, MixedShiftOp


def terms(channel):
    return [op.terms[0] for op in channel.ops]


def test_validate_examples():
    assert validate(coherent_channel())
    assert validate(tunneling_channel(2, 0.375, 0.375))
    with pytest.raises(IncompleteChannel) as info:
        validate(HomogeneousChannel((ShiftKrausOp(((0, 0.9),)),)))
    assert info.value.deviation == pytest.approx(0.19, abs=1e-15)
    assert info.value.shift == 0


def test_validate_catches_cross_terms():
    # |F|^2 = 1 at k = 0 only if the cross terms are ignored
    op = ShiftKrausOp(((0, 0.6), (1, 0.8)))
    with pytest.raises(IncompleteChannel) as info:
        validate(HomogeneousChannel((op,)))
    assert abs(info.value.shift) == 1
    assert info.value.deviation == pytest.approx(0.48)


def test_multi_shift_channel_can_be_complete():
    # (1 + e^{ik})/2 and (1 - e^{ik})/2 sum to |.|^2 = 1
    h = 0.5
    ch = HomogeneousChannel((ShiftKrausOp(((0, h), (1, h))), ShiftKrausOp(((0, h), (1, -h)))))
    assert validate(ch) is ch
    assert not ch.is_pure_shift
    with pytest.raises(MixedShiftOp):
        channel_invariants(ch)


def test_tunneling_d1_right_only():
    ch = tunneling_channel(1, 0.25, 0.0)
    got = terms(ch)
    assert [l for l, _ in got] == [0, 1]
    np.testing.assert_allclose([a.real for _, a in got], [np.sqrt(0.75), np.sqrt(0.25)], atol=1e-15)


def test_tunneling_d2_symmetric():
    got = terms(tunneling_channel(2, 0.375, 0.375))
    assert [l for l, _ in got] == [0, 2, 0, -2]
    np.testing.assert_allclose(
        [a.real for _, a in got], [np.sqrt(0.4375), 0.375, np.sqrt(2 * 0.140625), 0.375], atol=1e-15
    )
    assert sum(abs(a) ** 2 for _, a in got) == pytest.approx(1.0, abs=1e-15)


def test_tunneling_no_movement_is_identity():
    ch = tunneling_channel(3, 0.0, 0.0)
    assert terms(ch) == [(0, 1.0)]


@pytest.mark.parametrize("p, q", [(0.7, 0.4), (-0.1, 0.2), (0.2, float("nan"))])
def test_tunneling_rejects_bad_probabilities(p, q):
    with pytest.raises(BadProbability):
        tunneling_channel(2, p, q)


def test_tunneling_rejects_bad_d():
    with pytest.raises(DomainError):
        tunneling_channel(0, 0.1, 0.1)


@pytest.mark.parametrize(
    "channel, mu, s, g",
    [
        (tunneling_channel(1, 0.125, 0.125), 0.0, 0.25, 0.25),
        (tunneling_channel(2, 0.375, 0.375), 0.0, 1.125, 1.125),
        (tunneling_channel(1, 0.25, 0.0), 0.25, 0.25, 0.1875),
    ],
)
def test_invariant_examples(channel, mu, s, g):
    inv = channel_invariants(channel)
    assert inv.mu == pytest.approx(mu, abs=1e-15)
    assert inv.s == pytest.approx(s, abs=1e-15)
    assert inv.g == pytest.approx(g, abs=1e-15)


def test_invariants_match_binomial_closed_forms():
    for d in range(1, 6):
        for p, q in [(0.1, 0.3), (0.5, 0.2), (0.0, 0.9), (0.45, 0.45)]:
            inv = channel_invariants(tunneling_channel(d, p, q))
            mean_shift = d * (p + q) ** (d - 1) * (p - q)
            # sum_j (d - 2j)^2 C(d,j) p^(d-j) q^j, evaluated term by term
            second = sum((d - 2 * j) ** 2 * comb(d, j) * p ** (d - j) * q**j for j in range(d + 1))
            assert inv.mu == pytest.approx(mean_shift, abs=1e-14)
            assert inv.s == pytest.approx(second, abs=1e-14)
            assert inv.s == pytest.approx(d * (p + q) ** (d - 2) * (d * (p - q) ** 2 + 4 * p * q), abs=1e-13)


def test_g_function_examples():
    assert g_function(0.5, 2, 0.75) == pytest.approx(1.125, abs=1e-15)
    assert g_function(0.37, 4, 0.0) == 0.0
    assert g_function(0.3, 2, 0.5) == pytest.approx(0.54, abs=1e-15)
    assert g_function(0.5, 1, 0.25) == pytest.approx(0.25, abs=1e-15)


@pytest.mark.parametrize("args", [(-0.1, 1, 0.5), (0.5, 0, 0.5), (0.5, 1, 1.5), (0.5, 1.5, 0.5)])
def test_g_function_domain(args):
    with pytest.raises(DomainError):
        g_function(*args)


def test_g_function_matches_invariants_random():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        beta, d, P = rng.uniform(), int(rng.integers(1, 6)), rng.uniform()
        g = channel_invariants(tunneling_from_bias(d, beta, P)).g
        assert g_function(beta, d, P) == pytest.approx(g, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(beta=st.floats(0, 1), d=st.integers(1, 8), P=st.floats(0, 1))
def test_g_function_symmetric_and_nonnegative(beta, d, P):
    g = g_function(beta, d, P)
    assert g >= 0
    assert g == pytest.approx(g_function(1 - beta, d, P), abs=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3, 5])
@pytest.mark.parametrize("P", [0.1, 0.5, 0.9])
def test_g_function_stationary_at_half(d, P):
    h = 1e-5
    slope = (g_function(0.5 + h, d, P) - g_function(0.5 - h, d, P)) / (2 * h)
    assert abs(slope) < 1e-8


@settings(max_examples=200, deadline=None)
@given(d=st.integers(1, 8), p=st.floats(0, 1), frac=st.floats(0, 1))
def test_tunneling_always_complete(d, p, frac):
    q = (1 - p) * frac
    ch = tunneling_channel(d, p, q)
    dev, _ = completeness_deviation(ch)
    assert dev <= 1e-12
    validate(ch)


def test_pure_shift_channel_drops_zero_weights():
    ch = pure_shift_channel([(0, 0.5), (3, 0.0), (-1, 0.5)])
    assert [l for l, _ in terms(ch)] == [0, -1]
    assert ch.max_shift == 1


def test_channel_json_round_trip():
    ch = tunneling_channel(2, 0.3, 0.1)
    again = channel_from_dict(ch.to_dict())
    assert again == ch


def test_channel_json_forms():
    a = channel_from_dict({"type": "tunneling", "d": 2, "p": 0.375, "q": 0.375})
    b = channel_from_dict({"type": "tunneling", "d": 2, "beta": 0.5, "P": 0.75})
    c = channel_from_dict({"type": "tunneling", "d": 2, "beta": 0.5, "P_t": 0.5625})
    assert channel_invariants(a) == channel_invariants(b)
    assert channel_invariants(c).g == pytest.approx(1.125, abs=1e-14)
    assert channel_from_dict({"type": "coherent"}) == coherent_channel()
    k = channel_from_dict({"type": "kraus", "ops": [[{"l": 0, "re": 0.6}], [{"l": -1, "re": 0, "im": 0.8}]]})
    assert channel_invariants(k).mu == pytest.approx(-0.64)


@pytest.mark.parametrize(
    "spec, field",
    [
        ({"type": "tunneling", "d": 2, "p": 0.9, "q": 0.3}, "channel"),
        ({"type": "tunneling", "p": 0.1, "q": 0.1}, "channel.d"),
        ({"type": "kraus", "ops": [[{"l": 0, "re": 0.9}]]}, "channel"),
        ({"type": "kraus", "ops": [[{"l": 0.5, "re": 1.0}]]}, "channel.ops[0][0].l"),
        ({"type": "nope"}, "channel.type"),
    ],
)
def test_channel_json_errors(spec, field):
    with pytest.raises(ConfigError, match=field.replace("[", r"\[").replace("]", r"\]")):
        channel_from_dict(spec)
