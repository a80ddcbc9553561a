"""``dqwalk`` command line: simulate, analytic, compare and sweep.

Each subcommand reads a JSON configuration (a file, or ``-`` for stdin) and
writes one CSV table to stdout or ``--out``.  Example configuration::

    {
      "coin": "hadamard",
      "psi": [{"re": 0.7071067811865476, "im": 0}, {"re": 0, "im": 0.7071067811865476}],
      "channel": {"type": "tunneling", "d": 2, "beta": 0.5, "P": 0.75},
      "t_max": 20,
      "stride": 1,
      "outputs": {"negativity": false, "analytic": true}
    }

Use ``"bloch": [0.5, r1, r2, r3]`` instead of ``"psi"`` for a mixed coin
state.  ``sweep`` additionally takes a ``"sweep"`` object with lists for any
of ``beta``, ``P``, ``P_t`` and ``d`` plus the ``quantities`` to report.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import csvio
from .analytic import spectral_moment_oracle, variance_model
from .channel import (
    HomogeneousChannel,
    channel_from_dict,
    channel_invariants,
    coherent_channel,
    g_function,
    tunneling_from_bias,
)
from .core import HADAMARD, IDENTITY, as_coin, bloch_from_density, density_from_bloch
from .exceptions import ConfigError, DQWalkError, MixedShiftOp
from .simulator import run

OUTPUT_FLAGS = ("distribution", "moments", "negativity", "analytic")
SWEEP_AXES = ("beta", "P", "P_t", "d")
SWEEP_QUANTITIES = ("g", "negativity", "variance")


@dataclass
class ExperimentConfig:
    coin: np.ndarray
    coin_name: str
    channel: HomogeneousChannel
    t_max: int
    psi: np.ndarray | None = None
    bloch: np.ndarray | None = None
    stride: int = 1
    k_points: int | None = None
    outputs: dict = field(default_factory=lambda: {"moments": True})
    sweep: dict | None = None
    raw: dict = field(default_factory=dict)

    @property
    def coin_state(self) -> np.ndarray:
        """Amplitudes, or the 2x2 density matrix when the start is given as a Bloch vector."""
        return self.psi if self.psi is not None else density_from_bloch(self.bloch)

    @property
    def bloch_vector(self) -> np.ndarray:
        if self.bloch is not None:
            return self.bloch
        return bloch_from_density(np.outer(self.psi, self.psi.conj()))


def _complex(v, where):
    if isinstance(v, bool):
        raise ConfigError(f"{where}: expected a number or {{'re', 'im'}}, got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, dict) and set(v) <= {"re", "im"} and "re" in v:
        re, im = v["re"], v.get("im", 0.0)
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
            return complex(re, im)
    raise ConfigError(f"{where}: expected a number or {{'re', 'im'}}, got {v!r}")


def _int(raw, key, default, minimum):
    v = raw.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"{key}: expected an integer >= {minimum}, got {v!r}")
    return v


def parse_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")

    coin_spec = raw.get("coin", "hadamard")
    if isinstance(coin_spec, str):
        named = {"hadamard": HADAMARD, "identity": IDENTITY}
        if coin_spec.lower() not in named:
            raise ConfigError(f"coin: unknown named coin {coin_spec!r}")
        coin, coin_name = named[coin_spec.lower()], coin_spec.lower()
    else:
        if not (isinstance(coin_spec, list) and len(coin_spec) == 2 and all(isinstance(r, list) and len(r) == 2 for r in coin_spec)):
            raise ConfigError("coin: expected 'hadamard', 'identity' or a 2x2 list")
        coin = np.array([[_complex(v, f"coin[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(coin_spec)])
        coin_name = "custom"
    try:
        coin = as_coin(coin)
    except DQWalkError as exc:
        raise ConfigError(f"coin: {exc}") from exc

    has_psi, has_bloch = "psi" in raw, "bloch" in raw
    if has_psi == has_bloch:
        raise ConfigError("exactly one of 'psi' (coin amplitudes) or 'bloch' (coin Bloch vector) is required")
    psi = bloch = None
    if has_psi:
        if not isinstance(raw["psi"], list) or len(raw["psi"]) != 2:
            raise ConfigError("psi: expected two amplitudes")
        psi = np.array([_complex(v, f"psi[{i}]") for i, v in enumerate(raw["psi"])])
        if abs(np.vdot(psi, psi).real - 1) > 1e-12:
            raise ConfigError(f"psi: amplitudes are not normalised (norm^2 = {float(np.vdot(psi, psi).real)!r})")
    else:
        r = raw["bloch"]
        if not isinstance(r, list) or len(r) != 4 or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in r):
            raise ConfigError("bloch: expected four real numbers [0.5, r1, r2, r3]")
        bloch = np.array(r, dtype=float)
        try:
            bloch_from_density(density_from_bloch(bloch))
        except DQWalkError as exc:
            raise ConfigError(f"bloch: {exc}") from exc

    channel = channel_from_dict(raw["channel"]) if "channel" in raw else coherent_channel()

    t_max = _int(raw, "t_max", 20, 0)
    stride = _int(raw, "stride", 1, 1)
    k_points = raw.get("k_points")
    if k_points is not None:
        k_points = _int(raw, "k_points", None, 64)

    outputs = raw.get("outputs", {"moments": True})
    if not isinstance(outputs, dict) or not set(outputs) <= set(OUTPUT_FLAGS):
        raise ConfigError(f"outputs: expected an object with keys among {OUTPUT_FLAGS}")
    outputs = {k: bool(outputs.get(k, k == "moments")) for k in OUTPUT_FLAGS}

    sweep = raw.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            raise ConfigError("sweep: expected an object")
        unknown = set(sweep) - set(SWEEP_AXES) - {"quantities"}
        if unknown:
            raise ConfigError(f"sweep: unknown keys {sorted(unknown)}")
        for axis in SWEEP_AXES:
            if axis in sweep and (not isinstance(sweep[axis], list) or not sweep[axis]):
                raise ConfigError(f"sweep.{axis}: expected a non-empty list")
        if "P" in sweep and "P_t" in sweep:
            raise ConfigError("sweep: give either P or P_t, not both")
        if "P" not in sweep and "P_t" not in sweep:
            raise ConfigError("sweep: empty grid (need a P or P_t axis)")
        q = sweep.get("quantities", ["g"])
        if not isinstance(q, list) or not q or not set(q) <= set(SWEEP_QUANTITIES):
            raise ConfigError(f"sweep.quantities: expected a non-empty subset of {SWEEP_QUANTITIES}")

    return ExperimentConfig(
        coin=coin,
        coin_name=coin_name,
        channel=channel,
        t_max=t_max,
        psi=psi,
        bloch=bloch,
        stride=stride,
        k_points=k_points,
        outputs=outputs,
        sweep=sweep,
        raw=raw,
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_config(raw)


def _require_analytic(cfg: ExperimentConfig):
    if cfg.coin_name != "hadamard":
        raise ConfigError("the closed-form variance is only available for the Hadamard coin")
    try:
        inv = channel_invariants(cfg.channel)
    except MixedShiftOp as exc:
        raise ConfigError(f"channel: {exc}") from exc
    return inv, variance_model(cfg.bloch_vector, inv)


def cmd_simulate(cfg: ExperimentConfig, out) -> int:
    want_neg = cfg.outputs["negativity"]
    records = run(cfg.coin, cfg.channel, cfg.coin_state, cfg.t_max, cfg.stride, want_neg)
    if cfg.outputs["distribution"]:
        rows = [
            {"t": rec.t, "x": int(x), "probability": float(p)}
            for rec in records
            for x, p in zip(rec.positions, rec.distribution)
            if p != 0
        ]
        csvio.write_table(out, "simulate-distribution", ["t", "x", "probability"], rows, cfg.raw)
        return 0
    columns = ["t", "mean", "m2", "variance"]
    model = None
    if want_neg:
        columns.append("negativity")
    if cfg.outputs["analytic"]:
        _, model = _require_analytic(cfg)
        columns.append("variance_analytic")
    rows = []
    for rec in records:
        row = {"t": rec.t, "mean": rec.mean, "m2": rec.second_moment, "variance": rec.variance, "negativity": rec.negativity}
        if model is not None:
            row["variance_analytic"] = float(model.variance(rec.t))
        rows.append(row)
    csvio.write_table(out, "simulate", columns, rows, cfg.raw)
    return 0


def cmd_analytic(cfg: ExperimentConfig, out) -> int:
    inv, model = _require_analytic(cfg)
    coeffs = {"a": model.a, "b": model.b, "c": model.c, "mu_drift": model.mu_drift, "mu": inv.mu, "s": inv.s, "g": inv.g}
    # per-t rows only on explicit request; the default is the single coefficient row
    if not cfg.raw.get("outputs", {}).get("moments"):
        csvio.write_table(out, "analytic", list(coeffs), [coeffs], cfg.raw)
        return 0
    rows = [{"t": t, "variance": float(model.variance(t)), **coeffs} for t in range(0, cfg.t_max + 1, cfg.stride)]
    csvio.write_table(out, "analytic-series", ["t", "variance", *coeffs], rows, cfg.raw)
    return 0


def comparison_rows(cfg: ExperimentConfig):
    """Per-t numeric vs closed-form variance, plus the boost over the coherent walk."""
    _, model = _require_analytic(cfg)
    _, coherent_model = _require_analytic(ExperimentConfig(**{**cfg.__dict__, "channel": coherent_channel()}))
    sim = run(cfg.coin, cfg.channel, cfg.coin_state, cfg.t_max, cfg.stride)
    base = run(cfg.coin, coherent_channel(), cfg.coin_state, cfg.t_max, cfg.stride)
    r = cfg.bloch_vector
    rows = []
    for rec, ref in zip(sim, base):
        k_points = max(cfg.k_points or 0, 64, 4 * rec.t + 4)
        k_points += k_points % 2
        mean, m2 = spectral_moment_oracle(cfg.coin, cfg.channel, r, rec.t, k_points)
        va = float(model.variance(rec.t))
        vc = float(coherent_model.variance(rec.t))
        rows.append(
            {
                "t": rec.t,
                "variance_sim": rec.variance,
                "variance_oracle": m2 - mean * mean,
                "variance_analytic": va,
                "rel_error": abs(rec.variance - va) / rec.variance if rec.variance > 0 else math.nan,
                "variance_coherent_sim": ref.variance,
                "boost_sim": rec.variance / ref.variance - 1 if ref.variance > 0 else math.nan,
                "boost_poly": va / vc - 1 if vc > 0 else math.nan,
            }
        )
    return rows


def cmd_compare(cfg: ExperimentConfig, out, tolerance: float = 0.005, t_min: int | None = None) -> int:
    if t_min is None:
        t_min = min(20, cfg.t_max)
    rows = comparison_rows(cfg)
    tail = [r["rel_error"] for r in rows if r["t"] >= t_min and csvio.is_finite(r["rel_error"])]
    worst = max(tail) if tail else math.nan
    ok = bool(tail) and worst <= tolerance
    trailer = [
        f"summary: max_rel_error={worst!r} t_min={t_min} tolerance={tolerance!r} status={'pass' if ok else 'fail'}"
    ]
    columns = ["t", "variance_sim", "variance_oracle", "variance_analytic", "rel_error", "variance_coherent_sim", "boost_sim", "boost_poly"]
    csvio.write_table(out, "compare", columns, rows, cfg.raw, trailer)
    return 0 if ok else 1


def _sweep_point(cfg: ExperimentConfig, point: dict, quantities):
    d = point["d"]
    P = point["P"] if "P" in point else point["P_t"] ** (1 / d)
    row = {"beta": point["beta"], "d": d, "P": P, "P_t": P**d}
    if "g" in quantities:
        row["g"] = g_function(point["beta"], d, P)
    if "negativity" in quantities or "variance" in quantities:
        channel = tunneling_from_bias(d, point["beta"], P)
        final = run(cfg.coin, channel, cfg.coin_state, cfg.t_max, cfg.t_max or 1, "negativity" in quantities)[-1]
        if "negativity" in quantities:
            row["negativity"] = final.negativity
        if "variance" in quantities:
            row["variance"] = final.variance
    return row


def sweep_threads() -> int:
    env = os.environ.get("DQWALK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"DQWALK_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def cmd_sweep(cfg: ExperimentConfig, out) -> int:
    if cfg.sweep is None:
        raise ConfigError("sweep: missing 'sweep' grid specification")
    spec = cfg.sweep
    quantities = spec.get("quantities", ["g"])
    axes = {"beta": spec.get("beta", [0.5]), "d": spec.get("d", [1])}
    axes["P_t" if "P_t" in spec else "P"] = spec["P_t" if "P_t" in spec else "P"]
    names = list(axes)
    grid = [dict(zip(names, values)) for values in itertools.product(*axes.values())]
    for point in grid:
        for k, v in point.items():
            if k == "d" and (isinstance(v, bool) or not isinstance(v, int) or v < 1):
                raise ConfigError(f"sweep.d: expected positive integers, got {v!r}")
            if k != "d" and (isinstance(v, bool) or not isinstance(v, (int, float)) or not 0 <= v <= 1):
                raise ConfigError(f"sweep.{k}: expected numbers in [0, 1], got {v!r}")
    with ThreadPoolExecutor(max_workers=min(sweep_threads(), len(grid))) as pool:
        rows = list(pool.map(lambda p: _sweep_point(cfg, p, quantities), grid))
    columns = ["beta", "d", "P", "P_t", *[q for q in SWEEP_QUANTITIES if q in quantities]]
    csvio.write_table(out, "sweep", columns, rows, cfg.raw)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dqwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("simulate", "density-matrix simulation: moments per step"),
        ("analytic", "closed-form variance coefficients"),
        ("compare", "simulation against the closed form"),
        ("sweep", "grid over beta, P, P_t and d"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON config file, or - for stdin")
        p.add_argument("--out", help="output CSV file (default stdout)")
        if name == "compare":
            p.add_argument("--tolerance", type=float, default=0.005, help="max relative error for exit status 0")
            p.add_argument("--t-min", type=int, default=None, help="first step included in the summary")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
        try:
            if args.command == "simulate":
                return cmd_simulate(cfg, out)
            if args.command == "analytic":
                return cmd_analytic(cfg, out)
            if args.command == "compare":
                return cmd_compare(cfg, out, args.tolerance, args.t_min)
            return cmd_sweep(cfg, out)
        finally:
            if args.out:
                out.close()
    except DQWalkError as exc:
        print(f"dqwalk: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
