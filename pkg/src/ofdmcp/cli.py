"""Command-line driver: ``ofdmcp {sinr,asainr,simulate,validate}``.

Experiments are described by a JSON config (see README for the schema).
Results are written as long-format CSV (one record per SNR point and
subcarrier) or as a schema-versioned JSON envelope that echoes the resolved
config.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .analysis import asainr_fullband, asainr_terms, sinr_causal, sinr_general, to_db
from .coefficients import build_coeff_set
from .core import Cir, OfdmGrid, Pdp, SnrSpec
from .linksim import Constellation, SimConfig, measure_coefficients, monte_carlo_sinr

SCHEMA_VERSION = 1

COLUMNS = {
    "sinr": ["snr_db", "subcarrier", "signal_power", "ici_power", "isi_power",
             "noise_power", "sinr_linear", "sinr_db"],
    "asainr": ["n_cp", "snr_db", "subcarrier", "signal_power", "ici_power", "isi_power",
               "noise_power", "asainr_linear", "asainr_db", "fullband_linear"],
    "simulate": ["snr_db", "subcarrier", "signal_power", "interference_power", "noise_power",
                 "sinr_linear", "sinr_db", "sinr_se", "analytic_sinr_db", "sample_count"],
    "validate": ["check", "max_deviation", "tolerance", "passed", "detail"],
}

DEFAULT_TOLERANCES = {
    "coeff_simplified": 1e-11,
    "coeff_measured": 1e-10,
    "far_block": 1e-12,
    "causal_shortcut": 1e-12,
    "mc_sinr_db": 0.2,
}

DEFAULT_VALIDATE_CONFIG = {
    "grid": {"n_fft": 16, "n_cp": 4},
    "channel": {"random": {"l_d": 3, "l_u": 10}},
    "snr_db": [20.0],
}

_TOP_KEYS = {"grid", "channel", "normalize", "snr_db", "engine", "mode", "simulation",
             "output", "tolerances", "n_cp_sweep"}


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending field."""


def _require_keys(obj: Any, where: str, allowed: set, required: set = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = sorted(required - set(obj))
    if missing:
        raise ConfigError(f"{where}: missing required field(s) {', '.join(where + '.' + m for m in missing)}")
    return obj


def _int(obj: dict, key: str, where: str, default=None, minimum: Optional[int] = None) -> int:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}.{key}: must be >= {minimum}, got {value}")
    return value


def _num(obj: dict, key: str, where: str, default=None) -> float:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def load_config(path: Optional[str]) -> tuple[dict, Path]:
    if path is None:
        return {}, Path.cwd()
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return cfg, p.resolve().parent


def parse_grid(cfg: dict) -> OfdmGrid:
    if "grid" not in cfg:
        raise ConfigError("missing required field 'grid'")
    g = _require_keys(cfg["grid"], "grid", {"n_fft", "n_cp", "n_sc", "sc_offset"}, {"n_fft", "n_cp"})
    n_fft = _int(g, "n_fft", "grid", minimum=1)
    try:
        return OfdmGrid(n_fft, _int(g, "n_cp", "grid", minimum=0),
                        _int(g, "n_sc", "grid", default=n_fft, minimum=1),
                        _int(g, "sc_offset", "grid", default=0, minimum=0))
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc


def parse_snr_sweep(cfg: dict) -> list[float]:
    spec = cfg.get("snr_db", [20.0])
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return [float(spec)]
    if isinstance(spec, list):
        if not spec:
            raise ConfigError("snr_db: sweep must not be empty")
        return [_num({"v": v}, "v", f"snr_db[{k}]") for k, v in enumerate(spec)]
    r = _require_keys(spec, "snr_db", {"start", "stop", "step"}, {"start", "stop", "step"})
    start, stop, step = (_num(r, k, "snr_db") for k in ("start", "stop", "step"))
    if step <= 0 or stop < start:
        raise ConfigError("snr_db: need step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def _complex_list(values, where: str) -> np.ndarray:
    out = []
    for k, v in enumerate(values):
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            out.append(complex(v))
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
            out.append(complex(v[0], v[1]))
        else:
            raise ConfigError(f"{where}[{k}]: expected [re, im] pair, got {v!r}")
    return np.array(out, dtype=complex)


def _parse_channel_object(ch: dict, where: str, base: Path, depth: int = 0):
    """Return ``("cir", Cir)``, ``("pdp", Pdp)`` or ``("random", (l_d, l_u))``."""
    kinds = {"taps", "pdp", "preset", "file", "random"}
    _require_keys(ch, where, kinds)
    present = [k for k in kinds if k in ch]
    if len(present) != 1:
        raise ConfigError(f"{where}: exactly one of taps, pdp, preset, file, random is required")
    kind = present[0]
    body = ch[kind]
    sub = f"{where}.{kind}"
    try:
        if kind == "taps":
            t = _require_keys(body, sub, {"l_d", "l_u", "values"}, {"l_d", "l_u", "values"})
            return "cir", Cir(_int(t, "l_d", sub, minimum=0), _int(t, "l_u", sub, minimum=0),
                              _complex_list(t["values"], sub + ".values"))
        if kind == "pdp":
            t = _require_keys(body, sub, {"l_d", "l_u", "energies"}, {"l_d", "l_u", "energies"})
            return "pdp", Pdp(_int(t, "l_d", sub, minimum=0), _int(t, "l_u", sub, minimum=0),
                              [_num({"v": v}, "v", f"{sub}.energies[{k}]")
                               for k, v in enumerate(t["energies"])])
        if kind == "random":
            t = _require_keys(body, sub, {"l_d", "l_u"}, {"l_u"})
            return "random", (_int(t, "l_d", sub, default=0, minimum=0), _int(t, "l_u", sub, minimum=0))
        if kind == "preset":
            return "preset", body
        if depth > 0:
            raise ConfigError(f"{sub}: nested file references are not allowed")
        if not isinstance(body, str):
            raise ConfigError(f"{sub}: expected a path string")
        path = (base / body)
        if not path.is_file():
            raise ConfigError(f"{sub}: file {body} does not exist")
        try:
            inner = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
        return _parse_channel_object(inner, str(path), path.parent, depth + 1)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{sub}: {exc}") from exc


def _preset_pdp(body, grid: OfdmGrid) -> Pdp:
    where = "channel.preset"
    if not isinstance(body, dict) or "type" not in body:
        raise ConfigError(f"{where}: missing required field {where}.type")
    kind = body["type"]
    try:
        if kind == "exponential":
            _require_keys(body, where, {"type", "tau", "l_u", "l_d"}, {"tau", "l_u"})
            return Pdp.exponential(_num(body, "tau", where), _int(body, "l_u", where, minimum=0),
                                   _int(body, "l_d", where, default=0, minimum=0))
        if kind == "uniform":
            _require_keys(body, where, {"type", "l_u", "l_d"}, {"l_u"})
            return Pdp.uniform(_int(body, "l_u", where, minimum=0),
                               _int(body, "l_d", where, default=0, minimum=0))
        if kind == "two-tap":
            _require_keys(body, where, {"type", "d", "ratio"}, {"d", "ratio"})
            return Pdp.two_tap(grid.n_cp + _int(body, "d", where, minimum=0),
                               _num(body, "ratio", where))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}.type: unknown preset {kind!r}; expected exponential, uniform or two-tap")


class Experiment:
    """Validated, resolved experiment description."""

    def __init__(self, cfg: dict, base: Path, command: str, seed: Optional[int], no_noise: bool):
        _require_keys(cfg, "config", _TOP_KEYS)
        if "mode" in cfg and cfg["mode"] != command:
            raise ConfigError(f"mode: config is for {cfg['mode']!r} but command is {command!r}")
        self.command = command
        self.grid = parse_grid(cfg)
        self.snr_db = parse_snr_sweep(cfg)
        self.no_noise = no_noise
        normalize = cfg.get("normalize", False)
        if not isinstance(normalize, bool):
            raise ConfigError("normalize: expected true or false")
        self.engine = cfg.get("engine", "auto")
        if self.engine not in ("auto", "general", "causal"):
            raise ConfigError(f"engine: expected auto, general or causal, got {self.engine!r}")

        sim = _require_keys(cfg.get("simulation", {}), "simulation", {"n_blocks", "seed", "constellation"})
        self.n_blocks = _int(sim, "n_blocks", "simulation", default=20000, minimum=3)
        self.seed = seed if seed is not None else _int(sim, "seed", "simulation", default=0, minimum=0)
        try:
            self.constellation = Constellation(sim.get("constellation", "qpsk"))
        except ValueError as exc:
            raise ConfigError(f"simulation.constellation: {exc}") from exc

        tol = _require_keys(cfg.get("tolerances", {}), "tolerances", set(DEFAULT_TOLERANCES))
        self.tolerances = {k: _num(tol, k, "tolerances", default=v) for k, v in DEFAULT_TOLERANCES.items()}

        sweep = cfg.get("n_cp_sweep", [self.grid.n_cp])
        if not isinstance(sweep, list) or not sweep:
            raise ConfigError("n_cp_sweep: expected a non-empty list of integers")
        self.n_cp_sweep = [_int({"v": v}, "v", f"n_cp_sweep[{k}]", minimum=0) for k, v in enumerate(sweep)]

        out = _require_keys(cfg.get("output", {}), "output", {"path", "format"})
        self.out_path = out.get("path")
        self.out_format = out.get("format")

        if "channel" not in cfg:
            raise ConfigError("missing required field 'channel'")
        kind, value = _parse_channel_object(cfg["channel"], "channel", base)
        if kind == "preset":
            kind, value = "pdp", _preset_pdp(value, self.grid)
        if kind == "random":
            l_d, l_u = value
            kind, value = "pdp", Pdp.uniform(l_u, l_d).normalized()
            self._draw = True
        else:
            self._draw = False
        self._kind = kind
        if normalize:
            if kind == "cir":
                value = value.scaled(1.0 / math.sqrt(float(np.sum(np.abs(value.taps) ** 2))))
            else:
                value = value.normalized()
        self._channel = value

        self.echo = {
            "command": command,
            "grid": {"n_fft": self.grid.n_fft, "n_cp": self.grid.n_cp,
                     "n_sc": self.grid.n_sc, "sc_offset": self.grid.sc_offset},
            "channel": cfg["channel"],
            "normalize": normalize,
            "snr_db": self.snr_db,
            "no_noise": no_noise,
            "engine": self.engine,
            "simulation": {"n_blocks": self.n_blocks, "seed": self.seed,
                           "constellation": self.constellation.value},
            "tolerances": self.tolerances,
            "n_cp_sweep": self.n_cp_sweep,
        }

    def snr_points(self) -> list[SnrSpec]:
        if self.no_noise:
            return [SnrSpec.noiseless()]
        return [SnrSpec.from_db(s) for s in self.snr_db]

    def cir(self) -> Cir:
        """Concrete realization; PDP sources are drawn with the experiment seed."""
        if self._kind == "cir":
            return self._channel
        rng = np.random.default_rng(np.random.SeedSequence([self.seed, 0x43495220]))
        return Cir.from_pdp(self._channel, rng)

    def pdp(self) -> Pdp:
        if self._kind == "pdp":
            return self._channel
        return Pdp.from_cir(self._channel)


def run_sinr(exp: Experiment) -> list[dict]:
    cir = exp.cir()
    engine = exp.engine
    if engine == "auto":
        engine = "causal" if cir.is_causal else "general"
    rows = []
    for snr in exp.snr_points():
        rep = sinr_causal(cir, exp.grid, snr) if engine == "causal" else sinr_general(cir, exp.grid, snr)
        for row in rep.rows():
            rows.append({"snr_db": snr.snr_db, **row})
    return rows


def run_asainr(exp: Experiment) -> list[dict]:
    pdp = exp.pdp()
    rows = []
    for n_cp in exp.n_cp_sweep:
        try:
            grid = exp.grid.with_cp(n_cp)
        except ValueError as exc:
            raise ConfigError(f"n_cp_sweep: {exc}") from exc
        terms = asainr_terms(pdp, grid)
        for snr in exp.snr_points():
            gamma = terms.signal / (terms.interference + snr.noise_term)
            full = None
            if grid.n_sc == grid.n_fft:
                full = asainr_fullband(pdp, grid, snr)
                if not np.allclose(gamma, full, rtol=1e-12, atol=0):
                    raise RuntimeError("general and full-band aSaINR disagree beyond 1e-12")
            for k, idx in enumerate(grid.subcarriers):
                rows.append({
                    "n_cp": n_cp, "snr_db": snr.snr_db, "subcarrier": int(idx),
                    "signal_power": float(terms.signal[k]), "ici_power": float(terms.ici[k]),
                    "isi_power": float(terms.isi[k]), "noise_power": snr.noise_term,
                    "asainr_linear": float(gamma[k]), "asainr_db": float(to_db(gamma[k])),
                    "fullband_linear": full,
                })
    return rows


def run_simulate(exp: Experiment) -> list[dict]:
    cir = exp.cir()
    coeffs = measure_coefficients(cir, exp.grid, blocks=(0,))
    rows = []
    for snr in exp.snr_points():
        sim = SimConfig.for_snr(exp.grid, snr.snr_linear, n_blocks=exp.n_blocks, seed=exp.seed,
                                constellation=exp.constellation)
        rep = monte_carlo_sinr(cir, sim, coeffs)
        ref = sinr_general(cir, exp.grid, snr)
        for k, idx in enumerate(exp.grid.subcarriers):
            rows.append({
                "snr_db": snr.snr_db, "subcarrier": int(idx),
                "signal_power": float(rep.signal_power[k]),
                "interference_power": float(rep.interference_power[k]),
                "noise_power": float(rep.noise_power[k]),
                "sinr_linear": float(rep.sinr_linear[k]), "sinr_db": float(rep.sinr_db[k]),
                "sinr_se": float(rep.sinr_se[k]), "analytic_sinr_db": float(ref.sinr_db[k]),
                "sample_count": rep.sample_count,
            })
    return rows


def _worst(a: np.ndarray, b: np.ndarray, blocks, offset: int) -> tuple[float, str]:
    diff = np.abs(a - b)
    j, l, i = np.unravel_index(int(np.argmax(diff)), diff.shape)
    return float(diff[j, l, i]), f"b={blocks[j]},l={l + offset},i={i + offset}"


def run_validate(exp: Experiment) -> list[dict]:
    grid, tol = exp.grid, exp.tolerances
    cir = exp.cir()
    off = grid.sc_offset
    checks = []

    def add(name, dev, detail=""):
        checks.append({"check": name, "max_deviation": dev, "tolerance": tol[name],
                       "passed": bool(dev <= tol[name]), "detail": detail})

    blocks = (-2, -1, 0, 1, 2)
    direct = build_coeff_set(cir, grid, "direct", blocks=blocks)
    simplified = build_coeff_set(cir, grid, "simplified")
    measured = measure_coefficients(cir, grid, blocks=blocks)
    adj = [blocks.index(b) for b in (-1, 0, 1)]

    dev, where = _worst(direct.values[adj], simplified.values, (-1, 0, 1), off)
    add("coeff_simplified", dev, where)
    dev, where = _worst(direct.values, measured.values, blocks, off)
    add("coeff_measured", dev, where)
    far = np.abs(np.concatenate([direct.values[[0, 4]], measured.values[[0, 4]]]))
    add("far_block", float(far.max()), "b=+-2")

    snr = exp.snr_points()[0]
    general = sinr_general(cir, grid, snr)
    if cir.is_causal:
        causal = sinr_causal(cir, grid, snr)
        rel = np.abs(causal.sinr_linear - general.sinr_linear) / np.abs(general.sinr_linear)
        add("causal_shortcut", float(rel.max()), f"i={int(np.argmax(rel)) + off}")

    sim = SimConfig.for_snr(grid, snr.snr_linear, n_blocks=exp.n_blocks, seed=exp.seed,
                            constellation=exp.constellation)
    rep = monte_carlo_sinr(cir, sim, measured)
    err = np.abs(rep.sinr_db - general.sinr_db)
    add("mc_sinr_db", float(err.max()), f"i={int(np.argmax(err)) + off}")
    return checks


RUNNERS = {"sinr": run_sinr, "asainr": run_asainr, "simulate": run_simulate, "validate": run_validate}


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return _json_value(v.item())
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_json_value(x) for x in v]
    return v


def render(command: str, rows: list[dict], echo: dict, fmt: str) -> str:
    columns = COLUMNS[command]
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "config": echo,
               "columns": columns, "rows": [{c: r[c] for c in columns} for r in rows]}
        return json.dumps(_json_value(doc), indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow(["" if r[c] is None else (repr(float(r[c])) if isinstance(r[c], float) else r[c])
                         for c in columns])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ofdmcp",
        description="SINR and aSaINR of OFDM links with an insufficient cyclic prefix.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sinr": "per-subcarrier SINR for one channel realization",
        "asainr": "average-signal to average-interference-plus-noise ratio for a PDP",
        "simulate": "Monte-Carlo time-domain link simulation",
        "validate": "direct vs simplified vs simulated cross-checks",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--out", help="output file (default: config output.path or stdout)")
        p.add_argument("--format", choices=["csv", "json"], help="output format (default csv)")
        p.add_argument("--seed", type=int, help="override simulation.seed")
        p.add_argument("--no-noise", action="store_true", help="interference-limited analysis (1/SNR = 0)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, base = load_config(args.config)
        if args.config is None and args.command == "validate":
            cfg = DEFAULT_VALIDATE_CONFIG
        if args.seed is not None and not 0 <= args.seed < 2 ** 64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        exp = Experiment(cfg, base, args.command, args.seed, args.no_noise)
        rows = RUNNERS[args.command](exp)
    except (ConfigError, ValueError) as exc:
        print(f"ofdmcp {args.command}: error: {exc}", file=sys.stderr)
        return 2

    out = args.out or exp.out_path
    fmt = args.format or exp.out_format
    if fmt is None:
        fmt = "json" if out and str(out).endswith(".json") else "csv"
    text = render(args.command, rows, exp.echo, fmt)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)

    if args.command == "validate":
        failed = [r for r in rows if not r["passed"]]
        for r in rows:
            status = "PASS" if r["passed"] else "FAIL"
            print(f"{status} {r['check']}: max deviation {r['max_deviation']:.3e} "
                  f"(tolerance {r['tolerance']:.1e}) {r['detail']}", file=sys.stderr)
        return 1 if failed else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
