"""Command-line front end.

Subcommands: ``qfi`` (information-matrix tables), ``curves``
(uncertainty-product floors vs correlation, CSV/JSON/SVG), ``oracle-check``
(adjudication of the closed forms against the numerical engine),
``simulate`` (Monte Carlo QCRB saturation), ``scenario`` (end-to-end radar
estimation), and ``selftest`` (the built-in acceptance suite).

Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error.
Config precedence: flags > ``--config`` JSON file > defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .analytic import adjudicate, asymptotic_bound, qfi_entangled
from .kinematics import NATURAL_UNITS, ParameterPair, ProbeConfig, Strategy, Target
from .montecarlo import (
    McConfig,
    estimate_pair,
    run_scenario,
    sample_frequencies,
    sample_times,
)
from .oracle import model_for, qfi_numeric
from .selftest import run_selftest
from .states import GaussianBiphoton

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_IO = 3

ALL_STRATEGIES = [s.value for s in Strategy]
ALL_PAIRS = [p.value for p in ParameterPair]

DEFAULTS = {
    "kappa_min": -0.95,
    "kappa_max": 0.95,
    "kappa_step": 0.05,
    "sigma": 1.0,
    "strategy": "all",
    "pair": "both",
    "n": 100_000,
    "seed": 0,
    "out": ".",
    "format": "csv",
    "t_minus": 1.0,
    "omega_minus": 0.8,
    "omega0": 10.0,
    "scenario": "multibody",
    "kappa": -0.9,
    "r1": 300.0,
    "r2": 500.0,
    "v1": 0.0,
    "v2": 0.0,
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Shortest round-trip decimal representation, locale-independent."""
    return repr(float(x))


def _resolve(args: argparse.Namespace) -> dict:
    """Merge flag values over config-file values over defaults."""
    merged = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise OSError(f"cannot read config file: {exc}") from exc
        try:
            loaded = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a flat JSON object")
        for key, value in loaded.items():
            if key not in DEFAULTS:
                raise UsageError(f"unknown config key {key!r}")
            merged[key] = value
    for key in DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
    return merged


def kappa_grid(cfg: dict) -> list[float]:
    lo, hi, step = cfg["kappa_min"], cfg["kappa_max"], cfg["kappa_step"]
    if step <= 0:
        raise UsageError(f"--kappa-step must be positive, got {step}")
    if not (-1.0 < lo < 1.0 and -1.0 < hi < 1.0):
        raise UsageError("kappa grid must lie inside (-1, 1)")
    values = []
    k = lo
    i = 0
    while k <= hi + 1e-12:
        values.append(float(k))
        i += 1
        k = lo + i * step
    if not values:
        raise UsageError(f"empty kappa grid: min {lo} > max {hi}")
    return values


def selected_strategies(cfg: dict) -> list[Strategy]:
    name = cfg["strategy"]
    if name == "all":
        return list(Strategy)
    try:
        return [Strategy(name)]
    except ValueError:
        raise UsageError(f"unknown strategy {name!r}; choose from {ALL_STRATEGIES + ['all']}")


def selected_pairs(cfg: dict) -> list[ParameterPair]:
    name = cfg["pair"]
    if name == "both":
        return list(ParameterPair)
    try:
        return [ParameterPair(name)]
    except ValueError:
        raise UsageError(f"unknown pair {name!r}; choose from {ALL_PAIRS + ['both']}")


def _outdir(cfg: dict) -> str:
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)
    return out


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(cell if isinstance(cell, str) else fmt(cell) for cell in row))
            fh.write("\n")


def write_jsonl(path: str, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# minimal SVG emitter


def render_svg(title: str, xlabel: str, ylabel: str, series: list[tuple]) -> str:
    """Render labeled polyline curves as a standalone SVG 1.1 document."""
    width, height = 640, 480
    ml, mr, mt, mb = 70, 160, 40, 55
    xs_all = np.concatenate([np.asarray(xs, dtype=float) for _, xs, _ in series])
    ys_all = np.concatenate([np.asarray(ys, dtype=float) for _, _, ys in series])
    xmin, xmax = float(xs_all.min()), float(xs_all.max())
    ymin, ymax = float(ys_all.min()), float(ys_all.max())
    if xmax == xmin:
        xmax = xmin + 1.0
    if ymax == ymin:
        ymax = ymin + 1.0
    pad = 0.05 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad

    def sx(x: float) -> float:
        return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr)

    def sy(y: float) -> float:
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
        f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" '
        'stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="black"/>',
        f'<text x="{(ml + width - mr) / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{xlabel}</text>',
        f'<text x="18" y="{(mt + height - mb) / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {(mt + height - mb) / 2:.1f})">{ylabel}</text>',
    ]
    for xt in np.linspace(xmin, xmax, 5):
        px = sx(float(xt))
        parts.append(
            f'<line x1="{px:.2f}" y1="{height - mb}" x2="{px:.2f}" '
            f'y2="{height - mb + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{height - mb + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{xt:.3g}</text>'
        )
    for yt in np.linspace(ymin, ymax, 5):
        py = sy(float(yt))
        parts.append(f'<line x1="{ml - 5}" y1="{py:.2f}" x2="{ml}" y2="{py:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{ml - 9}" y="{py + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yt:.3g}</text>'
        )
    for idx, (label, xs, ys) in enumerate(series):
        color = colors[idx % len(colors)]
        points = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{points}"/>'
        )
        ly = mt + 18 * (idx + 1)
        lx = width - mr + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# strategy-level asymptotic information tables


def _asymptotic_H(strategy: Strategy, pair: ParameterPair, kappa: float, sigma: float):
    """Diagonal H entries in the well-separated-branch regime.

    The entangled value is exact at any separation; mixed strategies use
    the orthogonal-branch limit, which is where the strategy-level floors
    (1 and 2 sqrt(1 - kappa^2)) hold.
    """
    if strategy is Strategy.ENTANGLED_BIPHOTON:
        H = qfi_entangled(sigma, sigma, kappa, pair).H
        return float(H[0, 0]), float(H[1, 1])
    if strategy is Strategy.TWO_SINGLE_PHOTONS:
        return 2.0 * sigma**2, 1.0 / (2.0 * sigma**2)
    return sigma**2, 1.0 / (4.0 * (1.0 - kappa**2) * sigma**2)


def _compat_residual(strategy: Strategy, pair: ParameterPair, kappa: float, sigma: float) -> float:
    kwargs = {"sigma1": sigma, "kappa": kappa}
    if strategy is not Strategy.ENTANGLED_BIPHOTON:
        kwargs["t_minus"] = 50.0 / sigma
    return qfi_numeric(model_for(strategy, **kwargs), pair).compat_residual


# ---------------------------------------------------------------------------
# subcommands


def cmd_qfi(cfg: dict) -> int:
    if cfg["format"] == "svg":
        raise UsageError("qfi emits tables; use --format csv or json (svg is for curves)")
    rows = []
    records = []
    for strategy in selected_strategies(cfg):
        for pair in selected_pairs(cfg):
            for kappa in kappa_grid(cfg):
                sigma = float(cfg["sigma"])
                h11, h22 = _asymptotic_H(strategy, pair, kappa, sigma)
                bound = 1.0 / math.sqrt(h11 * h22)
                residual = _compat_residual(strategy, pair, kappa, sigma)
                rows.append(
                    [strategy.value, pair.value, kappa, sigma, h11, h22, bound, residual]
                )
                records.append(
                    {
                        "strategy": strategy.value,
                        "pair": pair.value,
                        "kappa": kappa,
                        "sigma": sigma,
                        "H11": h11,
                        "H22": h22,
                        "bound": bound,
                        "residual": residual,
                    }
                )
    out = _outdir(cfg)
    if cfg["format"] == "json":
        path = os.path.join(out, "qfi.jsonl")
        write_jsonl(path, records)
    else:
        path = os.path.join(out, "qfi.csv")
        write_csv(
            path,
            ["strategy", "pair", "kappa", "sigma", "H11", "H22", "bound", "residual"],
            rows,
        )
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_curves(cfg: dict) -> int:
    out = _outdir(cfg)
    kappas = kappa_grid(cfg)
    written = []
    for pair in selected_pairs(cfg):
        columns = {
            s.value: [asymptotic_bound(s, pair, k) for k in kappas] for s in Strategy
        }
        base = os.path.join(out, f"curves_{pair.value}")
        if cfg["format"] == "json":
            records = [
                {"pair": pair.value, "kappa": k, "strategy": name, "bound": col[i]}
                for name, col in columns.items()
                for i, k in enumerate(kappas)
            ]
            write_jsonl(base + ".jsonl", records)
            written.append(base + ".jsonl")
            continue
        header = ["kappa"] + [s.value for s in Strategy]
        rows = [
            [k] + [columns[s.value][i] for s in Strategy] for i, k in enumerate(kappas)
        ]
        write_csv(base + ".csv", header, rows)
        written.append(base + ".csv")
        if cfg["format"] == "svg":
            series = [(s.value, kappas, columns[s.value]) for s in Strategy]
            svg = render_svg(
                f"uncertainty-product floor, {pair.value}",
                "kappa",
                "Min[da db]",
                series,
            )
            with open(base + ".svg", "w", encoding="utf-8", newline="\n") as fh:
                fh.write(svg)
            written.append(base + ".svg")
    print("wrote " + ", ".join(written))
    return EXIT_OK


def cmd_oracle_check(cfg: dict) -> int:
    records = []
    sigma = float(cfg["sigma"])
    t_minus = float(cfg["t_minus"])
    omega_minus = float(cfg["omega_minus"])
    for pair in selected_pairs(cfg):
        for kappa in kappa_grid(cfg):
            for strategy in selected_strategies(cfg):
                if strategy is Strategy.TWO_SINGLE_PHOTONS and kappa != kappa_grid(cfg)[0]:
                    continue  # no correlation parameter; one row per pair suffices
                records.extend(
                    adjudicate(
                        strategy,
                        pair,
                        sigma=sigma,
                        kappa=kappa,
                        t_minus=t_minus,
                        omega_minus=omega_minus,
                    )
                )
    out = _outdir(cfg)
    path = os.path.join(out, "verdicts.jsonl")
    write_jsonl(path, records)
    confirmed = sum(1 for r in records if r["verdict"] == "confirmed")
    refuted = len(records) - confirmed
    print(f"wrote {len(records)} verdicts to {path}: {confirmed} confirmed, {refuted} refuted")
    return EXIT_OK


def cmd_simulate(cfg: dict) -> int:
    sigma = float(cfg["sigma"])
    n = int(cfg["n"])
    seed = int(cfg["seed"])
    if n < 2:
        raise UsageError("--n must be at least 2")
    strategies = [
        s
        for s in selected_strategies(cfg)
        if s in (Strategy.ENTANGLED_BIPHOTON, Strategy.TWO_SINGLE_PHOTONS)
    ]
    if not strategies:
        raise UsageError("simulate supports entangled_biphoton and two_single_photons only")
    header = [
        "strategy", "pair", "domain", "kappa", "sigma", "n", "seed",
        "estimate", "variance", "qcrb", "ratio", "ci_lo", "ci_hi", "ok",
    ]
    rows = []
    failures = []
    row_seed = seed
    for strategy in strategies:
        for pair in selected_pairs(cfg):
            for kappa in kappa_grid(cfg):
                state = GaussianBiphoton(0.0, 0.0, 1.0, 1.0, sigma, sigma, kappa)
                h11, h22 = _asymptotic_H(strategy, pair, kappa, sigma)
                for domain, entry in (("time", h11), ("frequency", h22)):
                    config = McConfig(n, row_seed, domain, strategy)
                    row_seed += 1
                    if domain == "time":
                        samples = sample_times(state, config)
                    else:
                        samples = sample_frequencies(state, config)
                    rep = estimate_pair(samples, pair, domain, entry)
                    lo, hi = rep.variance_interval_99
                    ok = lo <= rep.qcrb_variance <= hi
                    rows.append(
                        [
                            strategy.value, pair.value, domain, kappa, sigma,
                            str(n), str(config.seed), rep.estimate, rep.variance,
                            rep.qcrb_variance, rep.ratio, lo, hi,
                            "true" if ok else "false",
                        ]
                    )
                    if not ok:
                        failures.append(
                            f"{strategy.value}/{pair.value}/{domain} kappa={kappa}: "
                            f"QCRB {rep.qcrb_variance!r} outside 99% interval "
                            f"[{lo!r}, {hi!r}]"
                        )
    out = _outdir(cfg)
    if cfg["format"] == "json":
        path = os.path.join(out, "simulate.jsonl")
        write_jsonl(path, [dict(zip(header, row)) for row in rows])
    else:
        path = os.path.join(out, "simulate.csv")
        write_csv(path, header, rows)
    print(f"wrote {len(rows)} rows to {path}")
    if failures:
        for line in failures:
            print(f"saturation check failed: {line}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_scenario(cfg: dict) -> int:
    scenario = cfg["scenario"]
    if scenario not in ("multibody", "moving_object"):
        raise UsageError(f"unknown scenario {scenario!r}")
    strategy_name = cfg["strategy"]
    strategy = (
        Strategy.ENTANGLED_BIPHOTON if strategy_name == "all" else Strategy(strategy_name)
    )
    v1, v2 = float(cfg["v1"]), float(cfg["v2"])
    if scenario == "moving_object" and v1 != v2:
        raise UsageError("moving_object assumes a rigid body: --v1 must equal --v2")
    probe = ProbeConfig(
        omega0=float(cfg["omega0"]),
        sigma0=float(cfg["sigma"]),
        kappa=float(cfg["kappa"]),
        strategy=strategy,
    )
    report = run_scenario(
        scenario,
        (Target(float(cfg["r1"]), v1), Target(float(cfg["r2"]), v2)),
        probe,
        int(cfg["n"]),
        int(cfg["seed"]),
        NATURAL_UNITS,
    )
    out = _outdir(cfg)
    path = os.path.join(out, "scenario.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for key, value in report["estimates"].items():
        print(
            f"{key}: {value!r} +/- {report['std_errors'][key]!r} "
            f"(truth {report['truth'][key]!r}, "
            f"predicted QCRB s.e. {report['predicted_qcrb_std_errors'][key]!r})"
        )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_selftest(cfg: dict, as_json: bool) -> int:
    if as_json:
        code, records = run_selftest(emit=None)
        print(json.dumps(records, indent=2))
        return code
    code, _records = run_selftest()
    return code


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="flat JSON config file; flags take precedence")
    sp.add_argument("--out", help="output directory (default: current directory)")
    sp.add_argument("--format", choices=["csv", "json", "svg"], dest="format")
    sp.add_argument("--kappa-min", type=float, dest="kappa_min")
    sp.add_argument("--kappa-max", type=float, dest="kappa_max")
    sp.add_argument("--kappa-step", type=float, dest="kappa_step")
    sp.add_argument("--sigma", type=float)
    sp.add_argument("--strategy", choices=ALL_STRATEGIES + ["all"])
    sp.add_argument("--pair", choices=ALL_PAIRS + ["both"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfi-radar",
        description="Quantum Fisher information toolkit for two-photon Doppler radar.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("qfi", help="information-matrix table over a kappa grid"))
    _add_common(sub.add_parser("curves", help="uncertainty-product floors vs kappa"))

    sp = sub.add_parser("oracle-check", help="adjudicate closed forms against the engine")
    _add_common(sp)
    sp.add_argument("--t-minus", type=float, dest="t_minus",
                    help="branch time separation for mixed-state verdicts")
    sp.add_argument("--omega-minus", type=float, dest="omega_minus",
                    help="branch frequency separation for mixed-state verdicts")

    _add_common(sub.add_parser("simulate", help="Monte Carlo QCRB saturation campaign"))

    sp = sub.add_parser("scenario", help="end-to-end radar estimation")
    _add_common(sp)
    sp.add_argument("--scenario", choices=["multibody", "moving_object"])
    sp.add_argument("--r1", type=float)
    sp.add_argument("--r2", type=float)
    sp.add_argument("--v1", type=float)
    sp.add_argument("--v2", type=float)
    sp.add_argument("--omega0", type=float)
    sp.add_argument("--kappa", type=float, help="probe time correlation")

    sp = sub.add_parser("selftest", help="run the built-in acceptance suite")
    sp.add_argument("--json", action="store_true", help="emit machine-readable results")
    sp.add_argument("--config", help=argparse.SUPPRESS)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        if args.command == "qfi":
            return cmd_qfi(cfg)
        if args.command == "curves":
            return cmd_curves(cfg)
        if args.command == "oracle-check":
            return cmd_oracle_check(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "scenario":
            return cmd_scenario(cfg)
        if args.command == "selftest":
            return cmd_selftest(cfg, getattr(args, "json", False))
        parser.error(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
