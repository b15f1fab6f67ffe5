"""Command-line driver: transform | classify | factorize | verify.

Exit codes: 0 ok, 1 verification failure, 2 usage/parameter error,
3 insufficient data, 4 conditioning failure.  Every command writes a
manifest.json echoing the resolved configuration; identical configuration and
seed produce byte-identical JSON artifacts.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .classify import estimate_critical_h
from .errors import (
    ConditioningError,
    EstimationError,
    InsufficientDataError,
    LiefactError,
)
from .factorize import (
    FiniteRep,
    factorize_vector,
    gevrey_bump,
    strong_factorize,
    supported_factorize,
)
from .fourier import forward, inverse
from .groups import Torus, parse_group_spec
from .signals import heat_function, parse_builtin_spec, poisson_function
from .verify import run_verification
from .weights import parse_weight_spec


@dataclasses.dataclass
class RunConfig:
    """Resolved configuration of one CLI invocation; JSON round-trippable."""

    command: str
    group: str | None = None
    bandlimit: int | None = None
    weight: str | None = None
    h: float | None = None
    h_prime: float | None = None
    input_path: str | None = None
    builtin: str | None = None
    output_dir: str | None = None
    seed: int = 0
    supported: bool = False
    support_delta: float | None = None
    pieces: int | None = None
    bump_order: float = 2.0
    vector: bool = False
    rep: str | None = None
    coefficients: str | None = None
    fast: bool = False

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))


def _write(outdir: Path, name: str, text: str) -> str:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / name).write_text(text)
    return name


def _manifest(outdir: Path, config: RunConfig, outputs: list[str]):
    doc = {"command": config.command, "config": json.loads(config.to_json()),
           "outputs": sorted(outputs)}
    _write(outdir, "manifest.json", json.dumps(doc, sort_keys=True))


def _resolve_input(config: RunConfig):
    """Build (group, grid, GridFunction) from --builtin or --input."""
    group = parse_group_spec(config.group)
    grid = group.haar_quadrature(config.bandlimit)
    if config.builtin:
        name, params = parse_builtin_spec(config.builtin)
        if name == "poisson":
            return group, grid, poisson_function(group, grid, params[0])
        if name == "heat":
            return group, grid, heat_function(group, grid, params[0])
        if name == "bump":
            return group, grid, gevrey_bump(params[0], 0.0, params[1], grid)
    if config.input_path:
        text = Path(config.input_path).read_text()
        return group, grid, serialize.gridfunction_from_csv(text, group, grid)
    raise LiefactError("no input: pass --builtin or --input")


def cmd_transform(config: RunConfig) -> int:
    group, grid, f = _resolve_input(config)
    T = forward(f)
    roundtrip = inverse(T, grid)
    err = float(np.max(np.abs(roundtrip.values - f.values)))
    # Parseval gap on the grid = mass the band limit could not represent
    from .fourier import parseval_defect

    tail = parseval_defect(f)
    outdir = Path(config.output_dir)
    outputs = [
        _write(outdir, "coefficients.json", serialize.coefficients_to_json(T)),
        _write(outdir, "decay.csv", serialize.decay_table_csv(T)),
    ]
    _manifest(outdir, config, outputs)
    print(f"transform: {len(T.entries)} dual blocks, roundtrip sup error {err:.3e}, "
          f"discarded-tail mass (relative Parseval gap) {tail:.3e}")
    return 0


def cmd_classify(config: RunConfig) -> int:
    text = Path(config.coefficients).read_text()
    T = serialize.coefficients_from_json(text)
    w = parse_weight_spec(config.weight)
    report = estimate_critical_h(T, w)
    outdir = Path(config.output_dir)
    outputs = [
        _write(outdir, "decay_report.json", serialize.decay_report_json(report)),
        _write(outdir, "decay_report.csv", serialize.decay_report_csv(report)),
    ]
    _manifest(outdir, config, outputs)
    h_star = "inf" if not np.isfinite(report.h_star) else f"{report.h_star:.6g}"
    print(f"classify: h* = {h_star}, slope = {report.slope:.6g}, "
          f"residual = {report.residual:.3e}")
    if report.super_omega:
        print("classify: note: super-omega decay signature "
              "(h* drifts toward 0 along the spectrum)")
    return 0


def cmd_factorize(config: RunConfig) -> int:
    outdir = Path(config.output_dir)
    w = parse_weight_spec(config.weight)
    if config.vector:
        group = parse_group_spec(config.group)
        if isinstance(group, Torus):
            labels = [tuple(int(v) for v in part.split("/")) for part in config.rep.split(",")]
        else:
            labels = [int(v) for v in config.rep.split(",")]
        rep = FiniteRep.from_labels(group, labels,
                                    bandlimit_hint=max(config.bandlimit or 8, 8))
        rng = np.random.default_rng(config.seed)
        v = rng.standard_normal(rep.total_dim) + 1j * rng.standard_normal(rep.total_dim)
        res = factorize_vector(rep, v, w, config.h, config.h_prime)
        bundle = {
            "mode": "vector",
            "rep": config.rep,
            "action_residual": res.action_residual,
            "orbit_residual": res.orbit_residual,
            "params": {"weight": w.spec_string(), "h": config.h, "h_prime": config.h_prime},
        }
        outputs = [_write(outdir, "bundle.json", json.dumps(bundle, sort_keys=True))]
        _manifest(outdir, config, outputs)
        print(f"factorize(vector): action residual {res.action_residual:.3e}, "
              f"orbit residual {res.orbit_residual:.3e}")
        return 0
    group, grid, f = _resolve_input(config)
    if config.supported:
        res = supported_factorize(
            f, config.support_delta, w, config.h, config.h_prime,
            k=config.pieces, bump_order=config.bump_order,
        )
        mu_margin = min(res.mu[xi] - res.mu_bounds[xi] for xi in res.mu)
        sup_g = float(np.max(np.abs(res.g.values)))
        bundle = {
            "mode": "supported",
            "residual": res.residual,
            "outside_support_mass": res.outside_support_mass,
            "sup_g": sup_g,
            "min_mu_margin": mu_margin,
            "pieces": res.k,
            "params": {"weight": w.spec_string(), "h": config.h,
                       "h_prime": config.h_prime, "delta": config.support_delta},
        }
        outputs = [
            _write(outdir, "bundle.json", json.dumps(bundle, sort_keys=True)),
            _write(outdir, "f_prime_coefficients.json",
                   serialize.coefficients_to_json(res.f_prime)),
            _write(outdir, "g_grid.csv", serialize.gridfunction_to_csv(res.g)),
        ]
        _manifest(outdir, config, outputs)
        print(f"factorize(supported): residual {res.residual:.3e}, "
              f"outside-support mass {res.outside_support_mass:.3e}, "
              f"min mu margin {mu_margin:.3e}")
        return 0
    res = strong_factorize(f, w, config.h, config.h_prime)
    bundle = {
        "mode": "global",
        "residual": res.residual,
        "min_transfer_margin": res.min_transfer_margin,
        "min_transfer_margin_relative": res.min_transfer_margin_relative,
        "source_seminorm": res.source_seminorm,
        "multipliers": [
            {"xi": serialize.label_to_json(group, xi.label), "c": c}
            for xi, c in sorted(res.multipliers.items(),
                                key=lambda kv: (kv[0].casimir, str(kv[0].label)))
        ],
        "params": {"weight": w.spec_string(), "h": config.h, "h_prime": res.h_prime},
    }
    outputs = [
        _write(outdir, "bundle.json", json.dumps(bundle, sort_keys=True)),
        _write(outdir, "g_coefficients.json", serialize.coefficients_to_json(res.g)),
        _write(outdir, "f_prime_coefficients.json",
               serialize.coefficients_to_json(res.f_prime)),
    ]
    _manifest(outdir, config, outputs)
    print(f"factorize: residual {res.residual:.3e}, "
          f"min decay-transfer margin {res.min_transfer_margin:.3e} "
          f"({res.min_transfer_margin_relative:.3e} relative)")
    return 0


def cmd_verify(config: RunConfig) -> int:
    results = run_verification(seed=config.seed, fast=config.fast)
    width = max(len(r.name) for r in results)
    all_ok = True
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        all_ok &= r.ok
        print(f"{r.name:<{width}}  measured {r.measured:>12.4e}  "
              f"bound {r.bound:>10.2e}  {status}")
    if config.output_dir:
        outdir = Path(config.output_dir)
        doc = [dataclasses.asdict(r) for r in results]
        outputs = [_write(outdir, "verify.json", json.dumps(doc, sort_keys=True))]
        _manifest(outdir, config, outputs)
    print(f"verify: {'all properties pass' if all_ok else 'FAILURES present'}")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liefact",
        description="Fourier analysis and convolution factorization on compact groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--group", default="t1", help="t1 | t2 | su2")
        p.add_argument("--bandlimit", type=int, default=16)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", dest="output_dir", default="liefact-out")

    p = sub.add_parser("transform", help="forward transform, coefficient + decay files")
    common(p)
    p.add_argument("--builtin", help="poisson:t | heat:t | bump:s:halfwidth")
    p.add_argument("--input", dest="input_path", help="grid-function CSV")

    p = sub.add_parser("classify", help="decay classification of a coefficient file")
    common(p)
    p.add_argument("--coefficients", required=True)
    p.add_argument("--weight", default="gevrey:s=1")

    p = sub.add_parser("factorize", help="strong / supported / vector factorization")
    common(p)
    p.add_argument("--builtin")
    p.add_argument("--input", dest="input_path")
    p.add_argument("--weight", default="gevrey:s=1")
    p.add_argument("--h", type=float, default=0.5)
    p.add_argument("--h-prime", dest="h_prime", type=float, default=None)
    p.add_argument("--supported", action="store_true")
    p.add_argument("--support-delta", dest="support_delta", type=float, default=2.0)
    p.add_argument("--pieces", type=int, default=None)
    p.add_argument("--bump-order", dest="bump_order", type=float, default=2.0)
    p.add_argument("--vector", action="store_true")
    p.add_argument("--rep", help="comma-separated dual labels, e.g. 0,1,2")

    p = sub.add_parser("verify", help="run the full property suite")
    common(p)
    p.add_argument("--fast", action="store_true", help="smaller sizes")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    config = RunConfig(**{k: v for k, v in vars(args).items() if k in fields})
    handler = {
        "transform": cmd_transform,
        "classify": cmd_classify,
        "factorize": cmd_factorize,
        "verify": cmd_verify,
    }[config.command]
    try:
        return handler(config)
    except (InsufficientDataError, EstimationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConditioningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (LiefactError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
