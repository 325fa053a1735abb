"""Command-line front end.

    marcinkiewicz verify thm2 --n 1 --alpha 1.0 --family gauss-deriv --seed 7
    marcinkiewicz compute mu --alpha 1 --family gauss-deriv --index 0
    marcinkiewicz multiplier Abeta --beta 1.5 --svg

Exit codes: 0 pass, 1 check failed, 2 hypothesis or parameter-range error,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import verification as V
from .families import FAMILY_NAMES, FamilyInvariantError, build_family
from .kernels import MULTIPLIER_NAMES, multiplier_table
from .numerics import GridSpec, StructuralError
from .reports import _cell, _dump
from .square_functions import (
    BochnerRieszSquare,
    GStarFunction,
    MarcinkiewiczIntegral,
    PoissonG0,
    RieszDifferenceSquare,
)
from .svg import line_plot
from .transforms import MeanNonzeroError
from .validation import UnsupportedDimensionError

EXIT_PASS, EXIT_FAIL, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2, 64

THEOREMS = ("thm1", "thm2", "thm3", "thm4", "thm5", "thm6", "bridge-mu", "bridge-h", "bridge-g0",
            "lemma1", "lemma4", "lemma5", "phi-axioms", "decay-7.4", "asymptotics")
SQUARE_FUNCTIONS = ("mu", "h", "d", "gstar", "g0")

# g* in two variables (compute gstar, verify thm1) runs on a coarser scale grid unless overridden
_GSTAR_COARSE = {("m" if k == "steps_per_octave" else k): v for k, v in V.GSTAR_COARSE_2D.items()}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    target: str
    n: int = 1
    L: float | None = None
    N: int | None = None
    tmin: float = V.DEFAULT_TMIN
    tmax: float = V.DEFAULT_TMAX
    m: int | None = None
    alpha: tuple | None = None
    beta: tuple | None = None
    lam: tuple | None = None
    p: tuple | None = None
    a: int = 1
    x0: tuple | None = None
    family: str | None = None
    index: int = 0
    seed: int = 0
    out: str = "."
    formats: list = field(default_factory=list)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}


def _reals(text):
    try:
        vals = tuple(float(v) for v in str(text).split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated reals, got {text!r}")
    return vals


_FLAGS = {
    "n": int, "L": float, "N": int, "tmin": float, "tmax": float, "m": int,
    "alpha": _reals, "beta": _reals, "lambda": _reals, "p": _reals, "a": int, "x0": _reals,
    "family": str, "index": int, "seed": int, "out": str,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    for name, kind in _FLAGS.items():
        common.add_argument(f"--{name}", dest=name.replace("lambda", "lam"), default=None,
                            type=str if kind is _reals else kind)
    for fmt in ("svg", "json", "csv"):
        common.add_argument(f"--{fmt}", action="store_true")
    common.add_argument("--config", default=None, help="key=value file; flags take precedence")
    common.add_argument("--timing", action="store_true", help="record runtime in report files")
    parser = _Parser(prog="marcinkiewicz", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("verify", parents=[common]).add_argument("target")
    sub.add_parser("compute", parents=[common]).add_argument("target")
    sub.add_parser("multiplier", parents=[common]).add_argument("target")
    return parser


def read_config_file(path) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-")
        if key not in _FLAGS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key.replace("lambda", "lam")] = value
    return out


def _convert(key, value):
    kind = _FLAGS["lambda" if key == "lam" else key]
    try:
        return kind(value)
    except ValueError:
        raise UsageError(f"bad value {value!r} for --{key}")


def parse_run_config(argv) -> tuple[RunConfig, bool]:
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("a command is required: verify, compute or multiplier")
    values = read_config_file(args.config) if args.config else {}
    for key in _FLAGS:
        k = key.replace("lambda", "lam")
        v = getattr(args, k)
        if v is not None:
            values[k] = v
    kwargs = {k: _convert(k, v) for k, v in values.items()}
    formats = [f for f in ("json", "csv", "svg") if getattr(args, f)]
    cfg = RunConfig(command=args.command, target=args.target, formats=formats, **kwargs)
    _check_target(cfg)
    return cfg, args.timing


def _check_target(cfg: RunConfig):
    valid = {"verify": THEOREMS, "compute": SQUARE_FUNCTIONS, "multiplier": MULTIPLIER_NAMES}
    if cfg.target not in valid[cfg.command]:
        raise UsageError(f"unknown {cfg.command} target {cfg.target!r}; "
                         f"choose from {', '.join(valid[cfg.command])}")
    if cfg.family is not None and cfg.family not in FAMILY_NAMES:
        raise UsageError(f"unknown family {cfg.family!r}; choose from {', '.join(FAMILY_NAMES)}")


def validate_ranges(cfg: RunConfig):
    """Reject out-of-range parameters before any computation (raises ValueError)."""
    if cfg.n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {cfg.n}")
    if cfg.L is not None and not cfg.L > 0:
        raise ValueError("L must be positive")
    if cfg.N is not None and (cfg.N < 8 or cfg.N & (cfg.N - 1)):
        raise ValueError("N must be a power of two >= 8")
    if not 0 < cfg.tmin < cfg.tmax:
        raise ValueError("need 0 < tmin < tmax")
    if cfg.m is not None and cfg.m < 4:
        raise ValueError("m must be at least 4")
    for name in ("alpha", "beta", "lam"):
        v = getattr(cfg, name)
        if v is not None:
            if len(v) not in (1, cfg.n):
                raise ValueError(f"--{name} needs 1 or n = {cfg.n} components")
            if any(not x > 0 for x in v):
                raise ValueError(f"--{name} components must be positive")
    if cfg.index < 0:
        raise ValueError("index must be non-negative")


def _grid(cfg: RunConfig, family: str) -> GridSpec:
    base = V.default_grid(cfg.n, family)
    return GridSpec(cfg.n, cfg.L if cfg.L is not None else base.L,
                    cfg.N if cfg.N is not None else base.N)


def _multi(v, default, n):
    v = default if v is None else v
    v = tuple(v) if isinstance(v, (tuple, list)) else (v,)
    return v * n if len(v) == 1 else v


def _check_cfg(cfg: RunConfig, grid: GridSpec) -> V.CheckConfig:
    return V.CheckConfig(grid=grid, tmin=cfg.tmin, tmax=cfg.tmax, steps_per_octave=cfg.m)


def _member(cfg: RunConfig, family):
    if cfg.index >= len(family):
        raise ValueError(f"family {family.name} has {len(family)} members, index {cfg.index}")
    return family.members[cfg.index], family.fields[cfg.index]


def run_verify(cfg: RunConfig) -> V.VerificationReport:
    t, n = cfg.target, cfg.n
    if t == "lemma1":
        return V.check_lemma1(seed=cfg.seed)
    if t == "lemma4":
        return V.check_lemma4(seed=cfg.seed)
    if t == "lemma5":
        return V.check_lemma5(alpha=_multi(cfg.alpha, 0.5, 1)[0], seed=cfg.seed)
    if t == "phi-axioms":
        return V.check_orlicz_phi_axioms(cfg.a, seed=cfg.seed)
    if t == "decay-7.4":
        return V.check_kernel_decay(_multi(cfg.alpha, (0.75, 1.0, 2.0), 1))
    if t == "asymptotics":
        return V.check_multiplier_asymptotics()
    fam_name = cfg.family or ("half-line" if t == "thm1" else "gauss-deriv")
    grid = _grid(cfg, fam_name)
    family = build_family(fam_name, grid, seed=cfg.seed)
    cc = _check_cfg(cfg, grid)
    if t.startswith("bridge"):
        member, _ = _member(cfg, family)
        x0 = _multi(cfg.x0, 0.5, n)
        if t == "bridge-mu":
            return V.check_plancherel_bridge_mu(member, _multi(cfg.alpha, 1.0, n), x0, cc)
        if t == "bridge-h":
            return V.check_plancherel_bridge_h(member, _multi(cfg.beta, 1.5, n), x0, cc)
        return V.check_g0_bridge(member, x0, cc)
    if t == "thm1":
        return V.check_theorem1(family, _multi(cfg.lam, 1.0, n), cc)
    if t == "thm2":
        return V.check_theorem2(family, _multi(cfg.alpha, 1.0, n), cc)
    if t == "thm3":
        return V.check_theorem3(family, _multi(cfg.alpha, 0.5, n), cc)
    if t == "thm4":
        return V.check_theorem4_lp(family, _multi(cfg.beta, 1.5, n), _multi(cfg.alpha, 1.0, n),
                                   cfg.p or (1.5, 2.0, 3.0), cc, enlarge_seed=cfg.seed + 1)
    if t == "thm5":
        return V.check_theorem5(family, _multi(cfg.alpha, 1.0, n), cc)
    if t == "thm6":
        return V.check_theorem6_weak_type(family, _multi(cfg.alpha, 0.75, n), cc)
    raise UsageError(t)


def run_compute(cfg: RunConfig):
    fam_name = cfg.family or "gauss-deriv"
    grid = _grid(cfg, fam_name)
    family = build_family(fam_name, grid, seed=cfg.seed)
    member, f = _member(cfg, family)
    n = cfg.n
    kw = dict(tmin=cfg.tmin, tmax=cfg.tmax, steps_per_octave=cfg.m or V.default_steps(n))
    t = cfg.target
    if t == "mu":
        est = MarcinkiewiczIntegral(_multi(cfg.alpha, 1.0, n), **kw)
    elif t == "h":
        est = BochnerRieszSquare(_multi(cfg.beta, 1.5, n), **kw)
    elif t == "d":
        est = RieszDifferenceSquare(_multi(cfg.alpha, 0.5, n), **kw)
    elif t == "g0":
        est = PoissonG0(**kw)
    else:
        est = GStarFunction(_multi(cfg.lam, 2.0, n), **kw)
    est.fit(grid)
    return member, est.points_, est.transform(f)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _echo_lines(cfg: RunConfig) -> str:
    return "".join(f"# {k}={_cell(v, 17)}\n" for k, v in cfg.echo().items())


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg, timing = parse_run_config(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.target in ("gstar", "thm1") and cfg.n == 2:
        _apply_coarse(cfg, argv)
    out = Path(cfg.out)
    try:
        validate_ranges(cfg)
        start = time.perf_counter()
        if cfg.command == "verify":
            report = run_verify(cfg)
            report.config = {"run": cfg.echo(), **report.config}
            formats = [f for f in cfg.formats if f != "svg"] or ["json", "csv"]
            if "json" in formats:
                _write(out / "report.json", report.to_json(include_runtime=timing))
            if "csv" in formats:
                _write(out / "report.csv", report.to_csv(include_runtime=timing))
            status = "PASS" if report.passed else "FAIL"
            print(f"{cfg.target}: {status} summary={json.dumps(report.summary)}")
            print(f"runtime {time.perf_counter() - start:.2f} s", file=sys.stderr)
            return EXIT_PASS if report.passed else EXIT_FAIL
        if cfg.command == "compute":
            member, points, values = run_compute(cfg)
            _write_compute(cfg, out, member, points, values)
            print(f"{cfg.target}: {len(values)} values written to {out}")
            return EXIT_PASS
        _write_multiplier(cfg, out)
        return EXIT_PASS
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (V.HypothesisError, V.WindowTooSmallError, FamilyInvariantError, MeanNonzeroError,
            UnsupportedDimensionError, StructuralError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def _apply_coarse(cfg: RunConfig, argv):
    given = {a.lstrip("-").split("=")[0] for a in argv if a.startswith("--")}
    for key, value in _GSTAR_COARSE.items():
        if key not in given:
            setattr(cfg, key, value)


def _write_compute(cfg, out: Path, member, points, values):
    formats = [f for f in cfg.formats if f != "svg"] or ["csv"]
    cols = ["index"] + [f"x{j + 1}" for j in range(points.shape[1])] + ["value"]
    if "csv" in formats:
        buf = io.StringIO()
        buf.write(_echo_lines(cfg))
        buf.write(f"# member={member.name}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for i, (p, v) in enumerate(zip(points, values)):
            w.writerow([i] + [_cell(float(c)) for c in p] + [_cell(float(v))])
        _write(out / "compute.csv", buf.getvalue())
    if "json" in formats:
        doc = {"config": cfg.echo(), "member": member.name,
               "rows": [{"index": i, "x": [float(c) for c in p], "value": float(v)}
                        for i, (p, v) in enumerate(zip(points, values))]}
        _write(out / "compute.json", _dump(doc) + "\n")


def _write_multiplier(cfg, out: Path):
    name = cfg.target
    param = {"Kalpha": _multi(cfg.alpha, 1.0, 1)[0], "Abeta": _multi(cfg.beta, 1.5, 1)[0],
             "Jalpha": _multi(cfg.alpha, 0.5, 1)[0], "G0": None,
             "phi-hat": _multi(cfg.alpha, 1.0, 1)[0]}[name]
    if name == "Jalpha" and not 0 < param < 1:
        raise V.HypothesisError("Jalpha needs 0 < alpha < 1")
    xi_max = cfg.L if cfg.L is not None else 20.0
    count = cfg.N if cfg.N is not None else 801
    xi = np.linspace(-xi_max, xi_max, count + 1 if count % 2 == 0 else count)
    table = multiplier_table(name, param, xi)
    cols = ["xi", "re", "im", "modulus", "normalized_modulus"]
    buf = io.StringIO()
    buf.write(_echo_lines(cfg))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in zip(*(table[c] for c in cols)):
        w.writerow([_cell(float(v)) for v in row])
    _write(out / "multiplier.csv", buf.getvalue())
    if "json" in cfg.formats:
        doc = {"config": cfg.echo(), "columns": cols,
               "rows": [[float(v) for v in row] for row in zip(*(table[c] for c in cols))]}
        _write(out / "multiplier.json", _dump(doc) + "\n")
    if "svg" in cfg.formats:
        label = name if param is None else f"{name} ({param:g})"
        svg = line_plot({"modulus": (xi, table["modulus"]),
                         "normalized modulus": (xi, table["normalized_modulus"])},
                        title=label, xlabel="xi", ylabel="log10 value", logy=True)
        _write(out / "multiplier.svg", svg)
    print(f"{name}: {len(xi)} rows written to {out}")


if __name__ == "__main__":
    sys.exit(main())
