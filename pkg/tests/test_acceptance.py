"""Acceptance criteria 1-10, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
Every line reports the measured quantities next to the tolerance they are held to.
"""

import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from marcinkiewicz import MarcinkiewiczIntegral
from marcinkiewicz.families import build_family
from marcinkiewicz.verification import (
    GSTAR_COARSE_2D,
    CheckConfig,
    check_dilation,
    check_g0_bridge,
    check_kernel_decay,
    check_lemma1,
    check_lemma4,
    check_lemma5,
    check_multiplier_asymptotics,
    check_plancherel_bridge_h,
    check_plancherel_bridge_mu,
    check_separable,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    check_theorem5,
    check_theorem6_weak_type,
    default_grid,
)

X0 = 0.3
# at x0 = 0.3 the profile tail 2 e^{-X} |f'(x0)| reaches the 1e-8 guard for X = 20
WINDOW = 24.0


def _line(number, ok, detail):
    text = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(text, file=sys.__stdout__, flush=True)
    return ok


def _timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def criterion_1():
    members = build_family("gauss-deriv", default_grid(1)).members
    worst, slowest, ok = {}, 0.0, True
    cases = [("mu", a, 5e-3) for a in (1.0, 2.0)] + [("h", b, 5e-3) for b in (1.5, 2.5)]
    cases += [("h", 0.75, 1e-2), ("g0", None, 5e-3)]
    for m in members:
        for kind, p, tol in cases:
            if kind == "mu":
                r, dt = _timed(check_plancherel_bridge_mu, m, p, X0, tol=tol, window=WINDOW)
            elif kind == "h":
                r, dt = _timed(check_plancherel_bridge_h, m, p, X0, tol=tol, window=WINDOW)
            else:
                r, dt = _timed(check_g0_bridge, m, X0, tol=tol, window=WINDOW)
            key = f"{kind}({p})" if p is not None else kind
            worst[key] = max(worst.get(key, 0.0), r.summary["residual_max"])
            slowest = max(slowest, dt)
            ok &= r.passed and dt < 30
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    return _line(1, ok, f"bridge residuals {detail} (< 5e-3, 1e-2 at beta 0.75); slowest {slowest:.1f}s (< 30s)")


def criterion_2():
    r, dt = _timed(check_multiplier_asymptotics)
    s = r.summary
    ok = r.passed and dt < 5
    return _line(2, ok, f"bracket instability {s['residual_max']:.3f} (< 0.05), K(0) err {s['k_at_zero']:.1e} "
                        f"(< 1e-12), A(0) err {s['a_at_zero']:.1e} (< 1e-10); {dt:.1f}s (< 5s)")


def criterion_3():
    r = check_lemma4()
    s = r.summary
    return _line(3, r.passed, f"|ratio - 1| at |y| = 80 max {s['residual_max']:.1e} (< 1e-2), "
                              f"recurrence {s['recurrence']:.1e}, classical {s['classical']:.1e} (< 1e-12)")


def criterion_4():
    fam = build_family("gauss-deriv", default_grid(1))
    start = time.perf_counter()
    spreads, stab, ok = [], [], True
    for a in (0.75, 1.0, 1.5):
        r = check_theorem2(fam, a)
        spreads.append(r.summary["spread"])
        stab.append(r.summary["residual_max"])
        ok &= r.passed
    dil = check_dilation("thm2", fam, 1.0)
    sep = check_separable("thm2", param=1.0)
    dt = time.perf_counter() - start
    ok &= dil.passed and sep.passed and dt < 120
    return _line(4, ok, f"spreads {', '.join(f'{v:.2f}' for v in spreads)} (< 20); refinement change "
                        f"max {max(stab):.3f} (< 0.10); dilation {dil.summary['residual_max']:.1e}, "
                        f"separable {sep.summary['residual_max']:.1e} (< 1e-3); {dt:.0f}s (< 120s)")


def criterion_5():
    half = build_family("half-line", default_grid(1, "half-line"))
    riesz = build_family("gauss-deriv", default_grid(1))
    ok, parts = True, []
    for lam in (0.5, 1.0, 2.0):
        r = check_theorem1(half, lam)
        ok &= r.passed
        parts.append(f"thm1 lambda {lam:g}: {r.summary['spread']:.2f}/{r.summary['residual_max']:.3f}")
    for a in (0.25, 0.5, 0.75):
        r = check_theorem3(riesz, a)
        ok &= r.passed
        parts.append(f"thm3 alpha {a:g}: {r.summary['spread']:.2f}/{r.summary['residual_max']:.3f}")
    half2 = build_family("half-line", default_grid(2, "half-line"))
    r2, dt = _timed(check_theorem1, half2, 2.0, CheckConfig(**GSTAR_COARSE_2D))
    ok &= r2.passed and dt <= 300
    parts.append(f"thm1 n=2 smoke: {r2.summary['spread']:.2f}/{r2.summary['residual_max']:.3f} in {dt:.0f}s (<= 300s)")
    return _line(5, ok, "spread/refinement change (< 20 / < 0.10): " + "; ".join(parts))


def criterion_6():
    fam = build_family("gauss-deriv", default_grid(1))
    r = check_theorem5(fam, 1.0)
    d = check_dilation("thm5", fam, 1.0)
    c = r.summary["max"]
    ok = r.passed and np.isfinite(c) and d.passed and d.summary["c_emp_change"] < 1e-3
    return _line(6, ok, f"C_emp {c:.4f}, refinement change {r.summary['residual_max']:.1e} (< 0.10), "
                        f"dilation change {d.summary['c_emp_change']:.1e} (< 1e-3)")


def criterion_7():
    grid = default_grid(1)
    avg = MarcinkiewiczIntegral(1.0).fit(grid)
    diff = MarcinkiewiczIntegral(1.0, representation="difference").fit(grid)
    worst = 0.0
    for name in ("gauss-deriv", "random"):
        for f in build_family(name, grid).fields:
            a, b = avg.transform(f), diff.transform(f)
            worst = max(worst, float(np.max(np.abs(a - b)) / np.max(a)))
    return _line(7, worst < 1e-6, f"max relative difference {worst:.1e} (< 1e-6)")


def criterion_8():
    l1, l5, dec = check_lemma1(count=20), check_lemma5(count=10), check_kernel_decay(u_max=100.0)
    ok = l1.passed and l5.passed and dec.passed
    return _line(8, ok, f"Laplace formula residual {l1.summary['residual_max']:.1e} (< 1e-8), "
                        f"quadrature vs spectral {l5.summary['residual_max']:.1e} (< 1e-3), "
                        f"decay bound over u in [0, 100] {'holds' if dec.passed else 'violated'}")


def criterion_9():
    ok, parts = True, []
    for n in (1, 2):
        fam = build_family("gauss-deriv", default_grid(n))
        r, dt = _timed(check_theorem6_weak_type, fam, 0.75)
        limit = 300 if n == 2 else np.inf
        ok &= r.passed and np.isfinite(r.summary["max"]) and dt < limit
        parts.append(f"n={n}: C_emp {r.summary['max']:.3f}, level refinement {r.summary['residual_max']:.3f} "
                     f"(< 0.10), scaling {r.summary['scaling_residual']:.1e} (< 1e-10), {dt:.0f}s")
    return _line(9, ok, "; ".join(parts) + " (n=2 < 300s)")


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "marcinkiewicz.cli", *argv], capture_output=True)


def criterion_10():
    runs = [("verify", "thm2", "--alpha", "1.0", "--family", "gauss-deriv", "--seed", "7"),
            ("compute", "mu", "--family", "random", "--seed", "7"),
            ("multiplier", "Abeta", "--beta", "1.5", "--json")]
    same, codes = True, []
    with tempfile.TemporaryDirectory() as tmp:
        for i, argv in enumerate(runs):
            outs = [Path(tmp) / f"{i}-{k}" for k in range(2)]
            for out in outs:
                codes.append(_cli(*argv, "--out", str(out)).returncode)
            files = sorted(p.name for p in outs[0].iterdir())
            same &= bool(files) and all((outs[0] / f).read_bytes() == (outs[1] / f).read_bytes() for f in files)
    ok = same and all(c == 0 for c in codes)
    return _line(10, ok, f"repeated verify/compute/multiplier outputs byte-identical: {same}; exit codes {codes}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(10)])
def test_criterion(criterion):
    assert _run(criterion)


def _run(criterion):
    try:
        return criterion()
    except Exception as exc:
        number = int(criterion.__name__.rsplit("_", 1)[1])
        return _line(number, False, f"raised {type(exc).__name__}: {exc}")


if __name__ == "__main__":
    results = [_run(c) for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
