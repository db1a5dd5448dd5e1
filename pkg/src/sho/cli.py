"""Command-line interface: ``sho <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 configuration/domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from .bounds import growth_implies_nonnormalizable
from .errors import SHOError
from .frobenius import build_state, energy, eval_state
from .model import ALPHA_CRITICAL, Branch, admissible_branches, indicial_exponents
from .oracle import hft_check, residual_check, shoot_levels

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

COMMANDS = ("spectrum", "wavefn", "verify", "hft", "bounds", "figure1", "figure2")
FIGURE1_ALPHA_FLOOR = -0.249
FIGURE2_ALPHA = -0.0475

_GRID_DEFAULTS = {
    "verify": (0.1, 5.0, 4901),
    "figure2": (0.001, 4.0, 400),
    "wavefn": (0.001, 4.0, 400),
}


class ConfigError(SHOError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    alpha: float = 0.0
    alpha_min: float = -0.24
    alpha_max: float = 2.0
    alpha_steps: int = 200
    n_max: int = 3
    branch: str = "both"
    x_min: float = 0.1
    x_max: float = 5.0
    points: int = 4901
    format: str = "csv"
    out: Optional[str] = None
    tol: float = 1e-6
    energy: Optional[float] = None
    beta: float = 0.75

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.n_max < 0:
            raise ConfigError("--n-max must be >= 0")
        if self.points < 2:
            raise ConfigError("--points must be >= 2")
        if not self.x_min > 0 or not self.x_max > self.x_min:
            raise ConfigError("need 0 < --x-min < --x-max")
        if self.command == "figure1":
            if self.alpha_min < FIGURE1_ALPHA_FLOOR:
                raise ConfigError(f"--alpha-min must be >= {FIGURE1_ALPHA_FLOOR}")
            if self.alpha_max < self.alpha_min or self.alpha_steps < 1:
                raise ConfigError("need --alpha-min <= --alpha-max and --alpha-steps >= 1")
        elif self.alpha < ALPHA_CRITICAL:
            raise ConfigError(f"alpha={self.alpha!r} < -1/4 is outside the model")
        return self


def fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _branches(alpha: float, which: str):
    branches = admissible_branches(alpha)
    if which != "both":
        branches = tuple(b for b in branches if b.branch.value == which)
        if not branches:
            plus, minus = indicial_exponents(alpha)
            b = plus if which == "plus" else minus
            b.require_admissible()
    return branches


def _parallel_map(fn, items):
    items = list(items)
    if os.environ.get("SHO_NO_PARALLEL") == "1" or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=min(8, len(items), os.cpu_count() or 1)) as pool:
        return list(pool.map(fn, items))


def _grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.x_min, cfg.x_max, cfg.points)


# -- commands -----------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig):
    rows = []
    for b in _branches(cfg.alpha, cfg.branch):
        for n in range(cfg.n_max + 1):
            rows.append({"alpha": cfg.alpha, "branch": b.branch.value, "s": b.s, "n": n,
                         "E": energy(n, b.s)})
    # stable sort keeps minus rows first on ties
    rows.sort(key=lambda r: r["E"])
    return ["alpha", "branch", "s", "n", "E"], rows


def cmd_figure1(cfg: RunConfig):
    rows = []
    for alpha in np.linspace(cfg.alpha_min, cfg.alpha_max, cfg.alpha_steps):
        alpha = float(alpha)
        branches = admissible_branches(alpha)
        for n in range(cfg.n_max + 1):
            for b in branches:
                rows.append({"alpha": alpha, "branch": b.branch.value, "n": n,
                             "E": energy(n, b.s)})
    return ["alpha", "branch", "n", "E"], rows


def cmd_figure2(cfg: RunConfig):
    plus, minus = indicial_exponents(cfg.alpha)
    ho_plus, ho_minus = indicial_exponents(0.0)
    states = [build_state(0, b) for b in (minus, plus, ho_minus, ho_plus)]
    x = _grid(cfg)
    cols = [eval_state(st, x) for st in states]
    names = ["x", "psi_minus", "psi_plus", "psi_even_ho", "psi_odd_ho"]
    rows = [dict(zip(names, (float(xi), *(float(c[i]) for c in cols)))) for i, xi in enumerate(x)]
    return names, rows


def cmd_wavefn(cfg: RunConfig):
    x = _grid(cfg)
    names, cols = ["x"], []
    for b in _branches(cfg.alpha, cfg.branch):
        for n in range(cfg.n_max + 1):
            names.append(f"psi_{b.branch.value}_n{n}")
            cols.append(eval_state(build_state(n, b), x))
    rows = [dict(zip(names, (float(xi), *(float(c[i]) for c in cols)))) for i, xi in enumerate(x)]
    return names, rows


def cmd_verify(cfg: RunConfig):
    branches = _branches(cfg.alpha, cfg.branch)
    grid = _grid(cfg)

    def run(b):
        found = shoot_levels(cfg.alpha, b, cfg.n_max)
        out = []
        for n in range(cfg.n_max + 1):
            exact = energy(n, b.s)
            shot = found[n].energy if n < len(found) else math.nan
            res = residual_check(build_state(n, b), grid, tol=cfg.tol)
            diff = abs(shot - exact)
            ok = diff <= cfg.tol and res <= cfg.tol
            out.append({"alpha": cfg.alpha, "branch": b.branch.value, "s": b.s, "n": n,
                        "E_exact": exact, "E_shooting": shot, "abs_diff": diff,
                        "residual": res, "status": "pass" if ok else "FAIL"})
        return out

    rows = [r for group in _parallel_map(run, branches) for r in group]
    return ["alpha", "branch", "s", "n", "E_exact", "E_shooting", "abs_diff", "residual", "status"], rows


def cmd_hft(cfg: RunConfig):
    reports = []
    for b in _branches(cfg.alpha, cfg.branch):
        for n in range(cfg.n_max + 1):
            reports.append(hft_check(cfg.alpha, b, n))
    return reports


def cmd_bounds(cfg: RunConfig):
    b = _branches(cfg.alpha, cfg.branch)[-1]
    e = cfg.energy if cfg.energy is not None else energy(0, b.s) + 0.5
    return growth_implies_nonnormalizable(cfg.alpha, b, e, cfg.beta)


# -- output -------------------------------------------------------------------

def render_table(names, rows, fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for r in rows:
        writer.writerow([fmt(r[k]) for k in names])
    return buf.getvalue()


def _hft_json(r):
    return {
        "alpha": r.alpha, "branch": r.branch.value, "n": r.n, "s": r.s,
        "dE_dalpha_analytic": r.dE_dalpha_analytic,
        "dE_dalpha_finite_difference": r.dE_dalpha_finite_difference,
        "expectation_half_inverse_x2": "divergent" if r.divergent else r.expectation_half_inverse_x2,
        "expectation_quadrature": r.expectation_quadrature,
        "cutoff_scan": [list(p) for p in r.cutoff_scan],
        "cutoff_exponent": r.cutoff_exponent,
    }


def render_hft(reports, fmt_name, tol):
    if fmt_name == "json":
        return json.dumps([_hft_json(r) for r in reports], indent=2) + "\n", True
    lines, ok = [], True
    for r in reports:
        head = f"alpha={fmt(r.alpha)} branch={r.branch.value} s={fmt(r.s)} n={r.n}"
        if r.divergent:
            lines.append(f"{head}: analytic = {fmt(r.dE_dalpha_analytic)}, "
                         f"fd = {fmt(r.dE_dalpha_finite_difference)}, expectation Divergent")
            lines.append("  eps,truncated_half_inverse_x2")
            lines += [f"  {fmt(eps)},{fmt(v)}" for eps, v in r.cutoff_scan]
            lines.append(f"  fitted exponent {fmt(r.cutoff_exponent)} "
                         f"(expected {fmt(2 * r.s - 1)})")
        else:
            agree = (abs(r.dE_dalpha_finite_difference - r.dE_dalpha_analytic) <= tol
                     and abs(r.expectation_half_inverse_x2 - r.dE_dalpha_analytic) <= tol)
            ok &= agree
            rel = "=" if agree else "!="
            lines.append(f"{head}: analytic = {fmt(r.dE_dalpha_analytic)} {rel} "
                         f"fd = {fmt(r.dE_dalpha_finite_difference)} {rel} "
                         f"expectation = {fmt(r.expectation_half_inverse_x2)}")
    return "\n".join(lines) + "\n", ok


def render_bounds(v, fmt_name):
    if fmt_name == "json":
        doc = {"alpha": v.alpha, "s": v.s, "E": v.energy, "beta": v.bound.beta,
               "k": v.bound.k, "C": v.bound.C, "correction_poly": list(v.bound.correction_poly),
               "witness": [dict(zip(("x", "u_lower", "psi2_lower", "psi2_series"), w))
                           for w in v.witness],
               "increasing": v.increasing}
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"alpha={fmt(v.alpha)} s={fmt(v.s)} E={fmt(v.energy)} beta={fmt(v.bound.beta)} "
             f"k={v.bound.k} C={fmt(v.bound.C)}",
             "x,u_lower,psi2_lower,psi2_series"]
    lines += [",".join(fmt(c) for c in w) for w in v.witness]
    lines.append("growth witness increasing" if v.increasing else "growth witness NOT increasing")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sho", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-min", type=float, default=-0.24)
    p.add_argument("--alpha-max", type=float, default=2.0)
    p.add_argument("--alpha-steps", type=int, default=200)
    p.add_argument("--n-max", type=int)
    p.add_argument("--branch", choices=("plus", "minus", "both"), default="both")
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--format", choices=("csv", "json", "text"))
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--energy", type=float, help="off-eigenvalue energy for `bounds`")
    p.add_argument("--beta", type=float, default=0.75)
    return p


def config_from_args(ns) -> RunConfig:
    grid = _GRID_DEFAULTS.get(ns.command, (0.1, 5.0, 4901))
    report = ns.command in ("hft", "bounds")
    alpha = ns.alpha
    if alpha is None:
        alpha = FIGURE2_ALPHA if ns.command == "figure2" else 0.0
    return RunConfig(
        command=ns.command,
        alpha=alpha,
        alpha_min=ns.alpha_min,
        alpha_max=ns.alpha_max,
        alpha_steps=ns.alpha_steps,
        n_max=ns.n_max if ns.n_max is not None else (0 if report else 3),
        branch=ns.branch,
        x_min=ns.x_min if ns.x_min is not None else grid[0],
        x_max=ns.x_max if ns.x_max is not None else grid[1],
        points=ns.points if ns.points is not None else grid[2],
        format=ns.format or ("text" if report else "csv"),
        out=ns.out,
        tol=ns.tol,
        energy=ns.energy,
        beta=ns.beta,
    ).validate()


def run(cfg: RunConfig):
    """Execute a command; returns ``(output text, exit code)``."""
    if cfg.command == "hft":
        text, ok = render_hft(cmd_hft(cfg), cfg.format, cfg.tol)
        return text, EXIT_OK if ok else EXIT_FAIL
    if cfg.command == "bounds":
        v = cmd_bounds(cfg)
        return render_bounds(v, cfg.format), EXIT_OK if v.increasing else EXIT_FAIL
    table = {"spectrum": cmd_spectrum, "figure1": cmd_figure1, "figure2": cmd_figure2,
             "wavefn": cmd_wavefn, "verify": cmd_verify}[cfg.command]
    names, rows = table(cfg)
    text = render_table(names, rows, "json" if cfg.format == "json" else "csv")
    code = EXIT_OK
    if cfg.command == "verify":
        bad = [r for r in rows if r["status"] != "pass"]
        if bad:
            code = EXIT_FAIL
        worst = max(r["abs_diff"] for r in rows)
        worst_res = max(r["residual"] for r in rows)
        summary = (f"# {len(rows) - len(bad)}/{len(rows)} cases pass; max |dE| = {worst:.3e}, "
                   f"max residual = {worst_res:.3e}\n")
        print(summary, end="", file=sys.stderr)
    return text, code


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text, code = run(cfg)
    except SHOError as exc:
        print(f"sho: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
