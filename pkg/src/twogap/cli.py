"""Command-line front end.

    twogap <command> --scenario <file-or-bundled-name> [--out DIR] [options]

Commands write deterministic CSV (every float through repr-faithful %.17g)
so runs can be diffed byte for byte.  Exit codes: 0 on success, 1 when a
computation or verification fails, 2 for unusable input (bad scenario
file, missing packets, malformed arguments).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .degenerate import (
    OneIntervalModel,
    OnePointModel,
    TwoPointsModel,
    conjugation_residual,
    two_points_abs2_routes,
)
from .eigen import eigen_coeffs, eigen_residual, scattering_matrix_routes
from .errors import ParseError, TwogapError, ValidationError
from .evolution import evolve, evolve_decoupled, scatter
from .packets import StepPacket
from .scenario import Scenario, bundled_names, bundled_scenario, load_scenario
from .semigroup import compress_evolve, norm_decay_profile
from .spectral import SpectralDensity, fourier_coeffs
from .verify import render_checks, run_checks

__all__ = ["main"]


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return "%.17g" % float(x)


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _packet_rows(f: StepPacket):
    """Step-outline rows (x, re, im, abs2), two per cell edge."""
    from .domain import e2pi

    for u, v, stack in f.cells():
        for x in (u, v):
            val = sum(c * e2pi(n * x) for n, c in stack.items())
            yield (x, val.real, val.imag, abs(val) ** 2)


def _require(cond: bool, msg: str):
    if not cond:
        raise ParseError(msg)


def _lambda_grid(sc: Scenario) -> np.ndarray:
    _require(sc.lambda_grid.size > 0, f"scenario {sc.name!r} needs a lambda_grid")
    return sc.lambda_grid


def _time_grid(sc: Scenario) -> np.ndarray:
    _require(sc.time_grid.size > 0, f"scenario {sc.name!r} needs a time_grid")
    return sc.time_grid


def _need_pair(sc: Scenario):
    _require(sc.domain is not None, f"scenario {sc.name!r} needs a domain section")
    _require(sc.bm is not None, f"scenario {sc.name!r} needs a boundary section")
    return sc.bm, sc.domain


def _cmd_eigen(sc: Scenario, out: Path, args) -> int:
    bm, dom = _need_pair(sc)
    rows = []
    for la in _lambda_grid(sc):
        co = eigen_coeffs(bm, dom, float(la))
        res = float(np.max(np.abs(eigen_residual(bm, dom, co))))
        rows.append(
            (la, co.a.real, co.a.imag, co.c.real, co.c.imag, res)
        )
    _write_csv(out / "eigen.csv", ["lambda", "a_re", "a_im", "c_re", "c_im", "residual"], rows)
    return 0


def _cmd_density(sc: Scenario, out: Path, args) -> int:
    bm, dom = _need_pair(sc)
    rho = SpectralDensity(bm, dom)
    rows = [(la, float(rho(float(la)))) for la in _lambda_grid(sc)]
    _write_csv(out / "density.csv", ["lambda", "value"], rows)
    table = fourier_coeffs(bm, domain=dom)
    _write_csv(
        out / "density_coeffs.csv",
        ["k", "re", "im"],
        [(k, v.real, v.imag) for k, v in zip(table.k, table.values)],
    )
    return 0


def _cmd_smatrix(sc: Scenario, out: Path, args) -> int:
    bm, dom = _need_pair(sc)
    rows = []
    for la in _lambda_grid(sc):
        routes = scattering_matrix_routes(bm, dom, float(la))
        vals = [routes["ratio"], routes["quotient"], routes["split"]]
        spread = max(abs(u - v) for i, u in enumerate(vals) for v in vals[i + 1 :])
        rows.append((la, routes["ratio"].real, routes["ratio"].imag, spread))
    _write_csv(out / "smatrix.csv", ["lambda", "re", "im", "route_spread"], rows)
    return 0


def _cmd_evolve(sc: Scenario, out: Path, args) -> int:
    bm, dom = _need_pair(sc)
    f = sc.packet("f")
    norm_rows = []
    for i, t in enumerate(_time_grid(sc)):
        if bm.w == 0.0:
            packet = evolve_decoupled(bm, dom, f, float(t)).packet
            trunc = 0.0
        else:
            result = evolve(bm, dom, f, float(t), eps=sc.eps)
            packet, trunc = result.packet, result.truncation
        _write_csv(
            out / f"evolve_{i:03d}.csv",
            ["x", "re", "im", "abs2"],
            _packet_rows(packet),
        )
        norm_rows.append((t, packet.norm2(), trunc))
    _write_csv(out / "evolve_norms.csv", ["t", "norm2", "truncation"], norm_rows)
    return 0


def _cmd_scatter(sc: Scenario, out: Path, args) -> int:
    bm, dom = _need_pair(sc)
    f = sc.packet("f")
    outgoing = scatter(bm, dom, f, eps=sc.eps)
    _write_csv(out / "scatter.csv", ["x", "re", "im", "abs2"], _packet_rows(outgoing))
    rows = []
    for la in _lambda_grid(sc):
        s = scattering_matrix_routes(bm, dom, float(la))["ratio"]
        rows.append((la, s.real, s.imag))
    _write_csv(out / "scatter_smatrix.csv", ["lambda", "re", "im"], rows)
    return 0


def _cmd_semigroup(sc: Scenario, out: Path, args) -> int:
    bm, dom = _need_pair(sc)
    lo, hi = dom.component("izero")
    mid = sc.packets.get("mid")
    if mid is None:
        mid = StepPacket.box(lo, hi, 1.0)
    ts = _time_grid(sc)
    _require(bool(np.all(ts >= 0.0)), "semigroup needs a nonnegative time_grid")
    rows = [
        (t, compress_evolve(bm, dom, mid, float(t), eps=sc.eps).packet.norm2())
        for t in ts
    ]
    _write_csv(out / "semigroup_norms.csv", ["t", "norm2"], rows)
    prof = norm_decay_profile(bm, 0, ts, eps=sc.eps)
    _write_csv(
        out / "semigroup_profile.csv",
        ["t", "engine", "oracle", "reference"],
        zip(prof.t, prof.engine, prof.oracle, prof.reference),
    )
    return 0


def _cmd_kernels(sc: Scenario, out: Path, args) -> int:
    from .eigen import eigenfunction_traces
    from .rkhs import BoundaryTrace, boundary_form, trace_condition_residuals

    bm, dom = _need_pair(sc)
    rows = []
    for la in _lambda_grid(sc):
        gl, gr = eigenfunction_traces(bm, dom, float(la))
        tr = BoundaryTrace(gr[0], gl[0], gr[1], gl[1])
        r1, r2 = trace_condition_residuals(bm, tr)
        rows.append((la, r1, r2, abs(boundary_form(tr, tr))))
    _write_csv(
        out / "kernels.csv",
        ["lambda", "residual_direct", "residual_inverse", "self_form_abs"],
        rows,
    )
    return 0


def _cmd_degenerate(sc: Scenario, out: Path, args) -> int:
    spec = sc.extras.get("model")
    _require(isinstance(spec, dict), f"scenario {sc.name!r} needs a model section")
    kind = spec.get("kind")
    if kind == "two_points":
        model = TwoPointsModel(w=float(spec["w"]), alpha=float(spec["alpha"]))
        xi = _lambda_grid(sc)
        direct, series = two_points_abs2_routes(model, xi)
        _write_csv(
            out / "degenerate.csv",
            ["xi", "direct", "series_re", "series_im"],
            zip(xi, direct, series.real, series.imag),
        )
        return 0
    if kind == "one_point":
        model = OnePointModel(theta=float(spec.get("theta", 0.0)))
    elif kind == "one_interval":
        model = OneIntervalModel(
            theta=float(spec.get("theta", 0.0)), alpha=float(spec["alpha"])
        )
    else:
        raise ParseError(f"unknown model kind {kind!r}")
    f = sc.packet("f")
    rows = [(t, conjugation_residual(model, f, float(t))) for t in _time_grid(sc)]
    _write_csv(out / "degenerate.csv", ["t", "conjugation_residual"], rows)
    return 0


def _cmd_verify(sc: Scenario, out: Path, args) -> int:
    results = run_checks(sc)
    print(render_checks(results))
    rows = []
    for r in results:
        rows.append(
            (
                r.name,
                {"PASS": 0, "FAIL": 1, "INFO": 2}[r.status],
                r.measured,
                r.tolerance if r.tolerance is not None else float("nan"),
            )
        )
    _write_csv(
        out / "verify.csv", ["name", "status_code", "measured", "tolerance"], rows
    )
    return 1 if any(r.status == "FAIL" for r in results) else 0


_COMMANDS = {
    "eigen": _cmd_eigen,
    "density": _cmd_density,
    "smatrix": _cmd_smatrix,
    "evolve": _cmd_evolve,
    "scatter": _cmd_scatter,
    "semigroup": _cmd_semigroup,
    "kernels": _cmd_kernels,
    "degenerate": _cmd_degenerate,
    "verify": _cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twogap",
        description="Momentum-operator scattering on the two-gap exterior domain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument(
            "--scenario",
            required=True,
            help="path to a scenario JSON file, or the name of a bundled one "
            f"({', '.join(bundled_names())})",
        )
        p.add_argument("--out", default=".", help="output directory (default: cwd)")
        p.add_argument("--eps", type=float, default=None, help="override series cutoff")
        p.add_argument("--tol", type=float, default=None, help="override tolerance")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        candidate = Path(args.scenario)
        if candidate.exists():
            sc = load_scenario(candidate)
        else:
            sc = bundled_scenario(args.scenario)
        if args.eps is not None or args.tol is not None:
            from dataclasses import replace

            sc = replace(
                sc,
                eps=args.eps if args.eps is not None else sc.eps,
                tol=args.tol if args.tol is not None else sc.tol,
            )
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](sc, out, args)
    except (ParseError, ValidationError) as exc:
        print(f"twogap: {exc}", file=sys.stderr)
        return 2
    except TwogapError as exc:
        print(f"twogap: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
