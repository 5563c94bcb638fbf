"""Command-line surface.

Subcommands: spectrum, fundamental, mode-grid, verify.  Payload goes to
stdout (JSON or CSV), diagnostics to stderr.  Exit codes: 0 ok, 1 compute
error, 2 usage error, 3 verification-gate failure.  --reproducible strips
the timestamp/host fields so outputs are byte-identical across runs.
"""

from __future__ import annotations

import argparse
import sys

from .bessel import DimensionContext
from .errors import FreePlateError
from .modes import AngularFactor, GridSpec, sample_constant_mode, sample_mode
from .serialize import envelope, to_csv, to_json
from .spectrum import PlateProblem, eigenvalues, fundamental_report
from .verify import lemma_suite, residual_report

GATES = {
    "m_residual": 1e-8,
    "v_residual": 1e-8,
    "pde_residual": 1e-8,
    "rayleigh_gap": 1e-7,
}
ROOT_TOL = 1e-12


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freeplate",
        description="Free-plate-under-tension eigenvalues and modes on d-balls",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--dim", type=int, required=True,
                       help="ambient dimension d (integer >= 2)")
        p.add_argument("--tau", type=float, required=True,
                       help="tension/rigidity ratio (must be > 0)")
        p.add_argument("--radius", type=float, default=1.0,
                       help="ball radius (default 1)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--reproducible", action="store_true",
                       help="omit timestamp/host for golden-file comparison")

    p_spec = sub.add_parser("spectrum", help="sorted eigenvalue table")
    common(p_spec)
    p_spec.add_argument("--lmax", type=int, default=6)
    p_spec.add_argument("--count", type=int, default=8)

    p_fund = sub.add_parser("fundamental",
                            help="fundamental tone with theorem cross-checks")
    common(p_fund)

    p_grid = sub.add_parser("mode-grid", help="sampled eigenfunction grid")
    common(p_grid)
    p_grid.add_argument("--index", type=int, required=True,
                        help="entry index in the computed spectrum")
    p_grid.add_argument("--lmax", type=int, default=6)
    p_grid.add_argument("--nr", type=int, default=64)
    p_grid.add_argument("--ntheta", type=int, default=128)
    p_grid.add_argument("--variant", default=None,
                        help="angular variant: cos|sin (d=2), zonal or an "
                             "order m (d=3), zonal (d>=4)")

    p_ver = sub.add_parser("verify", help="residual report or lemma suite")
    common(p_ver)
    group = p_ver.add_mutually_exclusive_group(required=True)
    group.add_argument("--index", type=int, default=None,
                       help="verify the k-th spectrum entry")
    group.add_argument("--lemmas", action="store_true",
                       help="run the sign/bound lemma suite")
    p_ver.add_argument("--lmax", type=int, default=6)
    return parser


def _validate(args) -> int:
    if args.dim < 2:
        print(f"error: --dim must be an integer >= 2 (got {args.dim}); "
              "the model is posed on d-dimensional balls, d >= 2",
              file=sys.stderr)
        return 2
    if not args.tau > 0.0:
        print(f"error: --tau must be positive (got {args.tau}); the free "
              "plate model covers tension tau > 0 only (compression and "
              "tau = 0 are out of scope)", file=sys.stderr)
        return 2
    if not args.radius > 0.0:
        print(f"error: --radius must be positive (got {args.radius})",
              file=sys.stderr)
        return 2
    for name in ("count", "nr", "ntheta"):
        if getattr(args, name, None) is not None and getattr(args, name) < 2:
            print(f"error: --{name} must be >= 2", file=sys.stderr)
            return 2
    if getattr(args, "lmax", None) is not None and args.lmax < 1:
        print("error: --lmax must be >= 1", file=sys.stderr)
        return 2
    return 0


def _parameters(args, *names) -> dict:
    params = {"dim": args.dim, "tau": args.tau, "radius": args.radius}
    for name in names:
        params[name] = getattr(args, name.replace("-", "_"))
    params["format"] = args.format
    params["reproducible"] = args.reproducible
    return params


def _tolerances() -> dict:
    tol = {"root_tol": ROOT_TOL}
    tol.update(GATES)
    return tol


def _entry_row(index: int, entry) -> dict:
    p = entry.params
    return {
        "index": index,
        "omega": entry.omega,
        "l": entry.l,
        "multiplicity": entry.multiplicity,
        "a": p.a if p else 0.0,
        "b": p.b if p else 0.0,
        "gamma": p.gamma if p else 0.0,
        "w_residual": p.w_residual if p else 0.0,
    }


SPECTRUM_HEADER = ["index", "omega", "l", "multiplicity", "a", "b", "gamma",
                   "w_residual"]


def _cmd_spectrum(args):
    problem = PlateProblem.create(args.dim, args.tau, args.radius)
    table = eigenvalues(problem, args.lmax, args.count)
    rows = [_entry_row(i, e) for i, e in enumerate(table.entries)]
    if args.format == "csv":
        return to_csv(SPECTRUM_HEADER,
                      [[r[k] for k in SPECTRUM_HEADER] for r in rows]), 0
    payload = {
        "entries": rows,
        "scan": {
            "a_max": table.scan.a_max,
            "step": table.scan.step,
            "root_tol": table.scan.root_tol,
            "l_max": table.metadata["l_max"],
            "omega_ceiling": table.metadata["omega_ceiling"],
            "certified_complete": table.metadata["certified_complete"],
            "note": table.metadata["note"],
        },
    }
    env = envelope("spectrum", _parameters(args, "lmax", "count"),
                   _tolerances(), payload, args.reproducible)
    return to_json(env), 0


def _cmd_fundamental(args):
    problem = PlateProblem.create(args.dim, args.tau, args.radius)
    mode, checks = fundamental_report(problem)
    payload = {
        "l": mode.l,
        "a": mode.a,
        "b": mode.b,
        "gamma": mode.gamma,
        "gamma_scaled": mode.gamma_scaled,
        "omega": mode.omega,
        "w_residual": mode.w_residual,
        "checks": checks,
    }
    if args.format == "csv":
        rows = [[k, v] for k, v in payload.items() if k != "checks"]
        rows += [[f"check_{k}", v] for k, v in checks.items()]
        return to_csv(["key", "value"], rows), 0
    env = envelope("fundamental", _parameters(args), _tolerances(), payload,
                   args.reproducible)
    return to_json(env), 0


def _resolve_variant(args, dim: DimensionContext, l: int):
    if args.variant is None:
        return None
    v = args.variant
    if v not in ("cos", "sin", "zonal"):
        v = int(v)
    return AngularFactor(dim, l, v)


def _cmd_mode_grid(args):
    problem = PlateProblem.create(args.dim, args.tau, args.radius)
    table = eigenvalues(problem, args.lmax, args.index + 1)
    if args.index >= len(table.entries):
        raise FreePlateError(
            f"--index {args.index} is outside the computed table "
            f"({len(table.entries)} entries)"
        )
    entry = table.entries[args.index]
    grid = GridSpec(args.nr, args.ntheta)
    if entry.params is None:
        mg = sample_constant_mode(problem.dim, problem.radius, grid)
    else:
        factor = _resolve_variant(args, problem.dim, entry.l)
        mg = sample_mode(entry, problem.radius, grid, factor)
    if args.format == "csv":
        rows = []
        for i, r in enumerate(mg.radial_nodes):
            for jj, th in enumerate(mg.angular_nodes):
                rows.append([float(r), float(th), float(mg.values[i, jj])])
        return to_csv(["r", "theta", "u"], rows), 0
    payload = {
        "radial_nodes": mg.radial_nodes,
        "angular_nodes": mg.angular_nodes,
        "values": mg.values,
        "metadata": mg.metadata,
    }
    env = envelope("mode-grid",
                   _parameters(args, "index", "nr", "ntheta", "variant"),
                   _tolerances(), payload, args.reproducible)
    return to_json(env), 0


def _cmd_verify(args):
    problem = PlateProblem.create(args.dim, args.tau, args.radius)
    if args.lemmas:
        verdicts = lemma_suite(problem.dim)
        all_passed = all(v.passed for v in verdicts)
        rows = [
            {
                "name": v.name,
                "dimension": v.dimension,
                "passed": v.passed,
                "margin": v.margin,
                "worst_z": v.worst_z,
                "n_points": v.n_points,
            }
            for v in verdicts
        ]
        if args.format == "csv":
            text = to_csv(
                ["name", "dimension", "passed", "margin", "worst_z", "n_points"],
                [[r["name"], r["dimension"], r["passed"], r["margin"],
                  r["worst_z"], r["n_points"]] for r in rows],
            )
        else:
            payload = {"lemmas": rows, "all_passed": all_passed}
            text = to_json(envelope("verify", _parameters(args, "lemmas"),
                                    _tolerances(), payload, args.reproducible))
        return text, (0 if all_passed else 3)

    table = eigenvalues(problem, args.lmax, args.index + 1)
    if args.index >= len(table.entries):
        raise FreePlateError(
            f"--index {args.index} is outside the computed table "
            f"({len(table.entries)} entries)"
        )
    entry = table.entries[args.index]
    report = residual_report(entry, problem.radius)
    values = {
        "m_residual": report.m_residual,
        "v_residual": report.v_residual,
        "pde_residual": report.pde_residual,
        "rayleigh_gap": report.rayleigh_gap if entry.params else 0.0,
    }
    passed = all(values[k] <= GATES[k] for k in GATES)
    if args.format == "csv":
        rows = [["index", args.index], ["l", entry.l], ["omega", entry.omega]]
        rows += [[k, v] for k, v in values.items()]
        rows.append(["passed", passed])
        text = to_csv(["key", "value"], rows)
    else:
        payload = {
            "index": args.index,
            "l": entry.l,
            "omega": entry.omega,
            "report": values,
            "gates": dict(GATES),
            "passed": passed,
        }
        text = to_json(envelope("verify", _parameters(args, "index"),
                                _tolerances(), payload, args.reproducible))
    return text, (0 if passed else 3)


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "fundamental": _cmd_fundamental,
    "mode-grid": _cmd_mode_grid,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    code = _validate(args)
    if code:
        return code
    try:
        text, gate_code = _DISPATCH[args.command](args)
    except FreePlateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # unexpected compute failure
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return gate_code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
