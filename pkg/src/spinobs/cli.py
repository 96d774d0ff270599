"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 convergence warning,
3 invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from spinobs.checks import run_checks
from spinobs.densities import MASSFLOW_SPIN_COEFF, MOMENTUM_SPIN_COEFF
from spinobs.observables import ObservableReport, full_report
from spinobs.quadrature import default_grid, make_grid
from spinobs.statespec import SpecError, parse_json, parse_state

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONVERGENCE = 2
EXIT_INVARIANT = 3

BUGS = {"spin-coeff": MASSFLOW_SPIN_COEFF}
VECTOR_KEYS = ("L", "S_momentum", "S_massflow", "J_momentum", "J_bowman", "mu")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    state_specs: tuple = ()
    state_files: tuple = ()
    Z: float = 1.0
    r_max: float | None = None
    n_r: int | None = None
    n_theta: int | None = None
    n_phi: int | None = None
    output_format: str = "table"
    output_path: str | None = None
    seed: int = 0
    simulate_bug: str | None = None

    def __post_init__(self):
        for name in ("r_max", "n_r", "n_theta", "n_phi"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise InputError(f"--{name.replace('_', '')} must be positive, got {v}")
        if self.Z <= 0:
            raise InputError(f"--Z must be positive, got {self.Z}")
        if self.output_format not in ("table", "json", "csv"):
            raise InputError(f"unknown output format {self.output_format!r}")
        if self.simulate_bug is not None and self.simulate_bug not in BUGS:
            raise InputError(f"unknown --simulate-bug mode {self.simulate_bug!r}")

    @classmethod
    def from_mapping(cls, mapping):
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise InputError(f"unknown configuration key {sorted(unknown)[0]!r}")
        return cls(**mapping)

    @property
    def spin_coeff(self):
        return BUGS.get(self.simulate_bug, MOMENTUM_SPIN_COEFF)

    def grid_for(self, state):
        g = default_grid(state)
        return make_grid(
            self.r_max if self.r_max is not None else g.r_max,
            self.n_r if self.n_r is not None else g.n_r,
            self.n_theta if self.n_theta is not None else g.n_theta,
            self.n_phi if self.n_phi is not None else g.n_phi,
        )


def load_states(config):
    """(echo, state) pairs for every --state and --state-file, in that order."""
    out = []
    for spec in config.state_specs:
        out.append((spec, parse_state(spec, config.Z)))
    for path in config.state_files:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read state file {path!r}: {exc.strerror}") from None
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"state file {path!r} is not valid JSON: {exc}") from None
        out.append((obj, parse_json(obj, config.Z)))
    return out


def fmt(x):
    """Fixed-point, nine decimals, no negative zero."""
    s = f"{x:.9f}"
    return s[1:] if s.startswith("-") and not s.strip("-0.") else s


def fmt_scalar(x):
    if x is None:
        return ""
    return f"{x:.9g}"


def _label(echo):
    return echo if isinstance(echo, str) else json.dumps(echo, sort_keys=True, separators=(",", ":"))


def render_table(report, grid):
    lines = [
        f"state: {_label(report.state)}",
        f"grid: r_max={fmt_scalar(grid.r_max)} n_r={grid.n_r} n_theta={grid.n_theta} n_phi={grid.n_phi}",
        "units: J in hbar, mu in bohr_magneton",
        f"{'quantity':<12s} {'x':>14s} {'y':>14s} {'z':>14s}",
    ]
    rows = [(k, getattr(report, k)) for k in VECTOR_KEYS]
    rows += [("oracle_L", report.oracle_L), ("oracle_S", report.oracle_S)]
    for name, v in rows:
        lines.append(f"{name:<12s} " + " ".join(f"{fmt(c):>14s}" for c in v))
    lines.append("")
    lines.append(f"J_momentum_z = {fmt(report.J_momentum[2])}")
    lines.append(f"J_bowman_z = {fmt(report.J_bowman[2])}")
    lines.append(f"mu_z = {fmt(report.mu[2])}")
    lines.append(f"g_spin = {fmt(report.g_spin) if report.g_spin is not None else 'null'}")
    lines.append(f"max_discrepancy = {fmt_scalar(report.max_discrepancy)}")
    lines.append(f"convergence_estimate = {fmt_scalar(report.convergence_estimate)}")
    return "\n".join(lines) + "\n"


def csv_header():
    cols = ["state", "units_J", "units_mu"]
    for k in VECTOR_KEYS:
        cols += [f"{k}_{a}" for a in "xyz"]
    cols.append("g_spin")
    cols += [f"oracle_L_{a}" for a in "xyz"] + [f"oracle_S_{a}" for a in "xyz"]
    cols += ["max_discrepancy", "convergence_estimate"]
    return cols


def csv_row(report):
    row = [_label(report.state), "hbar", "bohr_magneton"]
    for k in VECTOR_KEYS:
        row += [fmt(c) for c in getattr(report, k)]
    row.append(fmt_scalar(report.g_spin))
    row += [fmt(c) for c in report.oracle_L] + [fmt(c) for c in report.oracle_S]
    row += [fmt_scalar(report.max_discrepancy), fmt_scalar(report.convergence_estimate)]
    return row


def render_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header())
    for r in reports:
        w.writerow(csv_row(r))
    return buf.getvalue()


def render_json(payload):
    return json.dumps(payload, indent=2) + "\n"


def _vec3(v):
    return "(" + ", ".join(fmt(c) for c in v) + ")"


def render_compare_table(reports):
    head = ["state", "J_momentum", "J_bowman", "difference", "mu", "g_spin"]
    rows = []
    for r in reports:
        diff = [b - m for b, m in zip(r.J_bowman, r.J_momentum)]
        g = fmt(r.g_spin) if r.g_spin is not None else "null"
        rows.append([_label(r.state), _vec3(r.J_momentum), _vec3(r.J_bowman), _vec3(diff), _vec3(r.mu), g])
    widths = [max(len(x) for x in col) for col in zip(head, *rows)]
    out = ["  ".join(c.ljust(w) for c, w in zip(head, widths)).rstrip()]
    for row in rows:
        out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


def _emit(text, config):
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_reports(config):
    reports, grids = [], []
    for echo, state in load_states(config):
        grid = config.grid_for(state)
        reports.append(full_report(state, grid, label=echo, spin_coeff=config.spin_coeff))
        grids.append(grid)
    return reports, grids


def _convergence_exit(reports):
    bad = [r for r in reports if not r.converged]
    for r in bad:
        print(
            f"warning: {_label(r.state)} not converged "
            f"(refinement changed results by {r.convergence_estimate:.3e})",
            file=sys.stderr,
        )
    return EXIT_CONVERGENCE if bad else EXIT_OK


def cmd_report(config):
    if len(config.state_specs) + len(config.state_files) != 1:
        raise InputError("report needs exactly one --state or --state-file")
    reports, grids = _run_reports(config)
    report = reports[0]
    if config.output_format == "json":
        text = render_json(report.to_dict())
    elif config.output_format == "csv":
        text = render_csv(reports)
    else:
        text = render_table(report, grids[0])
    _emit(text, config)
    return _convergence_exit(reports)


def cmd_compare(config):
    if not config.state_specs and not config.state_files:
        raise InputError("compare needs at least one --state or --state-file")
    reports, _ = _run_reports(config)
    if config.output_format == "json":
        text = render_json([r.to_dict() for r in reports])
    elif config.output_format == "csv":
        text = render_csv(reports)
    else:
        text = render_compare_table(reports)
    _emit(text, config)
    return _convergence_exit(reports)


def cmd_check(config):
    results = run_checks(seed=config.seed, spin_coeff=config.spin_coeff)
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", config)
    return EXIT_OK if failed == 0 else EXIT_INVARIANT


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spinobs",
        description="Angular momentum and magnetic moment of Pauli-spinor fields from local densities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        action = "append"
        p.add_argument("--state", dest="state_specs", action=action, default=[], metavar="SPEC",
                       help='state, e.g. "1 0 0 up", "2 1 0.5 0.5" or inline JSON')
        p.add_argument("--state-file", dest="state_files", action=action, default=[], metavar="PATH",
                       help="JSON state file")
        p.add_argument("--Z", type=float, default=1.0, help="nuclear charge for token specs (default 1)")
        p.add_argument("--rmax", dest="r_max", type=float, help="override grid radius (bohr)")
        p.add_argument("--nr", dest="n_r", type=int, help="override radial node count")
        p.add_argument("--ntheta", dest="n_theta", type=int, help="override polar node count")
        p.add_argument("--nphi", dest="n_phi", type=int, help="override azimuthal node count")
        p.add_argument("--format", dest="output_format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--out", dest="output_path", help="write output here instead of stdout")
        p.add_argument("--simulate-bug", dest="simulate_bug", help=argparse.SUPPRESS)

    p_report = sub.add_parser("report", help="full observable report for one state")
    common(p_report)
    p_compare = sub.add_parser("compare", help="tabulate both prescriptions for several states")
    common(p_compare)
    p_check = sub.add_parser("check", help="run the invariant suite")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--out", dest="output_path")
    p_check.add_argument("--simulate-bug", dest="simulate_bug", help=argparse.SUPPRESS)
    return parser


COMMANDS = {"report": cmd_report, "compare": cmd_compare, "check": cmd_check}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for convergence here
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    opts = vars(args)
    command = opts.pop("command")
    for key in ("state_specs", "state_files"):
        if key in opts:
            opts[key] = tuple(opts[key])
    try:
        config = RunConfig.from_mapping(opts)
        return COMMANDS[command](config)
    except (InputError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if command == "compare" and not (opts.get("state_specs") or opts.get("state_files")):
            print(build_parser().format_usage(), end="", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
