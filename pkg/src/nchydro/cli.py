"""Command-line interface.

Subcommands: levels, shift, bound, nonrel, sweep, verify.  Output formats
are table (default), json (schema-versioned) and csv.  Exit codes: 0 ok,
1 usage or validation problem, 2 unexpected validation mismatch from the
verify suite.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, fields

from .constants import (DEFAULT_CONSTANTS, DEFAULT_LAMBDA_QCD_EV, GEV, HZ_CONVENTIONS,
                        LAMB_ACCURACY_2P_HZ, PhysicalConstants)
from .dirac import dirac_binding_energy, make_state, parse_level_label
from .errors import ValidationError
from .nonrel import (SchrodingerState, expectation_table, fine_structure_shift,
                     nc_hyperfine_shift, s_state_bound, s_state_shift, schrodinger_energy)
from .oracle import run_all
from .shifts import Level, level_shift, theta_bound

JSON_SCHEMA_VERSION = 1
SWEEP_HEADER = ["theta_eV2", "level", "eigenvalue", "shift_eV"]

_THETA_GEV_RE = re.compile(r"^\(?\s*([0-9.eE+-]+)\s*GeV\s*\)?\s*\^?\s*-2$")


@dataclass
class RunConfig:
    """Run-wide configuration, overridable from a JSON constants file."""

    m_e: float = DEFAULT_CONSTANTS.m_e
    alpha: float = DEFAULT_CONSTANTS.alpha
    lambda_qcd: float = DEFAULT_LAMBDA_QCD_EV
    hz_convention: str = "two_pi_hbar"
    format: str = "table"
    out: str | None = None
    quad_order: int = 80

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        allowed = {"m_e", "alpha", "lambda_qcd", "hz_convention"}
        unknown = set(data) - allowed
        if unknown:
            raise ValidationError(f"unknown constants keys: {sorted(unknown)}")
        cfg = cls()
        for key, value in data.items():
            setattr(cfg, key, value)
        if cfg.hz_convention not in HZ_CONVENTIONS:
            raise ValidationError(f"hz_convention must be one of {HZ_CONVENTIONS}")
        return cfg

    def constants(self) -> PhysicalConstants:
        return PhysicalConstants(m_e=self.m_e, alpha=self.alpha,
                                 hbar_eV_s=DEFAULT_CONSTANTS.hbar_eV_s)


def parse_theta(text: str) -> float:
    """theta in eV^-2, either a float or the shorthand '(X GeV)^-2'."""
    match = _THETA_GEV_RE.match(text.strip())
    if match:
        scale = float(match.group(1))
        if scale <= 0:
            raise ValidationError(f"GeV scale must be positive in {text!r}")
        return 1.0 / (scale * GEV) ** 2
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(f"cannot parse theta {text!r}") from None
    if value < 0:
        raise ValidationError(f"theta must be >= 0, got {value}")
    return value


def parse_half_integer(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--constants-file",
                        help="JSON file overriding m_e/alpha/lambda_qcd/hz_convention")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--quad-order", type=int, default=80,
                        help="starting Gauss-Laguerre order for adaptive integrals")
    common.add_argument("--hz-convention", choices=HZ_CONVENTIONS, default=None)

    parser = _Parser(prog="nchydro", parents=[common],
                     description="Hydrogen levels and their noncommutative-space shifts")
    sub = parser.add_subparsers(dest="command", required=True)

    p_levels = sub.add_parser("levels", parents=[common], help="exact level energies")
    p_levels.add_argument("label", nargs="?", help="spectroscopic label like 2P3/2")
    p_levels.add_argument("--n-r", type=int, help="radial quantum number (with --kappa)")
    p_levels.add_argument("--kappa", type=int, help="angular quantum number (with --n-r)")

    p_shift = sub.add_parser("shift", parents=[common],
                             help="first-order theta shifts of a level")
    p_shift.add_argument("label")
    p_shift.add_argument("--theta", required=True,
                         help="theta in eV^-2 or '(X GeV)^-2'")

    p_bound = sub.add_parser("bound", parents=[common],
                             help="theta bound from a level splitting")
    p_bound.add_argument("label")
    p_bound.add_argument("--accuracy-khz", type=float, default=LAMB_ACCURACY_2P_HZ / 1e3)

    p_nonrel = sub.add_parser("nonrel", parents=[common], help="nonrelativistic corrections")
    p_nonrel.add_argument("--n", type=int, required=True)
    p_nonrel.add_argument("--l", type=int, required=True)
    p_nonrel.add_argument("--j", type=parse_half_integer, required=True)
    p_nonrel.add_argument("--mj", type=parse_half_integer, required=True)
    p_nonrel.add_argument("--theta", required=True)
    p_nonrel.add_argument("--lambda-qcd", type=float, default=None,
                          help="cutoff in eV for the l = 0 channel")

    p_sweep = sub.add_parser("sweep", parents=[common], help="shift table over a theta range")
    p_sweep.add_argument("--theta-min", required=True)
    p_sweep.add_argument("--theta-max", required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--levels", default="2P1/2,2P3/2",
                         help="comma-separated level labels")

    sub.add_parser("verify", parents=[common], help="run the validation suite")
    return parser


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_out(payload: dict) -> str:
    return json.dumps({"schema": JSON_SCHEMA_VERSION, **payload}, indent=2) + "\n"


def _table(rows: list[tuple[str, str]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


def cmd_levels(args, cfg: RunConfig) -> int:
    constants = cfg.constants()
    if args.label is not None:
        n_r, kappa = parse_level_label(args.label)
    elif args.n_r is not None and args.kappa is not None:
        n_r, kappa = args.n_r, args.kappa
    else:
        raise ValidationError("give a label like 2P3/2, or both --n-r and --kappa")
    state = make_state(n_r, kappa, 0.5, constants)
    binding = dirac_binding_energy(n_r, kappa, constants)
    payload = {
        "label": state.label,
        "n_r": n_r,
        "kappa": kappa,
        "j": state.j,
        "l": state.l,
        "nu": state.nu,
        "energy_eV": state.energy,
        "binding_eV": binding,
        "a": state.a,
    }
    if cfg.format == "json":
        _emit(_json_out(payload), cfg.out)
    else:
        rows = [(k, repr(v)) for k, v in payload.items()]
        _emit(_table(rows), cfg.out)
    return 0


def cmd_shift(args, cfg: RunConfig) -> int:
    constants = cfg.constants()
    theta = parse_theta(args.theta)
    report = level_shift(args.label, theta, constants,
                         convention=cfg.hz_convention, quad_start=cfg.quad_order)
    if cfg.format == "json":
        _emit(_json_out(report.as_dict()), cfg.out)
    else:
        d = report.as_dict()
        rows = [(k, repr(v)) for k, v in d.items()]
        _emit(_table(rows), cfg.out)
    return 0


def cmd_bound(args, cfg: RunConfig) -> int:
    constants = cfg.constants()
    accuracy_hz = args.accuracy_khz * 1e3
    report = level_shift(args.label, 0.0, constants, accuracy_hz=accuracy_hz,
                         convention=cfg.hz_convention, quad_start=cfg.quad_order)
    bounds = []
    seen = set()
    for coeff in report.coefficients:
        mag = abs(coeff)
        if mag < 1e-300 or round(math.log10(mag), 9) in seen:
            continue
        seen.add(round(math.log10(mag), 9))
        b = theta_bound(mag, accuracy_hz, constants, cfg.hz_convention)
        bounds.append({
            "coefficient_eV3": mag,
            "theta_max_eV2": b.theta_max_ev2,
            "gev_scale": b.gev_scale,
        })
    payload = {"label": report.label, "accuracy_khz": args.accuracy_khz, "bounds": bounds,
               "flagged": report.flagged, "notes": list(report.notes)}
    if cfg.format == "json":
        _emit(_json_out(payload), cfg.out)
    else:
        lines = [f"level {report.label}, accuracy {args.accuracy_khz} kHz"]
        for b in bounds:
            lines.append(f"  coefficient {b['coefficient_eV3']:.6e} eV^3 -> "
                         f"theta <= {b['theta_max_eV2']:.6e} eV^-2  "
                         f"(= ({b['gev_scale']:.3f} GeV)^-2)")
        for note in report.notes:
            lines.append(f"  note: {note}")
        _emit("\n".join(lines) + "\n", cfg.out)
    return 0


def cmd_nonrel(args, cfg: RunConfig) -> int:
    constants = cfg.constants()
    theta = parse_theta(args.theta)
    lam = args.lambda_qcd if args.lambda_qcd is not None else cfg.lambda_qcd
    if args.l == 0:
        shift = s_state_shift(theta, lam, constants)
        bound = s_state_bound(lambda_qcd=lam, constants=constants,
                              convention=cfg.hz_convention)
        payload = {
            "n": args.n, "l": 0, "j": args.j, "m_j": args.mj,
            "energy_eV": schrodinger_energy(args.n, constants),
            "theta_eV2": theta,
            "lambda_qcd_eV": lam,
            "s_state_shift_eV": shift,
            "default_bound_theta_eV2": bound.theta_max_ev2,
            "default_bound_gev_scale": bound.gev_scale,
        }
    else:
        state = SchrodingerState(n=args.n, l=args.l, j=args.j, m_j=args.mj,
                                 constants=constants)
        table = expectation_table(state, theta)
        hyper = nc_hyperfine_shift(state, theta)
        payload = {
            "n": args.n, "l": args.l, "j": args.j, "m_j": args.mj,
            "energy_eV": schrodinger_energy(args.n, constants),
            "theta_eV2": theta,
            "fine_structure_eV": fine_structure_shift(args.n, args.l, args.j, constants),
            "fine_structure_standard_eV": fine_structure_shift(
                args.n, args.l, args.j, constants, p4_sign_corrected=True),
            "nc_shift_eV": hyper.total if not hyper.r5_divergent else None,
            "nc_shift_r3_eV": hyper.r3_term,
            "nc_shift_r4_eV": hyper.r4_term,
            "nc_shift_r5_eV": None if hyper.r5_divergent else hyper.r5_term,
            "nc_shift_r5_divergent": hyper.r5_divergent,
            "expectations": {f.name: getattr(table, f.name)
                             for f in fields(table) if f.name != "divergent"},
            "divergent_entries": list(table.divergent),
        }
        payload["expectations"] = {
            k: (None if isinstance(v, float) and math.isinf(v) else v)
            for k, v in payload["expectations"].items()}
    if cfg.format == "json":
        _emit(_json_out(payload), cfg.out)
    else:
        rows = [(k, repr(v)) for k, v in payload.items() if k != "expectations"]
        if "expectations" in payload:
            rows += [(f"  <{k}>", repr(v)) for k, v in payload["expectations"].items()]
        _emit(_table(rows), cfg.out)
    return 0


def cmd_sweep(args, cfg: RunConfig) -> int:
    constants = cfg.constants()
    theta_min = parse_theta(args.theta_min)
    theta_max = parse_theta(args.theta_max)
    if args.steps < 2:
        raise ValidationError("sweep needs steps >= 2")
    if theta_max < theta_min:
        raise ValidationError("theta-max must be >= theta-min")
    labels = [s.strip() for s in args.levels.split(",") if s.strip()]
    levels = [Level.from_label(lbl, constants) for lbl in labels]
    rows = []
    for i in range(args.steps):
        theta = theta_min + (theta_max - theta_min) * i / (args.steps - 1)
        for level in levels:
            report = level_shift(level, theta, constants, convention=cfg.hz_convention,
                                 quad_start=cfg.quad_order)
            for eig, shift in zip(report.eigenvalues, report.shifts_eV):
                rows.append((theta, report.label, eig, shift))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for theta, label, eig, shift in rows:
        writer.writerow([repr(theta), label, repr(eig), repr(shift)])
    _emit(buf.getvalue(), cfg.out)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    constants = cfg.constants()
    reports = run_all(constants)
    mismatches = [r for r in reports if r.verdict == "mismatch"]
    if cfg.format == "json":
        payload = {"reports": [r.as_dict() for r in reports],
                   "mismatches": len(mismatches)}
        _emit(_json_out(payload), cfg.out)
    else:
        lines = []
        for r in reports:
            lines.append(f"[{r.verdict:>28}] {r.name}"
                         + (f"  ({r.note})" if r.note else ""))
        lines.append(f"{len(reports)} checks, {len(mismatches)} unexpected mismatches")
        _emit("\n".join(lines) + "\n", cfg.out)
    return 2 if mismatches else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.constants_file) if args.constants_file else RunConfig()
        cfg.format = args.format
        cfg.out = args.out
        cfg.quad_order = args.quad_order
        if args.hz_convention:
            cfg.hz_convention = args.hz_convention
        handler = {
            "levels": cmd_levels,
            "shift": cmd_shift,
            "bound": cmd_bound,
            "nonrel": cmd_nonrel,
            "sweep": cmd_sweep,
            "verify": cmd_verify,
        }[args.command]
        return handler(args, cfg)
    except (ValidationError, OSError, ValueError) as exc:
        print(f"nchydro: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
