"""Command-line interface: per-state reports, family scans, verification suites.

Exit codes: 0 on success, 2 on parse/configuration problems, 3 when the
input is not a valid state.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import bound_comparison_scan, rows_to_csv
from .closed_forms import (
    ab_state,
    bell_diagonal_discord,
    bell_diagonal_state,
    kernel_class_min_entropy,
    sample_bell_diagonal,
    sample_kernel_class,
)
from .errors import NotAStateError, ValidationError
from .measurement import (
    MeasurementDirection,
    conditional_entropy,
    conditional_entropy_direct,
)
from .optimize import quantum_discord, stationary_vector
from .states import BlochTriple, matrix_from_triple, random_state, triple_from_matrix

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_A_STATE = 3


class UsageError(Exception):
    """Bad file, flag or range; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    resolution_deg: float = 1.0
    tolerance: float = 1e-9
    output_format: str = "text"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.resolution_deg <= 22.5:
            raise UsageError(f"--resolution must be in (0, 22.5] degrees, got {self.resolution_deg}")
        if not 1e-12 <= self.tolerance <= 1e-3:
            raise UsageError(f"--tolerance must be in [1e-12, 1e-3], got {self.tolerance}")

    @property
    def resolution_rad(self) -> float:
        return math.radians(self.resolution_deg)


def _round9(x: float) -> float:
    return float(format(float(x), ".9g"))


def _fmt9(x: float) -> str:
    return format(float(x), ".9g")


def load_state(path: str) -> np.ndarray:
    """Read a state file: JSON with exactly one of the keys "matrix" or "triple"."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or ("matrix" in data) == ("triple" in data):
        raise UsageError("state file must contain exactly one of the keys 'matrix' or 'triple'")
    try:
        if "matrix" in data:
            entries = np.asarray(data["matrix"], dtype=float)
            if entries.shape != (4, 4, 2):
                raise UsageError(f"'matrix' must be 4x4 of [re, im] pairs, got shape {entries.shape}")
            return entries[..., 0] + 1j * entries[..., 1]
        triple = data["triple"]
        t = BlochTriple(np.asarray(triple["x"], dtype=float),
                        np.asarray(triple["y"], dtype=float),
                        np.asarray(triple["T"], dtype=float))
        return matrix_from_triple(t)
    except UsageError:
        raise
    except (KeyError, TypeError, ValueError, ValidationError) as exc:
        raise UsageError(f"malformed state file {path}: {exc}") from exc


def _direction_dict(d: MeasurementDirection) -> dict:
    return {
        "n": [_round9(v) for v in d.n],
        "theta_rad": _round9(d.theta),
        "phi_rad": _round9(d.phi),
        "theta_deg": _round9(math.degrees(d.theta)),
        "phi_deg": _round9(math.degrees(d.phi)),
    }


def report_to_dict(report) -> dict:
    diag = report.diagnostics
    out = {
        "mutual_information": _round9(report.mutual_information),
        "classical_correlation": _round9(report.classical_correlation),
        "discord": _round9(report.discord),
        "min_conditional_entropy": _round9(report.min_conditional_entropy),
        "optimal_direction": _direction_dict(report.optimal_direction),
        "method": report.method,
        "diagnostics": {
            "residual": None if diag.residual is None else _round9(diag.residual),
            "grad_theta": None if diag.grad_theta is None else _round9(diag.grad_theta),
            "grad_phi": None if diag.grad_phi is None else _round9(diag.grad_phi),
            "a_scalar": None if diag.a_scalar is None else _round9(diag.a_scalar),
            "degenerate": diag.degenerate,
        },
    }
    if report.bounds is not None:
        b = report.bounds
        out["bounds"] = {
            "t0_squared": _round9(b.t0_squared),
            "perp_dim": b.perp_dim,
            "e0": [_round9(v) for v in b.e0.n],
            "cond_entropy_ub": _round9(b.cond_entropy_ub),
            "discord_ub": _round9(b.discord_ub),
            "classical_lb": _round9(b.classical_lb),
            "xi_bound": _round9(b.xi_bound),
            "saturated": b.saturated,
        }
    return out


def _emit_report(report, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(report_to_dict(report), indent=2)
    if output_format == "csv":
        d = report_to_dict(report)
        b = d.get("bounds", {})
        header = ("mutual_information,classical_correlation,discord,min_conditional_entropy,"
                  "theta_rad,phi_rad,method,residual,"
                  "discord_ub,classical_lb,cond_entropy_ub,xi_bound,t0_squared,perp_dim,saturated")
        diag = d["diagnostics"]
        row = ",".join([
            _fmt9(d["mutual_information"]), _fmt9(d["classical_correlation"]),
            _fmt9(d["discord"]), _fmt9(d["min_conditional_entropy"]),
            _fmt9(d["optimal_direction"]["theta_rad"]), _fmt9(d["optimal_direction"]["phi_rad"]),
            d["method"],
            "" if diag["residual"] is None else _fmt9(diag["residual"]),
            _fmt9(b["discord_ub"]), _fmt9(b["classical_lb"]), _fmt9(b["cond_entropy_ub"]),
            _fmt9(b["xi_bound"]), _fmt9(b["t0_squared"]), str(b["perp_dim"]),
            "true" if b["saturated"] else "false",
        ])
        return header + "\n" + row
    d = report_to_dict(report)
    od = d["optimal_direction"]
    lines = [
        f"mutual information      {_fmt9(d['mutual_information'])} bits",
        f"classical correlation   {_fmt9(d['classical_correlation'])} bits",
        f"quantum discord         {_fmt9(d['discord'])} bits",
        f"min conditional entropy {_fmt9(d['min_conditional_entropy'])} bits",
        (f"optimal direction       theta = {_fmt9(od['theta_rad'])} rad ({_fmt9(od['theta_deg'])} deg), "
         f"phi = {_fmt9(od['phi_rad'])} rad ({_fmt9(od['phi_deg'])} deg)"),
        f"method                  {d['method']}",
    ]
    diag = d["diagnostics"]
    if diag["degenerate"]:
        lines.append("stationarity            degenerate point (branch probability vanishes)")
    else:
        lines.append(f"stationarity residual   {_fmt9(diag['residual'])}")
    if "bounds" in d:
        b = d["bounds"]
        lines += [
            f"discord upper bound     {_fmt9(b['discord_ub'])} bits"
            + ("  [saturated]" if b["saturated"] else ""),
            f"classical lower bound   {_fmt9(b['classical_lb'])} bits",
            f"comparison bound S(B)   {_fmt9(b['xi_bound'])} bits",
            f"t0^2 = {_fmt9(b['t0_squared'])}, dim of restricted subspace = {b['perp_dim']}",
        ]
    return "\n".join(lines)


def cmd_compute(path: str, config: RunConfig) -> int:
    rho = load_state(path)
    report = quantum_discord(rho, resolution=config.resolution_rad, tolerance=config.tolerance)
    print(_emit_report(report, config.output_format))
    return EXIT_OK


def _parse_range(text: str, name: str) -> list[float]:
    """A float or an inclusive 'start:stop:step' range."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            lo, hi, step = (float(p) for p in parts)
            if step <= 0 or hi < lo:
                raise UsageError(f"--{name}: need start <= stop and step > 0, got {text!r}")
            count = int(round((hi - lo) / step))
            values = [lo + k * step for k in range(count + 1)]
            return [v for v in values if v <= hi + step * 1e-9]
    except ValueError as exc:
        raise UsageError(f"--{name}: cannot parse {text!r}") from exc
    raise UsageError(f"--{name}: expected a number or start:stop:step, got {text!r}")


def cmd_scan(family: str, args, config: RunConfig) -> int:
    if family == "ab":
        if args.a is None or args.b is None:
            raise UsageError("scan ab requires --a and --b (value or start:stop:step)")
        a_values = _parse_range(args.a, "a")
        b_values = _parse_range(args.b, "b")
        try:
            states = [(a, b, ab_state(a, b)) for a in a_values for b in b_values]
        except ValidationError as exc:
            raise UsageError(f"scan range leaves the valid (a, b) region: {exc}") from exc
    elif family == "bell-diagonal":
        if args.ray is None or args.s is None:
            raise UsageError("scan bell-diagonal requires --ray t1,t2,t3 and --s (value or range)")
        try:
            ray = np.array([float(p) for p in args.ray.split(",")])
        except ValueError as exc:
            raise UsageError(f"--ray: cannot parse {args.ray!r}") from exc
        if ray.shape != (3,):
            raise UsageError("--ray must have three components")
        states = []
        for s in _parse_range(args.s, "s"):
            t1, t2, t3 = (s * ray).tolist()
            try:
                bell_diagonal_discord(t1, t2, t3)  # region check
            except NotAStateError as exc:
                raise UsageError(f"s = {s} leaves the Bell-diagonal state set: {exc}") from exc
            states.append((s, 0.0, bell_diagonal_state(t1, t2, t3)))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown family {family!r}")
    rows = bound_comparison_scan(states, resolution=config.resolution_rad,
                                 tolerance=config.tolerance)
    sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites


def _suite_identity(n: int, rng: np.random.Generator, config: RunConfig) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        rho = random_state(rng=rng)
        t = triple_from_matrix(rho)
        for _ in range(50):
            d = MeasurementDirection(rng.standard_normal(3))
            dev = abs(conditional_entropy(t, d) - conditional_entropy_direct(t, d, rho=rho))
            worst = max(worst, dev)
    return worst < 1e-10, f"{n} states x 50 directions, max |h4-h2 vs sum p_k S| = {worst:.3e}"


def _suite_gradient(n: int, rng: np.random.Generator, config: RunConfig) -> tuple[bool, str]:
    h = 1e-5
    worst = 0.0
    checked = 0
    while checked < n:
        t = triple_from_matrix(random_state(rng=rng))
        d = MeasurementDirection(rng.standard_normal(3))
        diag = stationary_vector(t, d)
        if diag.degenerate or math.hypot(diag.grad_theta, diag.grad_phi) < 1e-3:
            continue
        th, ph = d.theta, d.phi
        fd_th = (conditional_entropy(t, _dir(th + h, ph)) - conditional_entropy(t, _dir(th - h, ph))) / (2 * h)
        fd_ph = (conditional_entropy(t, _dir(th, ph + h)) - conditional_entropy(t, _dir(th, ph - h))) / (2 * h)
        for an, fd in ((diag.grad_theta, fd_th), (diag.grad_phi, fd_ph)):
            worst = max(worst, abs(an - fd) / max(abs(an), abs(fd), 1e-12))
        checked += 1
    return worst < 1e-6, f"{n} probe points, max relative gradient error = {worst:.3e}"


def _dir(theta: float, phi: float) -> MeasurementDirection:
    from .measurement import direction_from_angles

    return direction_from_angles(theta, phi)


def _suite_oracle(n: int, rng: np.random.Generator, config: RunConfig) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n // 2):
        t1, t2, t3 = sample_bell_diagonal(rng)
        exact = bell_diagonal_discord(t1, t2, t3).discord
        numeric = quantum_discord(bell_diagonal_state(t1, t2, t3), fast_path=False,
                                  resolution=config.resolution_rad,
                                  tolerance=config.tolerance, with_bounds=False).discord
        worst = max(worst, abs(exact - numeric))
    for _ in range(n - n // 2):
        t = sample_kernel_class(rng)
        exact = kernel_class_min_entropy(t.x, t.T)
        numeric = quantum_discord(matrix_from_triple(t), fast_path=False,
                                  resolution=config.resolution_rad,
                                  tolerance=config.tolerance, with_bounds=False)
        worst = max(worst, abs(exact - numeric.min_conditional_entropy))
    return worst < 1e-6, f"{n} in-class states, max |closed form - optimizer| = {worst:.3e}"


def _suite_bounds(n: int, rng: np.random.Generator, config: RunConfig) -> tuple[bool, str]:
    violations = 0
    worst = 0.0
    for _ in range(n):
        rho = random_state(rng=rng)
        report = quantum_discord(rho, resolution=config.resolution_rad,
                                 tolerance=config.tolerance)
        b = report.bounds
        over = max(report.discord - b.discord_ub, b.classical_lb - report.classical_correlation)
        worst = max(worst, over)
        if over > 1e-6:
            violations += 1
    return violations == 0, f"{n} random states, {violations} bound violations (worst slack {worst:.3e})"


_SUITES = {
    "identity": (_suite_identity, 1000),
    "gradient": (_suite_gradient, 100),
    "oracle": (_suite_oracle, 200),
    "bounds": (_suite_bounds, 500),
}


def cmd_verify(config: RunConfig, suite: str | None, n: int | None) -> int:
    names = [suite] if suite else list(_SUITES)
    failed = False
    for name in names:
        fn, default_n = _SUITES[name]
        rng = np.random.default_rng(config.seed)
        ok, detail = fn(n or default_n, rng, config)
        print(f"{name}: {'PASS' if ok else 'FAIL'} ({detail})")
        failed = failed or not ok
    return 1 if failed else EXIT_OK


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--resolution", type=float, default=1.0, metavar="DEG",
                        help="grid step in degrees (default 1.0)")
    common.add_argument("--tolerance", type=float, default=1e-9, metavar="TOL",
                        help="stationarity residual target for refinement (default 1e-9)")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text",
                        help="output format for compute (default text)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for random-state commands (default 0)")

    parser = argparse.ArgumentParser(prog="qdiscord",
                                     description="Quantum discord of two-qubit states")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", parents=[common],
                               help="full correlation report for one state file")
    p_compute.add_argument("file", help="JSON state file with a 'matrix' or 'triple' key")

    p_scan = sub.add_parser("scan", parents=[common],
                            help="discord vs. bounds over a state family (CSV)")
    p_scan.add_argument("family", choices=("ab", "bell-diagonal"))
    p_scan.add_argument("--a", help="a value or start:stop:step")
    p_scan.add_argument("--b", help="b value or start:stop:step")
    p_scan.add_argument("--ray", help="Bell-diagonal ray t1,t2,t3")
    p_scan.add_argument("--s", help="scale along the ray, value or start:stop:step")

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run the numerical property suites")
    p_verify.add_argument("--suite", choices=tuple(_SUITES), default=None)
    p_verify.add_argument("--n", type=int, default=None, help="sample count override")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(resolution_deg=args.resolution, tolerance=args.tolerance,
                           output_format=args.format, seed=args.seed)
        if args.command == "compute":
            return cmd_compute(args.file, config)
        if args.command == "scan":
            return cmd_scan(args.family, args, config)
        return cmd_verify(config, args.suite, args.n)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotAStateError as exc:
        print(f"not a state: {exc}", file=sys.stderr)
        return EXIT_NOT_A_STATE


if __name__ == "__main__":
    sys.exit(main())
