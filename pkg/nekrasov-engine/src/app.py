"""Command-line front end for the toric Nekrasov engine.

    python app.py surface list
    python app.py surface show F2
    python app.py zinst --surface C2 --rank 1 --theory pure --order 4
    python app.py check conjecture --surface F1 --rank 2 --order 4
    python app.py check pert --k 2 --x 1
    python app.py check selftest
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import pandas as pd

from algebra.series import series_to_json
from localization.classes import ExactEvaluator, NumericEvaluator
from localization.geometry import (
    ToricChain,
    builtin_surface,
    list_available_surfaces,
    load_surface,
    resolve_surface,
    save_surface,
    surface_summary,
    weight_table,
)
from localization.partition_function import (
    CheckEntry,
    check_degenerations,
    check_instanton_conjecture,
    check_instanton_conjecture_numeric,
    parse_theory,
    sample_points,
    z_master,
)
from oracles.perturbative import check_gamma_limit, check_pert_limit, check_pert_limit_5d
from oracles.selftest import run_selftest
from oracles.sworacle import (
    check_chart_agreement,
    check_monodromy,
    check_tau_positive,
    check_wronskian,
    compare_with_localization,
    prepotential_derivative_check,
)
from utils.errors import EngineError, SurfaceValidationError
from utils.settings import EngineSettings, get_settings

logger = logging.getLogger("nekrasov")

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunManifest:
    """Everything a run depends on; echoed into every report."""

    surface: str = "C2"
    rank: int = 1
    d: Tuple[int, ...] = ()
    theory: str = "pure"
    order: int = 4
    mode: str = "exact"
    dps: int = 40
    directions: List[Tuple[str, str]] = field(default_factory=list)
    threads: int = 1
    seed: int = 20240601

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["d"] = list(self.d)
        data["directions"] = [list(x) for x in self.directions]
        # reports must not depend on the worker count
        del data["threads"]
        return data


def parse_divisor(text: Optional[str], n_edges: int) -> Tuple[int, ...]:
    """'0' | 'e1:m1,e2:m2' (0-based edge index : coefficient) | 'm0,m1,...'"""
    if text is None or text.strip() in ("", "0"):
        return (0,) * n_edges
    tokens = [token.strip() for token in text.split(",") if token.strip()]
    try:
        if all(":" in token for token in tokens):
            vector = [0] * n_edges
            for token in tokens:
                edge, coeff = token.split(":")
                index = int(edge)
                if not 0 <= index < n_edges:
                    raise EngineError(f"edge index {index} out of range for {n_edges} edges")
                vector[index] += int(coeff)
            return tuple(vector)
        vector = tuple(int(token) for token in tokens)
    except ValueError as exc:
        raise EngineError(f"cannot read divisor class {text!r}") from exc
    if len(vector) != n_edges:
        raise EngineError(f"divisor class needs {n_edges} coefficients, got {len(vector)}")
    return vector


def parse_directions(text: Optional[str]) -> List[Tuple[Fraction, Fraction]]:
    """'x1:x2,y1:y2' with rational entries."""
    if not text:
        return []
    directions = []
    for token in text.split(","):
        try:
            x1, x2 = token.split(":")
            direction = (Fraction(x1), Fraction(x2))
        except (ValueError, ZeroDivisionError) as exc:
            raise EngineError(f"cannot read direction {token!r}") from exc
        if 0 in direction:
            raise EngineError(f"direction {token!r} has a zero component")
        directions.append(direction)
    return directions


def parse_rational(text: Optional[str], flag: str, default: Fraction = Fraction(1)) -> Fraction:
    """A rational flag value such as '3/2' or '0.25'."""
    if text is None:
        return default
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise EngineError(f"{flag} needs a rational number, got {text!r}") from exc



def parse_mode(text: str, settings: EngineSettings) -> Tuple[str, int]:
    """exact | numeric | numeric:DIGITS"""
    kind, _, digits = text.partition(":")
    if kind == "exact" and not digits:
        return "exact", settings.dps
    if kind == "numeric":
        if not digits:
            return "numeric", settings.dps
        if digits.isdigit() and int(digits) >= 15:
            return "numeric", int(digits)
    raise EngineError(f"mode must be exact or numeric:DIGITS with DIGITS >= 15, got {text!r}")


def build_manifest(args, settings: EngineSettings, default_order: int = 4) -> Tuple[RunManifest, ToricChain]:
    chain = resolve_surface(args.surface)
    if args.rank < 1:
        raise EngineError("rank must be at least 1")
    order = default_order if args.order is None else args.order
    if order < 0:
        raise EngineError("order must be nonnegative")
    mode, dps = parse_mode(args.mode, settings)
    theory = parse_theory(args.theory, settings.elliptic_terms)
    if mode == "exact" and not theory.exact_ok:
        raise EngineError(f"theory {theory} is transcendental; use --mode numeric:DIGITS")
    manifest = RunManifest(
        surface=args.surface,
        rank=args.rank,
        d=parse_divisor(args.d, chain.n_edges),
        theory=str(theory),
        order=order,
        mode=mode,
        dps=dps,
        directions=[(str(a), str(b)) for a, b in parse_directions(args.directions)],
        threads=max(1, args.threads or settings.threads),
        seed=settings.seed if args.seed is None else args.seed,
    )
    return manifest, chain


def _report(command: str, manifest: Dict[str, object], checks: Sequence[CheckEntry]) -> Dict[str, object]:
    return {
        "schema": SCHEMA,
        "command": command,
        "manifest": manifest,
        "checks": [entry.to_dict() for entry in checks],
        "pass": all(entry.passed for entry in checks),
    }


def emit(payload, out: Optional[str]) -> None:
    """JSON to --out or stdout; identical inputs give identical bytes."""
    text = json.dumps(payload, indent=2, sort_keys=True, default=str, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("report written to %s", out)
    else:
        sys.stdout.write(text)


# commands


def cmd_surface(args, settings: EngineSettings) -> int:
    if args.action == "list":
        table = pd.DataFrame(list_available_surfaces())
        print(table.to_string(index=False))
        return EXIT_PASS
    if args.action == "show":
        chain = resolve_surface(args.target)
        print(weight_table(chain).to_string(index=False))
        print(json.dumps(surface_summary(chain), indent=2, sort_keys=True))
        return EXIT_PASS
    if args.action == "validate":
        try:
            chain = load_surface(args.target)
        except SurfaceValidationError as exc:
            emit(
                {
                    "schema": SCHEMA,
                    "command": "surface validate",
                    "path": args.target,
                    "pass": False,
                    "invariant": exc.invariant,
                    "detail": exc.detail,
                },
                args.out,
            )
            return EXIT_FAIL
        emit({"schema": SCHEMA, "command": "surface validate", "path": args.target, "pass": True, "surface": surface_summary(chain)}, args.out)
        return EXIT_PASS
    if args.action == "export":
        if not args.path:
            raise EngineError("surface export needs NAME and PATH")
        path = save_surface(builtin_surface(args.target), args.path)
        logger.info("exported %s to %s", args.target, path)
        return EXIT_PASS
    raise EngineError(f"unknown surface action {args.action!r}")


def _display(coeff) -> str:
    return str(coeff.as_expr()) if hasattr(coeff, "as_expr") else mpmath.nstr(coeff, 20)


def cmd_zinst(args, settings: EngineSettings) -> int:
    manifest, chain = build_manifest(args, settings)
    theory = parse_theory(manifest.theory, settings.elliptic_terms)
    table = theory.symbol_table(manifest.rank)
    extra = {}
    if manifest.mode == "exact":
        evaluator = ExactEvaluator(table)
        z = z_master(chain, manifest.rank, manifest.d, theory, manifest.order, evaluator, manifest.threads)
    else:
        point = sample_points(table, 1, manifest.seed)[0]
        extra["point"] = {name: str(value) for name, value in point.items()}
        with mpmath.workdps(manifest.dps):
            evaluator = NumericEvaluator(point, manifest.dps)
            z = z_master(chain, manifest.rank, manifest.d, theory, manifest.order, evaluator)
    payload = {
        "schema": SCHEMA,
        "command": "zinst",
        "manifest": {**manifest.to_dict(), **extra},
        "series": series_to_json(z),
        "display": {str(e): _display(c) for e, c in z.lambda_coefficients().items()},
        "pass": True,
    }
    emit(payload, args.out)
    return EXIT_PASS


def _check_conjecture(args, settings) -> Tuple[Dict[str, object], List[CheckEntry]]:
    manifest, chain = build_manifest(args, settings)
    theory = parse_theory(manifest.theory, settings.elliptic_terms)
    directions = parse_directions(args.directions) or None
    if manifest.mode == "exact":
        entries = check_instanton_conjecture(
            chain, manifest.rank, manifest.d, theory, manifest.order, directions, manifest.threads
        )
    else:
        table = theory.symbol_table(manifest.rank)
        points = sample_points(table, 3, manifest.seed)
        kwargs = {"directions": directions} if directions else {}
        entries = check_instanton_conjecture_numeric(
            chain,
            manifest.rank,
            manifest.d,
            theory,
            manifest.order,
            points,
            tolerance=args.tolerance or 1e-6,
            dps=manifest.dps,
            **kwargs,
        )
    return manifest.to_dict(), entries


def _check_pert(args, settings) -> Tuple[Dict[str, object], List[CheckEntry]]:
    k = 1 if args.k is None else args.k
    x = parse_rational(args.x, "--x")
    lam = parse_rational(args.lam, "--lambda")
    if x <= 0 or lam <= 0:
        raise EngineError(f"check pert needs x > 0 and Lambda > 0, got x={x} Lambda={lam}")
    tolerance = args.tolerance or settings.pert_tolerance
    theory = parse_theory(args.theory, settings.elliptic_terms)
    manifest = {"k": k, "x": str(x), "Lambda": str(lam), "theory": str(theory), "dps": settings.dps}
    if theory.kind == "5d":
        return manifest, [check_pert_limit_5d(k, x, theory.beta, lam, tolerance=tolerance, dps=settings.dps)]
    if theory.kind != "pure":
        raise EngineError("check pert runs the pure or 5d kernel")
    entries = [
        check_gamma_limit(x, lam, tolerance=min(tolerance, 1e-6), dps=settings.dps),
        check_pert_limit(k, x, lam, tolerance=tolerance, dps=settings.dps),
    ]
    return manifest, entries


def _check_sw(args, settings) -> Tuple[Dict[str, object], List[CheckEntry]]:
    order = 8 if args.order is None else args.order
    sw_order = max(1, order // 4)
    comparison = compare_with_localization(
        order=sw_order,
        tolerances=(settings.sw_tolerance, settings.sw_tolerance_order2),
        threads=max(1, args.threads or settings.threads),
    )
    logger.info("SW comparison\n%s", comparison.table.to_string(index=False))
    entries = list(comparison.entries)
    entries.append(prepotential_derivative_check(1, Fraction(1, 5)))
    entries.append(check_chart_agreement(-3, 1))
    entries.append(check_tau_positive([(-3, 1), (Fraction(-5, 2), Fraction(1, 2)), (0, 1), (5, 1)]))
    entries.append(check_wronskian([(0, 1), (1, 1), (5, 1)]))
    entries.append(check_monodromy())
    return {"order": order, "sign": comparison.sign}, entries


def _check_degeneration(args, settings) -> Tuple[Dict[str, object], List[CheckEntry]]:
    rank = args.rank
    order = 4 if args.order is None else args.order
    seed = settings.seed if args.seed is None else args.seed
    theory = parse_theory("pure")
    points = sample_points(theory.symbol_table(rank), 3, seed)
    manifest = {"rank": rank, "order": order, "seed": seed, "dps": settings.dps}
    return manifest, check_degenerations(rank, order, points, dps=settings.dps)


def _check_selftest(args, settings) -> Tuple[Dict[str, object], List[CheckEntry]]:
    seed = settings.seed if args.seed is None else args.seed
    entries = run_selftest(threads=max(1, args.threads or settings.threads), seed=seed, dps=settings.dps)
    return {"seed": seed, "dps": settings.dps}, entries


CHECKS = {
    "conjecture": _check_conjecture,
    "pert": _check_pert,
    "sw": _check_sw,
    "degeneration": _check_degeneration,
    "selftest": _check_selftest,
}


def cmd_check(args, settings: EngineSettings) -> int:
    manifest, entries = CHECKS[args.kind](args, settings)
    report = _report(f"check {args.kind}", manifest, entries)
    emit(report, args.out)
    for entry in entries:
        if not entry.passed:
            logger.warning("check failed: %s", entry.name)
    return EXIT_PASS if report["pass"] else EXIT_FAIL


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--surface", default="C2", help="built-in name (C2, F1, F2, ...) or a JSON fixture path")
    parser.add_argument("--rank", type=int, default=1)
    parser.add_argument("--d", default=None, help="divisor class: 0 | e:m,... | m0,m1,...")
    parser.add_argument("--theory", default="pure", help="pure | fund:NF | adjoint | 5d:BETA | chiy:Y | elliptic:Y,Q")
    parser.add_argument("--order", type=int, default=None, help="Lambda truncation order")
    parser.add_argument("--mode", default="exact", help="exact | numeric:DIGITS")
    parser.add_argument("--directions", default=None, help="x1:x2,... for the eps -> 0 limit")
    parser.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--tolerance", type=float, default=None)
    parser.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nekrasov", description="Toric Nekrasov partition function engine")
    sub = parser.add_subparsers(dest="command", required=True)

    surface = sub.add_parser("surface", help="list, show, validate or export surfaces")
    surface.add_argument("action", choices=["list", "show", "validate", "export"])
    surface.add_argument("target", nargs="?", default=None)
    surface.add_argument("path", nargs="?", default=None)
    surface.add_argument("--out", default=None)
    surface.add_argument("--verbose", action="store_true")

    zinst = sub.add_parser("zinst", help="instanton partition function as a JSON series")
    _common(zinst)

    check = sub.add_parser("check", help="run a check and emit a JSON report")
    check.add_argument("kind", choices=sorted(CHECKS))
    _common(check)
    check.add_argument("--k", type=int, default=None)
    check.add_argument("--x", default=None)
    check.add_argument("--lambda", dest="lam", default=None)
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


COMMANDS = {"surface": cmd_surface, "zinst": cmd_zinst, "check": cmd_check}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    settings = get_settings()
    if args.command == "surface" and args.action in ("show", "validate", "export") and not args.target:
        parser.error(f"surface {args.action} needs a target")
    try:
        with mpmath.workdps(settings.dps):
            return COMMANDS[args.command](args, settings)
    except EngineError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
