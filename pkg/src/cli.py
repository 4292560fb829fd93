"""
Command-line front door: spectrum, verify, identities, constants.
Precedence: CLI flags > config/config.yaml (and .env) > built-in defaults.
Exit codes: 0 every row passes, 1 some row fails, 2 invalid run.
"""
import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from src.config_loader import (
    DEFAULT_SEED,
    get_path,
    TOLERANCE_NAMES,
    load_config,
    quadrature_setting,
    thread_cap,
    tolerance,
)
from src.errors import ConfigError, DiracSharpError
from src.euclidean_harness import (
    KERNEL_DIMENSIONS,
    SOURCES,
    euclidean_constant,
    verify_euclidean_inequality,
    verify_isometry,
    verify_kernel_inequality,
    verify_kernel_transport,
)
from src.identities import IDENTITIES, MAPS, run_identities
from src.logger import log_error, log_failure, log_skip, log_success, write_log
from src.quadrature import quadrature_rule
from src.report import (
    SCHEMA_VERSION,
    TOOL_VERSION,
    VerificationReport,
    rows_to_csv,
    write_output,
)
from src.sphere_spectral import sharp_constant, spectrum_table, verify_c1_inverse, verify_sphere_inequality

FORMATS = ("json", "csv", "text")
SUITES = ("sphere", "euclidean", "kernels", "all")
MAX_QUADRATURE_N = 4
C1_DIMENSIONS = (2, 3)

_BUILTIN_DEFAULTS = {"n": 3, "k": 1, "m_max": 6, "band_limit": 3, "trials": 100, "kernel_trials": 4}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=None, help="YAML config (default config/config.yaml)")
    p.add_argument("--format", choices=FORMATS, default="text", help="Output format")
    p.add_argument("--out", type=Path, default=None, help="Output file (default stdout)")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None, help="Master seed (default 0xD1AC)")


def _add_tolerances(p: argparse.ArgumentParser) -> None:
    for name in TOLERANCE_NAMES:
        p.add_argument(f"--tol-{name.replace('_', '-')}", dest=f"tol_{name}", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirac_sharp.py",
        description="Spectra and sharp L2 inequalities for Dirac type operators on S^n and R^n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Eigenvalues of D_S^(k) on P_m + wP_m")
    _add_common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--mmax", type=int, default=None)

    p = sub.add_parser("verify", help="Run inequality suites")
    _add_common(p)
    _add_tolerances(p)
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--band", type=int, default=None, help="Band limit of random sphere fields")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--kernel-trials", type=int, default=None)

    p = sub.add_parser("identities", help="Run the operator identity battery")
    _add_common(p)
    _add_tolerances(p)
    p.add_argument("--identity", choices=IDENTITIES + ("all",), default="all")
    p.add_argument("--map", choices=MAPS, default="cayley")
    p.add_argument("--n", type=int, default=None, help="Sphere dimension (default 2 and 3)")
    p.add_argument("--k", type=int, default=None, help="Orders for the intertwining check (default 1, 2, 3)")
    p.add_argument("--band", type=int, default=None)

    p = sub.add_parser("constants", help="Table of sphere and Euclidean sharp constants")
    _add_common(p)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--nmax", type=int, default=6)
    return parser


def _setting(args: argparse.Namespace, flag: str, key: str, config: dict) -> int:
    value = getattr(args, flag, None)
    if value is not None:
        return value
    return config.get("defaults", {}).get(key, _BUILTIN_DEFAULTS[key])


def _seed(args: argparse.Namespace, config: dict) -> int:
    if args.seed is not None:
        return args.seed
    return int(config.get("defaults", {}).get("seed", DEFAULT_SEED))


def _tolerances(args: argparse.Namespace, config: dict) -> dict[str, float]:
    overrides = {name: getattr(args, f"tol_{name}", None) for name in TOLERANCE_NAMES}
    return {name: tolerance(name, config, overrides) for name in TOLERANCE_NAMES}


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _resolve_out(out: Path | None, config: dict) -> Path | None:
    """Relative --out paths are taken under paths.output_dir when it is set."""
    if out is None or out.is_absolute() or "output_dir" not in config.get("paths", {}):
        return out
    return get_path("output_dir", config) / out


def cmd_spectrum(args: argparse.Namespace, config: dict) -> int:
    n = _setting(args, "n", "n", config)
    k = _setting(args, "k", "k", config)
    m_max = _setting(args, "mmax", "m_max", config)
    _require(n >= 1, f"--n must be >= 1, got {n}")
    _require(k >= 1, f"--k must be >= 1, got {k}")
    _require(m_max >= 0, f"--mmax must be >= 0, got {m_max}")
    table = spectrum_table(k, n, m_max)
    smallest = table.smallest_magnitude()
    if args.format == "json":
        text = json.dumps(
            {
                "schema": SCHEMA_VERSION,
                "tool_version": TOOL_VERSION,
                "operator": table.operator,
                "n": n,
                "k": k,
                "m_max": m_max,
                "rows": table.to_rows(),
                "smallest_magnitude": smallest,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"
    elif args.format == "csv":
        text = rows_to_csv(table.to_rows())
    else:
        lines = [f"{table.operator} on S^{n}", f"{'m':>3} {'lambda_plus':>16} {'lambda_minus':>16} {'multiplicity':>12}"]
        for row in table.rows:
            lines.append(f"{row.m:>3} {row.lambda_plus:>16.10g} {row.lambda_minus:>16.10g} {row.multiplicity:>12}")
        lines.append(f"|lambda|min = {smallest:.10g}")
        text = "\n".join(lines) + "\n"
    write_output(text, args.out)
    log_success(f"spectrum n={n} k={k} m_max={m_max}", str(args.out) if args.out else None, config=config)
    return 0


def cmd_verify(args: argparse.Namespace, config: dict) -> int:
    n = _setting(args, "n", "n", config)
    k = _setting(args, "k", "k", config)
    band = _setting(args, "band", "band_limit", config)
    trials = _setting(args, "trials", "trials", config)
    kernel_trials = _setting(args, "kernel_trials", "kernel_trials", config)
    seed = _seed(args, config)
    _require(1 <= n <= MAX_QUADRATURE_N, f"--n must be in 1..{MAX_QUADRATURE_N} for quadrature suites, got {n}")
    _require(k >= 1, f"--k must be >= 1, got {k}")
    _require(band >= 0, f"--band must be >= 0, got {band}")
    _require(trials >= 1 and kernel_trials >= 1, "trial counts must be >= 1")
    tol = _tolerances(args, config)
    threads = thread_cap(config)
    quad = {
        "radial_nodes": int(quadrature_setting("radial_nodes", 200, config)),
        "angular_degree": int(quadrature_setting("angular_degree", 16, config)),
    }
    suites = ("sphere", "euclidean", "kernels") if args.suite == "all" else (args.suite,)
    report = VerificationReport(
        command="verify",
        config={
            "suite": args.suite,
            "n": n,
            "k": k,
            "band_limit": band,
            "trials": trials,
            "kernel_trials": kernel_trials,
            "seed": seed,
            "tolerances": tol,
            "quadrature": quad,
        },
        timezone=config.get("project", {}).get("timezone", "UTC"),
    )
    report.start()
    write_log(f"verify start | suites={','.join(suites)} n={n} k={k} seed={seed}", config=config)

    if "sphere" in suites:
        report.add(
            verify_sphere_inequality(
                k,
                n,
                trials,
                band,
                quadrature_rule(n, max(int(quadrature_setting("sphere_degree", 12, config)), 2 * (band + 1))),
                seed=seed,
                threads=threads,
                tol_one_sided=tol["one_sided"],
                tol_sharp=tol["sharpness_sphere"],
                config=config,
            )
        )
        if k == 1 and n in C1_DIMENSIONS:
            report.add(verify_c1_inverse(n, band_limit=band, seed=seed, tol=tol["c1_inverse"], config=config))
    if "euclidean" in suites:
        for source in SOURCES:
            report.add(
                verify_euclidean_inequality(
                    k,
                    n,
                    trials,
                    source,
                    seed=seed,
                    band_limit=min(band, 2),
                    threads=threads,
                    tol_one_sided=tol["one_sided_euclid"],
                    tol_sharp=tol["sharpness_euclid"],
                    tol_substitution=tol["isometry"],
                    config=config,
                    **quad,
                )
            )
        report.add(
            verify_isometry(n, trials, seed=seed, band_limit=2, threads=threads, tol=tol["isometry"], config=config, **quad)
        )
    if "kernels" in suites:
        if n in KERNEL_DIMENSIONS:
            report.add(
                verify_kernel_inequality(
                    k,
                    n,
                    kernel_trials,
                    seed=seed,
                    threads=threads,
                    slack=tol["kernel_bound"],
                    cutoff_radius=float(quadrature_setting("cutoff_radius", 50.0, config)),
                    panels=int(quadrature_setting("kernel_panels", 6, config)),
                    order=int(quadrature_setting("kernel_order", 10, config)),
                    outer_radial=int(quadrature_setting("outer_radial", 12, config)),
                    outer_angular=int(quadrature_setting("outer_angular", 4, config)),
                    config=config,
                    **quad,
                )
            )
            report.add(verify_kernel_transport(n, k, seed=seed, tol=tol["kernel_transport"], config=config))
        else:
            log_skip(f"kernel suite needs n in {KERNEL_DIMENSIONS}, got n={n}", config=config)

    report.finish()
    return _emit(report, args, config)


def cmd_identities(args: argparse.Namespace, config: dict) -> int:
    seed = _seed(args, config)
    band = args.band if args.band is not None else 2
    dims = (args.n,) if args.n is not None else (2, 3)
    ks = (args.k,) if args.k is not None else (1, 2, 3)
    for n in dims:
        _require(1 <= n <= MAX_QUADRATURE_N, f"--n must be in 1..{MAX_QUADRATURE_N}, got {n}")
    for k in ks:
        _require(k >= 1, f"--k must be >= 1, got {k}")
    names = IDENTITIES if args.identity == "all" else (args.identity,)
    tol = _tolerances(args, config)
    report = VerificationReport(
        command="identities",
        config={"identities": list(names), "map": args.map, "n": list(dims), "k": list(ks), "band_limit": band, "seed": seed},
        timezone=config.get("project", {}).get("timezone", "UTC"),
    )
    report.start()
    report.extend(run_identities(names, dims, ks, seed=seed, map_name=args.map, band_limit=band, tolerances=tol))
    report.finish()
    return _emit(report, args, config)


def cmd_constants(args: argparse.Namespace, config: dict) -> int:
    _require(args.kmax >= 1 and args.nmax >= 1, "--kmax and --nmax must be >= 1")
    rows = []
    for n in range(1, args.nmax + 1):
        for k in range(1, args.kmax + 1):
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "sharp_constant": sharp_constant(k, n),
                    "euclidean_constant": euclidean_constant(k, n),
                }
            )
    if args.format == "json":
        text = json.dumps(
            {"schema": SCHEMA_VERSION, "tool_version": TOOL_VERSION, "rows": rows}, indent=2, sort_keys=True
        ) + "\n"
    elif args.format == "csv":
        text = rows_to_csv(rows)
    else:
        lines = [f"{'n':>3} {'k':>3} {'sphere':>18} {'euclidean':>18}"]
        for r in rows:
            lines.append(f"{r['n']:>3} {r['k']:>3} {r['sharp_constant']:>18.12g} {r['euclidean_constant']:>18.12g}")
        text = "\n".join(lines) + "\n"
    write_output(text, args.out)
    log_success("constants", str(args.out) if args.out else None, config=config)
    return 0


def _emit(report: VerificationReport, args: argparse.Namespace, config: dict) -> int:
    write_output(report.render(args.format), args.out)
    if report.passed:
        log_success(report.command, str(args.out) if args.out else None, config=config)
        return 0
    log_failure(report.command, len(report.failed_rows), config=config)
    return 1


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "identities": cmd_identities,
    "constants": cmd_constants,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config: dict = {}
    try:
        config = load_config(args.config)
        args.out = _resolve_out(args.out, config)
        started = time.perf_counter()
        code = COMMANDS[args.command](args, config)
        write_log(f"{args.command} done | exit={code} | {time.perf_counter() - started:.2f}s", config=config)
        return code
    except (DiracSharpError, FileNotFoundError, ValueError) as e:
        log_error(f"{args.command}: {e}", config=config or None)
        print(f"error: {e}", file=sys.stderr)
        return 2
