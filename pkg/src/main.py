import argparse
import copy
import json
import os
import sys
import time

from loguru import logger

from . import __version__
from .certify import CertVerdict, certify_group, parse_group_spec
from .database import Database
from .dataset import check_identities, generate_paper_example, load_dataset, save_dataset
from .errors import HeckeOrbitError, IndexDivisor, MissingSign, SchemaError
from .exact_algebra import UniPoly, certify_irreducible_over_Q, count_real_roots, discriminant
from .ideals import dedekind_factor
from .logger import setup_logger
from .number_fields import NumberField
from .orbits import (
    corollary_suite,
    fixing_subgroup,
    genus_bookkeeping,
    is_base_change,
    orbit_action,
    phi_analysis,
    quotient_constituents,
    summarize_space,
)
from .utils import dump_json, format_time_duration, parse_poly_text, read_poly_file, write_json
from .verification import SECTIONS, run_verification

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEFAULT_CONFIG = {
    "seed": 42,
    "log_dir": "logs/",
    "log_level": "INFO",
    "log_rotation": "10 MB",
    "log_retention": "7 days",
    "database_path": "database/runs.db",
    "record_runs": True,
    "prime_budget": 60,
    "dataset": {
        "supported_primes": [2, 3, 7, 17, 31, 97],
        "path": "data/paper_example.json",
    },
    "certify": {
        "max_prime": 100000,
        "tolerance": 0.02,
        "workers": 1,
        "cross_check": 20,
    },
}


class UsageError(HeckeOrbitError):
    """Bad flags, unreadable files or an unusable configuration"""


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(config_path='config.json'):
    """
    Load configuration from JSON file, merged over DEFAULT_CONFIG.
    A missing file means defaults; an unreadable one is a usage error.
    """
    if not os.path.exists(config_path):
        logger.debug(f"No configuration at {config_path}, using defaults")
        return copy.deepcopy(DEFAULT_CONFIG)
    try:
        with open(config_path, 'r') as f:
            config = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Error loading config: {e}")
        raise UsageError(f"cannot read configuration {config_path}: {e}") from e
    if not isinstance(config, dict):
        raise UsageError(f"configuration {config_path} must be a JSON object")
    return _merge(DEFAULT_CONFIG, config)


def resolve_seed(args, config):
    """HOL_SEED beats --seed, which beats the configured seed"""
    env = os.environ.get("HOL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"HOL_SEED must be an integer, got {env!r}") from None
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(config["seed"])


def _poly_arg(args):
    try:
        if getattr(args, "poly_file", None):
            return UniPoly(read_poly_file(args.poly_file))
        if args.poly:
            return UniPoly(parse_poly_text(args.poly))
    except (OSError, ValueError) as e:
        raise UsageError(f"bad polynomial: {e}") from e
    raise UsageError("a polynomial is required (--poly or --poly-file)")


def _emit(data, report_path=None):
    sys.stdout.write(dump_json(data))
    if report_path:
        write_json(data, report_path)


# commands

def cmd_field(args, config, seed):
    poly = _poly_arg(args)
    if args.action == "info":
        if poly.degree < 1:
            raise UsageError("field info needs a nonconstant polynomial")
        cert = certify_irreducible_over_Q(poly, config["prime_budget"])
        disc = discriminant(poly)
        info = {
            "poly": poly.to_list(),
            "degree": poly.degree,
            "certificate": cert.to_dict(),
            "discriminant": str(disc),
        }
        if disc:
            r1 = count_real_roots(poly)
            info["signature"] = [r1, (poly.degree - r1) // 2]
        else:
            # repeated roots
            info["signature"] = None
        _emit(info)
        return EXIT_OK, {"degree": poly.degree, "verdict": cert.verdict.value, "discriminant": str(disc)}

    if args.prime is None:
        raise UsageError("field factor needs --prime")
    try:
        K = NumberField(poly, prime_budget=config["prime_budget"])
    except (ValueError, HeckeOrbitError) as e:
        raise UsageError(str(e)) from e
    try:
        ctx = dedekind_factor(K, args.prime, seed)
    except IndexDivisor as e:
        logger.error(str(e))
        _emit({"poly": poly.to_list(), "p": args.prime, "error": "IndexDivisor", "message": str(e)})
        return EXIT_FAIL, {"p": args.prime, "error": "IndexDivisor"}
    _emit(ctx.to_dict())
    return EXIT_OK, {"p": args.prime, "ef": [[P.e, P.f] for P in ctx]}


def analyze(ds, seed):
    """
    Orbit table, phi reports, corollaries, genus and identities of a dataset
    Returns:
        (report dict, list of failure entries)
    """
    setup = ds.setup(seed)
    failures = []
    out = {"constituents": ds.labels}

    for ident, ok in check_identities(ds, setup):
        if not ok:
            failures.append({
                "error": "HomomorphismViolation",
                "message": f"identity {ident.word}.{ident.source} = {ident.target}^tau contradicts the eigenvalues",
            })

    try:
        table = orbit_action(setup, ds.orbits)
    except HeckeOrbitError as e:
        logger.error(f"orbit action failed: {e}")
        failures.append({"error": type(e).__name__, "message": str(e)})
        out["failures"] = failures
        return out, failures

    out["orbit_action"] = table.to_dict()
    phis = {}
    for label in ds.labels:
        try:
            phis[label] = phi_analysis(setup, ds.orbits, label, table).to_dict()
        except HeckeOrbitError as e:
            logger.error(f"phi analysis of {label} failed: {e}")
            failures.append({"error": type(e).__name__, "message": str(e), "constituent": label})
    out["phi"] = phis
    out["base_change"] = {
        label: {
            "is_base_change": is_base_change(setup, ds.record(label)),
            "fixing_subgroup": fixing_subgroup(setup, ds.record(label)),
        }
        for label in ds.labels
    }

    summary = summarize_space(ds.orbits, table)
    out["corollaries"] = corollary_suite(summary).to_dict()
    try:
        total, quotient = genus_bookkeeping(summary)
        out["genus"] = {"total": total, "quotient": quotient, "quotient_constituents": quotient_constituents(summary)}
    except MissingSign as e:
        out["genus"] = {"skipped": str(e)}
    out["failures"] = failures
    return out, failures


def cmd_orbits(args, config, seed):
    if args.input:
        ds = load_dataset(args.input)
    else:
        ds = generate_paper_example(seed, tuple(config["dataset"]["supported_primes"]))
    report, failures = analyze(ds, seed)
    _emit(report, args.report)
    summary = {
        "partition": report.get("orbit_action", {}).get("partition"),
        "genus": report.get("genus"),
        "failures": [f["error"] for f in failures],
    }
    return (EXIT_FAIL if failures else EXIT_OK), summary


def cmd_certify(args, config, seed, db=None):
    cert = config["certify"]
    poly = _poly_arg(args)
    try:
        group = parse_group_spec(args.group)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if poly.degree != group.degree or not poly.is_integral:
        raise UsageError(f"polynomial of degree {poly.degree} does not fit {group.name} on {group.degree} points")
    report = certify_group(
        poly,
        group,
        args.max_prime or cert["max_prime"],
        seed,
        args.tolerance if args.tolerance is not None else cert["tolerance"],
        args.workers or cert["workers"],
        cert["cross_check"],
    )
    sys.stdout.write(report.to_text())
    if args.report:
        write_json(report.to_dict(), args.report)
    if db is not None:
        db.record_certification(report)
    code = EXIT_OK if report.verdict == CertVerdict.CONSISTENT else EXIT_FAIL
    return code, {"group": report.group, "verdict": report.verdict, "primes_sampled": report.primes_sampled}


def cmd_paper_verify(args, config, seed):
    sections = SECTIONS if args.section == "all" else (args.section,)
    report = run_verification(sections, config, seed)
    sys.stdout.write(report.to_text())
    if args.report:
        write_json(report.to_dict(), args.report)
    return (EXIT_OK if report.ok else EXIT_FAIL), report.summary


def cmd_dataset(args, config, seed):
    ds = generate_paper_example(seed, tuple(config["dataset"]["supported_primes"]))
    path = args.output or config["dataset"]["path"]
    save_dataset(ds, path)
    logger.info(f"dataset with constituents {ds.labels} written to {path}")
    return EXIT_OK, {"path": path, "constituents": ds.labels}


def cmd_history(args, config, seed, db=None):
    if db is None:
        db = Database(config["database_path"])
    for run in db.get_recent_runs(args.limit):
        print(f"{run.timestamp:%Y-%m-%d %H:%M:%S}  {run.command:<14} seed={run.seed:<6} exit={run.exit_code}  {run.summary or ''}")
    return EXIT_OK, None


def build_parser():
    parser = argparse.ArgumentParser(prog="python -m src.main", description="Galois action on Hecke orbits")
    parser.add_argument('--config', default='config.json', help='Configuration file path')
    parser.add_argument('--log-level', default=None, help='Logging level (overrides config)')
    parser.add_argument('--seed', type=int, default=None, help='Seed (HOL_SEED overrides)')
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    field = sub.add_parser("field", help="number field information and prime factorization")
    field.add_argument("action", choices=["info", "factor"])
    field.add_argument("--poly", help="coefficients, lowest degree first (JSON array or CSV)")
    field.add_argument("--poly-file", help="file with coefficients")
    field.add_argument("--prime", type=int)

    orbits = sub.add_parser("orbits", help="orbit analysis of an eigensystem dataset")
    orbits.add_argument("action", choices=["analyze"])
    orbits.add_argument("--input", help="dataset JSON (default: the bundled example)")
    orbits.add_argument("--report", help="write the report JSON here")

    cert = sub.add_parser("certify", help="Galois group certification by Frobenius sampling")
    cert.add_argument("--poly")
    cert.add_argument("--poly-file")
    cert.add_argument("--group", required=True, help="frobenius:p, dihedral:p or cyclic:n")
    cert.add_argument("--max-prime", type=int)
    cert.add_argument("--tolerance", type=float)
    cert.add_argument("--workers", type=int)
    cert.add_argument("--report")

    verify = sub.add_parser("paper-verify", help="verify the worked example")
    verify.add_argument("--section", choices=list(SECTIONS) + ["all"], default="all")
    verify.add_argument("--report")

    dataset = sub.add_parser("dataset", help="generate the bundled dataset")
    dataset.add_argument("action", choices=["generate"])
    dataset.add_argument("--output")

    history = sub.add_parser("history", help="recent runs from the ledger")
    history.add_argument("--limit", type=int, default=20)
    return parser


def main(argv=None):
    """
    Main entry point
    Returns:
        exit code: 0 success, 1 FAIL / CONTRADICTED / IndexDivisor, 2 usage or schema error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config = load_config(args.config)
        setup_logger(
            config.get("log_dir"),
            args.log_level or config["log_level"],
            config["log_rotation"],
            config["log_retention"],
        )
        seed = resolve_seed(args, config)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    db = None
    if config.get("record_runs") or args.command == "history":
        try:
            db = Database(config["database_path"])
        except Exception as e:
            logger.warning(f"run ledger unavailable: {e}")

    start = time.time()
    summary = None
    try:
        if args.command == "field":
            code, summary = cmd_field(args, config, seed)
        elif args.command == "orbits":
            code, summary = cmd_orbits(args, config, seed)
        elif args.command == "certify":
            code, summary = cmd_certify(args, config, seed, db)
        elif args.command == "paper-verify":
            code, summary = cmd_paper_verify(args, config, seed)
        elif args.command == "dataset":
            code, summary = cmd_dataset(args, config, seed)
        else:
            code, summary = cmd_history(args, config, seed, db)
    except (UsageError, SchemaError, ValueError, OSError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_USAGE
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        code = EXIT_FAIL
    except HeckeOrbitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        code = EXIT_FAIL

    logger.info(f"{args.command} finished in {format_time_duration(time.time() - start)} with exit code {code}")
    if db is not None:
        if args.command != "history" and config.get("record_runs"):
            db.record_run(args.command, seed, __version__, code, summary)
        db.close()
    return code


if __name__ == '__main__':
    sys.exit(main())
