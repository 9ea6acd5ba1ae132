#!/usr/bin/env python3
"""
Demo script for the Hecke orbit toolkit
This script walks through the worked example: the base field and its Galois
group, the orbit analysis of the bundled dataset, and a short Frobenius
sampling run against the group of order 272
"""

import sys
import time

from loguru import logger

from src.certify import build_frobenius_group, certify_group, cycle_types
from src.dataset import base_field, generate_paper_example
from src.exact_algebra import UniPoly
from src.ideals import dedekind_factor
from src.logger import setup_logger
from src.orbits import genus_bookkeeping, orbit_action, phi_analysis, summarize_space
from src.utils import create_directories, format_time_duration, read_poly_file
from src.verification import H_POLY_PATH


def show_base_field():
    """
    Print the base field, its generator sigma and how the small primes split
    """
    F, sigma = base_field()
    logger.info(f"Base field F defined by {F.poly}, signature {F.signature}")
    logger.info(f"sigma: {sigma} has order {sigma.order}")
    for p in (2, 3, 7, 17, 31):
        ctx = dedekind_factor(F, p)
        shape = ", ".join(f"{P.label} (e={P.e}, f={P.f})" for P in ctx)
        logger.info(f"  {p}: {shape}")


def show_orbits(seed):
    """
    Run the orbit analysis on the generated example and print the results
    """
    ds = generate_paper_example(seed)
    setup = ds.setup(seed)
    table = orbit_action(setup, ds.orbits)
    logger.info(f"Orbit partition: {table.to_dict()['partition']}")
    for label in ("f", "g", "h"):
        r = phi_analysis(setup, ds.orbits, label, table)
        logger.info(
            f"  [{label}] |Stab|={len(r.stabilizer)} |Delta|={r.delta_order} "
            f"K={r.endomorphism_field.poly} E'={r.descent_field.poly}"
        )
    total, quotient = genus_bookkeeping(summarize_space(ds.orbits, table))
    logger.info(f"Genus {total}, quotient genus {quotient}")


def show_certification(seed, max_prime=20000):
    """
    Cycle-type table of F17 and a short certification run of H
    """
    G = build_frobenius_group(17)
    for t, count in cycle_types(G).items():
        logger.info(f"  {str(t):<10} {count}")
    report = certify_group(UniPoly(read_poly_file(H_POLY_PATH)), G, max_prime, seed)
    sys.stdout.write(report.to_text())


def run_demo(seed=42):
    """
    Run the complete demo
    """
    try:
        create_directories("logs/", "database/")
        setup_logger("logs/", "INFO")

        logger.info("Starting Hecke orbit toolkit demo")
        start_time = time.time()

        show_base_field()
        show_orbits(seed)
        show_certification(seed)

        logger.info("Demo completed!")
        logger.info(f"Processing time: {format_time_duration(time.time() - start_time)}")
        logger.info("Next: python -m src.main paper-verify --report verify.json")

    except KeyboardInterrupt:
        logger.info("Demo interrupted by user")
    except Exception as e:
        logger.error(f"Demo failed: {e}")
        raise


def main():
    """
    Main demo function
    """
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 42
    run_demo(seed)


if __name__ == "__main__":
    main()
