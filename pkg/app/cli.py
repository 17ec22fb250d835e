"""
Command-line front end for the Hardy nonlocality toolkit

    python app/cli.py surface  --j 3/2 --grid 64 --out data/q_3_2.csv
    python app/cli.py optimize --j 2
    python app/cli.py state    --j 1 --theta1 103.65 --theta2 103.65
    python app/cli.py verify   --suite no-go

Payloads go to --out or stdout, logs to stderr. Exit status: 0 on success,
1 when a verification check fails, 2 on bad input or I/O errors.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.entanglement.schmidt import schmidt_spectrum, su_invariants
from src.hardy.closed_forms import CLOSED_FORMS, Q_MAX, optimal_theta, q_closed_form
from src.hardy.scenario import HardyScenario
from src.hardy.states import condition_probabilities, hardy_state_max, verify_hardy_conditions
from src.optimizer.angles import GAP_FLAG, critical_residual, maximize_q, q_at, q_surface, theta_grid
from src.suite.coordinator import VerificationPipeline
from src.utils.config import FORMATS, LOG_LEVELS, SUBCOMMANDS, SUITES, RunConfig
from src.utils.errors import HardyError
from src.utils.io import complex_pairs, write_json, write_records

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--j", help="Spin quantum number, e.g. 1/2, 1, 3/2 (verify: restrict the suites to it)")
    common.add_argument("--theta1", type=float, help="Polar angle of A1 (degrees unless --radians)")
    common.add_argument("--theta2", type=float, help="Polar angle of B1")
    common.add_argument("--phi1", type=float, help="Azimuth of A1")
    common.add_argument("--phi2", type=float, help="Azimuth of B1")
    common.add_argument("--radians", action="store_true", help="Angles are given in radians")
    common.add_argument("--grid", type=int, help="Grid points per angle axis")
    common.add_argument("--diagonal", action="store_true", help="surface: only theta1 = theta2")
    common.add_argument("--free-phi", action="store_true", help="optimize: refine the azimuths too")
    common.add_argument("--format", choices=FORMATS, help="Output format")
    common.add_argument("--out", help="Output file (stdout when omitted)")
    common.add_argument("--seed", type=int, help="Random seed")
    common.add_argument("--threads", type=int, help="Worker threads")
    common.add_argument("--suite", choices=SUITES, help="verify: run a single suite")
    common.add_argument("--state", help="verify: check a state file written by `state`")
    common.add_argument("--tol-zero", type=float, help="Upper bound for zero-condition probabilities")
    common.add_argument("--tol-pos", type=float, help="Lower bound for q")
    common.add_argument("--check-tol", type=float, help="verify: replace every error threshold of the suites")
    common.add_argument("--kappa", type=float, help="no-go: penalty weight")
    common.add_argument("--restarts", type=int, help="no-go: search restarts")
    common.add_argument("--iterations", type=int, help="no-go: simplex iterations per restart")
    common.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, help="Logging level")
    common.add_argument("--quiet", action="store_true", help="Hide progress bars")

    parser = argparse.ArgumentParser(description="Hardy nonlocality toolkit for two spin-j particles")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        'surface': "q over a theta grid",
        'optimize': "maximize q over the observable angles",
        'state': "maximally nonlocal Hardy state for one observable choice",
        'verify': "run the verification suites",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _progress(cfg: RunConfig) -> bool:
    return not cfg.quiet and sys.stderr.isatty()


def cmd_surface(cfg: RunConfig) -> int:
    """theta1, theta2, q rows; the diagonal variant adds the closed form where one exists"""
    spin = cfg.spin
    if cfg.diagonal:
        rows = []
        for t in theta_grid(cfg.grid):
            row = {'theta1': t, 'theta2': t, 'q': q_at(spin, t, t)}
            if spin.two_j in CLOSED_FORMS:
                row['q_closed_form'] = q_closed_form(spin, t, t)
            rows.append(row)
        df = pd.DataFrame(rows)
    else:
        surface = q_surface(spin, cfg.grid, cfg.threads, _progress(cfg))
        t1, t2 = np.meshgrid(surface.thetas, surface.thetas, indexing='ij')
        df = pd.DataFrame({'theta1': t1.ravel(), 'theta2': t2.ravel(), 'q': surface.q.ravel()})
    logger.info(f"Surface for j={spin.label}: {len(df)} rows, max q {df['q'].max():.10g}")
    write_records(df, cfg.output_format, cfg.out)
    return EXIT_OK


def cmd_optimize(cfg: RunConfig) -> int:
    spin = cfg.spin
    result = maximize_q(spin, grid_n=cfg.grid, refine_tol=cfg.refine_tol, seed=cfg.seed,
                        free_phi=cfg.free_phi, threads=cfg.threads, progress=_progress(cfg))
    thetas = np.array([result.theta1_star, result.theta2_star])
    gap = abs(result.q_star - Q_MAX)
    payload = result.model_dump()
    payload.update({
        'theta_star_degrees': np.degrees(thetas).tolist(),
        'cos_theta_star': np.cos(thetas).tolist(),
        'residuals': critical_residual(spin, *thetas).tolist(),
        'q_reevaluated': q_at(spin, *thetas, result.phi1_star, result.phi2_star),
        'gap': gap,
        'gap_flagged': gap > GAP_FLAG,
    })
    if cfg.output_format == 'csv':
        scalars = {k: v for k, v in payload.items() if not isinstance(v, list)}
        write_records([scalars], 'csv', cfg.out)
    else:
        write_json(payload, cfg.out)
    return EXIT_OK


def cmd_state(cfg: RunConfig) -> int:
    """psi_max at the given angles; the polar angles default to the diagonal optimum"""
    spin = cfg.spin
    theta1 = cfg.theta1 if cfg.theta1 is not None else optimal_theta(spin)
    theta2 = cfg.theta2 if cfg.theta2 is not None else optimal_theta(spin)
    sc = HardyScenario.from_angles(spin, theta1, theta2, cfg.phi1 or 0.0, cfg.phi2 or 0.0)
    psi = hardy_state_max(sc)
    report = verify_hardy_conditions(sc, psi, cfg.tol_zero, cfg.tol_pos)
    logger.info(f"psi_max for j={spin.label}: q={report.q:.12g}, Hardy conditions passed={report.passed}")

    if cfg.output_format == 'csv':
        m = spin.m_values()
        d = spin.dim
        rows = [{'m_a': m[k // d], 'm_b': m[k % d], 're': a.real, 'im': a.imag}
                for k, a in enumerate(psi.amplitudes)]
        write_records(rows, 'csv', cfg.out)
        return EXIT_OK

    write_json({
        'j': spin.label,
        'angles': sc.angles(),
        'amplitudes': complex_pairs(psi.amplitudes),
        'q': report.q,
        'condition_probabilities': condition_probabilities(sc, psi).tolist(),
        'hardy_conditions_passed': report.passed,
        'schmidt_spectrum': schmidt_spectrum(psi).values.tolist(),
        'invariants': su_invariants(psi).as_dict(),
    }, cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    pipeline = VerificationPipeline(cfg)
    report = pipeline.run(suites=[cfg.suite] if cfg.suite else None, state_file=cfg.state)
    write_json(report, cfg.out)
    summary = report['summary']
    logger.info(f"{summary['passed_checks']}/{summary['total_checks']} checks passed")
    return EXIT_OK if report['passed'] else EXIT_FAILED_CHECKS


COMMANDS = {
    'surface': cmd_surface,
    'optimize': cmd_optimize,
    'state': cmd_state,
    'verify': cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level or 'INFO'),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        cfg = RunConfig.from_namespace(args)
        return COMMANDS[cfg.subcommand](cfg)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_USAGE
    except (HardyError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
