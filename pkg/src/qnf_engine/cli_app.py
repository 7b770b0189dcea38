"""Batch command-line front end."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
from pydantic import ValidationError

from .classical_limit import classical_birkhoff, egorov_residual
from .config import RunConfig
from .core_symbols import weighted_norm
from .errors import InputError, NumericalFailure, QnfError
from .estimates import (
    diophantine_certify,
    epsilon_star_table,
    hypothesis_report,
    log_mu,
)
from .homological import DivisorModel, solve_homological
from .kam_engine import kam_run
from .qnf_order import qnf_construct, qnf_remainder_bound
from .verify_spectrum import (
    build_hamiltonian,
    compare_ebk,
    compare_qnf,
    fit_exponent,
    hbar_sweep,
    label_spectrum,
    write_error_csv,
)
from .weyl_matrix import ModeBox, write_eigenvalue_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

Report = Dict[str, Any]
Command = Callable[[RunConfig, Path], Report]


def _diophantine(config: RunConfig, out: Path) -> Report:
    certificate = diophantine_certify(config.omega, config.tau, config.q_max)
    return {"certificate": certificate.to_report()}


def _qnf(config: RunConfig, out: Path) -> Report:
    ctx = config.context()
    v = config.potential_symbol()
    nf = qnf_construct(v, config.order_K, ctx, tol_prune=config.tol_prune,
                       atom_budget=config.atom_budget)
    bounds = []
    for eps in config.epsilons:
        bound = qnf_remainder_bound(nf, eps * ctx.epsilon_factor, ctx)
        bounds.append(
            {
                "epsilon": eps,
                "remainder": bound.remainder,
                "b_series": bound.b_series,
                "mu": list(bound.mu),
                "rigorous": bound.rigorous,
            }
        )
    return {"normal_form": nf.to_report(), "remainder_bounds": bounds}


def _kam(config: RunConfig, out: Path) -> Report:
    ctx = config.context()
    v = config.potential_symbol()
    eps = config.epsilons[0] * ctx.epsilon_factor
    run = kam_run(v, ctx, eps, config.kam_steps, config.tol_neumann,
                  config.atom_budget)
    header = "ell,eps_ell,norm_V,norm_W,norm_N,theta,A,E,slack"
    lines = [header] + [
        ",".join([str(record.ell)] + [f"{value:.17g}" for value in record.row()[1:]])
        for record in run.records
    ]
    (out / "kam_steps.csv").write_text("\n".join(lines) + "\n")
    return {
        "steps": len(run.records),
        "ledgers": [ledger.to_report() for ledger in run.ledgers],
        "diagnostics": run.diagnostics,
        "D_atoms": [
            [float(a.real), float(a.imag), float(p)] + [int(c) for c in q]
            for p, q, a in zip(run.D.p, run.D.q, run.D.a)
        ],
    }


def _spectrum(config: RunConfig, out: Path) -> Report:
    ctx = config.context()
    v = config.potential_symbol()
    box = ModeBox(ctx.l, config.mode_box_M)
    eps = config.epsilons[0] * ctx.epsilon_factor
    h = build_hamiltonian(v, eps, box, ctx)
    spectrum = label_spectrum(h, ctx, v.max_mode(), config.interior_margin)
    values = np.array([e.value for e in spectrum.entries])
    labels = np.array([e.n for e in spectrum.entries], dtype=np.int64)
    write_eigenvalue_csv(out / "eigenvalues.csv", values, labels)
    return {
        "dimension": box.dimension,
        "ambiguous": len(spectrum.ambiguous),
        "interior": len(spectrum.usable),
    }


def _verify(config: RunConfig, out: Path) -> Report:
    ctx = config.context()
    v = config.potential_symbol()
    box = ModeBox(ctx.l, config.mode_box_M)
    epsilons = [eps * ctx.epsilon_factor for eps in config.epsilons]
    nf = qnf_construct(v, config.order_K, ctx, tol_prune=config.tol_prune,
                       atom_budget=config.atom_budget)
    nf_classical = classical_birkhoff(v, config.order_K, ctx, config.tol_prune,
                                      config.atom_budget)
    rows: List[Dict[str, Any]] = []
    for index, eps in enumerate(epsilons):
        h = build_hamiltonian(v, eps, box, ctx)
        spectrum = label_spectrum(h, ctx, v.max_mode(), config.interior_margin)
        qnf_table = compare_qnf(spectrum, nf, eps, ctx)
        ebk_table = compare_ebk(spectrum, nf_classical, eps, ctx)
        write_error_csv(out / f"qnf_errors_{index}.csv", qnf_table, ctx.l)
        write_error_csv(out / f"ebk_errors_{index}.csv", ebk_table, ctx.l)
        rows.append(
            {"epsilon": eps, "qnf": qnf_table.summary(), "ebk": ebk_table.summary()}
        )
    report: Report = {
        "epsilon_rows": rows,
        "qnf_exponent": fit_exponent(epsilons, [r["qnf"]["max"] for r in rows]),
        "ebk_exponent": fit_exponent(epsilons, [r["ebk"]["max"] for r in rows]),
    }
    if len(config.hbars) > 1:
        report["hbar_sweep"] = {
            "qnf": hbar_sweep(v, ctx, box, config.order_K, epsilons[0], config.hbars,
                              config.interior_margin),
            "ebk": hbar_sweep(v, ctx, box, config.order_K, epsilons[0], config.hbars,
                              config.interior_margin, classical=True),
        }
    return report


def _egorov(config: RunConfig, out: Path) -> Report:
    v = config.potential_symbol()
    rows = []
    for hbar in config.hbars:
        ctx = config.context(hbar)
        rho = ctx.rho
        w = solve_homological(v, DivisorModel(), ctx, rho, 0.5 * rho).W
        residual = egorov_residual(
            v, w, config.egorov_epsilon, ctx, rho=rho, d=0.5 * rho,
            steps_per_unit=config.flow_steps_per_unit,
        )
        rows.append({"hbar": hbar, "residual": residual})
    return {
        "epsilon": config.egorov_epsilon,
        "rows": rows,
        "hbar_exponent": fit_exponent(config.hbars, [r["residual"] for r in rows]),
    }


def _constants(config: RunConfig, out: Path) -> Report:
    ctx = config.context()
    norm_v = weighted_norm(config.potential_symbol(), ctx.rho)
    table = epsilon_star_table(ctx.gamma, ctx.tau, norm_v, 4)
    return {
        "norm_V": norm_v,
        "log_mu": log_mu(ctx.tau),
        "epsilon_star": [
            {"r": r, "log": value.log, "log10": value.log10,
             "mantissa_exponent": list(value.mantissa_exponent())}
            for r, value in enumerate(table)
        ],
        "hypotheses": hypothesis_report(ctx, 4),
    }


COMMANDS: Dict[str, Command] = {
    "diophantine": _diophantine,
    "qnf": _qnf,
    "kam": _kam,
    "spectrum": _spectrum,
    "verify": _verify,
    "egorov": _egorov,
    "constants": _constants,
}


def _write_json(path: Path, payload: Report) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n")


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, (complex, np.complexfloating)):
        return [value.real, value.imag]
    return str(value)


def _error_record(error: Exception) -> Report:
    if isinstance(error, QnfError):
        return error.to_record()
    if isinstance(error, ValidationError):
        return {
            "error": "ValidationError",
            "message": str(error),
            "details": {"errors": error.errors(include_url=False)},
        }
    return {"error": type(error).__name__, "message": str(error), "details": {}}


def run(
    command: str,
    config_path: Union[str, Path],
    output_dir: Union[str, Path],
    seed: Optional[int] = None,
) -> int:
    """
    Run one command and write its report.

    Args:
        command: One of the registered command names
        config_path: JSON config file
        output_dir: Directory receiving report.json, CSV tables or error.json
        seed: Recorded for provenance; numerics never depend on it

    Returns:
        0 on success, 2 on invalid input, 3 on numerical failure
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if command not in COMMANDS:
            raise InputError(
                f"unknown command {command!r}; choose from {sorted(COMMANDS)}",
                command=command,
            )
        config = RunConfig.load(config_path)
        logger.info(f"Running {command} with config {config_path}")
        report = COMMANDS[command](config, out)
    except NumericalFailure as error:
        logger.error(f"{command} failed: {error}")
        _write_json(out / "error.json", _error_record(error))
        return EXIT_NUMERICAL
    except (InputError, ValidationError, OSError, json.JSONDecodeError) as error:
        logger.error(f"{command} rejected its input: {error}")
        _write_json(out / "error.json", _error_record(error))
        return EXIT_INVALID

    report = {
        "command": command,
        "config": config.model_dump(),
        "seed": seed,
        "result": report,
    }
    _write_json(out / "report.json", report)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point."""
    parser = argparse.ArgumentParser(description="Quantum normal form engine")
    parser.add_argument("--command", required=True, choices=sorted(COMMANDS),
                        help="What to compute")
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="Sampling seed, recorded in the report")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    return run(args.command, args.config, args.out, args.seed)


__all__ = ["COMMANDS", "main", "run"]


if __name__ == "__main__":
    sys.exit(main())
