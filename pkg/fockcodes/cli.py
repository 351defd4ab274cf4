# cli.py - Command line front end of fockcodes
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import argparse
import logging
import os
import sys

import numpy as np

import fockcodes
from fockcodes.bounds import CurveSpec, EXPONENTS, ENSEMBLES, emit_curve, inf_norm_threshold, quantum_crossings
from fockcodes.classical_codes import (PAIR_CAP, TypicalityParams, gv_counting_bound, greedy_gv, load_code,
                                       min_distance, occupancy_stats, sample_multinomial, sample_uniform,
                                       save_code)
from fockcodes.config import build_config, config_record, resolve_shape
from fockcodes.errors import (CapExceededError, ConvergenceError, InconclusiveError, OracleViolation,
                              OrthogonalityError)
from fockcodes.fock_codes import build_fock_code, local_excitation_overlap, make_partition, quantum_rate
from fockcodes.kl_certifier import certify, save_report
from fockcodes.oracle_sim import check_kraus_completeness, check_trace_preserving, run_oracle_suite
from fockcodes.utils import file_digest, read_json, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_ORTHOGONALITY = 4
EXIT_ORACLE = 5


def _provenance(command: str, glob, job, inputs: dict = None) -> dict:
    return {"tool": "fockcodes",
            "tool_version": fockcodes.__version__,
            "command": command,
            "config": config_record(glob, job),
            "inputs": {role: file_digest(path) for role, path in (inputs or {}).items()}}


def _output(glob, default: str) -> str:
    return glob.out if glob.out else default


def cmd_sample(glob, job) -> int:
    shape = resolve_shape(job.q, job.N, job.alpha)
    sampler = sample_uniform if job.ensemble == 'uniform' else sample_multinomial
    code = sampler(shape, job.L, glob.seed)
    path = _output(glob, 'code.json')
    save_code(code, path)
    print("Sampled {} {} words on S_({},{}) into {}".format(len(code), job.ensemble, shape.q, shape.N, path))
    if 2 <= len(code) and len(code) * (len(code) - 1) // 2 <= PAIR_CAP:
        print("  minimum distance: {}".format(min_distance(code)))
    stats = occupancy_stats(code)
    print("  max occupancy: {}, mean support fraction: {:.4f}".format(stats.max_inf_norm,
                                                                      stats.mean_support_fraction))
    return EXIT_OK


def cmd_greedy(glob, job) -> int:
    shape = resolve_shape(job.q, job.N, job.alpha)
    params = None
    if job.typical:
        if shape.N < 2:
            raise ValueError("Typicality needs N >= 2; pass --no-typical.")
        alpha = job.alpha if job.alpha is not None else shape.q / shape.N
        params = TypicalityParams(alpha, job.eps, job.xi)
    order_seed = glob.seed if job.scan == 'shuffled' else None
    code = greedy_gv(shape, job.t, params, order_seed, glob.cap_enum)
    path = _output(glob, 'code.json')
    save_code(code, path)
    bound = gv_counting_bound(shape, job.t, params, glob.cap_enum)
    print("Greedy code of distance {} on S_({},{}): {} words into {}".format(
        job.t, shape.q, shape.N, len(code), path))
    print("  counting bound: {:.2f}".format(bound))
    return EXIT_OK


def cmd_certify(glob, job) -> int:
    code = load_code(job.code)
    partition = make_partition(code, job.K, job.partition, glob.seed)
    fc = build_fock_code(code, partition, job.t)
    report = certify(fc, job.t, job.gamma, job.lambda_mode, glob.cap_patterns)
    extra = _provenance('certify', glob, job, {"code": job.code})
    summary = {"quantum_rate": quantum_rate(fc.K, fc.shape) if fc.K > 1 else 0.0,
               "discarded_indices": fc.partition.discarded.tolist()}
    if fc.N >= 3:
        alpha = job.alpha or code.alpha or fc.q / fc.N
        B = inf_norm_threshold(fc.N, alpha, job.eps, 'multinomial' if code.ensemble == 'multinomial'
                               else 'uniform')
        summary["occupancy_threshold"] = B
        summary["local_excitation_overlap"] = local_excitation_overlap(fc, B)
    extra.update(summary)
    path = _output(glob, 'cert_report.json')
    save_report(report, path, extra, glob.timing)
    print("Certified K={} blocks of T={} words (q={}, N={}, t={}, gamma={})".format(
        report.K, report.T, report.q, report.N, report.t, report.gamma))
    print("  orthogonality: {}".format(report.orthogonality))
    print("  eps_max = {:.6e}, eps = {:.6e}, eps_ad = {:.6e}{}".format(
        report.eps_max, report.eps_certified, report.eps_ad, " (vacuous)" if report.vacuous else ""))
    print("  quantum_rate = {:.6f}".format(summary["quantum_rate"]))
    if "local_excitation_overlap" in summary:
        print("  local_excitation_overlap at B={:.4f}: {:.6f}".format(
            summary["occupancy_threshold"], summary["local_excitation_overlap"]))
    print("  report written to {}".format(path))
    return EXIT_OK


def cmd_bounds(glob, job) -> int:
    out_dir = _output(glob, '.')
    os.makedirs(out_dir, exist_ok=True)
    deltas = np.linspace(job.delta_min, job.delta_max, job.points)
    written = []
    for name in job.curves:
        exponents = EXPONENTS if name == 'quantum_rate_bound' else ('binary',)
        for exponent in exponents:
            curve = CurveSpec(name, job.alpha, job.ensemble, exponent)
            path = os.path.join(out_dir, curve.label + '.csv')
            emit_curve(curve, deltas, path)
            written.append(path)
    crossings = {}
    for ensemble in ENSEMBLES:
        try:
            crossings[ensemble] = quantum_crossings(job.alpha, ensemble)
        except ValueError as e:
            logger.warning("No crossing for the %s ensemble at alpha=%g: %s", ensemble, job.alpha, e)
            crossings[ensemble] = None
    payload = _provenance('bounds', glob, job)
    payload["alpha"] = job.alpha
    payload["crossings"] = crossings
    path = os.path.join(out_dir, 'crossings.json')
    write_json(payload, path)
    written.append(path)
    for ensemble, roots in crossings.items():
        if roots is not None:
            print("alpha={:g} {}: binary {:.6f}, modes {:.6f}".format(
                job.alpha, ensemble, roots['binary'], roots['modes']))
    print("Wrote {}".format(", ".join(written)))
    return EXIT_OK


def cmd_oracle(glob, job) -> int:
    inputs = {}
    if job.code:
        code = load_code(job.code)
        inputs["code"] = job.code
        fc = build_fock_code(code, make_partition(code, job.K), job.t)
        fault = None if job.fault is None else (int(fc.partition.retained[0]), job.fault)
        try:
            report = run_oracle_suite(fc, job.t, job.gamma, job.trials, glob.seed, job.id_trials,
                                      fault, tp_tol=glob.tol, diag_tol=glob.tol)
        except OracleViolation as e:
            payload = _provenance('oracle', glob, job, inputs)
            payload["failures"] = list(e.failures)
            write_json(payload, _output(glob, 'oracle_report.json'))
            raise
    else:
        shape = resolve_shape(job.q, job.N, None)
        tp = check_trace_preserving(shape, job.t, job.gamma, job.trials, glob.seed)
        completeness = check_kraus_completeness(shape, job.gamma)
        failures = []
        if tp.max_deviation > glob.tol:
            failures.append("trace preservation deviates by {:.3e}".format(tp.max_deviation))
        if completeness > glob.tol:
            failures.append("Kraus completeness deviates by {:.3e}".format(completeness))
        report = {"trace_preservation": tp.as_dict(), "kraus_completeness": completeness,
                  "failures": failures}
        if failures:
            raise OracleViolation(failures)
    payload = _provenance('oracle', glob, job, inputs)
    payload.update(report)
    path = _output(glob, 'oracle_report.json')
    write_json(payload, path)
    print("Oracle checks passed; report written to {}".format(path))
    return EXIT_OK


COMMANDS = {
    'sample': cmd_sample,
    'greedy': cmd_greedy,
    'certify': cmd_certify,
    'bounds': cmd_bounds,
    'oracle': cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="JSON file with parameter values; flags take precedence")
    common.add_argument('--seed', type=int)
    common.add_argument('--out', help="output file (or directory for bounds)")
    common.add_argument('--tol', type=float)
    common.add_argument('--cap-enum', dest='cap_enum', type=int)
    common.add_argument('--cap-patterns', dest='cap_patterns', type=int)
    common.add_argument('--timing', action='store_const', const=True)
    common.add_argument('--verbose', action='store_const', const=True)

    parser = argparse.ArgumentParser(prog='fockcodes',
                                     description="Fock state codes from simplex codes: sample, certify, bound.")
    parser.add_argument('--version', action='version', version='%(prog)s ' + fockcodes.__version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('sample', parents=[common], help="sample a random simplex code")
    p.add_argument('--ensemble', choices=ENSEMBLES)
    p.add_argument('--q', type=int)
    p.add_argument('--N', type=int)
    p.add_argument('--alpha', type=float)
    p.add_argument('--L', type=int)

    p = sub.add_parser('greedy', parents=[common], help="greedy GV code on the typical set")
    p.add_argument('--q', type=int)
    p.add_argument('--N', type=int)
    p.add_argument('--alpha', type=float)
    p.add_argument('--t', type=int)
    p.add_argument('--eps', type=float)
    p.add_argument('--xi', type=float)
    p.add_argument('--no-typical', dest='typical', action='store_const', const=False)
    p.add_argument('--scan', choices=('shuffled', 'colex'))

    p = sub.add_parser('certify', parents=[common], help="certify the Fock code of a classical code")
    p.add_argument('--code')
    p.add_argument('--K', type=int)
    p.add_argument('--t', type=int)
    p.add_argument('--gamma', type=float)
    p.add_argument('--lambda-mode', dest='lambda_mode')
    p.add_argument('--partition')
    p.add_argument('--eps', type=float)
    p.add_argument('--alpha', type=float)

    p = sub.add_parser('bounds', parents=[common], help="rate curves and their zero crossings")
    p.add_argument('--alpha', type=float)
    p.add_argument('--delta-min', dest='delta_min', type=float)
    p.add_argument('--delta-max', dest='delta_max', type=float)
    p.add_argument('--points', type=int)
    p.add_argument('--curves', nargs='+')
    p.add_argument('--ensemble', choices=ENSEMBLES)

    p = sub.add_parser('oracle', parents=[common], help="brute force checks on small instances")
    p.add_argument('--code')
    p.add_argument('--q', type=int)
    p.add_argument('--N', type=int)
    p.add_argument('--K', type=int)
    p.add_argument('--t', type=int)
    p.add_argument('--gamma', type=float)
    p.add_argument('--trials', type=int)
    p.add_argument('--id-trials', dest='id_trials', type=int)
    p.add_argument('--fault', type=float, help="scale one amplitude to test the oracle itself")
    return parser


def main(argv=None) -> int:
    """Runs one subcommand
    Returns
    -------
    code : int
        0 on success, 2 on invalid input, 3 on an exceeded cap or an
        inconclusive check, 4 on an orthogonality violation and 5 on an
        oracle violation
    """
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop('command')
    config_path = args.pop('config')
    try:
        file_values = read_json(config_path) if config_path else {}
        glob, job = build_config(command, file_values, args)
        logging.basicConfig(level=logging.DEBUG if glob.verbose else logging.WARNING,
                            format='%(levelname)s %(name)s: %(message)s')
        return COMMANDS[command](glob, job)
    except OracleViolation as e:
        print("oracle violation: {}".format("; ".join(e.failures)), file=sys.stderr)
        return EXIT_ORACLE
    except OrthogonalityError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_ORTHOGONALITY
    except (CapExceededError, InconclusiveError) as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_CAP
    except (ValueError, ConvergenceError, OSError) as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
