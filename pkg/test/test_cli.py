# test_cli.py - Unittest for the command line front end and its configuration
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import contextlib
import io
import json
import math
import os
import tempfile
from unittest import TestCase

from fockcodes.classical_codes import ClassicalCode, load_code, save_code
from fockcodes.cli import *
from fockcodes.config import BoundsConfig, GlobalConfig, build_config, config_record
from fockcodes.simplex import SimplexShape
from fockcodes.utils import file_digest, read_json


def run(*argv) -> int:
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return main(list(argv))


def run_output(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        status = main(list(argv))
    return status, out.getvalue()


class TestConfig(TestCase):
    def test_precedence(self):
        glob, job = build_config('sample', {"seed": 3, "L": 5, "q": 2, "N": 4}, {"L": 7, "q": None})
        self.assertEqual(glob.seed, 3)
        self.assertEqual((job.L, job.q, job.N), (7, 2, 4))
        self.assertEqual(job.ensemble, 'uniform')

    def test_rejects(self):
        with self.assertRaises(ValueError):
            build_config('sample', {"L": 5, "q": 2, "N": 4, "bogus": 1})
        with self.assertRaises(ValueError):
            build_config('sample', [1, 2])
        with self.assertRaises(ValueError):
            build_config('sample', {"q": 2, "N": 4})
        with self.assertRaises(ValueError):
            build_config('certify', {"code": "c.json", "K": 2, "t": 1, "gamma": 1.5})
        with self.assertRaises(ValueError):
            build_config('bounds', {"curves": ["rate_x"]})
        with self.assertRaises(ValueError):
            build_config('nothing')
        with self.assertRaises(ValueError):
            GlobalConfig(seed=-1)

    def test_record(self):
        glob, job = build_config('bounds', {}, {"out": "x", "alpha": 2.0})
        record = config_record(glob, job)
        self.assertNotIn("out", record)
        self.assertEqual(record["alpha"], 2.0)
        self.assertEqual(job, BoundsConfig(alpha=2.0))


class TestCommands(TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def path(self, name: str) -> str:
        return os.path.join(self.tmp, name)

    def separated_code(self) -> str:
        path = self.path('separated.json')
        save_code(ClassicalCode(SimplexShape(3, 6), [[6, 0, 0], [0, 6, 0], [0, 0, 6], [2, 2, 2]]), path)
        return path

    def test_sample(self):
        out = self.path('code.json')
        self.assertEqual(run('sample', '--q', '4', '--N', '5', '--L', '8', '--seed', '7', '--out', out), EXIT_OK)
        code = load_code(out)
        self.assertEqual(len(code), 8)
        self.assertEqual(code.seed, 7)
        self.assertEqual(run('sample', '--ensemble', 'multinomial', '--alpha', '0.5', '--N', '10', '--L', '3',
                             '--out', out), EXIT_OK)
        self.assertEqual(load_code(out).q, 5)

    def test_greedy_colex(self):
        out = self.path('greedy.json')
        code = run('greedy', '--q', '2', '--N', '2', '--t', '2', '--no-typical', '--scan', 'colex', '--out', out)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(load_code(out).words.tolist(), [[0, 2], [2, 0]])
        self.assertEqual(run('greedy', '--q', '2', '--N', '1', '--t', '1', '--out', out), EXIT_INVALID)

    def test_certify(self):
        out = self.path('cert_report.json')
        code = self.separated_code()
        self.assertEqual(run('certify', '--code', code, '--K', '2', '--t', '2', '--gamma', '0.2', '--out', out),
                         EXIT_OK)
        report = read_json(out)
        self.assertEqual(list(report)[:2], ["tool", "tool_version"])
        self.assertEqual(report["orthogonality"], 'proved_by_distance')
        self.assertEqual(report["M"], 10)
        self.assertEqual(report["inputs"]["code"], file_digest(code))
        self.assertAlmostEqual(report["quantum_rate"], 1 / math.log2(28))
        self.assertNotIn("wallclock", report)
        run('certify', '--code', code, '--K', '2', '--t', '2', '--gamma', '0.2', '--out', out, '--timing')
        self.assertIn("wallclock", read_json(out))

    def test_certify_summary(self):
        out = self.path('cert_report.json')
        status, text = run_output('certify', '--code', self.separated_code(), '--K', '2', '--t', '2',
                                  '--gamma', '0.2', '--out', out)
        self.assertEqual(status, EXIT_OK)
        report = read_json(out)
        self.assertIn("quantum_rate = {:.6f}".format(report["quantum_rate"]), text)
        self.assertIn("local_excitation_overlap at B={:.4f}: {:.6f}".format(
            report["occupancy_threshold"], report["local_excitation_overlap"]), text)

    def test_exit_codes(self):
        overlapping = self.path('overlapping.json')
        save_code(ClassicalCode(SimplexShape(2, 2), [[2, 0], [1, 1]]), overlapping)
        out = self.path('report.json')
        self.assertEqual(run('certify', '--code', overlapping, '--K', '2', '--t', '1', '--gamma', '0.1',
                             '--out', out), EXIT_ORTHOGONALITY)
        self.assertEqual(run('certify', '--code', self.separated_code(), '--K', '2', '--t', '2', '--gamma', '0.2',
                             '--cap-patterns', '5', '--out', out), EXIT_CAP)
        self.assertEqual(run('certify', '--code', self.path('missing.json'), '--K', '2', '--t', '1',
                             '--gamma', '0.1'), EXIT_INVALID)
        self.assertEqual(run('sample', '--q', '2', '--N', '2'), EXIT_INVALID)
        with self.assertRaises(SystemExit):
            run('sample', '--L', 'many')

    def test_config_file(self):
        config = self.path('config.json')
        with open(config, 'w') as f:
            json.dump({"q": 3, "N": 3, "L": 4, "seed": 1}, f)
        out = self.path('code.json')
        self.assertEqual(run('sample', '--config', config, '--L', '6', '--out', out), EXIT_OK)
        self.assertEqual(len(load_code(out)), 6)
        with open(config, 'w') as f:
            json.dump({"q": 3, "N": 3, "L": 4, "bogus": True}, f)
        self.assertEqual(run('sample', '--config', config, '--out', out), EXIT_INVALID)

    def test_bounds(self):
        out = self.path('curves')
        self.assertEqual(run('bounds', '--alpha', '5', '--points', '5', '--curves', 'rate_gv', 'quantum_rate_bound',
                             '--out', out), EXIT_OK)
        self.assertEqual(sorted(os.listdir(out)),
                         ['crossings.json', 'quantum_rate_bound_uniform_binary.csv',
                          'quantum_rate_bound_uniform_modes.csv', 'rate_gv.csv'])
        crossings = read_json(os.path.join(out, 'crossings.json'))["crossings"]
        self.assertLess(crossings["uniform"]["binary"], 0.15)
        with open(os.path.join(out, 'rate_gv.csv')) as f:
            self.assertEqual(len(f.read().splitlines()), 6)

    def test_oracle(self):
        out = self.path('oracle.json')
        self.assertEqual(run('oracle', '--q', '2', '--N', '3', '--t', '1', '--gamma', '0.1', '--trials', '10',
                             '--out', out), EXIT_OK)
        self.assertEqual(read_json(out)["failures"], [])
        code = self.separated_code()
        self.assertEqual(run('oracle', '--code', code, '--t', '2', '--gamma', '0.2', '--trials', '10',
                             '--id-trials', '200', '--out', out), EXIT_OK)
        self.assertEqual(run('oracle', '--code', code, '--t', '2', '--gamma', '0.2', '--trials', '10',
                             '--id-trials', '200', '--fault', '1.5', '--out', out), EXIT_ORACLE)
        self.assertTrue(read_json(out)["failures"])

    def test_reproducible(self):
        code = self.separated_code()
        jobs = {
            'sample.json': ['sample', '--q', '5', '--N', '8', '--L', '20', '--seed', '11'],
            'greedy.json': ['greedy', '--q', '4', '--N', '6', '--t', '2', '--seed', '5', '--no-typical'],
            'cert.json': ['certify', '--code', code, '--K', '2', '--t', '2', '--gamma', '0.2'],
            'oracle.json': ['oracle', '--q', '3', '--N', '3', '--t', '2', '--gamma', '0.3', '--trials', '10'],
        }
        for name, argv in jobs.items():
            digests = []
            for run_id in range(2):
                out = self.path('{}_{}'.format(run_id, name))
                self.assertEqual(run(*(argv + ['--out', out])), EXIT_OK)
                digests.append(file_digest(out))
            self.assertEqual(digests[0], digests[1], name)
        digests = []
        for run_id in range(2):
            out = self.path('bounds_{}'.format(run_id))
            self.assertEqual(run('bounds', '--alpha', '2', '--points', '4', '--out', out), EXIT_OK)
            digests.append({f: file_digest(os.path.join(out, f)) for f in os.listdir(out)})
        self.assertEqual(digests[0], digests[1])
