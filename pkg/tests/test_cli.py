import json
import logging
import os
import subprocess
import sys
import tempfile
import unittest

from click.testing import CliRunner

from slopegaps import __version__
from slopegaps.cli import cli


def run_pkg_main(*args: str) -> subprocess.CompletedProcess:
    cmd = [sys.executable, "-m", "slopegaps", *args]
    return subprocess.run(cmd, capture_output=True, text=True)


class TestCommands(unittest.TestCase):
    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.runner = CliRunner()

    def invoke(self, *args):
        result = self.runner.invoke(cli, list(args))
        self.logger.info("%s -> %d", " ".join(args), result.exit_code)
        return result

    def test_help_and_version(self):
        result = self.invoke("--help")
        self.assertEqual(result.exit_code, 0)
        self.assertIn("distribution", result.output)
        result = self.invoke("--version")
        self.assertIn(__version__, result.output)

    def test_volume(self):
        result = self.invoke("volume", "--n", "7")
        self.assertEqual(result.exit_code, 0, result.output)
        lines = result.output.splitlines()
        self.assertTrue(lines[0].startswith("computed "))
        self.assertAlmostEqual(float(lines[0].split()[1]), 8.4597, places=3)
        self.assertLess(float(lines[2].split()[-1]), 1e-5)

    def test_volume_json(self):
        result = self.invoke("volume", "--n", "5", "--json")
        payload = json.loads(result.output)
        self.assertEqual(payload["n"], 5)
        self.assertLess(payload["relative_error"], 1e-5)

    def test_nondiff(self):
        result = self.invoke("nondiff", "--n", "4")
        self.assertEqual(result.exit_code, 0, result.output)
        lines = result.output.splitlines()
        self.assertEqual(lines[0], "kink count 7")
        self.assertEqual(lines[1], "bounds -10.2 .. 11")
        self.assertEqual(len(lines), 9)

    def test_rt_eval(self):
        result = self.invoke("rt-eval", "--n", "5", "--component", "omega2", "--x", "0.5", "--y", "0.8")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertAlmostEqual(float(result.output), 2.5, places=12)
        self.assertTrue(result.output.endswith("\n"))

    def test_rt_eval_outside(self):
        result = self.invoke("rt-eval", "--n", "5", "--x", "2.0", "--y", "0.5")
        self.assertEqual(result.exit_code, 1)
        self.assertIn("error", result.output)

    def test_distribution_is_reproducible(self):
        args = ("distribution", "--n", "6", "--t-min", "1", "--t-max", "8", "--samples", "71")
        first = self.invoke(*args)
        second = self.invoke(*args)
        self.assertEqual(first.exit_code, 0, first.output)
        self.assertEqual(first.output, second.output)
        lines = first.output.splitlines()
        self.assertEqual(lines[0], "t,pdf,cdf")
        self.assertEqual(len(lines), 72)

    def test_usage_errors(self):
        self.assertEqual(self.invoke("volume", "--n", "2").exit_code, 2)
        self.assertEqual(self.invoke("distribution", "--n", "5", "--format", "xml").exit_code, 2)
        self.assertEqual(self.invoke("distribution", "--n", "5", "--t-min", "4", "--t-max", "2").exit_code, 2)
        self.assertEqual(self.invoke("volume").exit_code, 2)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "geometry.json")
            result = self.invoke("geometry", "--n", "5", "--json", "--out", path)
            self.assertEqual(result.exit_code, 0, result.output)
            with open(path, encoding="utf-8") as stream:
                payload = json.load(stream)
        self.assertEqual(payload["n"], 5)
        self.assertEqual(len(payload["h"]), 3)

    def test_section_text(self):
        result = self.invoke("section", "--n", "4")
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn("total area", result.output)

    def test_verify_html(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "report.html")
            result = self.invoke("verify", "--n", "4", "--format", "html", "--out", path)
            self.assertIn(result.exit_code, (0, 1), result.output)
            with open(path, encoding="utf-8") as stream:
                report = stream.read()
        self.assertTrue(report.startswith("<!DOCTYPE html>"))
        self.assertIn("covolume", report)


class TestModuleEntry(unittest.TestCase):
    def test_pkg_main_help(self):
        cp = run_pkg_main("--help")
        self.assertEqual(cp.returncode, 0, cp.stderr)
        self.assertIn("Slope gap distribution", cp.stdout)

    def test_pkg_main_rt_eval(self):
        cp = run_pkg_main("rt-eval", "--n", "7", "--x", "1", "--y", "1")
        self.assertEqual(cp.returncode, 0, cp.stderr)
        self.assertAlmostEqual(float(cp.stdout.strip()), 1.0)
