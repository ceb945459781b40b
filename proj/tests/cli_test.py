"""End-to-end checks of the clarify command-line tool."""
import json
import os
import subprocess
import sys
import tempfile
import unittest

CLI = sys.argv.pop(1)
FIXTURES = sys.argv.pop(1)
SCHEMA = sys.argv.pop(1)


def run(*args, stdin=None):
    return subprocess.run([CLI, *args], input=stdin, capture_output=True, text=True, timeout=120)


def fixture(name):
    return os.path.join(FIXTURES, name)


class Cli(unittest.TestCase):
    def test_help(self):
        r = run("--help")
        self.assertEqual(r.returncode, 0)
        for flag in ("--input", "--color-scheme", "--map-mode", "--dash-styles", "--output"):
            self.assertIn(flag, r.stdout)

    def test_rgb_dot_colors_every_edge(self):
        r = run("--input", fixture("karate.dot"))
        self.assertEqual(r.returncode, 0, r.stderr)
        colored = [l for l in r.stdout.splitlines() if "--" in l and '"color"="#' in l]
        self.assertEqual(len(colored), 78)

    def test_stdin_input(self):
        with open(fixture("cross.dot")) as f:
            r = run("--input", "-", stdin=f.read())
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(r.stdout.count('"color"="#000000"'), 2)

    def test_dot_output_is_deterministic(self):
        a = run("--input", fixture("random_50_100.dot"), "--seed", "7")
        b = run("--input", fixture("random_50_100.dot"), "--seed", "7")
        self.assertEqual(a.returncode, 0, a.stderr)
        self.assertEqual(a.stdout, b.stdout)

    def test_gray_svg_with_dashes(self):
        r = run("--input", fixture("karate.dot"), "--color-scheme", "gray", "--dash-styles", "--output", "svg")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue(r.stdout.lstrip().startswith("<svg") or r.stdout.lstrip().startswith("<?xml"))
        self.assertEqual(r.stdout.count("<path"), 78)
        self.assertIn("stroke-dasharray", r.stdout)

    def test_map_mode_dot(self):
        r = run("--input", fixture("regions.map"), "--map-mode")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(r.stdout.count('"fillcolor"='), 5)

    def test_palette_file(self):
        r = run("--input", fixture("karate.dot"), "--color-scheme", "palette:" + fixture("three.palette"), "--output", "json")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue(json.loads(r.stdout)["color_scheme"].startswith("palette:"))

    def test_errors_exit_with_one(self):
        cases = [
            ("--input", "/nonexistent/graph.dot"),
            ("--input", fixture("karate.dot"), "--color-scheme", "neon"),
            ("--input", fixture("karate.dot"), "--epsilon", "0"),
            ("--input", fixture("karate.dot"), "--color-scheme", "gray", "--lightness", "80,100"),
            ("--input", fixture("regions.map"), "--map-mode", "--output", "svg"),
        ]
        for args in cases:
            with self.subTest(args=args):
                r = run(*args)
                self.assertEqual(r.returncode, 1, r.stderr)
                self.assertTrue(r.stderr.startswith("clarify: "), r.stderr)
                self.assertEqual(r.stdout, "")

    def test_malformed_dot_exits_with_one(self):
        with tempfile.NamedTemporaryFile("w", suffix=".dot", delete=False) as f:
            f.write('graph { a [pos="0,0"]; b; a -- b; }\n')
        try:
            r = run("--input", f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(r.returncode, 1)
        self.assertIn("b", r.stderr)


class Schema(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        try:
            import jsonschema
        except ImportError:
            raise unittest.SkipTest("jsonschema is not installed")
        with open(SCHEMA) as f:
            cls.validator = jsonschema.Draft7Validator(json.load(f))

    def check(self, *args):
        r = run(*args, "--output", "json")
        self.assertEqual(r.returncode, 0, r.stderr)
        report = json.loads(r.stdout)
        errors = [e.message for e in self.validator.iter_errors(report)]
        self.assertEqual(errors, [])
        return report

    def test_reports_match_schema(self):
        self.check("--input", fixture("cross.dot"))
        self.check("--input", fixture("karate.dot"), "--color-scheme", "gray")
        self.check("--input", fixture("karate.dot"), "--color-scheme", "palette:Dark2_8")
        self.check("--input", fixture("spline.dot"), "--no-c3")
        self.check("--input", fixture("regions.map"), "--map-mode")

    def test_lab_report(self):
        report = self.check("--input", fixture("karate.dot"), "--color-scheme", "lab", "--lightness", "80,100")
        for c in report["colors"]:
            self.assertGreaterEqual(c["coords"][0], 80)
            self.assertLessEqual(c["coords"][0], 100)


if __name__ == "__main__":
    unittest.main()
