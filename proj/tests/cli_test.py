"""End-to-end checks of the gradval command line: exit codes, report shape, byte stability."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

TOOL = sys.argv[1] if len(sys.argv) > 1 else "build/gradval"
CORPUS = sys.argv[2] if len(sys.argv) > 2 else "corpus"
del sys.argv[1:]

EXAMPLES = ["gvalex", "triangular-valuation", "m2-full", "quaternion", "quaternion-matrix",
            "twisted-sqrt", "gsimple-not-simple", "delta2-order"]


def run(*args, env=None):
    full_env = dict(os.environ, GRADVAL_CORPUS=CORPUS)
    full_env.pop("GRADVAL_SLOW", None)
    if env:
        full_env.update(env)
    return subprocess.run([TOOL, *args], capture_output=True, text=True, env=full_env)


def scenario(name):
    return os.path.join(CORPUS, name + ".toml")


class Cli(unittest.TestCase):
    def test_reproduce_every_example(self):
        for name in EXAMPLES:
            with self.subTest(name=name):
                r = run("reproduce", name, "--report", "json")
                self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
                report = json.loads(r.stdout)
                self.assertEqual(report["verdict"], "pass")
                self.assertEqual(report["scenario"], name)

    def test_unknown_example(self):
        r = run("reproduce", "nope")
        self.assertEqual(r.returncode, 3)
        self.assertIn("UnknownExample", r.stderr)

    def test_json_is_byte_stable(self):
        a = run("check", scenario("m2-full"), "--report", "json")
        b = run("check", scenario("m2-full"), "--report", "json")
        self.assertEqual(a.returncode, 0)
        self.assertEqual(a.stdout, b.stdout)
        report = json.loads(a.stdout)
        self.assertEqual(report["schema"], 1)
        self.assertNotIn("timing", report)
        for key in ("tool", "version", "scenario", "seed", "checks", "summary", "verdict"):
            self.assertIn(key, report)

    def test_seed_keeps_verdicts(self):
        for name in ("m2-full", "quaternion", "gvalex"):
            a = json.loads(run("check", scenario(name), "--report", "json").stdout)
            b = json.loads(run("check", scenario(name), "--report", "json", "--seed", "77").stdout)
            self.assertEqual([(c["id"], c["status"]) for c in a["checks"]],
                             [(c["id"], c["status"]) for c in b["checks"]])

    def test_failing_checks_exit_2(self):
        r = run("check", scenario("gvalex"), "--only", "axioms")
        self.assertEqual(r.returncode, 2)
        self.assertIn("canonical-sums", r.stdout)

    def test_load_errors_exit_3(self):
        self.assertEqual(run("check", scenario("does-not-exist")).returncode, 3)
        with tempfile.NamedTemporaryFile("w", suffix=".toml", delete=False) as f:
            f.write('[field]\nkind = "rationals"\n[groupoid]\nkind = "delta"\nn = 2\n'
                    '[twist]\nalpha = [["e12", "e21", "0"]]\n')
            path = f.name
        try:
            r = run("check", path)
            self.assertEqual(r.returncode, 3)
            self.assertIn("twist value must be nonzero", r.stderr)
        finally:
            os.unlink(path)
        self.assertEqual(run("check", scenario("m2-full"), "--only", "bogus").returncode, 3)

    def test_eval(self):
        r = run("eval", scenario("m2-full"), "25*e11 + 1/5*e12 + 3*e22")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(r.stdout.strip(), "[e11]: (e11, -1)")
        self.assertEqual(run("eval", scenario("m2-full"), "e99").returncode, 3)

    def test_gamma(self):
        r = run("gamma", scenario("gvalex"))
        self.assertEqual(r.returncode, 0)
        self.assertIn("Gamma is not a group", r.stdout)
        r = run("gamma", scenario("m2-full"))
        self.assertIn("Gamma is a group", r.stdout)

    def test_list(self):
        r = run("list")
        self.assertEqual(r.returncode, 0)
        for name in EXAMPLES:
            self.assertIn(name, r.stdout)

    def test_slow_env(self):
        r = run("check", scenario("quaternion"), "--only", "twist", "--report", "json",
                env={"GRADVAL_SLOW": "1"})
        self.assertTrue(json.loads(r.stdout)["slow"])

    def test_text_report(self):
        r = run("check", scenario("quaternion"), "--report", "text")
        self.assertEqual(r.returncode, 0)
        self.assertIn("PASS", r.stdout)
        self.assertIn("result:", r.stdout)


if __name__ == "__main__":
    unittest.main(verbosity=2)
