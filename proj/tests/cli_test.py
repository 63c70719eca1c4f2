"""End-to-end checks of the foarith command line. Usage: cli_test.py <foarith binary>"""

import json
import subprocess
import sys
import tempfile
import unittest

BIN = None


def run(*args, stdin=None):
    return subprocess.run([BIN, *args], input=stdin, capture_output=True, text=True)


class Cli(unittest.TestCase):
    def test_unknown_suite_is_usage_error(self):
        self.assertEqual(run("verify", "nosuch").returncode, 2)

    def test_unknown_parameter_is_usage_error(self):
        self.assertEqual(run("verify", "psid", "--bogus", "3").returncode, 2)

    def test_missing_subcommand_is_usage_error(self):
        self.assertEqual(run().returncode, 2)

    def test_psid_example(self):
        r = run("verify", "psid", "--d", "2", "--m", "2")
        self.assertEqual(r.returncode, 0, r.stderr)
        rep = json.loads(r.stdout)
        self.assertEqual(rep["checked"], 16)
        self.assertEqual(rep["mismatches"], [])

    def test_reports_are_deterministic(self):
        args = ("verify", "chi", "--k", "2", "--trials", "40", "--seed", "7", "--no-time")
        a, b = run(*args), run(*args)
        self.assertEqual(a.returncode, 0, a.stderr)
        self.assertEqual(a.stdout, b.stdout)
        c = run("verify", "chi", "--k", "2", "--trials", "40", "--seed", "8", "--no-time")
        self.assertNotEqual(a.stdout, c.stdout)

    def test_wall_time_present_by_default(self):
        rep = json.loads(run("verify", "rank").stdout)
        self.assertIn("wall_time_s", rep)

    def test_eval_modes_agree_on_stdin(self):
        structure = "structure\nuniverse 3\nrelation E 2\n0 1\n1 2\nend\n"
        with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as phi:
            phi.write("exists x. exists y. exists z. (E(x,y) & E(y,z))")
        outs = {run("eval", "--phi", phi.name, "--in", "-", "--mode", m, stdin=structure).stdout.strip()
                for m in ("naive", "memo", "macro")}
        self.assertEqual(len(outs), 1)
        self.assertIn("true", outs.pop())

    def test_tuparith_fixture(self):
        r = run("tuparith", "--n", "10", "--s", "2", "--op", "mul", "--x", "0,4", "--y", "0,4")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("[1,6]", r.stdout.replace(" ", ""))


if __name__ == "__main__":
    BIN = sys.argv.pop(1)
    unittest.main()
