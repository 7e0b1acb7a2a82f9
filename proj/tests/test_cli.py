"""End-to-end checks of the edgelaw command-line tool.

usage: test_cli.py <edgelaw executable> <libedgelaw shared library>
"""
import csv
import ctypes
import io
import math
import os
import subprocess
import sys
import tempfile
import unittest

EXE = None
LIB = None


def run(*args, check=True):
    p = subprocess.run([EXE, *map(str, args)], capture_output=True, text=True)
    if check and p.returncode != 0:
        raise AssertionError(f"exit {p.returncode}: {p.stderr}")
    return p


def table(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def comments(text):
    return [ln for ln in text.splitlines() if ln.startswith("#")]


class Eval(unittest.TestCase):
    def test_row_count_and_header(self):
        out = run("eval", "--steps", 2, "--sigma", 0).stdout
        rows = table(out)
        self.assertEqual(len(rows), 2)
        self.assertEqual(list(rows[0].keys()), ["t", "sigma", "F_fredholm", "err_est"])
        self.assertTrue(any(c.startswith("# steps=2") for c in comments(out)))

    def test_monotone_and_sorted(self):
        rows = table(run("eval", "--t-min", -3, "--t-max", 2, "--steps", 6, "--sigma", 1, "--sigma", 0).stdout)
        keys = [(float(r["sigma"]), float(r["t"])) for r in rows]
        self.assertEqual(keys, sorted(keys))
        for s in (0.0, 1.0):
            f = [float(r["F_fredholm"]) for r in rows if float(r["sigma"]) == s]
            self.assertEqual(len(f), 6)
            self.assertTrue(all(b >= a for a, b in zip(f, f[1:])))

    def test_byte_for_byte(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "a.csv")
            run("eval", "--steps", 4, "--sigma", 0.5, "--out", path)
            with open(path, "rb") as f:
                first = f.read()
            run("eval", "--steps", 4, "--sigma", 0.5, "--out", path)
            with open(path, "rb") as f:
                self.assertEqual(f.read(), first)

    def test_scientific_round_trip(self):
        rows = table(run("eval", "--t-min", -2, "--t-max", 0, "--steps", 2, "--sigma", 0).stdout)
        text = rows[0]["F_fredholm"]
        self.assertIn("e", text)
        self.assertEqual(len(text.split("e")[0].replace(".", "").lstrip("-")), 17)
        self.assertAlmostEqual(float(text), 0.41322414250512, places=10)

    def test_exit_codes(self):
        self.assertEqual(run("eval", "--out", "/nonexistent/dir/x.csv", check=False).returncode, 2)
        self.assertEqual(run("eval", "--steps", 1, check=False).returncode, 3)
        self.assertEqual(run("eval", "--t-min", 2, "--t-max", 1, check=False).returncode, 3)
        self.assertEqual(run("eval", "--no-such-flag", check=False).returncode, 3)
        self.assertEqual(run("mc", "--tau", 2, "--trials", 2, check=False).returncode, 3)

    def test_config_file_and_override(self):
        with tempfile.TemporaryDirectory() as d:
            cfg = os.path.join(d, "run.cfg")
            with open(cfg, "w") as f:
                f.write("steps=3\nt-min=-1\nt-max=1\n")
            rows = table(run("--config", cfg, "eval", "--sigma", 0).stdout)
            self.assertEqual([float(r["t"]) for r in rows], [-1.0, 0.0, 1.0])
            rows = table(run("--config", cfg, "eval", "--sigma", 0, "--steps", 2).stdout)
            self.assertEqual(len(rows), 2)


class Tails(unittest.TestCase):
    def test_three_rows_per_point(self):
        out = run("tails", "--t-min", 6, "--t-max", 8, "--steps", 2, "--sigma", 6).stdout
        rows = table(out)
        self.assertEqual(len(rows), 6)
        self.assertEqual([r["regime"] for r in rows[:3]], ["thm2", "thm3", "left"])
        for r in rows:
            if r["regime"] == "thm3":
                self.assertEqual(r["valid"], "1")
                self.assertTrue(math.isfinite(float(r["rel_err"])))
                self.assertLess(abs(float(r["F_approx"]) - float(r["F_fredholm"])), 0.02)
            if r["regime"] == "left":
                self.assertEqual(r["valid"], "0")

    def test_in_and_out_of_window(self):
        rows = table(run("tails", "--regime", "thm2", "--t-min", 8, "--t-max", 12, "--steps", 2, "--sigma", 1).stdout)
        self.assertTrue(all(r["valid"] == "1" and math.isfinite(float(r["rel_err"])) for r in rows))
        rows = table(run("tails", "--regime", "thm2", "--t-min", 1, "--t-max", 2, "--steps", 2, "--sigma", 3).stdout)
        self.assertTrue(all(r["valid"] == "0" for r in rows))


class MonteCarlo(unittest.TestCase):
    def test_rows_seed_and_ks(self):
        args = ("mc", "--n", 40, "--trials", 25, "--seed", 11)
        out = run(*args).stdout
        rows = table(out)
        self.assertEqual(len(rows), 25)
        self.assertEqual(out, run(*args).stdout)
        self.assertNotEqual(out, run("mc", "--n", 40, "--trials", 25, "--seed", 12).stdout)
        summary = dict(c[len("# summary "):].split("=", 1) for c in comments(out) if c.startswith("# summary "))
        self.assertEqual(summary["reference"], "tracy_widom")
        samples = [float(r["sample"]) for r in rows]
        lib = ctypes.CDLL(LIB)
        lib.edgelaw_ks_distance.argtypes = [ctypes.POINTER(ctypes.c_double), ctypes.c_size_t, ctypes.c_int,
                                            ctypes.c_double, ctypes.POINTER(ctypes.c_double)]
        arr = (ctypes.c_double * len(samples))(*samples)
        ks = ctypes.c_double()
        self.assertEqual(lib.edgelaw_ks_distance(arr, len(samples), 1, 0.0, ctypes.byref(ks)), 0)
        self.assertLessEqual(abs(ks.value - float(summary["ks"])), 1e-12)


class TraceIdentity(unittest.TestCase):
    def test_report(self):
        rows = table(run("traceid", "--t", 1, "--sigma", 0.8).stdout)
        self.assertEqual([r["n"] for r in rows], ["1", "2"])
        for r in rows:
            self.assertLessEqual(float(r["abs_diff"]), 1e-5)
            for key in ("m", "L", "mx", "my"):
                self.assertGreater(float(r[key]), 0)

    def test_sigma_zero_exact(self):
        rows = table(run("traceid", "--t", 1, "--sigma", 0).stdout)
        # the Hermite direction collapses; only rounding separates the two routes
        for r in rows:
            self.assertLessEqual(float(r["abs_diff"]), 1e-15)


class Idpii(unittest.TestCase):
    def test_agreement(self):
        rows = table(run("idpii", "--t-min", -1, "--t-max", 1, "--steps", 3, "--sigma", 1).stdout)
        self.assertEqual(len(rows), 3)
        self.assertTrue(all(float(r["abs_diff"]) <= 1e-5 for r in rows))


class Selftest(unittest.TestCase):
    def test_full_suite_passes(self):
        p = run("selftest", check=False)
        self.assertEqual(p.returncode, 0, p.stdout + p.stderr)
        lines = [ln for ln in p.stdout.splitlines() if ln.startswith(("PASS", "FAIL"))]
        self.assertGreaterEqual(len(lines), 20)
        self.assertTrue(all(ln.startswith("PASS") and "tolerance" in ln for ln in lines))

    def test_perturbed_zeta_fails(self):
        p = run("selftest", "--zeta-perturbation", 1e-3, "--filter", "tails.left_tail", check=False)
        self.assertEqual(p.returncode, 1)
        self.assertIn("FAIL tails.left_tail", p.stdout)


if __name__ == "__main__":
    EXE, LIB = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
