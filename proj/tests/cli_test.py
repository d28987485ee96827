"""End-to-end checks of the command-line tool: JSON schema, determinism, exit codes."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

TOOL, SCHEMA, DATA = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
failures = []


def run(*args):
    return subprocess.run([TOOL, *args], capture_output=True, text=True)


def expect(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)


schema = json.loads(SCHEMA.read_text())
jsonschema.Draft202012Validator.check_schema(schema)
catalog = [m["name"] for m in json.loads(run("list", "--json").stdout)]
expect(len(catalog) >= 8, "catalog lists at least eight metrics")

for name in catalog:
    for strategy in ("diagonal", "ldl", "numeric"):
        r = run("analyze", name, "--strategy", strategy, "--json", "--points", "6", "--timing")
        if strategy == "diagonal" and name == "sheared-plane":
            expect(r.returncode == 3, f"{name} diagonal rejected as input error")
            continue
        try:
            jsonschema.validate(json.loads(r.stdout), schema)
            valid = True
        except (json.JSONDecodeError, jsonschema.ValidationError) as e:
            print(e)
            valid = False
        expect(valid and r.returncode == 0, f"{name} {strategy}: schema-valid report, exit 0")

report = json.loads(run("analyze", "sphere2", "--json").stdout)
names = [row["name"] for row in report["identities"]]
expect(len(names) == len(set(names)), "identity names are unique")
expect("timing" not in report, "timing absent without --timing")

first = run("analyze", "schwarzschild", "--seed", "7", "--json").stdout
second = run("analyze", "schwarzschild", "--seed", "7", "--json").stdout
expect(first == second and first, "identical invocations give identical bytes")
expect(run("analyze", "schwarzschild", "--seed", "8", "--json").stdout != first,
       "a different seed changes the report")

expect(run("check", "euclidean3-cartesian").returncode == 0, "check exits 0 on a flat metric")
expect(run("check", str(DATA / "torus.metric")).returncode == 0, "metric file loads and passes")
expect(run("check", "no-such-metric").returncode == 3, "unknown metric is an input error")
expect(run("analyze", "sphere2", "--strategy", "bogus").returncode == 3, "bad flag value exits 3")
expect(run("check", "sphere2", "--tol-scale", "1e-30").returncode == 2,
       "tightened tolerances give an identity failure")

factor = json.loads(run("factor", "minkowski", "--point", "1,0,0,0", "--json").stdout)
expect(factor["v"][3][3] == [0, 1] and factor["v"][0][0] == [1, 0] and factor["residual"] == 0,
       "factor minkowski gives V = diag(1, 1, 1, i)")

with tempfile.TemporaryDirectory() as tmp:
    bad = Path(tmp) / "bad.metric"
    bad.write_text("dim 2\ncoords x y\nsignature 2 0\ng 1 1 = 1\ng 2 2 = 1 +\n")
    r = run("check", str(bad))
    expect(r.returncode == 3 and ":5:" in r.stderr, "parse error names the line")
    singular = Path(tmp) / "complex.metric"
    singular.write_text("dim 1\ncoords x\nsignature 1 0\ng 1 1 = 2 + sqrt(x)\n")
    expect(run("check", str(singular)).returncode == 4, "complex metric component is a numeric fault")
    csv = Path(tmp) / "g.csv"
    r = run("geodesic", "sphere2", "--steps", "50", "--out", str(csv))
    rows = csv.read_text().splitlines()
    expect(r.returncode == 0 and len(rows) == 52, "geodesic writes a CSV with one row per step")

sys.exit(1 if failures else 0)
