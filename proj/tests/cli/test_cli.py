# Copyright 2026 The cvxrelu Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the cvxrelu executable.

usage: test_cli.py <cvxrelu executable> <train report schema>
"""

import csv
import filecmp
import json
import subprocess
import sys
import tempfile
from pathlib import Path

EXE = sys.argv[1]
SCHEMA = json.loads(Path(sys.argv[2]).read_text())
failures = []


def run(*args, expect=0):
    p = subprocess.run([EXE, *map(str, args)], capture_output=True, text=True)
    if p.returncode != expect:
        failures.append(f"{' '.join(map(str, args))}: exit {p.returncode}, expected {expect}\n{p.stderr}")
    return p


def check(cond, what):
    if not cond:
        failures.append(what)


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def validate(report_path):
    try:
        import jsonschema
    except ImportError:
        print("jsonschema not installed; schema validation skipped")
        return
    try:
        jsonschema.validate(json.loads(Path(report_path).read_text()), SCHEMA)
    except jsonschema.ValidationError as e:
        failures.append(f"{report_path}: {e.message}")


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    # generated 1-D regression data, gap sweep m = 1..12
    run("gen", "--kind", "regression-1d", "--n", 10, "--seed", 3, "--output-dir", tmp / "d1")
    data = tmp / "d1" / "data.csv"
    run("gap-sweep", "--input", data, "--max-m", 12, "--output-dir", tmp / "gap")
    rows = read_csv(tmp / "gap" / "gap_sweep.csv")
    gaps = [float(r["gap"]) for r in rows]
    check([int(r["m"]) for r in rows] == list(range(1, 13)), f"gap sweep sizes {[r['m'] for r in rows]}")
    check(all(b <= a + 1e-9 for a, b in zip(gaps, gaps[1:])), f"gap not monotone: {gaps}")
    check(len(gaps) >= 11 and gaps[10] < 1e-5, f"gap at m = n+1: {gaps[10] if len(gaps) > 10 else None}")
    check((tmp / "gap" / "experiment.json").exists(), "experiment.json missing")

    # generator determinism
    for k in (1, 2):
        run("gen", "--hinge-mixture", "--n", 40, "--seed", 7, "--output-dir", tmp / f"h{k}")
    check(filecmp.cmp(tmp / "h1" / "data.csv", tmp / "h2" / "data.csv", shallow=False), "gen not deterministic")
    labels = {r["y"] for r in read_csv(tmp / "h1" / "data.csv")}
    check(labels <= {"1", "-1"}, f"hinge mixture labels {labels}")

    # closed form on non-whitened data
    run("gen", "--kind", "gaussian", "--n", 5, "--d", 8, "--seed", 1, "--output-dir", tmp / "g")
    run("train", "--mode", "closed-form", "--input", tmp / "g" / "data.csv", "--output-dir", tmp / "cf_bad", expect=2)

    # malformed CSV: exit 1 and the offending line in the message
    bad = tmp / "bad.csv"
    bad.write_text("f0,y\n1,2\n3,oops\n")
    p = run("train", "--mode", "cutting-plane", "--input", bad, "--output-dir", tmp / "bad", expect=1)
    check("line 3" in p.stderr, f"parse error message: {p.stderr!r}")

    # reports from several modes validate against the schema
    run("gen", "--kind", "whitened", "--n", 6, "--d", 9, "--seed", 2, "--output-dir", tmp / "w")
    wdata = tmp / "w" / "data.csv"
    for mode, extra in [("closed-form", ["--beta", "0.1"]), ("cutting-plane", []), ("spikefree", ["--beta", "0.1"]),
                        ("dictionary", ["--beta", "0.1"]), ("gd", ["--beta", "0.1", "--width", "6"])]:
        out = tmp / f"train_{mode}"
        run("train", "--mode", mode, "--input", wdata, "--output-dir", out, *extra)
        validate(out / "report.json")
        check((out / "model.json").exists(), f"{mode}: model.json missing")
    run("train", "--mode", "cutting-plane", "--input", data, "--output-dir", tmp / "cp1d")
    validate(tmp / "cp1d" / "report.json")
    check((tmp / "cp1d" / "history.csv").exists(), "history.csv missing")

    run("gen", "--hinge-mixture", "--n", 20, "--seed", 4, "--output-dir", tmp / "hm")
    run("train", "--mode", "cutting-plane", "--loss", "hinge", "--beta", "0.1", "--input", tmp / "hm" / "data.csv",
        "--output-dir", tmp / "hinge")
    validate(tmp / "hinge" / "report.json")

    run("gen", "--kind", "multiclass", "--n", 12, "--d", 4, "--seed", 5, "--output-dir", tmp / "mc")
    run("train", "--mode", "vector", "--beta", "0.1", "--input", tmp / "mc" / "data.csv", "--output-dir", tmp / "vec")
    validate(tmp / "vec" / "report.json")

    run("gen", "--kind", "images", "--n", 20, "--seed", 6, "--output-dir", tmp / "img")
    run("gen", "--kind", "images", "--n", 20, "--seed", 8, "--output-dir", tmp / "img_test")
    run("train", "--mode", "convex-rf", "--input", tmp / "img" / "images.csv", "--test-input",
        tmp / "img_test" / "images.csv", "--output-dir", tmp / "rf")
    validate(tmp / "rf" / "report.json")

    # remaining commands produce their artifacts
    run("whiten", "--input", tmp / "g" / "data.csv", "--output-dir", tmp / "wh")
    check((tmp / "wh" / "whitened.csv").exists(), "whitened.csv missing")
    run("spikefree", "--input", wdata, "--output-dir", tmp / "sf")
    check(json.loads((tmp / "sf" / "spikefree.json").read_text())["status"] == "certified-spike-free",
          "whitened data not certified spike-free")
    run("extremes", "--input", data, "--output-dir", tmp / "ext")
    check(len(read_csv(tmp / "ext" / "extremes.csv")) == 20, "1-D extremes count")
    run("kernel-compare", "--input", data, "--output-dir", tmp / "ker")
    kc = json.loads((tmp / "ker" / "kernel_compare.json").read_text())
    check(kc["adaptive_residual"] < 1e-6 and kc["ntk_second_difference"] > 1e-3, f"kernel compare {kc}")
    run("sample-geometry", "--input", tmp / "g" / "data.csv", "--count", 20, "--output-dir", tmp / "geo")
    check(len(read_csv(tmp / "geo" / "hull.csv")) == 5, "hull.csv rows")

    # experiment spec round trip through the file it wrote
    spec = json.loads((tmp / "gap" / "experiment.json").read_text())
    check(spec["command"] == "gap-sweep" and spec["max_m"] == 12, f"experiment spec {spec}")

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli end-to-end: ok")
