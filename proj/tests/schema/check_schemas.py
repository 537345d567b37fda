# Copyright 2026 The causality-kit Authors
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
"""Runs every causality-kit subcommand and validates inputs and outputs against the schemas."""

import argparse
import itertools
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
import referencing

BASE = "https://causality-kit.invalid/schemas/"


def load_registry(schema_dir):
    resources = []
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], referencing.Resource.from_contents(doc)))
    return referencing.Registry().with_resources(resources)


def nest(radices, leaf):
    def build(level, prefix):
        if level == len(radices):
            return leaf(prefix)
        return [build(level + 1, prefix + (i,)) for i in range(radices[level])]
    return build(0, ())


def xor_relay_table():
    # Settings and outcomes are bits; Alice's outcome is Bob's setting XOR Charlie's outcome.
    radices = [2, 2, 2, 2, 2, 2]  # settings A, B, C then outcomes A, B, C
    def p(idx):
        _, b, _, x, _, z = idx
        return 0.25 if x == b ^ z else 0.0
    scenario = {"parties": ["A", "B", "C"], "settings": [2, 2, 2], "outcomes": [2, 2, 2]}
    return {"scenario": scenario, "p": nest(radices, p)}


def guessing_game():
    scenario = {"parties": ["A", "B"], "settings": [2, 4], "outcomes": [2, 2]}
    def payoff(idx):
        a, s_b, x, y = idx
        b, b2 = divmod(s_b, 2)
        return "1" if (x == b if b2 == 0 else y == a) else "0"
    return {"scenario": scenario, "payoff": nest([2, 4, 2, 2], payoff),
            "setting_distribution": nest([2, 4], lambda _: "1/8")}


def z_instrument(name):
    slots = [{"label": name + "1", "dim": 2}, {"label": name + "2", "dim": 2}]
    outcomes = []
    for k in range(2):
        entries = [[0.0, 0.0] for _ in range(16)]
        d = 3 * k  # |k><k| on the input times |k><k| on the output
        entries[d * 4 + d] = [1.0, 0.0]
        outcomes.append({"slots": slots, "entries": entries})
    return {"party": {"name": name, "d_in": 2, "d_out": 2}, "outcomes": outcomes}


def with_forbidden_term(process):
    # Adds 0.01 * (I z I z), a term on A2 and B2 only.
    broken = json.loads(json.dumps(process))
    for i in range(16):
        sign = -1.0 if ((i >> 2) & 1) ^ (i & 1) else 1.0
        broken["entries"][i * 16 + i][0] += 0.01 * sign
    return broken


def maximally_mixed_pair():
    parties = [{"name": n, "d_in": 2, "d_out": 2} for n in "AB"]
    slots = [{"label": n + s, "dim": 2} for n in "AB" for s in "12"]
    entries = [[0.25 if r == c else 0.0, 0.0] for r, c in itertools.product(range(16), repeat=2)]
    return {"parties": parties, "slots": slots, "entries": entries}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--binary", required=True)
    parser.add_argument("--schemas", required=True, type=pathlib.Path)
    args = parser.parse_args()
    registry = load_registry(args.schemas)
    failures = []

    def check(doc, schema, what):
        validator = jsonschema.Draft202012Validator({"$ref": BASE + schema}, registry=registry)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        status = "ok" if not errors else "FAIL"
        print(f"{status} {what} against {schema}")
        for e in errors[:5]:
            print(f"    {list(e.path)}: {e.message[:200]}")
        if errors:
            failures.append(what)

    def check_rejects(doc, schema, what):
        validator = jsonschema.Draft202012Validator({"$ref": BASE + schema}, registry=registry)
        if validator.is_valid(doc):
            print(f"FAIL {what} accepted by {schema}")
            failures.append(what)
        else:
            print(f"ok {what} rejected by {schema}")

    check_rejects({"valid": True}, "validation-report.schema.json", "report without fields")
    check_rejects({"bound": 0.75}, "bound-report.schema.json", "numeric bound")
    check_rejects({"status": "feasible", "residual": 0, "iterations": 0, "blocks": [], "residual_log": [],
                   "certificate": {}}, "feasibility-report.schema.json", "empty certificate")
    check_rejects({"status": "certified-infeasible", "residual": 0, "iterations": 0, "blocks": [],
                   "residual_log": []}, "feasibility-report.schema.json", "infeasible without certificate")

    with tempfile.TemporaryDirectory() as tmp:
        work = pathlib.Path(tmp)

        def write(name, doc, schema):
            check(doc, schema, "input " + name)
            path = work / name
            path.write_text(json.dumps(doc))
            return str(path)

        def run(cmd, schema, expected_code):
            proc = subprocess.run([args.binary] + cmd, capture_output=True, text=True)
            what = "causality-kit " + " ".join(pathlib.Path(c).name if c.startswith(tmp) else c for c in cmd)
            if proc.returncode != expected_code:
                print(f"FAIL {what}: exit {proc.returncode}, expected {expected_code}\n{proc.stderr[:500]}")
                failures.append(what)
                return None
            try:
                doc = json.loads(proc.stdout)
            except json.JSONDecodeError as e:
                print(f"FAIL {what}: output is not JSON ({e})")
                failures.append(what)
                return None
            check(doc, schema, what)
            return doc

        matrices = {}
        for name in ["ocb", "ocb-tripartite", "switch", "activation"]:
            path = work / f"{name}.json"
            run(["reproduce", name, "--emit-matrix", str(path)], "pipeline-report.schema.json", 0)
            matrices[name] = json.loads(path.read_text())
            check(matrices[name], "process.schema.json", "emitted matrix " + name)

        ocb = write("ocb-in.json", matrices["ocb"], "process.schema.json")
        switch = write("switch-in.json", matrices["switch"], "process.schema.json")
        tri = write("tri-in.json", matrices["ocb-tripartite"], "process.schema.json")
        broken = write("broken.json", with_forbidden_term(matrices["ocb"]), "process.schema.json")
        mixed = write("mixed.json", maximally_mixed_pair(), "process.schema.json")
        table = write("relay.json", xor_relay_table(), "table.schema.json")
        game = write("game.json", guessing_game(), "game.schema.json")
        strategy = write("strategy.json",
                         {"parties": [[z_instrument("A")] * 2, [z_instrument("B")] * 2]},
                         "strategy.schema.json")

        run(["validate", ocb], "validation-report.schema.json", 0)
        run(["validate", broken], "validation-report.schema.json", 2)
        run(["signaling", ocb, "--from", "A"], "signaling-report.schema.json", 4)
        run(["signaling", tri, "--from", "A,B"], "signaling-report.schema.json", 0)
        run(["signaling", table, "--from", "A"], "signaling-report.schema.json", 0)
        run(["signaling", table, "--from", "B"], "signaling-report.schema.json", 4)
        probed = run(["probe", ocb, strategy], "table.schema.json", 0)
        if probed is not None:
            probed_path = write("probed.json", probed, "table.schema.json")
            run(["causal-test", probed_path], "membership-report.schema.json", 0)
        run(["causal-test", table], "membership-report.schema.json", 0)
        run(["causal-test", table, "--exact"], "membership-report.schema.json", 0)
        run(["causal-bound", game, "--exact"], "bound-report.schema.json", 0)
        run(["causal-bound", game], "bound-report.schema.json", 0)
        run(["sep-test", mixed], "feasibility-report.schema.json", 0)
        run(["sep-test", ocb, "--max-iterations", "100"], "feasibility-report.schema.json", 3)
        run(["ecs-test", switch], "feasibility-report.schema.json", 4)
        run(["ecs-test", switch, "--no-certificate", "--max-iterations", "20"], "feasibility-report.schema.json", 3)
        # Not extensibly separable, so the projections stall above the threshold.
        run(["ecs-test", tri, "--first", "C", "--max-iterations", "100"], "feasibility-report.schema.json", 3)
        run(["suite", "--criterion", "4"], "suite-report.schema.json", 0)

    print(f"{len(failures)} schema failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
