"""Runs every subcommand with --format json twice: output must be
byte-identical and must validate against its schema."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

cli, fixtures, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])

registry = Registry()
for p in schema_dir.glob("*.schema.json"):
    registry = registry.with_resource(p.name, Resource.from_contents(json.loads(p.read_text())))


def schema(name):
    return json.loads((schema_dir / f"{name}.schema.json").read_text())


tmp = pathlib.Path(tempfile.mkdtemp())
g5 = str(fixtures / "g5.json")
two = str(fixtures / "two_cycle.edges")
strat, dec = str(tmp / "s.json"), str(tmp / "d.json")
subprocess.run([cli, "--format", "json", "solve", g5, "--k", "6", "--strategy-out", strat], check=True,
               stdout=subprocess.DEVNULL)
subprocess.run([cli, "--format", "json", "-o", dec, "strategy-to-decomp", g5, strat, "--k", "6"], check=True)

cases = [
    (["gen", "gnst", "--n", "5", "--s", "const:2", "--t", "const:2"], "graph", 0),
    (["gen", "gnst", "--n", "8", "--s", "const:2", "--t", "const:2", "--summary"], "gadget_summary", 0),
    (["gen", "upclosure", "--height", "3"], "graph", 0),
    (["gen", "sibling", "--n", "2"], "graph", 0),
    (["solve", g5, "--k", "6"], "solve", 0),
    (["solve", g5, "--k", "5"], "solve", 0),
    (["width", g5, "--max", "8"], "width", 0),
    (["width", g5, "--max", "3"], "width", 1),
    (["strategy-to-decomp", g5, strat, "--k", "6"], "decomposition", 0),
    (["validate-decomp", g5, dec], "validation", 0),
    (["validate-decomp", two, str(fixtures / "two_cycle_bad.decomp.json")], "validation", 1),
    (["decomp-to-strategy", g5, dec], "strategy", 0),
    (["count-positions", g5, dec], "count_positions", 0),
    (["kelly", two], "kelly", 0),
    (["reduce", str(fixtures / "exists_x1.qdimacs")], "graph", 0),
    (["reduce", str(fixtures / "exists_x1.qdimacs"), "--summary"], "gadget_summary", 0),
    (["qbf-eval", str(fixtures / "forall_exists.qdimacs")], "qbf_eval", 0),
    (["verify-reduction", str(fixtures / "exists_x1.qdimacs")], "verify_reduction", 0),
]

failures = 0
for args, name, code in cases:
    runs = [subprocess.run([cli, "--format", "json", *args], capture_output=True) for _ in range(2)]
    label = " ".join(args)
    if runs[0].returncode != code:
        print(f"FAIL {label}: exit {runs[0].returncode}, expected {code}\n{runs[0].stderr.decode()}")
        failures += 1
        continue
    if runs[0].stdout != runs[1].stdout:
        print(f"FAIL {label}: output differs between identical runs")
        failures += 1
    try:
        jsonschema.Draft202012Validator(schema(name), registry=registry).validate(json.loads(runs[0].stdout))
        print(f"ok   {label} ({name})")
    except (jsonschema.ValidationError, json.JSONDecodeError) as e:
        print(f"FAIL {label}: {e}")
        failures += 1

sys.exit(1 if failures else 0)
