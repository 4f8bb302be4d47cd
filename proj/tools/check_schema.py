#!/usr/bin/env python3
"""Run the CLI over the demo inputs in JSON mode and validate every report against the schema."""
import json
import subprocess
import sys
from pathlib import Path

import jsonschema


def runs(demo: Path):
    yield ["test-circuit", str(demo / "x1x2.circ"), "--k", "2", "--seed", "1"]
    yield ["test-circuit", str(demo / "square.circ"), "--k", "2", "--seed", "1", "--timing"]
    yield ["test-circuit", str(demo / "mixed.circ"), "--k", "3", "--p", "3", "--pit", "modpoly", "--seed", "2"]
    yield ["test-circuit", str(demo / "x1x2.circ"), "--k", "2", "--mode", "det"]
    yield ["test-circuit", str(demo / "mixed.circ"), "--k", "3", "--mode", "oracle", "--seed", "3"]
    yield ["test-structured", str(demo / "product.poly"), "--k", "3"]
    yield ["test-structured", str(demo / "product.poly"), "--k", "3", "--mode", "structured-rand", "--reps", "auto", "--seed", "4"]
    yield ["kpath", str(demo / "triangle.graph"), "--k", "3", "--seed", "5"]
    yield ["oracle", str(demo / "triangle_k3.circ"), "--k", "3", "--clique", "1,2,3"]


def main() -> int:
    cli, schema_path, demo = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    validator = jsonschema.Draft202012Validator(json.loads(schema_path.read_text()))
    failures = 0
    for args in runs(demo):
        proc = subprocess.run([cli, *args, "--format", "json"], capture_output=True, text=True)
        if proc.returncode not in (0, 1):
            print(f"FAIL {' '.join(args)}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        for e in errors:
            print(f"FAIL {' '.join(args)}: {e.json_path}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {' '.join(args)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
