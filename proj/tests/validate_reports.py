"""Validate catalog and negative-control reports against the report schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main(cli, data):
    data = pathlib.Path(data)
    schema = json.loads((data / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for path in sorted(data.glob("*/*.scn")):
        run = subprocess.run([cli, "verify", str(path), "--count", "32"], capture_output=True, text=True)
        if run.returncode not in (0, 1, 3):
            print(f"{path.name}: exit {run.returncode}: {run.stderr.strip()}")
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(run.stdout)))
        for e in errors:
            print(f"{path.name}: {'/'.join(map(str, e.path))}: {e.message}")
        failures += bool(errors)
        print(f"{path.name}: exit {run.returncode}, {len(errors)} schema errors")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
