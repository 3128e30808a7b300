"""Run CLI commands with --json and validate each report against the schema."""
import json
import subprocess
import sys

import jsonschema

COMMANDS = [
    ["solve", "-A", "2", "1", "1"],
    ["solve", "-A", "8", "5", "4", "--scale", "1/2"],
    ["solve", "-A", "1/4"],
    ["solve", "-A", "inf"],
    ["solve", "-A", "1", "0", "inf"],
    ["solve", "-A", "1/20", "19/20", "1/20"],
    ["classify", "-A", "1/4", "1/4", "0"],
    ["bounds", "-A", "2", "1", "4"],
    ["dual", "-A", "4", "5/2", "2"],
    ["recognize", "5/7"],
    ["recognize", "0.123"],
    ["search", "--max-den", "2", "--max-num", "3", "--dedupe"],
    ["search", "--max-den", "4", "--max-num", "4", "--equal-diagonal"],
    ["verify-identities"],
    ["verify-identities", "--name", "m27", "--high-precision"],
    ["expand", "--form", "chi34", "--order", "5"],
    ["ceff-estimate", "--form", "chi25"],
]


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft7Validator.check_schema(schema)
    validator = jsonschema.Draft7Validator(schema)
    failures = 0
    for args in COMMANDS:
        for header in ([], ["--no-header"]):
            proc = subprocess.run([binary, *args, "--json", *header], capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"FAIL {' '.join(args)}: exit {proc.returncode}: {proc.stderr.strip()}")
                failures += 1
                continue
            doc = json.loads(proc.stdout)
            errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
            if errors:
                failures += 1
                for e in errors[:5]:
                    print(f"FAIL {' '.join(args)}: {list(e.path)}: {e.message}")
            elif header and "version" in doc:
                failures += 1
                print(f"FAIL {' '.join(args)}: version present with --no-header")
            else:
                print(f"ok   {' '.join(args + header)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
