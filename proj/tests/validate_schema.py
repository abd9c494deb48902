#!/usr/bin/env python3
"""Validate fillinglab JSON exports against schema/report.schema.json.

usage: validate_schema.py SCHEMA FILE_OR_DIR...
"""
import json
import pathlib
import sys

import jsonschema


def main(argv):
    if len(argv) < 3:
        print(__doc__.strip())
        return 2
    schema = json.loads(pathlib.Path(argv[1]).read_text())
    jsonschema.Draft7Validator.check_schema(schema)
    validator = jsonschema.Draft7Validator(schema)
    files = []
    for arg in argv[2:]:
        p = pathlib.Path(arg)
        files.extend(sorted(p.glob("*.json")) if p.is_dir() else [p])
    if not files:
        print("no JSON files found")
        return 1
    bad = 0
    for f in files:
        doc = json.loads(f.read_text())
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors[:5]:
            print(f"{f}: {'/'.join(map(str, e.path))}: {e.message}")
        bad += bool(errors)
        if not errors:
            print(f"{f}: ok ({doc['kind']})")
        # parse -> serialize must be idempotent on the canonical dump
        once = json.dumps(doc, indent=2)
        if json.dumps(json.loads(once), indent=2) != once:
            print(f"{f}: serialization not idempotent")
            bad += 1
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
