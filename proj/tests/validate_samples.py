"""Validate every sample document against the shipped schema."""
import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
schema = json.loads((root / "schema" / "towerinv.schema.json").read_text())
validator = jsonschema.Draft202012Validator(schema)
failures = 0
for path in sorted((root / "samples").glob("*.json")):
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError:
        if "malformed" in path.name:
            print(f"ok   {path.name} (malformed on purpose)")
            continue
        raise
    errors = list(validator.iter_errors(doc))
    print(("ok   " if not errors else "FAIL ") + path.name)
    for e in errors[:3]:
        print("     ", e.message)
    failures += bool(errors)

rejected = [
    {"schemaVersion": 2, "type": "field", "field": {"cyclotomic": 3}},
    {"schemaVersion": 1, "type": "field", "field": {"sextic": 7}},
    {"schemaVersion": 1, "type": "tower", "kind": "spiral"},
    {"schemaVersion": 1, "type": "tower", "kind": "synthetic", "degrees": [1], "primes": [{"norm": 5, "e": [1]}]},
    {"schemaVersion": 1, "type": "config", "precisionBits": 32},
]
for doc in rejected:
    if validator.is_valid(doc):
        print("FAIL accepted", json.dumps(doc))
        failures += 1
sys.exit(1 if failures else 0)
