#!/usr/bin/env python3
"""Run `delin --json` over the golden systems and validate against docs/schema.json.

usage: check_schema.py DELIN SOURCE_DIR
"""
import json
import subprocess
import sys
from pathlib import Path

import jsonschema

delin, root = sys.argv[1], Path(sys.argv[2])
schema = json.loads((root / "docs/schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)
sysdir = root / "systems"

runs = [
    (["rif", "ez.sys"], 0),
    (["rif", "liouville.sys"], 0),
    (["initialdata", "kp.sys"], 0),
    (["hilbert", "ez.sys"], 0),
    (["detsys", "ode3.sys"], 0),
    (["lgmtest", "lgm4.sys"], 0),
    (["lgmtest", "ode3.sys"], 0),
    (["preequiv", "kp.sys"], 1),
    (["preequiv", "burgers.sys", "--fallback-s"], 1),
    (["mapde", "ode3.sys"], 0),
    (["mapde", "ode3.sys", "--normalize-target"], 0),
    (["mapde", "burgers.sys"], 1),
    (["mapde", "ode3.sys", "--budget", "0:1"], 2),
    (["verifymap", "potburgers_minus.sys", "potburgers_target.sys"], 0),
    (["verifymap", "potburgers.sys", "potburgers_target.sys"], 1),
    (["rif", "missing.sys"], 3),
]

failures = 0
for args, want in runs:
    rest = [str(sysdir / a) if a.endswith(".sys") else a for a in args[2:]]
    cmd = [delin, args[0], str(sysdir / args[1]), *rest, "--json"]
    p = subprocess.run(cmd, capture_output=True, text=True)
    label = " ".join(args)
    try:
        doc = json.loads(p.stdout)
        validator.validate(doc)
        if p.returncode != want or doc["exit"] != want:
            raise ValueError(f"exit {p.returncode}, expected {want}")
        print(f"ok    {label}")
    except (ValueError, jsonschema.ValidationError) as e:
        failures += 1
        print(f"FAIL  {label}: {str(e).splitlines()[0]}")
        print(p.stderr[-2000:])
sys.exit(1 if failures else 0)
