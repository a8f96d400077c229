"""The file format and the command-line workflow.

Runs the CLI as a subprocess: classify a table, compute the independent
oracle table, match them row by row, and show the cache behavior."""

import json
import os
import subprocess
import sys
import tempfile

workdir = tempfile.mkdtemp(prefix="gl2reps-demo-")
env = dict(os.environ, GL2REPS_CACHE=os.path.join(workdir, "cache"))


def run(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "gl2reps.cli", *args],
        capture_output=True, text=True, env=env,
    )
    return proc


table = os.path.join(workdir, "classify.json")
oracle = os.path.join(workdir, "oracle.json")

print("$ gl2reps classify --flavor laurent --p 2 --r 2 --out", table)
proc = run("classify", "--flavor", "laurent", "--p", "2", "--r", "2",
           "--out", table)
print(f"exit {proc.returncode}")

print()
print("$ gl2reps oracle --flavor laurent --p 2 --r 2 --out", oracle)
proc = run("oracle", "--flavor", "laurent", "--p", "2", "--r", "2",
           "--out", oracle)
print(f"exit {proc.returncode}")

print()
print("$ gl2reps verify --a classify.json --b oracle.json")
proc = run("verify", "--a", table, "--b", oracle)
print(proc.stdout.strip(), f"(exit {proc.returncode})")

print()
data = json.load(open(table))
print(f"file schema {data['schema_version']}, group order "
      f"{data['group_order']}, certified {data['certified']}")
print("a class entry:", data["classes"][1])
print("an irrep entry (truncated):", {
    "label": data["irreps"][5]["label"],
    "dim": data["irreps"][5]["dim"],
    "values[:2]": data["irreps"][5]["values"][:2],
})

print()
print("second classify run hits the cache:")
proc = run("classify", "--flavor", "laurent", "--p", "2", "--r", "2")
print(proc.stderr.strip() or "(no stderr)")

print()
print("exit codes: 0 ok, 2 uncertified table, 64 bad invocation,")
print("65 spec mismatch in verify")
proc = run("classify", "--p", "2", "--r", "9")
print(f"oversized request: '{proc.stderr.strip()}' -> exit {proc.returncode}")
