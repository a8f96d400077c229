"""TableFileV1: the on-disk JSON format for character tables, plus the
table cache.

Layout (schema_version 1):

    {
      "schema_version": 1,
      "spec": {"flavor": "padic", "p": 2, "r": 2},
      "group_order": 96,
      "certified": true,
      "classes": [{"rep": ["1", "0", "0", "1"], "size": 1}, ...],
      "irreps": [{"label": "...", "dim": 1,
                  "values": [[re, im], ...]}, ...]
    }

Ring elements are serialized as strings: plain residues for the padic
flavor ("5"), polynomial notation for the power-series flavor
("1+t^2").  Floats are emitted by json in shortest-round-trip form, so
a write/read cycle reproduces every value bit for bit.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass

import numpy as np

from .ring import RingSpec, ring_make
from .matgroup import atomic_write_json

SCHEMA_VERSION = 1

DEFAULT_CACHE_ENV = "GL2REPS_CACHE"
DEFAULT_CACHE_DIR = ".gl2reps-cache"


def ring_elem_to_str(ring, code):
    if ring.spec.flavor == "padic":
        return str(code)
    digits = ring._digits[code]
    terms = []
    for i, d in enumerate(digits):
        if d == 0:
            continue
        if i == 0:
            terms.append(str(d))
        else:
            power = "t" if i == 1 else f"t^{i}"
            terms.append(power if d == 1 else f"{d}{power}")
    return "+".join(terms) if terms else "0"


_TERM_RE = re.compile(r"^(\d+)?(t(?:\^(\d+))?)?$")


def ring_elem_from_str(ring, text):
    if ring.spec.flavor == "padic":
        value = int(text)
        if not 0 <= value < ring.size:
            raise ValueError(f"residue {text} out of range")
        return value
    digits = [0] * ring.r
    if text.strip() == "0":
        return 0
    for term in text.split("+"):
        m = _TERM_RE.match(term.strip())
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"bad ring element string {text!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        if m.group(2) is None:
            power = 0
        else:
            power = int(m.group(3)) if m.group(3) else 1
        if power >= ring.r or not 0 <= coeff < ring.p:
            raise ValueError(f"bad ring element string {text!r}")
        digits[power] = (digits[power] + coeff) % ring.p
    return ring._encode(digits)


def table_to_jsonable(table, certified=True):
    ring = ring_make(table.spec)
    return {
        "schema_version": SCHEMA_VERSION,
        "spec": {
            "flavor": table.spec.flavor,
            "p": table.spec.p,
            "r": table.spec.r,
        },
        "group_order": int(sum(table.classes.sizes)),
        "certified": bool(certified),
        "classes": [
            {
                "rep": [ring_elem_to_str(ring, e) for e in rep],
                "size": int(size),
            }
            for rep, size in zip(table.classes.reps, table.classes.sizes)
        ],
        "irreps": [
            {
                "label": rec.label,
                "dim": int(rec.dim),
                "values": [[float(v.real), float(v.imag)] for v in rec.chi.values],
            }
            for rec in table.irreps
        ],
    }


@dataclass
class LoadedTable:
    """A table file parsed back into memory (class data as matrices and
    sizes, values as a complex matrix)."""

    spec: RingSpec
    group_order: int
    certified: bool
    class_reps: list
    sizes: list
    labels: list
    dims: list
    values: np.ndarray


def table_from_jsonable(data):
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("unsupported schema_version")
    spec = RingSpec(**data["spec"])
    ring = ring_make(spec)
    class_reps = [
        tuple(ring_elem_from_str(ring, s) for s in entry["rep"])
        for entry in data["classes"]
    ]
    sizes = [int(entry["size"]) for entry in data["classes"]]
    n_classes = len(class_reps)
    labels, dims, rows = [], [], []
    for entry in data["irreps"]:
        if len(entry["values"]) != n_classes:
            raise ValueError("row length does not match the class count")
        labels.append(entry["label"])
        dims.append(int(entry["dim"]))
        rows.append([complex(re_, im_) for re_, im_ in entry["values"]])
    values = np.array(rows) if rows else np.zeros((0, n_classes), dtype=complex)
    return LoadedTable(
        spec=spec,
        group_order=int(data["group_order"]),
        certified=bool(data.get("certified", True)),
        class_reps=class_reps,
        sizes=sizes,
        labels=labels,
        dims=dims,
        values=values,
    )


def write_table(path, table, certified=True):
    atomic_write_json(path, table_to_jsonable(table, certified=certified))


def read_table(path):
    with open(path) as fh:
        return table_from_jsonable(json.load(fh))


# table cache


def cache_dir_from_env():
    return os.environ.get(DEFAULT_CACHE_ENV, DEFAULT_CACHE_DIR)


def table_cache_path(spec, cache_dir=None):
    cache_dir = cache_dir or cache_dir_from_env()
    name = f"table-{spec.flavor}-p{spec.p}-r{spec.r}-v{SCHEMA_VERSION}.json"
    return os.path.join(cache_dir, name)


def load_cached_table(spec, cache_dir=None):
    """The cached jsonable dict for a spec, or None.  Entries written
    under a different schema version are ignored."""
    path = table_cache_path(spec, cache_dir)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if data.get("schema_version") != SCHEMA_VERSION:
        return None
    if not data.get("certified", False):
        return None
    return data


def store_cached_table(spec, jsonable, cache_dir=None):
    atomic_write_json(table_cache_path(spec, cache_dir), jsonable)
