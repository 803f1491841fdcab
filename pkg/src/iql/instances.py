"""Loading instance and script files (JSON)."""

from __future__ import annotations

import hashlib
import json
import os
from importlib import resources
from pathlib import Path

from .gaussian import GaussianRational
from .hilbert import DEFAULT_MAX_ELEMENTS, generate_lattice
from .lattice import LatticeError, PropertyLattice

CAP_ENV = "IQL_MAX_ELEMENTS"


class InstanceError(ValueError):
    """An instance or script file is malformed or refers to unknown labels."""


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture, e.g. ``fixture_path("mo2.json")``."""
    return Path(str(resources.files("iql") / "fixtures" / name))


def digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: not valid JSON ({exc})") from None


def resolve_cap(cap: int | None, declared: int | None) -> int:
    """``--cap`` beats ``IQL_MAX_ELEMENTS`` beats the file's own value."""
    if cap is not None:
        return cap
    env = os.environ.get(CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InstanceError(f"{CAP_ENV} must be an integer, got {env!r}") from None
    return declared if declared is not None else DEFAULT_MAX_ELEMENTS


def load_instance(path, cap: int | None = None) -> PropertyLattice:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InstanceError(f"{path}: top level must be an object")
    kind = data.get("kind")
    name = data.get("name") or Path(path).stem
    if kind == "table":
        return lattice_from_table(data.get("table") or {}, name)
    if kind == "hilbert":
        h = data.get("hilbert") or {}
        try:
            dim = int(h["dim"])
            gens = {
                g: [[GaussianRational.parse(c) for c in vec] for vec in vecs]
                for g, vecs in h["generators"].items()
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"{path}: bad hilbert section ({exc})") from None
        return generate_lattice(dim, gens, resolve_cap(cap, h.get("max_elements")), name=name)
    raise InstanceError(f"{path}: kind must be 'table' or 'hilbert', got {kind!r}")


def lattice_from_table(table: dict, name: str | None = None) -> PropertyLattice:
    labels = table.get("elements")
    if not isinstance(labels, list) or not labels:
        raise InstanceError("table.elements must be a non-empty list of labels")
    labels = [str(x) for x in labels]
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise LatticeError("duplicate element label")

    def ref(lab):
        if lab not in index:
            raise InstanceError(f"unknown element label {lab!r}")
        return index[lab]

    n = len(labels)
    leq = [[i == j for j in range(n)] for i in range(n)]
    for pair in table.get("leq", []):
        lo, hi = pair
        leq[ref(lo)][ref(hi)] = True
    # reflexive-transitive closure of the listed pairs
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    omap = table.get("ortho") or {}
    missing = [lab for lab in labels if lab not in omap]
    if missing:
        raise InstanceError(f"ortho map has no entry for {missing[0]!r}")
    ortho = [ref(omap[lab]) for lab in labels]
    return PropertyLattice(labels, leq, ortho, name=name)


def load_script(path) -> dict:
    data = _read_json(path)
    if not isinstance(data, dict) or "steps" not in data:
        raise InstanceError(f"{path}: script needs 'antecedent' and 'steps'")
    return data
