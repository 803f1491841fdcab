"""Suite selection, report assembly and DOT export behind the ``iql`` command."""

from __future__ import annotations

from pathlib import Path

from . import __version__
from .contexts import SpectralPresheaf
from .daseinisation import das_prop_suite, dasein_table
from .downsets import Downset, enumerate_downset_masks, heyting_law_suite
from .instances import digest, load_instance
from .lattice import PropertyLattice, law_suite, subspace_cross_check
from .presheaf import biheyting_suite, triviality_report
from .report import LawReport
from .revision import revision_suites

SUITES = ("oml", "daseinisation", "presheaf", "downset", "revision")


def instance_header(path, L: PropertyLattice) -> dict:
    return {
        "name": L.name,
        "file": Path(path).name,
        "digest": digest(path),
        "provenance": L.provenance,
        "elements": L.n,
    }


def _skipped(suite: str, reason: str) -> LawReport:
    rep = LawReport(suite)
    rep.skipped.append(reason)
    return rep


def run_suites(L: PropertyLattice, selected: str = "all", classify: bool = True) -> tuple[list[LawReport], dict]:
    """Run the chosen suites; returns the law reports and classification summaries.

    Context-based suites are reported as skipped on lattices that are not
    orthomodular, since contexts are not enumerated there.
    """
    names = SUITES if selected == "all" else (selected,)
    reports: list[LawReport] = []
    classification: dict = {}
    presheaf = None
    if any(s in ("daseinisation", "presheaf") for s in names) and L.is_orthomodular:
        presheaf = SpectralPresheaf(L)
    for name in names:
        if name == "oml":
            reports.append(law_suite(L))
            if L.subspaces is not None:
                reports.append(subspace_cross_check(L))
        elif name == "daseinisation":
            if presheaf is None:
                reports.append(_skipped(name, "lattice is not orthomodular"))
            else:
                reports.append(das_prop_suite(presheaf))
        elif name == "presheaf":
            if presheaf is None:
                reports.append(_skipped(name, "lattice is not orthomodular"))
            else:
                reports.append(biheyting_suite(presheaf))
                if classify:
                    classification["triviality"] = triviality_report(presheaf).summary()
        elif name == "downset":
            reports.append(heyting_law_suite(L))
        elif name == "revision":
            reports.extend(revision_suites(L))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return reports, classification


def check_report(path, selected: str = "all", cap: int | None = None) -> dict:
    L = load_instance(path, cap)
    reports, classification = run_suites(L, selected)
    out = {
        "tool": {"name": "iql", "version": __version__},
        "instance": instance_header(path, L),
        "suite": selected,
        "pass": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    if classification:
        out["classification"] = classification
    return out


def daseinise_report(path, label: str, cap: int | None = None) -> dict:
    L = load_instance(path, cap)
    presheaf = SpectralPresheaf(L)
    table = dasein_table(presheaf, L.element(label))
    return {
        "tool": {"name": "iql", "version": __version__},
        "instance": instance_header(path, L),
        "daseinisation": table.to_dict(presheaf),
    }


# -- DOT export ---------------------------------------------------------------


def _dot(name: str, nodes: list[str], edges: list[tuple[int, int]]) -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, lab in enumerate(nodes):
        lines.append(f'  n{i} [label="{_esc(lab)}"];')
    for lo, hi in sorted(edges):
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _hasse(masks: list[int]) -> list[tuple[int, int]]:
    """Covering pairs of a family of sets ordered by inclusion."""
    n = len(masks)
    below = [[j for j in range(n) if j != i and not masks[j] & ~masks[i]] for i in range(n)]
    edges = []
    for i in range(n):
        for j in below[i]:
            if not any(k != j and j in below[k] for k in below[i]):
                edges.append((j, i))
    return edges


def export_dot(L: PropertyLattice, what: str) -> str:
    if what == "lattice":
        return _dot("lattice", L.labels, L.covers())
    if what == "contexts":
        presheaf = SpectralPresheaf(L)
        nodes = [presheaf.describe(v) for v in range(len(presheaf))]
        return _dot("contexts", nodes, presheaf.covers())
    if what == "downsets":
        masks = enumerate_downset_masks(L)
        return _dot("downsets", [str(Downset(L, m)) for m in masks], _hasse(masks))
    raise ValueError(f"cannot export {what!r}")
