"""``iql``: command-line front end.

Exit codes: 0 when every assertion passes, 1 when a law fails (witnesses are
in the report), 2 for usage, input and capacity errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .contexts import SpectralPresheaf
from .downsets import Downset, d_implies
from .instances import InstanceError, load_instance, load_script
from .lattice import CapacityError, DomainError, LatticeError
from .presheaf import OUTCOME_NAMES, classify_component, delta_o_sub, empty_sub, heyting_implies_sub
from .report import dumps
from .revision import ConsequenceRelation, find_order_witness, order_paths, parse_script, run_script
from .workbench import SUITES, check_report, daseinise_report, export_dot, instance_header

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _labels(expr: str) -> list[str]:
    return [x.strip() for x in expr.split(",") if x.strip()]


def cmd_check(args) -> int:
    rep = check_report(args.file, args.suite, args.cap)
    _emit(dumps(rep), args.output)
    return EXIT_OK if rep["pass"] else EXIT_FAIL


def cmd_daseinise(args) -> int:
    _emit(dumps(daseinise_report(args.file, args.element, args.cap)), args.output)
    return EXIT_OK


def cmd_implies(args) -> int:
    L = load_instance(args.file, args.cap)
    s_lab, t_lab = _labels(args.s), _labels(args.t)
    out = {"instance": instance_header(args.file, L), "structure": args.structure, "S": s_lab, "T": t_lab}
    if args.structure == "downset":
        S, T = Downset.generated(L, s_lab), Downset.generated(L, t_lab)
        imp = d_implies(S, T)
        out["implication"] = {"maximal": imp.labels(), "members": [L.label(x) for x in imp.members]}
    else:
        presheaf = SpectralPresheaf(L)

        def sub(labels):
            acc = empty_sub(presheaf)
            for lab in labels:
                acc = acc | delta_o_sub(presheaf, L.element(lab))
            return acc

        S, T = sub(s_lab), sub(t_lab)
        imp = heyting_implies_sub(S, T)
        out["implication"] = [
            {
                "context": presheaf.describe(v),
                "S": S.describe()[v],
                "T": T.describe()[v],
                "value": imp.describe()[v],
                "outcome": OUTCOME_NAMES[classify_component(S, T, imp, v)],
            }
            for v in range(len(presheaf))
        ]
    _emit(dumps(out), args.output)
    return EXIT_OK


def cmd_revise(args) -> int:
    L = load_instance(args.file, args.cap)
    rel, steps = parse_script(L, load_script(args.script))
    trace = run_script(rel, steps)
    out = {"instance": instance_header(args.file, L), "script": Path(args.script).name, **trace.to_dict()}
    _emit(dumps(out), args.output)
    return EXIT_OK


def _path_line(title: str, trace) -> str:
    L = trace.initial.lattice
    parts = [str(trace.initial.antecedent)]
    for step, rel in trace.states:
        op = f"∧ {step.formula}" if step.kind == "static" else f"φ*_{L.label(step.projector)}"
        parts.append(f"--({op})--> {rel.antecedent}")
    return f"  {title:<22}" + " ".join(parts)


def cmd_demo(args) -> int:
    L = load_instance(args.file, args.cap)
    explicit = [args.antecedent, args.formula, args.projector]
    if any(explicit) and not all(explicit):
        raise InstanceError("--antecedent, --formula and --projector go together")
    if all(explicit):
        C = Downset.generated(L, _labels(args.antecedent))
        B = Downset.generated(L, _labels(args.formula))
        a = L.element(args.projector)
        source = "given"
    else:
        w = find_order_witness(L)
        if w is None:
            reason = "distributive" if L.is_distributive else "not distributive"
            print(f"order dependence on {L.name}: no witness ({reason})")
            return EXIT_OK if L.is_distributive else EXIT_FAIL
        B, C, a = w.B, w.C, w.projector
        source = "first witness found"
    first, second = order_paths(ConsequenceRelation(L, C), B, a)
    D, E = first.final.antecedent, second.final.antecedent
    lines = [
        f"order dependence on {L.name} ({source})",
        f"  a = {L.label(a)}, B = {B}, C = {C}",
        _path_line("static then dynamic:", first) + f"   D = {D}",
        _path_line("dynamic then static:", second) + f"   E = {E}",
        f"  {'D != E: the order matters' if D != E else 'D = E: no order dependence here'}",
    ]
    print("\n".join(lines))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    L = load_instance(args.file, args.cap)
    _emit(export_dot(L, args.what), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iql", description="Exact finite quantum-logic workbench.")
    p.add_argument("--version", action="version", version=f"iql {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output=True):
        sp.add_argument("file", help="instance JSON file")
        sp.add_argument("--cap", type=int, default=None, help="element cap for subspace closure")
        if output:
            sp.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")

    sp = sub.add_parser("check", help="run law suites and print a JSON report")
    common(sp)
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("daseinise", help="inner and outer daseinisation of one element")
    common(sp)
    sp.add_argument("--element", required=True)
    sp.set_defaults(func=cmd_daseinise)

    sp = sub.add_parser("implies", help="Heyting implication S -> T")
    common(sp)
    sp.add_argument("--structure", choices=("downset", "presheaf"), default="downset")
    sp.add_argument("--s", required=True, help="comma-separated element labels")
    sp.add_argument("--t", required=True, help="comma-separated element labels")
    sp.set_defaults(func=cmd_implies)

    sp = sub.add_parser("revise", help="run a revision script")
    common(sp)
    sp.add_argument("--script", required=True)
    sp.set_defaults(func=cmd_revise)

    sp = sub.add_parser("demo", help="demonstrations")
    sp.add_argument("name", choices=("order-dependence",))
    common(sp, output=False)
    sp.add_argument("--antecedent", help="labels generating C")
    sp.add_argument("--formula", help="labels generating B")
    sp.add_argument("--projector", help="projector a")
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("export-dot", help="Hasse diagram in DOT")
    common(sp)
    sp.add_argument("--what", choices=("lattice", "contexts", "downsets"), default="lattice")
    sp.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"iql: capacity exceeded: {exc}", file=sys.stderr)
    except (InstanceError, DomainError, LatticeError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"iql: {msg}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
