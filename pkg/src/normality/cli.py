"""Command-line front end.

Subcommands:
  classify --family su|so --m M --n N --k K --l L --p P [--json]
  witness  --family su|so --m M --n N --k K --l L --p P [--json]
  sweep    --family su|so --m-max M --n-max N --k-max K --l-max L --p-max P
           [--check-consistency] [--workers W] [--out FILE.csv]
  steenrod --family chern|pontryagin --p P --n N --i I [--truncate K]
           [--json] [--verify-oracle]
  trees    enumerate --leaves N [--binary]
  trees    cut --tree STR --lengths FILE --threshold Q
  assoc    cells --n N [--json]
  assoc    homology --n N --coeff z|f2|f3
  bar      homology --group cyclic:Q|table:FILE --k K --coeff z|fp:P [--json]

Exit codes: 0 success, 1 usage error, 2 internal inconsistency (failed
invariant, non-p-integral coefficient, conflicting rules).  Identical
invocations produce byte-identical output regardless of worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from multiprocessing import Pool
from typing import Optional, Sequence

from . import associahedra, barhomology, charclass, decide, trees
from .exactlin import PDividesDenominatorError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1, not argparse's default 2
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="normality", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_flags(p):
        p.add_argument("--family", required=True, choices=["su", "so"])
        p.add_argument("--m", required=True, type=int)
        p.add_argument("--n", required=True, type=int)
        p.add_argument("--k", required=True, type=int)
        p.add_argument("--l", required=True, type=int)
        p.add_argument("--p", required=True, type=int)
        p.add_argument("--json", action="store_true")

    instance_flags(sub.add_parser("classify", help="verdict for one instance"))
    instance_flags(sub.add_parser("witness", help="full certificate for one instance"))

    sweep = sub.add_parser("sweep", help="CSV sweep over an instance grid")
    sweep.add_argument("--family", required=True, choices=["su", "so"])
    sweep.add_argument("--m-max", required=True, type=int)
    sweep.add_argument("--n-max", required=True, type=int)
    sweep.add_argument("--k-max", required=True, type=int)
    sweep.add_argument("--l-max", required=True, type=int)
    sweep.add_argument("--p-max", required=True, type=int)
    sweep.add_argument("--check-consistency", action="store_true")
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--out", default=None)

    steenrod = sub.add_parser("steenrod", help="P^1 on a Chern/Pontryagin generator")
    steenrod.add_argument("--family", required=True, choices=["chern", "pontryagin"])
    steenrod.add_argument("--p", required=True, type=int)
    steenrod.add_argument("--n", required=True, type=int)
    steenrod.add_argument("--i", required=True, type=int)
    steenrod.add_argument("--truncate", type=int, default=None)
    steenrod.add_argument("--json", action="store_true")
    steenrod.add_argument("--verify-oracle", action="store_true")

    tree_cmd = sub.add_parser("trees", help="planar rooted tree operations")
    tree_sub = tree_cmd.add_subparsers(dest="subcommand", required=True)
    enum = tree_sub.add_parser("enumerate")
    enum.add_argument("--leaves", required=True, type=int)
    enum.add_argument("--binary", action="store_true")
    cut = tree_sub.add_parser("cut")
    cut.add_argument("--tree", required=True)
    cut.add_argument("--lengths", required=True,
                     help="JSON file: list of {\"edge\": \"0.1\", \"len\": \"5/2\"}")
    cut.add_argument("--threshold", required=True)

    assoc = sub.add_parser("assoc", help="associahedron cell model")
    assoc_sub = assoc.add_subparsers(dest="subcommand", required=True)
    cells = assoc_sub.add_parser("cells")
    cells.add_argument("--n", required=True, type=int)
    cells.add_argument("--json", action="store_true")
    homology = assoc_sub.add_parser("homology")
    homology.add_argument("--n", required=True, type=int)
    homology.add_argument("--coeff", required=True, choices=["z", "f2", "f3"])

    bar = sub.add_parser("bar", help="truncated bar construction homology")
    bar_sub = bar.add_subparsers(dest="subcommand", required=True)
    barh = bar_sub.add_parser("homology")
    barh.add_argument("--group", required=True,
                      help="cyclic:Q or table:FILE (JSON multiplication table)")
    barh.add_argument("--k", required=True, type=int)
    barh.add_argument("--coeff", required=True, help="z or fp:P")
    barh.add_argument("--json", action="store_true")
    return parser


def _dump_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def _instance(args) -> decide.Instance:
    family = decide.Family.SU if args.family == "su" else decide.Family.SO_ODD
    return decide.Instance(family, args.m, args.n, args.k, args.l, args.p)


def _cmd_classify(args, out) -> int:
    inst = _instance(args)
    verdict = decide.classify(inst, decide.load_ledger())
    if args.json:
        payload = {"family": inst.family.value, "m": inst.m, "n": inst.n,
                   "k": inst.k, "l": inst.l, "p": inst.p}
        payload.update(verdict.to_json())
        _dump_json(payload, out)
    else:
        line = f"{inst.describe()} -> {verdict.kind.value}"
        if verdict.provenance:
            line += f" [{verdict.provenance.rule}] {verdict.provenance.citation}"
        out.write(line + "\n")
    return 0


def _cmd_witness(args, out) -> int:
    inst = _instance(args)
    verdict = decide.classify(inst, decide.load_ledger())
    cert = decide.certify(inst)
    if args.json:
        payload = cert.to_json()
        payload.update(verdict.to_json())
        _dump_json(payload, out)
    else:
        out.write(f"{inst.describe()} -> {verdict.kind.value}\n")
        if cert.witness is None:
            out.write("witness: none found\n")
        else:
            lp, i, j = cert.witness
            out.write(f"witness: l'={lp} i={i} j={j}\n")
            out.write(f"coefficient: {cert.coefficient} (mod {inst.p})\n")
            for name in decide.CHECK_NAMES:
                out.write(f"check {name}: {str(cert.checks[name]).lower()}\n")
        out.write(f"status: {cert.status}\n")
    return 0


SWEEP_COLUMNS = ["family", "m", "n", "k", "l", "p", "verdict", "provenance",
                 "witness_lprime", "witness_i", "witness_j", "coefficient",
                 "coefficient_nonzero", "range_check_1", "range_check_2",
                 "source_absent", "status"]


def _sweep_row(inst: decide.Instance, ledger) -> list[str]:
    verdict = decide.classify(inst, ledger)
    row = [inst.family.value, str(inst.m), str(inst.n), str(inst.k),
           str(inst.l), str(inst.p), verdict.kind.value,
           verdict.provenance.rule if verdict.provenance else ""]
    in_window = False
    if inst.p > 2:
        lo, hi = decide.nonnormal_window(inst.family, inst.m, inst.n, inst.k, inst.l)
        in_window = lo < inst.p <= hi
    if not in_window:
        return row + [""] * 9
    cert = decide.certify(inst)
    if cert.witness is None:
        return row + ["", "", "", "", "", "", "", "", cert.status]
    lp, i, j = cert.witness
    checks = [str(cert.checks[name]).lower() for name in decide.CHECK_NAMES]
    return row + [str(lp), str(i), str(j), str(cert.coefficient)] + checks + [cert.status]


def _sweep_worker(packed):
    family_value, m, n, k, l, p, ledger_entries = packed
    inst = decide.Instance(decide.Family(family_value), m, n, k, l, p)
    return _sweep_row(inst, ledger_entries)


def _cmd_sweep(args, out) -> int:
    family = decide.Family.SU if args.family == "su" else decide.Family.SO_ODD
    ledger = decide.load_ledger()
    instances = [inst for inst in decide.grid_instances(
                     family, args.n_max, args.k_max, args.l_max, args.p_max,
                     include_p2=(family is decide.Family.SU))
                 if inst.m <= args.m_max]
    sink = open(args.out, "w", newline="", encoding="utf-8") if args.out else out
    try:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        if args.workers > 1:
            packed = [(i.family.value, i.m, i.n, i.k, i.l, i.p, ledger)
                      for i in instances]
            with Pool(args.workers) as pool:
                for row in pool.imap(_sweep_worker, packed, chunksize=64):
                    writer.writerow(row)
        else:
            for inst in instances:
                writer.writerow(_sweep_row(inst, ledger))
    finally:
        if args.out:
            sink.close()
    if args.check_consistency:
        conflicts = decide.consistency_sweep(args.n_max, args.k_max, args.l_max,
                                             args.p_max, families=(family,),
                                             ledger=ledger)
        if conflicts:
            for c in conflicts:
                sys.stderr.write("conflict: " + c.describe() + "\n")
            return 2
    return 0


def _cmd_steenrod(args, out) -> int:
    fam = (charclass.chern(args.n) if args.family == "chern"
           else charclass.pontryagin(args.n))
    poly = charclass.wu_p1(args.p, fam, args.i)
    if args.verify_oracle:
        oracle = charclass.splitting_oracle(args.p, fam, args.i)
        if poly != oracle:
            sys.stderr.write(
                f"oracle mismatch for {fam.name(args.i)} at p={args.p}: "
                f"formula {poly.render()} vs oracle {oracle.render()}\n")
            return 2
    if args.truncate is not None:
        poly = charclass.truncate(poly, args.truncate)
    if args.json:
        payload = {"family": args.family, "p": args.p, "n": args.n, "i": args.i,
                   "truncate": args.truncate, "terms": poly.to_json_terms()}
        _dump_json(payload, out)
    else:
        out.write(poly.render() + "\n")
    return 0


def _cmd_trees(args, out) -> int:
    if args.subcommand == "enumerate":
        for t in trees.enumerate_trees(args.leaves, binary_only=args.binary):
            out.write(trees.serialize(t) + "\n")
        return 0
    # cut
    tree = trees.parse(args.tree)
    with open(args.lengths, encoding="utf-8") as fh:
        table = json.load(fh)
    mt = trees.canonicalize(trees.lengths_from_json(tree, table))
    pieces, cut_lengths = trees.cut(mt, trees.as_length(args.threshold))
    for idx, piece in enumerate(pieces, start=1):
        out.write(f"piece {idx}: {trees.serialize(piece.tree)}\n")
        entries = trees.lengths_to_json(piece)
        if entries:
            for item in entries:
                out.write(f"  edge {item['edge']}: {item['len']}\n")
        else:
            out.write("  (no internal edges)\n")
    rendered = " ".join(trees.length_str(v) for v in cut_lengths)
    out.write(f"cut lengths: {rendered if cut_lengths else '(none)'}\n")
    return 0


def _render_homology(groups, coeff_label: str, out) -> None:
    for degree, group in enumerate(groups):
        if coeff_label == "z":
            out.write(f"H_{degree} = {group}\n")
        else:
            p = coeff_label.split(":")[-1].lstrip("f")
            name = f"F{p}"
            text = "0" if group.free_rank == 0 else (
                name if group.free_rank == 1 else f"{name}^{group.free_rank}")
            out.write(f"H_{degree} = {text}\n")


def _cmd_assoc(args, out) -> int:
    if args.subcommand == "cells":
        cell_list = associahedra.cells(args.n)
        if args.json:
            _dump_json([c.to_json() for c in cell_list], out)
        else:
            for c in cell_list:
                pinned = ",".join(trees.edge_str(e) for e in sorted(c.pinned))
                out.write(f"dim {c.dim}  {trees.serialize(c.tree)}  "
                          f"pinned [{pinned}]\n")
            fv = associahedra.f_vector(args.n)
            out.write(f"f-vector: {tuple(fv)}\n")
        return 0
    coeff = {"z": None, "f2": 2, "f3": 3}[args.coeff]
    groups = associahedra.homology(args.n, coeff)
    _render_homology(groups, args.coeff if args.coeff != "z" else "z", out)
    return 0


def _parse_group(spec: str) -> barhomology.FiniteMonoid:
    kind, _, rest = spec.partition(":")
    if kind == "cyclic" and rest:
        return barhomology.FiniteMonoid.cyclic(int(rest))
    if kind == "table" and rest:
        return barhomology.FiniteMonoid.from_json_file(rest)
    raise UsageError(f"unrecognized group spec {spec!r}; use cyclic:Q or table:FILE")


def _parse_coeff(spec: str) -> Optional[int]:
    if spec == "z":
        return None
    kind, _, rest = spec.partition(":")
    if kind == "fp" and rest:
        return int(rest)
    raise UsageError(f"unrecognized coefficients {spec!r}; use z or fp:P")


def _cmd_bar(args, out) -> int:
    monoid = _parse_group(args.group)
    p = _parse_coeff(args.coeff)
    complex_ = barhomology.build_bar(monoid, None, None, args.k)
    groups = barhomology.bar_homology(complex_, p)
    if args.json:
        payload = {"group": args.group, "k": args.k, "coeff": args.coeff,
                   "homology": [{"degree": d, "rank": g.free_rank,
                                 "torsion": list(g.torsion)}
                                for d, g in enumerate(groups)]}
        _dump_json(payload, out)
    else:
        _render_homology(groups, "z" if p is None else f"fp:{p}", out)
    return 0


_COMMANDS = {
    "classify": _cmd_classify,
    "witness": _cmd_witness,
    "sweep": _cmd_sweep,
    "steenrod": _cmd_steenrod,
    "trees": _cmd_trees,
    "assoc": _cmd_assoc,
    "bar": _cmd_bar,
}


def run(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
        return _COMMANDS[args.command](args, sys.stdout)
    except UsageError as exc:
        sys.stderr.write(str(exc).rstrip("\n") + "\n")
        return 1
    except (trees.TreeSyntaxError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (PDividesDenominatorError, decide.InconsistentRulesError,
            AssertionError, RuntimeError) as exc:
        sys.stderr.write(f"internal inconsistency: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
