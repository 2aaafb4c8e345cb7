"""Command-line front end.

Subcommands: gen, orient, invariants, partition, oracle, verify.  Graph
files travel on stdin/stdout by default, so pipelines like

    pfdimers gen --surface klein_hexagon --size 5x6 | pfdimers partition

work out of the box.  ``--format kv`` emits stable machine-readable
``key value`` lines.  Exit codes: 0 success, 1 usage or parse error,
2 computation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import graphfile
from .errors import MalformedFile, PfdimersError
from .generators import lattice
from .homology import cycle_basis
from .kasteleyn import construct_kasteleyn, curvature_report, enumerate_classes
from .oracle import count_matchings, find_matching, homology_buckets, partition_bruteforce
from .partition import partition
from .spin_quadratic import arf, basis_enhancement, brown, normalize_qB
from .surface_graph import classify


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("PFDIMERS_THREADS")
    return int(env) if env else 1


def _load(args):
    if args.file == "-":
        return graphfile.load(sys.stdin)
    with open(args.file) as fh:
        return graphfile.load(fh)


def _emit(args, pairs, plain_lines) -> None:
    if args.format == "kv":
        for k, v in pairs:
            print(f"{k} {v}")
    else:
        for line in plain_lines:
            print(line)


def cmd_gen(args) -> int:
    try:
        mm, nn = args.size.lower().split("x")
        inst = lattice(int(mm), int(nn), args.surface)
    except (ValueError, PfdimersError) as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return 1
    if args.out == "-":
        graphfile.dump(inst, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            graphfile.dump(inst, fh)
    return 0


def cmd_orient(args) -> int:
    inst = _load(args)
    m = inst.map
    K = construct_kasteleyn(m)
    report = curvature_report(m, K)
    pairs = [("vertices", m.vertex_count), ("edges", m.edge_count),
             ("surface", classify(m).name.replace(" ", "_"))]
    plain = [f"admissible orientation on {classify(m).name}"]
    for e in range(m.edge_count):
        a, b = K.arrow(m, e)
        pairs.append((f"edge.{e}", f"{a}->{b}"))
        plain.append(f"edge {e}: {a} -> {b}")
    pairs.append(("curvature", "".join(str(c) for c in report.per_face)))
    plain.append(f"curvature bits: {''.join(str(c) for c in report.per_face)}")
    _emit(args, pairs, plain)
    return 0


def cmd_invariants(args) -> int:
    inst = _load(args)
    m = inst.map
    basis = inst.basis if inst.basis is not None else cycle_basis(m)
    D0 = find_matching(m)
    if D0 is None:
        print("no perfect matching; invariants undefined", file=sys.stderr)
        return 2
    K = construct_kasteleyn(m)
    pairs = [("b1", basis.rank), ("surface", classify(m).name.replace(" ", "_"))]
    plain = [f"surface: {classify(m).name}, b1 = {basis.rank}"]
    for idx, Kc in enumerate(enumerate_classes(m, K, basis.dual_cochains)):
        q = normalize_qB(m, basis_enhancement(m, Kc, D0, basis), D0, basis)
        label = "".join(str((idx >> i) & 1) for i in range(basis.rank)) or "0"
        vals = ",".join(str(v) for v in q.basis_values)
        b = brown(q)
        pairs.append((f"q.{label}", vals))
        pairs.append((f"brown.{label}", b))
        plain.append(f"class {label}: q = ({vals}), brown = {b}")
        if classify(m).orientable:
            pairs.append((f"arf.{label}", arf(q)))
            plain.append(f"class {label}: arf = {arf(q)}")
    _emit(args, pairs, plain)
    return 0


def cmd_partition(args) -> int:
    inst = _load(args)
    res = partition(inst.map, method=args.method,
                    curves=inst.curves or None, basis=inst.basis,
                    backend=args.backend, threads=_threads(args))
    surface = classify(inst.map)
    pairs = [("Z", res.value), ("method", res.method),
             ("b1", surface.b1), ("surface", surface.name.replace(" ", "_"))]
    for label, pf in res.terms:
        pairs.append((f"pf.{label}", pf))
    _emit(args, pairs, [str(res.value)])
    return 0


def cmd_oracle(args) -> int:
    inst = _load(args)
    z = partition_bruteforce(inst.map, max_vertices=args.max_vertices)
    n = count_matchings(inst.map, max_vertices=args.max_vertices)
    pairs = [("Z", z), ("matchings", n), ("method", "oracle")]
    plain = [f"Z = {z} ({n} matchings)"]
    if args.buckets and inst.basis is not None and n:
        D0 = find_matching(inst.map)
        for coords, val in sorted(homology_buckets(inst.map, D0, inst.basis).items()):
            label = "".join(str(c) for c in coords) or "0"
            pairs.append((f"bucket.{label}", val))
            plain.append(f"bucket {label}: {val}")
    _emit(args, pairs, plain)
    return 0


def cmd_verify(args) -> int:
    inst = _load(args)
    m = inst.map
    surface = classify(m)
    results = {}
    results["pin"] = partition(m, "pin", basis=inst.basis, backend=args.backend,
                               threads=_threads(args))
    if surface.orientable:
        results["practical"] = partition(m, "practical", curves=inst.curves or None,
                                         basis=inst.basis, backend=args.backend)
        results["spin"] = partition(m, "spin", basis=inst.basis, backend=args.backend)
    elif inst.curves:
        results["practical"] = partition(m, "practical", curves=inst.curves,
                                         basis=inst.basis, backend=args.backend)
    if m.vertex_count <= args.max_vertices:
        results["oracle"] = partition(m, "oracle", backend=args.backend)
    values = {k: Fraction(v.value) if v.exact else v.value for k, v in results.items()}
    ref = next(iter(values.values()))
    ok = all(_close(v, ref, args.backend) for v in values.values())
    pairs = [(k, v.value) for k, v in sorted(results.items())]
    pairs.append(("agree", "yes" if ok else "no"))
    plain = [f"{k}: Z = {v.value}" for k, v in sorted(results.items())]
    plain.append("all methods agree" if ok else "METHOD DISAGREEMENT")
    _emit(args, pairs, plain)
    return 0 if ok else 2


def _close(a, b, backend) -> bool:
    if backend == "exact":
        return a == b
    return abs(float(a) - float(b)) <= 1e-9 * (1 + abs(float(b)))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pfdimers", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_backend=True):
        p.add_argument("file", nargs="?", default="-",
                       help="graph file, or - for stdin")
        p.add_argument("--format", choices=("plain", "kv"), default="plain")
        if with_backend:
            p.add_argument("--backend", choices=("exact", "float"), default="exact")
        p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("gen", help="generate a lattice instance")
    p.add_argument("--surface", required=True,
                   choices=("planar", "torus", "klein_hexagon", "rp2"))
    p.add_argument("--size", required=True, help="MxN, e.g. 5x6")
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("orient", help="print an admissible orientation")
    add_common(p, with_backend=False)
    p.set_defaults(fn=cmd_orient)

    p = sub.add_parser("invariants", help="enhancement table per class")
    add_common(p, with_backend=False)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("partition", help="compute the partition function")
    add_common(p)
    p.add_argument("--method", default="auto",
                   choices=("auto", "practical", "pin", "spin", "oracle"))
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("oracle", help="brute-force matching enumeration")
    add_common(p, with_backend=False)
    p.add_argument("--max-vertices", type=int, default=36)
    p.add_argument("--buckets", action="store_true")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("verify", help="cross-method agreement on one file")
    add_common(p)
    p.add_argument("--max-vertices", type=int, default=36)
    p.set_defaults(fn=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except MalformedFile as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except PfdimersError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
