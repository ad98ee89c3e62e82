"""Command-line surface.

Exit codes: 0 = success / predicate passed, 1 = mathematical "no" (the
witness appears on stdout as one JSON line), 2 = usage or format error.
Commands that produce a payload (tensor, tree, certificate, decision)
write it to stdout, or to a file with --out; progress and prose go to
stderr so stdout stays machine-readable.  With --jobs K the heavy loops
fan out over processes; results are order-normalized so parallel runs
are byte-identical to serial ones.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from itertools import combinations, combinations_with_replacement

from .dissim import (
    DissimTensor,
    dissimilarity_map,
    subset_dissimilarity,
    triple_dissimilarity,
    triple_membership,
    verify_m4_characterization,
)
from .puiseux import CertificateError, build_certificate, det3, verify_certificate
from .rationals import format_rational
from .trees import (
    DistanceMatrix,
    FourPointViolation,
    NewickError,
    TreeError,
    distance_matrix,
    enumerate_topologies,
    parse_newick,
    random_tree,
    reconstruct_tree,
    serialize_newick,
    steiner_weight,
)
from .tropical import Verdict, four_point_check, is_ultrametric, max_twice, three_term_plucker_check

_USAGE_ERRORS = (NewickError, TreeError, CertificateError, ValueError, KeyError, OSError)


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        return repr(x)
    return x


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_matrix(path: str) -> DistanceMatrix:
    return DistanceMatrix.from_json_obj(json.loads(_read(path)))


def _load_tensor(path: str) -> DissimTensor:
    return DissimTensor.from_json_obj(json.loads(_read(path)))


def _pmap(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _print_verdict(name: str, verdict: Verdict, extra: dict | None = None) -> int:
    obj = {
        "check": name,
        "pass": bool(verdict),
        "witness": _jsonable(verdict.witness),
        "values": _jsonable(verdict.values),
    }
    if verdict.note:
        obj["note"] = verdict.note
    if extra:
        obj.update(extra)
    if verdict:
        print(f"{name}: PASS" + (f" ({verdict.note})" if verdict.note else ""), file=sys.stderr)
    else:
        shown = ", ".join(format_rational(v) for v in verdict.values) if verdict.values else ""
        print(f"{name}: FAIL at {verdict.witness} with values ({shown})", file=sys.stderr)
    print(json.dumps(obj))
    return 0 if verdict else 1


# ---------------------------------------------------------------------------
# workers (module level so they pickle for --jobs)


def _dissim_worker(D: DistanceMatrix, method: str, subset: tuple) -> Fraction:
    return subset_dissimilarity(D, subset, method=method)


def _quad_worker(D: DistanceMatrix, quad: tuple) -> tuple[bool, tuple]:
    i, j, k, l = quad
    vals = (
        D.get(i, j) + D.get(k, l),
        D.get(i, k) + D.get(j, l),
        D.get(i, l) + D.get(j, k),
    )
    return max_twice(vals), vals


def _plucker_worker(W: DissimTensor, item: tuple) -> tuple[bool, tuple]:
    R, (i, j, k, l) = item
    vals = (
        W.value(R + (i, j)) + W.value(R + (k, l)),
        W.value(R + (i, k)) + W.value(R + (j, l)),
        W.value(R + (i, l)) + W.value(R + (j, k)),
    )
    return max_twice(vals), vals


def _minor_worker(cert, triple: tuple):
    i, j, k = triple
    return det3(cert.minor(i, j, k)).val()


# ---------------------------------------------------------------------------
# subcommands


def _cmd_dissim(args) -> int:
    tree = parse_newick(_read(args.tree))
    D = distance_matrix(tree)
    if not 2 <= args.m <= tree.n:
        raise ValueError(f"--m must be between 2 and {tree.n}")
    subsets = list(combinations(range(1, tree.n + 1), args.m))
    values = _pmap(partial(_dissim_worker, D, args.method), subsets, args.jobs)
    tensor = DissimTensor(tree.n, args.m, dict(zip(subsets, values)))
    if args.oracle:
        for subset in subsets:
            expected = steiner_weight(tree, subset)
            if tensor.entries[subset] != expected:
                print(
                    f"oracle mismatch at {subset}: tour formula {tensor.entries[subset]}, "
                    f"subtree weight {expected}",
                    file=sys.stderr,
                )
                print(
                    json.dumps(
                        {
                            "check": "dissim-oracle",
                            "pass": False,
                            "witness": _jsonable(subset),
                            "values": _jsonable((tensor.entries[subset], expected)),
                        }
                    )
                )
                return 1
        print(f"oracle agreement on {len(subsets)} subsets", file=sys.stderr)
    _emit(json.dumps(tensor.to_json_obj(), indent=2), args.out)
    return 0


def _cmd_check(args) -> int:
    if args.tmn is not None:
        W = _load_tensor(args.file)
        if W.m != args.tmn:
            raise ValueError(f"tensor file has m={W.m}, but --tmn asked for m={args.tmn}")
        if args.jobs > 1 and W.n >= W.m + 2:
            labels = range(1, W.n + 1)
            items = []
            for R in combinations(labels, W.m - 2):
                rest = [x for x in labels if x not in set(R)]
                items.extend((R, quad) for quad in combinations(rest, 4))
            results = _pmap(partial(_plucker_worker, W), items, args.jobs)
            verdict = Verdict(True)
            for item, (ok, vals) in zip(items, results):
                if not ok:
                    verdict = Verdict(False, witness=item, values=vals)
                    break
        else:
            verdict = three_term_plucker_check(W)
        return _print_verdict("three-term-relations", verdict, {"m": W.m, "n": W.n})
    if args.m4:
        D = _load_matrix(args.file)
        report = verify_m4_characterization(D)
        if not report.all_equivalent:
            raise RuntimeError("pairing-coordinate equivalence broke; please report")
        verdict = Verdict(True)
        for q in report.quadruples:
            if not q.coordinates_equal:
                verdict = Verdict(False, witness=q.quadruple, values=q.sums)
                break
        agreeing = sum(1 for q in report.quadruples if q.coordinates_equal)
        return _print_verdict(
            "pairing-agreement",
            verdict,
            {"quadruples": len(report.quadruples), "agreeing": agreeing},
        )
    if args.ultra:
        D = _load_matrix(args.file)
        return _print_verdict("ultrametric", is_ultrametric(D))
    D = _load_matrix(args.file)
    if args.jobs > 1:
        labels = range(1, D.n + 1)
        quads = list(
            combinations(labels, 4) if args.strict else combinations_with_replacement(labels, 4)
        )
        results = _pmap(partial(_quad_worker, D), quads, args.jobs)
        verdict = Verdict(True)
        for quad, (ok, vals) in zip(quads, results):
            if not ok:
                verdict = Verdict(False, witness=quad, values=vals)
                break
    else:
        verdict = four_point_check(D, strict=args.strict)
    return _print_verdict("four-point", verdict, {"strict": args.strict})


def _cmd_membership3(args) -> int:
    W = _load_tensor(args.tensor)
    result = triple_membership(W)
    obj: dict = {"member": result.is_member, "stage": result.stage}
    if result.is_member:
        obj["matrix"] = result.matrix.to_json_obj()
        obj["newick"] = serialize_newick(result.tree) if result.tree is not None else None
        if result.note:
            obj["note"] = result.note
        print("member: yes" + ("" if result.tree else " (no non-negative realization)"), file=sys.stderr)
    else:
        obj["witness"] = _jsonable(result.witness)
        obj["values"] = _jsonable(result.values)
        if result.note:
            obj["note"] = result.note
        print(f"member: no, failed at stage {result.stage!r}", file=sys.stderr)
    _emit(json.dumps(obj, indent=2), args.out)
    return 0 if result.is_member else 1


def _cmd_certify3(args) -> int:
    tree = parse_newick(_read(args.tree))
    cert = build_certificate(tree)
    W = triple_dissimilarity(distance_matrix(tree))
    triples = list(combinations(range(1, tree.n + 1), 3))
    vals = _pmap(partial(_minor_worker, cert), triples, args.jobs)
    failure = None
    for triple, minor_val in zip(triples, vals):
        got = -minor_val
        want = W.entries[triple]
        mark = "=" if got == want else "!="
        got_str = repr(got) if isinstance(got, float) else format_rational(got)
        print(
            f"{triple[0]},{triple[1]},{triple[2]}: {format_rational(want)} {mark} {got_str}",
            file=sys.stderr,
        )
        if failure is None and got != want:
            failure = (triple, got, want)
    if failure is not None:
        triple, got, want = failure
        print(
            json.dumps(
                {
                    "check": "certificate",
                    "pass": False,
                    "witness": _jsonable(triple),
                    "values": _jsonable((got, want)),
                }
            )
        )
        return 1
    print(f"verified {len(triples)} triples: PASS", file=sys.stderr)
    _emit(cert.to_json(), args.out)
    return 0


def _cmd_random_tree(args) -> int:
    tree = random_tree(args.n, args.seed, shape=args.shape)
    _emit(serialize_newick(tree), args.out)
    return 0


def _cmd_count_topologies(args) -> int:
    count = sum(1 for _ in enumerate_topologies(args.n))
    _emit(str(count), args.out)
    return 0


def _cmd_reconstruct(args) -> int:
    D = _load_matrix(args.file)
    try:
        tree = reconstruct_tree(D)
    except FourPointViolation as exc:
        return _print_verdict("tree-metric", exc.verdict)
    if distance_matrix(tree) != D:
        raise RuntimeError("reconstruction did not reproduce the input matrix; please report")
    _emit(serialize_newick(tree), args.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treedissim",
        description="Exact subset dissimilarity maps of weighted trees, membership checks, and valuation certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dissim", help="compute the m-subset dissimilarity tensor of a tree")
    p.add_argument("--tree", required=True, help="Newick file")
    p.add_argument("--m", type=int, required=True, help="subset size (2..n)")
    p.add_argument("--method", choices=["auto", "tours", "dp"], default="auto")
    p.add_argument("--oracle", action="store_true", help="cross-check every entry against the subtree-weight oracle")
    p.add_argument("--out", help="write the tensor JSON here instead of stdout")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_dissim)

    p = sub.add_parser("check", help="run a membership predicate on a matrix or tensor file")
    p.add_argument("file", help="DistanceMatrix or DissimTensor JSON file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--metric", action="store_true", help="four-point condition on a matrix")
    group.add_argument("--ultra", action="store_true", help="ultrametric condition on a matrix")
    group.add_argument("--tmn", type=int, metavar="M", help="three-term relations on an m=M tensor")
    group.add_argument("--m4", action="store_true", help="pairing-coordinate agreement on a matrix")
    p.add_argument("--strict", action="store_true", help="with --metric: distinct quadruples only")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("membership3", help="decide whether an m=3 tensor comes from a tree")
    p.add_argument("tensor", help="DissimTensor JSON file with m=3, n >= 5")
    p.add_argument("--out", help="write the decision JSON here instead of stdout")
    p.set_defaults(func=_cmd_membership3)

    p = sub.add_parser("certify3", help="build and verify a valuation certificate for a tree")
    p.add_argument("--tree", required=True, help="Newick file with strictly positive weights")
    p.add_argument("--out", help="write the certificate JSON here instead of stdout")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_certify3)

    p = sub.add_parser("random-tree", help="generate a seeded random tree")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--shape", choices=["uniform-topology", "caterpillar"], default="uniform-topology")
    p.add_argument("--out", help="write the Newick string here instead of stdout")
    p.set_defaults(func=_cmd_random_tree)

    p = sub.add_parser("count-topologies", help="count unrooted binary topologies by enumeration")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="write the count here instead of stdout")
    p.set_defaults(func=_cmd_count_topologies)

    p = sub.add_parser("reconstruct", help="rebuild the tree realizing a tree metric")
    p.add_argument("file", help="DistanceMatrix JSON file")
    p.add_argument("--out", help="write the Newick string here instead of stdout")
    p.set_defaults(func=_cmd_reconstruct)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (None, 0) else int(exc.code)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
