"""Command-line front end: ``z2e <command> [flags]``.

Exit codes: 0 success or Yes, 1 No or failed check, 2 Unknown or
inconclusive, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import chains
from .complexes import ComplexError, Graph, JoinComplex
from .conditions import KnComplex, OctMatrix, basis_size, check_all, graph_criterion_check
from .criterion import substrate, symmetric_generators
from .delprod import (
    DecompositionError,
    deleted_product,
    generator_decomposition,
    graph_symmetric_decomposition,
    random_symmetric_cycle,
)
from .gram import OmegaSpec, gram
from .search import (
    BACKTRACK_NODES,
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    NO,
    UNKNOWN,
    YES,
    Certificate,
    SearchError,
    columns_label,
    decide,
    descriptor,
    parse_complex,
    tabulate_min_beta,
    verify,
)
from .vankampen import cocycle_for_seed, van_kampen_number

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(payload, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _complex(args):
    if not args.complex:
        raise UsageError("--complex is required")
    try:
        return parse_complex(args.complex)
    except (ComplexError, OSError) as exc:
        raise UsageError(str(exc)) from None


def _spec(args) -> OmegaSpec:
    if args.omega is None or args.beta is None:
        raise UsageError("--omega and --beta are required")
    try:
        return OmegaSpec(args.omega, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _homology_dimension(cx) -> int:
    if isinstance(cx, Graph):
        return len(chains.fundamental_cycle_basis(cx)[1])
    return basis_size(cx)


# -- commands -------------------------------------------------------------


def cmd_info(args) -> int:
    cx = _complex(args)
    sub = substrate(cx)
    dp = deleted_product(sub)
    payload = {
        "complex": descriptor(cx),
        "top_faces": len(dp.faces),
        "homology_dimension": _homology_dimension(cx),
        "columns": columns_label(cx),
        "deleted_product_cells": dp.ncells,
        "swap_orbits": len(dp.orbits),
    }
    _emit(payload, args.json, [f"{k}: {v}" for k, v in payload.items()])
    return EXIT_OK


def cmd_dims(args) -> int:
    dp = deleted_product(substrate(_complex(args)))
    payload = {"full": dp.full_cycle_dimension(), "symmetric": dp.symmetric_cycle_dimension()}
    _emit(payload, args.json, [f"full: {payload['full']}", f"symmetric: {payload['symmetric']}"])
    return EXIT_OK


def cmd_delprod(args) -> int:
    cx = _complex(args)
    dp = deleted_product(substrate(cx))
    cells = [[list(dp.faces[i]), list(dp.faces[j])] for i, j in dp.cells]
    payload = {"complex": descriptor(cx), "cells": cells, "orbits": [list(o) for o in dp.orbits]}
    lines = [f"{len(cells)} cells, {len(dp.orbits)} swap orbits"]
    lines += [f"{a} x {b}" for a, b in cells]
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_decompose(args) -> int:
    cx = _complex(args)
    sub = substrate(cx)
    dp = deleted_product(sub)
    c = random_symmetric_cycle(dp, np.random.default_rng(args.seed))
    if isinstance(sub, JoinComplex):
        dec = generator_decomposition(c)
        ok = dec.total(sub).bits == c.bits
        summands = [{"kind": "torus", "p": str(p), "q": str(q)} for p, q in dec.tori]
        summands += [{"kind": "triple", "x": str(x)} for x in dec.triples]
    else:
        pieces = graph_symmetric_decomposition(c)
        total = 0
        for p in pieces:
            total ^= p.cycle.bits
        ok = total == c.bits
        summands = [{"kind": p.kind, "shape": p.shape, "support": [list(e) for e in p.support.edges]}
                    for p in pieces]
    payload = {"complex": descriptor(cx), "seed": args.seed, "cells": len(c),
               "summands": summands, "reconstructs": ok}
    lines = [f"symmetric cycle with {len(c)} cells (seed {args.seed})"]
    lines += [" ".join(f"{k}={v}" for k, v in s.items()) for s in summands]
    lines.append(f"reconstructs: {ok}")
    _emit(payload, args.json, lines)
    return EXIT_OK if ok else EXIT_NO


def cmd_vankampen(args) -> int:
    cx = _complex(args)
    sub = substrate(cx)
    cocycle = cocycle_for_seed(sub, args.seed)
    rows = [{"generator_id": g.id, "v": van_kampen_number(g.cycle, cocycle)}
            for g in symmetric_generators(cx)]
    payload = {"complex": descriptor(cx), "seed": args.seed, "generators": rows}
    _emit(payload, args.json, [f"{r['v']}  {r['generator_id']}" for r in rows])
    return EXIT_OK


def _load_certificate(path: str) -> Certificate:
    try:
        return Certificate.loads(Path(path).read_text())
    except (OSError, ValueError, KeyError, ComplexError, SearchError) as exc:
        raise UsageError(f"cannot read certificate {path}: {exc}") from None


def cmd_check(args) -> int:
    """Conditions on ``A = Y^T Omega Y`` only (no drawings)."""
    cert = _load_certificate(args.certificate)
    cx = parse_complex(cert.complex)
    if isinstance(cx, Graph):
        rep = graph_criterion_check(cx, cert.y, cert.omega.matrix())
        payload = rep.to_json()
        _emit(payload, args.json, [f"verdict: {rep.verdict}"])
        return {"pass": EXIT_OK, "fail": EXIT_NO}.get(rep.verdict, EXIT_UNKNOWN)
    res = check_all(OctMatrix(cx, gram(cert.y, cert.omega)))
    payload = {k: {"ok": v.ok, "violations": [str(x) for x in v.violations[:5]]}
               for k, v in res.items()}
    _emit(payload, args.json, [f"{k}: {'ok' if v.ok else v.violations[0]}" for k, v in res.items()])
    return EXIT_OK if all(v.ok for v in res.values()) else EXIT_NO


def cmd_search(args) -> int:
    cx = _complex(args)
    spec = _spec(args)
    d = decide(cx, spec, budget=args.budget, seed=args.seed, threads=args.threads, nodes=args.nodes)
    if d.certificate is not None and args.out:
        Path(args.out).write_text(d.certificate.dumps() + "\n")
    if args.json or d.verdict == YES:
        payload = d.certificate.to_json() if (d.verdict == YES and not args.json) else d.to_json()
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"{d.verdict}: {d.reason}")
    return {YES: EXIT_OK, NO: EXIT_NO, UNKNOWN: EXIT_UNKNOWN}[d.verdict]


def cmd_verify(args) -> int:
    cert = _load_certificate(args.certificate)
    rep = verify(cert)
    lines = [f"{k}: {'ok' if v is True else v}" for k, v in rep.checks.items()]
    if rep.first_violation:
        lines.append(f"first violation: {rep.first_violation}")
    lines.append("verified" if rep.ok else "rejected")
    _emit(rep.to_json(), args.json, lines)
    return EXIT_OK if rep.ok else EXIT_NO


def _family(args) -> list:
    out = []
    for text in args.instances:
        try:
            out.append(parse_complex(text))
        except (ComplexError, OSError) as exc:
            raise UsageError(str(exc)) from None
    if args.kn:
        lo, _, hi = args.kn.partition("..")
        try:
            out += [KnComplex(n) for n in range(int(lo), int(hi or lo) + 1)]
        except ValueError:
            raise UsageError(f"bad range {args.kn!r} (use a..b)") from None
    if not out:
        raise UsageError("give instances or --kn a..b")
    return out


def cmd_tabulate(args) -> int:
    rows = tabulate_min_beta(_family(args), kinds=args.kinds, budget=args.budget,
                             seed=args.seed, threads=args.threads, nodes=args.nodes)
    payload = [r.to_json() for r in rows]
    lines = [f"{'instance':<16} {'kind':<4} {'min_beta':>8}  exact"]
    lines += [f"{r.instance:<16} {r.kind:<4} {str(r.min_beta):>8}  {r.exact}" for r in rows]
    _emit(payload, args.json, lines)
    return EXIT_OK if all(r.exact for r in rows) else EXIT_UNKNOWN


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--complex", help="join:n1,... | Kn:n | K33 | K5 | graph:FILE | edges:u-v,...")
    common.add_argument("--omega", choices=["I", "H"], type=str.upper)
    common.add_argument("--beta", type=int)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--nodes", type=int, default=BACKTRACK_NODES,
                        help="node limit of the exact backtracking search")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="z2e", description="Z2-embeddings of k-complexes into 2k-manifolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    handlers = {}

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        handlers[name] = fn
        sp.set_defaults(handler=fn)
        return sp

    add("info", cmd_info, "sizes of a complex and its deleted product")
    add("dims", cmd_dims, "full and symmetric top cycle dimensions of the deleted product")
    add("delprod", cmd_delprod, "list deleted product cells")
    add("decompose", cmd_decompose, "decompose a random symmetric cycle into generators")
    add("vankampen", cmd_vankampen, "van Kampen numbers of the symmetric generators")
    add("check", cmd_check, "check the form conditions of a certificate").add_argument("certificate")
    add("verify", cmd_verify, "fully verify a certificate").add_argument("certificate")
    add("search", cmd_search, "decide existence for given Omega").add_argument(
        "--out", help="write the certificate to this file")
    tab = add("tabulate", cmd_tabulate, "least beta per instance")
    tab.add_argument("instances", nargs="*")
    tab.add_argument("--kn", help="range of n for Kn instances, e.g. 4..6")
    tab.add_argument("--kinds", nargs="+", default=["I", "H"], type=str.upper, choices=["I", "H"])
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        parser.error(str(exc))
    except DecompositionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


def run(argv: Sequence[str] | None = None) -> int:
    """Run without exiting; usage errors become exit code 64."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
