"""Command-line entry point: ``h3lab <subcommand> ...``.

Every subcommand prints one JSON report (sorted keys, no timestamps) to
stdout or ``--out``. Certificates go to sibling files ``<out>.<name>.cert.json``
when ``--out`` is given and are embedded in the report otherwise.

Exit codes: 0 success or verified, 1 refutation or violation, 2
indeterminate (budget exhausted), 3 usage or I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .core.certificate import Certificate
from .core.embed import Host
from .core.graph import GENERATORS, ThreeGraph
from .core.io import FormatError, dumps_h3, read_h3
from .errors import BudgetExceeded, H3Error, InvalidHomomorphism

EXIT_OK, EXIT_REFUTED, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 3

# RunConfig fields that must not change the primary output
_NOT_HASHED = {"out", "threads", "verbose", "func"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def frac(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def config_hash(args) -> str:
    """Hash of the RunConfig; input files count by content, not just path."""
    inputs = set(getattr(args, "_input_keys", ()))
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in _NOT_HASHED or k.startswith("_"):
            continue
        if k in inputs and v is not None:
            v = {"path": str(v), "sha256": _file_digest(v)}
        cfg[k] = v
    blob = json.dumps(cfg, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def threads_of(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    try:
        return max(1, int(os.environ.get("H3LAB_THREADS", "1")))
    except ValueError:
        return 1


def _load_graph(path) -> ThreeGraph:
    try:
        return read_h3(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from exc


def load_host(d: dict) -> Host:
    """A Host from a pair, stepup or explicit coloring container."""
    from .colorings.pair import PairConstruction, materialize
    from .colorings.stepup import StepUpColoring, stepup_host

    d = d.get("container", d)
    kind = d.get("type")
    try:
        if kind == "pair":
            return materialize(PairConstruction.from_dict(d))
        if kind == "stepup":
            return stepup_host(StepUpColoring.from_dict(d))
        if kind == "explicit":
            return Host.from_red_triples(int(d["N"]), [tuple(t) for t in d["red"]])
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"malformed {kind} container: {exc}") from exc
    raise UsageError(f"unknown coloring container type {kind!r}")


# --- subcommands -------------------------------------------------------------


def cmd_gen(args):
    gen = GENERATORS.get(args.name)
    if gen is None:
        raise UsageError(f"unknown generator {args.name!r}; choose from {sorted(GENERATORS)}")
    try:
        H = gen(*[int(x) for x in args.params])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{args.name}: {exc}") from exc
    return {"text": dumps_h3(H)}, EXIT_OK


def cmd_mpair(args):
    from .pairdensity import mpair_exact

    H = _load_graph(args.file)
    orderings = "all" if args.orderings == "all" else [tuple(range(H.n))]
    res = mpair_exact(H, orderings=orderings, symmetry=not args.no_symmetry,
                      threads=threads_of(args), budget=args.budget)
    out = {"mpair": frac(res.value), "orderings_searched": res.orderings_searched,
           "n": H.n, "e": H.e}
    return out, EXIT_OK, {"mpair": res.certificate()}


def cmd_avoidable(args):
    from .pairdensity import is_avoidable

    H = _load_graph(args.file)
    ok, cert = is_avoidable(H, symmetry=not args.no_symmetry)
    return {"avoidable": ok, "mpair": cert.witness["mpair"]}, (EXIT_OK if ok else EXIT_REFUTED), {"avoidable": cert}


def cmd_inducible(args):
    from .pairdensity import inducibility_certificate

    H = _load_graph(args.file)
    cert = inducibility_certificate(H, budget=args.budget)
    ok = cert.claim == "123-inducible"
    return {"inducible": ok, "nodes": cert.witness["nodes"]}, (EXIT_OK if ok else EXIT_REFUTED), {"inducible": cert}


def find_build_sequence(H: ThreeGraph):
    """Edges ordered so each shares at most one pair with the shadow of the earlier ones."""
    remaining = list(H.edges)
    seen: set = set()
    seq = []
    while remaining:
        best = None
        for e in remaining:
            u, v, w = e
            old = sum(p in seen for p in ((u, v), (v, w), (u, w)))
            if old <= 1 and (best is None or old > best[0]):
                best = (old, e)
                if old == 1:
                    break
        if best is None:
            return None
        e = best[1]
        remaining.remove(e)
        seq.append(e)
        u, v, w = e
        seen.update(((u, v), (v, w), (u, w)))
    return seq


def cmd_check_hom(args):
    from .pairdensity import PairPartition, check_pair_homomorphism, iterative_witness

    H = _load_graph(args.file)
    try:
        if args.witness:
            w = _load_json(args.witness)
            w = w.get("witness", w)
            value = check_pair_homomorphism(H, w["ordering"], w["blocks"])
            pp = PairPartition.build(H, w["ordering"], w["blocks"])
        else:
            seq = find_build_sequence(H)
            if seq is None:
                raise UsageError("no build sequence with at most one repeated pair per edge; pass a witness file")
            pp = iterative_witness(H, seq)
            value = check_pair_homomorphism(H, pp.ordering, pp.block_lists())
    except InvalidHomomorphism as exc:
        return {"valid": False, "error": str(exc)}, EXIT_REFUTED
    except KeyError as exc:
        raise UsageError(f"witness is missing field {exc}") from exc
    cert = Certificate("pair-homomorphism", dict(pp.to_witness(), value=frac(value)))
    return {"valid": True, "value": frac(value), "below_half": value < Fraction(1, 2)}, EXIT_OK, {"homomorphism": cert}


def cmd_color(args):
    from .colorings.gcheck import build_g, matching_g, verify_g
    from .colorings.pair import PairConstruction, decode_g, g_from_red, random_f
    from .colorings.stepup import StepUpColoring, cycle_graph

    if args.kind == "stepup":
        if args.graph == "cycle":
            edges = cycle_graph(args.m)
        elif args.graph == "path":
            edges = tuple((i, i + 1) for i in range(args.m - 1))
        elif args.graph == "empty":
            edges = ()
        else:
            edges = tuple(tuple(e) for e in _load_json(args.graph)["edges"])
        try:
            sc = StepUpColoring(args.m, edges)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return {"container": sc.to_dict()}, EXIT_OK
    t = args.t
    k_max = args.k_max
    info = None
    if args.g_file:
        d = _load_json(args.g_file)
        if "g" in d:
            g = decode_g(d["g"], int(d["t"]))
        else:
            g = g_from_red(int(d["t"]), [tuple(a) for a in d["red"]])
        if g.shape[0] != t:
            raise UsageError(f"g file has t={g.shape[0]}, expected {t}")
    elif args.g == "matching":
        g = matching_g(t, args.seed)
    else:
        g, _, info = build_g(t, args.eps, k_max, args.seed, delta=args.delta, p=args.p)
    report = verify_g(g, t, k_max, args.eps, trials=args.trials, seed=args.seed)
    pc = PairConstruction(args.N, t, random_f(args.N, t, args.seed), g, args.seed)
    out = {"container": pc.to_dict(), "g_report": report.to_dict()}
    if info is not None:
        out["alteration"] = {k: v for k, v in info.items() if k != "kept"}
    return out, EXIT_OK


def _blue_from_args(args):
    from .ramsey import BlueTarget

    if getattr(args, "blue_nnn", None) is not None:
        return BlueTarget("nnn", args.blue_nnn)
    if getattr(args, "blue", None) is not None:
        return BlueTarget("clique", args.blue)
    return None


def cmd_scan(args):
    from .colorings.search import find_blue_clique, find_blue_ordered_tripartite
    from .core.embed import find_copy

    host = load_host(_load_json(args.coloring))
    out: dict = {"N": host.N}
    certs = {}
    found_any = False
    try:
        if args.red:
            H = _load_graph(args.red)
            c = find_copy(host, H, "red", budget=args.budget)
            out["red_copy"] = c is not None
            found_any |= c is not None
            if c:
                certs["red"] = c
        if args.blue_clique is not None:
            r = find_blue_clique(host, args.blue_clique, budget=args.budget, seed=args.seed)
            out["blue_clique"] = {"found": r.found, "exhaustive": r.exhaustive}
            found_any |= r.found
            if r.certificate:
                certs["blue_clique"] = r.certificate
        if args.blue_tripartite is not None:
            r = find_blue_ordered_tripartite(host, args.blue_tripartite, budget=args.budget, seed=args.seed)
            out["blue_tripartite"] = {"found": r.found, "exhaustive": r.exhaustive}
            found_any |= r.found
            if r.certificate:
                certs["blue_tripartite"] = r.certificate
    except BudgetExceeded as exc:
        out["indeterminate"] = {"nodes": exc.nodes}
        return out, EXIT_INDETERMINATE, certs
    return out, (EXIT_REFUTED if found_any else EXIT_OK), certs


def cmd_steiner(args):
    from .core.io import write_h3
    from .randstruct import (
        check_cover_property1,
        check_cover_property2,
        check_cover_property3,
        count_b_copies,
        expected_retained,
        sample_linear_system,
    )

    F, rep = sample_linear_system(args.k, args.seed, args.p)
    out = rep.to_dict()
    out["b_copies_after"] = count_b_copies(F.edges)
    out["expected_edges_first_order"] = round(expected_retained(args.k, rep.p), 6)
    checks = [int(x) for x in args.check.split(",")] if args.check else []
    rng = np.random.default_rng(args.seed + 1)
    k = args.k
    lk = math.log(k)
    if 1 in checks:
        out["property1"] = check_cover_property1(F, trials=args.samples, seed=args.seed).to_dict()
    if 2 in checks:
        s_size = min(k // 3, math.floor(lk ** 2) + 1)
        t_size = min(k - s_size, math.floor(math.sqrt(k) * lk) + 1)
        fails = 0
        for _ in range(args.samples):
            perm = rng.permutation(k)
            holds, _ = check_cover_property2(F, perm[:s_size].tolist(), perm[s_size:s_size + t_size].tolist())
            fails += not holds
        out["property2"] = {"trials": args.samples, "failures": fails, "S": s_size, "T": t_size}
    if 3 in checks:
        s_size = min(k // 3, math.floor(lk ** 2) + 1)
        part = max(1, math.floor(math.sqrt(k) * lk))
        union = min(k - s_size, max(2 * part, math.ceil(k / (16 * lk))))
        below = 0
        for _ in range(args.samples):
            perm = rng.permutation(k).tolist()
            S = perm[:s_size]
            rest = perm[s_size:s_size + union]
            parts = [rest[i:i + part] for i in range(0, len(rest), part)]
            r = check_cover_property3(F, S, parts)
            below += not r["meets_threshold"]
        out["property3"] = {"trials": args.samples, "below_threshold": below}
    if args.h3_out:
        write_h3(F, args.h3_out)
        out["h3"] = str(args.h3_out)
    return out, EXIT_OK


def cmd_sparse(args):
    from .randstruct import sample_sparse_graph

    edges, rep = sample_sparse_graph(args.m, args.k, args.n, args.seed, args.p, trials=args.samples)
    out = rep.to_dict()
    out["edge_list"] = [list(e) for e in edges]
    return out, EXIT_OK


def cmd_ramsey(args):
    from .ramsey import ramsey_number

    H = _load_graph(args.red)
    blue = _blue_from_args(args)
    if blue is None:
        raise UsageError("ramsey needs --blue q or --blue-nnn n")
    try:
        value, log = ramsey_number(H, blue, args.max_N, mode=args.mode, budget=args.budget)
    except BudgetExceeded as exc:
        return {"indeterminate": str(exc)}, EXIT_INDETERMINATE
    out = {"ramsey_number": value, "blue": blue.label(), "max_N": args.max_N, "scan": log}
    return out, (EXIT_OK if value is not None else EXIT_REFUTED)


def cmd_verify(args):
    from .ramsey import verify_coloring

    host = load_host(_load_json(args.coloring))
    H = _load_graph(args.red)
    verdict, rep = verify_coloring(host, H, _blue_from_args(args), budget=args.budget)
    code = {"no-violation": EXIT_OK, "violation": EXIT_REFUTED, "indeterminate": EXIT_INDETERMINATE}[verdict]
    certs = {}
    for key in ("red", "blue"):
        if key in rep and rep[key].get("certificate"):
            certs[key] = Certificate.from_dict(rep[key].pop("certificate"))
        elif key in rep:
            rep[key].pop("certificate", None)
    return {"verdict": verdict, **rep}, code, certs


def cmd_selftest(args):
    from .acceptance import run_all

    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(only=only, log=sys.stderr)
    out = {"criteria": [{"id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail}
                        for r in results]}
    return out, (EXIT_OK if all(r.passed for r in results) else EXIT_REFUTED)


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default $H3LAB_THREADS or 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="node budget for searches")
    common.add_argument("-v", "--verbose", action="store_true", help="timing and progress on stderr")

    p = _Parser(prog="h3lab", description="Pair densities, colorings and small Ramsey searches for 3-graphs.")
    p.add_argument("--version", action="version", version=f"h3lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", parents=[common], help="write a named 3-graph as .h3")
    s.add_argument("name", help=", ".join(sorted(GENERATORS)))
    s.add_argument("params", nargs="*")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("mpair", parents=[common], help="exact m_pair with an optimal partition")
    s.add_argument("file", type=Path)
    s.add_argument("--orderings", choices=["all", "identity"], default="all")
    s.add_argument("--no-symmetry", action="store_true", help="search all orderings, not one per orbit")
    s.set_defaults(func=cmd_mpair, _input_keys=("file",))

    s = sub.add_parser("avoidable", parents=[common], help="decide avoidability two ways")
    s.add_argument("file", type=Path)
    s.add_argument("--no-symmetry", action="store_true")
    s.set_defaults(func=cmd_avoidable, _input_keys=("file",))

    s = sub.add_parser("inducible", parents=[common], help="decide 123-inducibility")
    s.add_argument("file", type=Path)
    s.set_defaults(func=cmd_inducible, _input_keys=("file",))

    s = sub.add_parser("check-hom", parents=[common], help="validate a pair homomorphism and report its density")
    s.add_argument("file", type=Path)
    s.add_argument("witness", type=Path, nargs="?",
                   help="JSON with ordering and blocks; omitted = build the iterative witness")
    s.set_defaults(func=cmd_check_hom, _input_keys=("file", "witness"))

    s = sub.add_parser("color", help="emit a coloring container")
    csub = s.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    cp = csub.add_parser("pair", parents=[common],
                         help="random pair construction (the asymptotic regime t = n^eps, N = 2^(cn log n) is far "
                              "beyond desk scale; defaults are small)")
    cp.add_argument("--N", type=int, required=True)
    cp.add_argument("--t", type=int, required=True)
    cp.add_argument("--eps", type=float, default=0.5)
    cp.add_argument("--k-max", type=int, default=10, help="condition-2 bound, C(v(H), 2)")
    cp.add_argument("--g", choices=["build", "matching"], default="build")
    cp.add_argument("--g-file", type=Path)
    cp.add_argument("--delta", type=float, default=0.0)
    cp.add_argument("--p", type=float, default=None)
    cp.add_argument("--trials", type=int, default=1000)
    cp.set_defaults(func=cmd_color, _input_keys=("g_file",))
    cs = csub.add_parser("stepup", parents=[common], help="stepping-up coloring on 2^m vertices")
    cs.add_argument("--m", type=int, required=True)
    cs.add_argument("--graph", default="cycle", help="cycle, path, empty, or a JSON file with 'edges'")
    cs.set_defaults(func=cmd_color)

    s = sub.add_parser("scan", parents=[common], help="search a coloring for red H and blue patterns")
    s.add_argument("coloring", type=Path)
    s.add_argument("--red", type=Path)
    s.add_argument("--blue-clique", type=int)
    s.add_argument("--blue-tripartite", type=int)
    s.set_defaults(func=cmd_scan, _input_keys=("coloring", "red"))

    s = sub.add_parser("steiner", parents=[common], help="random linear triple system")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--check", default="", help="comma list of properties 1,2,3")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--h3-out", type=Path)
    s.set_defaults(func=cmd_steiner)

    s = sub.add_parser("sparse", parents=[common], help="sparse graph with small independence number")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_sparse)

    s = sub.add_parser("ramsey", parents=[common], help="least N forcing red H or the blue target")
    s.add_argument("--red", type=Path, required=True)
    s.add_argument("--blue", type=int, help="blue clique size q")
    s.add_argument("--blue-nnn", type=int, help="blue ordered K_{n,n,n} size n")
    s.add_argument("--max-N", type=int, required=True)
    s.add_argument("--mode", choices=["auto", "exhaustive", "backtracking"], default="auto")
    s.set_defaults(func=cmd_ramsey, _input_keys=("red",))

    s = sub.add_parser("verify", parents=[common], help="check a coloring has no red H and no blue target")
    s.add_argument("coloring", type=Path)
    s.add_argument("--red", type=Path, required=True)
    s.add_argument("--blue", type=int)
    s.add_argument("--blue-nnn", type=int)
    s.set_defaults(func=cmd_verify, _input_keys=("coloring", "red"))

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    s.add_argument("--only", default="", help="comma list of criterion numbers")
    s.set_defaults(func=cmd_selftest)
    return p


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        res = args.func(args)
        chash = config_hash(args)
    except UsageError as exc:
        sys.stderr.write(f"h3lab: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"h3lab: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        sys.stderr.write(f"h3lab: indeterminate: {exc} (nodes={exc.nodes})\n")
        return EXIT_INDETERMINATE
    except (H3Error, ValueError) as exc:
        sys.stderr.write(f"h3lab: {exc}\n")
        return EXIT_USAGE
    result, code = res[0], res[1]
    certs = res[2] if len(res) > 2 else {}
    if args.command == "gen":
        _emit(result["text"], args.out)
    else:
        report = {"command": args.command, "version": __version__, "config_hash": chash}
        if certs:
            refs = {}
            for name, cert in sorted(certs.items()):
                if args.out is not None:
                    path = Path(f"{args.out}.{name}.cert.json")
                    path.write_text(cert.to_json() + "\n")
                    refs[name] = path.name
                else:
                    refs[name] = cert.to_dict()
            report["certificates"] = refs
        report.update(result)
        _emit(json.dumps(report, sort_keys=True, indent=1) + "\n", args.out)
    if args.verbose:
        sys.stderr.write(f"h3lab {args.command}: {time.perf_counter() - t0:.3f}s, exit {code}\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
