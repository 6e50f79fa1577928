"""Command-line front end.

Every subcommand prints one JSON report on stdout and a one-line summary on
stderr. Exit codes: 0 verified (or ran to an inconclusive verdict where that
is the expected outcome), 1 verification failed, 2 budget exceeded, 64 usage
error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional, Sequence

from . import __version__
from .freealg import PolySyntaxError, parse_poly
from .rewrite import DEFAULT_BUDGET, BudgetExceeded, CompletionError, complete, irreducible_words, normalize

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAILED, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _report(task: str, params: dict, verdict: str, result: dict, seconds: float) -> dict:
    return {"schema_version": SCHEMA_VERSION, "engine": f"matpres {__version__}", "task": task,
            "params": params, "verdict": verdict, "result": result, "timing": {"seconds": round(seconds, 3)}}


def _emit(report: dict, summary: str) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(summary, file=sys.stderr)


def _need(cond: bool, msg: str):
    if not cond:
        raise UsageError(msg)


def _write_json(path: str, data: dict) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh)
        fh.write("\n")


_CERT_VERDICT = {"certified": ("certified", EXIT_OK), "not certified": ("failed", EXIT_FAILED),
                 "budget-exceeded": ("budget-exceeded", EXIT_BUDGET)}


# -- subcommands -------------------------------------------------------

def cmd_certify(args) -> int:
    from .isocert import certify_isomorphism
    _need(args.n >= 2, f"--n must be >= 2, got {args.n}")
    _need(args.budget >= 0, "--budget must be non-negative")
    t0 = time.perf_counter()
    cert = certify_isomorphism(args.n, args.budget, jobs=args.jobs)
    return _finish_cert("certify", {"n": args.n, "budget": args.budget}, cert, args, t0)


def cmd_certify_mod(args) -> int:
    from .isocert import verify_modN
    _need(args.n >= 2, f"--n must be >= 2, got {args.n}")
    _need(args.N >= 2, f"--N must be >= 2, got {args.N}")
    _need(args.budget >= 0, "--budget must be non-negative")
    t0 = time.perf_counter()
    cert = verify_modN(args.n, args.N, args.budget)
    return _finish_cert("certify-mod", {"n": args.n, "N": args.N, "budget": args.budget}, cert, args, t0)


def _finish_cert(task, params, cert, args, t0) -> int:
    data = cert.to_json(include_traces=False)
    if task == "certify-mod":
        # the N*a[n-1][n-1] derivation is short; always inline it
        comp = next(c for c in cert.components if c.name == "additive_exponent")
        data["exponent_traces"] = [t.to_json(cert.systems) for t in comp.report.traces
                                   if t.label.startswith(("N*a[", "N*1", "N*x", "sum a"))][:3]
    if args.trace:
        _write_json(args.trace, cert.to_json(include_traces=True))
        data["trace_file"] = args.trace
    verdict, code = _CERT_VERDICT[cert.verdict]
    _emit(_report(task, params, verdict, data, time.perf_counter() - t0),
          f"{task}: {cert.to_json()['target']} {cert.verdict}"
          + (f" (failing: {', '.join(cert.failing())})" if cert.failing() else ""))
    return code


def _load_presentation(args):
    from .presentations import parse_presentation, preset
    _need(bool(args.preset) != bool(args.file), "give exactly one of --preset or --file")
    try:
        if args.preset:
            return preset(args.preset)
        with open(args.file) as fh:
            return parse_presentation(fh.read())
    except (ValueError, OSError) as e:
        raise UsageError(str(e)) from None


def cmd_normalize(args) -> int:
    pr = _load_presentation(args)
    _need(args.budget >= 0, "--budget must be non-negative")
    try:
        p = parse_poly(args.poly, pr.names, pr.ring)
        sys_ = pr.rewrite_system()
    except (PolySyntaxError, ValueError) as e:
        raise UsageError(str(e)) from None
    t0 = time.perf_counter()
    params = {"presentation": pr.to_dict(), "poly": args.poly, "budget": args.budget}
    try:
        q, tr = normalize(p, sys_, args.budget)
    except BudgetExceeded as e:
        if args.trace:
            with open(args.trace, "w") as fh:
                fh.write(e.trace.to_text(sys_))
        _emit(_report("normalize", params, "budget-exceeded", {"steps": len(e.trace)}, time.perf_counter() - t0),
              f"normalize: budget of {args.budget} steps exhausted")
        return EXIT_BUDGET
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(tr.to_text(sys_))
    nf = q.format(pr.names)
    res = {"normal_form": nf, "steps": len(tr), "system": sys_.to_dict()}
    if args.trace:
        res["trace_file"] = args.trace
    if args.plain:
        print(nf)
        print(f"normalize: {len(tr)} steps", file=sys.stderr)
    else:
        _emit(_report("normalize", params, "certified", res, time.perf_counter() - t0), f"normalize: {nf}")
    return EXIT_OK


def cmd_lemma1(args) -> int:
    from .isocert import verify_lemma1
    _need(args.n >= 2, f"--n must be >= 2, got {args.n}")
    t0 = time.perf_counter()
    rep = verify_lemma1(args.n, args.max_exponent, args.budget, keep_traces=False)
    verdict = {"verified": "certified", "failed": "failed", "budget-exceeded": "budget-exceeded"}[rep.verdict]
    code = {"certified": EXIT_OK, "failed": EXIT_FAILED, "budget-exceeded": EXIT_BUDGET}[verdict]
    _emit(_report("lemma1", {"n": args.n, "max_exponent": rep.params["max_exponent"], "budget": args.budget},
                  verdict, rep.summary(), time.perf_counter() - t0),
          f"lemma1: {len(rep.instances)} instances, {len(rep.failures())} mismatches")
    return code


def cmd_variant2(args) -> int:
    from .matrep import NotFound, dual_number_witness
    _need(args.n >= 2, f"--n must be >= 2, got {args.n}")
    t0 = time.perf_counter()
    try:
        w = dual_number_witness(args.n)
    except NotFound as e:
        _emit(_report("variant2", {"n": args.n}, "inconclusive", {"witness": None, "reason": str(e)},
                      time.perf_counter() - t0), f"variant2: no witness ({e})")
        return EXIT_OK
    ok = w.verdict.ok and not w.x_power.is_zero()
    res = w.to_json()
    res["conclusion"] = ("the presented ring maps onto a ring where x^n != 0, so it is not Mat_n(Z)"
                         if ok else "witness check failed")
    _emit(_report("variant2", {"n": args.n}, "certified" if ok else "failed", res, time.perf_counter() - t0),
          f"variant2: witness {'verified' if ok else 'FAILED'}; x^{args.n} = {w.x_power.to_json()}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_guralnick(args) -> int:
    from .matrep import additive_closure, check_relations, cyclic_assignment
    from .presentations import guralnick
    from .rings import is_prime
    _need(is_prime(args.p), f"--p must be prime, got {args.p}")
    t0 = time.perf_counter()
    pr = guralnick(args.p)
    a = cyclic_assignment(args.p)
    rel = check_relations(pr, a)
    gen = additive_closure(list(a.matrices)).is_full()
    params = {"p": args.p, "budget": args.budget, "max_rules": args.max_rules}
    try:
        done = complete(pr.rewrite_system(), args.budget, args.max_rules, pr.letter_order)
    except BudgetExceeded:
        _emit(_report("guralnick", params, "budget-exceeded", {"relations": rel.to_json(), "generation": gen},
                      time.perf_counter() - t0), "guralnick: completion ran out of budget")
        return EXIT_BUDGET
    except CompletionError as e:
        _emit(_report("guralnick", params, "failed", {"completion_error": str(e)}, time.perf_counter() - t0),
              f"guralnick: completion stopped: {e}")
        return EXIT_FAILED
    words, finite = irreducible_words(done, 4 * args.p * args.p)
    order = args.p ** len(words) if finite else None
    expected = args.p ** (args.p * args.p)
    ok = rel.ok and gen and order == expected
    res = {"relations": rel.to_json(), "generation": gen, "assignment": a.to_json(),
           "completed_system": done.to_dict(),
           "irreducible_words": [_fmt(w, done.names) for w in words],
           "finite": finite, "quotient_order": order, "matrix_ring_order": expected}
    _emit(_report("guralnick", params, "certified" if ok else "failed", res, time.perf_counter() - t0),
          f"guralnick: quotient order {order}, |Mat_{args.p}(F_{args.p})| = {expected}")
    return EXIT_OK if ok else EXIT_FAILED


def _fmt(w, names):
    from .freealg import format_word
    return format_word(w, names)


def cmd_relmod(args) -> int:
    from .relmod import generator_set, theorem3_check
    _need(args.n >= 1 and args.d >= 1, "--n and --d must be >= 1")
    t0 = time.perf_counter()
    try:
        mats = generator_set(args.gens, args.n, args.d)
        rep = theorem3_check(args.n, args.d, mats, args.gens)
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = rep.to_json()
    _emit(_report("relmod", {"n": args.n, "d": args.d, "gens": args.gens},
                  "certified" if rep.holds else "failed", res, time.perf_counter() - t0),
          f"relmod: rank(L~) = {rep.rank_L}, bound n^2(d-1)+n = {rep.bound}: {rep.verdict}")
    return EXIT_OK if rep.holds else EXIT_FAILED


def cmd_bimod(args) -> int:
    from .freealg import FreePoly
    from .presentations import kassabov
    from .relmod import Member, bimodule_membership
    n = args.n
    _need(n >= 2, f"--n must be >= 2, got {n}")
    D = args.D if args.D is not None else 3 * n
    names = ("x", "y")
    corner = "y^%d*x^%d" % (n - 1, n - 1)
    gens = [parse_poly(f"x*y + {corner} - 1", names), parse_poly(f"x*y^{n} + y*x^{n}", names)]
    try:
        targets = [parse_poly(t, names) for t in (args.target or [f"x^{n}", f"y^{n}"])]
    except PolySyntaxError as e:
        raise UsageError(str(e)) from None
    _need(all(D >= t.degree() for t in targets), "--D is below a target degree")
    rels = list(kassabov(n).relations)
    t0 = time.perf_counter()
    out = []
    all_ok = True
    for t in targets:
        per_d = []
        for d in range(max(t.degree(), 0), D + 1):
            res = bimodule_membership(t, gens, rels, d, names)
            entry = res.to_json(names)
            if isinstance(res, Member):
                valid = res.expand(t.ring, 2) == t
                entry["witness_valid"] = valid
                all_ok &= valid
            per_d.append(entry)
        out.append({"target": t.format(names), "by_degree": per_d, "final": per_d[-1]["verdict"]})
    params = {"n": n, "D": D, "generators": [g.format(names) for g in gens],
              "relations": [r.format(names) for r in rels]}
    verdict = "failed" if not all_ok else ("certified" if all(o["final"] == "member" for o in out) else "inconclusive")
    _emit(_report("bimod", params, verdict, {"targets": out}, time.perf_counter() - t0),
          "bimod: " + ", ".join(f"{o['target']}: {o['final']}" for o in out))
    return EXIT_OK if all_ok else EXIT_FAILED


def cmd_replay(args) -> int:
    from .replay import replay_certificate
    try:
        with open(args.certificate) as fh:
            cert = json.load(fh)
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read certificate: {e}") from None
    t0 = time.perf_counter()
    rep = replay_certificate(cert, args.jobs)
    _emit(_report("replay", {"certificate": args.certificate}, "certified" if rep.ok else "failed",
                  rep.to_json(), time.perf_counter() - t0),
          f"replay: {'ok' if rep.ok else 'FAILED'} ({len(rep.results)} traces, {rep.steps} steps)")
    return EXIT_OK if rep.ok else EXIT_FAILED


# -- parser ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="matpres", description="Verify presentations of matrix rings.")
    ap.add_argument("--version", action="version", version=f"matpres {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, trace=True):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max reduction steps per normalization")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        if trace:
            p.add_argument("--trace", metavar="PATH", help="write full traces to PATH")

    p = sub.add_parser("certify", help="certify the n-relation presentation defines Mat_n(Z)")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("certify-mod", help="certify the mod-N presentation defines Mat_n(Z/N)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_certify_mod)

    p = sub.add_parser("normalize", help="reduce a polynomial to normal form")
    p.add_argument("--preset", help="kassabov:n, kassabov-mod:n,N, guralnick:p or variant2:n")
    p.add_argument("--file", help="presentation file")
    p.add_argument("--poly", required=True)
    p.add_argument("--plain", action="store_true", help="print only the normal form on stdout")
    common(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("lemma1", help="sweep x^k y^l x^m against the closed form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-exponent", type=int, default=None)
    common(p, trace=False)
    p.set_defaults(func=cmd_lemma1)

    p = sub.add_parser("variant2", help="dual-number witness for the two-relation variant")
    p.add_argument("--n", type=int, required=True)
    common(p, trace=False)
    p.set_defaults(func=cmd_variant2)

    p = sub.add_parser("guralnick", help="check the presentation of Mat_p(F_p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--max-rules", type=int, default=64)
    common(p, trace=False)
    p.set_defaults(func=cmd_guralnick)

    p = sub.add_parser("relmod", help="relation-module rank check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--gens", default="shift", help="shift, swapped, sum or units")
    common(p, trace=False)
    p.set_defaults(func=cmd_relmod)

    p = sub.add_parser("bimod", help="bounded relation-module membership")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--D", type=int, default=None, help="degree bound (default 3n)")
    p.add_argument("--target", action="append", help="target polynomial (repeatable; default x^n, y^n)")
    common(p, trace=False)
    p.set_defaults(func=cmd_bimod)

    p = sub.add_parser("replay", help="independently replay a certificate written with --trace")
    p.add_argument("certificate")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("matpres: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"matpres {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
