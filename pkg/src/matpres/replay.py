"""Independent trace checker.

Knows only free-ring arithmetic (:mod:`matpres.freealg`, :mod:`matpres.rings`)
and the trace text format; it never imports the rewrite engine. Each step
``rule=<id> left="u" right="v" coeff=c`` is recomputed as
``before - c * u * (lhs - rhs) * v`` and compared with the printed polynomial.
"""

from __future__ import annotations

import json
import re
import sys as _sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .freealg import FreePoly, Word, format_word, parse_poly
from .rings import ring_from_spec

_STEP = re.compile(r'^step (\d+): rule=(\S+) left="([^"]*)" right="([^"]*)" coeff=(-?\d+)$')


class ReplayError(Exception):
    pass


@dataclass
class RuleTable:
    ring: object
    names: Tuple[str, ...]
    elements: Dict[str, FreePoly]  # rule id -> lhs - rhs

    @classmethod
    def from_json(cls, data: dict) -> "RuleTable":
        ring = ring_from_spec(data["ring"])
        names = tuple(data["gens"])
        elems = {}
        for r in data["rules"]:
            lhs = parse_poly(r["lhs"], names, ring)
            if len(lhs) != 1 or lhs.coefficient(next(iter(lhs))) != ring.one():
                raise ReplayError(f"rule {r['id']}: lhs {r['lhs']!r} is not a monic word")
            elems[r["id"]] = lhs - parse_poly(r["rhs"], names, ring)
        return cls(ring, names, elems)

    def __post_init__(self):
        self._words: Dict[str, Word] = {}
        cache: Dict[Word, str] = {}

        def word_fmt(w):
            s = cache.get(w)
            if s is None:
                s = cache[w] = format_word(w, self.names)
            return s
        self._word_fmt = word_fmt

    def word(self, text: str) -> Word:
        w = self._words.get(text)
        if w is None:
            p = parse_poly(text, self.names, self.ring)
            if len(p) != 1 or p.coefficient(next(iter(p))) != self.ring.one():
                raise ReplayError(f"{text!r} is not a word")
            (w,) = p.terms
            self._words[text] = w
        return w

    def fmt(self, p: FreePoly) -> str:
        return p.format(self.names, self._word_fmt)


@dataclass
class ReplayResult:
    label: str
    ok: bool
    steps: int = 0
    error: Optional[str] = None


def replay_text(text: str, table: RuleTable, expect: Optional[str] = None,
                span_bound: Optional[int] = None) -> Tuple[int, FreePoly]:
    """Check one trace; returns ``(steps, end)`` or raises :class:`ReplayError`."""
    lines = text.rstrip("\n").split("\n")
    if len(lines) < 2 or not lines[0].startswith("start: ") or not lines[-1].startswith("end: "):
        raise ReplayError("trace must begin with 'start:' and finish with 'end:'")
    names, ring = table.names, table.ring
    cur = parse_poly(lines[0][7:], names, ring)
    body = lines[1:-1]
    if len(body) % 2:
        raise ReplayError("each step line must be followed by one polynomial line")
    word, fmt = table.word, table.fmt
    for k in range(0, len(body), 2):
        m = _STEP.match(body[k])
        if not m:
            raise ReplayError(f"line {k + 2}: malformed step line")
        idx, rid, left, right, coeff = m.groups()
        if int(idx) != k // 2 + 1:
            raise ReplayError(f"line {k + 2}: step numbered {idx}, expected {k // 2 + 1}")
        elem = table.elements.get(rid)
        if elem is None:
            raise ReplayError(f"line {k + 2}: unknown rule {rid!r}")
        c = ring.coerce(int(coeff))
        u, v = word(left), word(right)
        delta = FreePoly._raw({u + w + v: ring.mul(c, a) for w, a in elem.items()}, ring, cur.nvars)
        cur = cur - delta
        after = body[k + 1]
        if not after.startswith("  ") or fmt(cur) != after[2:]:
            raise ReplayError(f"line {k + 3}: step {idx} result differs from recomputation")
    if fmt(cur) != lines[-1][5:]:
        raise ReplayError("end line differs from the replayed polynomial")
    if expect is not None and cur != parse_poly(expect, names, ring):
        raise ReplayError(f"trace ends at {fmt(cur)}, expected {expect}")
    if span_bound is not None:
        for w in cur:
            i = 0
            while i < len(w) and names[w[i]] == "y":
                i += 1
            if any(names[c] != "x" for c in w[i:]) or i >= span_bound or len(w) - i >= span_bound:
                raise ReplayError(f"end term {fmt(cur)} leaves the span of y^a*x^b")
    return len(body) // 2, cur


_TABLES: Dict[str, RuleTable] = {}


def _table(spec: str) -> RuleTable:
    # keyed by the serialized system so worker processes reuse their caches too
    t = _TABLES.get(spec)
    if t is None:
        t = _TABLES[spec] = RuleTable.from_json(json.loads(spec))
    return t


def _check_record(args) -> ReplayResult:
    rec, spec, bound = args
    label = rec.get("label", "?")
    try:
        table = _table(spec)
        steps, _ = replay_text(rec["text"], table, rec.get("expect"),
                               bound if rec.get("expect_span") else None)
        if rec.get("steps") is not None and rec["steps"] != steps:
            return ReplayResult(label, False, steps, "declared step count differs")
        return ReplayResult(label, True, steps)
    except (ReplayError, ValueError, KeyError) as e:
        return ReplayResult(label, False, 0, str(e))


@dataclass
class CertificateReplay:
    results: List[ReplayResult] = field(default_factory=list)
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems and all(r.ok for r in self.results)

    @property
    def steps(self) -> int:
        return sum(r.steps for r in self.results)

    def to_json(self) -> dict:
        bad = [r for r in self.results if not r.ok]
        return {"ok": self.ok, "traces": len(self.results), "steps": self.steps, "problems": self.problems,
                "failures": [{"label": r.label, "error": r.error} for r in bad[:20]]}


def replay_certificate(cert: dict, jobs: int = 1) -> CertificateReplay:
    """Replay every embedded trace of a certificate (parsed JSON)."""
    out = CertificateReplay()
    traces = cert.get("traces")
    if not traces:
        out.problems.append("certificate carries no traces")
        return out
    systems = cert.get("systems", {})
    bound = cert.get("span_basis", {}).get("bound")
    specs = {k: json.dumps(v, sort_keys=True) for k, v in systems.items()}
    tasks = []
    for rec in traces:
        if rec.get("system") not in systems:
            out.problems.append(f"trace {rec.get('label')!r} names unknown system {rec.get('system')!r}")
            continue
        tasks.append((rec, specs[rec["system"]], bound))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            out.results = list(ex.map(_check_record, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        out.results = [_check_record(t) for t in tasks]
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    import argparse
    ap = argparse.ArgumentParser(prog="matpres-replay", description="Independently replay certificate traces.")
    ap.add_argument("certificate", help="certificate JSON written by 'matpres certify --trace'")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)
    with open(args.certificate) as fh:
        cert = json.load(fh)
    rep = replay_certificate(cert, args.jobs)
    print(json.dumps(rep.to_json(), indent=2))
    print(f"replay: {'ok' if rep.ok else 'FAILED'} ({len(rep.results)} traces, {rep.steps} steps)", file=_sys.stderr)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
