"""Compare the compiled and pure-Python kernel backends.

Each backend runs in a fresh interpreter (the choice is made at import time
via MATPRES_PURE). Workloads: echelon insertion on random integer lattices,
and rewriting (redex search dominated) on the span-closure words of K_n.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, time
from matpres import _kernels
from matpres.lattice import LatticeBuilder
from matpres.freealg import FreePoly
from matpres.presentations import kassabov
from matpres.rewrite import normalize

def hnf(seed, dim, count):
    rng = random.Random(seed)
    vecs = [[rng.randint(-50, 50) for _ in range(dim)] for _ in range(count)]
    t = time.perf_counter()
    b = LatticeBuilder(dim)
    b.extend(vecs)
    b.freeze()
    return time.perf_counter() - t

def rewrite(n):
    sys_ = kassabov(n).rewrite_system()
    words = [(g,) + (1,) * i + (0,) * j for i in range(n) for j in range(n) for g in (0, 1)]
    words += [(1,) * i + (0,) * j + (g,) for i in range(n) for j in range(n) for g in (0, 1)]
    t = time.perf_counter()
    steps = 0
    for w in words:
        steps += len(normalize(FreePoly({w: 1}), sys_)[1])
    return time.perf_counter() - t, steps

repeat = int(sys.argv[1])
out = {"backend": _kernels.BACKEND}
out["hnf_40x60"] = min(hnf(s, 40, 60) for s in range(repeat))
out["hnf_80x100"] = min(hnf(s, 80, 100) for s in range(repeat))
best = min(rewrite(6) for _ in range(repeat))
out["rewrite_span_n6"], out["rewrite_steps"] = best
print(json.dumps(out))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("MATPRES_PURE", None)
    if pure:
        env["MATPRES_PURE"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    fast, pure = run(False, args.repeat), run(True, args.repeat)
    if args.json:
        print(json.dumps({"default": fast, "pure": pure}, indent=2))
        return
    print(f"default backend: {fast['backend']}")
    print(f"{'workload':<18}{'default (s)':>14}{'pure (s)':>12}{'speedup':>10}")
    for key in ("hnf_40x60", "hnf_80x100", "rewrite_span_n6"):
        a, b = fast[key], pure[key]
        print(f"{key:<18}{a:>14.4f}{b:>12.4f}{b / a:>9.2f}x")
    print(f"(rewrite workload: {fast['rewrite_steps']} steps; identical under both backends: "
          f"{fast['rewrite_steps'] == pure['rewrite_steps']})")


if __name__ == "__main__":
    main()
