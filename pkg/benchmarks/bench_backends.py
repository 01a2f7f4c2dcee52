"""Compare the compiled and interpreted kernel backends.

Each backend runs in its own interpreter (PQA_NUMBA is read at import time).
A warm-up pass absorbs numba compilation before timing starts.

    python3 benchmarks/bench_backends.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys
from pathlib import Path

WORKER = r"""
import json, sys, time
sys.path.insert(0, sys.argv[1])
from pqa import _accel
from pqa.pmonomial import AmbientRing
from pqa.pring import PolynomialQuotient
from pqa.quasilength import SequenceSpec, build_quotient_module, exact_quasilength, factor_length_bound
from pqa.quasilength.search import Engine
from instances import oracle_suite

suite = [(p.ring, SequenceSpec.of(p.command["sequence"], p.command["t"]), M)
         for _, p, M in oracle_suite(hard=20, easy=0)]
R = PolynomialQuotient.of(AmbientRing(2, 1, names=("x",)), [(1, 1)])
big = [build_quotient_module(R, SequenceSpec.of([(1, 0), (0, 1)], (a, b))) for a in (6, 8) for b in (6, 8)]

def search():
    for ring, s, M in suite:
        exact_quasilength(M, factor_length_bound(ring, s, M))

def closure():
    for M in big:
        eng = Engine(M)
        for i in range(M.k):
            eng.close(eng.zero(), [tuple(int(j == i) for j in range(M.k))])

search(); closure()
out = {"backend": _accel.backend()}
for name, fn in (("exact search, 20 hard instances", search), ("echelon closure, px modules", closure)):
    best = float("inf")
    for _ in range(int(sys.argv[2])):
        t = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps(out))
"""


def run(flag, repeat):
    tests = str(Path(__file__).resolve().parent.parent / "tests")
    env = dict(os.environ, PQA_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", WORKER, tests, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = [run("1", args.repeat), run("0", args.repeat)]
    keys = [k for k in rows[0] if k != "backend"]
    print(f"{'workload':36s} " + " ".join(f"{r['backend']:>10s}" for r in rows) + "   speedup")
    for k in keys:
        a, b = rows[0][k], rows[1][k]
        print(f"{k:36s} {a:10.3f} {b:10.3f}   {b / a:6.2f}x")


if __name__ == "__main__":
    main()
