"""Benchmark the compiled term-arithmetic kernel against the pure-Python
twin.

Raw kernel operations are timed by importing both modules directly; the
end-to-end Groebner workload is timed in subprocesses so the backend
selection in quadrikit._kernel is exercised for real.

    python benchmarks/bench_kernel.py
"""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from quadrikit import _poly_core_py

try:
    from quadrikit import _poly_core_cy
except ImportError:
    _poly_core_cy = None


def random_terms(rng, arity, nterms, max_exp=4):
    terms = {}
    while len(terms) < nterms:
        mono = tuple(rng.randint(0, max_exp) for _ in range(arity))
        terms[mono] = Fraction(rng.randint(-99, 99), rng.randint(1, 9))
    return terms


def time_kernel(mod, pairs, reps=20):
    start = time.perf_counter()
    for _ in range(reps):
        for a, b in pairs:
            c = mod.mul_terms(a, b)
            c = mod.add_terms(c, a)
            c = mod.sub_terms(c, b)
            mod.leading_monomial(c, False)
    return time.perf_counter() - start


GROEBNER_SNIPPET = """
import time
from quadrikit import backend_name
from quadrikit.polyalg import Ring, Ideal, parse_poly

ring = Ring(("x", "y", "z", "w"))
gens = [
    "x^2*y - z*w + 3*x",
    "y^2*z - x*w + 2*y",
    "z^2*w - x*y + z",
    "x*y*z*w - 1",
]
start = time.perf_counter()
ideal = Ideal(ring, [parse_poly(g, ring) for g in gens])
basis = ideal.groebner()
elapsed = time.perf_counter() - start
print(f"{backend_name()}: groebner basis of {len(basis)} elements in {elapsed:.3f}s")
"""


def main():
    rng = random.Random(7)
    pairs = [(random_terms(rng, 4, 30), random_terms(rng, 4, 30)) for _ in range(40)]

    t_py = time_kernel(_poly_core_py, pairs)
    print(f"raw kernel, python : {t_py:.3f}s", flush=True)
    if _poly_core_cy is not None:
        t_cy = time_kernel(_poly_core_cy, pairs)
        print(f"raw kernel, cython : {t_cy:.3f}s  (speedup x{t_py / t_cy:.2f})", flush=True)
    else:
        print("raw kernel, cython : unavailable (extension not built)", flush=True)

    for pure in ("", "1"):
        env = dict(os.environ)
        if pure:
            env["QUADRIKIT_PURE"] = pure
        else:
            env.pop("QUADRIKIT_PURE", None)
        subprocess.run([sys.executable, "-c", GROEBNER_SNIPPET], env=env, check=True)


if __name__ == "__main__":
    main()
