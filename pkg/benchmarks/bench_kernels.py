"""Compare the pure-Python and compiled kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from torsionkit import _kernels
from torsionkit.presentations import FinitePresentation, symmetrize
from torsionkit.torsion_ladder import build_ladder


def workloads():
    rng = random.Random(0)
    words = [[rng.randrange(6) for _ in range(2000)] for _ in range(50)]
    level3 = build_ladder(FinitePresentation.parse("gens: x\nrel: x"), 3)[-1]
    S = symmetrize(level3.presentation)
    alpha = S.base.alphabet
    closure = [alpha.encode(w) for w in S.closure]
    a5 = FinitePresentation.parse("gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^5")
    psl = FinitePresentation.parse("gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^7\nrel: (a b a b^-1)^4")
    return {
        "free_reduce (50 x 2000 letters)": lambda k: [k.free_reduce(w) for w in words],
        f"pieces (ladder level 3, {len(closure)} closure words)": lambda k: k.pieces(closure),
        "coset_enumerate (A5, order 60)":
            lambda k: k.coset_enumerate(2, [a5.alphabet.encode(r) for r in a5.relators], [], 10_000),
        "coset_enumerate (PSL(2,7), order 168)":
            lambda k: k.coset_enumerate(2, [psl.alphabet.encode(r) for r in psl.relators], [], 10_000),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _kernels.backends()
    names = [b.BACKEND for b in backends]
    print(f"{'workload':<48}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in workloads().items():
        times = []
        results = []
        for b in backends:
            results.append(fn(b))
            times.append(min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)))
        assert all(r == results[0] for r in results), f"backends disagree on {label}"
        row = f"{label:<48}" + "".join(f"{t * 1000:>10.1f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)
    if len(names) == 1:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
