"""Numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the X-spider and W-node fills at a few sizes, then a whole ZX->ZW
round of interpretation, once per backend.  Both backends must agree.
"""

import argparse
import timeit

import numpy as np

from fdzx import _kernels as K
from fdzx.semantics import interpret
from fdzx.translate import to_zw
from fdzx.verify.random import RandomDiagramSpec, random_diagrams

CASES = [
    ("x_spider d=4 2->1", lambda: K.x_spider_tensor(4, 1, 2)),
    ("x_spider d=4 3->3", lambda: K.x_spider_tensor(4, 3, 3)),
    ("x_spider d=6 3->3", lambda: K.x_spider_tensor(6, 3, 3)),
    ("w_node 7 <- (3,4)", lambda: K.w_node_tensor(7, (3, 4))),
    ("w_node 9 <- (3,3,3)", lambda: K.w_node_tensor(9, (3, 3, 3))),
    ("w_node 12 <- 1^8", lambda: K.w_node_tensor(12, (1,) * 8)),
]


def bench(fn, repeat: int) -> float:
    fn()  # compile / warm caches
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--diagrams", type=int, default=20)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if K.HAVE_NUMBA else [])
    diagrams = [to_zw(d).target for d in random_diagrams(RandomDiagramSpec(seed=1), args.diagrams)]
    cases = CASES + [("interpret translated", lambda: [interpret(d) for d in diagrams])]

    print(f"{'case':<24}" + "".join(f"{b:>12}" for b in backends) + "   agree")
    for name, fn in cases:
        times, results = [], []
        for b in backends:
            K.set_backend(b)
            times.append(bench(fn, args.repeat))
            results.append(fn())
        if isinstance(results[0], list):
            agree = all(np.allclose(x.data, y.data) for x, y in zip(*results)) if len(results) > 1 else True
        else:
            agree = all(np.allclose(results[0], r) for r in results[1:])
        print(f"{name:<24}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times) + f"   {agree}")
    K.set_backend("numba" if K.HAVE_NUMBA else "numpy")


if __name__ == "__main__":
    main()
