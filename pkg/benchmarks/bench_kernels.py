"""Time the numba kernels against the numpy fallback on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Each row reports the best of ``N`` runs per backend after one warm-up call
(the warm-up absorbs numba's compile time, which is printed separately),
and checks that both backends return identical results.
"""

import argparse
import os
import time

import numpy as np

from consecwqo import _kernels, bitcodec
from consecwqo.kinds import Kind


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def member_case():
    cc = bitcodec.codec(Kind.of("graph"), 4)
    codes = np.arange(1 << cc.nbits, dtype=np.int64)
    mode, trans, forbid, require = cc.membership()
    return "member_mask graph n=4 (all 2^16 codes)", \
        lambda nb: _kernels.member_mask(codes, mode, trans, forbid, require, use_numba=nb)


def avoid_case():
    k = Kind.of("digraph")
    cc, small = bitcodec.codec(k, 4), bitcodec.codec(k, 2)
    codes = cc.member_codes()
    srcs = [cc.window_src(i, i + 1) for i in range(1, 4)]
    forbidden = [np.arange(0, 1 << small.nbits, 3, dtype=np.int64)] * len(srcs)
    return "avoid_mask digraph n=4, width-2 windows", \
        lambda nb: _kernels.avoid_mask(codes, srcs, forbidden, use_numba=nb)


def pair_case():
    k = Kind.of("digraph")

    def run(nb):
        os.environ["CONSECWQO_DISABLE_NUMBA"] = "0" if nb else "1"
        checked, fails = bitcodec.pair_scan(k, 3, 3, 1, 2)
        return np.array([checked, len(fails)])
    return "pair_scan digraph 3+3 overlap 1", run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    saved = os.environ.get("CONSECWQO_DISABLE_NUMBA")
    if _kernels.numba is None:
        print("numba is not installed; only the numpy backend can run")
        return
    print(f"{'kernel':45} {'numpy s':>10} {'numba s':>10} {'speedup':>8} {'compile s':>10}")
    try:
        for name, fn in (member_case(), avoid_case(), pair_case()):
            t0 = time.perf_counter()
            fn(True)
            compile_s = time.perf_counter() - t0
            t_np, out_np = best_of(lambda: fn(False), args.repeat)
            t_nb, out_nb = best_of(lambda: fn(True), args.repeat)
            assert np.array_equal(np.asarray(out_np), np.asarray(out_nb)), name
            print(f"{name:45} {t_np:10.4f} {t_nb:10.4f} {t_np / max(t_nb, 1e-9):8.1f} {compile_s:10.2f}")
    finally:
        if saved is None:
            os.environ.pop("CONSECWQO_DISABLE_NUMBA", None)
        else:
            os.environ["CONSECWQO_DISABLE_NUMBA"] = saved


if __name__ == "__main__":
    main()
