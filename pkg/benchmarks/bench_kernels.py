"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Both paths are called explicitly, so the SWSC_DISABLE_NUMBA flag only
matters for whether the numba column can run at all.
"""

import argparse
import time

import numpy as np

from swsc import NUMBA_ENABLED
from swsc.regions.rate_splitting import rs_gap_demo
from swsc.simulator.code import ConvCode
from swsc.verify import data_path
from swsc.channels import load_channel


def best_of(fn, repeat):
    fn()  # warm-up, includes jit compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_bcjr(repeat, k=1024):
    code = ConvCode((0o133, 0o171), 7)
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, k)
    llr = 2.0 * (1 - 2 * code.encode(bits).astype(float)) + rng.normal(0, 2.0, code.mother_length(k))
    out = {}
    for use in (True, False):
        if use and not NUMBA_ENABLED:
            continue
        out[use] = best_of(lambda: code.decode(llr, k, use_numba=use), repeat)
    return out


def bench_gap(repeat, grid=11):
    channel = load_channel(data_path("gap_demo.json"))
    out = {}
    for use in (True, False):
        if use and not NUMBA_ENABLED:
            continue
        out[use] = best_of(lambda: rs_gap_demo(channel, max_layers=(2, 2), grid=grid, use_numba=use), repeat)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba available: {NUMBA_ENABLED}")
    print(f"{'kernel':<28}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name, res in (("BCJR k=1024, K=7", bench_bcjr(args.repeat)),
                      ("gap search 2x2 layers, 11pt", bench_gap(max(1, args.repeat // 2)))):
        nb, np_ = res.get(True), res[False]
        nb_s = f"{nb:12.4f}" if nb is not None else f"{'n/a':>12}"
        sp = f"{np_ / nb:9.1f}x" if nb else f"{'':>10}"
        print(f"{name:<28}{nb_s}{np_:12.4f}{sp}")


if __name__ == "__main__":
    main()
