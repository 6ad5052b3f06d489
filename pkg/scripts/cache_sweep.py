#!/usr/bin/env python3
"""Sweep cache sizes over a strided reduction and report how much of the
memory work and latency sensitivity each configuration removes.

    python3 scripts/cache_sweep.py --n 4096 --stride 8 --m 4
"""

import argparse
import sys
from fractions import Fraction

sys.path.insert(0, "src")

from memdag import CacheConfig, SynthSpec, build, generate, latency_sensitivity
from memdag.trace import read_trace


def analyze(text, cache_cfg, m):
    s = build(read_trace(text.split("\n")), cache_cfg).summary
    lam = latency_sensitivity(s.memory_work, s.memory_depth, m)
    return s, lam


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--stride", type=int, default=8)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--pattern", default="sum",
                    choices=["sum", "fanout", "ptr-chase", "chain"])
    args = ap.parse_args()

    text = generate(SynthSpec(args.pattern, args.n, stride=args.stride))
    configs = [
        ("no cache", CacheConfig.disabled()),
        ("32kB 2-way", CacheConfig.parse("32768:64:2")),
        ("64kB 2-way", CacheConfig.parse("65536:64:2")),
        ("256kB 8-way", CacheConfig.parse("262144:64:8")),
    ]

    base_w = base_lam = None
    print(f"{args.pattern} n={args.n} stride={args.stride} m={args.m}")
    print(f"{'config':<14} {'W':>9} {'D':>6} {'lambda':>12} "
          f"{'W cut':>8} {'lam cut':>8}")
    for name, cfg in configs:
        s, lam = analyze(text, cfg, args.m)
        if base_w is None:
            base_w, base_lam = s.memory_work, lam
            cuts = ("", "")
        else:
            wc = 1 - Fraction(s.memory_work, base_w) if base_w else Fraction(0)
            lc = 1 - lam / base_lam if base_lam else Fraction(0)
            cuts = (f"{float(wc):.1%}", f"{float(lc):.1%}")
        print(f"{name:<14} {s.memory_work:>9} {s.memory_depth:>6} "
              f"{str(lam):>12} {cuts[0]:>8} {cuts[1]:>8}")


if __name__ == "__main__":
    main()
