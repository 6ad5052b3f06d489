#!/usr/bin/env python3
"""Print the bytes-in-flight profile of a trace as CSV plus a quick text
histogram, to eyeball where the memory traffic clusters on the critical path.

    python3 scripts/movement_profile.py --trace foo.trace --tau 500
    python3 scripts/movement_profile.py --pattern random-dag --n 200 --tau 200
"""

import argparse
import sys

sys.path.insert(0, "src")

from memdag import CacheConfig, SynthSpec, build, generate, movement_series
from memdag.trace import read_trace, read_trace_file


def main():
    ap = argparse.ArgumentParser()
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--trace")
    src.add_argument("--pattern", choices=["chain", "fanout", "sum",
                                           "ptr-chase", "random-dag"])
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tau", type=int, default=200)
    ap.add_argument("--cache", default=None, help="SIZE:LINE:ASSOC, omit for none")
    args = ap.parse_args()

    cache = CacheConfig.parse(args.cache) if args.cache else CacheConfig.disabled()
    if args.trace:
        records = read_trace_file(args.trace)
    else:
        text = generate(SynthSpec(args.pattern, args.n, seed=args.seed))
        records = read_trace(text.split("\n"))

    summary = build(records, cache, tau=args.tau).summary
    rows = movement_series(summary, args.tau)
    top = max((u for _, u in rows), default=0)

    print("time_cycles,bytes")
    for t, u in rows:
        print(f"{t},{u}")
    print(file=sys.stderr)
    for t, u in rows:
        bar = "#" * (60 * u // top) if top else ""
        print(f"{t:>10} {u:>10}  {bar}", file=sys.stderr)
    print(f"\npeak {top} bytes in flight; span {summary.tinf} cycles",
          file=sys.stderr)


if __name__ == "__main__":
    main()
