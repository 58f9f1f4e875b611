"""Tally game classes over uniformly sampled G-vectors."""

import argparse
import time

from qgame.explorer import atlas, ne_structure_fractions
from qgame.game_core import CLASS_TABLE


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    rows = atlas(args.samples, args.seed)
    print(f"{args.samples} samples in {time.perf_counter() - t0:.2f} s")
    print(f"{'id':>3} {'label':<6} {'count':>9} {'fraction':>9} {'area':>8}")
    for r in rows:
        print(f"{r.class_id:>3} {r.label:<6} {r.sample_count:>9} {r.fraction:>9.5f} {CLASS_TABLE[r.class_id][4]:>8.5f}")
    for k, v in ne_structure_fractions(rows).items():
        print(f"{k.value:<13} {v:.5f}")


if __name__ == "__main__":
    main()
