"""Entanglement thresholds and NE sets for a few named games."""

import argparse

from qgame.game_core import PayoffMatrix, classify
from qgame.semidet import transitions

NAMED = {
    "pd": (3, 0, 5, 1),
    "chicken": (6, 2, 8, 0),
    "coordination": (4, 2, 3, 1),
}


def describe(name, vals):
    m = PayoffMatrix(*map(float, vals))
    rep = transitions(m)
    print(f"{name} {vals} class {classify(m).label}")
    for (lo, hi), ne in zip(rep.intervals, rep.ne_sets):
        pos = ", ".join(f"({r.name},{c.name})" for r, c in sorted(ne)) or "none"
        print(f"  E in [{lo:.6f}, {hi:.6f}]: {pos}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--payoff", default=None, help="a,b,c,d; default runs the named games")
    args = ap.parse_args()
    if args.payoff:
        describe("game", tuple(float(x) for x in args.payoff.split(",")))
        return
    for name, vals in NAMED.items():
        describe(name, vals)


if __name__ == "__main__":
    main()
