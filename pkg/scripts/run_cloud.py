"""Write the payoff cloud of a game for all four response branches."""

import argparse
import csv
import sys

from qgame.eisert_sim import Entanglement
from qgame.explorer import payoff_cloud
from qgame.game_core import PayoffMatrix
from qgame.unitary_geom import ALL_BRANCHES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--payoff", default="3,0,5,1")
    ap.add_argument("--e", type=float, default=1.0)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    m = PayoffMatrix.parse(args.payoff)
    gamma = Entanglement.from_e(args.e).gamma
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(["branch", "payA", "payB"])
    for br in ALL_BRANCHES:
        for p in payoff_cloud(m, gamma, args.samples, args.seed, br):
            w.writerow([str(br), f"{p.payA:.12g}", f"{p.payB:.12g}"])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
