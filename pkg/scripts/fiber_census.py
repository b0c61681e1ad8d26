"""Singular fibers of the Weierstrass families E_t and F_t over a small (A, B) grid.

    python3 scripts/fiber_census.py --height 3 --csv census.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from hesscay.algebra import scalar_str
from hesscay.pencil import family_weierstrass_E, family_weierstrass_F


@dataclass
class CensusConfig:
    height: int = 3
    csv: str | None = None


def rows(cfg: CensusConfig):
    rng = range(-cfg.height, cfg.height + 1)
    for a, b in product(rng, rng):
        A, B = Fraction(a), Fraction(b)
        if not A or not 4 * A**3 + 27 * B**2:
            continue
        for name, fam in (("E", family_weierstrass_E(A, B)), ("F", family_weierstrass_F(A, B))):
            c, g = fam.fiber_structure()
            fibers = fam.singular_fibers()
            yield {
                "A": a, "B": b, "family": name,
                "c": scalar_str(c), "deg_g": g.degree,
                "rational_singular": ";".join(f"{scalar_str(t)}^{m}" for t, m in fibers),
            }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--height", type=int, default=CensusConfig.height)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args(argv)
    cfg = CensusConfig(height=args.height, csv=args.csv)
    out = open(cfg.csv, "w", newline="") if cfg.csv else sys.stdout
    fields = ["A", "B", "family", "c", "deg_g", "rational_singular"]
    writer = csv.DictWriter(out, fieldnames=fields)
    writer.writeheader()
    for row in rows(cfg):
        writer.writerow(row)
    if cfg.csv:
        out.close()


if __name__ == "__main__":
    main()
