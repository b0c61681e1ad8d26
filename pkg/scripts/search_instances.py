"""Regenerate the cached full-3-torsion instances ("first" and "k1").

    python3 scripts/search_instances.py --out tests/data/fixtures.json
"""

import argparse
import json
from dataclasses import asdict, dataclass

from hesscay.algebra import is_prime
from hesscay.ec import find_full_torsion_instance, save_fixtures, torsion_basis


@dataclass
class SearchConfig:
    out: str = "tests/data/fixtures.json"
    max_p: int = 200
    max_q: int = 10**5
    degrees: tuple = (1, 2, 3, 4, 6)


def run(cfg: SearchConfig) -> dict:
    primes = [p for p in range(5, cfg.max_p + 1) if is_prime(p)]
    found = {
        "first": find_full_torsion_instance(primes, cfg.degrees, max_q=cfg.max_q),
        "k1": find_full_torsion_instance(primes, cfg.degrees, require_k1=True, max_q=cfg.max_q),
    }
    save_fixtures(found, cfg.out)
    for name, inst in found.items():
        basis = torsion_basis(inst.curve)
        print(f"{name}: q={inst.field.q} A={inst.A} B={inst.B} "
              f"P1={basis.P1} P2={basis.P2} e(P1,P2)=zeta^{basis.pairing.exponent}")
    return found


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=SearchConfig.out)
    ap.add_argument("--max-p", type=int, default=SearchConfig.max_p)
    ap.add_argument("--max-q", type=int, default=SearchConfig.max_q)
    args = ap.parse_args(argv)
    cfg = SearchConfig(out=args.out, max_p=args.max_p, max_q=args.max_q)
    print(json.dumps(asdict(cfg)))
    run(cfg)


if __name__ == "__main__":
    main()
