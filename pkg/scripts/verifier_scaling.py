"""Empirical running time of the secure-domination verifier.

    python scripts/verifier_scaling.py --sizes 50 100 200 400 800 --edge-prob 0.3
"""
from __future__ import annotations

import argparse
import json

from securedom.crosscheck import ScalingConfig, verifier_scaling


def main() -> None:
    d = ScalingConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=list(d.sizes))
    ap.add_argument("--edge-prob", type=float, default=d.edge_prob)
    ap.add_argument("--set-fraction", type=float, default=d.set_fraction)
    ap.add_argument("--repeats", type=int, default=d.repeats)
    ap.add_argument("--seed", type=int, default=d.seed)
    a = ap.parse_args()
    res = verifier_scaling(ScalingConfig(tuple(a.sizes), a.edge_prob, a.set_fraction, a.repeats, a.seed))
    for n, t, ok in zip(res["sizes"], res["seconds"], res["secure"]):
        print(f"n={n:5d}  {t * 1e3:9.3f} ms  secure={ok}")
    print(f"log-log slope {res['slope']:.3f}")
    print(json.dumps(res))


if __name__ == "__main__":
    main()
