#!/usr/bin/env python3
"""
Keep q and d formal and watch a few relation residuals vanish identically
(Laurent-polynomial zero, not a numerical coincidence).

Usage:
    python scripts/symbolic_spotcheck.py
"""

import sys

from toroidal_duality.duality import DualityModule, duality_probes
from toroidal_duality.hecke import PolynomialModule, hecke_probes, defining_relation_checks, make_hecke_items
from toroidal_duality.params import symbolic_params
from toroidal_duality.qtoroidal import current_relation_items


def main():
    dmod = DualityModule(PolynomialModule(symbolic_params(n=4, l=2), window=6))
    hprobes = hecke_probes(dmod.h, 5, seed=2)
    dprobes = duality_probes(dmod, 2, seed=2)

    bad = 0
    for meta, thunk in make_hecke_items(dmod.h, defining_relation_checks(dmod.h), hprobes):
        zero, valid, note = thunk()
        bad += 0 if (zero and valid) else 1
    print(f"defining relations, formal q and d: {'all zero' if not bad else 'NONZERO'}")

    sample = [
        entry for entry in current_relation_items(dmod, 1, dprobes)
        if entry[0][0] in ("2.1.3", "2.1.5", "2.1.6") and entry[0][1] in ((1, 1), (1, 2), (2, 1))
    ]
    for meta, thunk in sample:
        zero, valid, note = thunk()
        bad += 0 if (zero and valid) else 1
    print(f"current relations sample ({len(sample)} instances): "
          f"{'all zero' if not bad else 'NONZERO'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
