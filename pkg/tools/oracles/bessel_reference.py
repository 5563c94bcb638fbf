#!/usr/bin/env python3
"""Offline oracle: high-precision reference values for the Bessel kernel.

Computes frozen expected values with mpmath at 50 significant digits via the
classical-Bessel product-rule route (tools/oracles/_ultra.py), which shares no
code with the package's ascending-series evaluator.

Usage:
    python tools/oracles/bessel_reference.py > tests/oracle/frozen_bessel.json

The output is committed; see tests/oracle/README.md for provenance notes.
"""

import json
import sys

from mpmath import mp, mpf, exp

from _ultra import ultra_j, ultra_i, p11

mp.dps = 50

DIMS = (2, 3, 4, 7)
ORDERS = (0, 1, 2, 5)
POINTS = ("0.3", "1.0", "2.5", "7.0", "19.5")


def fstr(x):
    return mp.nstr(x, 25)


def main():
    out = {
        "generator": "tools/oracles/bessel_reference.py",
        "mp_dps": mp.dps,
        "values": [],
        "p11": {},
        "named": {},
    }

    for d in DIMS:
        for l in ORDERS:
            for zs in POINTS:
                z = mpf(zs)
                for m in range(5):
                    out["values"].append(
                        {
                            "d": d,
                            "l": l,
                            "z": zs,
                            "m": m,
                            "j": fstr(ultra_j(d, l, z, m)),
                            "i": fstr(ultra_i(d, l, z, m)),
                        }
                    )

    for d in range(2, 21):
        out["p11"][str(d)] = fstr(p11(d))

    # named scalar checks used directly by unit tests
    a, b = mpf("1.5"), mpf("2.5")
    gamma = -(a * a * ultra_j(2, 1, a, 2)) / (b * b * ultra_i(2, 1, b, 2))
    out["named"] = {
        "J1_at_1": fstr(ultra_j(2, 1, mpf(1))),
        "I1_at_2": fstr(ultra_i(2, 1, mpf(2))),
        "J1pp_at_1": fstr(ultra_j(2, 1, mpf(1), 2)),
        "I1_at_1": fstr(ultra_i(2, 1, mpf(1))),
        "i1_scaled_at_50_d2": fstr(exp(mpf(-50)) * ultra_i(2, 1, mpf(50))),
        "gamma_d2_l1_a1.5_b2.5": fstr(gamma),
        "j1pp_sum_d2_z0.5": fstr(ultra_j(2, 1, mpf("0.5"), 2)),
    }

    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
