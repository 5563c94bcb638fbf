#!/usr/bin/env python3
"""Offline oracle: dense-scan eigenvalue references for the free plate.

Scans the determinant W_l(a) on a fine grid with mpmath (40 digits), refines
every sign change by bisection, and freezes the resulting wavenumbers,
coupling constants and eigenvalues. Fully independent of the package: the
determinant is assembled from classical mpmath Bessel functions.

Usage:
    python tools/oracles/spectrum_scan.py > tests/oracle/frozen_spectrum.json
"""

import json
import sys

from mpmath import mp, mpf

from _ultra import ultra_j, ultra_i, p11, W, scan_w_roots

mp.dps = 40


def fstr(x):
    return mp.nstr(x, 25)


def mode_record(d, l, tau, a):
    b = mp.sqrt(a * a + mpf(tau))
    gamma = -(a * a * ultra_j(d, l, a, 2)) / (b * b * ultra_i(d, l, b, 2))
    return {
        "l": l,
        "a": fstr(a),
        "b": fstr(b),
        "gamma": fstr(gamma),
        "omega": fstr(a * a * (a * a + mpf(tau))),
    }


def spectrum(d, tau, l_max, count, a_max):
    recs = [{"l": 0, "a": "0", "b": "0", "gamma": "0", "omega": "0"}]
    found = []
    for l in range(l_max + 1):
        for a in scan_w_roots(d, l, tau, a_max):
            found.append((a * a * (a * a + mpf(tau)), l, a))
    found.sort(key=lambda t: (t[0], t[1]))
    for om, l, a in found[: count - 1]:
        recs.append(mode_record(d, l, tau, a))
    return recs


def fundamental(d, tau):
    pz = p11(d)
    roots = scan_w_roots(d, 1, tau, pz, step=pz / mpf(400))
    assert roots, (d, tau)
    return mode_record(d, 1, tau, roots[0])


def main():
    out = {
        "generator": "tools/oracles/spectrum_scan.py",
        "mp_dps": mp.dps,
        "spectra": {},
        "fundamentals": {},
        "w1_roots_d3_tau10": [],
    }

    out["spectra"]["d2_tau10_lmax5_count6"] = spectrum(2, 10, 5, 6, mpf(5))
    out["spectra"]["d2_tau1_lmax4_count5"] = spectrum(2, 1, 4, 5, mpf(5))

    for d, tau in [(2, "1"), (2, "10"), (3, "5"), (3, "10"), (5, "0.1")]:
        out["fundamentals"][f"d{d}_tau{tau}"] = fundamental(d, mpf(tau))

    # first two l=1 roots for (d=3, tau=10): second one feeds the
    # second-mode Rayleigh-quotient cross-check
    for a in scan_w_roots(3, 1, mpf(10), mpf(8))[:2]:
        out["w1_roots_d3_tau10"].append(mode_record(3, 1, mpf(10), a))

    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
