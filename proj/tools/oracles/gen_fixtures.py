#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Arbitrary-precision reference tables for the test suite.

Writes
  tests/fixtures/bessel_table.csv   x, K0, K1, I0, I1 (200 log-spaced x in [1e-6, 50])
  tests/fixtures/bessel_scaled.csv  x, exp(x)K0, exp(x)K1 (40 log-spaced x in [1, 1e4])
  tests/fixtures/flat_probes.json   flat-interface point-source field at probe points

Bessel values come from mpmath.besselk/besseli at 40 digits, each row
recomputed at 60 digits; every tenth row is cross-checked against the integral
representations
  K_n(x) = int_0^inf exp(-x cosh u) cosh(n u) du
  I_n(x) = (1/pi) int_0^pi exp(x cos t) cos(n t) dt

The flat probe values evaluate the Fourier integral of the outgoing
single-mass solution with mpmath quadrature (principal value plus the
residue half-contributions at xi = +-E).
"""
import argparse
import json
import os

import mpmath as mp

mp.mp.dps = 40


def k_int(n, x):
    f = lambda u: mp.exp(-x * mp.cosh(u)) * mp.cosh(n * u)
    # beyond umax the integrand is below exp(-200)
    umax = mp.acosh(max(mp.mpf(2), mp.mpf(200) / x))
    return mp.quad(f, mp.linspace(0, umax, int(mp.ceil(2 * umax)) + 1))


def i_int(n, x):
    f = lambda t: mp.exp(x * mp.cos(t)) * mp.cos(n * t)
    return mp.quad(f, mp.linspace(0, mp.pi, 9)) / mp.pi


def fmt(v):
    return mp.nstr(v, 25, min_fixed=-5, max_fixed=5, strip_zeros=False)


def bessel_tables(outdir):
    rows = []
    for k in range(200):
        x = mp.mpf(10) ** (mp.mpf(-6) + k * (mp.log10(50) + 6) / 199)
        x = mp.mpf(mp.nstr(x, 17))
        vals = [mp.besselk(0, x), mp.besselk(1, x), mp.besseli(0, x), mp.besseli(1, x)]
        with mp.workdps(60):
            hi = [mp.besselk(0, x), mp.besselk(1, x), mp.besseli(0, x), mp.besseli(1, x)]
        for v, r in zip(vals, hi):
            assert abs(v - r) <= mp.mpf(10) ** -30 * abs(r), (x, v, r)
        if k % 10 == 0:
            refs = [k_int(0, x), k_int(1, x), i_int(0, x), i_int(1, x)]
            for v, r in zip(vals, refs):
                assert abs(v - r) <= mp.mpf(10) ** -26 * abs(r), (x, v, r)
        rows.append([x] + vals)
    with open(os.path.join(outdir, "bessel_table.csv"), "w") as f:
        f.write("x,K0,K1,I0,I1\n")
        for r in rows:
            f.write(",".join(fmt(v) for v in r) + "\n")

    with open(os.path.join(outdir, "bessel_scaled.csv"), "w") as f:
        f.write("x,expK0,expK1\n")
        for k in range(40):
            x = mp.mpf(10) ** (mp.mpf(k) * 4 / 39)
            x = mp.mpf(mp.nstr(x, 17))
            a = mp.exp(x) * mp.besselk(0, x)
            b = mp.exp(x) * mp.besselk(1, x)
            f.write(",".join(fmt(v) for v in (x, a, b)) + "\n")


def flat_field(m, E, src, x):
    m = mp.mpf(m)
    E = mp.mpf(E)
    w = mp.sqrt(m * m - E * E)
    X = x[0] - src[0]
    Y = abs(x[1]) + abs(src[1])

    def F(xi):
        k = mp.sqrt(xi * xi + w * w)
        return m * mp.expj(xi * X) * mp.exp(-k * Y) * (k + m) / (4 * mp.pi * k)

    def pv(c):
        g = lambda u: (F(c + u) - F(c - u)) / u
        return mp.quad(g, [0, mp.mpf(1) / 2, 1, 2, 4, 8, 16, 32, mp.inf])

    us = (pv(E) - pv(-E)) / (2 * E) + 1j * mp.pi / (2 * E) * (F(E) + F(-E))
    r = mp.sqrt((x[0] - src[0]) ** 2 + (x[1] - src[1]) ** 2)
    ui = mp.besselk(0, w * r) / (2 * mp.pi)
    return ui + us


def flat_probes(outdir):
    m, E, src = 2, 1, (0, mp.mpf("2.5"))
    probes = [(1.0, 1.0), (-2.0, 0.5), (3.0, -1.0), (0.5, -2.0)]
    out = {"m": m, "E": E, "src": [0.0, 2.5], "probes": []}
    for p in probes:
        u = flat_field(m, E, src, (mp.mpf(p[0]), mp.mpf(p[1])))
        out["probes"].append([p[0], p[1], float(u.real), float(u.imag)])
    with open(os.path.join(outdir, "flat_probes.json"), "w") as f:
        json.dump(out, f, indent=2)
        f.write("\n")


def main():
    ap = argparse.ArgumentParser()
    here = os.path.dirname(os.path.abspath(__file__))
    ap.add_argument("--out", default=os.path.join(here, "..", "..", "tests", "fixtures"))
    ap.add_argument("--only", choices=["bessel", "flat"], default=None)
    a = ap.parse_args()
    os.makedirs(a.out, exist_ok=True)
    if a.only in (None, "bessel"):
        bessel_tables(a.out)
    if a.only in (None, "flat"):
        flat_probes(a.out)


if __name__ == "__main__":
    main()
