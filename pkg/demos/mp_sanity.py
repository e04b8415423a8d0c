"""Sanity check against the classical Marchenko-Pastur law.

With a single term and identity factors on both sides, Y = X and the dual
system collapses to a scalar quadratic: the companion Stieltjes transform s
solves z s^2 + (z + 1 - c) s + 1 = 0 with c = d/n. This script solves the
full matrix fixed point and prints it next to the closed-form root, which
is about as direct a correctness check as one can get.

Run: python3 demos/mp_sanity.py
"""
import cmath

import numpy as np

import sepcovmix as scm


def mp_root(z, c):
    b = z + 1.0 - c
    disc = cmath.sqrt(b * b - 4.0 * z)
    r1 = (-b + disc) / (2.0 * z)
    return r1 if r1.imag > 0 else (-b - disc) / (2.0 * z)


def main():
    n = 40
    for c in (0.5, 1.0, 2.0):
        d = int(round(c * n))
        model = scm.MixtureModel([np.eye(d, dtype=np.complex128)],
                                 [np.eye(n, dtype=np.complex128)])
        print(f"c = d/n = {c}")
        for z in (1j, 1.5 + 0.1j, -0.5 + 0.3j):
            sol = scm.solve_dual_system(model, z)
            solver = sol.delta_B[0, 0]
            closed = mp_root(z, c)
            print(f"  z = {z}:  solver {solver:.12f}   closed form {closed:.12f}"
                  f"   |diff| = {abs(solver - closed):.2e}")


if __name__ == "__main__":
    main()
