"""Overcomplete frame in the plane: frame operator, unlike sum and its large-N limit."""

import numpy as np

from cohframe import plane

eps = plane.SQRT2_OVER_35
fr = plane.PlaneFrame(33, eps)
print(f"N = 33: min |<Z_n|Z_m>| = {fr.min_overlap:.4f}")
B, stats = plane.unlike_operator(fr)
print("unlike operator B_33 =\n", B, f"\nmax |weight| = {stats['max_weight']:.2f}")

L, Jp, Jm = plane.anisotropy_constants(fr.delta_theta)
print(f"L = {L:.6f} (L/eps = {L / eps:.3f}), J+ = {Jp:.3e}, J- = {Jm:.3e}")
print("N        |A-I|     |B-I| raw  |B-I| pv")
for N, a, b, bpv, *_ in plane.sweep([100, 10_000, 1_000_000], eps):
    print(f"{N:<8d} {a:.2e}  {b:.2e}   {bpv:.2e}")
print("limit operator:\n", plane.limit_operator(fr.delta_theta))
