"""Resolutions of the identity built from coherent states, checked on a Fock block."""

from cohframe import closure

rep = closure.standard_closure(12)
print(f"standard closure, block 12: dev_max = {rep.dev_max:.2e}")

for lam in (0.5, 1.0, 2.0):
    print(f"|lam z><z| closure, lam = {lam}: dev_max = {closure.lambda_closure(lam).dev_max:.2e}")

for zeta in (0.3 + 0.2j, 1.0):
    print(f"Weyl-offset closure, zeta = {zeta}: dev_max = {closure.weyl_closure(zeta, block=8).dev_max:.2e}")

# with the bare exponential weight the operator is a multiple of I, not I
b = closure.b_operator(0.5)
print(f"bare-weight operator at zeta = 0.5: constant = {b.ratio_to_identity:.6f}")
for note in b.notes:
    print("  note:", note)
