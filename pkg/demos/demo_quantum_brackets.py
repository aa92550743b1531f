"""Tour of the exact arithmetic layer: quantum integers, cyclotomic
polynomials, and vanishing at roots of unity.

Run:  python demos/demo_quantum_brackets.py
"""

from gcartan import (
    cyclotomic,
    divide_exact,
    kss_bracket,
    normalize_unit,
    quantum_binomial,
    quantum_int,
    su_bracket,
    vanishes_at_primitive_root,
)

print("Quantum integers [n]_s are balanced Laurent polynomials:")
for n in range(1, 6):
    print(f"  [{n}]   = {quantum_int(n)}")
print(f"  [3]_2 = {quantum_int(3, 2)}")
print(f"  at v=1: [5] -> {quantum_int(5).at_one()}")

print("\nThey multiply and divide exactly; [6] factors as [3] * [2]_3:")
print(f"  [6]          = {quantum_int(6)}")
print(f"  [6] / [3]    = {divide_exact(quantum_int(6), quantum_int(3))}")
print(f"  [6] / [2]_3  = {divide_exact(quantum_int(6), quantum_int(2, 3))}")
print(f"  (v+1) / (v-1) -> {divide_exact(quantum_int(2).shift(1) + 0, cyclotomic(1))}")

print("\nGaussian binomials stay polynomial:")
print(f"  [4 choose 2] = {quantum_binomial(4, 2)}")

print("\nCyclotomic polynomials come from the recursion v^m - 1 = prod Phi_d:")
for m in (1, 2, 3, 4, 6, 12):
    print(f"  Phi_{m:<2} = {cyclotomic(m)}")

print("\nVanishing at primitive roots of unity is decided exactly in Z[v]/Phi_m:")
print(f"  [4] vanishes at i (m=4)?      {vanishes_at_primitive_root(quantum_int(4), 4)}")
print(f"  [3] vanishes at -1 (m=2)?     {vanishes_at_primitive_root(quantum_int(3), 2)}")

print("\nUnits of Z[v,v^-1] are +-v^k; every nonzero element has a canonical form:")
unit, canon = normalize_unit(quantum_int(2))
print(f"  [2] = ({unit}) * ({canon})")

print("\nTwisted-type brackets:")
print(f"  {{3}}_1 = {kss_bracket(3, 1)}   (equals [3]; value 3 at v=1)")
print(f"  {{3}}_2 = {kss_bracket(3, 2)}   (value {kss_bracket(3, 2).at_one()} at v=1)")
print(f"  [3]^su = {su_bracket(3)}")
