"""Counting p'-characters of a Borel subgroup, stratum by stratum.

Run with ``python demos/01_borel_counting.py``.
"""

from relmckay import SplitFrobenius, build_root_datum
from relmckay.borel import brute_force_count, parametrization

# Sp4(3): type C2 over F_3. Every subset J of simple roots contributes
# (number of T-orbits of regular characters of U_J) x |T_J^F|.
d = build_root_datum("C2")
par = parametrization(d, 3, 1)
print(f"{d.type_label} over F_{par.q}: centre of order {par.center_order}")
print(f"{'J':>8} {'orbits':>7} {'|T_J^F|':>8} {'labels':>7}")
for row in par.contributions():
    print(f"{str(row['J']):>8} {row['i']:>7} {row['T_J_fixed']:>8} {row['contribution']:>7}")
print("closed form:", par.total())

# The same number straight from field arithmetic: sum of stabilizer orders
# over the torus orbits on characters of U/[U, U].
print("orbit oracle:", brute_force_count(d, SplitFrobenius(3, 1)))

# The labels split evenly over the characters of the centre.
for nu in par.central_characters():
    print(f"over nu={nu}: {par.per_nu_count(nu)} labels")

# A1 in even characteristic has trivial centre, and the count drops to q.
for q in (2, 4, 8):
    p = 2
    n = q.bit_length() - 1
    print(f"A1 over F_{q}:", parametrization(build_root_datum("A1"), p, n).total())
