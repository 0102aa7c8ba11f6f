"""An exact character table of SL2(9) and the automorphisms acting on it."""

import numpy as np

from relmckay import build_root_datum
from relmckay.chartab import automorphism_action, central_character, dixon_schneider, p_prime_rows
from relmckay.matgrp import build_group

g = build_group(build_root_datum("A1"), 9)
print(f"|SL2(9)| = {g.order}, {g.class_count} classes, exponent {g.exponent}")

t = dixon_schneider(g)
t.check_orthogonality()  # exact, over Z[zeta_e]
print("degrees:", t.degrees.tolist())
print("sum of squares:", int((t.degrees**2).sum()))

# Values are stored as coefficient vectors in the power basis of Z[zeta_e].
# The Steinberg character (degree 9) is rational, so only the first coefficient is used.
st = int(np.nonzero(t.degrees == 9)[0][0])
print("Steinberg values:", [int(t.values[st, i, 0]) for i in range(t.class_count)])

rows = p_prime_rows(t, 3)
print(f"{len(rows)} rows of degree prime to 3")
for a in rows:
    print(f"  row {a}: degree {t.degrees[a]}, central character {central_character(t, a)}")

# Diagonal and field automorphisms permute the rows.
delta = automorphism_action(t, g.class_permutation(g.diagonal_automorphism()))
frob = automorphism_action(t, g.class_permutation(g.field_automorphism(1)))
print("diagonal moves:", [(a, delta[a]) for a in rows if delta[a] != a])
print("Frobenius moves:", [(a, frob[a]) for a in rows if frob[a] != a])
