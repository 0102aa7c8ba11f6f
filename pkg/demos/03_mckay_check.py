"""Both sides of the relative McKay count for SL3(4), where the centre has order 3."""

from relmckay import build_root_datum
from relmckay.mckay import RelativeMcKayCheck

chk = RelativeMcKayCheck(build_root_datum("A2"), 2, 2)
print(f"|SL3(4)| = {chk.group.order}; {chk.table.rows} irreducible characters")
print(f"G side: {len(chk.g_act.points)} characters of odd degree")
print(f"B side: {len(chk.b_act.points)} labels")

for nu in chk.nus:
    cg, cb = chk.census("G", nu), chk.census("B", nu)
    print(f"nu={nu}: G has {cg.n1} fixed and {cg.nd} size-3 diagonal orbits; B has {cb.n1} and {cb.nd}")

# Field automorphisms move the central characters here, so the stabilizer
# K_nu of a nontrivial nu is generated by a power of the Frobenius.
for nu in chk.nus:
    bij = chk.bijection(nu)
    print(f"nu={nu}: gamma = F{bij.gamma_level}, bijection certified: {bij.certified}")
    for h, lab in bij.pairs[:3]:
        print(f"    row {h.row} (degree {h.degree}) <-> J={lab.J} z={lab.z} psi={lab.psi}")

rep = chk.report()
print("verdict:", rep.verdict)
