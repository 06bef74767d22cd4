"""Two fundamental sl2 modules fused with the u-deformed coproduct.

Builds V = W(q^-1) (x)_u W(q) and its reverse V', prints their action
tables, the cyclic A-forms generated by the top vector, and what survives
at u = 1.
"""

from qfusion.aform import cyclic_aform, find_intertwiners, full_aform, specialize_u1
from qfusion.cli import action_table, lweight_text, table_text, vector_text
from qfusion.drinfeld_fusion import fundamental_pair
from qfusion.exact_coeffs import ONE, ZERO
from qfusion.modules_explicit import singular_vectors, submodule


def top(module, idx=0):
    v = [ZERO] * module.dim
    v[idx] = ONE
    return v


V, Vp = fundamental_pair("LR"), fundamental_pair("RL")

# The action tables, columns in the order f0 f1 f2 f3
for M in (V, Vp):
    print(f"== {M.name}")
    print(table_text(action_table(M, [0, 2, 1, 3])))
    print()

# Cyclic A-forms: V needs (1-u) f1, V' is the full lattice
for M in (V, Vp):
    L = cyclic_aform(M, top(M))
    print(f"cyclic A-form of {M.name}")
    for line in L.report():
        print("  " + line)
    print(f"  equals the full A-form: {L == full_aform(M)}")

# At u = 1 both specializations have a second singular line
S = specialize_u1(cyclic_aform(V, top(V)))
Sp = specialize_u1(cyclic_aform(Vp, top(Vp)))
for M in (S, Sp):
    print(f"singular vectors of {M.name}: {[vector_text(M, v) for v in singular_vectors(M)]}")

# The two specializations are isomorphic; sigma is pinned by sigma(f0) = f'0
sigma = find_intertwiners(S, Sp, fixed={0: top(Sp)})[0]
for c in range(S.dim):
    image = [sigma.get(r, c) for r in range(Sp.dim)]
    print(f"sigma({S.labels[c]}) = {vector_text(Sp, image)}")

# The full A-form specializes to a module that is not generated by f0
F = specialize_u1(full_aform(V))
sub = submodule(F, [top(F)])
print(f"submodule generated by f0 has dimension {len(sub)}; "
      f"f1 generates {len(submodule(F, [top(F, 2)]))} dimensions")
print("phi(z) on f0:", lweight_text(V.lweights[0]))
