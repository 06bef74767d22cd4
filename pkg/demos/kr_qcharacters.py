"""q-characters of Kirillov-Reshetikhin modules and the T-system.

Expands KR q-characters for G2, checks that each has a single dominant
monomial, then verifies the T-system, its dominant-monomial identity and
its Q-system image on small levels.
"""

from qfusion.cartan import fixture
from qfusion.qchar_engine import kr_qchar
from qfusion.tsystem import (asymptotic_check, dominant_identity_check, qsystem_check,
                             s_term_qchar, verify_tsystem)
from qfusion.ymonoid import SpectralParam, dominant_part

cd = fixture("G2")
a = SpectralParam("a", 0)
print(f"Cartan matrix {cd.C}, symmetrizer {cd.r}")

# Dimensions and dominant monomials
for i in (1, 2):
    for r in (1, 2):
        chi = kr_qchar(cd, i, r, a)
        print(f"W^({i})_{r}: dim {chi.dimension()}, dominant monomials {len(dominant_part(chi))}")

# The fundamental q-character of the short node, term by term
print(kr_qchar(cd, 2, 1, a).render())

# T-system: chi(W_r,a) chi(W_r,aq_i^2) = chi(W_r+1,a) chi(W_r-1,aq_i^2) + S
for i in (1, 2):
    for r in (1, 2):
        rep = verify_tsystem(cd, i, r, a)
        S = s_term_qchar(cd, i, r, a)
        print(f"i={i} r={r}: T-system {bool(rep)}, dominant identity "
              f"{dominant_identity_check(cd, i, r, a)}, Q-system {bool(qsystem_check(cd, i, r))}, "
              f"dim S = {S.dimension()}")

# Normalized characters stabilize as the level grows
sl3 = fixture("sl3")
for name, data in asymptotic_check(sl3, 1).items():
    print(f"sl3 {name}: stable from k = {data['k0']}, {len(data['limit'])} terms of degree <= 2")
