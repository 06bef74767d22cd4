"""Fusion products of sl2 KR modules and the exact sequence behind the T-system.

W_r,a *f W_r,aq^2 is reducible: its q-character splits as the simple
W_r+1,a *f W_r-1,aq^2 plus a one-dimensional piece.
"""

from qfusion.aform import star_fusion, tensor_d
from qfusion.cartan import fixture
from qfusion.cli import vector_text
from qfusion.modules_explicit import (is_simple_criterion, kr_sl2_string, qcharacter,
                                      singular_vectors)
from qfusion.tsystem import exact_sequence_module_check
from qfusion.ymonoid import SpectralParam, dominant_part

cd = fixture("sl2")
a = SpectralParam("c", 0)

for r in (1, 2, 3):
    W1, W2 = kr_sl2_string(cd, r, a), kr_sl2_string(cd, r, a.times_q(2))
    mid = star_fusion([W1, W2])
    chi = qcharacter(mid)
    print(f"r={r}: W_r *f W_r has dim {mid.dim}, {len(dominant_part(chi))} dominant monomials, "
          f"simple {is_simple_criterion(mid)}, multiplicative {chi == qcharacter(W1) * qcharacter(W2)}")
    print("  singular vectors:", [vector_text(mid, v) for v in singular_vectors(mid)])
    print("  exact sequence:", exact_sequence_module_check(r, a))

# Strings in general position fuse to a simple module
gen = star_fusion([kr_sl2_string(cd, 1, a), kr_sl2_string(cd, 1, a.times_q(6))])
print(f"general position: simple {is_simple_criterion(gen)}")

# The product (x)_d uses the full A-form instead of the cyclic one
T = tensor_d(kr_sl2_string(cd, 1, a), kr_sl2_string(cd, 1, a.times_q(2)))
print(f"(x)_d: dim {T.dim}, singular vectors {[vector_text(T, v) for v in singular_vectors(T)]}")
