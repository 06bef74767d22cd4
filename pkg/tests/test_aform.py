import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfusion.aform import (ALattice, LatticeError, cyclic_aform, find_intertwiners, full_aform,
                           hermite, is_isomorphism, is_stable, lattice_sum, n_valuation,
                           specialize_u1, star_fusion, star_fusion_lattice, tensor_d,
                           truncated_expansion)
from qfusion.drinfeld_fusion import fundamental_pair
from qfusion.exact_coeffs import ONE, ZERO, Rat, qint
from qfusion.modules_explicit import (FIELD_QU, is_lhw, is_simple_criterion, kr_sl2_string,
                                      qcharacter, singular_vectors, submodule, verify_relations)

W = ONE - Rat.u(1)


def unit(module, idx, coeff=ONE):
    v = [ZERO] * module.dim
    v[idx] = coeff
    return v


def span_equal(vectors, expected, dim):
    from qfusion.linalg import rank
    return rank(vectors) == rank(expected) == rank(vectors + expected) and len(vectors) <= dim


@pytest.fixture(scope="module")
def pair():
    return fundamental_pair("LR"), fundamental_pair("RL")


@pytest.fixture(scope="module")
def lattices(pair):
    V, Vp = pair
    return {"cyc": cyclic_aform(V, unit(V, 0)), "full": full_aform(V),
            "cyc'": cyclic_aform(Vp, unit(Vp, 0)), "full'": full_aform(Vp)}


# (1-u)-adic helpers ------------------------------------------------------------

@st.composite
def local_rats(draw):
    """Rational functions with a controlled (1-u)-adic valuation."""
    num = ZERO
    for _ in range(draw(st.integers(1, 3))):
        num = num + draw(st.integers(-3, 3)) * Rat.qu(draw(st.integers(-2, 2)), draw(st.integers(0, 2)))
    if num.is_zero():
        num = ONE
    den = ONE + draw(st.sampled_from([0, 1, 2])) * Rat.qu(draw(st.integers(-2, 2)), 1)
    if den.is_zero() or den.at_u1().is_zero():
        den = ONE
    return num / den * W ** draw(st.integers(-2, 2))


@given(local_rats(), st.integers(-2, 4))
def test_truncated_expansion_remainder(f, e):
    rest = f - truncated_expansion(f, e)
    assert rest.is_zero() or rest.u1_valuation() >= e


@given(local_rats(), local_rats(), st.integers(-2, 4))
def test_truncated_expansion_depends_on_class(f, g, e):
    g = g * W ** max(0, e - g.u1_valuation())
    assert truncated_expansion(f + g, e) == truncated_expansion(f, e)


@given(st.lists(st.lists(local_rats(), min_size=3, max_size=3), min_size=1, max_size=3))
def test_hermite_is_canonical(rows):
    basis = hermite(rows, 3)
    cols = [col for _, col, _ in basis]
    assert cols == sorted(set(cols))
    for vec, col, e in basis:
        assert vec[col] == W ** e
        assert all(x.is_zero() for x in vec[:col])
    again = hermite([b[0] for b in basis], 3)
    assert [tuple(b[0]) for b in again] == [tuple(b[0]) for b in basis]
    # a unit multiple of the input spans the same lattice
    scaled = hermite([[x * (ONE + Rat.q(1) * W) for x in r] for r in rows], 3)
    assert [tuple(b[0]) for b in scaled] == [tuple(b[0]) for b in basis]


# the fundamental sl2 pair ---------------------------------------------------------

def test_cyclic_forms(pair, lattices):
    V, Vp = pair
    # V: A f0 + A (1-u) f1 + A f2 + A f3 ; V': all four basis lines
    assert lattices["cyc"].pivots() == [(0, 0), (1, 0), (2, 1), (3, 0)]
    assert V.labels[2] == "f1"
    assert lattices["cyc'"].pivots() == [(0, 0), (1, 0), (2, 0), (3, 0)]
    for L in lattices.values():
        for vec, col, e in (b for blk in L.blocks.values() for b in blk):
            assert [k for k, x in enumerate(vec) if not x.is_zero()] == [col]
    assert lattices["cyc"] == ALattice(V, [unit(V, 0), unit(V, 1), unit(V, 2, W), unit(V, 3)])


def test_full_forms(lattices):
    assert lattices["full"].pivots() == [(0, 0), (1, 0), (2, 0), (3, 0)]
    assert lattices["full"] != lattices["cyc"]
    assert lattices["full'"] == lattices["cyc'"]
    for L in lattices.values():
        assert is_stable(L)


def test_lattice_membership(pair, lattices):
    V, _ = pair
    L = lattices["cyc"]
    assert L.contains(unit(V, 2, W))
    assert not L.contains(unit(V, 2))
    assert n_valuation(L, unit(V, 2)) == 1
    assert n_valuation(L, unit(V, 0, W ** 2)) == -2
    assert lattice_sum(L, lattices["full"]) == lattices["full"]
    with pytest.raises(ValueError):
        n_valuation(L, [ZERO] * 4)


@pytest.fixture(scope="module")
def specs(lattices):
    return {k: specialize_u1(L) for k, L in lattices.items()}


def test_specialization_labels_and_relations(specs):
    assert specs["cyc"].labels == ["f0", "f2", "(1-u)f1", "f3"]
    assert specs["cyc'"].labels == ["f'0", "f'2", "f'1", "f'3"]
    for S in specs.values():
        assert verify_relations(S).ok


def test_specialized_singular_vectors(specs):
    S, Sp = specs["cyc"], specs["cyc'"]
    assert span_equal(singular_vectors(S), [unit(S, 0), unit(S, 2)], 4)
    assert span_equal(singular_vectors(Sp), [unit(Sp, 0), unit(Sp, 1)], 4)
    # the lines (1-u)f1 and f'2 span 1-dim submodules
    assert len(submodule(S, [unit(S, 2)])) == 1
    assert len(submodule(Sp, [unit(Sp, 1)])) == 1
    assert not is_simple_criterion(S)
    assert not is_simple_criterion(Sp)


def test_intertwiner(specs):
    S, Sp = specs["cyc"], specs["cyc'"]
    sols = find_intertwiners(S, Sp, fixed={0: unit(Sp, 0)})
    assert len(sols) == 1
    sigma = sols[0]
    q = Rat.q(1)
    # sigma(f0) = f'0, sigma((1-u)f1) = (q^-1 - q) f'2, sigma(f2) = [2] f'1, sigma(f3) = f'3
    assert [sigma.get(r, 0) for r in range(4)] == unit(Sp, 0)
    assert [sigma.get(r, 2) for r in range(4)] == unit(Sp, 1, q.inverse() - q)
    assert [sigma.get(r, 1) for r in range(4)] == unit(Sp, 2, qint(2))
    assert [sigma.get(r, 3) for r in range(4)] == unit(Sp, 3)
    assert is_isomorphism(sigma)
    assert len(find_intertwiners(S, Sp)) == 1


def test_full_form_specialization(specs):
    F = specs["full"]
    assert F.labels == ["f0", "f2", "f1", "f3"]
    sub = submodule(F, [unit(F, 0)])
    assert span_equal(sub, [unit(F, 0), unit(F, 1), unit(F, 3)], 4)
    assert len(submodule(F, [unit(F, 2)])) == 4
    assert not is_lhw(F, unit(F, 0))


def test_fixture_runtime():
    start = time.perf_counter()
    V, Vp = fundamental_pair("LR"), fundamental_pair("RL")
    for M in (V, Vp):
        specialize_u1(cyclic_aform(M, unit(M, 0)))
        specialize_u1(full_aform(M))
    assert time.perf_counter() - start < 10


# fusion products ---------------------------------------------------------------------

STAR_CASES = [((1, 0), (1, 2)), ((2, 0), (2, 2)), ((3, 0), (1, 2)), ((2, 0), (1, 4)),
              ((1, 0), (1, 2), (1, 4))]


@pytest.mark.parametrize("case", STAR_CASES)
def test_star_fusion_is_multiplicative(sl2, case):
    mods = [kr_sl2_string(sl2, r, ("c", s)) for r, s in case]
    S = star_fusion(mods)
    expected = qcharacter(mods[0])
    for m in mods[1:]:
        expected = expected * qcharacter(m)
    assert qcharacter(S) == expected
    assert verify_relations(S).ok
    assert is_lhw(S, unit(S, 0))


def test_star_fusion_single_and_lattice(sl2):
    W1 = kr_sl2_string(sl2, 1, ("c", 0))
    assert star_fusion([W1]) is W1
    amb, L = star_fusion_lattice([W1, kr_sl2_string(sl2, 1, ("c", 2))])
    assert amb.field == FIELD_QU
    assert L.rank() == 4 and is_stable(L)


def test_star_fusion_rejects_non_lhw(sl2, specs):
    W1 = kr_sl2_string(sl2, 1, ("c", 0))
    with pytest.raises(ValueError):
        star_fusion([specs["full"], W1])


@pytest.mark.parametrize("a,b", [((1, 0), (1, 2)), ((1, 0), (1, 4)), ((2, 0), (1, 2))])
def test_tensor_d(sl2, a, b):
    M1, M2 = kr_sl2_string(sl2, a[0], ("c", a[1])), kr_sl2_string(sl2, b[0], ("c", b[1]))
    T = tensor_d(M1, M2)
    assert qcharacter(T) == qcharacter(M1) * qcharacter(M2)
    assert verify_relations(T).ok


def test_general_position_products_are_simple(sl2):
    # strings not in special position: the fusion product is simple
    S = star_fusion([kr_sl2_string(sl2, 1, ("c", 0)), kr_sl2_string(sl2, 1, ("c", 6))])
    assert is_simple_criterion(S)


def test_unstable_closure_is_reported(pair):
    V, _ = pair
    L = ALattice(V, [unit(V, 0)])
    assert not is_stable(L)
    with pytest.raises(LatticeError):
        specialize_u1(L)
