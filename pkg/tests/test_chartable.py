import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caminalab import chartable as ct
from caminalab import constructions as cons
from caminalab import group as gc
from caminalab.chartable import Cyclotomic

E27 = cons.extraspecial(3, 1, "expP")
F729 = cons.with_mu(cons.field_camina(3, 2), cons.canonical_mu(2, 4, 2))


def cyclotomics(p):
    return st.lists(st.integers(-20, 20), min_size=p, max_size=p).map(lambda xs: Cyclotomic.from_full(p, xs))


# -- Z[zeta_p] --------------------------------------------------------------------


def test_cyclotomic_examples():
    one_plus = Cyclotomic(3, (1, 1))
    assert one_plus * one_plus == Cyclotomic.zeta(3)
    assert Cyclotomic.zeta(3).conj() == Cyclotomic(3, (-1, -1))
    x = Cyclotomic(5, (2, -1, 0, 3))
    assert ct.cyc_mul(x, Cyclotomic.integer(5, 1)) == x
    assert Cyclotomic.zeta(3, 2) == Cyclotomic(3, (-1, -1))
    assert Cyclotomic.zeta(5, 5) == Cyclotomic.integer(5, 1)
    with pytest.raises(ct.PrimeMismatch):
        ct.cyc_add(Cyclotomic.integer(3, 1), Cyclotomic.integer(5, 1))


def test_format_and_parse():
    assert ct.format_cyclotomic((0, 3)) == "0+3z"
    assert ct.format_cyclotomic((-1, -1)) == "-1-1z"
    assert ct.format_cyclotomic((1, 0, -2, 4)) == "1+0z-2z^2+4z^3"
    for s in ("0+3z", "-1-1z", "1+0z-2z^2+4z^3"):
        p = 3 if s.count("z") == 1 else 5
        assert ct.format_cyclotomic(ct.parse_cyclotomic(s, p).coeffs) == s


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: st.tuples(cyclotomics(p), cyclotomics(p), cyclotomics(p))))
def test_ring_laws(xyz):
    x, y, z = xyz
    p = x.p
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert (x + (-x)).is_zero()
    assert (x * y).conj() == x.conj() * y.conj()
    assert x.conj().conj() == x
    # full expansion then reduction is the identity on canonical vectors
    assert Cyclotomic.from_full(p, ct.expand(np.array(x.coeffs))) == x


def test_sum_of_all_roots_is_zero():
    for p in (3, 5, 7):
        total = Cyclotomic.integer(p, 0)
        for k in range(p):
            total = total + Cyclotomic.zeta(p, k)
        assert total.is_zero()


# -- tables -------------------------------------------------------------------------


def test_extraspecial_table_shape():
    T = ct.build_table(E27)
    assert len(T.classes) == 11 and len(T.chars) == 11
    assert sorted(T.degrees()) == [1] * 9 + [3] * 2
    j = T.index(ct.IDENTITY)
    assert [T.value(i, j) for i in range(11)] == [Cyclotomic.integer(3, d) for d in T.degrees()]
    i = T.chars.index(ct.CharLabel(1, (1,)))
    assert ct.format_cyclotomic(T.values[i, T.index(ct.central((1,)))]) == "0+3z"
    assert sum(T.class_sizes) == 27


def test_orthogonality_certifies_and_detects():
    for G in (E27, cons.extraspecial(3, 1, "expP2"), cons.field_camina(3, 2), F729, cons.extraspecial(5, 1, "expP2")):
        T = ct.build_table(G)
        assert ct.check_orthogonality(T)
        assert len(T.classes) == G.p**G.n + G.p**G.r - 1
    T = ct.build_table(E27).copy()
    T.values[3, 5, 0] += 1
    assert not ct.check_orthogonality(T)
    assert ct.orthogonality_failure(T)[0] in ("row", "column")


def test_norm_of_a_character():
    T = ct.build_table(E27)
    i = T.chars.index(ct.CharLabel(1, (1,)))
    x = T.values[i]
    assert ct.inner_product_times_order(T, x, x) == Cyclotomic.integer(3, 27)


def test_induction_oracle():
    T = ct.build_table(E27)
    induced = ct.induced_from_center_oracle(E27, (1,), T)
    z = Cyclotomic.zeta(3)
    expected = {ct.IDENTITY: Cyclotomic.integer(3, 9), ct.central((1,)): z * Cyclotomic.integer(3, 9),
                ct.central((2,)): z * z * Cyclotomic.integer(3, 9)}
    for label, v in zip(T.classes, induced):
        assert v == expected.get(label, Cyclotomic.integer(3, 0))
    # <lam^G, lam^G> = p^(2m) |G|
    vec = np.array([v.coeffs for v in induced])
    assert ct.inner_product_times_order(T, vec, vec) == Cyclotomic.integer(3, 9 * 27)


@pytest.mark.parametrize("G", [E27, F729, cons.extraspecial(3, 2, "expP2")], ids=["e27", "f729", "e243"])
def test_rows_are_scaled_induced_characters(G):
    T = ct.build_table(G)
    scale = Cyclotomic.integer(G.p, G.p ** (G.r // 2))
    rows = set()
    for i, chi in enumerate(T.chars):
        if chi.rank == 1:
            assert ct.induced_from_center_oracle(G, chi.vec, T) == [v * scale for v in T.row(i)]
            rows.add(T.values[i].tobytes())
    assert len(rows) == G.p**G.n - 1


def test_power_maps():
    T = ct.build_table(F729)
    pi = T.power_maps[3]
    for j, c in enumerate(T.classes):
        if c.rank == 1:
            assert T.classes[pi[j]] == ct.IDENTITY
        if c.rank == 2:
            img = tuple(int(v) for v in F729.mu_matrix @ np.array(c.vec) % 3)
            assert T.classes[pi[j]] == (ct.central(img) if any(img) else ct.IDENTITY)
    # cube every element of one coset: all land in the class of (0, mu e)
    e = (1, 0, 0, 0)
    for z in ((0, 0), (1, 2), (2, 1)):
        assert ct.class_of(F729, gc.power(F729, (e, z), 3)) == T.classes[pi[T.index(ct.noncentral(e))]]


def test_not_camina_rejected():
    with pytest.raises(ct.NotCamina):
        ct.build_table(gc.GroupDatum.build(3, 2, 1))
