import numpy as np
import pytest

from caminalab import brauer
from caminalab import constructions as cons
from caminalab import enumeration as en
from caminalab import fpla
from caminalab import group as gc

# regression value: Camina commutator tables for p = 3, r = 4, n = 2
SURVIVORS_3_4_2 = 101088


def test_codes_round_trip():
    for seed in range(20):
        G = cons.random_datum(3, 4, 2, seed=seed)
        assert en.datum_from_codes(3, 4, 2, en.b_code(G), en.mu_code(G)) == G


def test_scan_3_2_1():
    survivors = en.scan_camina_b(3, 2, 1)
    assert [en.datum_from_codes(3, 2, 1, int(c)).B for c in survivors] == [((1,),), ((2,),)]


def test_scan_matches_predicate_3_2_2_and_3_4_1():
    for r, n in ((2, 2), (4, 1)):
        total = 3 ** (len(gc.pairs(r)) * n)
        brute = [c for c in range(total) if gc.is_camina(en.datum_from_codes(3, r, n, c))]
        assert en.scan_camina_b(3, r, n).tolist() == brute


def test_scan_3_4_2_regression(order729):
    assert order729.survivors == SURVIVORS_3_4_2
    survivors = en.scan_camina_b(3, 4, 2)
    rng = np.random.default_rng(0)
    for c in rng.choice(survivors, 40, replace=False):
        G = en.datum_from_codes(3, 4, 2, int(c), int(rng.integers(0, 3**8)))
        assert gc.is_camina(G)


def test_scan_parallel_matches_serial():
    assert np.array_equal(en.scan_camina_b(3, 4, 1, jobs=1), en.scan_camina_b(3, 4, 1, jobs=2))


def test_b_orbits_small():
    orbits = en.b_orbits(en.scan_camina_b(3, 2, 1), 3, 2, 1)
    assert [o.size for o in orbits] == [2]


def test_b_orbit_3_4_2_contains_field_table(order729):
    assert order729.b_orbit_sizes == [SURVIVORS_3_4_2]
    G = cons.field_camina(3, 2)
    assert gc.is_camina(en.datum_from_codes(3, 4, 2, en.b_code(G)))
    group_order = fpla.gl_order(4, 3) * fpla.gl_order(2, 3)
    assert all(group_order % s == 0 for s in order729.b_orbit_sizes)


def test_orbit_stabilizer_identity(order729):
    group_order = fpla.gl_order(4, 3) * fpla.gl_order(2, 3)
    for size, stab in zip(order729.b_orbit_sizes, order729.stabilizer_orders):
        assert size * stab == group_order
    assert order729.stabilizer_orders == [11520]


def test_stabilizer_is_a_group():
    G = cons.extraspecial(3, 2)
    stab = en.stabilizer(G)
    assert len(stab) * en.b_orbits(en.scan_camina_b(3, 4, 1), 3, 4, 1)[0].size == fpla.gl_order(4, 3) * 2
    keys = {(a.tobytes(), c.tobytes()) for a, c in stab}
    eye = (np.eye(4, dtype=np.int64).tobytes(), np.eye(1, dtype=np.int64).tobytes())
    assert eye in keys
    rng = np.random.default_rng(5)
    for _ in range(100):
        (a1, c1), (a2, c2) = (stab[i] for i in rng.integers(0, len(stab), 2))
        a, c = fpla.mat_mul(a1, a2, 3), fpla.mat_mul(c1, c2, 3)
        assert (a.tobytes(), c.tobytes()) in keys
        assert brauer.equivalence_holds(G, G, a, c, use_mu=False)


def test_mu_orbits_partition():
    G = cons.extraspecial(3, 1)
    orbits = en.mu_orbits(G, en.stabilizer(G))
    assert sorted(o.size for o in orbits) == [1, 8]
    assert sum(o.size for o in orbits) == 3**2


def test_classification_counts(extraspecial27, order729):
    assert len(extraspecial27.records) == 2
    assert sorted(rec.report.exponent for rec in extraspecial27.records) == [3, 9]
    assert len(en.classify(3, 4, 1).records) == 2
    assert len(order729.records) == 6
    assert order729.mho1_distribution() == {1: 1, 3: 1, 9: 4}
    assert sum(not rec.report.omega1_abelian for rec in order729.records if rec.mho1 == 9) == 1
    assert sum(rec.orbit_size for rec in order729.records) == SURVIVORS_3_4_2 * 3**8


def test_classification_tsv_frozen(order729):
    assert en.tsv_lines(order729) == [
        "3\t4\t2\t1\t729\tno\t3\t89\t101088",
        "3\t4\t2\t3\t243\tno\t9\t89\t32348160",
        "3\t4\t2\t9\t81\tno\t9\t89\t582266880",
        "3\t4\t2\t9\t81\tyes\t9\t89\t8087040",
        "3\t4\t2\t9\t81\tyes\t9\t89\t32348160",
        "3\t4\t2\t9\t81\tyes\t9\t89\t8087040",
    ]
    assert order729.brauer_pairs == [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]


def test_representatives_are_orbit_minima(order729):
    # the B code of every representative is the least Camina table
    least = int(en.scan_camina_b(3, 4, 2)[0])
    assert all(en.b_code(rec.representative) == least for rec in order729.records)


def test_render_text_and_tsv(extraspecial27):
    text = en.render_text(extraspecial27)
    assert text.endswith("\n") and "isomorphism classes: 2" in text
    assert en.render_tsv(extraspecial27).splitlines()[0] == "#" + en.TSV_HEADER


def test_guards():
    with pytest.raises(en.GuardError):
        en.classify(5, 6, 3)
    with pytest.raises(ValueError):
        en.classify(4, 2, 1)


def test_cross_validation_small(extraspecial27):
    assert en.cross_validate(extraspecial27, per_class=5, seed=3) == []
