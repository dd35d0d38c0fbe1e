import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caminalab import brauer
from caminalab import chartable as ct
from caminalab import constructions as cons
from caminalab import enumeration as en
from caminalab import fpla

E27, E27b = cons.extraspecial(3, 1, "expP"), cons.extraspecial(3, 1, "expP2")
F729 = cons.field_camina(3, 2)


def rank2(G):
    return [rec.representative for rec in G.records if rec.mho1 == 9]


def test_invariant_triples():
    assert brauer.invariant_triple(E27) == (9, 3, 1)
    assert brauer.invariant_triple(E27b) == (9, 3, 3)
    assert brauer.invariant_triple(cons.with_mu(F729, cons.canonical_mu(2, 4, 2))) == (81, 9, 9)


def test_main_theorem_examples(order729):
    assert not brauer.check_main_theorem(E27, E27b)
    assert brauer.check_main_theorem(E27, E27)
    P, Q = rank2(order729)[:2]
    assert brauer.check_main_theorem(P, Q)
    with pytest.raises(brauer.ParameterMismatch):
        brauer.check_main_theorem(E27, cons.extraspecial(5, 1))


def test_nenciu_examples():
    w = brauer.check_nenciu(E27, E27)
    assert np.array_equal(w.A, np.eye(2, dtype=np.int64)) and np.array_equal(w.C, np.eye(1, dtype=np.int64))
    assert brauer.check_nenciu(E27, E27b) is None
    assert not brauer.phi(E27).any()
    with pytest.raises(brauer.ParameterMismatch):
        brauer.check_nenciu(E27, F729)


def test_nenciu_matches_exhaustive_search_r2_n1():
    data = [cons.random_datum(3, 2, 1, seed=s, require_camina=True) for s in range(12)] + [E27, E27b]
    for P, Q in itertools.product(data, repeat=2):
        fast, slow = brauer.check_nenciu(P, Q), brauer.nenciu_exhaustive(P, Q)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert brauer.nenciu_holds(P, Q, fast.A, fast.C)


def test_nenciu_witnesses_on_order729(order729):
    reps = [rec.representative for rec in order729.records]
    for P, Q in itertools.product(reps, repeat=2):
        w = brauer.check_nenciu(P, Q)
        assert (w is not None) == brauer.check_main_theorem(P, Q)
        if w is not None:
            assert np.array_equal(fpla.mat_mul(w.C, P.mu_matrix, 3), fpla.mat_mul(Q.mu_matrix, w.A, 3))
            assert fpla.is_invertible(w.A, 3) and fpla.is_invertible(w.C, 3)


def test_direct_examples():
    TP = ct.build_table(E27)
    w = brauer.match_tables(TP, TP)
    assert w.rho == tuple(range(len(TP.classes))) and w.tau == tuple(range(len(TP.chars)))
    assert brauer.check_direct(E27, E27b, True) is None
    w = brauer.check_direct(E27, E27b, False)
    assert w is not None
    assert brauer.witness_holds(TP, ct.build_table(E27b), w, use_power_maps=False)


def test_direct_rejects_perturbed_table():
    TP = ct.build_table(E27)
    TQ = TP.copy()
    TQ.values[-1, -1, 0] += 1
    assert brauer.match_tables(TP, TQ, False) is None


def test_direct_agrees_with_theorem_on_order729(order729):
    reps = [rec.representative for rec in order729.records]
    tables = [ct.build_table(G) for G in reps]
    for i, j in itertools.combinations(range(len(reps)), 2):
        w = brauer.match_tables(tables[i], tables[j], True)
        assert (w is not None) == brauer.check_main_theorem(reps[i], reps[j])
        if w is not None:
            assert brauer.witness_holds(tables[i], tables[j], w)
        assert brauer.match_tables(tables[i], tables[j], False) is not None


def test_iso_permuted_basis():
    G = cons.with_mu(F729, cons.canonical_mu(2, 4, 1))
    A = np.eye(4, dtype=np.int64)[[1, 0, 3, 2]]
    C = np.eye(2, dtype=np.int64)[[1, 0]]
    H = brauer.transform(G, A, C)
    w = brauer.is_isomorphic(G, H, with_correction=True)
    assert w is not None and brauer.equivalence_holds(G, H, w.A, w.C)
    assert not brauer.solve_coboundary(G, H, A, C).any()
    assert brauer.is_isomorphic(E27, E27b) is None
    assert brauer.is_isomorphic(cons.extraspecial(3, 2, "expP"), cons.extraspecial(3, 2, "expP2")) is None


def test_identity_coboundary_is_zero():
    assert not brauer.solve_coboundary(E27b, E27b, np.eye(2, dtype=np.int64), np.eye(1, dtype=np.int64)).any()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(3, 2, 1), (3, 4, 1), (3, 3, 2), (5, 2, 1)]))
def test_transformed_data_are_isomorphic(seed, shape):
    p, r, n = shape
    G = cons.random_datum(p, r, n, seed=seed)
    rng = cons.SplitMix64(seed)
    A, C = en.random_gl(r, p, rng), en.random_gl(n, p, rng)
    H = brauer.transform(G, A, C)
    assert brauer.equivalence_holds(G, H, A, C)
    w = brauer.is_isomorphic(G, H, with_correction=True)
    assert w is not None
    image = brauer.iso_map(G, w.A, w.C, w.q)
    assert np.unique(image).size == G.order


def test_orbit_members_lift_to_isomorphisms(order729):
    """Every class member moved by random (A, C) admits a verified correction q."""
    assert en.cross_validate(order729, per_class=2, seed=11) == []


def test_coboundary_failure_is_reported():
    # an equivalence of the alternating forms alone need not respect mu
    A, C = np.eye(2, dtype=np.int64), np.eye(1, dtype=np.int64)
    with pytest.raises(brauer.CoboundaryError):
        brauer.solve_coboundary(E27, E27b, A, C)
