from fractions import Fraction
from itertools import combinations

import pytest

from momentsharp.asymptotic import threshold
from momentsharp.hall_matching import (
    ABORTED,
    HOLDS,
    VIOLATED,
    BipartiteInstance,
    HallViolated,
    MatchingCertificate,
    build_instance,
    certificate_problem,
    check_hall_flow,
    check_hall_subsets,
    construct_certificate,
    verify_certificate,
)
from momentsharp.partitions import poset
from momentsharp.weights import build_weight_table


def instance(d, q):
    t = build_weight_table(d, q)
    return t, build_instance(t)


def plain_hall(inst):
    """Every subset, no pruning: returns the set of violating subsets."""
    nbrs = inst.neighbors()
    dem = dict(inst.n_side)
    sup = dict(inst.p_side)
    bad = []
    ns = [n for n, _ in inst.n_side]
    for k in range(1, len(ns) + 1):
        for U in combinations(ns, k):
            cover = set().union(*(nbrs[n] for n in U))
            if sum(dem[n] for n in U) > sum(sup[p] for p in cover):
                bad.append(U)
    return bad


def synthetic(n_weights, p_weights, edges):
    return BipartiteInstance(
        0,
        0,
        tuple((n, Fraction(w)) for n, w in n_weights.items()),
        tuple((p, Fraction(w)) for p, w in p_weights.items()),
        tuple(edges),
    )


def test_instance_shape_d3():
    t, inst = instance(3, 7)
    assert inst.n_side == ((2, Fraction(1770, 7)),)
    assert set(inst.edges) == {(2, 0), (2, 1)}
    assert sum(w for _, w in inst.n_side) == sum(w for _, w in inst.p_side)


def test_d3_both_methods():
    _, inst = instance(3, 7)
    assert check_hall_subsets(inst).status == HOLDS
    v = check_hall_flow(inst)
    assert v.status == HOLDS
    assert v.max_flow == Fraction(1770, 7)


def test_d2_holds():
    _, inst = instance(2, 5)
    assert check_hall_subsets(inst).holds
    assert check_hall_flow(inst).holds


def test_isolated_vertex_violates():
    inst = synthetic({10: 3, 11: 1}, {20: 4}, [(11, 20)])
    for v in (check_hall_flow(inst), check_hall_subsets(inst)):
        assert v.status == VIOLATED
        assert v.violating == (10,)
        assert v.deficit == 3


def test_min_cut_witness_is_a_real_violation():
    # two demands sharing one small supply; the third supply is only reachable from n=3
    inst = synthetic({1: 5, 2: 5, 3: 1}, {7: 4, 8: 7}, [(1, 7), (2, 7), (3, 7), (3, 8)])
    v = check_hall_flow(inst)
    assert v.status == VIOLATED
    U = set(v.violating)
    nbrs = inst.neighbors()
    cover = set().union(*(nbrs[n] for n in U))
    dem = sum(w for n, w in inst.n_side if n in U)
    sup = sum(w for p, w in inst.p_side if p in cover)
    assert dem > sup
    assert dem - sup == v.deficit
    assert check_hall_subsets(inst).status == VIOLATED
    assert plain_hall(inst)


def test_subsets_abort_above_cap():
    _, inst = instance(20, 21)
    assert len(inst.n_side) == 17
    assert check_hall_subsets(inst, cap=10).status == ABORTED


@pytest.mark.parametrize("d,q", [(6, 7), (7, 9), (8, 9), (9, 11)])
def test_pruned_subsets_match_plain_enumeration(d, q):
    _, inst = instance(d, q)
    assert not plain_hall(inst)
    assert check_hall_subsets(inst).holds


def test_pruned_and_plain_agree_on_random_synthetic():
    import random

    rng = random.Random(7)
    for _ in range(200):
        n_w = {i: rng.randint(1, 6) for i in range(rng.randint(1, 6))}
        p_w = {10 + j: rng.randint(0, 6) for j in range(rng.randint(1, 6))}
        edges = [(n, p) for n in n_w for p in p_w if rng.random() < 0.4]
        inst = synthetic(n_w, p_w, edges)
        bad = plain_hall(inst)
        sub = check_hall_subsets(inst)
        flow = check_hall_flow(inst)
        assert (sub.status == VIOLATED) == bool(bad)
        assert (flow.status == VIOLATED) == bool(bad)
        if bad:
            assert sub.violating in bad
            assert flow.violating in bad


def test_certificate_d3_matches_hand_construction():
    for q in (4, 5, 7, 13):
        t, inst = instance(3, q)
        cert = construct_certificate(inst, t)
        tau = {(n, p): v for n, p, v in cert.tau}
        assert tau == {(2, 1): t.omegas[1], (2, 0): t.omegas[0]}
        assert verify_certificate(cert, t)


def test_certificate_d2_single_edge():
    t, inst = instance(2, 5)
    cert = construct_certificate(inst, t)
    assert cert.tau == ((1, 0, Fraction(4)),)
    assert t.omegas == (Fraction(4), Fraction(-4))
    assert verify_certificate(cert, t)


def test_certificate_d6_q8():
    t, inst = instance(6, 8)
    cert = construct_certificate(inst, t)
    assert verify_certificate(cert, t)
    assert cert.table_digest == t.digest()


def test_certificate_rejections():
    t, inst = instance(3, 7)
    cert = construct_certificate(inst, t)
    n, p, v = cert.tau[0]
    bumped = MatchingCertificate(3, 7, ((n, p, v + Fraction(1, 7)),) + cert.tau[1:], cert.table_digest)
    assert not verify_certificate(bumped, t)
    assert "row sum mismatch" in certificate_problem(bumped, t)
    with pytest.raises(ValueError):
        verify_certificate(cert, build_weight_table(3, 8))


def test_certificate_on_incomparable_pair_rejected():
    t = build_weight_table(6, 7)
    P = poset(6)
    a = P.index[(4, 1, 1, 0, 0, 0)]
    b = P.index[(3, 3, 0, 0, 0, 0)]
    # synthetic weights: make (4,1,1) demand and (3,3) supply
    rows = list(t.rows)
    from dataclasses import replace

    rows[a] = replace(rows[a], omega=Fraction(-1))
    rows[b] = replace(rows[b], omega=Fraction(1))
    fake = replace(t, rows=tuple(rows))
    cert = MatchingCertificate(6, 7, ((a, b, Fraction(1)),), "")
    msg = certificate_problem(cert, fake)
    assert msg is not None and "incomparable" in msg


def test_construct_refuses_violated_instance():
    inst = synthetic({10: 3}, {20: 3}, [])
    with pytest.raises(HallViolated):
        construct_certificate(inst)


def test_top_column_always_used():
    for d in range(4, 12):
        for q in threshold(d).search_range:
            t, inst = instance(d, q)
            cert = construct_certificate(inst, t)
            assert any(p == 0 and v > 0 for _, p, v in cert.tau)


def test_flow_is_deterministic():
    t, inst = instance(12, 14)
    a = construct_certificate(inst, t)
    b = construct_certificate(build_instance(t), t)
    assert a == b
