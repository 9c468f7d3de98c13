import re
from collections import Counter
from pathlib import Path

import pytest
from scipy.stats import chisquare

from lagrange_ppc.polyspace import Candidate, CandidateError, CandidateSet, default_candidate_set
from lagrange_ppc.query_engine import (audit_plan, group_counts, index_preparation, plan,
                                       plan_general, plan_systematic, redundancy_relations)
from lagrange_ppc.rate_matrix import InterferenceMatrices, from_interference
from lagrange_ppc.rs_lagrange import ConfigError, make_context
from lagrange_ppc.storage_sim import MessageStore, answer, encode_store
from lagrange_ppc.recovery import offline_reconstruct, decode, ground_truth

DATA = Path(__file__).parent / "data"


def split_counts(p, j):
    """Per round: (desired, undesired) downloaded at database j."""
    out = []
    for tau in p.rounds():
        c = Counter(s.desired for s in p.queries[j] if s.round == tau)
        out.append((c[True], c[False]))
    return out


def test_small_general_split(ex1):
    ctx, cs = ex1
    p = plan_general(ctx, cs, 0, seed=0)
    for j in range(4):
        assert split_counts(p, j) == [(27, 27), (18, 9), (3, 0)]
    assert p.download == 336 and p.beta == 64 and p.L == 128


def test_small_systematic_split(ex2):
    ctx, cs = ex2
    p = plan_systematic(ctx, cs, 0, seed=0)
    for j in range(4):
        assert split_counts(p, j) == [(8, 8), (8, 4), (2, 0)]
    assert p.download == 120 and p.beta == 27


def test_all_independent_candidates():
    ctx = make_context(4, 2, 2)
    cs = default_candidate_set(2, 2, 2, ctx.q)
    p = plan_general(ctx, cs, 1, seed=3)
    assert [p.per_round_counts(j) for j in range(4)] == [[18, 3]] * 4
    assert p.download == 84


def test_single_candidate_systematic():
    ctx = make_context(5, 2, 2, systematic=True)
    cs = default_candidate_set(1, 2, 1, ctx.q)
    p = plan_systematic(ctx, cs, 0)
    assert [p.per_round_counts(j) for j in range(5)] == [[2]] * 5
    assert p.download == 10 and p.L == 8


def test_group_counts():
    assert group_counts(3, 3, 4) == [9, 3, 1]
    assert group_counts(3, 2, 3) == [4, 2, 1]


@pytest.mark.parametrize("n,k,g,f,mu,sys_", [
    (4, 2, 2, 2, 3, False), (4, 2, 2, 2, 3, True), (4, 2, 2, 1, 4, False),
    (4, 2, 2, 1, 4, True), (5, 2, 1, 2, 2, False), (5, 3, 2, 2, 3, False),
    (6, 2, 2, 2, 3, True), (5, 2, 2, 1, 2, True)])
def test_plans_pass_audit_and_are_symmetric(n, k, g, f, mu, sys_):
    ctx = make_context(n, k, g, systematic=sys_)
    cs = default_candidate_set(f, g, mu, ctx.q)
    tables = set()
    for v in range(mu):
        p = plan(ctx, cs, v, seed=v)
        assert audit_plan(p) == []
        tables.add(tuple(sorted(p.count_table().items())))
    assert len(tables) == 1


def test_determinism_and_seed_dependence(ex1):
    ctx, cs = ex1
    assert plan(ctx, cs, 0, 5).trace() == plan(ctx, cs, 0, 5).trace()
    assert plan(ctx, cs, 0, 5).trace() != plan(ctx, cs, 0, 6).trace()


def test_index_preparation():
    a = index_preparation(3, 64, 11)
    assert len(a) == 3 and a == index_preparation(3, 64, 11)
    assert sorted(a[0]) == list(range(64))
    assert index_preparation(2, 1, 4) == ((0,), (0,))
    hits = Counter(index_preparation(1, 8, s)[0][0] for s in range(2000))
    assert chisquare([hits[i] for i in range(8)]).pvalue > 0.01


def test_trace_format(ex1):
    ctx, cs = ex1
    line = re.compile(r"^DB[1-4] R[1-3] [DU]( [+-][1-3]:\d+)+$")
    lines = plan(ctx, cs, 0, 0).trace().splitlines()
    assert len(lines) == 336
    assert all(line.match(s) for s in lines)


@pytest.mark.parametrize("name,sys_", [("small_general_v1_seed0.trace", False),
                                      ("small_systematic_v1_seed0.trace", True)])
def test_golden_traces(name, sys_):
    ctx = make_context(4, 2, 2, systematic=sys_)
    cs = default_candidate_set(2, 2, 3, ctx.q)
    assert plan(ctx, cs, 0, 0).trace() == (DATA / name).read_text()


def test_round_two_layout(ex1):
    """Inside each round-2 group at a database: {x:a, y:s}, {x:b, z:s}, {y:b, z:a}."""
    ctx, cs = ex1
    p = plan(ctx, cs, 0, 2)
    for g in p.groups:
        if g.round != 2:
            continue
        for j in g.dbs:
            xy = {t.candidate: t.row for t in g.sums[(j, (0, 1))].terms}
            xz = {t.candidate: t.row for t in g.sums[(j, (0, 2))].terms}
            yz = {t.candidate: t.row for t in g.sums[(j, (1, 2))].terms}
            assert xy[1] == xz[2]          # shared side row
            assert yz[1] == xz[0] and yz[2] == xy[0]
            assert len({xy[0], xz[0], xy[1]}) == 3


def test_rows_shared_symmetrically(ex1):
    ctx, cs = ex1
    for v in range(3):
        p = plan(ctx, cs, v, 1)
        for g in p.groups:
            for j in g.dbs:
                use = Counter(t.row for (jj, _), s in g.sums.items() if jj == j for t in s.terms)
                assert set(use.values()) == {cs.mu - g.round + 1}


def test_custom_rate_matrix_from_worked_layout(ex1):
    ctx, cs = ex1
    A = ((0, 0, 0, 1), (1, 1, 2, 2), (2, 3, 3, 3))
    B = ((3, 2, 1, 0),)
    lam = from_interference(InterferenceMatrices(A, B), 4)
    for v in range(3):
        p = plan_general(ctx, cs, v, seed=4, rate_matrix=lam)
        assert audit_plan(p) == []
        ms = MessageStore.random(2, p.beta, 2, ctx.q, 4)
        nodes = encode_store(ctx, ms)
        rec = decode(p, [answer(nd, cs, p.queries[nd.j]) for nd in nodes])
        assert rec.X == ground_truth(cs, ms, v)


def test_side_units_come_from_other_databases(ex1):
    ctx, cs = ex1
    p = plan(ctx, cs, 2, 0)
    for s in p.queries[1]:
        info = p.side_info(s)
        if s.desired and s.round > 1:
            gid, typ, dbs = info
            assert 1 not in dbs and len(dbs) == ctx.k_tilde and 2 not in typ
        else:
            assert info is None


def test_offline_values_match_direct_evaluation():
    # dropped sums (round-1 dependents and higher-round redundant types) are
    # reconstructed exactly from the downloaded ones
    for n, k, g, f, mu, sys_ in [(4, 2, 2, 1, 4, False), (4, 2, 2, 1, 4, True),
                                 (4, 2, 2, 2, 3, False)]:
        ctx = make_context(n, k, g, systematic=sys_)
        cs = default_candidate_set(f, g, mu, ctx.q)
        for v in range(mu):
            p = plan(ctx, cs, v, 9)
            ms = MessageStore.random(f, p.beta, k, ctx.q, 9)
            nodes = encode_store(ctx, ms)
            ans = [answer(nd, cs, p.queries[nd.j]) for nd in nodes]
            got = offline_reconstruct(p, ans)
            for nd in nodes:
                direct = answer(nd, cs, p.offline[nd.j])
                assert [got[s.sid] for s in p.offline[nd.j]] == direct


def test_redundancy_relation_general_candidates():
    # mu = M + 2 with non-monomial tail candidates: one dropped type per round >= 2
    q = 5
    x, y = Candidate.projection(0, 2, q), Candidate.projection(1, 2, q)
    base = [x, y] + [Candidate.monomial(e, q) for e in ((1, 1), (2, 0), (0, 2))]
    tail = [Candidate((((1, 0), 1), ((1, 1), 2)), q), Candidate((((0, 1), 3), ((2, 0), 1), ((0, 2), 4)), q)]
    cs = CandidateSet(2, 2, q, tuple(base + tail))
    dropped, rel = redundancy_relations(cs)
    assert dropped == {(5, 6)}
    import random
    from lagrange_ppc.polyspace import evaluate
    from itertools import combinations
    rng = random.Random(0)
    mu = cs.mu
    for _ in range(20):
        pts = {A: [rng.randrange(q) for _ in range(2)] for A in combinations(range(mu), 1)}
        theta = {A: rng.choice((1, -1)) for A in pts}

        def S(T):
            tot = 0
            for i, m in enumerate(T):
                A = tuple(a for a in T if a != m)
                tot += (-1) ** i * theta[A] * evaluate(cs[m], pts[A])
            return tot % q
        assert S((5, 6)) == sum(c * S(T) for T, c in rel[(5, 6)].items()) % q


def test_dependent_basis_rejected():
    q = 5
    x, y = Candidate.projection(0, 2, q), Candidate.projection(1, 2, q)
    xx = Candidate.monomial((2, 0), q)
    dup = Candidate((((1, 0), 1), ((2, 0), 1)), q)      # x + x^2, dependent on x, x^2
    extra = [Candidate.monomial((1, 1), q), Candidate.monomial((0, 2), q)]
    cs = CandidateSet(2, 2, q, (x, y, xx, dup, extra[0], extra[1]))
    with pytest.raises(CandidateError):
        redundancy_relations(cs)


def test_precondition_errors(ex1, ex2):
    ctx, cs = ex1
    with pytest.raises(ConfigError):
        plan(ctx, cs, 3)
    with pytest.raises(ConfigError):
        plan_systematic(ctx, cs, 0)
    with pytest.raises(ConfigError):
        plan(ctx, cs, 0, scheme="other")
    with pytest.raises(ConfigError):
        plan(ctx, default_candidate_set(2, 2, 3, 7), 0)
