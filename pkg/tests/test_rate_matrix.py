import pytest

from lagrange_ppc.rate_matrix import (RateMatrix, build_general, build_systematic,
                                      from_interference, interference, systematic_nu, validate)
from lagrange_ppc.rs_lagrange import make_context

SMALL = [(4, 2, 2), (5, 2, 2), (5, 2, 1), (6, 2, 2), (7, 3, 2), (5, 3, 2), (6, 3, 1)]


@pytest.mark.parametrize("n,k,g", SMALL)
def test_general_builder_valid(n, k, g):
    ctx = make_context(n, k, g)
    lam = build_general(ctx)
    assert validate(lam, ctx) == []
    assert lam.nu == n and lam.kappa == ctx.k_tilde
    for j in range(n):
        assert sum(lam.column(j)) == ctx.k_tilde


@pytest.mark.parametrize("n,k,g", SMALL)
def test_systematic_builder_valid(n, k, g):
    ctx = make_context(n, k, g, systematic=True)
    lam = build_systematic(ctx)
    assert validate(lam, ctx) == []
    assert lam.nu == systematic_nu(n, k, ctx.k_tilde)
    r = lam.nu - k
    for u in range(k, lam.nu):
        assert lam.support(u) == tuple(range(k))
    assert r == min(k, n - ctx.k_tilde)


def test_small_systematic_matrix_and_interference():
    ctx = make_context(4, 2, 2, systematic=True)
    lam = build_systematic(ctx)
    assert lam.rows == ((1, 0, 1, 1), (0, 1, 1, 1), (1, 1, 0, 0))
    im = interference(lam)
    # 1-based: A = [[1,2,1,1],[3,3,2,2]], B = [[2,1,3,3]]
    assert im.A == ((0, 1, 0, 0), (2, 2, 1, 1))
    assert im.B == ((1, 0, 2, 2),)


def test_interference_round_trip_worked_general_layout():
    # block u misses database n - u (1-based); A/B as in the worked n=4 layout
    A = ((0, 0, 0, 1), (1, 1, 2, 2), (2, 3, 3, 3))
    B = ((3, 2, 1, 0),)
    from lagrange_ppc.rate_matrix import InterferenceMatrices
    lam = from_interference(InterferenceMatrices(A, B), 4)
    ctx = make_context(4, 2, 2)
    assert validate(lam, ctx) == []
    im = interference(lam)
    assert im.A == A and im.B == B


def test_validate_flags_problems():
    ctx = make_context(4, 2, 2)
    bad = RateMatrix.from_lists([[1, 1, 0, 0], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 1, 0]], kappa=3)
    errs = validate(bad, ctx)
    assert any("weight" in e for e in errs)
    assert any("information set" in e for e in errs)
    sys_ctx = make_context(4, 2, 2, systematic=True)
    wrong_bottom = RateMatrix.from_lists([[1, 0, 1, 1], [0, 1, 1, 1], [0, 1, 1, 0]], kappa=2,
                                         variant="systematic")
    assert any("systematic set" in e for e in validate(wrong_bottom, sys_ctx))
    with pytest.raises(ValueError):
        interference(bad)


def test_grid():
    ctx = make_context(4, 2, 2, systematic=True)
    assert build_systematic(ctx).grid().splitlines()[2] == "1 1 0 0"
