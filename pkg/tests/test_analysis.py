from fractions import Fraction

import pytest

from lagrange_ppc.analysis import (AuditError, asymptotic_rates, audit_download, audit_privacy,
                                   closed_form_report, desired_plus_mutant, extra_desired_mutant,
                                   per_db_download, rate_general, rate_systematic, reports_to_csv)
from lagrange_ppc.polyspace import default_candidate_set, monomial_count, nonparallel_count
from lagrange_ppc.query_engine import SumTerm, TauSum, plan
from lagrange_ppc.rs_lagrange import ConfigError, make_context

# reference curves for n=5, k=2, g=2, f = 1..8
GEN_MT = [0.666666666666667, 0.416666666666667, 0.310065982040978, 0.27498016623057,
          0.267631411411356, 0.266731030586641, 0.266669123066179, 0.266666720760106]
GEN_M = [0.666666666666667, 0.347801892042293, 0.280816587678577, 0.268278462002182,
         0.266773957130711, 0.266670760690996, 0.26666675682241, 0.266666667821618]
SYS_MT = [0.8, 0.533333333333333, 0.426666666666667, 0.40275319567355, 0.400134322434899,
          0.400003051781096, 0.400000032782557, 0.400000000168802]
SYS_M = [0.8, 0.457142857142857, 0.405544554455446, 0.400268735112686, 0.400006103608759,
         0.40000006556512, 0.400000000337604, 0.400000000000841]


def test_worked_rates():
    assert rate_general(4, 2, 2, 2, 3) == Fraction(32, 84)
    assert rate_systematic(4, 2, 2, 2, 3) == Fraction(27, 60)
    assert rate_general(5, 2, 2, 2, 5) == Fraction(1250, 3594)
    assert rate_systematic(5, 2, 2, 2, 5) == Fraction(1024, 2240)
    assert rate_systematic(5, 2, 2, 2, 3) == Fraction(64, 120)


@pytest.mark.parametrize("f", range(1, 9))
def test_reference_curves(f):
    mt, m = nonparallel_count(f, 2), monomial_count(f, 2)
    assert float(rate_general(5, 2, 2, f, mt)) == pytest.approx(GEN_MT[f - 1], abs=1e-9)
    assert float(rate_general(5, 2, 2, f, m)) == pytest.approx(GEN_M[f - 1], abs=1e-9)
    assert float(rate_systematic(5, 2, 2, f, mt)) == pytest.approx(SYS_MT[f - 1], abs=1e-9)
    assert float(rate_systematic(5, 2, 2, f, m)) == pytest.approx(SYS_M[f - 1], abs=1e-9)


def test_asymptotes():
    assert asymptotic_rates(5, 2, 2) == (Fraction(4, 15), Fraction(2, 5))
    assert asymptotic_rates(5, 2, 1)[0] == Fraction(3, 5)
    gen, sys_ = asymptotic_rates(5, 2, 2)
    for curve, lim in ((GEN_MT, gen), (GEN_M, gen), (SYS_MT, sys_), (SYS_M, sys_)):
        gaps = [abs(x - float(lim)) for x in curve]
        assert all(a >= b for a, b in zip(gaps, gaps[1:]))


def test_asymptote_is_large_mu_limit():
    # with no redundant types (mu = f) the rates tend to the limits as mu grows
    gen, sys_ = asymptotic_rates(5, 2, 2)
    assert abs(float(rate_general(5, 2, 2, 40, 40)) - float(gen)) < 1e-8
    assert abs(float(rate_systematic(5, 2, 2, 40, 40)) - float(sys_)) < 1e-8


def test_monotone_in_mu():
    for f in range(1, 6):
        for fn in (rate_general, rate_systematic):
            rates = [fn(5, 2, 2, f, mu) for mu in range(f, monomial_count(f, 2) + 1)]
            assert all(a >= b for a, b in zip(rates, rates[1:]))


def test_linear_case_is_mds_pir_form():
    # k~ = k: R = k n^(mu-1) / sum_tau C(mu,tau) k^(mu-tau+1) (n-k)^(tau-1)
    for n, k, f in [(5, 2, 2), (6, 3, 3), (4, 1, 2)]:
        kt = k
        den = sum(__import__("math").comb(f, t) * kt ** (f - t + 1) * (n - kt) ** (t - 1)
                  for t in range(1, f + 1))
        assert rate_general(n, k, 1, f, f) == Fraction(k * n ** (f - 1), den)


def test_rate_preconditions():
    with pytest.raises(ConfigError):
        rate_general(4, 3, 2, 2, 3)
    with pytest.raises(ConfigError):
        rate_systematic(4, 2, 2, 2, 1)
    with pytest.raises(ConfigError):
        rate_general(4, 2, 2, 1, 7)          # mu(1,2) = q + 1 = 6


def test_per_db_download():
    assert per_db_download(3, 4, 2, 3, 5) == 84
    assert per_db_download(2, 3, 2, 3, 5) == 30


@pytest.mark.parametrize("sys_,D", [(False, 336), (True, 120)])
def test_audit_download(sys_, D):
    ctx = make_context(4, 2, 2, systematic=sys_)
    cs = default_candidate_set(2, 2, 3, ctx.q)
    rep = audit_download(plan(ctx, cs, 1, 0))
    assert rep.simulated_D == D
    assert rep.simulated_rate == rep.closed_form_rate
    assert sum(rep.ledger.values()) == D


def test_audit_download_linear():
    ctx = make_context(5, 2, 1)
    cs = default_candidate_set(2, 1, 2, ctx.q)
    rep = audit_download(plan(ctx, cs, 0, 0))
    assert rep.simulated_rate == rate_general(5, 2, 1, 2, 2)


def test_audit_download_catches_extra(ex1):
    ctx, cs = ex1
    p = plan(ctx, cs, 0, 0)
    p.queries[2].append(TauSum(-1, 2, 1, 0, (0,), True, (SumTerm(0, 0, 1),)))
    with pytest.raises(AuditError, match="DB3 round 1"):
        audit_download(p)


def test_csv():
    text = reports_to_csv([closed_form_report("general", 4, 2, 2, 2, 3)])
    assert text.splitlines() == ["scheme,n,k,g,f,mu,rate_exact,rate_float,D,L",
                                 "general,4,2,2,2,3,8/21,0.380952381,336,128"]


def test_privacy_small(ex1):
    ctx, cs = ex1
    rep = audit_privacy(ctx, cs, 150)
    assert rep.ok and rep.structural_ok and rep.distributional_ok


def test_privacy_mutants(ex1):
    ctx, cs = ex1
    base = lambda c, s, v, seed: plan(c, s, v, seed)  # noqa: E731
    rep = audit_privacy(ctx, cs, 20, builder=extra_desired_mutant(base))
    assert not rep.structural_ok and not rep.ok
    rep = audit_privacy(ctx, cs, 150, builder=desired_plus_mutant(base))
    assert rep.structural_ok and rep.distributional_ok is False


def test_privacy_single_candidate():
    ctx = make_context(4, 2, 2)
    cs = default_candidate_set(1, 2, 1, ctx.q)
    assert audit_privacy(ctx, cs, 5).ok
