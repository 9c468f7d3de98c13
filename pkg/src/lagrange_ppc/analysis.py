"""Closed-form rates, download ledgers and the privacy auditor."""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .field import smallest_valid_modulus
from .polyspace import monomial_count, nonredundant_types, polynomial_count
from .rate_matrix import systematic_nu
from .rs_lagrange import ConfigError, decoding_dimension_raw

CSV_COLUMNS = ["scheme", "n", "k", "g", "f", "mu", "rate_exact", "rate_float", "D", "L"]


class AuditError(AssertionError):
    pass


def _check(n, k, g, f, mu, q=None):
    if not (1 <= k <= n and g >= 1 and f >= 1):
        raise ConfigError(f"bad parameters n={n} k={k} g={g} f={f}")
    if g * (k - 1) + 1 > n:
        raise ConfigError(f"g(k-1)+1 = {g * (k - 1) + 1} exceeds n = {n}")
    q = q or smallest_valid_modulus(n)
    if not f <= mu <= polynomial_count(f, g, q):
        raise ConfigError(f"mu={mu} outside [f, mu(f,g)]")


def per_db_download(kappa: int, nu: int, f: int, mu: int, M: int) -> int:
    """Sums downloaded from one database."""
    total = f * kappa ** mu
    for tau in range(2, mu + 1):
        total += nonredundant_types(mu, tau, M) * kappa ** (mu - tau + 1) * (nu - kappa) ** (tau - 1)
    return total


def rate_general(n, k, g, f, mu, q=None) -> Fraction:
    _check(n, k, g, f, mu, q)
    kt = decoding_dimension_raw(n, k, g)
    M = monomial_count(f, g)
    den = f * kt ** mu
    for tau in range(2, mu + 1):
        den += nonredundant_types(mu, tau, M) * kt ** (mu - tau + 1) * (n - kt) ** (tau - 1)
    return Fraction(k * n ** (mu - 1), den)


def rate_systematic(n, k, g, f, mu, q=None) -> Fraction:
    _check(n, k, g, f, mu, q)
    kt = decoding_dimension_raw(n, k, g)
    nu = systematic_nu(n, k, kt)
    M = monomial_count(f, g)
    den = f * k ** (mu - 1)
    for tau in range(2, mu + 1):
        den += nonredundant_types(mu, tau, M) * k ** (mu - tau) * (nu - k) ** (tau - 1)
    return Fraction(nu ** mu, n * den)


def rate(scheme, n, k, g, f, mu, q=None) -> Fraction:
    if scheme == "general":
        return rate_general(n, k, g, f, mu, q)
    if scheme == "systematic":
        return rate_systematic(n, k, g, f, mu, q)
    raise ConfigError(f"unknown scheme {scheme!r}")


def asymptotic_rates(n, k, g) -> tuple:
    """Large-f limits (general, systematic)."""
    kt = decoding_dimension_raw(n, k, g)
    if kt > n:
        raise ConfigError("k~ exceeds n")
    nu = systematic_nu(n, k, kt)
    return Fraction(k * (n - kt), kt * n), Fraction(nu - k, n)


@dataclass
class RateReport:
    scheme: str
    n: int
    k: int
    g: int
    f: int
    mu: int
    q: int
    closed_form_rate: Fraction
    L: int
    simulated_D: int | None = None
    simulated_rate: Fraction | None = None
    ledger: dict = field(default_factory=dict)   # (db, round, type) -> count

    @property
    def D(self) -> int:
        if self.simulated_D is not None:
            return self.simulated_D
        return int(self.L / self.closed_form_rate)

    def csv_row(self) -> list:
        r = self.simulated_rate if self.simulated_rate is not None else self.closed_form_rate
        return [self.scheme, self.n, self.k, self.g, self.f, self.mu,
                f"{r.numerator}/{r.denominator}", f"{float(r):.9f}", self.D, self.L]


def closed_form_report(scheme, n, k, g, f, mu, q=None) -> RateReport:
    q = q or smallest_valid_modulus(n)
    R = rate(scheme, n, k, g, f, mu, q)
    kt = decoding_dimension_raw(n, k, g)
    nu = n if scheme == "general" else systematic_nu(n, k, kt)
    return RateReport(scheme, n, k, g, f, mu, q, R, k * nu ** mu)


def reports_to_csv(reports: Iterable[RateReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def audit_download(plan) -> RateReport:
    """Count the plan's downloads and compare with the closed form exactly."""
    from .query_engine import expected_count, retained_types
    ctx = plan.ctx
    ledger = plan.count_table()
    for j in range(ctx.n):
        for tau in range(1, plan.mu + 1):
            want = expected_count(plan.kappa, plan.nu, plan.mu, tau)
            for T in retained_types(plan, tau):
                got = ledger.get((j, tau, T), 0)
                if got != want:
                    raise AuditError(f"DB{j + 1} round {tau} type {tuple(m + 1 for m in T)}: "
                                     f"{got} sums, expected {want}")
    extra = [key for key in ledger
             if key[2] not in set(retained_types(plan, key[1]))]
    if extra:
        j, tau, T = extra[0]
        raise AuditError(f"DB{j + 1} round {tau} downloads non-retained type {tuple(m + 1 for m in T)}")
    rep = closed_form_report(plan.scheme, ctx.n, ctx.k, ctx.g, plan.f, plan.mu, ctx.q)
    D = plan.download
    rep.simulated_D = D
    rep.simulated_rate = Fraction(plan.L, D)
    rep.ledger = ledger
    if rep.L != plan.L or rep.simulated_rate != rep.closed_form_rate:
        raise AuditError(f"simulated rate {rep.simulated_rate} != closed form {rep.closed_form_rate}")
    return rep


@dataclass
class PrivacyReport:
    structural_ok: bool
    distributional_ok: bool | None
    p_values: dict = field(default_factory=dict)      # db -> p-value
    messages: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.structural_ok and self.distributional_ok is not False


def structural_table(plan) -> tuple:
    """Per-database (round, type) -> count, as a hashable value."""
    return tuple(tuple(sorted(Counter((s.round, s.type) for s in qs).items()))
                 for qs in plan.queries)


def observations(plan, db: int):
    """What database ``db`` sees: one (type, candidate, row, sign) per summand."""
    for s in plan.queries[db]:
        for t in s.terms:
            yield (s.type, t.candidate, t.row, t.sign)


def stream_features(plan, db: int):
    """Ordered view: (position, sign pattern) of every sum sent to ``db``."""
    for pos, s in enumerate(plan.queries[db]):
        yield (pos, tuple(t.sign for t in s.terms))


def _chi2_pvalue(per_v: list) -> float:
    from scipy.stats import chi2_contingency
    cats = sorted(set().union(*per_v))
    if len(cats) < 2:
        return 1.0
    table = [[c[x] for x in cats] for c in per_v]
    return float(chi2_contingency(table).pvalue)


def audit_privacy(ctx, cs, seeds: int = 1000, scheme: str | None = None,
                  confidence: float = 0.99, builder: Callable | None = None,
                  distributional: bool = True) -> PrivacyReport:
    """Structural and statistical check that each database's view ignores v.

    ``builder(ctx, cs, v, seed)`` makes plans (defaults to the scheme's
    planner). Each database is tested on its own; the significance level is
    split across databases.
    """
    from .query_engine import plan as make_plan
    if builder is None:
        def builder(c, s, v, seed):
            return make_plan(c, s, v, seed, scheme)
    mu, n = cs.mu, ctx.n
    rep = PrivacyReport(True, None)
    if mu == 1:
        rep.distributional_ok = True
        rep.messages.append("single candidate: nothing to hide")
        return rep
    base = None
    for v in range(mu):
        tab = structural_table(builder(ctx, cs, v, 0))
        if base is None:
            base = tab
        elif tab != base:
            rep.structural_ok = False
            for j in range(n):
                if tab[j] != base[j]:
                    rep.messages.append(f"DB{j + 1}: count table for v={v + 1} differs from v=1")
                    break
    if not distributional or not rep.structural_ok:
        return rep
    multiset = [[Counter() for _ in range(mu)] for _ in range(n)]
    ordered = [[Counter() for _ in range(mu)] for _ in range(n)]
    for seed in range(seeds):
        for v in range(mu):
            p = builder(ctx, cs, v, seed)
            for j in range(n):
                multiset[j][v].update(observations(p, j))
                ordered[j][v].update(stream_features(p, j))
    level = (1 - confidence) / (2 * n)
    rep.distributional_ok = True
    for j in range(n):
        pval = min(_chi2_pvalue(multiset[j]), _chi2_pvalue(ordered[j]))
        rep.p_values[j] = pval
        if pval < level:
            rep.distributional_ok = False
            rep.messages.append(f"DB{j + 1}: query stream depends on v (p={pval:.3g})")
    return rep


def extra_desired_mutant(builder: Callable, target_v: int = 0) -> Callable:
    """Planner that, for v == target_v, sneaks one extra desired 1-sum to DB1."""
    from .query_engine import SumTerm, TauSum

    def mutant(ctx, cs, v, seed):
        p = builder(ctx, cs, v, seed)
        if v == target_v:
            s0 = p.queries[0][0]
            extra = TauSum(-1, 0, 1, s0.group, (v,), True, (SumTerm(v, s0.terms[0].row, 1),))
            p.queries[0] = p.queries[0] + [extra]
        return p
    return mutant


def desired_plus_mutant(builder: Callable) -> Callable:
    """Planner that flips each desired sum so the desired term reads +1."""
    from dataclasses import replace
    from .query_engine import SumTerm

    def mutant(ctx, cs, v, seed):
        p = builder(ctx, cs, v, seed)
        for j, qs in enumerate(p.queries):
            out = []
            for s in qs:
                if s.desired and s.coefficient(v) < 0:
                    s = replace(s, terms=tuple(SumTerm(t.candidate, t.row, -t.sign) for t in s.terms))
                out.append(s)
            p.queries[j] = out
        return p
    return mutant
