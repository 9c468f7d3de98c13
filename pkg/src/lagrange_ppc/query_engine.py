"""Query plans for the general and systematic PPC schemes.

Structure
---------
Rows of every candidate's evaluation table share one random permutation, so a
(candidate, row) pair at a database addresses phi_cand(C_row,j).

The plan is a collection of *groups*. A group of round tau lives on one block
u of the rate matrix (i.e. on the databases of row u's support). It owns one
fresh row R_S for every (tau-1)-subset S of candidates not containing the
desired index v. At each database j of the block it issues, for every
tau-subset T of candidates, the sum

    S_T = sum_{m in T} eps(m, T) * theta_{T-m} * phi_m(R_{T-m})

where eps is the alternating sign by position in T and theta a uniform random
sign per row. Rows R_A with v in A are not fresh: they are the rows
R'_{A-v} of a previous-round group retrieved on a block that does not hold j,
so the non-desired part of every desired sum is a previously retrieved
interference unit. Seen from one database, a group is the same hypergraph for
every v; rows and signs are uniformly random.

Because the sums follow an exterior-algebra pattern, the sums of types made
only of dependent candidates are fixed linear combinations of the others and
are computed offline instead of downloaded. Round-1 sums of non-projection
candidates are computed offline from the projections.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .polyspace import CandidateError, CandidateSet, monomial_count
from .rate_matrix import RateMatrix, build_general, build_systematic, interference, validate
from .rs_lagrange import CodingContext, ConfigError, is_information_set


@dataclass(frozen=True)
class SumTerm:
    candidate: int   # 0-based
    row: int         # 0-based, after index preparation
    sign: int


@dataclass(frozen=True)
class TauSum:
    sid: int
    db: int
    round: int
    group: int
    type: tuple      # sorted candidate indices
    desired: bool
    terms: tuple

    def coefficient(self, candidate: int) -> int:
        for t in self.terms:
            if t.candidate == candidate:
                return t.sign
        raise KeyError(candidate)

    def trace_line(self) -> str:
        body = " ".join(f"{'+' if t.sign > 0 else '-'}{t.candidate + 1}:{t.row + 1}"
                        for t in self.terms)
        return f"DB{self.db + 1} R{self.round} {'D' if self.desired else 'U'} {body}"


@dataclass
class Group:
    gid: int
    round: int
    block: int
    dbs: tuple                  # support of the block
    rows: dict                  # frozenset S (v not in S) -> row
    theta: dict                 # frozenset S -> sign of the fresh row
    side: dict = field(default_factory=dict)   # db -> previous-round gid
    sums: dict = field(default_factory=dict)   # (db, type) -> TauSum


@dataclass
class QueryPlan:
    ctx: CodingContext
    cs: CandidateSet
    scheme: str
    v: int
    seed: int
    rate_matrix: RateMatrix
    permutation: tuple
    groups: list
    queries: list               # per db: retained TauSums (downloaded)
    offline: list               # per db: dropped TauSums (computed by the user)
    dropped_types: frozenset    # types (tau >= 2) never downloaded
    redundancy: dict            # dropped type -> {retained type: coefficient}

    @property
    def mu(self) -> int:
        return self.cs.mu

    @property
    def f(self) -> int:
        return self.cs.f

    @property
    def nu(self) -> int:
        return self.rate_matrix.nu

    @property
    def kappa(self) -> int:
        return self.rate_matrix.kappa

    @property
    def permutations(self) -> tuple:
        return (self.permutation,) * self.mu

    @property
    def beta(self) -> int:
        return len(self.permutation)

    @property
    def L(self) -> int:
        return self.beta * self.ctx.k

    @property
    def download(self) -> int:
        return sum(len(qs) for qs in self.queries)

    def rounds(self):
        return range(1, self.mu + 1)

    def count_table(self) -> dict:
        """(db, round, type) -> number of downloaded sums."""
        out = {}
        for qs in self.queries:
            for s in qs:
                key = (s.db, s.round, s.type)
                out[key] = out.get(key, 0) + 1
        return out

    def per_round_counts(self, db: int) -> list:
        counts = [0] * self.mu
        for s in self.queries[db]:
            counts[s.round - 1] += 1
        return counts

    def side_info(self, s: TauSum):
        """(group, type, databases) of the interference unit inside a desired sum."""
        if not s.desired or s.round == 1:
            return None
        g = self.groups[s.group]
        prev = self.groups[g.side[s.db]]
        return prev.gid, tuple(m for m in s.type if m != self.v), prev.dbs

    def desired_rows(self):
        """(row, group, S) for every desired row; covers each row once."""
        for g in self.groups:
            for S, r in g.rows.items():
                yield r, g.gid, S

    def trace(self) -> str:
        return "\n".join(s.trace_line() for qs in self.queries for s in qs) + "\n"


def index_preparation(mu: int, beta: int, seed: int) -> tuple:
    """Row permutations for the mu candidates.

    All candidates share one uniform permutation of range(beta): a dependent
    candidate's symbol at (row, db) must sit on the same coded column as the
    projections it is computed from.
    """
    perm = list(range(beta))
    random.Random(f"{seed}:perm").shuffle(perm)
    perm = tuple(perm)
    return (perm,) * mu


def group_counts(mu: int, kappa: int, nu: int) -> list:
    """Groups per block in rounds 1..mu."""
    return [kappa ** (mu - t) * (nu - kappa) ** (t - 1) for t in range(1, mu + 1)]


def _eps(m: int, T: Sequence[int]) -> int:
    return -1 if T.index(m) % 2 else 1


def _solve_dependencies(cs: CandidateSet, M: int) -> dict:
    """c[d] with phi_d = sum_l c[d][l] phi_l over the first M candidates."""
    q = cs.q
    mat = cs.coefficient_matrix()
    basis = mat[:M]
    # invert basis (M x M) by Gauss-Jordan
    aug = [list(r) + [1 if i == j else 0 for j in range(M)] for i, r in enumerate(basis)]
    for col in range(M):
        piv = next((r for r in range(col, M) if aug[r][col] % q), None)
        if piv is None:
            raise CandidateError("the first M(f,g) candidates must be linearly independent")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, q)
        aug[col] = [x * inv % q for x in aug[col]]
        for r in range(M):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(a - c * b) % q for a, b in zip(aug[r], aug[col])]
    binv = [r[M:] for r in aug]
    deps = {}
    for d in range(M, cs.mu):
        vec = mat[d]
        # vec = c @ basis  =>  c = vec @ basis^{-1}
        deps[d] = [sum(vec[i] * binv[i][l] for i in range(M)) % q for l in range(M)]
    return deps


def _det(m: list, q: int) -> int:
    m = [list(r) for r in m]
    n = len(m)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] % q), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col] % q
        inv = pow(m[col][col], -1, q)
        for r in range(col + 1, n):
            if m[r][col]:
                c = m[r][col] * inv % q
                m[r] = [(a - c * b) % q for a, b in zip(m[r], m[col])]
    return det % q


def redundancy_relations(cs: CandidateSet) -> tuple:
    """Dropped higher-round types and their expressions in retained types.

    For mu > M(f,g) the last mu - M candidates are written over the first M;
    for every type T0 inside that tail, S_T0 = sum_T coef_T * S_T over the
    retained types T of the same size, all taken in one group at one database.
    """
    M = monomial_count(cs.f, cs.g)
    mu, q = cs.mu, cs.q
    if mu <= M:
        return frozenset(), {}
    deps = _solve_dependencies(cs, M)
    D = list(range(M, mu))
    # kernel vectors n_d = e_d - sum_l c_dl e_l
    N = {}
    for d in D:
        row = [0] * mu
        row[d] = 1
        for l, c in enumerate(deps[d]):
            row[l] = -c % q
        N[d] = row
    dropped, rel = set(), {}
    for tau in range(2, len(D) + 1):
        for T0 in combinations(D, tau):
            expr = {}
            for T in combinations(range(mu), tau):
                if set(T) <= set(D):
                    continue
                w = _det([[N[d][t] for t in T] for d in T0], q)
                if w:
                    expr[T] = -w % q
            dropped.add(T0)
            rel[T0] = expr
    return frozenset(dropped), rel


def _check_common(ctx: CodingContext, cs: CandidateSet, v: int):
    if ctx.g * (ctx.k - 1) + 1 > ctx.n:
        raise ConfigError("g(k-1)+1 must not exceed n")
    if cs.q != ctx.q:
        raise ConfigError("candidate set and code use different fields")
    if cs.g > ctx.g:
        raise ConfigError("candidate degree cap exceeds g")
    if not 0 <= v < cs.mu:
        raise ConfigError(f"desired index {v + 1} outside [1, {cs.mu}]")


def plan_general(ctx: CodingContext, cs: CandidateSet, v: int, seed: int = 0,
                 rate_matrix: RateMatrix | None = None) -> QueryPlan:
    """Plan for the Lagrange-coded scheme, (kappa, nu) = (k~, n)."""
    _check_common(ctx, cs, v)
    lam = rate_matrix if rate_matrix is not None else build_general(ctx)
    bad = validate(lam, ctx)
    if lam.variant != "general" or bad:
        raise ConfigError(f"invalid general rate matrix: {bad or lam.variant}")
    return _build(ctx, cs, v, seed, lam, "general")


def plan_systematic(ctx: CodingContext, cs: CandidateSet, v: int, seed: int = 0,
                    rate_matrix: RateMatrix | None = None) -> QueryPlan:
    """Plan for the systematic scheme, (kappa, nu) = (k, k + min(k, n - k~))."""
    _check_common(ctx, cs, v)
    if not ctx.systematic:
        raise ConfigError("systematic scheme needs a systematic context")
    lam = rate_matrix if rate_matrix is not None else build_systematic(ctx)
    bad = validate(lam, ctx)
    if lam.variant != "systematic" or bad:
        raise ConfigError(f"invalid systematic rate matrix: {bad or lam.variant}")
    parity = set(range(ctx.k, ctx.n))
    for u in range(lam.kappa):
        if not parity <= set(lam.support(u)):
            raise ConfigError("systematic plans need every top row to cover all parity databases")
    return _build(ctx, cs, v, seed, lam, "systematic")


def _build(ctx, cs, v, seed, lam: RateMatrix, scheme: str) -> QueryPlan:
    mu, f = cs.mu, cs.f
    nu, kappa, n = lam.nu, lam.kappa, ctx.n
    beta = nu ** mu
    perm = index_preparation(mu, beta, seed)[0]
    rng = random.Random(f"{seed}:signs")
    im = interference(lam)
    dropped, relations = redundancy_relations(cs)
    others = [m for m in range(mu) if m != v]
    cand_types = {t: list(combinations(range(mu), t)) for t in range(1, mu + 1)}
    counts = group_counts(mu, kappa, nu)

    groups: list[Group] = []
    by_round_block: dict = {}
    next_row = 0
    for tau in range(1, mu + 1):
        for u in range(nu):
            ids = []
            for _ in range(counts[tau - 1]):
                rows, theta = {}, {}
                for S in combinations(others, tau - 1):
                    key = frozenset(S)
                    rows[key] = perm[next_row]
                    theta[key] = rng.choice((1, -1))
                    next_row += 1
                g = Group(len(groups), tau, u, lam.support(u), rows, theta)
                groups.append(g)
                ids.append(g.gid)
            by_round_block[(tau, u)] = ids
    assert next_row == beta

    # side-information schedule: lexicographic sweep over (block, group)
    for tau in range(2, mu + 1):
        for j in range(n):
            cur = [gid for u in im.column_A(j) for gid in by_round_block[(tau, u)]]
            prev = [gid for u in im.column_B(j) for gid in by_round_block[(tau - 1, u)]]
            if len(cur) != len(prev):
                raise AssertionError("side-information counts do not balance")
            for a, b in zip(cur, prev):
                groups[a].side[j] = b

    queries = [[] for _ in range(n)]
    offline = [[] for _ in range(n)]
    sid = 0
    for g in groups:
        tau = g.round
        for j in g.dbs:
            prev = groups[g.side[j]] if tau > 1 else None
            for T in cand_types[tau]:
                terms = []
                for m in T:
                    A = frozenset(T) - {m}
                    if v in A:
                        base = A - {v}
                        row = prev.rows[base]
                        s_a = -1 if sum(1 for a in A if a > v) % 2 else 1
                        th = s_a * prev.theta[base]
                    else:
                        row, th = g.rows[A], g.theta[A]
                    terms.append(SumTerm(m, row, _eps(m, T) * th))
                s = TauSum(sid, j, tau, g.gid, T, v in T, tuple(terms))
                sid += 1
                g.sums[(j, T)] = s
                is_dropped = (T[0] >= f) if tau == 1 else (T in dropped)
                (offline if is_dropped else queries)[j].append(s)

    for j in range(n):
        queries[j].sort(key=lambda s: (s.round, s.type, s.sid))
        offline[j].sort(key=lambda s: (s.round, s.type, s.sid))

    return QueryPlan(ctx, cs, scheme, v, seed, lam, perm, groups,
                     queries, offline, dropped, relations)


def plan(ctx, cs, v, seed=0, scheme=None, rate_matrix=None) -> QueryPlan:
    scheme = scheme or ("systematic" if ctx.systematic else "general")
    if scheme == "systematic":
        return plan_systematic(ctx, cs, v, seed, rate_matrix)
    if scheme == "general":
        return plan_general(ctx, cs, v, seed, rate_matrix)
    raise ConfigError(f"unknown scheme {scheme!r}")


def expected_count(scheme_kappa: int, nu: int, mu: int, tau: int) -> int:
    """Downloaded sums per database per retained type in round tau."""
    return scheme_kappa ** (mu - tau + 1) * (nu - scheme_kappa) ** (tau - 1)


def retained_types(plan: QueryPlan, tau: int) -> list:
    if tau == 1:
        return [(m,) for m in range(plan.f)]
    return [T for T in combinations(range(plan.mu), tau) if T not in plan.dropped_types]


class PlanAuditError(AssertionError):
    pass


def audit_plan(plan: QueryPlan) -> list:
    """Check the count law, coverage, row freshness and side-info validity.

    Returns a list of violations (empty when the plan is sound).
    """
    out = []
    ctx, mu, kappa, nu = plan.ctx, plan.mu, plan.kappa, plan.nu
    table = plan.count_table()
    for j in range(ctx.n):
        for tau in range(1, mu + 1):
            want = expected_count(kappa, nu, mu, tau)
            for T in retained_types(plan, tau):
                got = table.get((j, tau, T), 0)
                if got != want:
                    out.append(f"DB{j + 1} R{tau} type {T}: {got} sums, expected {want}")
        seen_types = {key[2] for key in table if key[0] == j}
        for T in seen_types:
            if len(T) == 1 and T[0] >= plan.f:
                out.append(f"DB{j + 1} downloads dependent 1-sum {T}")
            if T in plan.dropped_types:
                out.append(f"DB{j + 1} downloads redundant type {T}")
    rows = sorted(r for r, _, _ in plan.desired_rows())
    if rows != list(range(plan.beta)):
        out.append("desired rows do not partition the row set")
    # each (candidate, row) at most once per database
    for j in range(ctx.n):
        used = set()
        for s in plan.queries[j] + plan.offline[j]:
            for t in s.terms:
                key = (t.candidate, t.row)
                if key in used:
                    out.append(f"DB{j + 1} reuses candidate {t.candidate + 1} row {t.row + 1}")
                used.add(key)
    # side units must come from a block not holding the database
    for g in plan.groups:
        for j, gid in g.side.items():
            prev = plan.groups[gid]
            if j in prev.dbs:
                out.append(f"group {g.gid} at DB{j + 1} takes side info from its own database")
            if plan.scheme == "general" or prev.dbs != tuple(range(ctx.k)):
                if not is_information_set(ctx, ctx.k_tilde, prev.dbs):
                    out.append(f"side group {gid} is not retrieved on an information set")
    return out
