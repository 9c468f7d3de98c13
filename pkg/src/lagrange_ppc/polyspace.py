"""Candidate polynomial functions over f message variables.

Exponent vectors are plain int tuples of length f. A candidate is a sparse
map exponent -> nonzero coefficient with no constant term.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb, gcd, prod
from typing import Iterable, Iterator, Sequence

from .rs_lagrange import CodingContext, UnivariatePoly, rank_mod


def monomial_count(f: int, g: int) -> int:
    """M(f, g): monomials in f variables of total degree 1..g."""
    return comb(g + f, g) - 1


def polynomial_count(f: int, g: int, q: int) -> int:
    """mu(f, g): nonzero coefficient vectors over GF(q) up to scaling."""
    return (q ** monomial_count(f, g) - 1) // (q - 1)


def _primes_upto(g: int) -> list[int]:
    return [p for p in range(2, g + 1) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


def nonparallel_count(f: int, g: int) -> int:
    """M~(f, g) by inclusion-exclusion over products of primes <= g."""
    total = monomial_count(f, g)
    primes = _primes_upto(g)
    for size in range(1, len(primes) + 1):
        for subset in combinations(primes, size):
            p = prod(subset)
            if p > g:
                continue
            h = g // p
            total += (-1) ** size * (comb(h + f, h) - 1)
    return total


def _exponents_of_weight(f: int, w: int) -> Iterator[tuple]:
    # lexicographically descending, so x^2 precedes xy precedes y^2
    if f == 1:
        yield (w,)
        return
    for first in range(w, -1, -1):
        for rest in _exponents_of_weight(f - 1, w - first):
            yield (first,) + rest


def is_parallel(e: Sequence[int]) -> bool:
    nz = [x for x in e if x]
    return gcd(*nz) > 1


def enumerate_monomials(f: int, g: int, nonparallel_only: bool = False) -> list[tuple]:
    """Exponent vectors with 1 <= wt <= g in graded lexicographic order."""
    out = []
    for w in range(1, g + 1):
        for e in _exponents_of_weight(f, w):
            if nonparallel_only and is_parallel(e):
                continue
            out.append(e)
    return out


def nonredundant_types(mu: int, tau: int, M: int, f: int | None = None) -> int:
    """rho(mu, tau) for tau >= 2; the retained 1-sum type count f for tau = 1."""
    if not 1 <= tau <= mu:
        raise ValueError(f"tau={tau} outside [1, {mu}]")
    if tau == 1:
        if f is None:
            raise ValueError("tau = 1 needs the number of independent messages f")
        return f
    return comb(mu, tau) - comb(max(mu - M, 0), tau)


@dataclass(frozen=True)
class Candidate:
    terms: tuple      # ((exponent, coeff), ...) sorted by exponent
    q: int

    def __post_init__(self):
        cleaned = {}
        for e, c in self.terms:
            e = tuple(int(x) for x in e)
            cleaned[e] = (cleaned.get(e, 0) + c) % self.q
        items = tuple(sorted((e, c) for e, c in cleaned.items() if c))
        if not items:
            raise ValueError("candidate polynomial is zero")
        f = len(items[0][0])
        for e, _ in items:
            if len(e) != f or min(e) < 0:
                raise ValueError(f"bad exponent vector {e}")
            if sum(e) == 0:
                raise ValueError("candidates carry no constant term")
        object.__setattr__(self, "terms", items)

    @property
    def f(self) -> int:
        return len(self.terms[0][0])

    @property
    def degree(self) -> int:
        return max(sum(e) for e, _ in self.terms)

    @classmethod
    def monomial(cls, e: Sequence[int], q: int) -> "Candidate":
        return cls(((tuple(e), 1),), q)

    @classmethod
    def projection(cls, m: int, f: int, q: int) -> "Candidate":
        e = [0] * f
        e[m] = 1
        return cls.monomial(e, q)

    def normalized(self) -> "Candidate":
        """Scaled so the first (smallest-exponent) coefficient is 1."""
        s = pow(self.terms[0][1], -1, self.q)
        return Candidate(tuple((e, c * s) for e, c in self.terms), self.q)

    def coefficient_vector(self, basis: Sequence[tuple]) -> list[int]:
        d = dict(self.terms)
        return [d.get(e, 0) for e in basis]

    def to_json(self) -> list:
        return [{"exponent": list(e), "coeff": c} for e, c in self.terms]

    @classmethod
    def from_json(cls, data, q: int) -> "Candidate":
        return cls(tuple((tuple(t["exponent"]), int(t["coeff"])) for t in data), q)

    def __str__(self):
        parts = []
        for e, c in self.terms:
            mono = "*".join(f"W{i + 1}" + (f"^{x}" if x > 1 else "")
                            for i, x in enumerate(e) if x)
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def evaluate(c: Candidate, point: Sequence[int]) -> int:
    """phi(point) over GF(q)."""
    q = c.q
    if len(point) != c.f:
        raise ValueError(f"point has {len(point)} coordinates, expected {c.f}")
    total = 0
    for e, coeff in c.terms:
        t = coeff
        for x, k in zip(point, e):
            if k:
                t = t * pow(x, k, q) % q
        total += t
    return total % q


def compile_candidate(c: Candidate):
    """Fast evaluator closure for hot loops; same result as ``evaluate``."""
    q = c.q
    terms = [(coeff, [(i, k) for i, k in enumerate(e) if k]) for e, coeff in c.terms]
    if len(terms) == 1 and terms[0][0] == 1 and len(terms[0][1]) == 1 and terms[0][1][0][1] == 1:
        idx = terms[0][1][0][0]
        return lambda point: point[idx]

    def fn(point):
        total = 0
        for coeff, factors in terms:
            t = coeff
            for i, k in factors:
                t = t * (point[i] if k == 1 else pow(point[i], k, q))
            total += t
        return total % q
    return fn


class CandidateError(ValueError):
    pass


@dataclass(frozen=True)
class CandidateSet:
    f: int
    g: int
    q: int
    candidates: tuple

    def __post_init__(self):
        mu = len(self.candidates)
        if mu < self.f:
            raise CandidateError(f"need at least f={self.f} candidates, got {mu}")
        if mu > polynomial_count(self.f, self.g, self.q):
            raise CandidateError(f"mu={mu} exceeds mu(f,g)")
        for m in range(self.f):
            if self.candidates[m] != Candidate.projection(m, self.f, self.q):
                raise CandidateError(f"candidate {m + 1} must be the projection W{m + 1}")
        seen = set()
        for c in self.candidates:
            if c.f != self.f:
                raise CandidateError("candidate over the wrong number of variables")
            if c.degree > self.g:
                raise CandidateError(f"candidate {c} exceeds degree {self.g}")
            key = c.normalized()
            if key in seen:
                raise CandidateError(f"candidate {c} is a scalar multiple of another")
            seen.add(key)

    @property
    def mu(self) -> int:
        return len(self.candidates)

    def __len__(self):
        return len(self.candidates)

    def __getitem__(self, i):
        return self.candidates[i]

    def coefficient_matrix(self) -> list[list[int]]:
        basis = enumerate_monomials(self.f, self.g)
        return [c.coefficient_vector(basis) for c in self.candidates]

    def rank(self) -> int:
        return rank_mod(self.coefficient_matrix(), self.q)


def _projective_vectors(length: int, q: int) -> Iterator[tuple]:
    # normalized (first nonzero entry = 1) vectors with at least two nonzeros
    for lead in range(length):
        for tail in product(range(q), repeat=length - lead - 1):
            if any(tail):
                yield (0,) * lead + (1,) + tail


def default_candidate_set(f: int, g: int, mu: int, q: int,
                          extra: Iterable[Candidate] = ()) -> CandidateSet:
    """Projections, then nonparallel monomials, then the remaining monomials,
    then ``extra``, then generated polynomials, truncated to mu."""
    monos = enumerate_monomials(f, g)
    ordered = [Candidate.projection(m, f, q) for m in range(f)]
    have = set(ordered)
    for e in enumerate_monomials(f, g, nonparallel_only=True):
        c = Candidate.monomial(e, q)
        if c not in have:
            ordered.append(c)
            have.add(c)
    for e in monos:
        c = Candidate.monomial(e, q)
        if c not in have:
            ordered.append(c)
            have.add(c)
    keys = {c.normalized() for c in ordered}
    for c in extra:
        if len(ordered) >= mu:
            break
        if c.normalized() not in keys:
            ordered.append(c)
            keys.add(c.normalized())
    if len(ordered) < mu:
        for vec in _projective_vectors(len(monos), q):
            c = Candidate(tuple((e, x) for e, x in zip(monos, vec) if x), q)
            if c.normalized() in keys:
                continue
            ordered.append(c)
            keys.add(c.normalized())
            if len(ordered) >= mu:
                break
    if len(ordered) < mu:
        raise CandidateError(f"mu={mu} exceeds mu(f,g) = {len(ordered)}")
    return CandidateSet(f, g, q, tuple(ordered[:mu]))


def compose(ctx: CodingContext, c: Candidate, row_polys: Sequence[UnivariatePoly]) -> UnivariatePoly:
    """psi(z) = phi(l_1(z), ..., l_f(z))."""
    if len(row_polys) != c.f:
        raise ValueError("need one row polynomial per message")
    for p in row_polys:
        if p.degree > ctx.k - 1:
            raise ValueError(f"row polynomial of degree {p.degree} > k-1 = {ctx.k - 1}")
    q = ctx.q
    out = UnivariatePoly((), q)
    for e, coeff in c.terms:
        term = UnivariatePoly((coeff,), q)
        for p, k in zip(row_polys, e):
            if k:
                term = term * (p ** k)
        out = out + term
    return out
