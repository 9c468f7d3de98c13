"""Reed-Solomon codes with Lagrange-basis encoding.

Field values are carried as int residues mod ``ctx.q``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .field import PrimeField, smallest_valid_modulus


class ConfigError(ValueError):
    """Parameters violate a scheme precondition."""


@dataclass(frozen=True)
class CodingContext:
    n: int
    k: int
    g: int
    field: PrimeField
    alpha: tuple
    gamma: tuple
    systematic: bool = False
    k_tilde: int = dc_field(init=False)

    def __post_init__(self):
        q = self.field.q
        if not 1 <= self.k <= self.n:
            raise ConfigError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.g < 1:
            raise ConfigError("g must be positive")
        if q <= self.n:
            raise ConfigError(f"field size q={q} must exceed n={self.n}")
        if len(self.alpha) != self.n or len(set(self.alpha)) != self.n:
            raise ConfigError("alpha must hold n distinct points")
        if any(a % q == 0 for a in self.alpha):
            raise ConfigError("alpha points must be nonzero")
        if len(self.gamma) != self.k or len(set(self.gamma)) != self.k:
            raise ConfigError("gamma must hold k distinct points")
        if self.g * (self.k - 1) + 1 > self.n:
            raise ConfigError(
                f"g(k-1)+1 = {self.g * (self.k - 1) + 1} exceeds n = {self.n}")
        if self.systematic != (tuple(self.gamma) == tuple(self.alpha[:self.k])):
            raise ConfigError("systematic flag must match gamma == alpha[:k]")
        object.__setattr__(self, "k_tilde", decoding_dimension_raw(self.n, self.k, self.g))

    @property
    def q(self) -> int:
        return self.field.q


def make_context(n: int, k: int, g: int, q: int | None = None,
                 systematic: bool = False, alpha=None, gamma=None) -> CodingContext:
    """Build a context with the default evaluation points.

    alpha defaults to (1, ..., n); gamma to alpha[:k] when systematic and to
    (0, ..., k-1) otherwise.
    """
    F = PrimeField(q if q is not None else smallest_valid_modulus(n))
    if alpha is None:
        alpha = tuple(range(1, n + 1))
    alpha = tuple(a % F.q for a in alpha)
    if gamma is None:
        gamma = alpha[:k] if systematic else tuple(range(k))
    gamma = tuple(c % F.q for c in gamma)
    return CodingContext(n, k, g, F, alpha, gamma, systematic)


def decoding_dimension_raw(n: int, k: int, g: int) -> int:
    return min(g * (k - 1) + 1, n)


def decoding_dimension(ctx: CodingContext) -> int:
    return decoding_dimension_raw(ctx.n, ctx.k, ctx.g)


@dataclass(frozen=True)
class UnivariatePoly:
    """Coefficients low-to-high, trailing zeros trimmed."""
    coeffs: tuple
    q: int

    def __post_init__(self):
        c = [x % self.q for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1   # zero polynomial -> -1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.q
        return acc

    def __add__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UnivariatePoly(tuple(out), self.q)

    def __mul__(self, other):
        if isinstance(other, int):
            return UnivariatePoly(tuple(c * other for c in self.coeffs), self.q)
        if not self.coeffs or not other.coeffs:
            return UnivariatePoly((), self.q)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly(tuple(out), self.q)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UnivariatePoly":
        out = UnivariatePoly((1,), self.q)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    @classmethod
    def constant(cls, c: int, q: int) -> "UnivariatePoly":
        return cls((c,), q)


def lagrange_basis(ctx: CodingContext, i: int, x: int) -> int:
    """iota_i(x) = prod_{t != i} (x - gamma_t) / (gamma_i - gamma_t), i 0-based."""
    q = ctx.q
    num, den = 1, 1
    gi = ctx.gamma[i]
    for t, gt in enumerate(ctx.gamma):
        if t != i:
            num = num * (x - gt) % q
            den = den * (gi - gt) % q
    return num * pow(den, -1, q) % q


def generator_matrix(ctx: CodingContext) -> list[list[int]]:
    return [[lagrange_basis(ctx, i, a) for a in ctx.alpha] for i in range(ctx.k)]


@lru_cache(maxsize=None)
def _generator_cached(ctx: CodingContext) -> tuple:
    return tuple(tuple(r) for r in generator_matrix(ctx))


def encode_row(ctx: CodingContext, w: Sequence[int]) -> list[int]:
    if len(w) != ctx.k:
        raise ValueError(f"message row has length {len(w)}, expected {ctx.k}")
    G = _generator_cached(ctx)
    q = ctx.q
    return [sum(w[i] * G[i][j] for i in range(ctx.k)) % q for j in range(ctx.n)]


def star_product(u: Sequence[int], v: Sequence[int], q: int) -> list[int]:
    if len(u) != len(v):
        raise ValueError("star product of vectors with different lengths")
    return [a * b % q for a, b in zip(u, v)]


def rank_mod(rows: Sequence[Sequence[int]], q: int) -> int:
    """Rank over GF(q) by Gaussian elimination."""
    m = [[x % q for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, q)
        m[rank] = [x * inv % q for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                c = m[r][col]
                m[r] = [(a - c * b) % q for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def rs_generator(alpha: Sequence[int], dim: int, q: int) -> list[list[int]]:
    """Monomial-basis generator of RS_dim(alpha): rows (a^i)_a for i < dim."""
    return [[pow(a, i, q) for a in alpha] for i in range(dim)]


def is_information_set(ctx: CodingContext, dim: int, positions) -> bool:
    """True iff RS_dim(alpha) restricted to ``positions`` has rank dim."""
    pos = sorted(set(positions))
    if any(not 0 <= p < ctx.n for p in pos):
        raise ValueError("position out of range")
    if len(pos) < dim:
        return False
    sub = [[pow(ctx.alpha[p], i, ctx.q) for p in pos] for i in range(dim)]
    return rank_mod(sub, ctx.q) == dim


def star_power_rank(gen: Sequence[Sequence[int]], g: int, q: int) -> int:
    """Rank of the span of all g-fold star-products of the rows of ``gen``."""
    prods = []
    for combo in _multisets(range(len(gen)), g):
        v = [1] * len(gen[0])
        for i in combo:
            v = star_product(v, gen[i], q)
        prods.append(v)
    return rank_mod(prods, q)


def _multisets(items, size):
    from itertools import combinations_with_replacement
    return combinations_with_replacement(list(items), size)


def interpolate(points: Sequence[tuple], q: int) -> UnivariatePoly:
    """Unique polynomial of degree < len(points) through ``points``."""
    xs = [x % q for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    result = UnivariatePoly((), q)
    for i, (xi, yi) in enumerate(points):
        basis = UnivariatePoly((1,), q)
        den = 1
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * UnivariatePoly((-xj, 1), q)
                den = den * (xi - xj) % q
        result = result + basis * (yi * pow(den, -1, q) % q)
    return result


@lru_cache(maxsize=None)
def interpolation_weights(xs: tuple, x: int, q: int) -> tuple:
    """Weights w with p(x) = sum w_i p(xs_i) for every p of degree < len(xs)."""
    out = []
    for i, xi in enumerate(xs):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if j != i:
                num = num * (x - xj) % q
                den = den * (xi - xj) % q
        out.append(num * pow(den, -1, q) % q)
    return tuple(out)


def eval_through(xs: tuple, ys: Sequence[int], x: int, q: int) -> int:
    """Evaluate at x the interpolant of (xs, ys) without building it."""
    w = interpolation_weights(xs, x, q)
    return sum(a * b for a, b in zip(w, ys)) % q


def information_sets(ctx: CodingContext, dim: int):
    """All dim-subsets of positions that are information sets of RS_dim."""
    return [c for c in combinations(range(ctx.n), dim)
            if is_information_set(ctx, dim, c)]
