"""Integer isometries of a definite lattice.

Validation against the Gram matrix, exact cyclotomic factorization of
characteristic polynomials, eigenspace dimensions of finite-order
isometries, and a seeded random word search over a generator set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, lcm
from typing import Sequence

from .lattice import IntMatrix, Lattice

DEFAULT_SEARCH_BUDGET = 4000


class NotGramPreserving(ValueError):
    """The matrix does not preserve the lattice inner product."""


class NotUnimodular(ValueError):
    """The matrix determinant is not +1 or -1."""


class NonCyclotomicFactor(ArithmeticError):
    """The characteristic polynomial has a non-cyclotomic factor, so the
    matrix is not of finite order.  Unreachable for verified isometries."""


class OrderDoesNotDivide(ValueError):
    """A modulus m was supplied with g^m != identity."""


class NotFound(LookupError):
    """The word search exhausted its budget without hitting the target."""


# ----- integer matrix helpers ------------------------------------------


def _freeze(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in matrix)


def _mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _mat_identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _mat_power(matrix: Sequence[Sequence[int]], k: int) -> list[list[int]]:
    n = len(matrix)
    result = _mat_identity(n)
    base = [list(row) for row in matrix]
    while k:
        if k & 1:
            result = _mat_mul(result, base)
        k >>= 1
        if k:
            base = _mat_mul(base, base)
    return result


def _det_int(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss elimination with row pivoting."""
    a = [list(row) for row in matrix]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# ----- isometry type ----------------------------------------------------


@dataclass(frozen=True)
class Isometry:
    """A Gram-preserving unimodular integer matrix acting on a lattice.

    The action convention is on column vectors: matrix.T @ gram @ matrix
    must equal gram.  Both invariants are checked at construction.
    """

    lattice: Lattice
    matrix: IntMatrix

    def __post_init__(self) -> None:
        matrix = _freeze(self.matrix)
        object.__setattr__(self, "matrix", matrix)
        n = self.lattice.rank
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("matrix shape does not match lattice rank")
        gram = self.lattice.gram
        mt = list(zip(*matrix))
        mg = _mat_mul(mt, gram)
        if _freeze(_mat_mul(mg, matrix)) != gram:
            raise NotGramPreserving("matrix.T @ gram @ matrix != gram")
        if _det_int(matrix) not in (1, -1):
            raise NotUnimodular("determinant is not +1 or -1")

    def __mul__(self, other: Isometry) -> Isometry:
        if self.lattice is not other.lattice and self.lattice != other.lattice:
            raise ValueError("isometries act on different lattices")
        return Isometry(self.lattice, _freeze(_mat_mul(self.matrix, other.matrix)))

    def power(self, k: int) -> Isometry:
        if k < 0:
            n = multiplicative_order(self)
            k = k % n
        return Isometry(self.lattice, _freeze(_mat_power(self.matrix, k)))

    def inverse(self) -> Isometry:
        return self.power(multiplicative_order(self) - 1)

    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == int(i == j)
                   for i in range(self.lattice.rank)
                   for j in range(self.lattice.rank))


def verify_isometry(lattice: Lattice, matrix: Sequence[Sequence[int]]) -> Isometry:
    """Check Gram preservation and unimodularity; return the wrapped isometry."""
    return Isometry(lattice=lattice, matrix=_freeze(matrix))


def identity_isometry(lattice: Lattice) -> Isometry:
    return Isometry(lattice, _freeze(_mat_identity(lattice.rank)))


def negation_isometry(lattice: Lattice) -> Isometry:
    n = lattice.rank
    return Isometry(lattice, _freeze([[-int(i == j) for j in range(n)] for i in range(n)]))


# ----- characteristic polynomial and cyclotomic factorization -----------


def _charpoly(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of det(xI - M), highest power first, via the
    Faddeev-LeVerrier recurrence (all divisions exact)."""
    n = len(matrix)
    base = [list(row) for row in matrix]
    work = [row[:] for row in base]
    coeffs = [1]
    for k in range(1, n + 1):
        tr = sum(work[i][i] for i in range(n))
        if tr % k:
            raise ArithmeticError("Faddeev-LeVerrier trace division failed")
        ck = -(tr // k)
        coeffs.append(ck)
        if k < n:
            for i in range(n):
                work[i][i] += ck
            work = _mat_mul(base, work)
    return coeffs


def euler_phi(d: int) -> int:
    result = d
    x = d
    p = 2
    while p * p <= x:
        if x % p == 0:
            result -= result // p
            while x % p == 0:
                x //= p
        p += 1
    if x > 1:
        result -= result // x
    return result


def _poly_try_div(num: list[int], den: list[int]) -> list[int] | None:
    """Exact quotient of integer polynomials (low-first), or None."""
    if len(num) < len(den):
        return None
    rem = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        top = rem[len(den) - 1 + i]
        if top % lead:
            return None
        q = top // lead
        out[i] = q
        for j, dj in enumerate(den):
            rem[i + j] -= q * dj
    if any(rem[: len(den) - 1]):
        return None
    return out


def cyclotomic_polynomial(d: int, _cache: dict[int, list[int]] = {}) -> list[int]:
    """Coefficients of the d-th cyclotomic polynomial, low-first."""
    if d in _cache:
        return list(_cache[d])
    poly = [0] * d + [1]
    poly[0] = -1
    for e in range(1, d):
        if d % e == 0:
            quotient = _poly_try_div(poly, cyclotomic_polynomial(e))
            if quotient is None:
                raise ArithmeticError("cyclotomic division failed")
            poly = quotient
    _cache[d] = poly
    return list(poly)


@dataclass(frozen=True)
class CycloProfile:
    """Multiset of cyclotomic factors of a characteristic polynomial,
    stored as sorted (d, multiplicity) pairs with all multiplicities >= 1."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors",
                           tuple(sorted((int(d), int(e)) for d, e in self.factors)))
        if any(e < 1 for _, e in self.factors):
            raise ValueError("multiplicities must be positive")

    @staticmethod
    def of(factors: dict[int, int]) -> CycloProfile:
        return CycloProfile(tuple((d, e) for d, e in factors.items() if e))

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def multiplicity(self, d: int) -> int:
        return dict(self.factors).get(d, 0)

    def degree(self) -> int:
        return sum(e * euler_phi(d) for d, e in self.factors)


def cyclotomic_profile(g: Isometry) -> CycloProfile:
    """Factor det(xI - g) into cyclotomic polynomials exactly."""
    return _profile_of_matrix(g.matrix, g.lattice.rank)


def _profile_of_matrix(matrix: Sequence[Sequence[int]], rank: int) -> CycloProfile:
    poly = list(reversed(_charpoly(matrix)))
    factors: dict[int, int] = {}
    # phi(d) >= sqrt(d/2), so phi(d) <= rank forces d <= 2 rank^2
    for d in range(1, 2 * rank * rank + 1):
        if euler_phi(d) > rank:
            continue
        cd = cyclotomic_polynomial(d)
        while len(poly) > 1:
            quotient = _poly_try_div(poly, cd)
            if quotient is None:
                break
            poly = quotient
            factors[d] = factors.get(d, 0) + 1
        if len(poly) == 1:
            break
    if poly != [1]:
        raise NonCyclotomicFactor("characteristic polynomial has a non-cyclotomic factor")
    return CycloProfile.of(factors)


def multiplicative_order(g: Isometry) -> int:
    """Least n >= 1 with g^n = identity, from the cyclotomic profile."""
    order = 1
    for d, _ in cyclotomic_profile(g).factors:
        order = lcm(order, d)
    return order


def power_profile(profile: CycloProfile, k: int) -> CycloProfile:
    """Cyclotomic profile of g^k given the profile of g: each block of
    primitive d-th roots powers onto primitive d/gcd(d,k)-th roots."""
    out: dict[int, int] = {}
    for d, e in profile.factors:
        d2 = d // gcd(d, k)
        out[d2] = out.get(d2, 0) + e * euler_phi(d) // euler_phi(d2)
    return CycloProfile.of(out)


def eigenspace_dims(g: Isometry, modulus: int) -> tuple[int, ...]:
    """Complex eigenspace dimensions for eigenvalues ζ_m^{-j}, j = 0..m-1.

    Requires g^m = identity; the j-th entry is the multiplicity of the
    cyclotomic factor whose roots have multiplicative order m/gcd(j,m).
    """
    if modulus < 1:
        raise ValueError("modulus must be positive")
    profile = cyclotomic_profile(g)
    order = 1
    for d, _ in profile.factors:
        order = lcm(order, d)
    if modulus % order:
        raise OrderDoesNotDivide(f"isometry order {order} does not divide {modulus}")
    table = profile.as_dict()
    return tuple(table.get(modulus // gcd(j, modulus), 0) for j in range(modulus))


# ----- randomized word search -------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    """Found isometry with the generator word that produces it (indices
    into the generator list, applied left to right as a matrix product)."""

    isometry: Isometry
    word: tuple[int, ...]


def _word_matrix(generators: Sequence[Isometry], word: Sequence[int]) -> list[list[int]]:
    out = _mat_identity(generators[0].lattice.rank)
    for idx in word:
        out = _mat_mul(out, generators[idx].matrix)
    return out


def search_isometry(generators: Sequence[Isometry], target: CycloProfile,
                    budget: int = DEFAULT_SEARCH_BUDGET, seed: int = 0) -> SearchResult:
    """Find a product of generators whose cyclotomic profile equals target.

    Tries each single generator first, then random words of bounded
    length, examining every power of each candidate through its profile.
    Deterministic for a given seed.  The returned word is re-verified:
    profile equality, and (when no power of the target contains the
    factor d=1) absence of fixed vectors in every proper power.
    """
    if not generators:
        raise ValueError("generators must be nonempty")
    lattice = generators[0].lattice
    for g in generators[1:]:
        if g.lattice != lattice:
            raise ValueError("generators act on different lattices")
    rank = lattice.rank
    rng = random.Random(seed)
    words = [(i,) for i in range(len(generators))]
    tried = 0
    while tried < budget:
        if words:
            word = words.pop(0)
        else:
            length = rng.randint(8, 30)
            word = tuple(rng.randrange(len(generators)) for _ in range(length))
        tried += 1
        matrix = _word_matrix(generators, word)
        profile = _profile_of_matrix(matrix, rank)
        order = 1
        for d, _ in profile.factors:
            order = lcm(order, d)
        for k in range(1, order + 1):
            if power_profile(profile, k) == target:
                found_word = word * k
                result = verify_isometry(lattice, _mat_power(matrix, k))
                _check_found(result, target)
                return SearchResult(isometry=result, word=found_word)
    raise NotFound(f"no generator word matched the target profile in {budget} attempts")


def _check_found(result: Isometry, target: CycloProfile) -> None:
    profile = cyclotomic_profile(result)
    if profile != target:
        raise AssertionError("search result fails profile re-verification")
    order = 1
    for d, _ in profile.factors:
        order = lcm(order, d)
    fixed_free = all(power_profile(profile, i).multiplicity(1) == 0
                     for i in range(1, order))
    if fixed_free:
        # independent matrix-level confirmation: no proper power fixes a vector
        n = result.lattice.rank
        for i in range(1, order):
            mi = _mat_power(result.matrix, i)
            for r in range(n):
                mi[r][r] -= 1
            if _det_int(mi) == 0:
                raise AssertionError(f"power {i} unexpectedly has a fixed vector")
