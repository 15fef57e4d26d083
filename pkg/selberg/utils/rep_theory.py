"""Highest weights of G = SO0(d,1) / Spin(d,1), K and M: Weyl data, Casimirs, branching."""

import enum
import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from selberg.utils.helpers import (
    DimensionMismatchError,
    InputFormatError,
    InvalidWeightError,
    PreconditionError,
    format_rational,
    format_weight,
    parse_rational,
)


class GroupKind(enum.Enum):
    """Which cover of the isometry group the weights belong to."""
    SO0 = "SO0"
    SPIN = "Spin"


@dataclass(frozen=True)
class Dimension:
    """Odd dimension d = 2n + 1 of hyperbolic space."""
    n: int
    group_kind: GroupKind = GroupKind.SO0

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"n must be at least 1 (d >= 3), got n={self.n}")

    @property
    def d(self) -> int:
        return 2 * self.n + 1

    @classmethod
    def from_d(cls, d: int, group_kind: GroupKind = GroupKind.SO0) -> "Dimension":
        """Build from the odd dimension d."""
        if d < 3 or d % 2 == 0:
            raise PreconditionError(f"d must be odd and at least 3, got d={d}")
        return cls((d - 1) // 2, group_kind)


def _as_fractions(entries: Iterable) -> Tuple[Fraction, ...]:
    return tuple(parse_rational(e) for e in entries)


def _is_half_integral(kind: str, k: Sequence[Fraction]) -> bool:
    if all(x.denominator == 1 for x in k):
        return False
    if all(x.denominator == 2 for x in k):
        return True
    raise InvalidWeightError(kind, k, "entries must be all integers or all half-integers")


def _check_d_ordering(kind: str, k: Sequence[Fraction]) -> None:
    """k_1 >= ... >= k_{r-1} >= |k_r| (type D dominance)."""
    for a, b in zip(k[:-2], k[1:-1]):
        if a < b:
            raise InvalidWeightError(kind, k, "entries must be nonincreasing")
    if len(k) >= 2 and k[-2] < abs(k[-1]):
        raise InvalidWeightError(kind, k, "second to last entry must dominate |last entry|")


def _check_b_ordering(kind: str, k: Sequence[Fraction]) -> None:
    """k_1 >= ... >= k_r >= 0 (type B dominance)."""
    for a, b in zip(k[:-1], k[1:]):
        if a < b:
            raise InvalidWeightError(kind, k, "entries must be nonincreasing")
    if k and k[-1] < 0:
        raise InvalidWeightError(kind, k, "last entry must be nonnegative")


class _Weight:
    """Shared behavior of the highest-weight records."""

    KIND = "weight"
    k: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", _as_fractions(self.k))
        if not self.k:
            raise InvalidWeightError(self.KIND, self.k, "no entries")
        _is_half_integral(self.KIND, self.k)
        self._check_ordering()

    def _check_ordering(self) -> None:
        raise NotImplementedError

    @classmethod
    def expected_length(cls, dim: Dimension) -> int:
        return dim.n

    @classmethod
    def of(cls, dim: Dimension, entries: Iterable):
        """Build a weight and check it against a dimension."""
        weight = cls(tuple(entries))
        weight.check(dim)
        return weight

    def check(self, dim: Dimension) -> None:
        expected = self.expected_length(dim)
        if len(self.k) != expected:
            raise DimensionMismatchError(expected, len(self.k), f"{self.KIND} entries")
        if self.half_integral and dim.group_kind is not GroupKind.SPIN:
            raise InvalidWeightError(self.KIND, self.k, "half-integers require group kind Spin")

    @property
    def half_integral(self) -> bool:
        return self.k[0].denominator == 2

    def to_json(self) -> list:
        return [format_rational(x) for x in self.k]

    def __str__(self) -> str:
        return format_weight(self.k)


@dataclass(frozen=True)
class GWeight(_Weight):
    """Highest weight (k_1, ..., k_{n+1}) of a representation of G."""
    k: Tuple[Fraction, ...]
    KIND = "G"

    def _check_ordering(self) -> None:
        _check_d_ordering(self.KIND, self.k)

    @classmethod
    def expected_length(cls, dim: Dimension) -> int:
        return dim.n + 1


@dataclass(frozen=True)
class KWeight(_Weight):
    """Highest weight (k_2, ..., k_{n+1}) of a representation of K = SO(2n+1)."""
    k: Tuple[Fraction, ...]
    KIND = "K"

    def _check_ordering(self) -> None:
        _check_b_ordering(self.KIND, self.k)


@dataclass(frozen=True)
class MWeight(_Weight):
    """Highest weight (k_2, ..., k_{n+1}) of a representation of M = SO(2n)."""
    k: Tuple[Fraction, ...]
    KIND = "M"

    def _check_ordering(self) -> None:
        _check_d_ordering(self.KIND, self.k)


def parse_weight(cls, dim: Dimension, value) -> _Weight:
    """Parse a weight from "a,b,..." text or a JSON array."""
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    if not isinstance(value, (list, tuple)):
        raise InputFormatError(f"Expected a weight list, got {value!r}")
    return cls.of(dim, value)


def trivial_weight(cls, dim: Dimension) -> _Weight:
    """The zero weight of the given family."""
    return cls.of(dim, [0] * cls.expected_length(dim))


def _require(weight: _Weight, dim: Dimension) -> None:
    expected = weight.expected_length(dim)
    if len(weight.k) != expected:
        raise DimensionMismatchError(expected, len(weight.k), f"{weight.KIND} entries")


# ============================================================================
# Root data
# ============================================================================

def rho_vector(dim: Dimension) -> Tuple[Fraction, ...]:
    """Half-sum of positive roots of D_{n+1}: rho_j = n + 1 - j."""
    return tuple(Fraction(dim.n + 1 - j) for j in range(1, dim.n + 2))


def rho_m(dim: Dimension) -> Tuple[Fraction, ...]:
    """rho restricted to the M-coordinates j = 2, ..., n+1."""
    return rho_vector(dim)[1:]


def rho_k(dim: Dimension) -> Tuple[Fraction, ...]:
    """Half-sum of positive roots of B_n: n + 1 - j + 1/2 for j = 2, ..., n+1."""
    return tuple(Fraction(2 * (dim.n + 1 - j) + 1, 2) for j in range(2, dim.n + 2))


def d_roots(rank: int) -> List[Tuple[int, ...]]:
    """Positive roots e_i - e_j, e_i + e_j (i < j) as coefficient tuples."""
    roots = []
    for i, j in itertools.combinations(range(rank), 2):
        for sign in (-1, 1):
            root = [0] * rank
            root[i] = 1
            root[j] = sign
            roots.append(tuple(root))
    return roots


def b_roots(rank: int) -> List[Tuple[int, ...]]:
    """Positive roots of B_rank: the D roots plus the short roots e_i."""
    short = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
    return d_roots(rank) + short


def _pair(v: Sequence[Fraction], root: Sequence[int]) -> Fraction:
    return sum((x * c for x, c in zip(v, root)), Fraction(0))


def _weyl_dimension(weight: Sequence[Fraction], rho: Sequence[Fraction], roots) -> int:
    """Weyl dimension formula: product over positive roots of <weight+rho, a>/<rho, a>."""
    shifted = [w + r for w, r in zip(weight, rho)]
    value = Fraction(1)
    for root in roots:
        value *= _pair(shifted, root) / _pair(rho, root)
    if value.denominator != 1:
        raise ValueError(f"Weyl dimension is not integral: {value}")
    return int(value)


# ============================================================================
# Weights and Casimirs
# ============================================================================

def weyl_flip(sigma: MWeight) -> MWeight:
    """Highest weight of w0 sigma: the last entry changes sign."""
    return MWeight(sigma.k[:-1] + (-sigma.k[-1],))


def theta_twist(tau: GWeight) -> GWeight:
    """Highest weight of tau composed with the Cartan involution."""
    return GWeight(tau.k[:-1] + (-tau.k[-1],))


def is_theta_invariant(tau: GWeight) -> bool:
    """True when tau is isomorphic to its Cartan twist, i.e. k_{n+1}(tau) = 0."""
    return tau.k[-1] == 0


def casimir_sigma(sigma: MWeight, dim: Dimension) -> Fraction:
    """c(sigma) = sum_{j>=2} (k_j + rho_j)^2 - sum_j rho_j^2."""
    _require(sigma, dim)
    rho = rho_vector(dim)
    return sum(((k + r) ** 2 for k, r in zip(sigma.k, rho[1:])), Fraction(0)) - sum(
        r * r for r in rho
    )


def casimir_tau(tau: GWeight, dim: Dimension) -> Fraction:
    """Casimir eigenvalue tau(Omega) = |Lambda + rho|^2 - |rho|^2."""
    _require(tau, dim)
    rho = rho_vector(dim)
    return sum(((k + r) ** 2 for k, r in zip(tau.k, rho)), Fraction(0)) - sum(r * r for r in rho)


def casimir_nu(nu: KWeight, dim: Dimension) -> Fraction:
    """K-Casimir eigenvalue nu(Omega_K) = |Lambda + rho_K|^2 - |rho_K|^2."""
    _require(nu, dim)
    rho = rho_k(dim)
    return sum(((k + r) ** 2 for k, r in zip(nu.k, rho)), Fraction(0)) - sum(r * r for r in rho)


def dim_weyl_m(sigma: MWeight, dim: Dimension) -> int:
    """Dimension of the M-representation (Weyl formula, type D_n)."""
    _require(sigma, dim)
    return _weyl_dimension(sigma.k, rho_m(dim), d_roots(dim.n))


def dim_weyl_k(nu: KWeight, dim: Dimension) -> int:
    """Dimension of the K-representation (Weyl formula, type B_n)."""
    _require(nu, dim)
    return _weyl_dimension(nu.k, rho_k(dim), b_roots(dim.n))


def dim_weyl_g(tau: GWeight, dim: Dimension) -> int:
    """Dimension of the finite-dimensional G-representation (Weyl formula, type D_{n+1})."""
    _require(tau, dim)
    return _weyl_dimension(tau.k, rho_vector(dim), d_roots(dim.n + 1))


# ============================================================================
# Branching
# ============================================================================

def _steps(lo: Fraction, hi: Fraction) -> List[Fraction]:
    """lo, lo + 1, ..., hi (empty when lo > hi)."""
    if lo > hi:
        return []
    return [lo + i for i in range(int(hi - lo) + 1)]


def branching_multiplicity(nu: KWeight, sigma: MWeight) -> int:
    """Multiplicity [nu : sigma] of sigma in nu restricted to M (0 or 1).

    Interlacing law for SO(2n+1) > SO(2n):
    k_2(nu) >= k_2(sigma) >= k_3(nu) >= ... >= k_{n+1}(nu) >= |k_{n+1}(sigma)|.
    """
    if len(nu.k) != len(sigma.k):
        raise DimensionMismatchError(len(nu.k), len(sigma.k), "M entries")
    if nu.half_integral != sigma.half_integral:
        return 0
    n = len(nu.k)
    for i in range(n - 1):
        if not nu.k[i] >= sigma.k[i] >= nu.k[i + 1]:
            return 0
    return int(nu.k[-1] >= abs(sigma.k[-1]))


def restrictions(nu: KWeight, dim: Dimension) -> List[MWeight]:
    """All sigma with [nu : sigma] = 1, in lexicographic order."""
    _require(nu, dim)
    k = nu.k
    ranges = [_steps(k[i + 1], k[i]) for i in range(len(k) - 1)]
    ranges.append(_steps(-k[-1], k[-1]))
    return [MWeight(entries) for entries in itertools.product(*ranges)]


def _branch_odd(lam: Tuple[Fraction, ...]) -> List[Tuple[Fraction, ...]]:
    """SO(2p+1) -> SO(2p)."""
    ranges = [_steps(lam[i + 1], lam[i]) for i in range(len(lam) - 1)]
    ranges.append(_steps(-lam[-1], lam[-1]))
    return list(itertools.product(*ranges))


def _branch_even(mu: Tuple[Fraction, ...]) -> List[Tuple[Fraction, ...]]:
    """SO(2p) -> SO(2p-1), p >= 2."""
    p = len(mu)
    ranges = []
    for i in range(p - 1):
        lower = mu[i + 1] if i + 1 < p - 1 else abs(mu[p - 1])
        ranges.append(_steps(lower, mu[i]))
    return list(itertools.product(*ranges))


def rotation_multiplicities(nu: KWeight, dim: Dimension) -> Dict[Fraction, int]:
    """Multiplicities of SO(2)-weights in nu along SO(2n+1) > SO(2n) > ... > SO(2).

    The SO(2) at the bottom of the chain rotates a single plane, so
    tr nu(rotation by phi) = sum_m mult(m) cos(m phi).
    """
    _require(nu, dim)
    level: Counter = Counter({nu.k: 1})
    while True:
        even: Counter = Counter()
        for lam, mult in level.items():
            for mu in _branch_odd(lam):
                even[mu] += mult
        if len(next(iter(even))) == 1:
            return {mu[0]: mult for mu, mult in sorted(even.items())}
        level = Counter()
        for mu, mult in even.items():
            for lam in _branch_even(mu):
                level[lam] += mult


def rotation_character(nu: KWeight, dim: Dimension, phi) -> np.ndarray:
    """tr nu(k) for k a rotation by phi in one plane (vectorized in phi)."""
    phi = np.asarray(phi, dtype=float)
    total = np.zeros_like(phi)
    for m, mult in rotation_multiplicities(nu, dim).items():
        total = total + mult * np.cos(float(m) * phi)
    return total
