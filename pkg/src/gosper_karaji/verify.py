"""Exact adjudication of identities and brute-force L-summing oracles.

Every oracle computes its two sides along separate code paths with no
shared partial sums, so a slip in one path cannot hide in the other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import DomainError
from .expr import Expr, eval_term
from .lsum import PresentedIdentity, RawIdentity, eval_multiplier
from .poly import format_rational

Identity = Union[RawIdentity, PresentedIdentity]

DEFAULT_SEED = 20240607
NUM_RANGE = (-99, 99)
DEN_RANGE = (1, 20)


@dataclass(frozen=True)
class OracleVerdict:
    side_a: Fraction
    side_b: Fraction
    equal: bool
    n: int

    @classmethod
    def of(cls, a: Fraction, b: Fraction, n: int) -> "OracleVerdict":
        return cls(Fraction(a), Fraction(b), a == b, n)

    def to_json(self) -> dict:
        return {
            "kind": "verdict",
            "n": self.n,
            "side_a": format_rational(self.side_a),
            "side_b": format_rational(self.side_b),
            "equal": self.equal,
        }


# -- identities ----------------------------------------------------------------------------


def _summand(identity: Identity) -> Callable[[int], Fraction]:
    if isinstance(identity, RawIdentity):
        return identity.summand_at
    return identity.lhs_summand_at


def check_identity(identity: Identity, n: int) -> OracleVerdict:
    """Both sides of ``identity`` at ``n``, summing the left side from scratch."""
    if n < identity.lower:
        raise DomainError(f"n={n} lies below the lower summation bound {identity.lower}")
    f = _summand(identity)
    lhs = sum((f(k) for k in range(identity.lower, n + 1)), Fraction(0))
    return OracleVerdict.of(lhs, identity.rhs_at(n), n)


@dataclass(frozen=True)
class RangeSummary:
    all_equal: bool
    checked: int
    first_failure: Optional[OracleVerdict] = None

    def to_json(self) -> dict:
        return {
            "all_equal": self.all_equal,
            "checked": self.checked,
            "first_failure": self.first_failure.to_json() if self.first_failure else None,
        }


def check_range(identity: Identity, n_max: int, n_min: Optional[int] = None) -> RangeSummary:
    """Check every ``n`` from the lower bound to ``n_max``; stop at the first failure.

    The left side is accumulated incrementally, which gives the same values
    as :func:`check_identity` at each ``n`` without quadratic cost.
    """
    lo = identity.lower
    start = lo if n_min is None else max(lo, n_min)
    if n_max < start:
        raise DomainError(f"n_max={n_max} lies below the lower summation bound {start}")
    f = _summand(identity)
    lhs = sum((f(k) for k in range(lo, start)), Fraction(0))
    checked = 0
    for n in range(start, n_max + 1):
        lhs += f(n)
        rhs = identity.rhs_at(n)
        checked += 1
        if lhs != rhs:
            return RangeSummary(False, checked, OracleVerdict.of(lhs, rhs, n))
    return RangeSummary(True, checked)


# -- arrays ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class ArraySpec:
    """A 2D or 3D array given by an entry rule on the index range ``lower..n``."""

    dimension: int
    rule: Callable[..., Fraction]
    lower: int = 1
    description: str = ""

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError("arrays must be 2- or 3-dimensional")
        if self.lower not in (0, 1):
            raise ValueError("the index range starts at 0 or 1")

    def __call__(self, *idx: int) -> Fraction:
        return Fraction(self.rule(*idx))

    @classmethod
    def grid(cls, values, lower: int = 1) -> "ArraySpec":
        """Explicit grid, indexed from ``lower``."""
        dim = 3 if isinstance(values[0][0], (list, tuple)) else 2

        def rule(*idx):
            v = values
            for i in idx:
                v = v[i - lower]
            return v

        return cls(dim, rule, lower, "grid")

    @classmethod
    def product(cls, t: Union[Expr, Callable[[int], Fraction]], dimension: int = 2,
                lower: int = 1) -> "ArraySpec":
        """Multiplication table ``a = t_i t_j`` (or ``t_i t_j t_k``)."""
        f = (lambda k: eval_term(t, k)) if isinstance(t, Expr) else t
        if dimension == 2:
            return cls(2, lambda i, j: f(i) * f(j), lower, "product")
        return cls(3, lambda i, j, k: f(i) * f(j) * f(k), lower, "product")

    @classmethod
    def function(cls, f: Callable, dimension: int = 2, lower: int = 1) -> "ArraySpec":
        """``a_ij = f(i)`` in two dimensions, ``a_ijk = f(i, j)`` in three."""
        if dimension == 2:
            return cls(2, lambda i, j: f(i), lower, "function")
        return cls(3, lambda i, j, k: f(i, j), lower, "function")


def oracle_lsum2d(A: ArraySpec, n: int) -> OracleVerdict:
    """Row-by-row total against the sum of L-shaped pieces."""
    if A.dimension != 2:
        raise ValueError("oracle_lsum2d needs a 2-dimensional array")
    lo = A.lower
    rows = Fraction(0)
    for k in range(lo, n + 1):
        for i in range(lo, n + 1):
            rows += A(k, i)
    shells = Fraction(0)
    for k in range(lo, n + 1):
        column = sum((A(i, k) for i in range(lo, k + 1)), Fraction(0))
        row = sum((A(k, j) for j in range(lo, k + 1)), Fraction(0))
        shells += column + row - A(k, k)
    return OracleVerdict.of(rows, shells, n)


def oracle_lsum3d(A: ArraySpec, n: int) -> OracleVerdict:
    """Full triple sum against the inclusion-exclusion sum over cubic shells.

    The shell at ``k`` is three faces, minus the three edges where two
    faces meet (``a_kjk``, ``a_kkj``, ``a_jkk``), plus the corner ``a_kkk``.
    """
    if A.dimension != 3:
        raise ValueError("oracle_lsum3d needs a 3-dimensional array")
    lo = A.lower
    full = Fraction(0)
    for k in range(lo, n + 1):
        for j in range(lo, n + 1):
            for i in range(lo, n + 1):
                full += A(i, j, k)
    shells = Fraction(0)
    for k in range(lo, n + 1):
        r = range(lo, k + 1)
        faces = Fraction(0)
        for i in r:
            for j in r:
                faces += A(k, i, j) + A(i, k, j) + A(i, j, k)
        edges = Fraction(0)
        for j in r:
            edges += A(k, j, k) + A(k, k, j) + A(j, k, k)
        shells += faces - edges + A(k, k, k)
    return OracleVerdict.of(full, shells, n)


def _as_function(f: Union[Expr, Callable[[int], Fraction]]) -> Callable[[int], Fraction]:
    return (lambda k: eval_term(f, k)) if isinstance(f, Expr) else (lambda k: Fraction(f(k)))


def oracle_special_1d(f: Union[Expr, Callable[[int], Fraction]], n: int, lower: int = 0) -> OracleVerdict:
    """``sum_k (sum_{i<=k} f(i) + (k - lower) f(k))`` against ``(n - lower + 1) sum_k f(k)``.

    With ``lower = 0`` this is the plain one-variable specialization; with
    ``lower = 1`` it is the 1-indexed form carrying an extra ``-f(k)``.
    """
    if lower not in (0, 1):
        raise ValueError("lower must be 0 or 1")
    g = _as_function(f)
    values = {k: g(k) for k in range(lower, n + 1)}
    side_a = Fraction(0)
    for k in range(lower, n + 1):
        prefix = Fraction(0)
        for i in range(lower, k + 1):
            prefix += values[i]
        side_a += prefix + k * values[k] - (values[k] if lower == 1 else 0)
    total = Fraction(0)
    for k in range(lower, n + 1):
        total += g(k)
    side_b = (n - lower + 1) * total
    return OracleVerdict.of(side_a, side_b, n)


@dataclass(frozen=True)
class SpecialVerdicts:
    as_printed: OracleVerdict
    as_derived: OracleVerdict

    def to_json(self) -> dict:
        return {"as_printed": self.as_printed.to_json(), "as_derived": self.as_derived.to_json()}


def special_2d_as_printed(f: Callable[[int, int], Fraction], n: int) -> OracleVerdict:
    """The bivariate specialization read literally.

    The inner single sum has a free ``j`` and is read as a sum over ``j``;
    the right side's doubled index is read as a sum over ``i`` and ``j``.
    """
    side_a = Fraction(0)
    for k in range(0, n + 1):
        square = Fraction(0)
        for i in range(0, k + 1):
            for j in range(0, k + 1):
                square += Fraction(f(i, j))
        line = Fraction(0)
        for j in range(0, k + 1):
            line += k * Fraction(f(k, j))
        side_a += square + line - k * Fraction(f(k, k))
    total = Fraction(0)
    for i in range(0, n + 1):
        for j in range(0, n + 1):
            total += Fraction(f(i, j))
    return OracleVerdict.of(side_a, (n + 1) * total, n)


def special_2d_as_derived(f: Callable[[int, int], Fraction], n: int) -> OracleVerdict:
    """Closed bivariate form obtained by putting ``a_ijk = f(i, j)`` into the 3D shell sum.

    On ``0..n`` the shell at ``k`` holds ``sum_{i,j<=k} f + k sum_j f(k, j)
    + k sum_i f(i, k) - k f(k, k)`` and the total is ``(n + 1) sum f``.
    """
    side_a = Fraction(0)
    for k in range(0, n + 1):
        square = Fraction(0)
        for i in range(0, k + 1):
            for j in range(0, k + 1):
                square += Fraction(f(i, j))
        row = sum((Fraction(f(k, j)) for j in range(0, k + 1)), Fraction(0))
        col = sum((Fraction(f(i, k)) for i in range(0, k + 1)), Fraction(0))
        side_a += square + k * row + k * col - k * Fraction(f(k, k))
    total = Fraction(0)
    for i in range(0, n + 1):
        for j in range(0, n + 1):
            total += Fraction(f(i, j))
    return OracleVerdict.of(side_a, (n + 1) * total, n)


def oracle_special_2d(f: Callable[[int, int], Fraction], n: int) -> SpecialVerdicts:
    """Both readings of the bivariate specialization, side by side.

    ``as_derived`` is the 3D shell oracle itself on ``a_ijk = f(i, j)``;
    :func:`special_2d_as_derived` is its simplified closed form.
    """
    derived = oracle_lsum3d(ArraySpec.function(f, dimension=3, lower=0), n)
    return SpecialVerdicts(special_2d_as_printed(f, n), derived)


# -- random grids -------------------------------------------------------------------------------


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(*NUM_RANGE), rng.randint(*DEN_RANGE))


def random_grid(rng: random.Random, n: int, dimension: int = 2) -> list:
    if dimension == 2:
        return [[random_rational(rng) for _ in range(n)] for _ in range(n)]
    return [[[random_rational(rng) for _ in range(n)] for _ in range(n)] for _ in range(n)]


@dataclass
class GridTrials:
    seed: int
    dimension: int
    size: int
    trials: int
    failures: list = field(default_factory=list)

    @property
    def all_equal(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "kind": "grid_trials",
            "seed": self.seed,
            "dimension": self.dimension,
            "size": self.size,
            "trials": self.trials,
            "all_equal": self.all_equal,
            "failures": [v.to_json() for v in self.failures],
        }


def random_grid_trials(trials: int, size: int, dimension: int = 2, seed: int = DEFAULT_SEED) -> GridTrials:
    """Run the 2D or 3D oracle on ``trials`` random rational grids of side ``size``."""
    rng = random.Random(seed)
    oracle = oracle_lsum2d if dimension == 2 else oracle_lsum3d
    out = GridTrials(seed, dimension, size, trials)
    for _ in range(trials):
        A = ArraySpec.grid(random_grid(rng, size, dimension))
        v = oracle(A, size)
        if not v.equal:
            out.failures.append(v)
    return out


# -- multiplication-table bridge -----------------------------------------------------------------


def table_bridge(raw: RawIdentity, n: int) -> OracleVerdict:
    """Left side of an order-2 or order-3 identity against the L-summing oracle on ``t_i t_j (t_k)``."""
    if raw.m not in (2, 3):
        raise ValueError("the bridge exists for orders 2 and 3")
    lhs = sum((raw.summand_at(k) for k in range(raw.lower, n + 1)), Fraction(0))
    A = ArraySpec.product(raw.pair.t, raw.m, raw.lower)
    oracle = oracle_lsum2d(A, n) if raw.m == 2 else oracle_lsum3d(A, n)
    return OracleVerdict.of(lhs, oracle.side_b, n)


def zeta_identity(s: int, n: int) -> OracleVerdict:
    """``sum_{k<=n} zeta_k(s)/k^s`` against ``(zeta_n(s)^2 + zeta_n(2s))/2``."""
    from .sequences import zeta_partial

    lhs = Fraction(0)
    for k in range(1, n + 1):
        lhs += zeta_partial(k, s) / Fraction(k) ** s
    rhs = (zeta_partial(n, s) ** 2 + zeta_partial(n, 2 * s)) / 2
    return OracleVerdict.of(lhs, rhs, n)


def multiplier_telescopes(pair, m: int, k: int) -> bool:
    """``t(k) R(s(k), t(k)) == s(k)^m - s(k-1)^m`` at a single index."""
    s, t = pair.s_at(k), pair.t_at(k)
    prev = pair.s_at(k - 1) if k > pair.k0 else Fraction(0)
    return t * eval_multiplier(m, s, t) == s**m - prev**m


__all__ = [
    "ArraySpec",
    "DEFAULT_SEED",
    "GridTrials",
    "OracleVerdict",
    "RangeSummary",
    "SpecialVerdicts",
    "check_identity",
    "check_range",
    "multiplier_telescopes",
    "oracle_lsum2d",
    "oracle_lsum3d",
    "oracle_special_1d",
    "oracle_special_2d",
    "random_grid",
    "random_grid_trials",
    "special_2d_as_derived",
    "special_2d_as_printed",
    "table_bridge",
    "zeta_identity",
]
