"""Exact values of the named sequences used as prefix sums.

Each sequence keeps an append-only memo list guarded by a lock, so
concurrent lookups from several threads are safe.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable

from .errors import DomainError


class NamedSequence:
    """A sequence defined by ``value(k) = step(k, value(k - 1))`` and ``value(0)``."""

    def __init__(self, name: str, initial: Fraction, step: Callable[[int, Fraction], Fraction]):
        self.name = name
        self._step = step
        self._values = [Fraction(initial)]
        self._lock = threading.Lock()

    def __call__(self, k: int) -> Fraction:
        if k < 0:
            raise DomainError(f"{self.name}({k}) is undefined for negative index")
        values = self._values
        if k < len(values):
            return values[k]
        with self._lock:
            while len(values) <= k:
                n = len(values)
                values.append(self._step(n, values[-1]))
        return values[k]

    def __repr__(self):
        return f"NamedSequence({self.name!r})"


_harmonic_cache: dict[int, NamedSequence] = {}
_cache_lock = threading.Lock()


def generalized_harmonic(order: int) -> NamedSequence:
    """``H^(order)_k = sum_{i<=k} 1/i^order`` (also the zeta partial sums)."""
    if order < 1:
        raise DomainError("harmonic order must be a positive integer")
    seq = _harmonic_cache.get(order)
    if seq is None:
        with _cache_lock:
            seq = _harmonic_cache.setdefault(
                order,
                NamedSequence(f"H^({order})", Fraction(0), lambda k, prev: prev + Fraction(1, k**order)),
            )
    return seq


def harmonic(k: int) -> Fraction:
    return generalized_harmonic(1)(k)


def zeta_partial(k: int, s: int) -> Fraction:
    return generalized_harmonic(s)(k)


_derangements = NamedSequence("D", Fraction(1), lambda k, prev: k * prev + (-1) ** k)


def derangement(k: int) -> Fraction:
    """Fixed-point-free permutation counts, ``D_k = k D_{k-1} + (-1)^k``."""
    return _derangements(k)


def named_sequence_eval(kind: str, k: int, param: int | None = None) -> Fraction:
    """Dispatch by kind name: ``harmonic``, ``generalized_harmonic``, ``derangement``, ``zeta``."""
    if kind == "harmonic":
        return harmonic(k)
    if kind == "generalized_harmonic":
        return generalized_harmonic(param)(k)
    if kind == "derangement":
        return derangement(k)
    if kind == "zeta":
        return zeta_partial(k, param)
    raise ValueError(f"unknown named sequence {kind!r}")
