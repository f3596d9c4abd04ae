"""
Precision contexts and valuations.

A :class:`PadicContext` fixes an odd prime ``p``, a level exponent ``m``,
a cyclotomic order ``N = p^k`` and an absolute precision.  Elements of
``O_E = Z_p[zeta_N]`` are stored in the basis ``1, pi, ..., pi^(e-1)`` with
``pi = zeta_N - 1``; the minimal polynomial of ``pi`` is ``Phi_N(x + 1)``,
which is Eisenstein, so valuations are read off coordinatewise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from math import comb

DEFAULT_PREC = 40


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be certified at the working precision."""


def vp(n: int, p: int) -> int:
    """Return the ``p``-adic valuation of the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@total_ordering
@dataclass(frozen=True, eq=False)
class Valuation:
    """
    A valuation normalised by ``v(p) = 1``.

    ``exact=False`` means the element is zero to working precision and the
    true valuation is at least ``value``.
    """

    value: Fraction
    exact: bool = True

    @classmethod
    def at_least(cls, bound) -> "Valuation":
        return cls(Fraction(bound), False)

    def _key(self, other):
        if isinstance(other, Valuation):
            return other.value
        return Fraction(other)

    def __eq__(self, other):
        if isinstance(other, Valuation):
            return self.value == other.value and self.exact == other.exact
        try:
            return self.exact and self.value == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.value < self._key(other)

    def __hash__(self):
        return hash((self.value, self.exact))

    def __add__(self, other):
        if isinstance(other, Valuation):
            return Valuation(self.value + other.value, self.exact and other.exact)
        return Valuation(self.value + Fraction(other), self.exact)

    __radd__ = __add__

    def __str__(self):
        return str(self.value) if self.exact else ">=%s" % self.value

    def __repr__(self):
        if self.exact:
            return "Exact(%s)" % self.value
        return "AtLeast(%s)" % self.value


@dataclass(frozen=True)
class PadicContext:
    """
    Working data for ``O_E = Z_p[zeta_N]`` modulo ``p^prec``.

    EXAMPLES::

        >>> ctx = PadicContext(3, m=3)
        >>> ctx.cyclo_order, ctx.e
        (9, 6)
        >>> PadicContext(3, m=1).e
        1
    """

    p: int
    m: int = 1
    prec: int = DEFAULT_PREC
    cyclo_order: int | None = None

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError("p must be an odd prime, got %r" % (self.p,))
        if self.m < 1 or self.prec < 1:
            raise ValueError("need m >= 1 and prec >= 1")
        order = self.cyclo_order
        if order is None:
            order = self.p ** (self.m - 1)
        n = order
        while n % self.p == 0:
            n //= self.p
        if order < 1 or n != 1:
            raise ValueError("cyclotomic order must be a power of p, got %r" % order)
        object.__setattr__(self, "cyclo_order", order)

    # -- basic invariants -------------------------------------------------

    @cached_property
    def e(self) -> int:
        """Ramification degree, ``phi(cyclo_order)``."""
        if self.cyclo_order == 1:
            return 1
        return self.cyclo_order // self.p * (self.p - 1)

    @cached_property
    def modulus(self) -> int:
        return self.p ** self.prec

    def with_prec(self, prec: int) -> "PadicContext":
        return PadicContext(self.p, self.m, prec, self.cyclo_order)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "prec": self.prec,
                "cyclo_order": self.cyclo_order}

    @classmethod
    def from_json(cls, data: dict) -> "PadicContext":
        return cls(int(data["p"]), int(data.get("m", 1)),
                   int(data.get("prec", DEFAULT_PREC)),
                   data.get("cyclo_order"))

    # -- structure constants ----------------------------------------------

    @cached_property
    def minpoly(self) -> tuple:
        """
        Coefficients ``f_0, ..., f_e`` of the minimal polynomial of ``pi``.

        This is ``Phi_N(x + 1)`` with ``Phi_N(y) = sum_{i<p} y^(i N/p)``.
        """
        if self.cyclo_order == 1:
            return (0, 1)  # pi = 0
        step = self.cyclo_order // self.p
        f = [0] * (self.e + 1)
        for i in range(self.p):
            k = i * step
            for j in range(k + 1):
                f[j] += comb(k, j)
        return tuple(f)

    @cached_property
    def fold(self) -> tuple:
        """
        Rows ``pi^(e+s) mod f`` for ``s = 0, ..., e-2`` as exact integers.

        Used to reduce products of length ``2e - 1`` back to length ``e``.
        """
        e = self.e
        f = self.minpoly
        rows = []
        cur = [-c for c in f[:e]]  # pi^e
        for _ in range(max(e - 1, 0)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            for j in range(e):
                cur[j] -= top * f[j]
        return tuple(rows)

    @cached_property
    def zeta_to_pi(self) -> tuple:
        """Row ``k`` holds the pi-coordinates of ``zeta^k`` for ``k < e``."""
        e = self.e
        return tuple(tuple(comb(k, i) for i in range(e)) for k in range(e))
