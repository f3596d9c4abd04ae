"""
Dirichlet characters of ``p``-power conductor and weight characters.

A character ``chi`` of ``(Z/p^k)^x`` is stored through its value on the
fixed generator ``g`` (the least primitive root modulo ``p^2``, hence of
every ``p^k``)::

    chi(g) = omega(g)^tame * zeta_{p^(k-1)}^wild

so that ``chi(a) = omega(a)^tame * zeta_{p^(k-1)}^(wild * log_g a)``.

Weight characters come in two flavours.  ``Classical(k, psi)`` is
``x -> x^k psi(x)`` and ``DiskPoint(psi, w0)`` is
``x -> x psi(x) <x>^w0`` with ``<x> = x omega(x)^-1``.  Both are evaluated
through ``kappa(d) / d``, the quantity that enters the weight action.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .context import PadicContext
from .cyclo import CycloElt
from .series import (BinomialSeries, angle_power, binomial_series,
                     padic_exp_int, teichmuller_int)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Least primitive root modulo ``p^2`` (odd ``p``)."""
    order = p * (p - 1)
    factors = _prime_factors(order)
    mod = p * p
    for g in range(2, mod):
        if g % p and all(pow(g, order // q, mod) != 1 for q in factors):
            return g
    raise ArithmeticError("no primitive root found")


def _prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def _dlog_table(p: int, k: int) -> dict:
    g = primitive_root(p)
    mod = p ** k
    table = {}
    x = 1
    for i in range(p ** (k - 1) * (p - 1)):
        table[x] = i
        x = x * g % mod
    return table


def discrete_log(p: int, k: int, a: int) -> int:
    """``log_g(a)`` modulo ``phi(p^k)`` for the fixed generator ``g``."""
    if a % p == 0:
        raise ValueError("discrete log of a non-unit")
    return _dlog_table(p, k)[a % p ** k]


@dataclass(frozen=True)
class DirichletCharacter:
    """
    A character of ``Z_p^x`` factoring through ``(Z/p^k)^x``.

    The stored ``conductor_exp`` is normalised to the true conductor
    exponent (at least 1).

    >>> psi = DirichletCharacter(3, 2, 0, 2)
    >>> psi.conductor, psi.order
    (9, 3)
    """

    p: int
    conductor_exp: int = 1
    tame: int = 0
    wild: int = 0

    def __post_init__(self):
        p, k = self.p, self.conductor_exp
        if k < 1:
            raise ValueError("conductor exponent must be >= 1")
        tame = self.tame % (p - 1)
        wild = self.wild % p ** (k - 1)
        while k > 1 and wild % p == 0:
            wild //= p
            k -= 1
        object.__setattr__(self, "conductor_exp", k)
        object.__setattr__(self, "tame", tame)
        object.__setattr__(self, "wild", wild % p ** (k - 1))

    @classmethod
    def trivial(cls, p: int) -> "DirichletCharacter":
        return cls(p)

    @classmethod
    def teichmuller(cls, p: int, power: int = 1) -> "DirichletCharacter":
        """``omega^power``."""
        return cls(p, 1, power, 0)

    @property
    def conductor(self) -> int:
        return self.p ** self.conductor_exp

    @property
    def order(self) -> int:
        p = self.p
        t = (p - 1) // gcd(self.tame, p - 1)
        w = p ** (self.conductor_exp - 1) // gcd(self.wild, p ** (self.conductor_exp - 1))
        return t * w // gcd(t, w)

    def is_trivial(self) -> bool:
        return self.tame == 0 and self.wild == 0

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.p != self.p:
            raise ValueError("characters for different primes")
        k = max(self.conductor_exp, other.conductor_exp)
        p = self.p
        wild = (self.wild * p ** (k - self.conductor_exp)
                + other.wild * p ** (k - other.conductor_exp))
        return DirichletCharacter(p, k, self.tame + other.tame, wild)

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.p, self.conductor_exp, -self.tame, -self.wild)

    def __pow__(self, n: int) -> "DirichletCharacter":
        return DirichletCharacter(self.p, self.conductor_exp, n * self.tame, n * self.wild)

    def value(self, a: int, ctx: PadicContext) -> CycloElt:
        return char_eval(self, a, ctx)

    def check_context(self, ctx: PadicContext):
        if ctx.p != self.p:
            raise ValueError("context prime %d does not match character" % ctx.p)
        if ctx.cyclo_order % self.p ** (self.conductor_exp - 1):
            raise ValueError("context lacks the roots of unity of order %d"
                             % self.p ** (self.conductor_exp - 1))

    def to_json(self) -> dict:
        return {"p": self.p, "conductor_exp": self.conductor_exp,
                "tame": self.tame, "wild": self.wild}

    @classmethod
    def from_json(cls, data: dict) -> "DirichletCharacter":
        return cls(int(data["p"]), int(data.get("conductor_exp", 1)),
                   int(data.get("tame", 0)), int(data.get("wild", 0)))


def char_eval(chi: DirichletCharacter, a: int, ctx: PadicContext) -> CycloElt:
    """
    ``chi(a)`` for an integer (or ``Z_p`` approximation) ``a`` prime to ``p``.

    >>> from upslopes.padic import PadicContext
    >>> ctx = PadicContext(3, m=2)
    >>> psi = DirichletCharacter(3, 2, 0, 2)
    >>> char_eval(psi, 4, ctx) == CycloElt.zeta(ctx)
    True
    """
    p = chi.p
    if a % p == 0:
        raise ValueError("character evaluated at a multiple of p")
    chi.check_context(ctx)
    value = CycloElt.one(ctx)
    if chi.tame:
        w = teichmuller_int(p, a, ctx.prec)
        value = CycloElt.from_int(ctx, pow(w, chi.tame, ctx.modulus))
    if chi.wild:
        k = chi.conductor_exp
        ind = discrete_log(p, k, a)
        step = ctx.cyclo_order // p ** (k - 1)
        value = value * CycloElt.zeta(ctx, step * chi.wild * ind)
    return value


# -- weight characters ----------------------------------------------------

@dataclass(frozen=True)
class Classical:
    """The weight ``x -> x^k psi(x)``."""

    k: int
    psi: DirichletCharacter

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("classical weight needs k >= 1")

    @property
    def exponent(self):
        return self.k - 1


@dataclass(frozen=True)
class DiskPoint:
    """The weight ``x -> x psi(x) <x>^w0``."""

    psi: DirichletCharacter
    w0: object = 0

    def __post_init__(self):
        w = self.w0
        if isinstance(w, CycloElt):
            if w.valuation() < 0:
                raise ValueError("w0 must be integral")
        elif not isinstance(w, int):
            raise TypeError("w0 must be an int or a CycloElt")

    @property
    def exponent(self):
        return self.w0


WeightChar = Classical | DiskPoint


def _exponent_in(kappa, ctx):
    w = kappa.exponent
    if isinstance(w, CycloElt) and w.ctx != ctx:
        w = w.to_context(ctx)
    return w


def kappa_eval(kappa, d: int, ctx: PadicContext) -> CycloElt:
    """
    ``kappa(d) / d`` for a unit ``d``.

    Classical weights give ``psi(d) d^(k-1)``; disk points give
    ``psi(d) <d>^w0``.
    """
    if d % ctx.p == 0:
        raise ValueError("kappa_eval needs a unit")
    psi_d = char_eval(kappa.psi, d, ctx)
    if isinstance(kappa, Classical):
        return psi_d * pow(d, kappa.k - 1, ctx.modulus)
    return psi_d * angle_power(ctx, d, _exponent_in(kappa, ctx))


def kappa_value(kappa, a: int, ctx: PadicContext) -> CycloElt:
    """``kappa(a)`` itself."""
    return kappa_eval(kappa, a, ctx) * (a % ctx.modulus)


def kappa_series(kappa, u: int, ctx: PadicContext, n_terms: int | None = None) -> BinomialSeries:
    """
    Coefficients of ``(1 + u z)^(k-1)`` or ``(1 + u z)^w0``.

    ``u`` stands for ``c/d`` and must satisfy ``v(u) >= 1``.
    """
    return binomial_series(ctx, _exponent_in(kappa, ctx), u, n_terms)


def t_coordinate(kappa, ctx: PadicContext) -> CycloElt:
    """``kappa(exp(2p)) - 1``."""
    p = ctx.p
    guard = ctx.prec + 4
    g0 = padic_exp_int(p, 2 * p, guard)
    return kappa_value(kappa, g0, ctx) - 1
