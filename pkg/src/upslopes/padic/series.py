"""
Teichmuller lifts, Hensel square roots, exp/log on ``Z_p`` and binomial
series ``(1 + u z)^w``.

Integer-valued helpers (suffix ``_int``) work modulo ``p^prec`` on plain
Python integers; the public functions wrap results as :class:`CycloElt`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .context import PadicContext, vp
from .cyclo import CycloElt


def div_exact_int(num: int, den: int, p: int, prec: int) -> int:
    """
    ``num / den`` in ``Z_p`` modulo ``p^prec``.

    ``num`` must be known modulo ``p^(prec + v_p(den))`` and divisible by the
    ``p``-part of ``den``.
    """
    k = vp(den, p)
    pk = p ** k
    if num % pk:
        raise ArithmeticError("%d is not divisible by p^%d" % (num, k))
    P = p ** prec
    return (num // pk) * pow(den // pk, -1, P) % P


def teichmuller_int(p: int, a: int, prec: int) -> int:
    if a % p == 0:
        raise ValueError("Teichmuller lift needs a unit, got %d" % a)
    P = p ** prec
    x = a % P
    for _ in range(prec + 1):
        y = pow(x, p, P)
        if y == x:
            return x
        x = y
    raise ArithmeticError("Teichmuller iteration did not stabilise")


def teichmuller(ctx: PadicContext, a: int) -> CycloElt:
    """
    The ``(p-1)``-st root of unity congruent to ``a`` modulo ``p``.

    >>> from upslopes.padic import PadicContext
    >>> teichmuller(PadicContext(5, prec=2), 2).to_int()
    7
    """
    return CycloElt.from_int(ctx, teichmuller_int(ctx.p, a, ctx.prec))


def angle_int(p: int, a: int, prec: int) -> int:
    """``<a> = a * omega(a)^-1``, an element of ``1 + p Z_p``."""
    P = p ** prec
    return a * pow(teichmuller_int(p, a, prec), -1, P) % P


def hensel_sqrt_int(p: int, n: int, hint: int, prec: int) -> int:
    if n % p == 0:
        raise ValueError("square root of a non-unit is not supported")
    if (hint * hint - n) % p:
        raise ValueError("%d is not a square of %d modulo %d" % (n, hint, p))
    P = p ** prec
    x = hint % p
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        Pk = p ** k
        x = (x + n * pow(x, -1, Pk)) * pow(2, -1, Pk) % Pk
    return x % P


def hensel_sqrt(ctx: PadicContext, n: int, residue_hint: int) -> CycloElt:
    """
    The square root of ``n`` in ``Z_p`` congruent to ``residue_hint``.

    >>> from upslopes.padic import PadicContext
    >>> hensel_sqrt(PadicContext(3, prec=8), -2, 1).to_int() % 3**8
    2695
    """
    return CycloElt.from_int(ctx, hensel_sqrt_int(ctx.p, n, residue_hint, ctx.prec))


def padic_log_int(p: int, x: int, prec: int) -> int:
    """``log(x)`` for ``x`` in ``1 + p Z_p``, modulo ``p^prec``."""
    if (x - 1) % p:
        raise ValueError("log is only defined here on 1 + pZ_p")
    # v(y^n / n) >= n - log_p(n), which increases with n
    guard = prec + len(_digits(prec * 4, p)) + 2
    G = p ** guard
    y = (x - 1) % G
    total = 0
    term = 1
    n = 1
    while n - (len(_digits(n, p)) - 1) < prec:
        term = term * y % G
        t = div_exact_int(term, n, p, prec)
        total += t if n % 2 else -t
        n += 1
    return total % p ** prec


def _digits(n: int, p: int) -> list:
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out or [0]


def padic_exp_int(p: int, x: int, prec: int) -> int:
    """``exp(x)`` for ``v_p(x) >= 1`` (``p`` odd), modulo ``p^prec``."""
    if x % p:
        raise ValueError("exp needs v_p(x) >= 1")
    # v(x^n / n!) >= n (p-2)/(p-1); enough terms to pass prec
    nmax = 1
    while nmax * (p - 2) // (p - 1) < prec + 1:
        nmax += 1
    guard = prec + nmax
    G = p ** guard
    total = 0
    term = 1
    for n in range(nmax + 1):
        if n:
            term = term * x % G
        total += div_exact_int(term, factorial(n), p, prec)
    return total % p ** prec


def padic_log(ctx: PadicContext, x: int) -> CycloElt:
    return CycloElt.from_int(ctx, padic_log_int(ctx.p, x, ctx.prec))


def padic_exp(ctx: PadicContext, x: int) -> CycloElt:
    return CycloElt.from_int(ctx, padic_exp_int(ctx.p, x, ctx.prec))


@dataclass(frozen=True)
class BinomialSeries:
    """
    Coefficients of ``(1 + u z)^w`` up to ``z^(len(coeffs) - 1)``.

    ``truncation_index`` is the first index whose term is known to vanish
    modulo ``p^prec`` (``None`` when the caller fixed the length).
    """

    coeffs: tuple
    truncation_index: int | None = None

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]


def binomial_series(ctx: PadicContext, w, u: int, n_terms: int | None = None) -> BinomialSeries:
    """
    Coefficients ``C(w, n) u^n`` of ``(1 + u z)^w`` for ``u`` in ``p Z_p``.

    ``w`` is an integer or a :class:`CycloElt`.  Each coefficient is formed
    as ``w(w-1)...(w-n+1) * (u^n / n!)`` where the second factor is an exact
    ``p``-adic integer, so no division happens in ``O_E``.  Without
    ``n_terms`` the series stops once ``v(u^n / n!)`` reaches ``prec``.
    """
    p, prec = ctx.p, ctx.prec
    vu = vp(u, p) if u % p ** (prec + 64) else prec + 64
    if vu < 1:
        raise ValueError("binomial series needs v(u) >= 1, got %d" % vu)
    trunc = None
    if n_terms is None:
        n = 0
        while n * vu - vp(factorial(n), p) < prec:
            n += 1
        n_terms = trunc = n
    G = p ** (prec + vp(factorial(max(n_terms - 1, 0)), p) + 1)
    coeffs = []
    falling = CycloElt.one(ctx) if isinstance(w, CycloElt) else 1
    upow = 1
    for n in range(n_terms):
        scalar = div_exact_int(upow, factorial(n), p, prec)
        if isinstance(w, CycloElt):
            coeffs.append(falling * scalar)
            falling = falling * (w - n)
        else:
            coeffs.append(CycloElt.from_int(ctx, falling * scalar))
            falling = falling * (w - n) % ctx.modulus
        upow = upow * u % G
    return BinomialSeries(tuple(coeffs), trunc)


def angle_power(ctx: PadicContext, a: int, w) -> CycloElt:
    """
    ``<a>^w`` for a unit ``a``.

    Integer exponents use exact powering; other exponents use the series
    ``sum C(w, n) (<a> - 1)^n``.
    """
    p, prec = ctx.p, ctx.prec
    if isinstance(w, int):
        x = angle_int(p, a, prec)
        return CycloElt.from_int(ctx, pow(x, w, p ** prec))
    guard = prec + 2 * prec // max(p - 2, 1) + 8
    x = angle_int(p, a, guard)
    series = binomial_series(ctx, w, x - 1)
    acc = CycloElt.zero(ctx)
    for c in series.coeffs:
        acc = acc + c
    return acc
