"""
Elements of ``O_E = Z_p[zeta_N]`` modulo ``p^prec``.

Coordinates are taken in the basis ``1, pi, ..., pi^(e-1)`` where
``pi = zeta_N - 1``.  Since ``O_E`` is free on this basis and ``pi`` is a
uniformizer (for ``N > 1``), the valuation of ``sum c_i pi^i`` is the exact
minimum of ``i/e + v_p(c_i)``.

EXAMPLES::

    >>> from upslopes.padic import PadicContext, CycloElt
    >>> ctx = PadicContext(3, m=3)
    >>> z = CycloElt.zeta(ctx)
    >>> (z - 1).valuation()
    Exact(1/6)
    >>> z ** 9 == 1
    True
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .context import PadicContext, Valuation, vp


def _check_ctx(a, b):
    if a.ctx != b.ctx:
        raise ValueError("elements live in different contexts")


def _mul_coeffs(ctx: PadicContext, x, y) -> tuple:
    e = ctx.e
    P = ctx.modulus
    if e == 1:
        return ((x[0] * y[0]) % P,)
    raw = [0] * (2 * e - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                raw[i + j] += a * b
    out = raw[:e]
    for s, row in enumerate(ctx.fold):
        h = raw[e + s]
        if h:
            for j in range(e):
                out[j] += h * row[j]
    return tuple(c % P for c in out)


class CycloElt:
    """
    An element of ``O_E`` known modulo ``p^prec``.

    Integers are accepted wherever an element is expected and are embedded
    through ``Z -> O_E``.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PadicContext, coeffs):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) > ctx.e:
            raise ValueError("expected at most %d coordinates" % ctx.e)
        coeffs += [0] * (ctx.e - len(coeffs))
        P = ctx.modulus
        self.ctx = ctx
        self.coeffs = tuple(c % P for c in coeffs)

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_int(cls, ctx: PadicContext, n: int) -> "CycloElt":
        return cls(ctx, [n])

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, [])

    @classmethod
    def one(cls, ctx):
        return cls(ctx, [1])

    @classmethod
    def pi(cls, ctx: PadicContext) -> "CycloElt":
        """The element ``zeta_N - 1``; a uniformizer when ``N > 1``."""
        if ctx.e == 1:
            return cls.zero(ctx)
        return cls(ctx, [0, 1])

    @classmethod
    def uniformizer(cls, ctx: PadicContext) -> "CycloElt":
        if ctx.e == 1:
            return cls.from_int(ctx, ctx.p)
        return cls.pi(ctx)

    @classmethod
    def zeta(cls, ctx: PadicContext, k: int = 1) -> "CycloElt":
        """``zeta_N^k`` where ``N`` is the cyclotomic order of ``ctx``."""
        return _zeta_power(ctx, k % ctx.cyclo_order)

    @classmethod
    def from_zeta_coeffs(cls, ctx: PadicContext, coeffs) -> "CycloElt":
        """
        Build ``sum_k coeffs[k] zeta^k`` from a list or an exponent mapping.

        Exponents may exceed ``e`` and are reduced.
        """
        items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
        acc = [0] * ctx.e
        for k, a in items:
            if a:
                z = _zeta_power(ctx, k % ctx.cyclo_order).coeffs
                for i in range(ctx.e):
                    acc[i] += a * z[i]
        return cls(ctx, acc)

    @classmethod
    def parse(cls, ctx: PadicContext, text: str) -> "CycloElt":
        """Parse a literal such as ``"z^7 - 2*z + 3"``."""
        return cls.from_zeta_coeffs(ctx, parse_literal(text))

    def coerce(self, other) -> "CycloElt":
        if isinstance(other, CycloElt):
            _check_ctx(self, other)
            return other
        if isinstance(other, int):
            return CycloElt.from_int(self.ctx, other)
        raise TypeError("cannot coerce %r" % (other,))

    def to_context(self, ctx: PadicContext) -> "CycloElt":
        """Reinterpret the same coordinates in a context of another precision."""
        if (ctx.p, ctx.cyclo_order) != (self.ctx.p, self.ctx.cyclo_order):
            raise ValueError("incompatible contexts")
        return CycloElt(ctx, self.coeffs)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return CycloElt(self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElt(self.ctx, [-a for a in self.coeffs])

    def __sub__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return CycloElt(self.ctx, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloElt(self.ctx, [a * other for a in self.coeffs])
        if not isinstance(other, CycloElt):
            return NotImplemented
        _check_ctx(self, other)
        out = CycloElt.__new__(CycloElt)
        out.ctx = self.ctx
        out.coeffs = _mul_coeffs(self.ctx, self.coeffs, other.coeffs)
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloElt.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        """Exact division; requires ``v(self) >= v(other)``."""
        other = self.coerce(other)
        v = other.valuation()
        if not v.exact:
            raise ZeroDivisionError("division by an element that is 0 to precision")
        k = int(v.value * self.ctx.e)
        if k == 0:
            return self * other.inverse()
        unit = other.div_uniformizer_power(k)
        return self.div_uniformizer_power(k) * unit.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycloElt.from_int(self.ctx, other)
        if not isinstance(other, CycloElt):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    # -- valuation and units ----------------------------------------------

    def valuation(self) -> Valuation:
        """
        Exact valuation, or ``AtLeast(prec)`` for elements that are zero to
        working precision.
        """
        ctx = self.ctx
        e, p = ctx.e, ctx.p
        best = None
        for i, c in enumerate(self.coeffs):
            if c:
                val = i + e * vp(c, p)
                if best is None or val < best:
                    best = val
        if best is None:
            return Valuation.at_least(ctx.prec)
        return Valuation(Fraction(best, e))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.coeffs[0] % self.ctx.p != 0

    def residue(self) -> int:
        """Image in the residue field ``F_p``."""
        return self.coeffs[0] % self.ctx.p

    def inverse(self) -> "CycloElt":
        """Inverse of a unit by the iteration ``x -> x (2 - a x)``."""
        ctx = self.ctx
        if not self.is_unit():
            raise ZeroDivisionError("not a unit: %s" % self)
        x = CycloElt.from_int(ctx, pow(self.coeffs[0], -1, ctx.modulus))
        one = CycloElt.one(ctx)
        for _ in range(ctx.prec * ctx.e + 2):
            err = one - self * x
            if err.is_zero():
                return x
            x = x + x * err
        raise ArithmeticError("unit inversion failed to converge")

    def div_uniformizer_power(self, k: int) -> "CycloElt":
        """Exact division by ``varpi^k``; raises if not divisible."""
        ctx = self.ctx
        if k == 0:
            return self
        if self.valuation() < Fraction(k, ctx.e):
            raise ArithmeticError("%s is not divisible by varpi^%d" % (self, k))
        q, r = divmod(k, ctx.e)
        x = self
        if q:
            pq = ctx.p ** q
            x = CycloElt(ctx, [c // pq for c in x.coeffs])
            if ctx.e > 1:
                x = x * _p_over_pi_e(ctx) ** q
        for _ in range(r):
            x = x._div_pi_once()
        return x

    def _div_pi_once(self) -> "CycloElt":
        ctx = self.ctx
        c = self.coeffs
        f = ctx.minpoly
        e = ctx.e
        c0 = c[0] // ctx.p
        # p / pi = -(pi^(e-1) + f_{e-1} pi^(e-2) + ... + f_1)
        out = list(c[1:]) + [0]
        for j in range(e):
            out[j] -= c0 * f[j + 1]
        return CycloElt(ctx, out)

    def mul_uniformizer_power(self, k: int) -> "CycloElt":
        return self * CycloElt.uniformizer(self.ctx) ** k

    # -- Galois action and conversions ------------------------------------

    def galois(self, a: int) -> "CycloElt":
        """Apply the automorphism ``zeta -> zeta^a`` (``p`` does not divide ``a``)."""
        ctx = self.ctx
        if a % ctx.p == 0:
            raise ValueError("a must be prime to p")
        images = _galois_images(ctx, a % ctx.cyclo_order if ctx.cyclo_order > 1 else 1)
        acc = [0] * ctx.e
        for c, img in zip(self.coeffs, images):
            if c:
                for j in range(ctx.e):
                    acc[j] += c * img[j]
        return CycloElt(ctx, acc)

    def conj(self) -> "CycloElt":
        """Complex conjugation ``zeta -> zeta^-1``."""
        return self.galois(-1)

    def to_zeta_coeffs(self, balanced: bool = True) -> list:
        """Coordinates in the basis ``1, zeta, ..., zeta^(e-1)``."""
        ctx = self.ctx
        e, P = ctx.e, ctx.modulus
        rows = ctx.zeta_to_pi
        a = [0] * e
        for i in range(e - 1, -1, -1):
            s = self.coeffs[i] - sum(rows[k][i] * a[k] for k in range(i + 1, e))
            a[i] = s % P
        if balanced:
            a = [x - P if x > P // 2 else x for x in a]
        return a

    def to_int(self) -> int:
        """The ``Z_p`` value in ``[0, p^prec)``; fails for non-rational elements."""
        if any(self.coeffs[1:]):
            raise ValueError("element does not lie in Z_p")
        return self.coeffs[0]

    def literal(self) -> str:
        return format_literal(self.to_zeta_coeffs())

    def __str__(self):
        return self.literal()

    def __repr__(self):
        return "CycloElt(%s)" % self.literal()


# -- literal grammar ------------------------------------------------------

_TERM = re.compile(r"^(\d+)?\*?(z(?:\^(\d+))?)?$")


def parse_literal(text: str) -> dict:
    """
    Parse a signed integer combination of powers of ``z``.

    Returns a mapping ``exponent -> coefficient``.

    >>> sorted(parse_literal("z^7 - 2*z + 3").items())
    [(0, 3), (1, -2), (7, 1)]
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty literal")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise ValueError("malformed literal %r" % text)
    out: dict = {}
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        mt = _TERM.match(body)
        if not body or mt is None or (mt.group(1) is None and mt.group(2) is None):
            raise ValueError("malformed term %r in %r" % (term, text))
        coeff = int(mt.group(1)) if mt.group(1) else 1
        if mt.group(2) is None:
            k = 0
        else:
            k = int(mt.group(3)) if mt.group(3) else 1
        out[k] = out.get(k, 0) + sign * coeff
    return out


def _literal_list(d: dict) -> list:
    n = max(d) + 1 if d else 0
    out = [0] * n
    for k, a in d.items():
        out[k] = a
    return out


def format_literal(coeffs) -> str:
    """Inverse of :func:`parse_literal` for a coefficient list."""
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        a = coeffs[k]
        if a == 0:
            continue
        mag = abs(a)
        if k == 0:
            body = str(mag)
        else:
            mono = "z" if k == 1 else "z^%d" % k
            body = mono if mag == 1 else "%d*%s" % (mag, mono)
        if not parts:
            parts.append(("-" if a < 0 else "") + body)
        else:
            parts.append(("- " if a < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


# -- cached structure -----------------------------------------------------

@lru_cache(maxsize=None)
def _zeta_power(ctx: PadicContext, k: int) -> CycloElt:
    e = ctx.e
    if ctx.cyclo_order == 1:
        return CycloElt.one(ctx)
    if k < e:
        return CycloElt(ctx, ctx.zeta_to_pi[k])
    return _zeta_power(ctx, k - 1) * CycloElt(ctx, [1, 1])


@lru_cache(maxsize=None)
def _p_over_pi_e(ctx: PadicContext) -> CycloElt:
    x = CycloElt.from_int(ctx, ctx.p)
    for _ in range(ctx.e):
        x = x._div_pi_once()
    return x


@lru_cache(maxsize=None)
def _galois_images(ctx: PadicContext, a: int) -> tuple:
    """Images of ``pi^i`` under ``zeta -> zeta^a``."""
    if ctx.e == 1:
        return ((1,),)
    img = CycloElt.zeta(ctx, a) - 1
    out = []
    cur = CycloElt.one(ctx)
    for _ in range(ctx.e):
        out.append(cur.coeffs)
        cur = cur * img
    return tuple(out)


def p_over_pi_e(ctx: PadicContext) -> CycloElt:
    """The unit ``p / pi^e`` (``1`` when ``e = 1``)."""
    if ctx.e == 1:
        return CycloElt.one(ctx)
    return _p_over_pi_e(ctx)


def parse_literal_list(text: str) -> list:
    return _literal_list(parse_literal(text))
