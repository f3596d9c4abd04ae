"""
The Hurwitz order of Hamilton's quaternions over ``Q`` and its splitting
at an odd prime.

Quaternions are stored with doubled coordinates ``(2a, 2b, 2c, 2d)`` for
``a + b i + c j + d k``; an element lies in the order
``Z<i, j, (1+i+j+k)/2>`` exactly when the four doubled coordinates have
the same parity.

The level ``U`` at ``p = 3`` used throughout is
``[[Z_3^x, Z_3], [9 Z_3, 1 + 3 Z_3]]`` and the ``U_3`` operator is given by
the three norm-3 elements found by :func:`delta_decomposition`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import isqrt

from .padic import CMatrix, CycloElt, PadicContext, hensel_sqrt_int


@dataclass(frozen=True, order=True)
class Quaternion:
    """
    ``(A + B i + C j + D k) / 2`` with integer ``A, B, C, D``.

    >>> i, j = Quaternion.basis("i"), Quaternion.basis("j")
    >>> i * j == Quaternion.basis("k")
    True
    >>> Quaternion(1, 1, 1, 1).norm()
    1
    """

    A: int
    B: int
    C: int
    D: int

    def __post_init__(self):
        parities = {x % 2 for x in self.doubled}
        if len(parities) != 1:
            raise ValueError("doubled coordinates %s do not lie in the Hurwitz order"
                             % (self.doubled,))

    @classmethod
    def from_coords(cls, a, b, c, d) -> "Quaternion":
        vals = [Fraction(x) * 2 for x in (a, b, c, d)]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("coordinates must be half-integers")
        return cls(*(int(v) for v in vals))

    @classmethod
    def basis(cls, name: str) -> "Quaternion":
        return {"1": cls(2, 0, 0, 0), "i": cls(0, 2, 0, 0),
                "j": cls(0, 0, 2, 0), "k": cls(0, 0, 0, 2)}[name]

    @property
    def doubled(self) -> tuple:
        return (self.A, self.B, self.C, self.D)

    @property
    def coords(self) -> tuple:
        return tuple(Fraction(x, 2) for x in self.doubled)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a1, b1, c1, d1 = self.doubled
        a2, b2, c2, d2 = other.doubled
        out = (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
               a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
               a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
               a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)
        if any(x % 2 for x in out):
            raise ArithmeticError("product left the order")
        return Quaternion(*(x // 2 for x in out))

    def __add__(self, other):
        return Quaternion(*(x + y for x, y in zip(self.doubled, other.doubled)))

    def __sub__(self, other):
        return Quaternion(*(x - y for x, y in zip(self.doubled, other.doubled)))

    def __neg__(self):
        return Quaternion(*(-x for x in self.doubled))

    def conj(self) -> "Quaternion":
        return Quaternion(self.A, -self.B, -self.C, -self.D)

    def norm(self):
        """Reduced norm ``a^2 + b^2 + c^2 + d^2`` (an integer on the order)."""
        n = Fraction(sum(x * x for x in self.doubled), 4)
        return int(n) if n.denominator == 1 else n

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __str__(self):
        names = ("", "i", "j", "k")
        half = self.A % 2 == 1
        vals = self.doubled if half else tuple(x // 2 for x in self.doubled)
        terms = []
        for v, nm in zip(vals, names):
            if v == 0:
                continue
            mag = abs(v)
            body = (str(mag) if nm == "" else (nm if mag == 1 else "%d%s" % (mag, nm)))
            sign = "-" if v < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += sign + body
        return "1/2(%s)" % s if half else s

    def to_json(self) -> list:
        return list(self.doubled)


def canonical_sort(qs) -> list:
    """Deterministic order: by norm, then by doubled coordinates descending."""
    return sorted(set(qs), key=lambda q: (q.norm(), tuple(-x for x in q.doubled)))


def unit_group() -> list:
    """The 24 units of the Hurwitz order."""
    return elements_of_norm(1)


def elements_of_norm(n: int) -> list:
    """
    All elements of the order of reduced norm ``n``, by exhaustive search
    over doubled coordinates with ``A^2 + B^2 + C^2 + D^2 = 4n``.
    """
    if n < 1:
        raise ValueError("norm must be positive")
    target = 4 * n
    r = isqrt(target)
    out = []
    for A, B, C in product(range(-r, r + 1), repeat=3):
        rest = target - A * A - B * B - C * C
        if rest < 0:
            continue
        D = isqrt(rest)
        if D * D != rest:
            continue
        for d in {D, -D}:
            if len({A % 2, B % 2, C % 2, d % 2}) == 1:
                out.append(Quaternion(A, B, C, d))
    return canonical_sort(out)


def sigma_odd(n: int) -> int:
    return sum(d for d in range(1, n + 1, 2) if n % d == 0)


# -- splitting at p --------------------------------------------------------

def _sqrt_minus_two_hint(p: int) -> int:
    roots = [r for r in range(1, p) if (r * r + 2) % p == 0]
    if not roots:
        raise ValueError("-2 is not a square modulo %d" % p)
    return roots[0]


class SplittingMap:
    """
    ``D tensor Q_p -> M_2(Q_p)`` given by::

        i -> [[nu, 1], [1, -nu]],  j -> [[0, -1], [1, 0]],  k -> [[1, -nu], [-nu, -1]]

    with ``nu`` the square root of ``-2`` congruent to ``nu_hint`` mod ``p``.
    For ``p = 3`` the default root is the one congruent to 1.
    """

    def __init__(self, ctx: PadicContext, nu_hint: int | None = None):
        self.ctx = ctx
        p = ctx.p
        hint = _sqrt_minus_two_hint(p) if nu_hint is None else nu_hint
        self.nu = hensel_sqrt_int(p, -2, hint, ctx.prec)

    @cached_property
    def generators(self) -> dict:
        nu, P = self.nu, self.ctx.modulus
        return {
            "1": (1, 0, 0, 1),
            "i": (nu, 1, 1, -nu % P),
            "j": (0, P - 1, 1, 0),
            "k": (1, -nu % P, -nu % P, P - 1),
        }

    def image_ints(self, q: Quaternion) -> tuple:
        """``(a, b, c, d)`` modulo ``p^prec`` for the image ``[[a, b], [c, d]]``."""
        P = self.ctx.modulus
        g = self.generators
        acc = [0, 0, 0, 0]
        for coeff, name in zip(q.doubled, "1ijk"):
            for t in range(4):
                acc[t] += coeff * g[name][t]
        inv2 = pow(2, -1, P)
        return tuple(x * inv2 % P for x in acc)

    def __call__(self, q: Quaternion) -> CMatrix:
        a, b, c, d = self.image_ints(q)
        return CMatrix.from_ints(self.ctx, [[a, b], [c, d]])


def split_at_p(q: Quaternion, sm: SplittingMap) -> CMatrix:
    """Image of ``q`` as a 2x2 matrix over the context of ``sm``."""
    return sm(q)


def reduce_mod(image: tuple, modulus: int) -> tuple:
    return tuple(x % modulus for x in image)


def _in_level(g: tuple, p: int, m: int) -> bool:
    """Membership of ``[[a, b], [c, d]]`` in ``[[Z_p^x, Z_p], [p^m Z_p, 1 + p Z_p]]``."""
    a, b, c, d = g
    return a % p != 0 and c % p ** m == 0 and (d - 1) % p == 0


def in_level_coset(g: tuple, j: int, p: int, m: int) -> bool:
    """
    Whether ``g`` lies in ``U v_j`` with ``v_j = [[p, 0], [p^m j, 1]]``.

    Equivalently ``g v_j^-1`` lies in ``U``; written out this asks that
    ``(a - b c_j) / p`` be a unit, ``c - d c_j`` vanish mod ``p^(m+1)`` and
    ``d`` be ``1`` mod ``p``, where ``c_j = p^m j``.
    """
    a, b, c, d = g
    cj = p ** m * j
    x = a - b * cj
    return (x % p == 0 and (x // p) % p != 0
            and (c - d * cj) % p ** (m + 1) == 0 and (d - 1) % p == 0)


EXPECTED_DELTAS = (
    Quaternion.from_coords(-1, 1, -1, 0),
    Quaternion.from_coords(Fraction(1, 2), Fraction(1, 2), Fraction(3, 2), Fraction(1, 2)),
    Quaternion.from_coords(Fraction(1, 2), Fraction(-3, 2), Fraction(-1, 2), Fraction(-1, 2)),
)

EXPECTED_DELTA_PRIMES = (
    Quaternion.from_coords(-1, 0, 0, 0),
    Quaternion(1, 1, 1, -1),
    Quaternion(1, -1, -1, 1),
)

SHIFT = Quaternion.from_coords(1, -1, 1, 0)  # 1 - i + j


def example_splitting(prec: int = 40) -> SplittingMap:
    return SplittingMap(PadicContext(3, m=2, prec=prec, cyclo_order=1))


@dataclass(frozen=True)
class DeltaData:
    j: int
    delta: Quaternion
    image: tuple
    delta_prime: Quaternion

    def image_mod(self, modulus: int = 9) -> tuple:
        return reduce_mod(self.image, modulus)


def delta_decomposition(sm: SplittingMap | None = None, check: bool = True) -> list:
    """
    The norm-3 elements ``delta_j`` in ``D^x`` lying in ``U v_j``.

    Searches all 96 elements of norm 3 for the one in each coset
    ``U v_j`` (``j = 0, 1, 2``), and records ``delta'_j = delta_j (1-i+j)^-1``.
    With ``check`` the result is compared with the expected sets.
    """
    p, m = 3, 2
    sm = example_splitting() if sm is None else sm
    if sm.ctx.p != p:
        raise ValueError("the decomposition is specific to p = 3")
    candidates = elements_of_norm(p)
    out = []
    shift_inv_num = SHIFT.conj()  # (1-i+j)^-1 = conj / 3
    for j in range(p):
        found = [q for q in candidates if in_level_coset(sm.image_ints(q), j, p, m)]
        if len(found) != 1:
            raise ArithmeticError("expected one delta in coset %d, found %d" % (j, len(found)))
        q = found[0]
        num = q * shift_inv_num
        if any(x % 3 for x in num.doubled):
            raise ArithmeticError("delta' is not integral")
        dprime = Quaternion(*(x // 3 for x in num.doubled))
        out.append(DeltaData(j, q, sm.image_ints(q), dprime))
    if check:
        if {d.delta for d in out} != set(EXPECTED_DELTAS):
            raise ArithmeticError("delta search disagrees with the expected elements")
        if {d.delta_prime for d in out} != set(EXPECTED_DELTA_PRIMES):
            raise ArithmeticError("delta' set disagrees with the expected units")
    return out


def level_index(p: int = 3, m: int = 2) -> int:
    """``[GL_2(Z_p) : U]`` computed modulo ``p^m``."""
    N = p ** m
    gl2 = N ** 4 * (p - 1) * (p * p - 1) // p ** 3
    # a a unit, b free, c = 0, d in 1 + p Z / N
    u = (N // p * (p - 1)) * N * (N // p)
    return gl2 // u


def verify_honest_cosets(units=None, sm: SplittingMap | None = None) -> bool:
    """
    Whether the images of ``units`` form a complete set of representatives
    of ``GL_2(Z_3) / U``.

    Two units ``g, h`` represent the same coset exactly when
    ``g^-1 h = conj(g) h`` lies in ``U``, which only depends on images
    modulo 9.
    """
    p, m = 3, 2
    sm = example_splitting() if sm is None else sm
    units = unit_group() if units is None else list(units)
    if len(units) != level_index(p, m):
        return False
    N = p ** m
    for idx, g in enumerate(units):
        if g.norm() != 1:
            return False
        for h in units[idx + 1:]:
            if _in_level(reduce_mod(sm.image_ints(g.conj() * h), N), p, m):
                return False
    return True


def unit_table(sm: SplittingMap | None = None) -> list:
    """Units with their images modulo 9."""
    sm = example_splitting() if sm is None else sm
    return [(u, reduce_mod(sm.image_ints(u), 9)) for u in unit_group()]
