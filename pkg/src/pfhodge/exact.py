"""Exact arithmetic over the rationals.

Building blocks used by the whole package: arbitrary-precision rationals
(stdlib ``fractions.Fraction``, aliased ``Q``), univariate polynomials
(:class:`UniPoly`), rational functions (:class:`RatFunc`), and residues in
quotient rings Q[t]/(m) for squarefree moduli (:class:`QuotientElement`),
with dynamic evaluation: inverting a zero divisor reports a factorization of
the modulus (:class:`Split`) instead of failing.

No floating point is used anywhere.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Q = Fraction
Rat = Union[int, Fraction]

__all__ = [
    "Q",
    "UniPoly",
    "RatFunc",
    "QuotientElement",
    "Split",
    "SplitRequired",
    "poly_gcd",
    "poly_xgcd",
    "poly_shift",
    "squarefree_part",
    "rational_roots",
    "resultant",
    "quotient_invert",
    "rational_roots_over_quotient",
    "poly_from_string",
    "poly_to_string",
]


def _q(x: Rat) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# polynomials


class UniPoly:
    """Univariate polynomial over Q.

    Coefficients are stored lowest-degree first with no trailing zeros, so
    representation is canonical and equality/hashing are structural.  The
    zero polynomial has ``degree == -1`` (sentinel) and coefficient tuple ().
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rat] = ()):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(c: Rat) -> "UniPoly":
        return UniPoly([c])

    @staticmethod
    def x(power: int = 1) -> "UniPoly":
        return UniPoly([0] * power + [1])

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly()

    @staticmethod
    def one() -> "UniPoly":
        return UniPoly([1])

    # -- basic structure -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 as the sentinel for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Q(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Q(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UniPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("UniPoly", self.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"UniPoly({poly_to_string(self)!r})"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "UniPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return -(self - other)

    def __mul__(self, other) -> "UniPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = UniPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        other = _coerce_poly(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quo = [Q(0)] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lead
            quo[k] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quo), UniPoly(rem[: other.degree if other.degree > 0 else 0])

    def __floordiv__(self, other) -> "UniPoly":
        return self.divmod(_coerce_poly(other))[0]

    def __mod__(self, other) -> "UniPoly":
        return self.divmod(_coerce_poly(other))[1]

    # -- analytic-ish helpers ------------------------------------------------

    def __call__(self, x: Rat) -> Fraction:
        x = _q(x)
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        lead = self.leading
        return UniPoly([c / lead for c in self.coeffs])

    def shift(self, a: Rat) -> "UniPoly":
        """p(t + a), computed by Horner expansion."""
        a = _q(a)
        result = UniPoly()
        t_plus_a = UniPoly([a, 1])
        for c in reversed(self.coeffs):
            result = result * t_plus_a + UniPoly.const(c)
        return result

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """p(inner(t))."""
        result = UniPoly()
        for c in reversed(self.coeffs):
            result = result * inner + UniPoly.const(c)
        return result

    def compose_frac(self, num: "UniPoly", den: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """p(num/den) as a pair (numerator, den**deg p)."""
        d = max(self.degree, 0)
        out = UniPoly()
        for j, c in enumerate(self.coeffs):
            if c != 0:
                out = out + UniPoly.const(c) * (num ** j) * (den ** (d - j))
        return out, den ** d

    def reversed_coeffs(self) -> "UniPoly":
        """t^deg * p(1/t) (coefficient reversal)."""
        return UniPoly(list(reversed(self.coeffs)))


def _coerce_poly(v) -> "UniPoly":
    if isinstance(v, UniPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return UniPoly.const(v)
    return NotImplemented


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor (gcd(0, 0) = 0)."""
    a, b = UniPoly(a.coeffs), UniPoly(b.coeffs)
    while not b.is_zero:
        a, b = b, (a % b).monic() if not (a % b).is_zero else UniPoly()
    return a.monic()


def poly_xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Extended gcd: returns monic (g, u, v) with u*a + v*b = g."""
    r0, r1 = a, b
    s0, s1 = UniPoly.one(), UniPoly.zero()
    t0, t1 = UniPoly.zero(), UniPoly.one()
    while not r1.is_zero:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return UniPoly.zero(), UniPoly.zero(), UniPoly.zero()
    lead = r0.leading
    inv = UniPoly.const(Q(1) / lead)
    return r0.monic(), s0 * inv, t0 * inv


def poly_shift(p: UniPoly, a: Rat) -> UniPoly:
    """p(t + a)."""
    return p.shift(a)


def squarefree_part(p: UniPoly) -> UniPoly:
    """Monic product of the distinct irreducible factors of p."""
    if p.is_zero:
        return p
    if p.degree == 0:
        return UniPoly.one()
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


# ---------------------------------------------------------------------------
# integer factorization (for rational-root candidate enumeration)


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(0xC0FFEE ^ n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of ``abs(n)`` as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.extend([d, m // d])
    return out


def _divisors_from_factors(factors: dict[int, int], bound: int | None = None):
    """Yield positive divisors, skipping anything above ``bound``."""
    primes = sorted(factors)

    def rec(i: int, acc: int):
        if i == len(primes):
            yield acc
            return
        p = primes[i]
        v = acc
        for _ in range(factors[p] + 1):
            if bound is not None and v > bound:
                break
            yield from rec(i + 1, v)
            v *= p

    yield from rec(0, 1)


# ---------------------------------------------------------------------------
# rational roots


def rational_roots(p: UniPoly) -> tuple[list[tuple[Fraction, int]], UniPoly]:
    """All rational roots of p with multiplicities, plus the rootless cofactor.

    Returns ``(roots, cofactor)`` where ``roots`` is sorted ascending and
    ``cofactor`` is the monic factor of p with no rational roots (1 if p
    splits completely over Q).  Uses the rational-root theorem on a monic
    integer rescaling; no irreducible factorization is performed.
    """
    if p.is_zero:
        raise ValueError("the zero polynomial has every rational root")
    roots: list[tuple[Fraction, int]] = []
    cs = list(p.coeffs)
    k = 0
    while cs and cs[0] == 0:
        cs.pop(0)
        k += 1
    if k:
        roots.append((Q(0), k))
    work = UniPoly(cs).monic()
    if work.degree >= 1:
        for r in _monic_rational_root_candidates(work):
            mult = 0
            while work(r) == 0:
                work = work // UniPoly([-r, 1])
                mult += 1
            if mult:
                roots.append((r, mult))
    roots.sort(key=lambda rm: rm[0])
    return roots, work.monic() if not work.is_zero else UniPoly.one()


def _monic_rational_root_candidates(p: UniPoly) -> list[Fraction]:
    """Candidate rational roots of a monic p over Q, sorted ascending.

    Any rational root of a monic polynomial with coefficient-denominator lcm
    c is u/c with u an integer root of the monic integer polynomial
    q(u) = c^n p(u/c); integer roots of q divide q(0).
    """
    # Work with the squarefree part: same root set, smaller numbers.
    p = squarefree_part(p)
    n = p.degree
    if n <= 0:
        return []
    c = 1
    for co in p.coeffs:
        c = c * co.denominator // math.gcd(c, co.denominator)
    q = [int(p.coeff(j) * c ** (n - j)) for j in range(n + 1)]  # q[j] coeff of u^j
    if q[0] == 0:  # p(0) == 0 handled by caller via zero-stripping
        return [Q(0)]

    def q_eval(u: int) -> int:
        acc = 0
        for co in reversed(q):
            acc = acc * u + co
        return acc

    q1 = q_eval(1)
    qm1 = q_eval(-1)
    # Cauchy bound on |roots| of monic q: 1 + max |coeff|.
    bound = 1 + max(abs(co) for co in q[:-1]) if n >= 1 else 1
    factors = factor_int(q[0])
    cands: list[Fraction] = []
    for d in _divisors_from_factors(factors, bound=bound):
        for u in (d, -d):
            if u == 1 and q1 == 0:
                pass
            elif u == -1 and qm1 == 0:
                pass
            else:
                if q1 != 0 and (u - 1) != 0 and q1 % (u - 1) != 0:
                    continue
                if qm1 != 0 and (u + 1) != 0 and qm1 % (u + 1) != 0:
                    continue
            if q_eval(u) == 0:
                cands.append(Q(u, c))
    return sorted(set(cands))


# ---------------------------------------------------------------------------
# resultants


def resultant(f: UniPoly, g: UniPoly) -> Fraction:
    """Resultant of f and g over Q (Euclidean algorithm)."""
    if f.is_zero or g.is_zero:
        return Q(0) if max(f.degree, g.degree) > 0 else Q(1)
    if f.degree == 0:
        return f.leading ** g.degree
    if g.degree == 0:
        return g.leading ** f.degree
    r = f % g
    if r.is_zero:
        return Q(0)
    sign = -1 if (f.degree % 2 and g.degree % 2) else 1
    return sign * g.leading ** (f.degree - r.degree) * resultant(g, r)


def product_over_roots(m: UniPoly, g: UniPoly) -> Fraction:
    """prod g(alpha) over the roots alpha of the monic polynomial m."""
    if m.degree <= 0:
        return Q(1)
    if g.is_zero:
        return Q(0)
    return resultant(m.monic(), g)


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Rational function over Q in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _coerce_poly(num)
        den = UniPoly.one() if den is None else _coerce_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            den = UniPoly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                num = num * UniPoly.const(Q(1) / lead)
                den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    # -- constructors/predicates -------------------------------------------

    @staticmethod
    def const(c: Rat) -> "RatFunc":
        return RatFunc(UniPoly.const(c))

    @staticmethod
    def t() -> "RatFunc":
        return RatFunc(UniPoly.x())

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other) -> bool:
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFunc", self.num.coeffs, self.den.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        if self.is_polynomial:
            return f"RatFunc({poly_to_string(self.num)!r})"
        return f"RatFunc({poly_to_string(self.num)!r}, {poly_to_string(self.den)!r})"

    # -- field operations ----------------------------------------------------

    def __add__(self, other) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return -(self - other)

    def __mul__(self, other) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return _coerce_rf(other) / self

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return RatFunc(self.den, self.num) ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    # -- calculus/evaluation -------------------------------------------------

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, x: Rat) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def order_at(self, a: Rat):
        """Vanishing order at t=a (negative at poles, math.inf for 0)."""
        if self.is_zero:
            return math.inf
        a = _q(a)
        lin = UniPoly([-a, 1])

        def val(p: UniPoly) -> int:
            v = 0
            while p(a) == 0:
                p = p // lin
                v += 1
            return v

        return val(self.num) - val(self.den)

    def shift(self, a: Rat) -> "RatFunc":
        """f(t + a)."""
        return RatFunc(self.num.shift(a), self.den.shift(a))

    def compose_poly(self, inner: UniPoly) -> "RatFunc":
        """f(inner(t))."""
        return RatFunc(self.num.compose(inner), self.den.compose(inner))

    def compose(self, inner: "RatFunc") -> "RatFunc":
        """f(inner(t)) for a rational inner function."""
        n_num, n_den = self.num.compose_frac(inner.num, inner.den)
        d_num, d_den = self.den.compose_frac(inner.num, inner.den)
        # f o g = (n_num/n_den) / (d_num/d_den); n_den, d_den are powers of inner.den
        dn, dd = self.num.degree, self.den.degree
        # common denominator inner.den^max(dn,dd)
        m = max(dn, dd, 0)
        num = n_num * inner.den ** (m - max(dn, 0))
        den = d_num * inner.den ** (m - max(dd, 0))
        return RatFunc(num, den)

    def subst_recip(self) -> "RatFunc":
        """f(1/s), as a rational function of s."""
        dn, dd = max(self.num.degree, 0), max(self.den.degree, 0)
        num = self.num.reversed_coeffs()
        den = self.den.reversed_coeffs()
        if dd >= dn:
            return RatFunc(num * UniPoly.x(dd - dn), den)
        return RatFunc(num, den * UniPoly.x(dn - dd))

    def log_derivative(self) -> "RatFunc":
        """f'/f for nonzero f."""
        if self.is_zero:
            raise ZeroDivisionError("logarithmic derivative of 0")
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.num * self.den,
        )


def _coerce_rf(v) -> "RatFunc":
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, (int, Fraction)):
        return RatFunc.const(v)
    if isinstance(v, UniPoly):
        return RatFunc(v)
    return NotImplemented


# ---------------------------------------------------------------------------
# quotient rings with dynamic evaluation


@dataclass(frozen=True)
class Split:
    """Signal that a zero divisor was met: the modulus factors as g * h."""

    factors: tuple[UniPoly, UniPoly]


class SplitRequired(Exception):
    """Exception form of :class:`Split` for internal control flow."""

    def __init__(self, g: UniPoly, h: UniPoly):
        super().__init__("modulus must be split")
        self.factors = (g, h)


class QuotientElement:
    """Residue in Q[t]/(modulus), modulus monic and squarefree of degree >= 1.

    Arithmetic keeps residues reduced.  Inversion of a zero divisor does not
    fail: it reports a nontrivial factorization of the modulus (dynamic
    evaluation), letting callers split a closed point and retry on each factor.
    """

    __slots__ = ("modulus", "residue")

    def __init__(self, residue, modulus: UniPoly):
        residue = _coerce_poly(residue)
        modulus = _coerce_poly(modulus)
        if modulus.degree < 1:
            raise ValueError("modulus must be nonconstant")
        if modulus.leading != 1:
            modulus = modulus.monic()
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "residue", residue % modulus)

    @property
    def is_zero(self) -> bool:
        return self.residue.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, QuotientElement):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, (int, Fraction)):
            return self.residue == UniPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("QuotientElement", self.modulus.coeffs, self.residue.coeffs))

    def __repr__(self) -> str:
        return (
            f"QuotientElement({poly_to_string(self.residue)!r},"
            f" mod {poly_to_string(self.modulus)!r})"
        )

    def _lift(self, other) -> "QuotientElement":
        if isinstance(other, QuotientElement):
            if other.modulus != self.modulus:
                raise ValueError("mixed moduli")
            return other
        if isinstance(other, (int, Fraction, UniPoly)):
            return QuotientElement(_coerce_poly(other), self.modulus)
        return NotImplemented

    def __add__(self, other) -> "QuotientElement":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return QuotientElement(self.residue + other.residue, self.modulus)

    __radd__ = __add__

    def __neg__(self) -> "QuotientElement":
        return QuotientElement(-self.residue, self.modulus)

    def __sub__(self, other) -> "QuotientElement":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return QuotientElement(self.residue - other.residue, self.modulus)

    def __rsub__(self, other) -> "QuotientElement":
        return -(self - other)

    def __mul__(self, other) -> "QuotientElement":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return QuotientElement(self.residue * other.residue, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QuotientElement":
        if k < 0:
            inv = quotient_invert(self)
            if isinstance(inv, Split):
                raise SplitRequired(*inv.factors)
            return inv ** (-k)
        result = QuotientElement(UniPoly.one(), self.modulus)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def quotient_invert(x: QuotientElement) -> Union[QuotientElement, Split]:
    """Inverse in Q[t]/(m), or a :class:`Split` if x is a zero divisor.

    Raises ``ZeroDivisionError`` for the zero residue.
    """
    if x.is_zero:
        raise ZeroDivisionError("zero residue is not invertible")
    g, u, _ = poly_xgcd(x.residue, x.modulus)
    if g.degree == 0:
        return QuotientElement(u, x.modulus)
    return Split((g, (x.modulus // g).monic()))


def quotient_invert_strict(x: QuotientElement) -> QuotientElement:
    """Inverse, raising :class:`SplitRequired` when a split is needed."""
    r = quotient_invert(x)
    if isinstance(r, Split):
        raise SplitRequired(*r.factors)
    return r


def rational_roots_over_quotient(
    coeffs: Sequence[QuotientElement],
) -> list[tuple[Fraction, int]]:
    """Rational roots (with multiplicity) of P(T) with residue coefficients.

    ``coeffs`` lists the T-coefficients of P lowest-degree first over a common
    modulus m; "root" means a rational r with P(r) = 0 in Q[t]/(m), i.e. valid
    simultaneously at every conjugate root of m.  Candidates come from the
    norm N(T) = prod of P(T) over the roots of m (computed as a resultant via
    interpolation); each candidate is verified in the quotient ring and its
    multiplicity found by synthetic division.
    """
    if not coeffs:
        raise ValueError("empty polynomial")
    modulus = coeffs[0].modulus
    for c in coeffs:
        if c.modulus != modulus:
            raise ValueError("mixed moduli")
    cs = list(coeffs)
    while cs and cs[-1].is_zero:
        cs.pop()
    if not cs:
        raise ValueError("zero polynomial over the quotient ring")
    deg_t = len(cs) - 1
    if deg_t == 0:
        return []
    # Interpolate the norm N(T) of degree deg(m) * deg_t.
    deg_n = modulus.degree * deg_t
    xs = [Q(i) for i in range(deg_n + 1)]
    ys = [
        product_over_roots(modulus, sum((c.residue * UniPoly.const(x ** j) for j, c in enumerate(cs)), UniPoly()))
        for x in xs
    ]
    norm = _lagrange_interpolate(xs, ys)
    if norm.is_zero:
        # P vanishes identically on the quotient ring; every rational is a
        # root, which cannot happen for nonzero P over a squarefree modulus.
        raise ValueError("norm vanished identically")
    candidates, _ = rational_roots(squarefree_part(norm))
    out: list[tuple[Fraction, int]] = []
    for r, _m in candidates:
        work = list(cs)
        mult = 0
        while True:
            # synthetic division of P by (T - r): remainder is P(r)
            quo: list[QuotientElement] = []
            acc = work[-1]
            for c in reversed(work[:-1]):
                quo.append(acc)
                acc = c + acc * r
            if not acc.is_zero:
                break
            mult += 1
            work = list(reversed(quo))
            if not work:
                break
        if mult:
            out.append((r, mult))
    out.sort(key=lambda rm: rm[0])
    return out


def _lagrange_interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UniPoly:
    """Unique polynomial of degree < len(xs) through the given points
    (Newton's divided differences)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly()
    for i in range(n - 1, -1, -1):
        poly = poly * UniPoly([-xs[i], 1]) + UniPoly.const(coef[i])
    return poly


# ---------------------------------------------------------------------------
# polynomial text format  (used for closed-point labels and operator files)


def poly_to_string(p: UniPoly, var: str = "t") -> str:
    """Canonical text form, highest degree first, e.g. ``t^4+t^3+t^2+t+1``."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            tpow = var if k == 1 else f"{var}^{k}"
            body = tpow if mag == 1 else f"{mag}*{tpow}"
        parts.append(sign + body)
    return "".join(parts)


def poly_from_string(text: str, var: str = "t") -> UniPoly:
    """Parse the format produced by :func:`poly_to_string`.

    Accepts integer or ``p/q`` coefficients, ``*`` products, ``^`` powers,
    whitespace, and leading signs.  Raises ``OperatorSyntaxError`` on bad
    input.
    """
    from .errors import OperatorSyntaxError

    s = text.replace(" ", "")
    if not s:
        raise OperatorSyntaxError("empty polynomial", 0)
    i = 0
    total = UniPoly()
    n = len(s)
    while i < n:
        sign = 1
        while i < n and s[i] in "+-":
            if s[i] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise OperatorSyntaxError("dangling sign", i)
        coeff = Q(sign)
        power = 0
        saw_body = False
        while i < n and s[i] not in "+-":
            if s[i] == "*":
                i += 1
                continue
            if s[i].isdigit():
                j = i
                while j < n and s[j].isdigit():
                    j += 1
                numv = int(s[i:j])
                i = j
                if i < n and s[i] == "/":
                    i += 1
                    j = i
                    while j < n and s[j].isdigit():
                        j += 1
                    if j == i:
                        raise OperatorSyntaxError("expected denominator", i)
                    coeff *= Q(numv, int(s[i:j]))
                    i = j
                else:
                    coeff *= numv
                saw_body = True
            elif s.startswith(var, i):
                i += len(var)
                k = 1
                if i < n and s[i] == "^":
                    i += 1
                    j = i
                    while j < n and s[j].isdigit():
                        j += 1
                    if j == i:
                        raise OperatorSyntaxError("expected exponent", i)
                    k = int(s[i:j])
                    i = j
                power += k
                saw_body = True
            else:
                raise OperatorSyntaxError(f"unexpected character {s[i]!r}", i)
        if not saw_body:
            raise OperatorSyntaxError("empty term", i)
        total = total + UniPoly.const(coeff) * UniPoly.x(power)
    return total
