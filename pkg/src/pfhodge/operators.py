"""Fuchsian differential operators on P^1 over Q.

A :class:`DifferentialOperator` is monic of order n in either the d/dt form
    D^n + f_1(t) D^{n-1} + ... + f_n(t),   D = d/dt,
or the delta form (delta = t d/dt), with exact rational-function
coefficients.  This module provides:

* a recursive-descent parser for operator expressions (``D``/``del``, ``t``,
  rationals, ``+ - * / ^``, parentheses) with noncommutative products;
* conversion between the two forms (t^n D^n = delta(delta-1)...(delta-n+1));
* location and classification of singular points over Q, with conjugate
  algebraic points kept together as closed points (squarefree moduli) and
  split lazily only when a zero divisor forces it;
* indicial polynomials, characteristic exponents, and Riemann schemes;
* twists by rational functions, pullbacks along t -> s^k and along general
  rational maps, and a Frobenius power-series test that certifies apparent
  singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    ExponentConsistencyError,
    IrrationalExponentsError,
    IrregularSingularityError,
    OperatorSyntaxError,
    PFHodgeError,
)
from .exact import (
    Q,
    QuotientElement,
    RatFunc,
    SplitRequired,
    UniPoly,
    poly_gcd,
    poly_to_string,
    quotient_invert_strict,
    rational_roots,
    rational_roots_over_quotient,
    squarefree_part,
)

__all__ = [
    "Form",
    "DifferentialOperator",
    "PointId",
    "FiniteRational",
    "ClosedPoint",
    "Infinity",
    "INFINITY",
    "NamedPoint",
    "SingularityKind",
    "SchemeRow",
    "RiemannScheme",
    "FrobeniusResult",
    "parse_operator",
    "to_delta_form",
    "to_ddt_form",
    "singular_points",
    "indicial_polynomial",
    "characteristic_exponents",
    "riemann_scheme",
    "twist",
    "pullback_operator_monomial",
    "pullback_operator_rational",
    "frobenius_apparent_check",
]


class Form(Enum):
    """Which derivation the coefficient list refers to."""

    DDT = "ddt"
    DELTA = "delta"


# ---------------------------------------------------------------------------
# points of P^1


@dataclass(frozen=True)
class FiniteRational:
    """The point t = value."""

    value: Fraction

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class ClosedPoint:
    """A Galois orbit of conjugate points: the roots of a monic squarefree
    polynomial with no rational roots.  ``orbit size == modulus.degree``."""

    modulus: UniPoly

    def __str__(self) -> str:
        return poly_to_string(self.modulus)

    @property
    def orbit_size(self) -> int:
        return self.modulus.degree


@dataclass(frozen=True)
class Infinity:
    def __str__(self) -> str:
        return "inf"


INFINITY = Infinity()


@dataclass(frozen=True)
class NamedPoint:
    """A synthetic point used for pullback bookkeeping, where preimage
    coordinates are not rational data."""

    label: str

    def __str__(self) -> str:
        return self.label


PointId = Union[FiniteRational, ClosedPoint, Infinity, NamedPoint]


def point_sort_key(p: PointId):
    """Finite rational points ascending, then closed points, then infinity."""
    if isinstance(p, FiniteRational):
        return (0, p.value, "")
    if isinstance(p, ClosedPoint):
        return (1, Q(p.modulus.degree), poly_to_string(p.modulus))
    if isinstance(p, NamedPoint):
        return (2, Q(0), p.label)
    return (3, Q(0), "")


# ---------------------------------------------------------------------------
# the operator type


@dataclass(frozen=True)
class DifferentialOperator:
    """Monic operator of order n; ``coeffs[i]`` is the coefficient of the
    (n-1-i)-th power of the derivation, i.e. the tuple lists f_1 ... f_n."""

    order: int
    coeffs: tuple[RatFunc, ...]
    form: Form

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("operator order must be >= 1")
        if len(self.coeffs) != self.order:
            raise ValueError("need exactly n lower-order coefficients")

    def coefficient(self, i: int) -> RatFunc:
        """f_i (coefficient of the (n-i)-th derivation power), f_0 = 1."""
        if i == 0:
            return RatFunc.const(1)
        return self.coeffs[i - 1]

    def __str__(self) -> str:
        sym = "D" if self.form is Form.DDT else "del"
        n = self.order
        parts = [f"{sym}^{n}" if n > 1 else sym]
        for i, f in enumerate(self.coeffs, start=1):
            if f.is_zero:
                continue
            k = n - i
            head = "" if k == 0 else (f"*{sym}" if k == 1 else f"*{sym}^{k}")
            num = poly_to_string(f.num)
            den = poly_to_string(f.den)
            body = f"({num})" if f.is_polynomial else f"(({num})/({den}))"
            parts.append(f"+{body}{head}")
        return "".join(parts)


# ---------------------------------------------------------------------------
# operator algebra helper (coefficient lists with noncommutative product)


class _Op:
    """Operator written as sum coeffs[j] * X^j with RatFunc coefficients,
    where X is D (form DDT) or delta (form DELTA).

    ``form`` may be None while the expression is still scalar (no X yet).
    The commutation rule is X g = g X + der(g) with der(g) = g' resp. t g'.
    """

    __slots__ = ("coeffs", "form")

    def __init__(self, coeffs: Sequence[RatFunc], form: Optional[Form]):
        cs = list(coeffs)
        while cs and cs[-1].is_zero:
            cs.pop()
        self.coeffs = cs
        self.form = form

    @staticmethod
    def scalar(f: RatFunc) -> "_Op":
        return _Op([f], None)

    @staticmethod
    def symbol(form: Form) -> "_Op":
        return _Op([RatFunc.const(0), RatFunc.const(1)], form)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_scalar(self) -> bool:
        return len(self.coeffs) <= 1

    def _der(self, g: RatFunc) -> RatFunc:
        d = g.derivative()
        if self.form is Form.DELTA:
            return RatFunc.t() * d
        return d

    @staticmethod
    def _join(a: Optional[Form], b: Optional[Form], position: int) -> Optional[Form]:
        if a is None:
            return b
        if b is None or a is b:
            return a
        raise OperatorSyntaxError("cannot mix D and del in one operator", position)

    def add(self, other: "_Op", position: int = 0) -> "_Op":
        form = self._join(self.form, other.form, position)
        n = max(len(self.coeffs), len(other.coeffs))
        zero = RatFunc.const(0)

        def at(op: "_Op", j: int) -> RatFunc:
            return op.coeffs[j] if j < len(op.coeffs) else zero

        return _Op([at(self, j) + at(other, j) for j in range(n)], form)

    def neg(self) -> "_Op":
        return _Op([-c for c in self.coeffs], self.form)

    def mul(self, other: "_Op", position: int = 0) -> "_Op":
        form = self._join(self.form, other.form, position)
        out: dict[int, RatFunc] = {}
        work = _Op(self.coeffs, form)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero:
                    continue
                # X^i b = sum_m C(i, m) der^m(b) X^{i-m}
                dmb = b
                for m in range(i + 1):
                    c = a * Q(math.comb(i, m)) * dmb
                    k = i - m + j
                    out[k] = out.get(k, RatFunc.const(0)) + c
                    if m < i:
                        dmb = work._der(dmb)
        size = max(out) + 1 if out else 0
        return _Op([out.get(j, RatFunc.const(0)) for j in range(size)], form)

    def pow(self, k: int, position: int = 0) -> "_Op":
        if k < 0:
            if self.is_scalar:
                c = self.coeffs[0] if self.coeffs else RatFunc.const(0)
                return _Op.scalar(RatFunc.const(1) / c ** (-k))
            raise OperatorSyntaxError("negative power of an operator", position)
        result = _Op.scalar(RatFunc.const(1))
        for _ in range(k):
            result = result.mul(self, position)
        return result

    def to_operator(self) -> DifferentialOperator:
        if self.form is None or self.order < 1:
            raise OperatorSyntaxError("expression is not a differential operator", 0)
        lead = self.coeffs[-1]
        if lead.is_zero:
            raise OperatorSyntaxError("vanishing leading coefficient", 0)
        n = self.order
        fs = tuple((self.coeffs[n - i] / lead) for i in range(1, n + 1))
        return DifferentialOperator(order=n, coeffs=fs, form=self.form)


def _op_from_operator(L: DifferentialOperator) -> _Op:
    n = L.order
    cs = [L.coefficient(n - j) for j in range(n + 1)]
    return _Op(cs, L.form)


# ---------------------------------------------------------------------------
# parser


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, object, int]] = []
        self._scan()
        self.index = 0

    def _scan(self):
        s = self.text
        i = 0
        while i < len(s):
            c = s[i]
            if c.isspace():
                i += 1
                continue
            if c.isdigit():
                j = i
                while j < len(s) and s[j].isdigit():
                    j += 1
                self.tokens.append(("num", int(s[i:j]), i))
                i = j
                continue
            if s.startswith("del", i) and not (i + 3 < len(s) and s[i + 3].isalnum()):
                self.tokens.append(("del", None, i))
                i += 3
                continue
            if c == "D":
                self.tokens.append(("D", None, i))
                i += 1
                continue
            if c == "t":
                self.tokens.append(("t", None, i))
                i += 1
                continue
            if c in "+-*/^()":
                self.tokens.append((c, None, i))
                i += 1
                continue
            raise OperatorSyntaxError(f"unexpected character {c!r}", i)
        self.tokens.append(("end", None, len(s)))

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.index]

    def next(self) -> tuple[str, object, int]:
        tok = self.tokens[self.index]
        self.index += 1
        return tok


def parse_operator(text: str) -> DifferentialOperator:
    """Parse an operator expression.

    Grammar (usual precedence, left associative):
        expr   := term (('+' | '-') term)*
        term   := factor (('*' | '/') factor)*
        factor := '-' factor | atom ('^' integer)?
        atom   := integer | 't' | 'D' | 'del' | '(' expr ')'

    Products are genuine operator compositions (``del*t`` is ``t*del + t``),
    division is only allowed by scalar (order-zero) expressions, and ``D``
    and ``del`` cannot be mixed.  The result is normalized monic.
    """
    tz = _Tokenizer(text)
    op = _parse_expr(tz)
    kind, _, pos = tz.peek()
    if kind != "end":
        raise OperatorSyntaxError(f"unexpected token {kind!r}", pos)
    return op.to_operator()


def _parse_expr(tz: _Tokenizer) -> _Op:
    left = _parse_term(tz)
    while True:
        kind, _, pos = tz.peek()
        if kind == "+":
            tz.next()
            left = left.add(_parse_term(tz), pos)
        elif kind == "-":
            tz.next()
            left = left.add(_parse_term(tz).neg(), pos)
        else:
            return left


def _parse_term(tz: _Tokenizer) -> _Op:
    left = _parse_factor(tz)
    while True:
        kind, _, pos = tz.peek()
        if kind == "*":
            tz.next()
            left = left.mul(_parse_factor(tz), pos)
        elif kind == "/":
            tz.next()
            right = _parse_factor(tz)
            if not right.is_scalar:
                raise OperatorSyntaxError("division by a non-scalar operator", pos)
            c = right.coeffs[0] if right.coeffs else RatFunc.const(0)
            if c.is_zero:
                raise OperatorSyntaxError("division by zero", pos)
            left = left.mul(_Op.scalar(RatFunc.const(1) / c), pos)
        else:
            return left


def _parse_factor(tz: _Tokenizer) -> _Op:
    kind, _, pos = tz.peek()
    if kind == "-":
        tz.next()
        return _parse_factor(tz).neg()
    atom = _parse_atom(tz)
    kind, _, pos = tz.peek()
    if kind == "^":
        tz.next()
        k2, val, p2 = tz.next()
        if k2 != "num":
            raise OperatorSyntaxError("expected an integer exponent", p2)
        return atom.pow(int(val), p2)
    return atom


def _parse_atom(tz: _Tokenizer) -> _Op:
    kind, val, pos = tz.next()
    if kind == "num":
        return _Op.scalar(RatFunc.const(int(val)))
    if kind == "t":
        return _Op.scalar(RatFunc.t())
    if kind == "D":
        return _Op.symbol(Form.DDT)
    if kind == "del":
        return _Op.symbol(Form.DELTA)
    if kind == "(":
        inner = _parse_expr(tz)
        k2, _, p2 = tz.next()
        if k2 != ")":
            raise OperatorSyntaxError("expected ')'", p2)
        return inner
    raise OperatorSyntaxError(f"unexpected token {kind!r}", pos)


# ---------------------------------------------------------------------------
# form conversion


def _falling_factorial_poly(k: int) -> UniPoly:
    """T(T-1)...(T-k+1) as a polynomial in T."""
    out = UniPoly.one()
    for j in range(k):
        out = out * UniPoly([-j, 1])
    return out


def _stirling2(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def to_delta_form(L: DifferentialOperator) -> DifferentialOperator:
    """Rewrite a d/dt-form operator via t^k D^k = delta(delta-1)...(delta-k+1).

    Multiplying by t^n on the left gives t^n L = sum_i (t^i f_i) phi_{n-i}(delta)
    with phi_k the falling factorial; the delta^n coefficient is already 1.
    """
    if L.form is Form.DELTA:
        return L
    n = L.order
    t = RatFunc.t()
    acc = [RatFunc.const(0) for _ in range(n + 1)]
    for i in range(n + 1):
        fi = L.coefficient(i) * t ** i
        phi = _falling_factorial_poly(n - i)
        for j, c in enumerate(phi.coeffs):
            if c != 0:
                acc[j] = acc[j] + fi * c
    assert acc[n] == RatFunc.const(1)
    gs = tuple(acc[n - i] for i in range(1, n + 1))
    return DifferentialOperator(order=n, coeffs=gs, form=Form.DELTA)


def to_ddt_form(L: DifferentialOperator) -> DifferentialOperator:
    """Rewrite via delta^j = sum_m S(j, m) t^m D^m (Stirling numbers), then
    divide by the leading coefficient t^n."""
    if L.form is Form.DDT:
        return L
    n = L.order
    t = RatFunc.t()
    acc = [RatFunc.const(0) for _ in range(n + 1)]
    for j in range(n + 1):
        gj = L.coefficient(n - j)  # coefficient of delta^j
        if gj.is_zero:
            continue
        for m in range(j + 1):
            s = _stirling2(j, m)
            if s:
                acc[m] = acc[m] + gj * Q(s) * t ** m
    lead = acc[n]
    assert lead == t ** n
    fs = tuple(acc[n - i] / lead for i in range(1, n + 1))
    return DifferentialOperator(order=n, coeffs=fs, form=Form.DDT)


# ---------------------------------------------------------------------------
# the point at infinity: transport to s = 1/t


def transform_infinity(L: DifferentialOperator) -> DifferentialOperator:
    """The operator in the coordinate s = 1/t (d/dt = -s^2 d/ds), monic in
    d/ds; its behaviour at s = 0 is the behaviour of L at infinity."""
    Ld = to_ddt_form(L)
    n = Ld.order
    s2 = RatFunc(UniPoly([0, 0, -1]))  # -s^2

    # E^k as coefficient lists in D_s, E = -s^2 D_s
    powers: list[_Op] = [_Op.scalar(RatFunc.const(1))]
    E = _Op([RatFunc.const(0), s2], Form.DDT)
    for _ in range(n):
        powers.append(E.mul(powers[-1]))

    total = _Op.scalar(RatFunc.const(0))
    for i in range(n + 1):
        fi = Ld.coefficient(i).subst_recip()
        total = total.add(_Op.scalar(fi).mul(powers[n - i]))
    return total.to_operator()


# ---------------------------------------------------------------------------
# singular points


class SingularityKind(Enum):
    NONSINGULAR = "nonsingular"
    REGULAR = "regular singular"
    IRREGULAR = "irregular"


def _poly_valuation(p: UniPoly, q: UniPoly) -> tuple[int, UniPoly]:
    """Largest v with q^v | p, plus the cofactor p / q^v.

    Raises :class:`SplitRequired` when divisibility differs between the
    conjugate roots of q (detected through a partial gcd).
    """
    if p.is_zero:
        return (1 << 30), p  # effectively +infinity
    v = 0
    while True:
        quo, rem = p.divmod(q)
        if rem.is_zero:
            p = quo
            v += 1
            continue
        g = poly_gcd(rem, q)
        if 0 < g.degree < q.degree:
            raise SplitRequired(g, (q // g).monic())
        return v, p


def _local_orders_rational(L: DifferentialOperator, a: Fraction) -> list:
    Ld = to_ddt_form(L)
    return [Ld.coefficient(i).order_at(a) for i in range(1, Ld.order + 1)]


def _classify_orders(orders: Sequence, n: int) -> SingularityKind:
    if all(o >= 0 for o in orders):
        return SingularityKind.NONSINGULAR
    if all(o >= -(i + 1) for i, o in enumerate(orders)):
        return SingularityKind.REGULAR
    return SingularityKind.IRREGULAR


def _local_orders_closed(L: DifferentialOperator, q: UniPoly) -> list[int]:
    """Valuations of f_1..f_n along the closed point q (may raise SplitRequired)."""
    Ld = to_ddt_form(L)
    out = []
    for i in range(1, Ld.order + 1):
        f = Ld.coefficient(i)
        if f.is_zero:
            out.append(1 << 30)
            continue
        vn, _ = _poly_valuation(f.num, q)
        vd, _ = _poly_valuation(f.den, q)
        out.append(vn - vd)
    return out


def singular_points(L: DifferentialOperator) -> list[tuple[PointId, SingularityKind]]:
    """Candidate singular points (denominator zeros and infinity) classified.

    Conjugate irrational candidates are reported as closed points; a closed
    point is split automatically if its conjugates behave differently.
    """
    Ld = to_ddt_form(L)
    den_prod = UniPoly.one()
    for i in range(1, Ld.order + 1):
        d = Ld.coefficient(i).den
        if d.degree > 0:
            den_prod = den_prod * squarefree_part(d)
    sf = squarefree_part(den_prod)
    roots, cofactor = rational_roots(sf)

    out: list[tuple[PointId, SingularityKind]] = []
    for a, _m in roots:
        orders = _local_orders_rational(Ld, a)
        out.append((FiniteRational(a), _classify_orders(orders, Ld.order)))

    worklist = [cofactor] if cofactor.degree >= 1 else []
    while worklist:
        q = worklist.pop()
        try:
            orders = _local_orders_closed(Ld, q)
        except SplitRequired as split:
            worklist.extend(split.factors)
            continue
        out.append((ClosedPoint(q), _classify_orders(orders, Ld.order)))

    inf_op = transform_infinity(Ld)
    orders = _local_orders_rational(inf_op, Q(0))
    out.append((INFINITY, _classify_orders(orders, inf_op.order)))
    out.sort(key=lambda pc: point_sort_key(pc[0]))
    return out


# ---------------------------------------------------------------------------
# indicial polynomials and exponents


def _indicial_rational(L: DifferentialOperator, a: Fraction) -> UniPoly:
    """Indicial polynomial at a finite rational point:
    sum_i v_i prod_{j<n-i} (T - j) with v_i = lim (t-a)^i f_i."""
    Ld = to_ddt_form(L)
    n = Ld.order
    lin = RatFunc(UniPoly([-a, 1]))
    out = UniPoly.zero()
    for i in range(n + 1):
        g = Ld.coefficient(i) * lin ** i
        if g.order_at(a) < 0:
            raise IrregularSingularityError(
                f"irregular singularity at t = {a}: no indicial polynomial"
            )
        v = g(a) if not g.is_zero else Q(0)
        if v != 0:
            out = out + UniPoly.const(v) * _falling_factorial_poly(n - i)
    return out


def _indicial_closed(L: DifferentialOperator, q: UniPoly) -> list[QuotientElement]:
    """Indicial polynomial coefficients over Q[t]/(q); raises SplitRequired
    whenever the conjugates disagree."""
    Ld = to_ddt_form(L)
    n = Ld.order
    dq = q.derivative()
    acc = [QuotientElement(UniPoly.zero(), q) for _ in range(n + 1)]
    for i in range(n + 1):
        f = Ld.coefficient(i)
        if f.is_zero:
            continue
        vn, num1 = _poly_valuation(f.num, q)
        vd, den1 = _poly_valuation(f.den, q)
        ordv = vn - vd
        if ordv > -i:
            if ordv < -i:
                raise IrregularSingularityError(
                    "irregular singularity at a closed point"
                )
            continue  # ordv > -i means the limit of (t-a)^i f_i is 0... (see below)
        if ordv < -i:
            raise IrregularSingularityError("irregular singularity at a closed point")
        # ordv == -i: v_i = num1 / (den1 * q'^i) evaluated in the quotient ring
        v = QuotientElement(num1, q)
        v = v * quotient_invert_strict(QuotientElement(den1, q))
        if i:
            v = v * quotient_invert_strict(QuotientElement(dq, q)) ** i
        phi = _falling_factorial_poly(n - i)
        for j, c in enumerate(phi.coeffs):
            if c != 0:
                acc[j] = acc[j] + v * QuotientElement(UniPoly.const(c), q)
    return acc


def indicial_polynomial(L: DifferentialOperator, point: PointId):
    """Indicial polynomial at a point.

    Returns a :class:`UniPoly` at rational points and infinity, and a list of
    :class:`QuotientElement` coefficients (lowest degree first) at closed
    points.  Raises for irregular points; closed points may raise
    :class:`SplitRequired`.
    """
    if isinstance(point, FiniteRational):
        return _indicial_rational(L, point.value)
    if isinstance(point, Infinity):
        return _indicial_rational(transform_infinity(L), Q(0))
    if isinstance(point, ClosedPoint):
        return _indicial_closed(L, point.modulus)
    raise TypeError(f"cannot compute an indicial polynomial at {point}")


def characteristic_exponents(L: DifferentialOperator, point: PointId) -> tuple[Fraction, ...]:
    """The n roots of the indicial polynomial, ascending, with multiplicity.

    Raises :class:`IrrationalExponentsError` when roots are missing over Q.
    """
    ind = indicial_polynomial(L, point)
    n = L.order
    if isinstance(ind, UniPoly):
        roots, cofactor = rational_roots(ind)
        found = sum(m for _, m in roots)
        if found < n:
            raise IrrationalExponentsError(
                f"indicial polynomial at {point} has irrational roots",
                cofactor=cofactor,
            )
    else:
        roots = rational_roots_over_quotient(ind)
        found = sum(m for _, m in roots)
        if found < n:
            raise IrrationalExponentsError(
                f"indicial polynomial at {point} has non-rational roots "
                "over the closed point"
            )
    out: list[Fraction] = []
    for r, m in roots:
        out.extend([r] * m)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Riemann schemes


@dataclass(frozen=True)
class SchemeRow:
    point: PointId
    orbit_size: int
    exponents: tuple[Fraction, ...]


@dataclass(frozen=True)
class RiemannScheme:
    order: int
    rows: tuple[SchemeRow, ...]

    def total_points(self) -> int:
        return sum(r.orbit_size for r in self.rows)

    def merged(self) -> "RiemannScheme":
        """Combine rows with identical exponent tuples whose points are
        finite (rational or closed) into one display row; the merged point is
        the closed point with the product modulus."""
        groups: dict[tuple, list[SchemeRow]] = {}
        order: list[tuple] = []
        for row in self.rows:
            if isinstance(row.point, (FiniteRational, ClosedPoint)):
                key = ("fin", row.exponents)
            else:
                key = (str(row.point), row.exponents)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(row)
        rows = []
        for key in order:
            rs = groups[key]
            if len(rs) == 1:
                rows.append(rs[0])
                continue
            poly = UniPoly.one()
            for r in rs:
                if isinstance(r.point, FiniteRational):
                    poly = poly * UniPoly([-r.point.value, 1])
                else:
                    poly = poly * r.point.modulus
            rows.append(
                SchemeRow(
                    point=ClosedPoint(poly),
                    orbit_size=sum(r.orbit_size for r in rs),
                    exponents=rs[0].exponents,
                )
            )
        return RiemannScheme(order=self.order, rows=tuple(rows))


def riemann_scheme(L: DifferentialOperator) -> RiemannScheme:
    """Rows (point, orbit size, ascending exponents) for every singular point.

    Closed points are split as needed so every row has well-defined exponents.
    Raises on irregular points and checks the genus-zero Fuchs relation as a
    self-consistency gate.
    """
    n = L.order
    rows: list[SchemeRow] = []
    for point, kind in singular_points(L):
        if kind is SingularityKind.NONSINGULAR:
            continue
        if kind is SingularityKind.IRREGULAR:
            raise IrregularSingularityError(f"irregular singular point at {point}")
        if isinstance(point, ClosedPoint):
            worklist = [point.modulus]
            while worklist:
                q = worklist.pop()
                try:
                    exps = characteristic_exponents(L, ClosedPoint(q))
                except SplitRequired as split:
                    worklist.extend(split.factors)
                    continue
                rows.append(SchemeRow(ClosedPoint(q), q.degree, exps))
        else:
            exps = characteristic_exponents(L, point)
            rows.append(SchemeRow(point, 1, exps))
    rows.sort(key=lambda r: point_sort_key(r.point))
    scheme = RiemannScheme(order=n, rows=tuple(rows))
    _check_fuchs_relation(scheme)
    return scheme


def _check_fuchs_relation(scheme: RiemannScheme) -> None:
    """Genus-zero Fuchs relation: the orbit-weighted sum over scheme rows of
    (sum of exponents - n(n-1)/2) must equal -n(n-1)."""
    n = scheme.order
    base = Q(n * (n - 1), 2)
    total = sum(
        (sum(r.exponents, Q(0)) - base) * r.orbit_size for r in scheme.rows
    )
    if total != -n * (n - 1):
        raise ExponentConsistencyError(
            f"Fuchs relation violated: got {total}, expected {-n * (n - 1)}"
        )


# ---------------------------------------------------------------------------
# twists and pullbacks


def twist(L: DifferentialOperator, h: RatFunc) -> DifferentialOperator:
    """The operator with solution sheaf h * (solutions of L):
    replace D by D - h'/h and renormalize.  Exponents at each point shift by
    the vanishing order of h; exponent differences are untouched."""
    if h.is_zero:
        raise ZeroDivisionError("cannot twist by 0")
    Ld = to_ddt_form(L)
    n = Ld.order
    w = h.log_derivative()
    base = _Op([-w, RatFunc.const(1)], Form.DDT)  # D - h'/h
    powers = [_Op.scalar(RatFunc.const(1))]
    for _ in range(n):
        powers.append(base.mul(powers[-1]))
    total = _Op.scalar(RatFunc.const(0))
    for i in range(n + 1):
        total = total.add(_Op.scalar(Ld.coefficient(i)).mul(powers[n - i]))
    out = total.to_operator()
    return out if L.form is Form.DDT else to_delta_form(out)


def pullback_operator_monomial(L: DifferentialOperator, k: int) -> DifferentialOperator:
    """Pullback along t = s^k: in delta form, g_i(t) becomes k^i g_i(s^k).

    Exponents at 0 and infinity multiply by k; new ramification points do not
    occur (the map is ramified only over 0 and infinity).
    """
    if k < 1:
        raise ValueError("cover degree must be >= 1")
    Lg = to_delta_form(L)
    n = Lg.order
    sk = UniPoly.x(k)
    gs = tuple(
        Lg.coefficient(i).compose_poly(sk) * Q(k) ** i for i in range(1, n + 1)
    )
    out = DifferentialOperator(order=n, coeffs=gs, form=Form.DELTA)
    return out if L.form is Form.DELTA else to_ddt_form(out)


def pullback_operator_rational(L: DifferentialOperator, r: RatFunc) -> DifferentialOperator:
    """Pullback along an arbitrary rational map t = r(s):
    D_t becomes (1/r') D_s and coefficients compose with r."""
    dr = r.derivative()
    if dr.is_zero:
        raise ValueError("pullback along a constant map")
    Ld = to_ddt_form(L)
    n = Ld.order
    E = _Op([RatFunc.const(0), RatFunc.const(1) / dr], Form.DDT)
    powers = [_Op.scalar(RatFunc.const(1))]
    for _ in range(n):
        powers.append(E.mul(powers[-1]))
    total = _Op.scalar(RatFunc.const(0))
    for i in range(n + 1):
        fi = Ld.coefficient(i).compose(r)
        total = total.add(_Op.scalar(fi).mul(powers[n - i]))
    out = total.to_operator()
    return out if L.form is Form.DDT else to_delta_form(out)


# ---------------------------------------------------------------------------
# Frobenius test for apparent singularities


class FrobeniusResult(Enum):
    APPARENT = "apparent"
    HAS_LOG = "has_log"
    INCONCLUSIVE = "inconclusive"


def _series_of_ratfunc(f: RatFunc, order: int) -> list[Fraction]:
    """Taylor coefficients of f at 0 through degree ``order`` (f regular at 0)."""
    if f.den(Q(0)) == 0:
        raise IrregularSingularityError("function has a pole at the expansion point")
    num = [f.num.coeff(i) for i in range(order + 1)]
    den = [f.den.coeff(i) for i in range(order + 1)]
    inv0 = Q(1) / den[0]
    out: list[Fraction] = []
    for i in range(order + 1):
        acc = num[i]
        for j in range(i):
            acc -= out[j] * den[i - j]
        out.append(acc * inv0)
    return out


def frobenius_apparent_check(
    L: DifferentialOperator,
    point: Union[FiniteRational, Fraction, int],
    truncation_order: Optional[int] = None,
) -> FrobeniusResult:
    """Power-series test at a finite rational point with integer exponents.

    Builds the Frobenius recursion for each characteristic exponent; at each
    resonance (an exponent plus a positive integer hitting another exponent)
    a nonzero obstruction forces a logarithm.  If every obstruction vanishes
    the local monodromy is trivial and the point is apparent (or nonsingular).

    Repeated integer exponents force a logarithm immediately.  Returns
    INCONCLUSIVE only when ``truncation_order`` is too small to reach the
    largest resonance (exponent spread); the default is spread + n + 4.
    """
    a = point.value if isinstance(point, FiniteRational) else Q(point)
    Ld = to_ddt_form(L)
    n = Ld.order
    shifted = DifferentialOperator(
        order=n,
        coeffs=tuple(Ld.coefficient(i).shift(a) for i in range(1, n + 1)),
        form=Form.DDT,
    )
    exps = characteristic_exponents(shifted, FiniteRational(Q(0)))
    if any(e.denominator != 1 for e in exps):
        raise PFHodgeError(
            f"point t = {a} has non-integer exponents; not a candidate "
            "apparent singularity"
        )
    ints = [int(e) for e in exps]
    if len(set(ints)) != len(ints):
        return FrobeniusResult.HAS_LOG
    spread = max(ints) - min(ints)
    if truncation_order is None:
        truncation_order = spread + n + 4
    if truncation_order < spread:
        return FrobeniusResult.INCONCLUSIVE

    Lg = to_delta_form(shifted)
    series = [[Q(1) if r == 0 else Q(0) for r in range(spread + 1)]]  # g_0 = 1
    for i in range(1, n + 1):
        series.append(_series_of_ratfunc(Lg.coefficient(i), spread))

    def indicial_at_offset(r: int) -> UniPoly:
        """I_r(T) = sum_i g_{i,r} T^{n-i}."""
        out = UniPoly.zero()
        for i in range(n + 1):
            c = series[i][r]
            if c != 0:
                out = out + UniPoly.const(c) * UniPoly.x(n - i)
        return out

    I = [indicial_at_offset(r) for r in range(spread + 1)]
    root_set = set(ints)
    for mu in ints:
        c = {0: Q(1)}
        for k in range(1, max(ints) - mu + 1):
            rhs = -sum(
                (c[m] * I[k - m](Q(mu + m)) for m in range(k) if k - m <= spread),
                Q(0),
            )
            head = I[0](Q(mu + k))
            if head != 0:
                c[k] = rhs / head
            else:
                assert mu + k in root_set
                if rhs != 0:
                    return FrobeniusResult.HAS_LOG
                c[k] = Q(0)
    return FrobeniusResult.APPARENT
