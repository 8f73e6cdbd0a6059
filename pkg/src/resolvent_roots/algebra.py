"""Exact polynomial algebra over the rationals.

Rationals are :class:`fractions.Fraction`.  Two dense polynomial types are
provided:

* :class:`UniPoly` -- one variable, rational coefficients, ascending order.
  Used both for polynomials in ``s`` and for polynomials in ``x`` whose
  coefficients do not involve ``s``.
* :class:`XSPoly` -- polynomial in ``x`` whose coefficients are ``UniPoly``
  in ``s``.

Both are immutable values.  The zero polynomial has no stored coefficients
and degree -1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import DegenerateNullspaceError, ZeroNullspaceError

__all__ = [
    "Rational",
    "UniPoly",
    "XSPoly",
    "PolyMatrix",
    "rat_arith",
    "format_rational",
    "parse_rational",
    "poly_arith",
    "poly_derivative",
    "poly_gcd",
    "reduce_mod",
    "nullspace_poly_matrix",
    "normalize_poly_vector",
]

Rational = Fraction


def rat_arith(a, b, kind):
    a, b = Fraction(a), Fraction(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown operation {kind!r}")


def format_rational(q) -> str:
    """Render ``q`` as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"``, ``"p/q"`` or a finite decimal literal exactly.

    Raises ``ValueError`` for anything else.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
    return value


class _DensePoly:
    """Shared dense-coefficient arithmetic; subclasses fix the coefficient ring."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [self._coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def _coerce(c):
        raise NotImplementedError

    @classmethod
    def _zero_coeff(cls):
        return cls._coerce(0)

    @classmethod
    def monomial(cls, degree, coeff=1):
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return self._zero_coeff()
        return self.coeffs[-1]

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self._zero_coeff()

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, type(self)):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, _RationalABC)):
            return self.coeffs == type(self)([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs))

    def __neg__(self):
        return type(self)(-c for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, type(self)):
            other = type(self)([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return type(self)(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, type(self)):
            other = type(self)([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, type(self)):
            return type(self)(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return type(self)()
        out = [self._zero_coeff()] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] = out[i + j] + ca * cb
        return type(self)(out)

    def __rmul__(self, other):
        return type(self)(other * c for c in self.coeffs)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = type(self)([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self):
        return type(self)(i * c for i, c in enumerate(self.coeffs) if i)

    def shift_up(self, k: int):
        """Multiply by ``var**k``."""
        if not self.coeffs:
            return self
        return type(self)([0] * k + list(self.coeffs))


class UniPoly(_DensePoly):
    """Dense univariate polynomial with rational coefficients."""

    __slots__ = ()

    @staticmethod
    def _coerce(c):
        if isinstance(c, Fraction):
            return c
        return Fraction(c)

    def __repr__(self):
        return f"UniPoly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __call__(self, value):
        """Horner evaluation; works for Fraction, int, float and complex."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def eval_float(self, value):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * value + float(c)
        return acc

    def divmod(self, other: UniPoly):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lc = 1 / other.lc
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if not c:
                continue
            f = c * inv_lc
            quot[k - dq] = f
            for j, oc in enumerate(other.coeffs):
                rem[k - dq + j] -= f * oc
        return UniPoly(quot), UniPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: UniPoly) -> UniPoly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{self!r} is not divisible by {other!r}")
        return q

    def monic(self) -> UniPoly:
        if not self:
            return self
        return self * (1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c with ``self / c`` integral and primitive."""
        return rational_content(self.coeffs)

    def primitive(self) -> UniPoly:
        if not self:
            return self
        return self * (1 / self.content())

    def lowest_coeff(self) -> Fraction:
        """First nonzero coefficient from the bottom (zero for the zero poly)."""
        for c in self.coeffs:
            if c:
                return c
        return Fraction(0)

    def to_strings(self):
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_strings(cls, items):
        return cls(parse_rational(str(t)) for t in items)


def rational_content(values) -> Fraction:
    nums = 0
    dens = 1
    for v in values:
        v = Fraction(v)
        if v:
            nums = math.gcd(nums, v.numerator)
            dens = math.lcm(dens, v.denominator)
    if nums == 0:
        return Fraction(1)
    return Fraction(nums, dens)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over the rationals (zero only when both inputs are zero)."""
    a, b = a.monic(), b.monic()
    while b:
        a, b = b, (a % b).monic()
    return a


class XSPoly(_DensePoly):
    """Polynomial in x with ``UniPoly`` coefficients in s (ascending in x)."""

    __slots__ = ()

    @staticmethod
    def _coerce(c):
        if isinstance(c, UniPoly):
            return c
        if isinstance(c, (list, tuple)):
            return UniPoly(c)
        return UniPoly([c])

    def __repr__(self):
        return f"XSPoly({[list(map(format_rational, c.coeffs)) for c in self.coeffs]})"

    @classmethod
    def from_x_poly(cls, poly: UniPoly) -> XSPoly:
        return cls(UniPoly([c]) for c in poly.coeffs)

    def to_x_poly(self) -> UniPoly:
        """Return the same polynomial as a ``UniPoly`` in x; requires no s-dependence."""
        if any(c.degree > 0 for c in self.coeffs):
            raise ValueError("polynomial depends on s")
        return UniPoly(c[0] for c in self.coeffs)

    def diff(self, var: str = "x") -> XSPoly:
        if var == "x":
            return self.derivative()
        if var == "s":
            return XSPoly(c.derivative() for c in self.coeffs)
        raise ValueError(f"unknown variable {var!r}")

    def at_s(self, value) -> UniPoly:
        """Substitute s = value (rational) and return a polynomial in x."""
        return UniPoly(c(Fraction(value)) for c in self.coeffs)

    @property
    def s_degree(self) -> int:
        return max((c.degree for c in self.coeffs), default=-1)


def poly_arith(p, q, kind):
    if type(p) is not type(q):
        raise TypeError("operands must be polynomials over the same variables")
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    raise ValueError(f"unknown operation {kind!r}")


def poly_derivative(p, var="x"):
    if isinstance(p, XSPoly):
        return p.diff(var)
    # a UniPoly carries one variable; differentiating in the other gives 0
    return p.derivative() if var in ("x", "s") else UniPoly()


def reduce_mod(q: XSPoly, p: XSPoly) -> XSPoly:
    """Remainder of ``q`` modulo ``p`` in x, keeping s symbolic.

    ``p`` must have positive x-degree ``n`` and an s-free leading coefficient;
    the result has x-degree at most ``n - 1``.
    """
    n = p.degree
    if n < 1:
        raise ValueError("modulus must have positive degree in x")
    lead = p.lc
    if not lead:
        raise ValueError("modulus has zero leading coefficient")
    if lead.degree != 0:
        raise ValueError("modulus leading coefficient must not depend on s")
    inv = 1 / lead[0]
    tail = [c * inv for c in p.coeffs[:n]]
    rem = list(q.coeffs)
    for k in range(len(rem) - 1, n - 1, -1):
        c = rem[k]
        if not c:
            continue
        # x^k = x^(k-n) * x^n  and  x^n = -(tail) / 1
        for j, t in enumerate(tail):
            if t:
                rem[k - n + j] = rem[k - n + j] - c * t
    return XSPoly(rem[:n])


class PolyMatrix:
    """Rectangular matrix of ``UniPoly`` entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(e if isinstance(e, UniPoly) else _as_unipoly(e) for e in r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be positive")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix rows have different lengths")
        self.rows = rows

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"PolyMatrix({[list(r) for r in self.rows]!r})"

    def apply(self, vector):
        out = []
        for row in self.rows:
            acc = UniPoly()
            for a, v in zip(row, vector):
                acc = acc + a * v
            out.append(acc)
        return out


def _as_unipoly(e):
    if isinstance(e, (list, tuple)):
        return UniPoly(e)
    return UniPoly([e])


def _strip_row(row):
    """Divide a row by the gcd of its entries and make it integer-primitive."""
    g = UniPoly()
    for e in row:
        if e:
            g = poly_gcd(g, e)
            if g.degree == 0:
                break
    if not g:
        return row
    if g.degree > 0:
        row = [e.exact_div(g) for e in row]
    c = rational_content(c for e in row for c in e.coeffs)
    if c != 1:
        inv = 1 / c
        row = [e * inv for e in row]
    return row


def normalize_poly_vector(vector):
    """Canonical representative of a polynomial vector up to rational-function scale.

    Divides out the common polynomial gcd and rational content, then fixes the
    sign so the lowest nonzero coefficient of the first nonzero entry is
    positive.
    """
    vector = _strip_row(list(vector))
    first = next((e for e in vector if e), None)
    if first is not None and first.lowest_coeff() < 0:
        vector = [-e for e in vector]
    return vector


def nullspace_poly_matrix(M: PolyMatrix):
    """Polynomial generator of the one-dimensional right nullspace of ``M``.

    Fraction-free Gauss-Jordan elimination over Q[s]: every update is
    ``(piv * a - f * b) / prev_piv`` with an exact division, so entries stay
    polynomial (they are minors of ``M``) and every pivot row ends with the
    same diagonal entry.
    """
    nrows, ncols = M.shape
    rows = [list(r) for r in M.rows]
    pivot_cols = []
    prev = UniPoly([1])
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        candidates = [i for i in range(r, nrows) if rows[i][c]]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: (rows[i][c].degree, i))
        rows[r], rows[best] = rows[best], rows[r]
        piv_row = rows[r]
        piv = piv_row[c]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            rows[i] = [(piv * a - f * b).exact_div(prev) for a, b in zip(rows[i], piv_row)]
        pivot_cols.append(c)
        prev = piv
        r += 1

    free = [c for c in range(ncols) if c not in pivot_cols]
    if not free:
        raise ZeroNullspaceError("nullspace is zero-dimensional (matrix has full column rank)")
    if len(free) > 1:
        raise DegenerateNullspaceError(
            f"nullspace has dimension {len(free)}; expected 1", dimension=len(free)
        )
    f = free[0]
    # row k now reads  prev * v[c_k] + rows[k][f] * v[f] = 0
    v = [UniPoly()] * ncols
    v[f] = prev
    for k, c in enumerate(pivot_cols):
        v[c] = -rows[k][f]
    return normalize_poly_vector(v)
