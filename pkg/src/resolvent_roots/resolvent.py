"""Differential resolvent of the root function x(s) of p(x, s) = 0.

Here ``p(x, s) = a_n x^n + ... + a_1 x + s`` with fixed rational a_i.  Every
root branch x(s) satisfies a linear ODE in s of order n - 1 with polynomial
coefficients; after the shift ``x = y - a_{n-1} / (n a_n)`` it becomes
homogeneous in y.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    PolyMatrix,
    UniPoly,
    XSPoly,
    format_rational,
    normalize_poly_vector,
    nullspace_poly_matrix,
    reduce_mod,
)
from .errors import (
    DegenerateNullspaceError,
    HomogenizationError,
    InputError,
    ZeroNullspaceError,
)

__all__ = [
    "ImplicitDerivative",
    "ResolventODE",
    "root_polynomial",
    "implicit_derivatives",
    "assemble_system",
    "solve_resolvent",
    "shift_homogenize",
]


def root_polynomial(coeffs) -> XSPoly:
    """Build p(x, s) from the descending list ``[a_n, ..., a_1]``."""
    cs = [Fraction(c) for c in coeffs]
    if not cs or cs[0] == 0:
        raise InputError("leading coefficient must be nonzero")
    # ascending in x: constant term is s itself
    return XSPoly([UniPoly([0, 1])] + [UniPoly([c]) for c in reversed(cs)])


def x_coefficients(p: XSPoly):
    """Ascending rational coefficients ``[0, a_1, ..., a_n]`` of p(x, 0)."""
    return [Fraction(0)] + [c[0] for c in p.coeffs[1:]]


@dataclass(frozen=True)
class ImplicitDerivative:
    """``d^i x / ds^i = numerator(x) / p'(x) ** (2i - 1)``."""

    order: int
    numerator: UniPoly

    @property
    def denominator_exponent(self) -> int:
        return 2 * self.order - 1

    def value_at(self, x, dp_at_x):
        return self.numerator(x) / dp_at_x ** self.denominator_exponent


@dataclass(frozen=True)
class ResolventODE:
    """``P_r y^(r) + ... + P_0 y = inhomog`` with ``coeffs = [P_r, ..., P_0]``."""

    order: int
    coeffs: tuple
    inhomog: UniPoly
    shift: Fraction = Fraction(0)

    @property
    def homogeneous(self) -> bool:
        return not self.inhomog

    def to_json(self):
        return {
            "order": self.order,
            "shift": format_rational(self.shift),
            "coefficients_s": [_json_coeffs(c) for c in self.coeffs],
            "homogeneous": self.homogeneous,
        }


def _json_coeffs(poly):
    return [c.numerator if c.denominator == 1 else format_rational(c) for c in poly.coeffs]


def _x_part_derivatives(p: XSPoly):
    if p.degree < 2:
        raise InputError(f"degree must be at least 2 (got {p.degree})")
    dp = p.diff("x").to_x_poly()
    return dp, dp.derivative()


def implicit_derivatives(p: XSPoly, k_max: int):
    """Numerators N_1 .. N_k_max of the successive s-derivatives of a root branch.

    Uses N_1 = -1 and N_{i+1} = -(N_i' p' - (2i - 1) N_i p'').
    """
    dp, ddp = _x_part_derivatives(p)
    if k_max < 1:
        raise ValueError("k_max must be positive")
    out = [ImplicitDerivative(1, UniPoly([-1]))]
    n_i = out[0].numerator
    for i in range(1, k_max):
        n_i = -(n_i.derivative() * dp - (2 * i - 1) * n_i * ddp)
        out.append(ImplicitDerivative(i + 1, n_i))
    return out


def _mulmod(a: XSPoly, b: XSPoly, p: XSPoly) -> XSPoly:
    return reduce_mod(a * b, p)


def assemble_system(p: XSPoly, derivs) -> PolyMatrix:
    """Linear system in (m_1, ..., m_{n+1}) whose solutions give the resolvent.

    Row k (top row first) holds the coefficient of x^(n-1-k) after clearing
    the p'(x) denominators and reducing modulo p.
    """
    n = p.degree
    dp, _ = _x_part_derivatives(p)
    if len(derivs) != n - 1:
        raise ValueError(f"need {n - 1} implicit derivatives, got {len(derivs)}")
    dp_xs = XSPoly.from_x_poly(dp)

    # p'^k mod p for k = 0 .. 2n - 3
    top = 2 * n - 3
    powers = [XSPoly([1])]
    for _ in range(top):
        powers.append(_mulmod(powers[-1], dp_xs, p))

    columns = []
    # m_j multiplies x^(n-j) for j = 1 .. n-1
    for j in range(1, n):
        d = derivs[n - j - 1]
        num = reduce_mod(XSPoly.from_x_poly(d.numerator), p)
        columns.append(_mulmod(num, powers[top - d.denominator_exponent], p))
    columns.append(_mulmod(XSPoly([0, 1]), powers[top], p))
    columns.append(powers[top])

    rows = [[col[k] for col in columns] for k in range(n - 1, -1, -1)]
    return PolyMatrix(rows)


def solve_resolvent(p: XSPoly) -> ResolventODE:
    """Order n-1 resolvent ``m_1 x^(n-1) + ... + m_n x + m_{n+1} = 0``."""
    n = p.degree
    derivs = implicit_derivatives(p, max(n - 1, 1))
    system = assemble_system(p, derivs)
    try:
        m = nullspace_poly_matrix(system)
    except ZeroNullspaceError as exc:
        raise ZeroNullspaceError(f"no resolvent of order {n - 1} found: {exc}") from exc
    except DegenerateNullspaceError as exc:
        raise DegenerateNullspaceError(
            f"degenerate polynomial: {exc}", dimension=exc.dimension
        ) from exc
    if not m[0]:
        raise DegenerateNullspaceError(
            "degenerate polynomial: leading resolvent coefficient vanishes", dimension=1
        )
    return ResolventODE(order=n - 1, coeffs=tuple(m[:n]), inhomog=-m[n], shift=Fraction(0))


def tschirnhaus_shift(p: XSPoly) -> Fraction:
    n = p.degree
    return p[n - 1][0] / (n * p[n][0])


def shift_homogenize(ode: ResolventODE, p: XSPoly) -> ResolventODE:
    """Rewrite the ODE for ``y = x + a_{n-1}/(n a_n)``.

    Only the zeroth-order term interacts with a constant shift, so the
    right-hand side becomes ``inhomog + P_0 * shift``, which must vanish.
    """
    shift = tschirnhaus_shift(p)
    residual = ode.inhomog + ode.coeffs[-1] * shift
    if residual:
        raise HomogenizationError(
            "homogenization failed: constant term after shift is "
            f"{residual.to_strings()} (ascending in s), not zero"
        )
    coeffs = normalize_poly_vector(ode.coeffs)
    return ResolventODE(order=ode.order, coeffs=tuple(coeffs), inhomog=UniPoly(), shift=shift)
