"""Truncated series over the effective-class semigroup.

Three layers, each exact:

* ``NovikovScalar`` -- a finite QQ-linear combination of semigroup symbols
  ``q^beta`` keyed by full curve-class vectors, truncated by the positive
  functional ``ell`` at a fixed cutoff.  Units are the scalars with nonzero
  ``q^0`` part; their inverses come from a finite Neumann series because every
  nonzero effective class has ``ell >= 1``.
* ``HLaurent`` -- a finitely supported Laurent polynomial in the formal
  variable hbar whose coefficients are cohomology classes.  Nilpotency of
  positive-degree classes keeps every expansion finite; nothing is ever
  windowed or silently dropped.
* ``NovikovSeries`` -- ``q^beta``-indexed families of HLaurent coefficients,
  with Cauchy products truncated at the cutoff.
"""

from dataclasses import dataclass
from fractions import Fraction


class CutoffMismatch(ValueError):
    """Binary operation between series with different truncation data."""


class NotAUnit(ValueError):
    """Inversion of an element of the maximal ideal."""


class NotNilpotent(ValueError):
    """Geometric expansion of a class with nonzero scalar part."""


@dataclass(frozen=True)
class NovikovContext:
    """Shared truncation data: ray count, positive functional, cutoff."""

    n_rays: int
    ell: tuple
    cutoff: int

    def ell_of(self, beta):
        return sum(a * b for a, b in zip(self.ell, beta))

    @property
    def zero_class(self):
        return (0,) * self.n_rays

    def compatible(self, other):
        return self.n_rays == other.n_rays and self.ell == other.ell \
            and self.cutoff == other.cutoff


def _check_ctx(a, b):
    if not a.ctx.compatible(b.ctx):
        raise CutoffMismatch(f"{a.ctx} vs {b.ctx}")


class NovikovScalar:
    """Exact element of the truncated semigroup algebra QQ[[NE]]."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        clean = {}
        for beta, c in (terms or {}).items():
            c = Fraction(c)
            if c and ctx.ell_of(beta) <= ctx.cutoff:
                clean[tuple(beta)] = c
        self.terms = clean

    @classmethod
    def unit(cls, ctx, c=1):
        return cls(ctx, {ctx.zero_class: Fraction(c)})

    @classmethod
    def monomial(cls, ctx, beta, c=1):
        return cls(ctx, {tuple(beta): Fraction(c)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, NovikovScalar) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        _check_ctx(self, other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            s = out.get(b, Fraction(0)) + c
            if s:
                out[b] = s
            else:
                out.pop(b, None)
        return NovikovScalar(self.ctx, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return NovikovScalar(self.ctx, {b: -c for b, c in self.terms.items()})

    def __mul__(self, other):
        _check_ctx(self, other)
        ctx = self.ctx
        out = {}
        for b1, c1 in self.terms.items():
            for b2, c2 in other.terms.items():
                b = tuple(x + y for x, y in zip(b1, b2))
                if ctx.ell_of(b) > ctx.cutoff:
                    continue
                s = out.get(b, Fraction(0)) + c1 * c2
                if s:
                    out[b] = s
                else:
                    out.pop(b, None)
        return NovikovScalar(ctx, out)

    def scale(self, c):
        c = Fraction(c)
        return NovikovScalar(self.ctx, {b: x * c for b, x in self.terms.items()})

    def q0(self):
        """Coefficient of q^0."""
        return self.terms.get(self.ctx.zero_class, Fraction(0))

    def is_unit(self):
        return self.q0() != 0

    def inverse(self):
        """Exact inverse of a unit, by finite Neumann iteration over ell."""
        c0 = self.q0()
        if c0 == 0:
            raise NotAUnit("scalar has no q^0 part")
        ctx = self.ctx
        rest = NovikovScalar(
            ctx, {b: c for b, c in self.terms.items() if b != ctx.zero_class})
        n = rest.scale(Fraction(1) / c0)
        acc = NovikovScalar.unit(ctx)
        power = NovikovScalar.unit(ctx)
        sign = 1
        for _ in range(ctx.cutoff):
            power = power * n
            if not power:
                break
            sign = -sign
            acc = acc + power.scale(sign)
        inv = acc.scale(Fraction(1) / c0)
        assert (inv * self) == NovikovScalar.unit(ctx)
        return inv

    def anticanonical_degrees(self):
        return {b: sum(b) for b in self.terms}

    def __repr__(self):
        return f"NovikovScalar({self.terms})"


class HLaurent:
    """hbar-Laurent polynomial with cohomology-class coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def one(cls, ring):
        return cls(ring, {0: ring.one()})

    @classmethod
    def of_class(cls, c, power=0):
        return cls(c.ring, {power: c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, HLaurent) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out[k] + v if k in out else v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return HLaurent(self.ring, out)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        return HLaurent(self.ring, {k: v.scale(c) for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                prod = v1 * v2
                if not prod:
                    continue
                k = k1 + k2
                s = out[k] + prod if k in out else prod
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return HLaurent(self.ring, out)

    def coefficient(self, power):
        return self.terms.get(power, self.ring.zero())

    def powers(self):
        return sorted(self.terms)

    def max_power(self):
        return max(self.terms) if self.terms else None

    def __repr__(self):
        return f"HLaurent({self.terms})"


def nilpotent_geometric(D, m):
    """Exact inverse (D + m*hbar)^(-1) for a nilpotent class D.

    Equals ``sum_{l>=0} (-1)^l D^l / (m^(l+1) hbar^(l+1))``, a finite sum.
    """
    if m == 0:
        raise ZeroDivisionError("m must be a nonzero integer")
    if D.degree_zero_coefficient() != 0:
        raise NotNilpotent("class has nonzero scalar part")
    ring = D.ring
    terms = {}
    power = ring.one()
    l = 0
    while power:
        coeff = Fraction((-1) ** l, m ** (l + 1))
        terms[-(l + 1)] = power.scale(coeff)
        power = power * D
        l += 1
    return HLaurent(ring, terms)


class NovikovSeries:
    """Map from effective classes to HLaurent coefficients, truncated by ell."""

    __slots__ = ("ctx", "ring", "terms")

    def __init__(self, ctx, ring, terms=None):
        self.ctx = ctx
        self.ring = ring
        clean = {}
        for beta, h in (terms or {}).items():
            if h and ctx.ell_of(beta) <= ctx.cutoff:
                clean[tuple(beta)] = h
        self.terms = clean

    @classmethod
    def one(cls, ctx, ring):
        return cls(ctx, ring, {ctx.zero_class: HLaurent.one(ring)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, NovikovSeries) and self.terms == other.terms \
            and self.ctx == other.ctx

    def __add__(self, other):
        _check_ctx(self, other)
        out = dict(self.terms)
        for b, h in other.terms.items():
            s = out[b] + h if b in out else h
            if s:
                out[b] = s
            else:
                out.pop(b, None)
        return NovikovSeries(self.ctx, self.ring, out)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        return NovikovSeries(self.ctx, self.ring,
                             {b: h.scale(c) for b, h in self.terms.items()})

    def coefficient(self, beta):
        return self.terms.get(tuple(beta), HLaurent(self.ring))


def series_mul(a, b):
    """Cauchy product over the semigroup, dropping classes beyond the cutoff."""
    _check_ctx(a, b)
    ctx = a.ctx
    out = {}
    for b1, h1 in a.terms.items():
        for b2, h2 in b.terms.items():
            beta = tuple(x + y for x, y in zip(b1, b2))
            if ctx.ell_of(beta) > ctx.cutoff:
                continue
            prod = h1 * h2
            if not prod:
                continue
            s = out[beta] + prod if beta in out else prod
            if s:
                out[beta] = s
            else:
                out.pop(beta, None)
    return NovikovSeries(ctx, a.ring, out)


def _hlaurent_invert(h):
    """Inverse of an HLaurent unit: scalar at hbar^0 plus nilpotent terms."""
    ring = h.ring
    c0 = h.coefficient(0).degree_zero_coefficient()
    if c0 == 0:
        raise NotAUnit("hbar^0 coefficient has no scalar part")
    for k, v in h.terms.items():
        if k != 0 and v.degree_zero_coefficient() != 0:
            raise NotAUnit(f"scalar part at hbar^{k} is not invertible")
    one = HLaurent.one(ring)
    n = (h.scale(Fraction(1, 1) / c0)) - one
    acc = one
    power = one
    sign = 1
    while True:
        power = power * n
        if not power:
            break
        sign = -sign
        acc = acc + power.scale(sign)
    return acc.scale(Fraction(1) / c0)


def invert_unit(a):
    """Inverse of a series whose q^0, hbar^0 part is a nonzero rational.

    Computed by graded Neumann iteration over the ell-degree; exact up to the
    cutoff, i.e. ``series_mul(a, invert_unit(a))`` is the unit series.
    """
    ctx = a.ctx
    u = a.terms.get(ctx.zero_class)
    if u is None:
        raise NotAUnit("series has no q^0 coefficient")
    u_inv = _hlaurent_invert(u)
    u_inv_series = NovikovSeries(ctx, a.ring, {ctx.zero_class: u_inv})
    rest = NovikovSeries(ctx, a.ring,
                         {b: h for b, h in a.terms.items() if b != ctx.zero_class})
    n = series_mul(u_inv_series, rest)
    acc = NovikovSeries.one(ctx, a.ring)
    power = NovikovSeries.one(ctx, a.ring)
    sign = 1
    for _ in range(ctx.cutoff):
        power = series_mul(power, n)
        if not power:
            break
        sign = -sign
        acc = acc + power.scale(sign)
    return series_mul(acc, u_inv_series)
