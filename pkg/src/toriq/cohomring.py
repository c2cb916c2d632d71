"""Rational cohomology of a smooth complete toric variety, presented exactly.

The ring is the polynomial ring on one variable per ray, modulo the linear
relations ``sum <m, u_rho> x_rho`` and the square-free Stanley-Reisner ideal.
A maximal cone ``sigma0`` is chosen (the one whose complement -- the surviving
variable set -- is lexicographically least) and its ``n`` variables are
eliminated through the linear relations, which carry integer coefficients by
unimodularity.  The image of the Stanley-Reisner ideal in the surviving
variables is completed to a reduced Groebner basis; the standard monomials
form the module basis, with one basis element per maximal cone.

Integration is normalized by requiring every maximal-cone monomial
``prod_{rho in sigma} D_rho`` to integrate to 1, and the Poincare pairing is
inverted exactly to produce the dual basis.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice, polynomials as P
from .moricone import primitive_collections


class DimensionMismatch(ValueError):
    """Quotient dimension disagrees with the maximal-cone count."""


class InconsistentNormalization(ValueError):
    """Maximal-cone integrals admit no common normalization (internal bug)."""


class SingularPairing(ValueError):
    """Poincare pairing failed to be perfect (internal bug)."""


@dataclass(frozen=True)
class CohomRing:
    fan: object
    sigma0: tuple                 # eliminated ray indices
    surviving: tuple              # remaining ray indices, ascending
    eliminations: dict            # eliminated ray -> integer coeffs over surviving
    groebner: tuple               # reduced GB, polynomials in surviving variables
    basis: tuple                  # standard monomials (exponent tuples)
    basis_degrees: tuple
    mult_table: dict              # (i, j) with i <= j -> coefficient tuple
    point_integrals: dict         # top-degree basis monomial -> Fraction
    var_names: tuple = field(default=(), compare=False)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def top_degree(self):
        return self.fan.dim

    def basis_index(self, mono):
        return self.basis.index(mono)

    def zero(self):
        return CohClass(self, (Fraction(0),) * self.dim)

    def one(self):
        coeffs = [Fraction(0)] * self.dim
        coeffs[self.basis.index((0,) * len(self.surviving))] = Fraction(1)
        return CohClass(self, tuple(coeffs))

    def from_poly(self, poly):
        """Class of a polynomial in the surviving variables."""
        nf = P.normal_form(poly, list(self.groebner))
        coeffs = [Fraction(0)] * self.dim
        for m, c in nf.items():
            coeffs[self.basis.index(m)] = c
        return CohClass(self, tuple(coeffs))

    def variable_class(self, j):
        """Class of the j-th surviving variable."""
        return self.from_poly(P.pvar(len(self.surviving), j))

    def ray_poly(self, rho):
        """Polynomial representative (the Kirwan lift) of D_rho."""
        nv = len(self.surviving)
        if rho in self.surviving:
            return P.pvar(nv, self.surviving.index(rho))
        coeffs = self.eliminations[rho]
        poly = {}
        for j, c in enumerate(coeffs):
            if c:
                poly = P.padd(poly, P.pscale(P.pvar(nv, j), c))
        return poly


class CohClass:
    """Element of the cohomology ring: exact coefficients over the basis."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    def __eq__(self, other):
        return isinstance(other, CohClass) and self.coeffs == other.coeffs \
            and self.ring is other.ring

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        return CohClass(self.ring, tuple(a + b for a, b in
                                         zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return CohClass(self.ring, tuple(a - b for a, b in
                                         zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CohClass(self.ring, tuple(-a for a in self.coeffs))

    def scale(self, c):
        c = Fraction(c)
        return CohClass(self.ring, tuple(a * c for a in self.coeffs))

    def __mul__(self, other):
        ring = self.ring
        out = [Fraction(0)] * ring.dim
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                key = (i, j) if i <= j else (j, i)
                for k, c in enumerate(ring.mult_table[key]):
                    if c:
                        out[k] += a * b * c
        return CohClass(ring, tuple(out))

    def graded_part(self, degree):
        out = [c if ring_deg == degree else Fraction(0)
               for c, ring_deg in zip(self.coeffs, self.ring.basis_degrees)]
        return CohClass(self.ring, tuple(out))

    def degree_zero_coefficient(self):
        """Coefficient of the unit basis monomial."""
        idx = self.ring.basis.index((0,) * len(self.ring.surviving))
        return self.coeffs[idx]

    def __repr__(self):
        return f"CohClass({render_class(self)})"


def _choose_sigma0(fan):
    """Maximal cone whose surviving complement is lexicographically least."""
    best = None
    for cone in fan.max_cones:
        complement = tuple(i for i in range(fan.n_rays) if i not in cone)
        if best is None or complement < best[0]:
            best = (complement, cone)
    return best[1], best[0]


def build_cohomology_ring(fan):
    sigma0, surviving = _choose_sigma0(fan)
    nv = len(surviving)
    # dual basis of the sigma0 ray basis: integer because the cone is unimodular
    cone_rays = fan.cone_rays(sigma0)
    eliminations = {}
    for pos, rho in enumerate(sigma0):
        target = [1 if k == pos else 0 for k in range(fan.dim)]
        # m with <m, u_rho'> = delta for rho' in sigma0
        mat = [[cone_rays[i][k] for k in range(fan.dim)] for i in range(fan.dim)]
        m = lattice.solve_rational(mat, target)
        assert m is not None and all(x.denominator == 1 for x in m)
        m = [int(x) for x in m]
        # x_rho = - sum_j <m, u_j> x_j over surviving rays j
        eliminations[rho] = tuple(
            -sum(m[k] * fan.rays[j][k] for k in range(fan.dim))
            for j in surviving)

    ring_stub = CohomRing(
        fan=fan, sigma0=sigma0, surviving=tuple(surviving),
        eliminations=eliminations, groebner=(), basis=(), basis_degrees=(),
        mult_table={}, point_integrals={})

    sr_gens = []
    for coll in primitive_collections(fan):
        poly = P.pconst(nv)
        for rho in coll:
            poly = P.pmul(poly, ring_stub.ray_poly(rho))
        sr_gens.append(poly)
    gb = P.buchberger(sr_gens)
    leads = [P.leading(g)[0] for g in gb]
    basis = tuple(P.standard_monomials(leads, nv))
    if len(basis) != len(fan.max_cones):
        raise DimensionMismatch(
            f"quotient has dimension {len(basis)}, expected "
            f"{len(fan.max_cones)} maximal cones")
    degrees = tuple(P.mono_deg(m) for m in basis)

    mult_table = {}
    for i, mi in enumerate(basis):
        for j in range(i, len(basis)):
            nf = P.normal_form({P.mono_mul(mi, basis[j]): Fraction(1)}, gb)
            col = [Fraction(0)] * len(basis)
            for m, c in nf.items():
                col[basis.index(m)] = c
            mult_table[(i, j)] = tuple(col)

    # integration: every maximal-cone monomial has integral 1
    top = [i for i, d in enumerate(degrees) if d == fan.dim]
    rows, rhs = [], []
    for cone in fan.max_cones:
        poly = P.pconst(nv)
        for rho in cone:
            poly = P.pmul(poly, ring_stub.ray_poly(rho))
        nf = P.normal_form(poly, gb)
        row = [Fraction(0)] * len(top)
        for m, c in nf.items():
            if P.mono_deg(m) != fan.dim:
                raise InconsistentNormalization(
                    f"maximal-cone monomial reduced to degree {P.mono_deg(m)}")
            row[top.index(basis.index(m))] = c
        rows.append(row)
        rhs.append(Fraction(1))
    sol = lattice.solve_rational(rows, rhs)
    if sol is None:
        raise InconsistentNormalization(
            "no integral assignment satisfies all maximal-cone normalizations")
    for row, target in zip(rows, rhs):  # rref sets free vars to 0; verify all rows
        if sum(a * s for a, s in zip(row, sol)) != target:
            raise InconsistentNormalization("normalization system is inconsistent")
    integrals = {basis[top[k]]: sol[k] for k in range(len(top))}

    return CohomRing(
        fan=fan, sigma0=sigma0, surviving=tuple(surviving),
        eliminations=eliminations, groebner=tuple(gb), basis=basis,
        basis_degrees=degrees, mult_table=mult_table,
        point_integrals=integrals,
        var_names=tuple(f"x{j + 1}" for j in surviving))


def integrate(ring, c):
    """Integral over the variety of the top-degree component of a class."""
    total = Fraction(0)
    for coeff, mono, deg in zip(c.coeffs, ring.basis, ring.basis_degrees):
        if deg == ring.top_degree and coeff:
            total += coeff * ring.point_integrals[mono]
    return total


def pairing(ring, a, b):
    return integrate(ring, a * b)


def monomial_basis_classes(ring):
    out = []
    for i in range(ring.dim):
        coeffs = [Fraction(0)] * ring.dim
        coeffs[i] = Fraction(1)
        out.append(CohClass(ring, tuple(coeffs)))
    return out


def poincare_dual_basis(ring):
    """Bases ({T_a}, {T^a}) with <T_a, T^b> = delta under integration."""
    T = monomial_basis_classes(ring)
    gram = [[pairing(ring, T[a], T[b]) for b in range(ring.dim)]
            for a in range(ring.dim)]
    inv = lattice.invert_rational(gram)
    if inv is None:
        raise SingularPairing("Poincare pairing matrix is singular")
    duals = []
    for a in range(ring.dim):
        acc = ring.zero()
        for b in range(ring.dim):
            acc = acc + T[b].scale(inv[b][a])
        duals.append(acc)
    return T, duals


def divisor_class(ring, rho):
    """Degree-2 class of the toric divisor attached to ray ``rho``."""
    return ring.from_poly(ring.ray_poly(rho))


def graded_dimensions(ring):
    dims = [0] * (ring.top_degree + 1)
    for d in ring.basis_degrees:
        dims[d] += 1
    return dims


def render_class(c, coeff_str=str):
    ring = c.ring
    poly = {m: x for m, x in zip(ring.basis, c.coeffs) if x}
    return P.render_poly(poly, list(ring.var_names), coeff_str=coeff_str)
