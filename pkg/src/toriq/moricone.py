"""Primitive collections, the Mori cone, and effective curve classes.

Curve classes are kept basis-free as integer vectors ``(b_rho)`` indexed by
rays, living in the kernel lattice of the ray matrix (``sum b_rho u_rho = 0``);
the pairing of a class with the divisor ``D_rho`` is read off as ``b_rho``.
A primitive collection ``P`` (minimal non-face of the fan's cone complex)
produces the relation ``sum_{rho in P} u_rho = sum_{rho in gamma(1)} c_rho
u_rho`` and hence the primitive class with entries 1 on ``P``, ``-c_rho`` on
``gamma(1)`` and 0 elsewhere.  The Mori cone is generated by these classes;
semipositivity means the anticanonical divisor ``sum D_rho`` pairs >= 0 with
each of them.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd

from . import lattice
from .fan import minimal_cone_containing


class NonIntegralCoefficient(ValueError):
    """Primitive relation with fractional coefficients (not a smooth fan)."""


class KernelCheckFailed(AssertionError):
    """Alleged curve class pairs nontrivially with the lattice (internal bug)."""


class NoPositiveFunctional(ValueError):
    """Mori cone is not strictly convex: the fan is not projective."""


@dataclass(frozen=True)
class PrimitiveCollection:
    """A minimal non-face with its relation data filled in."""

    rays: tuple          # index set P
    gamma: tuple         # ray indices of the minimal cone of sum(u_rho)
    coeffs: tuple        # positive integers aligned with gamma


@dataclass(frozen=True)
class Witness:
    """Line-bundle/section data realizing a primitive class by a quasimap."""

    degrees: tuple       # b_rho per ray
    pattern: tuple       # per ray: "linear" | "zero" | "constant"
    sigma_max: tuple     # a maximal cone containing gamma


@dataclass(frozen=True)
class MoriData:
    fan: object
    collections: tuple   # PrimitiveCollection, canonical order
    generators: tuple    # primitive classes, aligned with collections
    ell: tuple           # strictly positive integral functional on the cone
    semipositive: bool

    def ell_of(self, beta):
        return sum(a * b for a, b in zip(self.ell, beta))

    def anticanonical_degree(self, beta):
        return sum(beta)


def primitive_collections(fan):
    """Minimal non-faces of the cone complex, sorted canonically.

    A set is returned iff it is contained in no maximal cone while every
    proper subset is.  Candidates beyond dim+1 elements cannot qualify (their
    big proper subsets are already too large to be faces).
    """
    faces = set()
    for cone in fan.max_cones:
        for k in range(len(cone) + 1):
            faces.update(combinations(cone, k))
    found = []
    for size in range(2, fan.dim + 2):
        for cand in combinations(range(fan.n_rays), size):
            if cand in faces:
                continue
            if all(sub in faces for sub in combinations(cand, size - 1)):
                found.append(cand)
    return sorted(found)


def primitive_relation(fan, P):
    """Fill in the minimal cone and coefficients for a primitive collection."""
    total = [sum(fan.rays[i][k] for i in P) for k in range(fan.dim)]
    gamma, coeffs = minimal_cone_containing(fan, total)
    for c in coeffs:
        if not isinstance(c, int):
            raise NonIntegralCoefficient(f"relation of {P} has coefficient {c}")
    if set(P) & set(gamma):
        raise NonIntegralCoefficient(
            f"collection {P} meets its minimal cone {gamma}; fan is not smooth")
    return PrimitiveCollection(rays=tuple(P), gamma=gamma, coeffs=coeffs)


def primitive_class(fan, pc):
    """Coefficient vector of the primitive relation, verified to be a relation."""
    b = [0] * fan.n_rays
    for i in pc.rays:
        b[i] = 1
    for i, c in zip(pc.gamma, pc.coeffs):
        b[i] = -c
    for k in range(fan.dim):
        if sum(b[i] * fan.rays[i][k] for i in range(fan.n_rays)) != 0:
            raise KernelCheckFailed(f"{b} is not a relation among the rays")
    return tuple(b)


# --- exact linear programming (Fourier-Motzkin) ------------------------------


def _fm_feasible_point(constraints, nvars):
    """A rational point satisfying ``a . x >= c`` for each (a, c), else None."""
    system = [([Fraction(x) for x in a], Fraction(c)) for a, c in constraints]
    stack = []
    for k in range(nvars - 1, -1, -1):
        keep, lower, upper = [], [], []
        for a, c in system:
            if a[k] == 0:
                keep.append((a, c))
            elif a[k] > 0:
                lower.append((a, c))   # x_k >= (c - rest)/a_k
            else:
                upper.append((a, c))
        stack.append((k, lower, upper))
        for al, cl in lower:
            for au, cu in upper:
                # eliminate x_k from the pair (positive combination)
                coeff = [al[j] * (-au[k]) + au[j] * al[k] for j in range(nvars)]
                keep.append((coeff, cl * (-au[k]) + cu * al[k]))
        system = keep
    if any(c > 0 for _, c in system):
        return None
    # back-substitute, innermost variable first
    point = [Fraction(0)] * nvars
    for k, lower, upper in reversed(stack):
        lo, hi = None, None
        for a, c in lower:
            bound = (c - sum(a[j] * point[j] for j in range(nvars) if j != k)) / a[k]
            lo = bound if lo is None else max(lo, bound)
        for a, c in upper:
            bound = (c - sum(a[j] * point[j] for j in range(nvars) if j != k)) / a[k]
            hi = bound if hi is None else min(hi, bound)
        if lo is not None:
            point[k] = lo
        elif hi is not None:
            point[k] = hi
        # else unconstrained: keep 0
    for a, c in constraints:
        assert sum(Fraction(x) * p for x, p in zip(a, point)) >= c
    return point


def positive_functional(generators, nvars):
    """Smallest integral ell with ell . beta >= 1 for every generator.

    "Smallest" means minimal sup-norm, then minimal 1-norm, then
    lexicographically least -- a deterministic tie-break.  Raises
    NoPositiveFunctional when the cone is not strictly convex.
    """
    constraints = [(g, 1) for g in generators]
    if not generators:
        return (0,) * nvars
    point = _fm_feasible_point(constraints, nvars)
    if point is None:
        raise NoPositiveFunctional(
            "no functional is >= 1 on all Mori generators; fan is not projective")
    denom = 1
    for x in point:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    scaled = tuple(int(x * denom) for x in point)
    bound = max(abs(x) for x in scaled)
    if (2 * bound + 1) ** nvars > 2_000_000:  # desk-scale guard
        return scaled
    for k in range(1, bound + 1):
        best = None
        for cand in product(range(-k, k + 1), repeat=nvars):
            if max(abs(x) for x in cand) != k:
                continue
            if all(sum(a * b for a, b in zip(cand, g)) >= 1 for g in generators):
                key = (sum(abs(x) for x in cand), cand)
                if best is None or key < best:
                    best = key
        if best is not None:
            return best[1]
    return scaled


def mori_data(fan):
    """All primitive classes, a positive functional, and the nef-ness flag."""
    cols = [primitive_relation(fan, P) for P in primitive_collections(fan)]
    gens = tuple(primitive_class(fan, pc) for pc in cols)
    ell = positive_functional(gens, fan.n_rays)
    semipositive = all(sum(g) >= 0 for g in gens)
    return MoriData(fan=fan, collections=tuple(cols), generators=gens,
                    ell=tuple(ell), semipositive=semipositive)


# --- effective class enumeration ---------------------------------------------


def _kernel_setup(fan):
    """Basis of the curve-class lattice and a rational left inverse."""
    A = [[fan.rays[j][k] for j in range(fan.n_rays)] for k in range(fan.dim)]
    basis = lattice.kernel_basis(A)
    if not basis:
        return [], []
    # left inverse: y = L b for b in the kernel lattice
    cols = len(basis[0])
    BT = [[b[i] for b in basis] for i in range(cols)]   # cols x r
    gram = [[sum(BT[i][a] * BT[i][b] for i in range(cols))
             for b in range(len(basis))] for a in range(len(basis))]
    gram_inv = lattice.invert_rational(gram)
    assert gram_inv is not None
    L = [[sum(gram_inv[a][j] * basis[j][i] for j in range(len(basis)))
          for i in range(cols)] for a in range(len(basis))]
    return basis, L


def _facet_normals(vectors, r):
    """Supporting normals of cone(vectors) in QQ^r from (r-1)-subsets.

    Correct for full-dimensional pointed cones: every facet is spanned by
    generators, and extra supporting normals are harmless for membership.
    """
    normals = set()
    for subset in combinations(vectors, r - 1):
        ns = lattice.nullspace_rational([list(v) for v in subset]) if subset \
            else [[Fraction(1) if i == j else Fraction(0) for i in range(r)]
                  for j in range(r)]
        for f in ns:
            fi = lattice.primitive_vector(f)
            if all(x == 0 for x in fi):
                continue
            dots = [sum(a * b for a, b in zip(fi, w)) for w in vectors]
            if all(d >= 0 for d in dots):
                normals.add(tuple(fi))
            elif all(d <= 0 for d in dots):
                normals.add(tuple(-x for x in fi))
    return sorted(normals)


def enumerate_effective(md, cutoff):
    """All lattice points of the Mori cone with ell-degree <= cutoff.

    Saturated enumeration: lattice points of the rational cone, not just
    semigroup combinations of the generators.  Sorted by (ell, lex); the zero
    class comes first.
    """
    fan = md.fan
    zero = (0,) * fan.n_rays
    if cutoff < 0:
        return []
    basis, L = _kernel_setup(fan)
    r = len(basis)
    if r == 0 or not md.generators:
        return [zero]
    ys = []
    for g in md.generators:
        y = [sum(L[a][i] * g[i] for i in range(fan.n_rays)) for a in range(r)]
        assert all(x.denominator == 1 for x in y)
        ys.append(tuple(int(x) for x in y))
    assert len(lattice.rref([list(y) for y in ys])[1]) == r, \
        "Mori cone of a projective fan must span the curve-class lattice"
    normals = _facet_normals(ys, r)
    # bounding box: any point is sum lambda_P beta_P with sum lambda_P <= cutoff
    bmax = [cutoff * max(abs(g[i]) for g in md.generators)
            for i in range(fan.n_rays)]
    ybound = [int(sum(abs(L[a][i]) * bmax[i] for i in range(fan.n_rays)))
              for a in range(r)]
    points = []
    for y in product(*[range(-b, b + 1) for b in ybound]):
        if any(sum(f[a] * y[a] for a in range(r)) < 0 for f in normals):
            continue
        b = tuple(sum(y[a] * basis[a][i] for a in range(r))
                  for i in range(fan.n_rays))
        ell = md.ell_of(b)
        if 0 <= ell <= cutoff:
            points.append((ell, b))
    points.sort()
    assert points and points[0][1] == zero
    return [b for _, b in points]


def effectivity_witness(fan, pc):
    """Section pattern realizing the primitive class as a quasimap degree.

    Degree-1 sections on P, zero sections on gamma(1), nonzero constants
    elsewhere; nondegeneracy is anchored at a maximal cone containing gamma,
    which exists by completeness.
    """
    b = primitive_class(fan, pc)
    pattern = []
    for i in range(fan.n_rays):
        if i in pc.rays:
            pattern.append("linear")
        elif i in pc.gamma:
            pattern.append("zero")
        else:
            pattern.append("constant")
    sigma_max = None
    for cone in fan.max_cones:
        if set(pc.gamma) <= set(cone):
            sigma_max = cone
            break
    assert sigma_max is not None, "complete fan must have a cone containing gamma"
    return Witness(degrees=b, pattern=tuple(pattern), sigma_max=sigma_max)
