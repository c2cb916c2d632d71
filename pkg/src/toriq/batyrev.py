"""Batyrev's quantum deformation of the cohomology presentation.

The deformed ideal replaces each Stanley-Reisner generator
``prod_{rho in P} x_rho`` by the binomial ``prod_{rho in P} x_rho -
q^{beta_P} prod_{rho in gamma(1)} x_rho^{c_rho}`` coming from the primitive
relation of ``P``.  After the linear eliminations the coefficients live in the
truncated semigroup algebra; polynomials are stored level by level as
``{curve class -> rational polynomial}``.

Reduction runs in increasing ell-degree: the level-0 layer of every rule is a
classical polynomial whose leading monomial has a unit coefficient, so each
reduction step cancels a monomial at the current level against strictly
smaller classical terms while pushing deformation tails to strictly higher
levels (every nonzero effective class has ell >= 1) -- which is what makes the
procedure terminate.  Buchberger completion over these rules only ever adds
elements mirroring the classical completion of the level-0 layer; an S-pair
residue with no unit coefficient at all would mean the quotient is not free
over the truncated scalars and is reported, never skipped.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import polynomials as P
from .novikov import NovikovContext, NovikovScalar


class NonUnitLeadingCoefficient(ValueError):
    """Completion needed to divide by a coefficient in the maximal ideal."""


class RelationNonzero(AssertionError):
    """An extracted relation failed to reduce to zero (completion bug)."""


class HypothesisUnmet(ValueError):
    """Isomorphism certificate requested for a non-semipositive fan."""


# --- level-indexed polynomials -----------------------------------------------


def dp_zero():
    return {}


def dp_clean(dp):
    return {b: p for b, p in dp.items() if p}


def dp_add(a, b):
    out = dict(a)
    for beta, poly in b.items():
        s = P.padd(out[beta], poly) if beta in out else poly
        if s:
            out[beta] = s
        else:
            out.pop(beta, None)
    return out


def dp_neg(a):
    return {b: P.pscale(p, -1) for b, p in a.items()}


def dp_sub(a, b):
    return dp_add(a, dp_neg(b))


def dp_mul_term(dp, mono, coeff):
    """Multiply by a single x-monomial with a rational coefficient."""
    return dp_clean({b: P.pmul_term(p, mono, coeff) for b, p in dp.items()})


def dp_shift(dp, beta, ctx):
    """Multiply by q^beta, truncating levels beyond the cutoff."""
    out = {}
    for b, poly in dp.items():
        target = tuple(x + y for x, y in zip(b, beta))
        if ctx.ell_of(target) <= ctx.cutoff:
            out[target] = poly
    return out


def dp_mul_scalar(dp, scalar, ctx):
    """Multiply by a NovikovScalar: convolution over levels with truncation."""
    out = {}
    for b1, poly in dp.items():
        for b2, c in scalar.terms.items():
            target = tuple(x + y for x, y in zip(b1, b2))
            if ctx.ell_of(target) > ctx.cutoff:
                continue
            contrib = P.pscale(poly, c)
            s = P.padd(out[target], contrib) if target in out else contrib
            if s:
                out[target] = s
            else:
                out.pop(target, None)
    return out


def dp_coefficient_scalar(dp, mono, ctx):
    """The full NovikovScalar coefficient of an x-monomial across levels."""
    terms = {}
    for beta, poly in dp.items():
        c = poly.get(mono)
        if c:
            terms[beta] = c
    return NovikovScalar(ctx, terms)


def dp_reduce(dp, rules, ctx):
    """Full normal form modulo monic rules, by increasing ell-level.

    Within a level, classical division strictly decreases the term order;
    deformation tails move to levels of strictly larger ell, bounded by the
    cutoff, so the loop terminates with every surviving monomial standard.
    """
    zero = ctx.zero_class
    levels = {b: dict(p) for b, p in dp.items()
              if p and ctx.ell_of(b) <= ctx.cutoff}
    out = {}
    while levels:
        beta = min(levels, key=lambda b: (ctx.ell_of(b), b))
        poly = levels.pop(beta)
        while True:
            hit = None
            for m in sorted(poly, key=P.term_key, reverse=True):
                for lead, element in rules:
                    if P.mono_divides(lead, m):
                        hit = (m, lead, element)
                        break
                if hit:
                    break
            if hit is None:
                break
            m, lead, element = hit
            c = poly[m]
            quot = P.mono_div(m, lead)
            for ebeta, epoly in element.items():
                shifted = P.pmul_term(epoly, quot, c)
                if ebeta == zero:
                    poly = P.psub(poly, shifted)
                else:
                    target = tuple(x + y for x, y in zip(beta, ebeta))
                    if ctx.ell_of(target) > ctx.cutoff:
                        continue
                    levels[target] = P.psub(levels.get(target, {}), shifted)
                    if not levels[target]:
                        del levels[target]
        if poly:
            out[beta] = poly
    return out


def _unit_lead(dp, ctx):
    """Leading monomial of the level-0 layer, or None (no unit coefficient)."""
    zero_poly = dp.get(ctx.zero_class)
    if not zero_poly:
        return None
    return P.leading(zero_poly)[0]


def _monicize(dp, ctx):
    lead = _unit_lead(dp, ctx)
    if lead is None:
        raise NonUnitLeadingCoefficient(
            "element has no monomial with invertible coefficient")
    lam = dp_coefficient_scalar(dp, lead, ctx)
    out = dp_mul_scalar(dp, lam.inverse(), ctx)
    assert dp_coefficient_scalar(out, lead, ctx) == NovikovScalar.unit(ctx)
    return lead, out


@dataclass(frozen=True)
class DeformedIdeal:
    ring: object
    ctx: NovikovContext
    rules: tuple              # (lead monomial, monic element) pairs
    completion_added: int

    @property
    def cutoff(self):
        return self.ctx.cutoff


def _deformed_generators(fan, md, ring, ctx):
    nv = len(ring.surviving)
    gens = []
    for pc, beta in zip(md.collections, md.generators):
        head = P.pconst(nv)
        for rho in pc.rays:
            head = P.pmul(head, ring.ray_poly(rho))
        tail = P.pconst(nv)
        for rho, c in zip(pc.gamma, pc.coeffs):
            tail = P.pmul(tail, P.ppow(ring.ray_poly(rho), c, nv))
        element = dp_add({ctx.zero_class: head},
                         dp_shift({ctx.zero_class: P.pscale(tail, -1)},
                                  beta, ctx))
        gens.append(dp_clean(element))
    return gens


def build_deformed_ideal(fan, md, ring, cutoff):
    """Complete the deformed generators to a rewriting system.

    S-pairs are processed smallest leading-lcm first; residues are reduced
    fully before insertion.  The final rules are canonicalized so that each
    right-hand side is the full normal form of its leading monomial (hence
    supported on standard monomials at every level).
    """
    ctx = NovikovContext(n_rays=fan.n_rays, ell=md.ell, cutoff=cutoff)
    rules = []
    for g in _deformed_generators(fan, md, ring, ctx):
        if g:
            rules.append(_monicize(g, ctx))
    added = 0
    pairs = [(i, j) for i in range(len(rules)) for j in range(i)]
    while pairs:
        pairs.sort(key=lambda ij: P.term_key(
            P.mono_lcm(rules[ij[0]][0], rules[ij[1]][0])))
        i, j = pairs.pop(0)
        lead_i, gi = rules[i]
        lead_j, gj = rules[j]
        lcm = P.mono_lcm(lead_i, lead_j)
        spair = dp_sub(dp_mul_term(gi, P.mono_div(lcm, lead_i), 1),
                       dp_mul_term(gj, P.mono_div(lcm, lead_j), 1))
        residue = dp_reduce(spair, rules, ctx)
        if residue:
            if _unit_lead(residue, ctx) is None:
                raise NonUnitLeadingCoefficient(
                    f"S-pair of {lead_i} and {lead_j} reduced to a pure-q "
                    f"element: quotient is not free on the classical basis")
            rules.append(_monicize(residue, ctx))
            added += 1
            pairs.extend((len(rules) - 1, k) for k in range(len(rules) - 1))
    # minimalize leads, then canonicalize right-hand sides to normal forms
    keep = []
    for i, (lead, g) in enumerate(rules):
        redundant = any(
            k != i and P.mono_divides(rules[k][0], lead)
            and (rules[k][0] != lead or k < i)
            for k in range(len(rules)))
        if not redundant:
            keep.append((lead, g))
    canonical = []
    for lead, _ in keep:
        nf = dp_reduce({(0,) * fan.n_rays: {lead: Fraction(1)}}, keep, ctx)
        element = dp_sub({ctx.zero_class: {lead: Fraction(1)}}, nf)
        canonical.append((lead, dp_clean(element)))
    canonical.sort(key=lambda r: P.term_key(r[0]))
    return DeformedIdeal(ring=ring, ctx=ctx, rules=tuple(canonical),
                         completion_added=added)


def normal_form(ideal, ray_terms):
    """Reduce a polynomial in the full ray variables to its basis expansion.

    ``ray_terms`` maps exponent tuples over *all* rays to NovikovScalar (or
    plain rational) coefficients.  Eliminated variables are substituted first.
    Returns one NovikovScalar per basis monomial of the classical ring.
    """
    ring = ideal.ring
    ctx = ideal.ctx
    nv = len(ring.surviving)
    dp = dp_zero()
    for mono, coeff in ray_terms.items():
        expanded = P.pconst(nv)
        for rho, e in enumerate(mono):
            expanded = P.pmul(expanded, P.ppow(ring.ray_poly(rho), e, nv))
        if isinstance(coeff, NovikovScalar):
            contrib = dp_mul_scalar({ctx.zero_class: expanded}, coeff, ctx)
        else:
            contrib = {ctx.zero_class: P.pscale(expanded, coeff)}
        dp = dp_add(dp, contrib)
    reduced = dp_reduce(dp, ideal.rules, ctx)
    out = [NovikovScalar(ctx) for _ in ring.basis]
    index = {m: i for i, m in enumerate(ring.basis)}
    for beta, poly in reduced.items():
        for m, c in poly.items():
            assert m in index, f"non-standard monomial {m} survived reduction"
            out[index[m]] = out[index[m]] + NovikovScalar.monomial(ctx, beta, c)
    return out


def normal_form_surviving(ideal, poly, scalar=None):
    """Basis expansion of a polynomial already in the surviving variables."""
    ctx = ideal.ctx
    dp = {ctx.zero_class: poly}
    if scalar is not None:
        dp = dp_mul_scalar(dp, scalar, ctx)
    reduced = dp_reduce(dp, ideal.rules, ctx)
    out = [NovikovScalar(ctx) for _ in ideal.ring.basis]
    index = {m: i for i, m in enumerate(ideal.ring.basis)}
    for beta, p in reduced.items():
        for m, c in p.items():
            assert m in index, f"non-standard monomial {m} survived reduction"
            out[index[m]] = out[index[m]] + NovikovScalar.monomial(ctx, beta, c)
    return out


@dataclass(frozen=True)
class BatyrevModule:
    ideal: DeformedIdeal
    matrices: dict            # ray index -> rows x cols of NovikovScalar

    @property
    def ring(self):
        return self.ideal.ring

    def star_column(self, rho, basis_index):
        """Expansion of x_rho * basis[a] over the basis."""
        mat = self.matrices[rho]
        return [mat[b][basis_index] for b in range(len(mat))]


def module_matrices(ideal):
    """Multiplication matrix of every ray variable on the classical basis."""
    ring = ideal.ring
    dim = ring.dim
    nv = len(ring.surviving)
    matrices = {}
    for rho in range(ring.fan.n_rays):
        ray = ring.ray_poly(rho)
        cols = []
        for a, mono in enumerate(ring.basis):
            product = P.pmul(ray, {mono: Fraction(1)})
            cols.append(normal_form_surviving(ideal, product))
        matrices[rho] = [[cols[a][b] for a in range(dim)] for b in range(dim)]
    return BatyrevModule(ideal=ideal, matrices=matrices)


def relation_check(ideal, relations):
    """Reduce each binomial relation; all must vanish identically."""
    ctx = ideal.ctx
    report = []
    for rel in relations:
        terms = {
            rel.positive_exponents: NovikovScalar.unit(ctx),
            }
        qneg = NovikovScalar.monomial(ctx, rel.beta, -1)
        if rel.negative_exponents in terms:
            terms[rel.negative_exponents] = terms[rel.negative_exponents] + qneg
        else:
            terms[rel.negative_exponents] = qneg
        expansion = normal_form(ideal, terms)
        ok = all(not s for s in expansion)
        report.append((rel, ok))
        if not ok:
            raise RelationNonzero(
                f"relation of {rel.beta} does not vanish in the quotient")
    return report


# --- isomorphism certificate --------------------------------------------------


def _matmul(A, B, ctx):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)),
                 NovikovScalar(ctx)) for j in range(n)] for i in range(n)]


def _mat_vec(A, v, ctx):
    n = len(A)
    return [sum((A[i][k] * v[k] for k in range(n)), NovikovScalar(ctx))
            for i in range(n)]


def _determinant(A, ctx):
    """Exact determinant over the scalar ring, by expansion with memoization."""
    n = len(A)

    cache = {}

    def minor(cols, row):
        if not cols:
            return NovikovScalar.unit(ctx)
        key = cols
        if key in cache and row == n - len(cols):
            return cache[key]
        total = NovikovScalar(ctx)
        sign = 1
        for idx, c in enumerate(cols):
            entry = A[row][c]
            if entry:
                rest = cols[:idx] + cols[idx + 1:]
                sub = minor(rest, row + 1)
                term = entry * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
        cache[key] = total
        return total

    return minor(tuple(range(n)), 0)


@dataclass(frozen=True)
class IsoCertificate:
    phi: tuple                # rows x cols of NovikovScalar
    determinant: object       # NovikovScalar
    det_is_unit: bool
    annihilation: object
    relations: tuple          # (Relation, ok) pairs
    verdict: str


def certify_isomorphism(ideal, md):
    """Replay of the quantum-module / deformed-ring comparison.

    Requires semipositivity (the theorem's hypothesis).  Verifies the box
    operators annihilate the series, reduces the induced relations to zero in
    the deformed quotient, expresses the monomial lifts of the basis through
    iterated module-matrix action, and checks the determinant is a unit whose
    q^0 part is 1.
    """
    from .gkz import annihilation_certificate, extract_relation, gkz_operator

    ring = ideal.ring
    ctx = ideal.ctx
    if not md.semipositive:
        raise HypothesisUnmet(
            "fan is not semipositive: the comparison theorem does not apply")
    annihilation = annihilation_certificate(ring, md, ctx.cutoff)
    relations = tuple(
        relation_check(ideal, [extract_relation(gkz_operator(beta))])[0]
        for beta in md.generators)
    module = module_matrices(ideal)
    dim = ring.dim
    unit_vec = [NovikovScalar.unit(ctx) if ring.basis[i] == (0,) * len(ring.surviving)
                else NovikovScalar(ctx) for i in range(dim)]
    phi_cols = []
    for mono in ring.basis:
        vec = list(unit_vec)
        for j, e in enumerate(mono):
            rho = ring.surviving[j]
            for _ in range(e):
                vec = _mat_vec(module.matrices[rho], vec, ctx)
        phi_cols.append(vec)
    phi = tuple(tuple(phi_cols[a][b] for a in range(dim)) for b in range(dim))
    det = _determinant([list(row) for row in phi], ctx)
    det_unit = det.is_unit() and det.q0() == 1
    ok = annihilation.ok and all(flag for _, flag in relations) and det_unit
    return IsoCertificate(
        phi=phi, determinant=det, det_is_unit=det_unit,
        annihilation=annihilation, relations=relations,
        verdict="certified" if ok else "failed")
