"""GKZ-type hypergeometric series and the box-operator annihilation check.

For an effective class ``beta`` with pairings ``d_rho = <D_rho, beta>``, the
series coefficient is the exact product over rays of

* ``1``                                          when ``d = 0``,
* ``prod_{m=1..d} (D_rho + m hbar)^(-1)``        when ``d > 0``,
* ``D_rho``                                      when ``d = -1``,
* ``D_rho * prod_{m=d+1..-1} (D_rho + m hbar)``  when ``d <= -2``.

The reduced series (exponential prefactor stripped) is assembled over all
effective classes up to the cutoff.  Box operators act coefficientwise through
the rule "hbar-derivative along the divisor direction = multiplication by
``D_rho + hbar d'_rho``"; applying the operator of any Mori generator must
annihilate the series exactly on the certified range, and the hbar -> 0 limit
of the operator is the binomial relation fed to the quantum-deformed ring.
"""

from dataclasses import dataclass
from fractions import Fraction

from .cohomring import divisor_class, integrate, poincare_dual_basis
from .moricone import enumerate_effective
from .novikov import HLaurent, NovikovContext, NovikovSeries


class PositiveHbarPower(ValueError):
    """Two-point extraction hit hbar^0 or higher: not a semipositive series."""


class InsufficientCutoff(ValueError):
    """Operator degree exceeds the series truncation."""


class AnnihilationFailure(AssertionError):
    """A box operator failed to annihilate the series (internal bug)."""


@dataclass(frozen=True)
class GKZOperator:
    """Box operator of a curve class: positive and negative ray factors."""

    beta: tuple
    positive: tuple   # (ray index, d_rho > 0)
    negative: tuple   # (ray index, -d_rho for d_rho < 0)


def gkz_operator(beta):
    pos = tuple((i, d) for i, d in enumerate(beta) if d > 0)
    neg = tuple((i, -d) for i, d in enumerate(beta) if d < 0)
    return GKZOperator(beta=tuple(beta), positive=pos, negative=neg)


def gkz_coefficient(ring, beta):
    """Exact hbar-Laurent coefficient of q^beta in the reduced series."""
    from .novikov import nilpotent_geometric

    out = HLaurent.one(ring)
    for rho, d in enumerate(beta):
        if d == 0:
            continue
        D = divisor_class(ring, rho)
        if d > 0:
            for m in range(1, d + 1):
                out = out * nilpotent_geometric(D, m)
        else:
            factor = HLaurent.of_class(D)
            for m in range(d + 1, 0):
                factor = factor * HLaurent(ring, {0: D, 1: ring.one().scale(m)})
            out = out * factor
    return out


def i_function(ring, md, cutoff):
    """Reduced series: sum over effective classes of q^beta times the coefficient."""
    ctx = NovikovContext(n_rays=md.fan.n_rays, ell=md.ell, cutoff=cutoff)
    terms = {}
    for beta in enumerate_effective(md, cutoff):
        terms[beta] = gkz_coefficient(ring, beta)
    return NovikovSeries(ctx, ring, terms)


@dataclass(frozen=True)
class LeadingTerms:
    i0: dict            # beta -> CohClass (hbar^0 parts)
    i1: dict            # beta -> CohClass (hbar^-1 parts)
    i0_is_one: bool


def leading_terms(I):
    """Split off the hbar^0 and hbar^-1 layers and test i0 == 1."""
    ring = I.ring
    i0, i1 = {}, {}
    for beta, h in sorted(I.terms.items()):
        c0 = h.coefficient(0)
        c1 = h.coefficient(-1)
        if c0:
            i0[beta] = c0
        if c1:
            i1[beta] = c1
    zero = I.ctx.zero_class
    i0_is_one = set(i0) == {zero} and i0[zero] == ring.one()
    return LeadingTerms(i0=i0, i1=i1, i0_is_one=i0_is_one)


@dataclass(frozen=True)
class TwoPointTable:
    """Invariants <T_a psi^k, 1> keyed by (basis index a, k, beta)."""

    entries: dict

    def value(self, a, k, beta):
        return self.entries.get((a, int(k), tuple(beta)), Fraction(0))


def extract_two_point_invariants(ring, I):
    """Decompose each coefficient over the dual basis; read off psi powers.

    The coefficient of q^beta equals ``sum_a <T_a/(hbar - psi), 1> T^a``; its
    T_a-component (extracted by pairing against T_a) is ``sum_k hbar^(-k-1)
    <T_a psi^k, 1>``.  Every hbar power must be <= -1.
    """
    basis_classes, _ = poincare_dual_basis(ring)
    entries = {}
    for beta, h in sorted(I.terms.items()):
        if beta == I.ctx.zero_class:
            continue
        for power, cls in sorted(h.terms.items()):
            if power > -1:
                raise PositiveHbarPower(
                    f"coefficient of q^{beta} has hbar^{power} term")
            k = -power - 1
            for a, Ta in enumerate(basis_classes):
                val = integrate(ring, cls * Ta)
                if val:
                    entries[(a, k, beta)] = val
    return TwoPointTable(entries=entries)


def reconstruct_coefficient(ring, table, beta):
    """Round-trip check: rebuild the q^beta coefficient from the table."""
    _, duals = poincare_dual_basis(ring)
    out = HLaurent(ring)
    for (a, k, b), val in table.entries.items():
        if b == tuple(beta):
            out = out + HLaurent.of_class(duals[a].scale(val), -k - 1)
    return out


def _linear_factor_apply(ring, h, D, c):
    """Multiply an HLaurent by (D + c*hbar)."""
    factor = HLaurent(ring, {0: D, 1: ring.one().scale(c)})
    return factor * h


def apply_gkz_operator(op, I):
    """Difference of the two operator products applied to the reduced series.

    Valid (and returned) on classes with ``ell(beta') <= cutoff - ell(op.beta)``;
    raises InsufficientCutoff when the operator degree exceeds the cutoff.
    """
    ring = I.ring
    ctx = I.ctx
    ell_op = ctx.ell_of(op.beta)
    reduced_cutoff = ctx.cutoff - ell_op
    if reduced_cutoff < 0:
        raise InsufficientCutoff(
            f"operator needs ell {ell_op} but cutoff is {ctx.cutoff}")
    out_ctx = NovikovContext(n_rays=ctx.n_rays, ell=ctx.ell,
                             cutoff=reduced_cutoff)
    divisors = {rho: divisor_class(ring, rho)
                for rho, _ in op.positive + op.negative}
    terms = {}
    for beta_p, h in I.terms.items():
        if out_ctx.ell_of(beta_p) > reduced_cutoff:
            continue
        acc = h
        for rho, d in op.positive:
            for m in range(d):
                acc = _linear_factor_apply(ring, acc, divisors[rho],
                                           beta_p[rho] - m)
        if acc:
            terms[beta_p] = acc
    for beta_pp, h in I.terms.items():
        # second product then shift by q^{op.beta}
        acc = h
        for rho, d in op.negative:
            for m in range(d):
                acc = _linear_factor_apply(ring, acc, divisors[rho],
                                           beta_pp[rho] - m)
        target = tuple(x + y for x, y in zip(beta_pp, op.beta))
        if out_ctx.ell_of(target) > reduced_cutoff:
            continue
        if acc:
            if target in terms:
                diff = terms[target] - acc
                if diff:
                    terms[target] = diff
                else:
                    del terms[target]
            else:
                terms[target] = acc.scale(-1)
    return NovikovSeries(out_ctx, ring, terms)


@dataclass(frozen=True)
class AnnihilationReport:
    entries: tuple     # (generator, certified ell range, ok)
    ok: bool


def annihilation_certificate(ring, md, cutoff):
    """Check that every Mori generator's box operator kills the series."""
    I = i_function(ring, md, cutoff)
    entries = []
    for beta in md.generators:
        result = apply_gkz_operator(gkz_operator(beta), I)
        if result:
            bad_beta = sorted(result.terms)[0]
            power = result.terms[bad_beta].powers()[0]
            raise AnnihilationFailure(
                f"operator of {beta} leaves q^{bad_beta} hbar^{power}")
        entries.append((beta, cutoff - md.ell_of(beta), True))
    return AnnihilationReport(entries=tuple(entries), ok=True)


@dataclass(frozen=True)
class Relation:
    """Binomial relation: positive monomial minus q^beta times negative one."""

    beta: tuple
    positive_exponents: tuple   # per-ray exponents of the leading monomial
    negative_exponents: tuple


def extract_relation(op):
    """hbar -> 0 limit of the box operator as a polynomial relation."""
    n = len(op.beta)
    pos = [0] * n
    for rho, d in op.positive:
        pos[rho] = d
    neg = [0] * n
    for rho, d in op.negative:
        neg[rho] = d
    return Relation(beta=op.beta, positive_exponents=tuple(pos),
                    negative_exponents=tuple(neg))
