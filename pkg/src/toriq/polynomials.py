"""Multivariate polynomials over exact rationals, with Groebner machinery.

A monomial is an exponent tuple; a polynomial is a dict mapping monomials to
nonzero Fractions.  The term order is graded lexicographic with the *last*
variable most significant (variables are indexed by their ray order and a
later ray outranks an earlier one); this is the order under which the
Stanley-Reisner images of the catalog fans have square-free-power leading
terms and finite standard monomial bases.
"""

from fractions import Fraction
from itertools import product


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(a):
    return sum(a)


def term_key(m):
    """Sort key implementing the graded order (degree, reversed exponents)."""
    return (sum(m), tuple(reversed(m)))


def pzero():
    return {}


def pconst(nvars, c=Fraction(1)):
    c = Fraction(c)
    return {} if c == 0 else {(0,) * nvars: c}


def pvar(nvars, j):
    return {tuple(1 if i == j else 0 for i in range(nvars)): Fraction(1)}


def padd(p, q):
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, Fraction(0)) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def psub(p, q):
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, Fraction(0)) - c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def pscale(p, c):
    c = Fraction(c)
    if c == 0:
        return {}
    return {m: x * c for m, x in p.items()}


def pmul_term(p, mono, coeff):
    coeff = Fraction(coeff)
    if coeff == 0:
        return {}
    return {mono_mul(m, mono): c * coeff for m, c in p.items()}


def pmul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            s = out.get(m, Fraction(0)) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def ppow(p, e, nvars):
    out = pconst(nvars)
    for _ in range(e):
        out = pmul(out, p)
    return out


def leading(p):
    """(monomial, coefficient) of the order-largest term; None for 0."""
    if not p:
        return None
    m = max(p, key=term_key)
    return m, p[m]


def normal_form(p, rules):
    """Fully reduce p modulo monic rule polynomials (complete reduction).

    Every monomial divisible by some rule's leading monomial is eliminated,
    not just the leading one, so the result is the canonical representative
    supported on standard monomials.
    """
    leads = [(leading(g)[0], g) for g in rules]
    work = dict(p)
    out = {}
    while work:
        m = max(work, key=term_key)
        c = work.pop(m)
        for lead, g in leads:
            if mono_divides(lead, m):
                quot = mono_div(m, lead)
                # subtract c * x^quot * g; the lead term cancels m exactly
                for gm, gc in g.items():
                    if gm == lead:
                        continue
                    key = mono_mul(gm, quot)
                    s = work.get(key, Fraction(0)) - c * gc
                    if s:
                        work[key] = s
                    else:
                        work.pop(key, None)
                break
        else:
            out[m] = c
    return out


def s_poly(f, g):
    mf, cf = leading(f)
    mg, cg = leading(g)
    lcm = mono_lcm(mf, mg)
    return psub(pmul_term(f, mono_div(lcm, mf), 1 / cf),
                pmul_term(g, mono_div(lcm, mg), 1 / cg))


def buchberger(gens):
    """Reduced Groebner basis (monic, tails reduced, sorted by leading term)."""
    basis = []
    for g in gens:
        if g:
            lead = leading(g)
            basis.append(pscale(g, 1 / lead[1]))
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        pairs.sort(key=lambda ij: term_key(
            mono_lcm(leading(basis[ij[0]])[0], leading(basis[ij[1]])[0])))
        i, j = pairs.pop(0)
        rem = normal_form(s_poly(basis[i], basis[j]), basis)
        if rem:
            rem = pscale(rem, 1 / leading(rem)[1])
            basis.append(rem)
            pairs.extend((len(basis) - 1, k) for k in range(len(basis) - 1))
    # minimalize: drop elements whose lead is divisible by another lead
    leads = [leading(g)[0] for g in basis]
    keep = []
    for i, g in enumerate(basis):
        if not any(j != i and mono_divides(leads[j], leads[i])
                   and (leads[j] != leads[i] or j < i)
                   for j in range(len(basis))):
            keep.append(g)
    # inter-reduce tails
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lead_m, _ = leading(g)
        tail = dict(g)
        tail.pop(lead_m)
        tail = normal_form(tail, others) if others else tail
        reduced.append(padd({lead_m: Fraction(1)}, tail))
    reduced.sort(key=lambda g: term_key(leading(g)[0]))
    return reduced


def standard_monomials(lead_monomials, nvars):
    """Monomials divisible by no leading monomial, sorted by the term order.

    Requires a zero-dimensional quotient: each variable must admit a pure
    power among the leading monomials, which bounds the search box.
    """
    bounds = []
    for j in range(nvars):
        pure = [m[j] for m in lead_monomials
                if m[j] > 0 and all(m[i] == 0 for i in range(nvars) if i != j)]
        if not pure:
            raise ValueError(f"quotient is not finite-dimensional in variable {j}")
        bounds.append(min(pure))
    out = []
    for exps in product(*[range(b) for b in bounds]):
        if not any(mono_divides(lm, exps) for lm in lead_monomials):
            out.append(exps)
    out.sort(key=term_key)
    return out


def render_poly(p, var_names, coeff_str=str):
    """Deterministic human-readable form, leading term first."""
    if not p:
        return "0"
    parts = []
    for m in sorted(p, key=term_key, reverse=True):
        c = p[m]
        mono = "*".join(
            f"{var_names[j]}^{e}" if e > 1 else var_names[j]
            for j, e in enumerate(m) if e)
        cs = coeff_str(c)
        if mono:
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        else:
            parts.append(cs)
    text = " + ".join(parts)
    return text.replace("+ -", "- ")
