"""Command surface: fan ingestion, analysis pipeline, report emission.

Three subcommands over a fan (builtin catalog name or JSON file):

* ``analyze``   -- validation, primitive collections/relations/classes, Mori
                   generators, semipositivity, effectivity witnesses.
* ``ifunction`` -- series coefficients, leading terms, two-point invariant
                   table, annihilation certificate.
* ``certify``   -- deformed presentation, module matrices, relation checks,
                   isomorphism certificate.

Exit codes: 0 all certificates passed, 1 certificate failure, 2 input error,
3 theorem hypothesis unmet.  Reports are deterministic; the JSON form carries
``"schema": "toriq/1"`` and renders every rational exactly as a string.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import polynomials as P
from .batyrev import (
    HypothesisUnmet,
    NonUnitLeadingCoefficient,
    RelationNonzero,
    build_deformed_ideal,
    certify_isomorphism,
    module_matrices,
    relation_check,
)
from .catalog import CATALOG, builtin_fan
from .cohomring import build_cohomology_ring, graded_dimensions, render_class
from .fan import ValidationError, make_fan, validate_complete, validate_smooth
from .gkz import (
    AnnihilationFailure,
    PositiveHbarPower,
    annihilation_certificate,
    extract_relation,
    extract_two_point_invariants,
    gkz_operator,
    i_function,
    leading_terms,
)
from .lattice import solve_rational
from .moricone import NoPositiveFunctional, effectivity_witness, mori_data

SCHEMA = "toriq/1"


class ParseError(ValueError):
    """Fan file is structurally malformed."""


# --- ingestion ----------------------------------------------------------------


def ingest(source):
    """Builtin name or path to a fan JSON file -> validated Fan."""
    if source in CATALOG:
        fan = builtin_fan(source)
    else:
        try:
            with open(source) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{source} is not valid JSON: {exc}") from exc
        fan = fan_from_dict(data, origin=source)
    report = validate_smooth(fan)
    if not report.ok:
        raise ValidationError(f"fan is not smooth: {report.detail}")
    report = validate_complete(fan)
    if not report.ok:
        raise ValidationError(f"fan is not complete: {report.detail}")
    return fan


def fan_from_dict(data, origin="<fan>"):
    if not isinstance(data, dict):
        raise ParseError(f"{origin}: expected a JSON object")
    for key in ("dim", "rays", "max_cones"):
        if key not in data:
            raise ParseError(f"{origin}: missing field {key!r}")
    dim = data["dim"]
    rays = data["rays"]
    cones = data["max_cones"]
    if not isinstance(dim, int):
        raise ParseError(f"{origin}: dim must be an integer")
    if not isinstance(rays, list) or not all(
            isinstance(u, list) and all(isinstance(x, int) for x in u)
            for u in rays):
        raise ParseError(f"{origin}: rays must be lists of integers")
    if not isinstance(cones, list) or not all(
            isinstance(c, list) and all(isinstance(i, int) for i in c)
            for c in cones):
        raise ParseError(f"{origin}: max_cones must be lists of integers")
    for c in cones:
        for i in c:
            if not 1 <= i <= len(rays):
                raise ParseError(
                    f"{origin}: cone index {i} out of range (1-based)")
    try:
        return make_fan(dim, [tuple(u) for u in rays],
                        [tuple(i - 1 for i in c) for c in cones],
                        name=str(data.get("name", "")))
    except ValidationError:
        raise
    except Exception as exc:  # defensive: surface anything else as ingestion
        raise ParseError(f"{origin}: {exc}") from exc


# --- rendering helpers ----------------------------------------------------------


def frac_str(x):
    return str(Fraction(x))


def _generator_coordinates(md, beta):
    """Integer coordinates of beta over the Mori generators, if simplicial."""
    gens = md.generators
    if not gens:
        return None
    rows = [[g[i] for g in gens] for i in range(len(beta))]
    from .lattice import rref
    if len(rref([list(r) for r in rows])[1]) != len(gens):
        return None  # not simplicial: generators dependent
    sol = solve_rational(rows, list(beta))
    if sol is None or any(x.denominator != 1 or x < 0 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def novikov_monomial_str(md, beta):
    if all(x == 0 for x in beta):
        return "1"
    base = "q^(" + ",".join(str(x) for x in beta) + ")"
    coords = _generator_coordinates(md, beta)
    if coords is None:
        return base
    parts = []
    for i, a in enumerate(coords):
        if a == 1:
            parts.append(f"q{i + 1}")
        elif a > 1:
            parts.append(f"q{i + 1}^{a}")
    return "*".join(parts) if parts else base


def scalar_str(scalar, md):
    """Render a NovikovScalar with generator-coordinate monomials."""
    if not scalar:
        return "0"
    ctx = scalar.ctx
    parts = []
    for beta in sorted(scalar.terms, key=lambda b: (ctx.ell_of(b), b)):
        c = scalar.terms[beta]
        mono = novikov_monomial_str(md, beta)
        if mono == "1":
            parts.append(frac_str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{frac_str(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def basis_monomial_str(ring, mono):
    if not any(mono):
        return "1"
    return "*".join(
        f"{ring.var_names[j]}^{e}" if e > 1 else ring.var_names[j]
        for j, e in enumerate(mono) if e)


def expansion_str(ring, md, expansion):
    """Render a basis expansion with NovikovScalar coefficients."""
    parts = []
    for mono, scalar in zip(ring.basis, expansion):
        if not scalar:
            continue
        mstr = basis_monomial_str(ring, mono)
        sstr = scalar_str(scalar, md)
        if mstr == "1":
            parts.append(sstr)
        elif sstr == "1":
            parts.append(mstr)
        elif sstr == "-1":
            parts.append(f"-{mstr}")
        elif "+" in sstr or " - " in sstr:
            parts.append(f"({sstr})*{mstr}")
        else:
            parts.append(f"{sstr}*{mstr}")
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


def hlaurent_entries(ring, h):
    out = []
    for power in sorted(h.terms, reverse=True):
        out.append({"hbar_power": power,
                    "class": render_class(h.terms[power], coeff_str=frac_str)})
    return out


# --- report builders -----------------------------------------------------------


def fan_block(fan):
    return {
        "name": fan.name,
        "dim": fan.dim,
        "rays": [list(u) for u in fan.rays],
        "max_cones": [[i + 1 for i in cone] for cone in fan.max_cones],
    }


def run_analyze(fan):
    md = mori_data(fan)
    ring = build_cohomology_ring(fan)
    collections = []
    for pc, beta in zip(md.collections, md.generators):
        w = effectivity_witness(fan, pc)
        collections.append({
            "rays": [i + 1 for i in pc.rays],
            "gamma": [i + 1 for i in pc.gamma],
            "coefficients": list(pc.coeffs),
            "class": list(beta),
            "anticanonical_degree": sum(beta),
            "witness": {
                "degrees": list(w.degrees),
                "pattern": list(w.pattern),
                "sigma_max": [i + 1 for i in w.sigma_max],
            },
        })
    return {
        "schema": SCHEMA,
        "command": "analyze",
        "fan": fan_block(fan),
        "validation": {"smooth": True, "complete": True},
        "euler_characteristic": len(fan.max_cones),
        "cohomology": {
            "dimension": ring.dim,
            "graded_dimensions": graded_dimensions(ring),
        },
        "primitive_collections": collections,
        "mori": {
            "generators": [list(g) for g in md.generators],
            "positive_functional": list(md.ell),
            "semipositive": md.semipositive,
            "fano": all(sum(g) > 0 for g in md.generators),
        },
    }


def run_ifunction(fan, cutoff):
    md = mori_data(fan)
    ring = build_cohomology_ring(fan)
    I = i_function(ring, md, cutoff)
    lt = leading_terms(I)
    coeff_rows = []
    for beta in sorted(I.terms, key=lambda b: (md.ell_of(b), b)):
        coeff_rows.append({
            "class": list(beta),
            "ell": md.ell_of(beta),
            "novikov": novikov_monomial_str(md, beta),
            "terms": hlaurent_entries(ring, I.terms[beta]),
        })
    report = {
        "schema": SCHEMA,
        "command": "ifunction",
        "fan": fan_block(fan),
        "cutoff": cutoff,
        "i_function": coeff_rows,
        "leading_terms": {
            "i0_is_one": lt.i0_is_one,
            "i0_deviations": [
                {"class": list(b), "value": render_class(c, coeff_str=frac_str)}
                for b, c in sorted(lt.i0.items())
                if any(b) or c != ring.one()],
            "i1": [
                {"class": list(b), "value": render_class(c, coeff_str=frac_str)}
                for b, c in sorted(lt.i1.items())],
        },
    }
    failures = []
    try:
        table = extract_two_point_invariants(ring, I)
        entries = []
        for (a, k, beta), val in sorted(table.entries.items(),
                                        key=lambda kv: (kv[0][2], kv[0][1],
                                                        kv[0][0])):
            entries.append({
                "basis_monomial": basis_monomial_str(ring, ring.basis[a]),
                "psi_power": k,
                "class": list(beta),
                "value": frac_str(val),
            })
        report["two_point_invariants"] = {"status": "ok", "entries": entries}
    except PositiveHbarPower as exc:
        status = "skipped" if not md.semipositive else "failed"
        report["two_point_invariants"] = {"status": status, "reason": str(exc)}
        if md.semipositive:
            failures.append(f"two-point extraction failed: {exc}")
    try:
        ann = annihilation_certificate(ring, md, cutoff)
        report["annihilation"] = {
            "status": "ok" if ann.ok else "failed",
            "generators": [
                {"class": list(beta), "certified_ell": certified, "ok": ok}
                for beta, certified, ok in ann.entries],
        }
    except AnnihilationFailure as exc:
        report["annihilation"] = {"status": "failed", "reason": str(exc)}
        failures.append(f"annihilation failed: {exc}")
    if md.semipositive and not lt.i0_is_one:
        failures.append("leading term is not 1 on a semipositive fan")
    report["failures"] = failures
    return report


def run_certify(fan, cutoff):
    md = mori_data(fan)
    ring = build_cohomology_ring(fan)
    report = {
        "schema": SCHEMA,
        "command": "certify",
        "fan": fan_block(fan),
        "cutoff": cutoff,
        "semipositive": md.semipositive,
    }
    if not md.semipositive:
        report["certificate"] = {
            "verdict": "hypothesis_unmet",
            "reason": "theorem not applicable: fan is not semipositive",
        }
        return report
    ideal = build_deformed_ideal(fan, md, ring, cutoff)
    module = module_matrices(ideal)
    relations = [extract_relation(gkz_operator(beta)) for beta in md.generators]
    rel_report = relation_check(ideal, relations)
    cert = certify_isomorphism(ideal, md)
    var_all = [f"x{r + 1}" for r in range(fan.n_rays)]
    report["presentation"] = {
        "eliminated": {
            var_all[rho]: P.render_poly(
                ring.ray_poly(rho), list(ring.var_names), coeff_str=frac_str)
            for rho in ring.sigma0},
        "rules": [
            {"lead": basis_monomial_str(ring, lead),
             "rhs": _rule_rhs_str(ring, md, ideal, lead, elem)}
            for lead, elem in ideal.rules],
        "completion_added": ideal.completion_added,
    }
    stars = []
    for rho in range(fan.n_rays):
        for a, mono in enumerate(ring.basis):
            col = module.star_column(rho, a)
            stars.append({
                "variable": var_all[rho],
                "basis_monomial": basis_monomial_str(ring, mono),
                "value": expansion_str(ring, md, col),
            })
    report["module"] = {
        "basis": [basis_monomial_str(ring, m) for m in ring.basis],
        "star_products": stars,
    }
    report["relations"] = [
        {"relation": _relation_str(md, rel, fan), "vanishes": ok}
        for rel, ok in rel_report]
    report["certificate"] = {
        "annihilation_ok": cert.annihilation.ok,
        "relations_ok": all(ok for _, ok in cert.relations),
        "determinant": scalar_str(cert.determinant, md),
        "det_is_unit": cert.det_is_unit,
        "verdict": cert.verdict,
    }
    return report


def _rule_rhs_str(ring, md, ideal, lead, elem):
    """Right-hand side of a rule: x^lead minus the stored monic element."""
    from .batyrev import dp_sub
    rhs = dp_sub({ideal.ctx.zero_class: {lead: Fraction(1)}}, elem)
    ctx = ideal.ctx
    parts = []
    for beta in sorted(rhs, key=lambda b: (ctx.ell_of(b), b)):
        poly = rhs[beta]
        qstr = novikov_monomial_str(md, beta)
        for mono in sorted(poly, key=P.term_key, reverse=True):
            c = poly[mono]
            mstr = basis_monomial_str(ring, mono) if any(mono) else ""
            pieces = []
            if abs(c) != 1 or (qstr == "1" and not mstr):
                pieces.append(frac_str(abs(c)))
            if qstr != "1":
                pieces.append(qstr)
            if mstr:
                pieces.append(mstr)
            term = "*".join(pieces) or "1"
            parts.append(("-" if c < 0 else "+", term))
    if not parts:
        return "0"
    sign, term = parts[0]
    text = f"-{term}" if sign == "-" else term
    for sign, term in parts[1:]:
        text += f" {sign} {term}"
    return text


def _relation_str(md, rel, fan):
    names = [f"x{r + 1}" for r in range(fan.n_rays)]
    pos = "*".join(f"{names[i]}^{e}" if e > 1 else names[i]
                   for i, e in enumerate(rel.positive_exponents) if e) or "1"
    neg = "*".join(f"{names[i]}^{e}" if e > 1 else names[i]
                   for i, e in enumerate(rel.negative_exponents) if e)
    q = novikov_monomial_str(md, rel.beta)
    rhs = f"{q}*{neg}" if neg else q
    return f"{pos} - {rhs}"


# --- text emission --------------------------------------------------------------


def _text_analyze(report, out):
    fan = report["fan"]
    out.append(f"fan {fan['name'] or '<file>'}: dim {fan['dim']}, "
               f"{len(fan['rays'])} rays, {len(fan['max_cones'])} maximal cones")
    out.append("validation: smooth=ok complete=ok")
    out.append(f"euler characteristic: {report['euler_characteristic']}")
    dims = report["cohomology"]["graded_dimensions"]
    out.append("cohomology dims by degree: " + " ".join(map(str, dims)))
    out.append("primitive collections:")
    for pc in report["primitive_collections"]:
        rays = ",".join(map(str, pc["rays"]))
        gamma = ",".join(map(str, pc["gamma"]))
        out.append(
            f"  P={{{rays}}} gamma={{{gamma}}} c={tuple(pc['coefficients'])} "
            f"class={tuple(pc['class'])} -K.beta={pc['anticanonical_degree']}")
        w = pc["witness"]
        out.append(
            f"    witness: degrees={tuple(w['degrees'])} "
            f"pattern={','.join(w['pattern'])} "
            f"sigma_max={{{','.join(map(str, w['sigma_max']))}}}")
    mori = report["mori"]
    out.append("mori generators: " +
               " ".join(str(tuple(g)) for g in mori["generators"]))
    out.append(f"positive functional: {tuple(mori['positive_functional'])}")
    out.append(f"semipositive: {str(mori['semipositive']).lower()}")
    out.append(f"fano: {str(mori['fano']).lower()}")


def _text_ifunction(report, out):
    out.append(f"reduced series up to ell <= {report['cutoff']} "
               f"({report['fan']['name'] or '<file>'})")
    for row in report["i_function"]:
        terms = "; ".join(
            f"hbar^{t['hbar_power']}: {t['class']}" for t in row["terms"])
        out.append(f"  {row['novikov']} [ell {row['ell']}]: {terms or '0'}")
    lt = report["leading_terms"]
    out.append(f"leading term I0 == 1: {str(lt['i0_is_one']).lower()}")
    for dev in lt["i0_deviations"]:
        out.append(f"  I0 deviation at {tuple(dev['class'])}: {dev['value']}")
    for entry in lt["i1"]:
        out.append(f"  I1 at {tuple(entry['class'])}: {entry['value']}")
    tp = report["two_point_invariants"]
    out.append(f"two-point invariants: {tp['status']}")
    for e in tp.get("entries", []):
        out.append(
            f"  <{e['basis_monomial']} psi^{e['psi_power']}, 1> at "
            f"{tuple(e['class'])} = {e['value']}")
    if "reason" in tp:
        out.append(f"  reason: {tp['reason']}")
    ann = report["annihilation"]
    out.append(f"annihilation: {ann['status']}")
    for g in ann.get("generators", []):
        out.append(f"  box operator of {tuple(g['class'])}: zero on "
                   f"ell <= {g['certified_ell']}")
    for f in report["failures"]:
        out.append(f"FAILURE: {f}")


def _text_certify(report, out):
    out.append(f"certification at cutoff {report['cutoff']} "
               f"({report['fan']['name'] or '<file>'})")
    cert = report["certificate"]
    if cert["verdict"] == "hypothesis_unmet":
        out.append(cert["reason"])
        return
    pres = report["presentation"]
    out.append("eliminations:")
    for var, val in pres["eliminated"].items():
        out.append(f"  {var} = {val}")
    out.append("rewriting rules:")
    for rule in pres["rules"]:
        out.append(f"  {rule['lead']} -> {rule['rhs']}")
    out.append(f"completion added {pres['completion_added']} element(s)")
    out.append("module action:")
    for s in report["module"]["star_products"]:
        out.append(f"  {s['variable']} * {s['basis_monomial']} = {s['value']}")
    out.append("relations:")
    for r in report["relations"]:
        flag = "-> 0" if r["vanishes"] else "NONZERO"
        out.append(f"  {r['relation']} {flag}")
    out.append(f"det(phi) = {cert['determinant']} "
               f"(unit: {str(cert['det_is_unit']).lower()})")
    out.append(f"verdict: {cert['verdict']}")


def render_text(report):
    out = []
    if report["command"] == "analyze":
        _text_analyze(report, out)
    elif report["command"] == "ifunction":
        _text_ifunction(report, out)
    else:
        _text_certify(report, out)
    return "\n".join(out) + "\n"


def validate_report(report):
    """Structural check of the documented schema; used by the round-trip test."""
    assert report["schema"] == SCHEMA
    assert report["command"] in ("analyze", "ifunction", "certify")
    fan = report["fan"]
    for key in ("name", "dim", "rays", "max_cones"):
        assert key in fan
    if report["command"] == "analyze":
        for key in ("validation", "euler_characteristic", "cohomology",
                    "primitive_collections", "mori"):
            assert key in report
    elif report["command"] == "ifunction":
        for key in ("cutoff", "i_function", "leading_terms",
                    "two_point_invariants", "annihilation", "failures"):
            assert key in report
    else:
        for key in ("cutoff", "semipositive", "certificate"):
            assert key in report
    return True


# --- entry point -----------------------------------------------------------------


def exit_code_for(report):
    cert = report.get("certificate")
    if cert is not None:
        if cert["verdict"] == "hypothesis_unmet":
            return 3
        return 0 if cert["verdict"] == "certified" else 1
    if report.get("failures"):
        return 1
    ann = report.get("annihilation")
    if ann is not None and ann["status"] != "ok":
        return 1
    return 0


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("cutoff must be >= 0")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toriq",
        description="exact quantum-deformation certificates for toric fans")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("analyze", "combinatorial and cohomological analysis"),
            ("ifunction", "series coefficients and annihilation certificate"),
            ("certify", "deformed module and isomorphism certificate")):
        cmd = sub.add_parser(name, help=helptext)
        cmd.add_argument("--fan", required=True,
                         help="builtin name (%s) or path to a fan JSON file"
                         % ", ".join(sorted(CATALOG)))
        cmd.add_argument("--cutoff", type=_nonneg_int, default=3,
                         help="truncation degree for the series (default 3)")
        cmd.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        fan = ingest(args.fan)
    except (ParseError, ValidationError, NoPositiveFunctional) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "analyze":
            report = run_analyze(fan)
        elif args.command == "ifunction":
            report = run_ifunction(fan, args.cutoff)
        else:
            report = run_certify(fan, args.cutoff)
    except NoPositiveFunctional as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (AnnihilationFailure, RelationNonzero,
            NonUnitLeadingCoefficient) as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return 1
    except HypothesisUnmet as exc:
        print(f"theorem not applicable: {exc}", file=sys.stderr)
        return 3
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report), end="")
    return exit_code_for(report)


if __name__ == "__main__":
    sys.exit(main())
