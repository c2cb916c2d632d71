import pytest

from toriq.catalog import CATALOG, SEMIPOSITIVE, builtin_fan
from toriq.cohomring import build_cohomology_ring, divisor_class
from toriq.gkz import (
    AnnihilationReport,
    InsufficientCutoff,
    PositiveHbarPower,
    annihilation_certificate,
    apply_gkz_operator,
    extract_relation,
    extract_two_point_invariants,
    gkz_coefficient,
    gkz_operator,
    i_function,
    leading_terms,
    reconstruct_coefficient,
)
from toriq.moricone import mori_data
from toriq.novikov import HLaurent


def setup(name):
    fan = builtin_fan(name)
    return fan, mori_data(fan), build_cohomology_ring(fan)


def test_coefficient_zero_class_is_one():
    for name in ("P1", "P2", "F2"):
        _, _, ring = setup(name)
        beta0 = (0,) * ring.fan.n_rays
        assert gkz_coefficient(ring, beta0) == HLaurent.one(ring)


def test_coefficient_p2_generator():
    _, _, ring = setup("P2")
    h = ring.variable_class(0)
    c = gkz_coefficient(ring, (1, 1, 1))
    assert c.terms == {
        -3: ring.one(),
        -4: h.scale(-3),
        -5: (h * h).scale(6),
    }


def test_coefficient_p1_generator():
    _, _, ring = setup("P1")
    h = ring.variable_class(0)
    c = gkz_coefficient(ring, (1, 1))
    assert c.terms == {-2: ring.one(), -3: h.scale(-2)}


def test_coefficient_f2_first_generator():
    _, _, ring = setup("F2")
    d2 = divisor_class(ring, 1)
    c = gkz_coefficient(ring, (1, -2, 1, 0))
    assert c.coefficient(-1) == d2.scale(-1)
    assert not c.coefficient(0)
    # full value: D2(D2 - hbar) (D1 + hbar)^-1 (D3 + hbar)^-1 with D1 = D3 = x1
    x1 = ring.variable_class(0)
    lead = HLaurent(ring, {0: d2, 1: ring.one().scale(-1)}) * \
        HLaurent.of_class(d2)
    inv = HLaurent(ring, {0: x1, 1: ring.one()})
    assert inv * inv * c == lead


def test_hbar_power_counting():
    # lowest/highest powers follow the case analysis: max power is -N where
    # N = sum d_rho + #{d_rho <= -1}
    for name in ("P2", "F1", "F2", "F3", "BlP2"):
        fan, md, ring = setup(name)
        from toriq.moricone import enumerate_effective
        for beta in enumerate_effective(md, 3):
            if all(x == 0 for x in beta):
                continue
            c = gkz_coefficient(ring, beta)
            N = sum(beta) + sum(1 for d in beta if d <= -1)
            if c:
                assert c.max_power() <= -N, (name, beta)
                if N > 0:
                    assert not c.coefficient(0), (name, beta)


def test_i_function_p1_cutoff1():
    _, md, ring = setup("P1")
    h = ring.variable_class(0)
    I = i_function(ring, md, 1)
    assert I.coefficient((0, 0)) == HLaurent.one(ring)
    assert I.coefficient((1, 1)).terms == {-2: ring.one(), -3: h.scale(-2)}
    assert set(I.terms) == {(0, 0), (1, 1)}


def test_i_function_cutoff0_is_one():
    for name in SEMIPOSITIVE:
        fan, md, ring = setup(name)
        I = i_function(ring, md, 0)
        assert set(I.terms) == {(0,) * fan.n_rays}
        assert I.coefficient((0,) * fan.n_rays) == HLaurent.one(ring)


def test_leading_terms_semipositive():
    for name in SEMIPOSITIVE:
        fan, md, ring = setup(name)
        for cutoff in range(5):
            lt = leading_terms(i_function(ring, md, cutoff))
            assert lt.i0_is_one, (name, cutoff)


def test_leading_terms_f2_i1():
    _, md, ring = setup("F2")
    lt = leading_terms(i_function(ring, md, 2))
    assert lt.i0_is_one
    d2 = divisor_class(ring, 1)
    assert lt.i1[(1, -2, 1, 0)] == d2.scale(-1)


def test_leading_terms_f3_fails():
    _, md, ring = setup("F3")
    lt = leading_terms(i_function(ring, md, 2))
    assert not lt.i0_is_one
    # the hbar^0 obstruction sits at the fiber-class relation
    assert (1, -3, 1, 0) in lt.i0
    d2 = divisor_class(ring, 1)
    assert lt.i0[(1, -3, 1, 0)] == d2.scale(2)


def test_leading_terms_p1_i1_empty():
    _, md, ring = setup("P1")
    lt = leading_terms(i_function(ring, md, 3))
    assert lt.i0_is_one
    assert lt.i1 == {}


def test_two_point_p2():
    _, md, ring = setup("P2")
    I = i_function(ring, md, 2)
    table = extract_two_point_invariants(ring, I)
    beta = (1, 1, 1)
    a_one = ring.basis.index((0,))
    a_h = ring.basis.index((1,))
    a_h2 = ring.basis.index((2,))
    assert table.value(a_h2, 2, beta) == 1
    assert table.value(a_h, 3, beta) == -3
    assert table.value(a_one, 4, beta) == 6
    assert table.value(a_h2, 1, beta) == 0
    assert table.value(a_one, 0, beta) == 0


def test_two_point_p1():
    _, md, ring = setup("P1")
    I = i_function(ring, md, 1)
    table = extract_two_point_invariants(ring, I)
    beta = (1, 1)
    a_one = ring.basis.index((0,))
    a_h = ring.basis.index((1,))
    assert table.value(a_h, 1, beta) == 1
    assert table.value(a_one, 2, beta) == -2


def test_two_point_roundtrip():
    for name in ("P1", "P2", "F2", "BlP2"):
        _, md, ring = setup(name)
        I = i_function(ring, md, 2)
        table = extract_two_point_invariants(ring, I)
        for beta in I.terms:
            if all(x == 0 for x in beta):
                continue
            assert reconstruct_coefficient(ring, table, beta) == \
                I.coefficient(beta), (name, beta)


def test_two_point_degree_matching():
    # dimension axiom: a nonzero <T_a psi^k, 1> at beta forces
    # deg_x(T_a) + k = dim + (-K . beta) - 1
    for name in ("P1", "P2", "F1", "F2", "BlP2", "P1xP2"):
        fan, md, ring = setup(name)
        I = i_function(ring, md, 3)
        table = extract_two_point_invariants(ring, I)
        for (a, k, beta), val in table.entries.items():
            assert val != 0
            assert sum(ring.basis[a]) + k == fan.dim + sum(beta) - 1, \
                (name, a, k, beta)


def test_two_point_rejects_f3():
    _, md, ring = setup("F3")
    I = i_function(ring, md, 2)
    with pytest.raises(PositiveHbarPower):
        extract_two_point_invariants(ring, I)


def test_apply_operator_p1_telescopes():
    _, md, ring = setup("P1")
    I = i_function(ring, md, 4)
    op = gkz_operator((1, 1))
    out = apply_gkz_operator(op, I)
    assert not out


def test_apply_operator_zero_series():
    from toriq.novikov import NovikovContext, NovikovSeries
    _, md, ring = setup("F2")
    ctx = NovikovContext(n_rays=4, ell=md.ell, cutoff=3)
    zero = NovikovSeries(ctx, ring, {})
    out = apply_gkz_operator(gkz_operator((0, 1, 0, 1)), zero)
    assert not out


def test_apply_operator_insufficient_cutoff():
    _, md, ring = setup("P1")
    I = i_function(ring, md, 0)
    with pytest.raises(InsufficientCutoff):
        apply_gkz_operator(gkz_operator((2, 2)), I)


def test_annihilation_all_catalog():
    for name in CATALOG:
        fan, md, ring = setup(name)
        report = annihilation_certificate(ring, md, 3)
        assert isinstance(report, AnnihilationReport)
        assert report.ok, name
        for beta, certified, ok in report.entries:
            assert ok
            assert certified == 3 - md.ell_of(beta)


def test_annihilation_f3():
    # annihilation is a theorem for every smooth projective fan,
    # semipositive or not
    _, md, ring = setup("F3")
    assert annihilation_certificate(ring, md, 3).ok


def test_box_operators_of_all_effective_classes_annihilate():
    # the series satisfies the whole hypergeometric system, not only the
    # operators of the Mori generators
    from toriq.moricone import enumerate_effective
    for name in ("F2", "BlP2", "F3", "P1xP2"):
        _, md, ring = setup(name)
        I = i_function(ring, md, 4)
        for beta in enumerate_effective(md, 2):
            if not any(beta):
                continue
            out = apply_gkz_operator(gkz_operator(beta), I)
            assert not out, (name, beta)


def test_projective_three_space():
    # dim 3 sanity with independently expanded values: the degree-1
    # coefficient of P3 is (h + hbar)^(-4) = hbar^-4 - 4h hbar^-5
    # + 10h^2 hbar^-6 - 20h^3 hbar^-7
    from toriq.fan import make_fan
    from toriq.moricone import mori_data as mk_md
    fan = make_fan(
        3,
        [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
        [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], name="P3")
    md = mk_md(fan)
    assert list(md.generators) == [(1, 1, 1, 1)]
    ring = build_cohomology_ring(fan)
    assert ring.dim == 4
    h = ring.variable_class(0)
    c = gkz_coefficient(ring, (1, 1, 1, 1))
    assert c.terms == {
        -4: ring.one(),
        -5: h.scale(-4),
        -6: (h * h).scale(10),
        -7: (h * h * h).scale(-20),
    }
    I = i_function(ring, md, 2)
    table = extract_two_point_invariants(ring, I)
    beta = (1, 1, 1, 1)
    assert table.value(ring.basis.index((3,)), 3, beta) == 1
    assert table.value(ring.basis.index((2,)), 4, beta) == -4
    assert table.value(ring.basis.index((1,)), 5, beta) == 10
    assert table.value(ring.basis.index((0,)), 6, beta) == -20
    assert annihilation_certificate(ring, md, 3).ok


def test_extract_relation_examples():
    op = gkz_operator((1, -2, 1, 0))
    rel = extract_relation(op)
    assert rel.positive_exponents == (1, 0, 1, 0)
    assert rel.negative_exponents == (0, 2, 0, 0)
    rel = extract_relation(gkz_operator((0, 1, 0, 1)))
    assert rel.positive_exponents == (0, 1, 0, 1)
    assert rel.negative_exponents == (0, 0, 0, 0)
    rel = extract_relation(gkz_operator((1, 1, 1)))
    assert rel.positive_exponents == (1, 1, 1)
    assert rel.negative_exponents == (0, 0, 0)
