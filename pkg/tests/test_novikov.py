import random
from fractions import Fraction

import pytest

from toriq.catalog import builtin_fan
from toriq.cohomring import CohClass, build_cohomology_ring, divisor_class
from toriq.moricone import mori_data
from toriq.novikov import (
    CutoffMismatch,
    HLaurent,
    NotAUnit,
    NotNilpotent,
    NovikovContext,
    NovikovScalar,
    NovikovSeries,
    invert_unit,
    nilpotent_geometric,
    series_mul,
)


def f2_setup(cutoff=3):
    fan = builtin_fan("F2")
    md = mori_data(fan)
    ring = build_cohomology_ring(fan)
    ctx = NovikovContext(n_rays=fan.n_rays, ell=md.ell, cutoff=cutoff)
    return fan, md, ring, ctx


B1 = (1, -2, 1, 0)
B2 = (0, 1, 0, 1)


def test_scalar_arithmetic_and_truncation():
    _, _, _, ctx = f2_setup(cutoff=2)
    q1 = NovikovScalar.monomial(ctx, B1)
    one = NovikovScalar.unit(ctx)
    assert (one + q1) * (one - q1) == one - q1 * q1
    assert q1 * q1 * q1 == NovikovScalar(ctx, {})  # ell = 3 > cutoff
    two_b1 = tuple(2 * x for x in B1)
    assert (q1 * q1).terms == {two_b1: Fraction(1)}


def test_scalar_inverse():
    _, _, _, ctx = f2_setup(cutoff=3)
    q1 = NovikovScalar.monomial(ctx, B1)
    a = NovikovScalar.unit(ctx, 2) + q1
    inv = a.inverse()
    assert inv * a == NovikovScalar.unit(ctx)
    with pytest.raises(NotAUnit):
        q1.inverse()


def test_scalar_cutoff_mismatch():
    _, _, _, ctx2 = f2_setup(cutoff=2)
    _, _, _, ctx3 = f2_setup(cutoff=3)
    with pytest.raises(CutoffMismatch):
        NovikovScalar.unit(ctx2) + NovikovScalar.unit(ctx3)


def test_nilpotent_geometric_square_zero():
    ring = build_cohomology_ring(builtin_fan("P1"))
    h = ring.variable_class(0)  # h^2 = 0
    g = nilpotent_geometric(h, 1)
    assert g.terms == {-1: ring.one(), -2: h.scale(-1)}
    lin = HLaurent(ring, {0: h, 1: ring.one()})  # D + hbar
    assert lin * g == HLaurent.one(ring)


def test_nilpotent_geometric_zero_class():
    ring = build_cohomology_ring(builtin_fan("P1"))
    g = nilpotent_geometric(ring.zero(), 2)
    assert g.terms == {-1: ring.one().scale(Fraction(1, 2))}


def test_nilpotent_geometric_p2():
    ring = build_cohomology_ring(builtin_fan("P2"))
    h = ring.variable_class(0)  # h^3 = 0
    g = nilpotent_geometric(h, 1)
    assert g.terms == {-1: ring.one(), -2: h.scale(-1), -3: h * h}
    lin = HLaurent(ring, {0: h, 1: ring.one()})
    assert lin * g == HLaurent.one(ring)


def test_nilpotent_geometric_exact_inverse_all_m():
    ring = build_cohomology_ring(builtin_fan("F2"))
    for rho in range(4):
        d = divisor_class(ring, rho)
        for m in (-3, -1, 1, 2, 5):
            g = nilpotent_geometric(d, m)
            lin = HLaurent(ring, {0: d, 1: ring.one().scale(m)})
            assert lin * g == HLaurent.one(ring), (rho, m)


def test_nilpotent_geometric_rejects_units():
    ring = build_cohomology_ring(builtin_fan("P1"))
    with pytest.raises(NotNilpotent):
        nilpotent_geometric(ring.one(), 1)


def test_series_identity_and_truncation():
    _, _, ring, ctx = f2_setup(cutoff=1)
    one = NovikovSeries.one(ctx, ring)
    qb = NovikovSeries(ctx, ring, {B1: HLaurent.one(ring)})
    a = one + qb
    assert series_mul(one, a) == a
    # (1 + q)^2 = 1 + 2q at cutoff 1
    sq = series_mul(a, a)
    assert sq == one + qb.scale(2)


def test_series_mul_assoc_comm_random():
    _, _, ring, ctx = f2_setup(cutoff=2)
    rng = random.Random(11)
    classes = [ctx.zero_class, B1, B2, tuple(a + b for a, b in zip(B1, B2))]

    def random_series():
        terms = {}
        for beta in classes:
            if rng.random() < 0.7:
                h = {}
                for power in range(-2, 2):
                    if rng.random() < 0.5:
                        coeffs = [Fraction(rng.randint(-3, 3))
                                  for _ in range(ring.dim)]
                        h[power] = CohClass(ring, coeffs)
                if h:
                    terms[beta] = HLaurent(ring, h)
        return NovikovSeries(ctx, ring, terms)

    for _ in range(12):
        a, b, c = random_series(), random_series(), random_series()
        assert series_mul(a, b) == series_mul(b, a)
        assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))


def test_invert_unit_geometric():
    _, _, ring, ctx = f2_setup(cutoff=3)
    one = NovikovSeries.one(ctx, ring)
    qb = NovikovSeries(ctx, ring, {B2: HLaurent.one(ring)})
    a = one + qb
    inv = invert_unit(a)
    assert series_mul(a, inv) == one
    # geometric series 1 - q + q^2 - q^3
    expected = one - qb + series_mul(qb, qb) - series_mul(series_mul(qb, qb), qb)
    assert inv == expected


def test_invert_unit_with_nilpotent_part():
    _, _, ring, ctx = f2_setup(cutoff=2)
    one = NovikovSeries.one(ctx, ring)
    x1 = ring.variable_class(0)
    a = NovikovSeries(ctx, ring, {
        ctx.zero_class: HLaurent(ring, {0: ring.one(), -1: x1}),
        B1: HLaurent(ring, {-2: ring.one().scale(3)}),
    })
    inv = invert_unit(a)
    assert series_mul(a, inv) == one


def test_invert_unit_rejects_maximal_ideal():
    _, _, ring, ctx = f2_setup(cutoff=2)
    qb = NovikovSeries(ctx, ring, {B1: HLaurent.one(ring)})
    with pytest.raises(NotAUnit):
        invert_unit(qb)
    # scalar part at hbar^1 blocks inversion too
    bad = NovikovSeries(ctx, ring, {
        ctx.zero_class: HLaurent(ring, {0: ring.one(), 1: ring.one()})})
    with pytest.raises(NotAUnit):
        invert_unit(bad)
