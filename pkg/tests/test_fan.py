import pytest

from toriq.catalog import CATALOG, builtin_fan
from toriq.fan import (
    Fan,
    ValidationError,
    make_fan,
    minimal_cone_containing,
    irrelevant_collections,
    validate_complete,
    validate_smooth,
)


def test_catalog_fans_validate():
    for name, fan in CATALOG.items():
        assert validate_smooth(fan).ok, name
        assert validate_complete(fan).ok, name


def test_smoothness_violation_reported():
    fan = make_fan(2, [(1, 0), (1, 2), (-1, -1), (0, 1)],
                   [(0, 1), (1, 3), (2, 3), (0, 2)])
    report = validate_smooth(fan)
    assert not report.ok
    assert "determinant" in report.detail


def test_p1_smooth():
    assert validate_smooth(builtin_fan("P1")).ok


def test_completeness_violation_on_deleted_cone():
    # P2 with the cone {1,3} removed: ray 3 still covered via {2,3}
    fan = make_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)])
    report = validate_complete(fan)
    assert not report.ok
    assert "wall" in report.detail


def test_ingestion_rejects_non_primitive_ray():
    with pytest.raises(ValidationError):
        make_fan(2, [(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def test_ingestion_rejects_duplicate_rays():
    with pytest.raises(ValidationError):
        make_fan(1, [(1,), (1,)], [(0,), (1,)])


def test_ingestion_rejects_uncovered_ray():
    with pytest.raises(ValidationError):
        make_fan(2, [(1, 0), (0, 1), (-1, -1), (1, 1)],
                 [(0, 1), (1, 2), (0, 2)])


def test_ingestion_rejects_wrong_cone_size():
    with pytest.raises(ValidationError):
        Fan(dim=2, rays=((1, 0), (0, 1), (-1, -1)), max_cones=((0, 1, 2),))


def test_minimal_cone_f2():
    f2 = builtin_fan("F2")
    cone, coeffs = minimal_cone_containing(f2, (0, 2))
    assert cone == (1,)
    assert coeffs == (2,)


def test_minimal_cone_zero_vector():
    for fan in CATALOG.values():
        assert minimal_cone_containing(fan, (0,) * fan.dim) == ((), ())


def test_minimal_cone_p2_interior():
    p2 = builtin_fan("P2")
    cone, coeffs = minimal_cone_containing(p2, (1, 1))
    assert cone == (0, 1)
    assert coeffs == (1, 1)


def test_minimal_cone_recombines():
    f2 = builtin_fan("F2")
    for v in [(3, 1), (-2, 5), (0, -1), (7, -3), (-1, 2)]:
        cone, coeffs = minimal_cone_containing(f2, v)
        assert all(c > 0 for c in coeffs)
        recombined = [sum(c * f2.rays[i][k] for i, c in zip(cone, coeffs))
                      for k in range(f2.dim)]
        assert tuple(recombined) == v


def test_wall_count_invariant():
    from itertools import combinations
    for fan in CATALOG.values():
        walls = set()
        total = 0
        for cone in fan.max_cones:
            for w in combinations(cone, fan.dim - 1):
                walls.add(w)
                total += 1
        assert total == 2 * len(walls)


def test_irrelevant_collections_delegate():
    assert irrelevant_collections(builtin_fan("P2")) == [(0, 1, 2)]
    assert irrelevant_collections(builtin_fan("F2")) == [(0, 2), (1, 3)]
    assert irrelevant_collections(builtin_fan("P1")) == [(0, 1)]


def test_minimal_cone_outside_support():
    from toriq.fan import NotInSupport
    # incomplete fan: first quadrant plus the cone over (0,1),(-1,0)
    fan = make_fan(2, [(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)])
    with pytest.raises(NotInSupport):
        minimal_cone_containing(fan, (0, -1))
