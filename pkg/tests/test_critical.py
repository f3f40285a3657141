import math

import numpy as np
import pytest

from ratharmonic import (
    Orientation,
    RationalFunction,
    orientation_at,
    five_zero_example,
    solve_zeros,
    trace_critical_set,
)
from ratharmonic.critical import default_bbox, region_of
from ratharmonic.errors import PoleAt, ResolutionTooCoarse

EXAMPLE_BBOX = (-2.0, 3.0, -2.0, 2.0)


def all_vertices(cs):
    return np.concatenate(cs.polylines)


@pytest.mark.parametrize("power,radius", [(2, 0.5), (3, 1 / math.sqrt(3))])
def test_monomial_critical_circle(power, radius):
    r = RationalFunction([0] * power + [1])
    cs = trace_critical_set(r, (-1, 1, -1, 1), 128)
    assert len(cs.polylines) == 1 and cs.closed == [True]
    err = np.max(np.abs(np.abs(all_vertices(cs)) - radius))
    assert err <= cs.cell_size
    assert err < 1e-10  # edge refinement puts vertices on the curve
    assert len(cs.regions) == 2
    inner = [g for g in cs.regions if g.bounded]
    assert len(inner) == 1 and inner[0].orientation is Orientation.SENSE_PRESERVING


def test_caustic_is_image_of_critical_set():
    r = RationalFunction([0, 0, 1])
    cs = trace_critical_set(r, (-1, 1, -1, 1), 64)
    for p, c in zip(cs.polylines, cs.caustics):
        assert np.allclose(c, np.conj(r(p)) - p)


def test_example_region_orientations_match_zeros():
    r = five_zero_example()
    rep = solve_zeros(r)
    cs = trace_critical_set(r, EXAMPLE_BBOX, 512)
    for h in rep.zeros:
        g = region_of(cs, r, h.location)
        assert g is not None and g.orientation is h.orientation


def test_curve_separates_opposite_orientations():
    r = five_zero_example()
    cs = trace_critical_set(r, EXAMPLE_BBOX, 256)
    d = 1e-3
    for z in all_vertices(cs)[::7]:
        h = 1e-7
        g = complex(
            abs(r.derivative_raw(z + h)) - abs(r.derivative_raw(z - h)),
            abs(r.derivative_raw(z + 1j * h)) - abs(r.derivative_raw(z - 1j * h)),
        )
        n = g / abs(g)
        a, b = orientation_at(r, z + d * n), orientation_at(r, z - d * n)
        assert {a, b} == {Orientation.SENSE_PRESERVING, Orientation.SENSE_REVERSING}


def _hausdorff(a, b):
    d = np.abs(a[:, None] - b[None, :])
    return max(d.min(axis=1).max(), d.min(axis=0).max())


def test_resolution_stability():
    r = five_zero_example()
    lo = trace_critical_set(r, EXAMPLE_BBOX, 128)
    hi = trace_critical_set(r, EXAMPLE_BBOX, 256)
    assert _hausdorff(all_vertices(lo), all_vertices(hi)) <= 2 * lo.cell_size
    assert len(lo.regions) == len(hi.regions) == 3


def test_stability_check_flags_coarse_grid():
    with pytest.raises(ResolutionTooCoarse):
        trace_critical_set(five_zero_example(), EXAMPLE_BBOX, 8, check_stability=True)
    cs = trace_critical_set(five_zero_example(), EXAMPLE_BBOX, 64, check_stability=True)
    assert len(cs.regions) == 3


def test_orientation_at():
    r = five_zero_example()
    assert orientation_at(r, 1 + math.sqrt(2)) is Orientation.SENSE_PRESERVING
    assert orientation_at(r, 0.5) is Orientation.SENSE_REVERSING
    with pytest.raises(PoleAt):
        orientation_at(r, complex(0.75, math.sqrt(7) / 4))


def test_default_bbox_covers_points():
    x0, x1, y0, y1 = default_bbox([0j, 2 + 1j, -1 - 3j])
    assert x0 < -1 and x1 > 2 and y0 < -3 and y1 > 1


def test_json():
    d = trace_critical_set(five_zero_example(), EXAMPLE_BBOX, 64).to_json()
    assert d["resolution"] == 64 and len(d["regions"]) == 3
    assert d["max_vertex_error"] < 1e-8
