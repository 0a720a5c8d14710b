import math

import numpy as np
import pytest

from tilediff.models import builtin
from tilediff.windows import (CAP_BOUNDARY_DIM, TWISTED_BOUNDARY_DIM,
                              WindowCloud, box_counting_dimension,
                              hull_intervals, ifs_step, interior_cells,
                              iterate_windows, render_windows, seed_clouds,
                              volume, window_volume_from_patch)

S2 = math.sqrt(2)
LAM = 1 + S2


@pytest.fixture(scope="module")
def silver():
    return builtin("silver")


@pytest.fixture(scope="module")
def twisted():
    return builtin("silver_twisted")


def test_silver_hull_endpoints(silver):
    (a_lo, a_hi), (b_lo, b_hi) = hull_intervals(silver)
    assert abs(a_lo - (S2 / 2 - 1)) < 1e-12
    assert abs(a_hi - S2 / 2) < 1e-12
    assert abs(b_lo - (-1 - S2 / 2)) < 1e-12
    assert abs(b_hi - (S2 / 2 - 1)) < 1e-12
    # the two intervals share exactly one endpoint
    assert abs(a_lo - b_hi) < 1e-12


def test_hull_requires_1d():
    with pytest.raises(ValueError):
        hull_intervals(builtin("cap"))


def test_fixed_point_property(silver):
    cloud = iterate_windows(silver, 22)
    nxt = ifs_step(cloud, silver)
    # one more step moves the grid-projected cloud by at most one cell
    for a, b in zip(cloud.cells, nxt.cells):
        sa = set(map(tuple, a))
        sb = set(map(tuple, b))
        for cell in sb - sa:
            assert any(tuple(np.add(cell, d)) in sa
                       for d in ([1], [-1], [0]))


def test_hausdorff_contraction_rate(silver):
    """Consecutive-generation Hausdorff distance shrinks at ~|contraction|."""
    cloud = seed_clouds(silver, cell_size=1e-7)
    gens = [cloud]
    for _ in range(16):
        gens.append(ifs_step(gens[-1], silver))

    def hausdorff(c1, c2):
        x = np.sort(np.concatenate([c.astype(float)[:, 0] for c in c1.cells]))
        y = np.sort(np.concatenate([c.astype(float)[:, 0] for c in c2.cells]))
        def directed(a, b):
            idx = np.clip(np.searchsorted(b, a), 1, len(b) - 1)
            return np.max(np.minimum(np.abs(a - b[idx - 1]), np.abs(a - b[idx])))
        return max(directed(x, y), directed(y, x))

    dists = [hausdorff(gens[n], gens[n + 1]) for n in range(5, 16)]
    ratios = [b / a for a, b in zip(dists, dists[1:])]
    for r in ratios:
        assert 0.2 < r < 0.6  # ~ 1/lambda = 0.4142
    assert abs(np.mean(ratios) - (LAM - 2)) < 0.1


def test_silver_volume(silver):
    cloud = iterate_windows(silver, 24)
    v, bracket = volume(cloud)
    assert abs(v - LAM) / LAM < 0.01
    assert abs(v - LAM) <= bracket
    per = volume(cloud, per_type=True)
    assert abs(per[0][0] - 1.0) < 0.01
    assert abs(per[1][0] - S2) < 0.01


def test_twisted_volume_from_patch(twisted):
    v = window_volume_from_patch(twisted, 12)
    assert abs(v - LAM) / LAM < 0.02


def test_silver_volume_from_patch(silver):
    v = window_volume_from_patch(silver, 12)
    assert abs(v - LAM) / LAM < 0.001


def test_twisted_windows_interleave_only_at_boundaries(twisted):
    """Overlapping hulls, measure-disjoint interiors.

    The two window components alternate below any fixed grid scale, so
    shared cells form a boundary zone whose measure shrinks with the
    resolution, while each type keeps exclusive territory of the order
    of its own volume.
    """
    hulls = hull_intervals(twisted)
    assert max(h[0] for h in hulls) < min(h[1] for h in hulls)  # hulls overlap

    def classify(resolution):
        cloud = iterate_windows(twisted, 28, resolution=resolution)
        a = set(map(tuple, cloud.cells[0]))
        b = set(map(tuple, cloud.cells[1]))
        h = cloud.cell_size
        return (len(a & b) * h, len(a - b) * h, len(b - a) * h)

    shared10, ex_a10, ex_b10 = classify(10)
    shared12, ex_a12, ex_b12 = classify(12)
    # exclusive territory dominates the interleaving zone at both scales
    assert ex_a10 > shared10 and ex_b10 > shared10
    assert ex_a12 > shared12 and ex_b12 > shared12
    # the interleaving zone thins out as the grid refines
    assert shared12 < shared10
    # exclusive territories sit near the true component volumes (1, sqrt2)
    assert abs(ex_a12 - 1.0) < 0.35
    assert abs(ex_b12 - S2) < 0.35


def test_cap_volume_consistent_with_density():
    cap = builtin("cap")
    cloud = iterate_windows(cap, 12, resolution=8)
    v, bracket = volume(cloud)
    mid = v - bracket / 2
    dens = cap.lattice.density * mid
    assert abs(dens - cap.density) / cap.density < 0.02


def test_dimension_constants():
    assert abs(TWISTED_BOUNDARY_DIM - 0.89745) < 5e-5
    assert abs(CAP_BOUNDARY_DIM - 1.3683764) < 1e-6


def test_box_counting_diagnostic(silver):
    cloud = iterate_windows(silver, 20)
    dim = box_counting_dimension(cloud)
    assert 0.8 < dim < 1.2  # diagnostic only, no tight threshold


def test_render_silver(tmp_path, silver):
    cloud = iterate_windows(silver, 14)
    out = tmp_path / "w.svg"
    render_windows(cloud, out, model=silver)
    text = out.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")


def test_render_twisted_with_zoom(tmp_path, twisted):
    cloud = iterate_windows(twisted, 14)
    out = tmp_path / "wt.svg"
    render_windows(cloud, out, model=twisted, zoom=(0.0, 0.5))
    assert "zoom" in out.read_text()


def test_render_empty(tmp_path):
    cloud = WindowCloud((np.zeros((0, 1), np.int64),), 0.01, 0)
    out = tmp_path / "empty.svg"
    render_windows(cloud, out)
    assert out.read_text().startswith("<svg")


def test_render_cap(tmp_path):
    cap = builtin("cap")
    cloud = iterate_windows(cap, 8, resolution=6)
    out = tmp_path / "cap.svg"
    render_windows(cloud, out, model=cap)
    text = out.read_text()
    assert "<rect" in text
    # one color per shape: four colored regions plus the white background
    import re
    fills = set(re.findall(r'fill="(#[0-9a-f]{6})"', text))
    assert len(fills - {"#ffffff"}) == 4
