import math

import numpy as np
import pytest

from tilediff.inflation import (inflate, patch_to_csv, pf_data, seed_patch,
                                substitution_matrix, truncate)
from tilediff.models import ModelDataError, builtin

S2 = math.sqrt(2)
LAM = 1 + S2


@pytest.fixture(scope="module")
def silver():
    return builtin("silver")


def test_one_step(silver):
    patch = inflate(seed_patch(silver), silver, 1)
    got = {(t, x.coords) for t, x in patch.points}
    assert got == {(0, (0, 0)), (1, (0, 1)), (1, (1, 1))}


def test_zero_steps_identity(silver):
    seed = seed_patch(silver, tile_type=1)
    assert inflate(seed, silver, 0).points == seed.points
    with pytest.raises(ValueError):
        inflate(seed, silver, -1)


def test_two_steps_word(silver):
    patch = inflate(seed_patch(silver), silver, 2)
    assert len(patch) == 7
    order = np.argsort(patch.positions_phys()[:, 0])
    word = "".join("ab"[patch.types()[i]] for i in order)
    assert word == "abbabab"


def test_point_counts_match_matrix_powers(silver):
    M = substitution_matrix(silver)
    for n in range(13):
        patch = inflate(seed_patch(silver), silver, n)
        counts = np.linalg.matrix_power(M, n) @ np.array([1, 0])
        assert len(patch) == counts.sum()
        types = patch.types()
        assert (types == 0).sum() == counts[0]
        assert (types == 1).sum() == counts[1]


def test_positions_in_return_module(silver):
    patch = inflate(seed_patch(silver), silver, 6)
    lat = silver.lattice
    for _, x in patch.points:
        assert lat.integer_coords(x) is not None


def test_type_frequencies_converge(silver):
    patch = inflate(seed_patch(silver), silver, 10)
    types = patch.types()
    freq = np.array([(types == 0).mean(), (types == 1).mean()])
    expect = np.array([LAM - 2, 3 - LAM])
    assert np.max(np.abs(freq - expect)) < 0.02


def test_scaffold_refuses_inflation():
    m = builtin("casper_scaffold")
    with pytest.raises(ModelDataError):
        inflate(seed_patch(m), m, 1)


def test_cap_inflation_stays_in_module():
    cap = builtin("cap")
    patch = inflate(seed_patch(cap), cap, 2)
    M = substitution_matrix(cap)
    counts = np.linalg.matrix_power(M, 2) @ np.eye(24, dtype=int)[0]
    assert len(patch) == counts.sum()
    lat = cap.lattice
    for _, x in patch.points:
        assert lat.integer_coords(x) is not None


def test_truncate(silver):
    patch = inflate(seed_patch(silver), silver, 5)
    r = 10.0
    cut = truncate(patch, r)
    pos = cut.positions_phys()[:, 0]
    assert np.all(np.abs(pos) <= r + 1e-9)
    assert 0 < len(cut) < len(patch)


def test_substitution_matrices():
    assert substitution_matrix(builtin("silver")).tolist() == [[1, 1], [2, 1]]
    assert substitution_matrix(builtin("silver_twisted")).tolist() == [[1, 1], [2, 1]]
    M = substitution_matrix(builtin("cap"))
    assert M.shape == (24, 24)
    lam = np.max(np.abs(np.linalg.eigvals(M.astype(float))))
    assert abs(lam - ((1 + math.sqrt(5)) / 2) ** 4) < 1e-10


def test_pf_data_silver():
    lam, u, v = pf_data(np.array([[1, 1], [2, 1]]), inv_density=4 / (2 + S2))
    assert abs(lam - LAM) < 1e-14
    assert np.allclose(v, [LAM - 2, 3 - LAM], atol=1e-12)
    assert np.allclose(u, [S2, 1.0], atol=1e-12)


def test_pf_data_identity():
    lam, u, v = pf_data(np.array([[1]]))
    assert lam == 1.0
    assert np.allclose(u, [1.0]) and np.allclose(v, [1.0])


def test_pf_data_cap():
    lam, _, v = pf_data(substitution_matrix(builtin("cap")))
    assert abs(lam - ((1 + math.sqrt(5)) / 2) ** 4) < 1e-10
    assert abs(v.sum() - 1.0) < 1e-12


def test_pf_data_rejects_non_primitive():
    with pytest.raises(ValueError):
        pf_data(np.eye(2, dtype=int))


def test_patch_csv(tmp_path, silver):
    patch = inflate(seed_patch(silver), silver, 3)
    out = tmp_path / "patch.csv"
    patch_to_csv(patch, out, model=silver)
    lines = out.read_text().splitlines()
    assert lines[0] == "type,x,y"
    assert len(lines) == len(patch) + 1
    assert lines[1].startswith("a,")
