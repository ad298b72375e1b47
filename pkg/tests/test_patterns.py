import numpy as np

from ultraoregon.automaton import SingleRing, Spiral, Target, ca_run, seed_pattern
from ultraoregon.patterns import (collision_report, first_arrival, fronts, l1_sphere,
                                  periodicity_report, ring_report, rotation_maps,
                                  search_spiral_seed, segment_endpoints, spiral_collision_runs,
                                  spiral_cores, spiral_signature)


def test_ring_front_is_l1_sphere():
    frames = ca_run(seed_pattern(SingleRing(), 21, 21, steps=8), "simple", 8)
    for n, front in enumerate(fronts(frames)):
        if n:
            assert np.array_equal(front, l1_sphere((21, 21), (10, 10), n))
    assert all(r["front_is_sphere"] and r["band_is_annulus"] for r in ring_report(frames, (10, 10)))
    # lit set at step n is two shells thick: the new front and the one behind it
    assert frames[8].sum() == 4 * 8 + 4 * 7


def test_target_periodic():
    frames = ca_run(seed_pattern(Target(), 41, 41, steps=16), "simple", 16)
    rep = periodicity_report(frames, 4)
    assert rep["ok"] and rep["violations"] == 0
    # a single ring is not periodic
    ring = ca_run(seed_pattern(SingleRing(), 41, 41), "simple", 16)
    assert not periodicity_report(ring, 4)["ok"]


def test_first_arrival_distance():
    frames = ca_run(seed_pattern(SingleRing(), 15, 15), "simple", 7)
    ta = first_arrival(frames)
    kk, jj = np.indices((15, 15))
    d = np.abs(kk - 7) + np.abs(jj - 7)
    assert np.array_equal(ta[d <= 7], d[d <= 7])


def test_rotation_map_detects_rotating_block():
    base = np.zeros((8, 8), dtype=np.int64)
    base[1, 1:4] = 1
    frames = [np.rot90(base, t) for t in range(10)]
    maps = rotation_maps(frames, 4)
    assert maps[1][:, 0, 0].all()
    cores = spiral_cores(frames, half=4, run_len=8)
    assert cores and cores[0].sense == 1 and (cores[0].k, cores[0].j) == (3.5, 3.5)


def test_spiral_signature_and_annihilation():
    kind = search_spiral_seed(Spiral(), 81, 81)
    frames = ca_run(seed_pattern(kind, 81, 81, search=False), "simple", 60)
    sig = spiral_signature(frames, segment_endpoints(kind, 81, 81))
    assert sig["ok"]
    senses = sorted(c.sense for c in sig["cores"])
    assert senses == [-1, 1]
    rep = collision_report(*spiral_collision_runs(81, 81, 60))
    assert rep["ok"] and rep["contested_cells"] > 0


def test_horizontal_offset_lacks_signature():
    kind = Spiral()
    frames = ca_run(seed_pattern(kind, 81, 81, search=False), "simple", 40)
    assert not spiral_signature(frames, segment_endpoints(kind, 81, 81))["ok"]


def test_collision_report_flags_interaction():
    a = [np.array([[1, 0]]), np.array([[0, 0]])]
    b = [np.array([[0, 1]]), np.array([[0, 0]])]
    good = [np.array([[1, 1]]), np.array([[0, 0]])]
    bad = [np.array([[1, 1]]), np.array([[1, 0]])]
    assert not collision_report(a, b, good)["ok"]  # no cell reached by both sources
    a2 = [np.array([[1, 0]]), np.array([[0, 1]])]
    b2 = [np.array([[0, 1]]), np.array([[1, 0]])]
    assert collision_report(a2, b2, [np.array([[1, 1]]), np.array([[0, 0]])])["ok"]
    assert not collision_report(a2, b2, bad)["ok"]
