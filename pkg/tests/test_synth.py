import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from densehyper import synth
from densehyper.synth import (f1, generate_planted, hyperedge_sizes, run_di_vs_bs,
                              run_planted_benchmark, sample_seed_set)


def test_size_law_edges():
    rng = np.random.default_rng(0)
    assert (hyperedge_sizes(rng, 100, 1.0, 12) == 2).all()
    assert (hyperedge_sizes(rng, 100, 0.2, 2) == 2).all()
    s = hyperedge_sizes(rng, 1000, 0.01, 7)
    assert s.min() >= 2 and s.max() == 7


def test_size_law_distribution():
    # truncated geometric: P(size = 2 + j) = (1-p)^j p for j < 10, the rest at 12
    rng = np.random.default_rng(1)
    s = hyperedge_sizes(rng, 10_000, 0.2, 12)
    p = 0.2
    probs = np.array([(1 - p) ** j * p for j in range(10)] + [(1 - p) ** 10])
    assert probs.sum() == pytest.approx(1.0)
    mean = float((np.arange(2, 13) * probs).sum())
    assert s.mean() == pytest.approx(mean, abs=0.1)
    counts = np.bincount(s - 2, minlength=11)
    expected = probs * s.size
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < 30.0  # 10 degrees of freedom; p ~ 1e-3 at this value


def test_planted_is_deterministic():
    a = generate_planted(60, 4, m1=30, m2=200, seed=7)
    b = generate_planted(60, 4, m1=30, m2=200, seed=7)
    assert np.array_equal(a.assignment, b.assignment)
    assert np.array_equal(a.H.edge_idx, b.H.edge_idx)
    c = generate_planted(60, 4, m1=30, m2=200, seed=8)
    assert not np.array_equal(a.H.edge_idx, c.H.edge_idx)


def test_planted_edge_counts_and_clusters():
    inst = generate_planted(80, 5, m1=0, m2=300, seed=3)
    assert inst.n_raw_edges == 300
    assert inst.H.m <= 300
    cl = inst.clusters
    for e in range(inst.H.m):
        assert np.unique(cl[inst.H.edge(e)]).size == 1
    assert set(np.unique(inst.assignment).tolist()) <= set(range(1, 6))
    assert (inst.raw_sizes >= 2).all()


def test_planted_arguments():
    with pytest.raises(ValueError):
        generate_planted(3, 5)
    with pytest.raises(ValueError):
        generate_planted(10, 2, p_stop=0.0)
    with pytest.raises(ValueError):
        generate_planted(10, 2, max_size=1)


@pytest.fixture(scope="module")
def small_instance():
    return generate_planted(200, 5, m1=50, m2=1500, seed=11)


def test_seed_sampler_degenerate_cases(small_instance):
    inst = small_instance
    C = inst.members(2)
    full = sample_seed_set(inst, 2, frac=1.0, target_multiple=1.0, seed=0)
    assert full.seeds.tolist() == C.tolist() and full.reached_target
    still = sample_seed_set(inst, 2, frac=0.1, walk_len=0, seed=0)
    assert still.seeds.size == int(np.ceil(0.1 * C.size))
    assert np.isin(still.seeds, C).all()


def test_seed_sampler_target(small_instance):
    inst = small_instance
    C = inst.members(3)
    s = sample_seed_set(inst, 3, seed=5)
    assert s.reached_target
    assert s.seeds.size == round(1.5 * C.size)
    assert np.isin(s.initial, C).all() and np.isin(s.initial, s.seeds).all()
    assert s.seeds.tolist() == sample_seed_set(inst, 3, seed=5).seeds.tolist()


def test_seed_sampler_errors(small_instance):
    with pytest.raises(ValueError):
        sample_seed_set(small_instance, 99)
    with pytest.raises(ValueError):
        sample_seed_set(small_instance, 1, frac=0.0)
    with pytest.raises(ValueError):
        sample_seed_set(small_instance, 1, frac=1.0, target_multiple=0.5)


def test_f1_examples():
    assert f1([1, 2, 3], [1, 2, 3]) == 1.0
    assert f1([1], [2]) == 0.0
    assert f1([1, 2], [2, 3]) == pytest.approx(0.5)
    assert f1([], [1]) == 0.0
    with pytest.raises(ValueError):
        f1([1], [])


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(0, 15)), st.sets(st.integers(0, 15), min_size=1))
def test_f1_range_and_symmetry(D, T):
    s = f1(sorted(D), sorted(T))
    assert 0.0 <= s <= 1.0
    if D:
        assert s == pytest.approx(f1(sorted(T), sorted(D)))
    # depends only on the overlap counts: relabel both sets the same way
    shift = [x + 100 for x in sorted(D)], [x + 100 for x in sorted(T)]
    assert f1(*shift) == s


def test_run_method_rejects_unknown(small_instance):
    with pytest.raises(ValueError):
        synth.run_method(small_instance, "spectral", np.arange(5))


def test_benchmark_no_background_recovers_clusters():
    res = run_planted_benchmark(difficulties=(0,), n=120, k=4, m2=800,
                                methods=("adsh", "adshf"), seeds_per_cluster=2, seed=2)
    assert len(res.rows) == 4 * 2 * 2
    assert all(r["f1"] == 1.0 for r in res.rows)
    assert res.mean_f1("adsh", 0) == 1.0


def test_benchmark_rows_and_csv(tmp_path):
    res = run_planted_benchmark(difficulties=(0, 40), n=100, k=3, m2=500,
                                seeds_per_cluster=1, seed=4)
    assert {r["method"] for r in res.rows} == set(synth.METHODS)
    assert all(0.0 <= r["f1"] <= 1.0 for r in res.rows)
    summ = res.summary()
    assert set(summ) == {(m, d) for m in synth.METHODS for d in (0, 40)}
    path = tmp_path / "rows.csv"
    res.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(synth.CSV_FIELDS)
    assert len(lines) == len(res.rows) + 1


def test_benchmark_thread_count_does_not_change_rows():
    kw = dict(difficulties=(20,), n=100, k=3, m2=400, methods=("adsh", "peeling"),
              seeds_per_cluster=2, seed=9)
    one = run_planted_benchmark(threads=1, **kw).rows
    two = run_planted_benchmark(threads=2, **kw).rows
    strip = [{k: v for k, v in r.items() if k != "millis"} for r in one]
    assert strip == [{k: v for k, v in r.items() if k != "millis"} for r in two]


def test_di_vs_bs_rows():
    H = generate_planted(80, 3, m1=20, m2=200, seed=1).H
    (row,) = run_di_vs_bs([H])
    assert row["di_iters"] <= row["bs_iters"]
    assert row["bs_iters"] == row["bs_expected"]
    assert row["di_density"] >= row["bs_density"] - 1e-9
