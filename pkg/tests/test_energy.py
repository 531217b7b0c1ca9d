"""Structured set construction, collision energy, and the image inequality."""

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import kfk

import oracles


def test_energy_worked_example_tau(tables_1e4):
    report = kfk.additive_energy(np.arange(1, 11), tables_1e4["tau"])
    assert report.set_size == 10
    assert report.energy == 14
    assert report.off_diagonal == 4
    assert report.image_size == 8  # {2,4,5,7,9,10,12,14}
    assert report.cs_bound == 8  # ceil(100/14)


def test_energy_identity_map_is_collision_free():
    zero = kfk.table_from_values(np.zeros(10, dtype=np.int64), kind="user")
    report = kfk.additive_energy(np.arange(1, 11), zero)
    assert report.energy == report.set_size == report.image_size == 10
    assert report.off_diagonal == 0


def _brute_energy(index_set, table):
    vals = Counter(
        int(n + table.signed()[n - table.interval.lo]) for n in index_set
    )
    return sum(c * c for c in vals.values()), len(vals)


@pytest.mark.parametrize("kind", ["omega", "tau", "phi"])
def test_energy_matches_quadratic_brute_force(kind, tables_1e4):
    index_set = np.arange(1, 1001)
    report = kfk.additive_energy(index_set, tables_1e4[kind])
    energy, image = _brute_energy(index_set, tables_1e4[kind])
    assert report.energy == energy
    assert report.image_size == image
    assert report.off_diagonal % 2 == 0
    assert report.image_size * report.energy >= report.set_size**2


@settings(deadline=None, max_examples=40)
@given(members=st.sets(st.integers(1, 10**4), min_size=1, max_size=400))
def test_energy_invariants_on_random_sets(tables_1e4, members):
    index_set = np.array(sorted(members), dtype=np.int64)
    report = kfk.additive_energy(index_set, tables_1e4["omega"])
    energy, image = _brute_energy(index_set, tables_1e4["omega"])
    assert report.energy == energy
    assert report.image_size == image
    assert report.energy >= report.set_size
    assert report.off_diagonal % 2 == 0
    assert report.image_size * report.energy >= report.set_size**2


def test_image_lower_bound_worked_example(tables_1e4):
    report = kfk.image_lower_bound(np.arange(1, 11), tables_1e4["tau"], 10)
    assert report.in_range == 6
    assert report.tail == 2  # values 12 and 14 inside (10, 10 + max tau]
    assert report.max_shift == 4
    assert report.cs_holds


def test_proof_set_minimal_x():
    ps = kfk.build_proof_set(kfk.ProofSetSpec(x=16))
    assert ps.spec.y == 3
    assert ps.n.tolist() == [5, 7, 10, 11, 13, 14, 15]
    assert ps.l.tolist() == [1, 1, 2, 1, 1, 2, 3]
    assert ps.p.tolist() == [5, 7, 5, 11, 13, 7, 5]


def test_proof_set_conditions_hold():
    spec = kfk.ProofSetSpec(x=10**5)
    ps = kfk.build_proof_set(spec)
    y = spec.y
    lo_w, hi_w = spec.omega_window
    assert np.all(ps.n == ps.l * ps.p)
    assert np.all(ps.n <= spec.x)
    assert np.all(ps.l <= y)
    assert np.all(ps.p > y)
    assert len(np.unique(ps.n)) == ps.size  # decomposition is unique
    assert np.all(np.diff(ps.n) > 0)  # sorted ascending
    for l in np.unique(ps.l):
        assert oracles.squarefree(int(l)) == 1
        assert lo_w <= oracles.omega(int(l)) <= hi_w
    for p in ps.p[:50]:
        assert oracles.omega(int(p)) == 1 and oracles.tau(int(p)) == 2


def test_proof_set_odd_parity_filters_even_l():
    ps = kfk.build_proof_set(kfk.ProofSetSpec(x=10**4, parity="odd"))
    assert np.all(ps.l % 2 == 1)
    both = kfk.build_proof_set(kfk.ProofSetSpec(x=10**4))
    assert ps.size < both.size
    assert 0 < ps.density <= 1


def test_proof_set_deterministic():
    a = kfk.build_proof_set(kfk.ProofSetSpec(x=10**4))
    b = kfk.build_proof_set(kfk.ProofSetSpec(x=10**4))
    assert np.array_equal(a.n, b.n)
    assert np.array_equal(a.l, b.l)
    assert np.array_equal(a.p, b.p)


def test_proof_set_density_frozen_at_1e6():
    ps = kfk.build_proof_set(kfk.ProofSetSpec(x=10**6))
    assert ps.size == 353867
    report = kfk.additive_energy(ps.n, kfk.tabulate("omega", (1, 10**6 + 1)))
    assert report.energy == 418585
    assert report.off_diagonal % 2 == 0
    assert report.image_size * report.energy >= report.set_size**2
    # collision load stays O(1)-sized at desk scale; reported, not asserted
    assert report.energy / report.set_size < 2.0


def test_proof_set_validation():
    with pytest.raises(ValueError):
        kfk.ProofSetSpec(x=15)
    with pytest.raises(ValueError):
        kfk.ProofSetSpec(x=100, parity="even")
    with pytest.raises(ValueError):
        kfk.ProofSetSpec(x=100, width=0)


def test_energy_rejects_out_of_table_indices(tables_1e4):
    with pytest.raises(ValueError):
        kfk.additive_energy(np.array([10**5]), tables_1e4["tau"])
    with pytest.raises(ValueError):
        kfk.additive_energy(np.array([], dtype=np.int64), tables_1e4["tau"])
