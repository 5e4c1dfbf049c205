import math

import numpy as np
import pytest

import wavechain as w
from wavechain import errors
from wavechain.groups import (
    from_cycles,
    multiply,
    sn_elements,
    sn_index,
    transposition,
)


# ---------------------------------------------------------------- circle

def test_circle_needs_odd_size_and_positive_eps():
    with pytest.raises(errors.EvenN):
        w.circle_kernel(6, 1.0)
    with pytest.raises(ValueError):
        w.circle_kernel(5, 0.0)


def test_circle_kernel_edge_weights():
    k, pi = w.circle_kernel(5, 1.0)
    m = k.dense()
    # one heavy edge between 0 and 1, conductance-weighted rows
    assert m[0, 1] == pytest.approx(2 / 3)
    assert m[0, 4] == pytest.approx(1 / 3)
    assert m[2, 1] == pytest.approx(0.5)
    assert np.allclose(m.sum(axis=1), 1.0)
    assert pi.weights[0] == pytest.approx(pi.weights[1])


def test_circle_closed_form_small_case():
    # N=5, eps=1: the invariant measure of the shifted chain is
    # proportional to (6, 3, 4, 4, 4)
    pi = w.tilde_pi_closed_form_shift_minus1(5, 1.0)
    assert np.max(np.abs(pi.weights * 21 - np.array([6, 3, 4, 4, 4]))) < 1e-12
    base, _ = w.circle_kernel(5, 1.0)
    s = w.make_wave_system(base, w.circle_shift(5, -1))
    assert np.max(np.abs(s.wave_measure.weights - pi.weights)) < 1e-14


def test_lazy_circle_holds_half():
    k = w.lazy_circle_kernel(7, 1.0)
    base, _ = w.circle_kernel(7, 1.0)
    assert np.allclose(k.dense(), 0.5 * np.eye(7) + 0.5 * base.dense())


def test_circle_shift_wraps():
    g = w.circle_shift(5, -1)
    assert list(g.forward) == [4, 0, 1, 2, 3]
    assert w.permutation_order(g) == 5


def test_circle_perturbation_spec_recomposes():
    for n, eps in [(5, 1 / 3), (9, 2.0)]:
        spec = w.circle_perturbation_spec(n, eps)
        kern, _ = w.circle_kernel(n, eps)
        assert spec.support == (0, 1)
        assert np.max(np.abs(spec.base.dense() + spec.delta_matrix
                             - kern.dense())) < 1e-15
        # strength of the edits relative to the unperturbed walk
        assert spec.epsilon == pytest.approx(eps / (2 + eps))


# ------------------------------------------------------- binary cycling

def test_binary_cycling_window_is_uniform():
    s = w.binary_cycling_system(3)
    window = w.compose_window(s, 0, 3).dense()
    assert np.max(np.abs(window - 0.125)) == 0.0


def test_binary_cycling_nilpotent_fluctuation():
    s = w.binary_cycling_system(4)
    kt = s.shifted.dense()
    pi = s.wave_measure.weights
    dev = kt - np.outer(np.ones(16), pi)
    acc = np.linalg.matrix_power(dev, 4)
    assert np.max(np.abs(acc)) < 1e-12
    assert w.eigenvalues(s.shifted).flag == "defective"


def test_binary_cycling_singular_values_split_evenly():
    s = w.binary_cycling_system(3)
    pi = s.wave_measure
    dec = w.weighted_singular_values(s.shifted, pi, pi)
    sv = np.sort(dec.singular_values)[::-1]
    assert np.max(np.abs(sv[:4] - 1.0)) < 1e-12
    assert np.max(np.abs(sv[4:])) < 1e-12


# ----------------------------------------------------------- four point

def test_four_point_windows_alternate_deterministically():
    s = w.four_point_example()
    for n in (2, 4, 10):
        assert w.compose_window(s, 0, n).dense()[3, 3] == 1.0
    for n in (3, 5, 11):
        assert w.compose_window(s, 0, n).dense()[3, 2] == 1.0


def test_four_point_shifted_kernel_is_reducible():
    s = w.four_point_example()
    assert not w.is_irreducible(s.shifted)
    with pytest.raises(errors.WaveMeasureMissing):
        s.wave_measure


# -------------------------------------------------------- card shuffles

def test_deck_reversal_two_step_support():
    for n in (4, 5):
        s = w.deck_reversal_system(n)
        index = sn_index(n)
        start = index[tuple(range(n))]
        row = w.compose_window(s, 0, 2).dense()[start]
        expected = {
            index[tuple(range(n))]: 0.25,
            index[transposition(n, 0, 1)]: 0.25,
            index[transposition(n, 0, n - 1)]: 0.25,
            index[from_cycles(n, [(0, n - 1, 1)])]: 0.25,
        }
        for j, v in enumerate(row):
            assert v == pytest.approx(expected.get(j, 0.0), abs=1e-15)


def test_cyclic_to_random_steps_transpose_fixed_positions():
    """Step i transposes position i-1 with a uniform position."""
    n = 4
    s = w.cyclic_to_random_system(n)
    elems = sn_elements(n)
    index = sn_index(n)
    for i in range(1, n + 1):
        expected = np.zeros((len(elems), len(elems)))
        for ix, x in enumerate(elems):
            for j in range(n):
                t = transposition(n, i - 1, j)
                expected[ix, index[multiply(x, t)]] += 1 / n
        assert np.max(np.abs(w.kernel_at(s, i).dense() - expected)) < 1e-15


def test_cyclic_to_random_map_order():
    s = w.cyclic_to_random_system(4)
    assert s.order == 4
    s5 = w.cyclic_to_random_system(5)
    assert s5.order == 5


def test_sticky_base_holds_extra_mass_at_one_permutation():
    s = w.sticky_permutation_system(4, (0, 1, 2, 3), 0.1)
    m = s.base.dense()
    # lazy transpose-top holds (n+1)/2n; the sticky row adds delta on top
    assert m[0, 0] == pytest.approx(5 / 8 + 0.1)
    assert np.allclose(m.sum(axis=1), 1.0)
    off = m[0, 1:]
    assert np.all(off[off > 0] < 1 / 8)


def test_sticky_delta_range():
    with pytest.raises(errors.DeltaOutOfRange):
        w.sticky_permutation_system(4, (0, 1, 2, 3), 0.0)
    with pytest.raises(errors.DeltaOutOfRange):
        w.sticky_permutation_system(4, (0, 1, 2, 3), 3 / 8)


def test_sticky_large_space_stays_sparse():
    s = w.sticky_permutation_system(5, (0, 1, 2, 3, 4), 0.05)
    assert s.space.size == 120
    assert not s.base.is_sparse or s.base.size <= w.DENSE_LIMIT


# ------------------------------------------------- other model builders

def test_periodic_class_example_is_reducible():
    s = w.periodic_class_example(3, 2)
    assert s.space.size == 6
    assert s.order == 3
    assert not w.is_irreducible(s.shifted)


def test_group_walk_kernel_sums_generator_weights():
    n = 4
    weights = {transposition(n, 0, j): 1 / n for j in range(1, n)}
    weights[tuple(range(n))] = 1 / n
    k = w.group_walk_kernel(w.GroupWalkSpec(n, weights))
    m = k.dense()
    assert np.allclose(m.sum(axis=1), 1.0)
    index = sn_index(n)
    assert m[0, index[transposition(n, 0, 2)]] == pytest.approx(1 / n)


def test_conjugation_map_order_divides_group_order():
    g = w.conjugation_map(4, from_cycles(4, [(0, 1, 2, 3)]))
    assert w.permutation_order(g) == 4


def test_random_regular_walk_is_deterministic_per_seed():
    a = w.random_regular_graph_walk(8, 4, seed=3)
    b = w.random_regular_graph_walk(8, 4, seed=3)
    assert np.array_equal(a.dense(), b.dense())
    rows = a.dense()
    assert np.allclose(rows.sum(axis=1), 1.0)
    assert np.all(np.diag(rows) > 0)  # every vertex carries its loop


def test_random_regular_walk_parity_guard():
    # degree counts the loop, so the simple part is 3-regular on 5
    # vertices: odd degree sum, impossible
    with pytest.raises(errors.DegreeInfeasible):
        w.random_regular_graph_walk(5, 4, seed=0)


def test_random_regular_walk_complete_case():
    k = w.random_regular_graph_walk(4, 4, seed=0)
    assert np.max(np.abs(k.dense() - 0.25)) < 1e-15


def test_single_point_perturbation_strict_shape_strength():
    s = w.sticky_permutation_system(4, (0, 1, 2, 3), 0.1)
    dense = s.base.dense()
    col = dense[:, 0].copy()
    q_oo = 1.0 - (col.sum() - col[0])
    col[0] = q_oo
    q_mat = dense.copy()
    q_mat[0] = col
    spec = w.single_point_perturbation(
        w.make_kernel(s.base.space, q_mat), 0, dense[0] - col, strict_shape=True
    )
    assert spec.epsilon == pytest.approx(0.1 / (1 - q_oo))
    assert spec.support == (0,)


def test_sn_space_labels_are_one_line_words():
    space = w.sn_space(3)
    assert space.size == 6
    assert space.labels[0] == "123"
    assert len(set(space.labels)) == 6
