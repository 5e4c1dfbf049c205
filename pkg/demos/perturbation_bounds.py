"""Quantitative stability and spectral bounds for perturbed walks.

Everything here is a certified inequality that the library both proves
(from kernel structure) and measures (from the stationary vector), so each
line prints a bound next to the exact quantity it dominates.
"""

import numpy as np

import wavechain as w


def sticky_demo():
    print("sticky permutation walks (one reinforced state):")
    for n, delta in ((4, 0.05), (4, 0.1), (5, 0.1)):
        s = w.sticky_permutation_system(n, tuple(range(n)), delta)
        measured, bound = w.sticky_stability_check(s, delta)
        print(
            f"  S_{n}, delta={delta}: max/min = {measured:.6f} "
            f"<= {bound:.6f} = 1/(1-eps)"
        )
        assert measured <= bound + 1e-10


def minmax_demo():
    n, eps = 9, 1.0
    base = w.lazy_circle_kernel(n, eps)
    s = w.make_wave_system(base, w.circle_shift(n, -1))
    pi = w.stationary_distribution(s.shifted)
    support = (0, 1)
    c = w.minmax_ratio_bound(s.shifted, pi, support)
    print(
        f"lazy circle n={n}: pivot comparison proves max/min <= {c:.6f} "
        f"(= 1 + eps = {1 + eps})"
    )
    assert abs(c - (1 + eps)) < 1e-12
    ratio = float(np.max(pi.weights) / np.min(pi.weights))
    print(f"  measured ratio {ratio:.6f}")

    # the same argument under a random bijection -- the bound is map-free
    g = w.make_permutation(base.space, np.random.default_rng(7).permutation(n))
    s2 = w.make_wave_system(base, g)
    pi2 = w.stationary_distribution(s2.shifted)
    c2 = w.minmax_ratio_bound(s2.shifted, pi2, support)
    print(f"  random map: same constant {c2:.6f}")
    assert abs(c2 - (1 + eps)) < 1e-12


def singular_gap_demo():
    n, eps = 9, 1.0
    strength = eps / (2 + eps)
    kernel, _ = w.circle_kernel(n, eps)
    s = w.make_wave_system(kernel, w.circle_shift(n, -1))
    q = w.circle_perturbation_spec(n, eps).base
    computed, bound = w.second_singular_value_bound_gap(
        s.shifted, s.wave_measure, q, strength, 1 + eps
    )
    print(
        f"second singular value, circle n={n}: computed {computed:.6f} "
        f"<= certified {bound:.6f}"
    )
    assert computed <= bound + 1e-10


def boundary_demo():
    n, eps = 11, 2.0
    kernel, _ = w.circle_kernel(n, eps)
    s = w.make_wave_system(kernel, w.circle_shift(n, -1))
    b = w.boundary_analysis(s.shifted, s.wave_measure, (0, 1))
    pi = s.wave_measure.weights
    print(
        f"boundary analysis, circle n={n}: argmax {b.argmax} in A+ "
        f"{sorted(b.a_plus)}, argmin {b.argmin} in A- {sorted(b.a_minus)}"
    )
    assert pi[b.argmax] == np.max(pi) and pi[b.argmin] == np.min(pi)


def main():
    sticky_demo()
    minmax_demo()
    singular_gap_demo()
    boundary_demo()
    print("ok")


if __name__ == "__main__":
    main()
