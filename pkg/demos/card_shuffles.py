"""Shuffling models on the symmetric group and the binary cycling chain.

Three constructions where the shifted kernel is exactly computable:
deck reversal (two steps of transpose-and-reverse spread mass over exactly
four permutations), cyclic-to-random transpositions (second singular value
exactly 1 - 1/n), and binary cycling (perfectly uniform after N steps,
with a singular spectrum of pure ones and zeros).
"""

import numpy as np

import wavechain as w
from wavechain.groups import one_line_label, sn_elements


def main():
    n = 5
    s = w.deck_reversal_system(n)
    row = w.compose_window(s, 0, 2).dense()[0]
    support = np.flatnonzero(row)
    labels = [one_line_label(sn_elements(n)[i]) for i in support]
    print(f"deck reversal on {n} cards, two steps from the identity:")
    for i, lab in zip(support, labels):
        print(f"  {lab}: {row[i]}")
    assert len(support) == 4 and np.allclose(row[support], 0.25)

    for n in (4, 5):
        s = w.cyclic_to_random_system(n)
        pi = s.wave_measure
        sv = np.sort(
            w.weighted_singular_values(s.shifted, pi, pi).singular_values
        )[::-1]
        print(
            f"cyclic-to-random on {n} cards: sigma_1 = {sv[1]:.12f} "
            f"(exactly 1 - 1/{n})"
        )
        assert abs(sv[1] - (1 - 1 / n)) < 1e-10

    bits = 6
    s = w.binary_cycling_system(bits)
    size = 2**bits
    window = w.compose_window(s, 0, bits).dense()
    print(
        f"binary cycling on {bits} bits: after {bits} steps the window is "
        f"uniform to {np.max(np.abs(window - 1 / size)):.1e}"
    )
    pi = s.wave_measure
    sv = w.weighted_singular_values(s.shifted, pi, pi).singular_values
    ones = int(np.sum(sv > 0.5))
    print(f"  singular values: {ones} ones and {size - ones} zeros")
    assert ones == size // 2
    dev = s.shifted.dense() - np.outer(np.ones(size), pi.weights)
    print(
        f"  fluctuation part is nilpotent: |(K~ - Pi)^{bits}| = "
        f"{np.max(np.abs(np.linalg.matrix_power(dev, bits))):.1e}"
    )
    print("ok")


if __name__ == "__main__":
    main()
