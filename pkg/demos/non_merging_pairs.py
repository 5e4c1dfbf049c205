"""Two small systems where merging fails, each for a different reason.

The four-point example merges in total variation but its relative-sup
distance stays infinite forever: the window kernels keep a deterministic
entry (state 4 returns to itself exactly every other step), so one start
point assigns zero mass where another assigns plenty.  The periodic-class
example is reducible by construction and never merges in any metric.
"""

import math

import numpy as np

import wavechain as w
from wavechain.errors import NotMerging


def main():
    s = w.four_point_example()
    print("four-point example, map =", s.map.forward)

    for n in (2, 4, 10):
        window = w.compose_window(s, 0, n).dense()
        print(f"  K_0{{{n}}}[4,4] = {window[3, 3]}  (deterministic return)")
    assert w.compose_window(s, 0, 60).dense()[3, 3] == 1.0

    tv = [w.pairwise_merging_measure(s, n, "total_variation") for n in (10, 30, 60)]
    print(f"  worst-pair TV at n=10/30/60: {tv[0]:.3e} / {tv[1]:.3e} / {tv[2]:.3e}")
    assert tv[-1] < 0.01

    rs = w.merging_time(s, epsilon=0.01, max_steps=200, metric="relative_sup")
    print(f"  relative-sup: merging_time={rs.merging_time} ({rs.reason})")
    assert rs.merging_time is None
    assert all(math.isinf(v) for _, v in rs.values[1:])

    # no wave to chase either: the shifted kernel is reducible
    assert s.wave_measure_or_none() is None
    try:
        w.wave_bound(s, 0, 0, 10)
    except NotMerging as exc:
        print(f"  wave bound refuses: {exc}")

    p = w.periodic_class_example(3, 2)
    print("periodic classes (3 blocks of 2): order", p.order)
    window = w.compose_window(p, 0, 12).dense()
    alive = np.count_nonzero(window[0])
    print(f"  mass from state 0 after 12 steps touches {alive}/6 states")
    assert alive < 6
    print("ok")


if __name__ == "__main__":
    main()
