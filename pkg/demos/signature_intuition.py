"""What path signatures measure, on paths you can check by hand.

The signature of a path is the sequence of its iterated integrals. Level 1
is the total increment, level 2 contains the (signed) areas between pairs
of coordinates, and higher levels capture finer order-of-variation
information. Chen's identity says the signature of a concatenated path is
the tensor product of the pieces' signatures — that is what makes the
dyadic-window transform cheap.

Run:  python3 demos/signature_intuition.py
"""

import numpy as np

from tsfeatbench.signature import (
    chen_concat,
    dyadic_windows,
    signature,
    time_augment,
)

# a unit square traversed counter-clockwise: zero net increment,
# enclosed (Levy) area 1 = antisymmetric part of level 2
square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
sig = signature(square, depth=2)
level2 = sig.levels[1].reshape(2, 2)
print("unit square, counter-clockwise")
print("  level 1 (net increment):", sig.levels[0])
print("  level 2:")
print(level2)
print("  enclosed area = (S(12) - S(21)) / 2 =",
      (level2[0, 1] - level2[1, 0]) / 2)
print()

# Chen: signature(AB) = signature(A) (x) signature(B)
path = np.random.default_rng(0).normal(size=(12, 2))
left, right = signature(path[:7], 4), signature(path[6:], 4)
glued = chen_concat(left, right)
full = signature(path, depth=4)
err = np.max(np.abs(glued.flatten() - full.flatten()))
print(f"Chen identity on a random 12-point path: max abs error {err:.2e}")
print()

# a univariate series becomes a 2-d path via time augmentation, then each
# dyadic window contributes one signature; window (0, m-1) is the whole series
series = np.sin(np.linspace(0.0, 4 * np.pi, 33))
points = time_augment(series)
print("dyadic windows over m=33 (depth 2):", dyadic_windows(33, 2))
whole = signature(points, depth=3)
print("whole-series signature terms per level:",
      [len(level) for level in whole.levels])
print("flattened feature row length:", whole.term_count())
