"""
Certified dominant roots
========================

The root of x^k - x^(k-1) - ... - 1 in (2(1 - 2^-k), 2), as a ball that is
guaranteed to contain it, and the Binet coefficient g(alpha, k).
"""

from kbpow import dominant_root, g_value

for k in (2, 3, 4, 10, 50):
    root = dominant_root(k, 256)
    print(f"k={k:3d}  alpha={root.alpha.str(25)}  g={g_value(root).str(12)}")

# precision is chosen by the caller; the radius shrinks with it
for bits in (64, 256, 1024):
    a = dominant_root(3, bits).alpha
    print(f"{bits:5d} bits: radius {float(a.radius):.2e}")

# alpha approaches 2 quickly: 2 - alpha is about 2^-k
for k in (10, 20, 40):
    a = dominant_root(k, k + 128).alpha
    print(f"k={k}: 2 - alpha = {float(2 - a):.3e}, 2^-k = {2.0**-k:.3e}")
