"""
k-generalized Fibonacci numbers
===============================

Exact tables of F_n^(k), the closed form on the early window, and how
close the terms stay to g(alpha, k) alpha^(n-1).
"""

from kbpow import binet_residual, closed_form, dominant_root, generate

# Tribonacci: k = 3. Indices start at -(k-2) with zeros, then F_1 = 1
tri = generate(3, 12)
print("tribonacci:", [tri[n] for n in range(1, 13)])

# the table grows in place; the update is F_n = 2 F_{n-1} - F_{n-k-1}
tri.extend(40)
print("F_40^(3) =", tri[40])

# for 2 <= n <= 2k+2 the terms have a closed form
k = 6
t = generate(k, 2 * k + 2)
for n in range(2, 2 * k + 3):
    print(f"n={n:2d}  F_n={t[n]:5d}  closed form={closed_form(k, n):5d}")

# the dominant term alone reproduces F_n to within 1/2
root = dominant_root(5, 300)
t5 = generate(5, 60)
for n in (1, 10, 30, 60):
    r = binet_residual(5, n, t5, root)
    print(f"|F_{n} - g alpha^{n-1}| <= {r.upper_float():.3e}")
