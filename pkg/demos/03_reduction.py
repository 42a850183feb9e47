"""
Continued-fraction reduction
============================

A toy instance first, then the two stages used for F_n + F_m = 2^t at a
single k. The full sweep over 3 <= k <= 321 is the ``reduce`` command.
"""

from fractions import Fraction

from kbpow.certreal import CertReal, sqrt_certified
from kbpow.contfrac import convergents, expand
from kbpow.reduction import ReductionInput, dujella_petho, k_context, stage1, stage2_sweep_k

# toy: 0 < m sqrt(2) - n + 1/3 < 2^-k with m <= 100
gamma = sqrt_certified(CertReal(2, 256))
print("sqrt 2 =", list(expand(gamma, 10).partial_quotients[:10]))
inp = ReductionInput(100, gamma, CertReal(Fraction(1, 3), 256), 1, 2)
res = dujella_petho(inp, 1, 40)
print(f"toy: convergent {res.ell_used}, q={res.q}, eps={res.epsilon_lower:.4f}, k < {res.bound:.2f}")

# gamma_k = log 2 / log alpha and its convergents
ctx5 = k_context(5)
print("gamma_5 starts", [c.fraction for c in convergents(expand(ctx5.gamma, 6))])
print("q_119 has", len(str(ctx5.convs[119].q)), "digits")

# stage 1 bounds n - m, stage 2 then bounds n for every gap up to that
r1 = stage1(5)
print(f"stage 1, k=5: eps={r1.epsilon_lower:.3e}, n - m < {r1.bound:.1f}")
s2 = stage2_sweep_k(5, gap_max=int(r1.bound))
print(f"stage 2, k=5: min eps={s2.min_epsilon:.3e} at gap {s2.argmin_gap}, n < {s2.max_bound:.1f}")
