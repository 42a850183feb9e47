"""
Searching for F_n + F_m = 2^t
=============================

Every n needs one membership probe: 2^t must be the power of two just
above F_n. The family (2^s + k, 2^s + s - 1, 2^s + k - 2, k) explains
all solutions found.
"""

from collections import Counter

from kbpow.search import family_member, family_members, search_k, search_range

print(search_k(5, 30))

rep = search_range(3, 30, 600)
print(f"{len(rep.solutions)} solutions in {rep.pairs_scanned} probes, {len(rep.violations)} with n != t+2")
fam = set(family_members(10, 30, 3, 600))
print("all from the family:", set(rep.solutions) == fam)

# how many family members each k admits
print(sorted(Counter(s.k for s in rep.solutions).items())[:10])

# the smallest k for each s
for s in range(1, 6):
    k = (1 << s) + s - 2
    print(s, family_member(s, max(k, 2)))

# k = 2 is different: (7, 4, 4) has n != t + 2
print(search_range(2, 2, 100).violations)
