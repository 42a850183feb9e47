"""Powers of two as sums of two k-generalized Fibonacci numbers.

Exact sequences, certified dominant roots, continued fractions, explicit
bound chains, the two-stage continued-fraction reduction and an exhaustive
search for ``F_n^(k) + F_m^(k) = 2^t``.
"""

from .algebraics import CertificationError, DominantRoot, binet_residual, dominant_root, g_value
from .bounds import BoundChain, absolute_n_bound, crossover_k, key_lemma_bound
from .cache import DiskCache
from .certreal import CertReal, PrecisionError
from .contfrac import CFCertificationError, Convergent, convergents, expand, nearest_int_distance
from .kbonacci import SeqTable, closed_form, generate, naive_terms
from .reduction import ReductionInput, ReductionResult, dujella_petho, stage1, stage2
from .search import Solution, SearchReport, family_member, family_members, search_k, search_range

__version__ = "0.1.0"

__all__ = [
    "BoundChain", "CFCertificationError", "CertReal", "CertificationError", "Convergent",
    "DiskCache", "DominantRoot", "PrecisionError", "ReductionInput", "ReductionResult",
    "SearchReport", "SeqTable", "Solution", "absolute_n_bound", "binet_residual",
    "closed_form", "convergents", "crossover_k", "dominant_root", "dujella_petho", "expand",
    "family_member", "family_members", "g_value", "generate", "key_lemma_bound",
    "naive_terms", "nearest_int_distance", "search_k", "search_range", "stage1", "stage2",
]
