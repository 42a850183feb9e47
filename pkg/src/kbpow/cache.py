"""On-disk cache of dominant roots and convergents.

Each file is plain text: a header line naming the quantity, k and the
precision it was computed at, then ``key=value`` lines of decimal integers.
Roots are stored as exact dyadic mantissa/exponent pairs.  A reloaded ball
has the same midpoint; its radius may grow by one unit in the last place of
arb's 30-bit radius format, so it always contains the ball that was written.

    # kbpow-cache quantity=alpha k=3 precision=1314
    mid_man=...
    mid_exp=...
    rad_man=...
    rad_exp=...

A stored entry is reused only if its precision is at least the requested
one; otherwise it is recomputed and overwritten.
"""

from __future__ import annotations

import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from flint import arb, ctx

from .algebraics import DominantRoot, dominant_root, prime_root
from .certreal import CertReal
from .contfrac import Convergent

log = logging.getLogger(__name__)

HEADER = "# kbpow-cache"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _read(path: Path) -> tuple[dict[str, str], list[str]] | None:
    try:
        lines = path.read_text().splitlines()
    except FileNotFoundError:
        return None
    if not lines or not lines[0].startswith(HEADER):
        log.warning("ignoring malformed cache file %s", path)
        return None
    meta = dict(item.split("=", 1) for item in lines[0][len(HEADER):].split())
    return meta, lines[1:]


@dataclass(frozen=True)
class DiskCache:
    root_dir: Path

    def __post_init__(self):
        object.__setattr__(self, "root_dir", Path(self.root_dir))

    def _root_path(self, k: int) -> Path:
        return self.root_dir / f"alpha_k{k}.txt"

    def _conv_path(self, k: int) -> Path:
        return self.root_dir / f"convergents_k{k}.txt"

    # -- roots -----------------------------------------------------------------

    def load_root(self, k: int, precision_bits: int) -> DominantRoot | None:
        got = _read(self._root_path(k))
        if got is None:
            return None
        meta, body = got
        stored = int(meta.get("precision", 0))
        if meta.get("quantity") != "alpha" or int(meta.get("k", -1)) != k or stored < precision_bits:
            return None
        vals = dict(line.split("=", 1) for line in body if "=" in line)
        with ctx.workprec(stored):
            mid = arb(int(vals["mid_man"])) * arb(2) ** int(vals["mid_exp"])
            rad = arb(int(vals["rad_man"])) * arb(2) ** int(vals["rad_exp"])
            alpha = CertReal(arb(mid, rad), stored)
        if stored != precision_bits:
            alpha = alpha.with_precision(precision_bits)
        return DominantRoot(k, alpha)

    def store_root(self, root: DominantRoot) -> None:
        mid_man, mid_exp = root.alpha.value.man_exp()
        rad_man, rad_exp = root.alpha.radius.man_exp()
        text = (
            f"{HEADER} quantity=alpha k={root.k} precision={root.precision_bits}\n"
            f"mid_man={mid_man}\nmid_exp={mid_exp}\nrad_man={rad_man}\nrad_exp={rad_exp}\n"
        )
        _write_atomic(self._root_path(root.k), text)

    def root(self, k: int, precision_bits: int) -> DominantRoot:
        """Load, or compute and store; the result is also primed into the in-process memo."""
        r = self.load_root(k, precision_bits)
        if r is None:
            r = dominant_root(k, precision_bits)
            self.store_root(r)
        prime_root(r)
        return r

    # -- convergents ---------------------------------------------------------------

    def load_convergents(self, k: int, up_to: int, precision_bits: int) -> list[Convergent] | None:
        got = _read(self._conv_path(k))
        if got is None:
            return None
        meta, body = got
        if (meta.get("quantity") != "gamma_convergents" or int(meta.get("k", -1)) != k
                or int(meta.get("precision", 0)) < precision_bits):
            return None
        convs = []
        for line in body:
            ell, p, q = (int(v) for v in line.split())
            convs.append(Convergent(ell, p, q))
        if len(convs) <= up_to or any(c.index != i for i, c in enumerate(convs)):
            return None
        return convs[: up_to + 1]

    def store_convergents(self, k: int, convs: list[Convergent], precision_bits: int) -> None:
        lines = [f"{HEADER} quantity=gamma_convergents k={k} precision={precision_bits}"]
        lines += [f"{c.index} {c.p} {c.q}" for c in convs]
        _write_atomic(self._conv_path(k), "\n".join(lines) + "\n")
