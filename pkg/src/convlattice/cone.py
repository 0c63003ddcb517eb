"""Double description method over the integers.

Computes generators (extreme rays plus a lineality basis) of a polyhedral
cone ``{y : r . y <= 0 for every row r}``. All arithmetic is on Python
ints; rows and generators are kept primitive (gcd 1).

Adjacency of two rays is decided combinatorially: rays p, q are adjacent
iff no third ray is tight on every constraint that both p and q are tight
on. Zero sets are stored as int bitmasks.
"""

from __future__ import annotations

from typing import Sequence

from .linalg import idot, primitive

IntVec = tuple[int, ...]


def _comb(a: int, u: IntVec, b: int, v: IntVec) -> IntVec:
    return primitive([a * x + b * y for x, y in zip(u, v)])


def extreme_rays(rows: Sequence[Sequence[int]], dim: int) -> tuple[list[IntVec], list[IntVec]]:
    """Return ``(rays, lines)`` generating the cone ``{y : R y <= 0}``.

    ``rays`` are the extreme rays modulo the lineality space spanned by
    ``lines``. When the cone is pointed ``lines`` is empty and ``rays`` is
    the unique minimal generating set, up to positive scaling.
    """
    lines: list[IntVec] = [tuple(int(i == j) for i in range(dim)) for j in range(dim)]
    rays: list[tuple[IntVec, int]] = []

    for idx, row in enumerate(rows):
        bit = 1 << idx
        lvals = [idot(row, ln) for ln in lines]
        j = next((i for i, v in enumerate(lvals) if v), None)
        if j is not None:
            piv = lines.pop(j)
            pv = lvals.pop(j)
            lines = [_comb(pv, ln, -lv, piv) if lv else ln for ln, lv in zip(lines, lvals)]
            sign = 1 if pv > 0 else -1
            moved = []
            for vec, mask in rays:
                rv = idot(row, vec)
                if rv:
                    vec = _comb(abs(pv), vec, -sign * rv, piv)
                moved.append((vec, mask | bit))
            ray0 = piv if pv < 0 else tuple(-x for x in piv)
            moved.append((ray0, bit - 1))
            rays = moved
            continue

        pos, neg = [], []
        kept: list[tuple[IntVec, int]] = []
        for vec, mask in rays:
            v = idot(row, vec)
            if v > 0:
                pos.append((vec, mask, v))
            elif v < 0:
                neg.append((vec, mask, v))
                kept.append((vec, mask))
            else:
                kept.append((vec, mask | bit))
        if pos and neg:
            masks = [m for _, m in rays]
            for pvec, pmask, pval in pos:
                for nvec, nmask, nval in neg:
                    common = pmask & nmask
                    hits = 0
                    for m in masks:
                        if m & common == common:
                            hits += 1
                            if hits > 2:
                                break
                    if hits > 2:
                        continue
                    kept.append((_comb(pval, nvec, -nval, pvec), common | bit))
        rays = kept
    return [v for v, _ in rays], lines
