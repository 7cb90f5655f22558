"""Pure-Python bitmask kernels.  Masks are arbitrary-size ints."""

from __future__ import annotations

from typing import Sequence


def popcount(x: int) -> int:
    return bin(x).count("1")


def maximal_indices(masks: Sequence[int]) -> list[int]:
    order = sorted(range(len(masks)), key=lambda i: (-popcount(masks[i]), i))
    kept: list[int] = []
    for i in order:
        m = masks[i]
        for j in kept:
            if m & ~masks[j] == 0:
                break
        else:
            kept.append(i)
    kept.sort()
    return kept


def intersect_maximal(a: Sequence[int], b: Sequence[int]) -> list[tuple[int, int, int]]:
    first: dict[int, tuple[int, int]] = {}
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            first.setdefault(x & y, (i, j))
    masks = list(first)
    return [(masks[t], *first[masks[t]]) for t in maximal_indices(masks)]


def ledger_accept(gimel: Sequence[int], inside: Sequence[int], share_num: int, share_den: int, lam_num: int, lam_den: int) -> bool:
    scale = share_den * lam_den
    for v in gimel:
        floor_ = popcount(v) * share_num * lam_den - lam_num * share_den
        for h in inside:
            if popcount(v & h) * scale < floor_:
                return False
    return True
