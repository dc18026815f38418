"""Connected finite covers of the figure eight as permutation pairs.

A degree-d cover of the two-petal rose is a pair of permutations of
{0..d-1}, one per petal, acting transitively; simultaneous relabeling is
cover isomorphism. Enumeration generates each isomorphism class exactly
once by producing only pairs whose labels agree with the breadth-first
labeling from point 0 and keeping those whose BFS code is minimal over all
start points.

The obstruction: a connected cover compatible with the binary solenoid side
must have a petal cycle of length d with d a power of 2, and with the
ternary side a power of 3, so only d = 1 admits both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .lifting import MonodromySystem, RoseBase

FIGURE_EIGHT = ("a", "b")


@dataclass(frozen=True)
class CoveringPermutationRep:
    """A connected cover of the figure eight: one permutation per petal."""

    degree: int
    perm_a: tuple[int, ...]
    perm_b: tuple[int, ...]

    def perm(self, petal: str) -> tuple[int, ...]:
        if petal == "a":
            return self.perm_a
        if petal == "b":
            return self.perm_b
        raise ValueError(f"unknown petal {petal!r}")

    def as_system(self) -> MonodromySystem:
        points = range(self.degree)
        return MonodromySystem(
            RoseBase(FIGURE_EIGHT),
            points,
            {
                "a": {x: self.perm_a[x] for x in points},
                "b": {x: self.perm_b[x] for x in points},
            },
        )


def cycle_lengths(perm: tuple[int, ...]) -> list[int]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        out.append(length)
    return sorted(out)


def is_transitive(perm_a, perm_b) -> bool:
    d = len(perm_a)
    inv_a = [0] * d
    inv_b = [0] * d
    for x in range(d):
        inv_a[perm_a[x]] = x
        inv_b[perm_b[x]] = x
    seen = [False] * d
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        x = stack.pop()
        for y in (perm_a[x], inv_a[x], perm_b[x], inv_b[x]):
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == d


def is_power(value: int, base: int) -> bool:
    """Exact power test: value == base**k for some k >= 0."""
    if value < 1:
        return False
    while value % base == 0:
        value //= base
    return value == 1


def factorization_obstruction(degree: int) -> bool:
    """Degrees admissible for a cover under both solenoid sides: only 1.

    The degree must simultaneously be a power of 2 and a power of 3.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return is_power(degree, 2) and is_power(degree, 3)


def cyclic_quotient_compatible(
    rep: CoveringPermutationRep, petal: str, base: int
) -> bool:
    """Can the base-fold solenoid side map onto this cover through the petal?

    Necessary condition: the petal's permutation has a cycle of length equal
    to the full degree, and that degree is a power of ``base``.
    """
    if not is_power(rep.degree, base):
        return False
    return any(length == rep.degree for length in cycle_lengths(rep.perm(petal)))


# ---------------------------------------------------------------------------
# exhaustive enumeration up to simultaneous relabeling

_SLOTS_PER_POINT = 4  # sigma_a, sigma_a^-1, sigma_b, sigma_b^-1


def _bfs_code_compare(sigma, inverse, d: int, start: int) -> int:
    """Compare the BFS code from ``start`` against the identity labeling.

    Returns -1 / 0 / +1 as the code from ``start`` is smaller / equal /
    larger. Codes are compared entry by entry so a difference exits early.
    """
    label = [-1] * d
    order = [start]
    label[start] = 0
    pos = 0
    while pos < len(order):
        old = order[pos]
        for g in (0, 1):
            for neighbor in (sigma[g][old], inverse[g][old]):
                if label[neighbor] == -1:
                    label[neighbor] = len(order)
                    order.append(neighbor)
        pos += 1
    # identity-labeling code entry for slot (x, g, dir) is just the neighbor
    idx = 0
    for new_x in range(d):
        old = order[new_x]
        for g in (0, 1):
            for neighbor in (sigma[g][old], inverse[g][old]):
                relabeled = label[neighbor]
                x, slot = divmod(idx, _SLOTS_PER_POINT)
                g_id, direction = divmod(slot, 2)
                reference = (
                    sigma[g_id][x] if direction == 0 else inverse[g_id][x]
                )
                if relabeled != reference:
                    return -1 if relabeled < reference else 1
                idx += 1
    return 0


def iter_connected_coverings(
    degree: int, max_degree: int = 12
) -> Iterator[CoveringPermutationRep]:
    """Generate all degree-d connected covers, one per isomorphism class.

    Backtracking over partial permutation pairs in breadth-first slot order;
    fresh points always receive the next label, so every completed pair is
    BFS-labeled from point 0, and a completed pair is emitted only when its
    code is minimal among all start points. Exhaustive generation is
    practical through degree 8 or so; beyond that the class counts explode
    and the constrained enumerations below are the usable tools.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if degree > max_degree:
        raise ValueError(f"degree {degree} exceeds the configured bound {max_degree}")
    d = degree
    if d == 1:
        yield CoveringPermutationRep(1, (0,), (0,))
        return

    sigma = [[-1] * d, [-1] * d]
    inverse = [[-1] * d, [-1] * d]

    def emit() -> CoveringPermutationRep | None:
        for start in range(1, d):
            if _bfs_code_compare(sigma, inverse, d, start) < 0:
                return None
        return CoveringPermutationRep(d, tuple(sigma[0]), tuple(sigma[1]))

    def solve(slot: int, labeled: int) -> Iterator[CoveringPermutationRep]:
        while slot < labeled * _SLOTS_PER_POINT:
            x, rest = divmod(slot, _SLOTS_PER_POINT)
            g, direction = divmod(rest, 2)
            if direction == 0 and sigma[g][x] == -1:
                break
            if direction == 1 and inverse[g][x] == -1:
                break
            slot += 1
        else:
            if labeled == d:
                rep = emit()
                if rep is not None:
                    yield rep
            return

        x, rest = divmod(slot, _SLOTS_PER_POINT)
        g, direction = divmod(rest, 2)
        candidates = list(range(labeled)) + ([labeled] if labeled < d else [])
        for v in candidates:
            fresh = v == labeled
            if direction == 0:
                if not fresh and inverse[g][v] != -1:
                    continue
                sigma[g][x] = v
                inverse[g][v] = x
                yield from solve(slot + 1, labeled + fresh)
                sigma[g][x] = -1
                inverse[g][v] = -1
            else:
                if not fresh and sigma[g][v] != -1:
                    continue
                inverse[g][x] = v
                sigma[g][v] = x
                yield from solve(slot + 1, labeled + fresh)
                inverse[g][x] = -1
                sigma[g][v] = -1

    yield from solve(0, 1)


def enumerate_connected_coverings(
    degree: int, max_degree: int = 12
) -> list[CoveringPermutationRep]:
    return list(iter_connected_coverings(degree, max_degree))


def full_cycle_coverings(
    degree: int, petal: str, deduplicate: bool = True
) -> Iterator[CoveringPermutationRep]:
    """All connected covers whose given petal is a single d-cycle.

    This is the complete family of covers satisfying the cycle condition on
    that petal: any such cover is isomorphic to one with the petal acting as
    the canonical cycle x -> x + 1, and the other petal arbitrary. With
    ``deduplicate`` the other petal is reduced modulo conjugation by the
    cycle's centralizer (its own powers), one representative per class.
    Transitivity is automatic. Feasible through degree 9 and a bit beyond.
    """
    d = degree
    cycle = tuple((x + 1) % d for x in range(d))
    for other in itertools.permutations(range(d)):
        if deduplicate:
            canonical = True
            for i in range(1, d):
                # conjugate by cycle^i, entrywise, with early exit
                for x in range(d):
                    value = (other[(x - i) % d] + i) % d
                    if value < other[x]:
                        canonical = False
                        break
                    if value > other[x]:
                        break
                if not canonical:
                    break
            if not canonical:
                continue
        if petal == "a":
            yield CoveringPermutationRep(d, cycle, other)
        else:
            yield CoveringPermutationRep(d, other, cycle)
