"""Cover enumeration correctness against brute force and subgroup counts."""

import itertools
from math import factorial

import pytest

from liftlab.covers import (
    CoveringPermutationRep,
    cycle_lengths,
    cyclic_quotient_compatible,
    enumerate_connected_coverings,
    factorization_obstruction,
    full_cycle_coverings,
    is_power,
    is_transitive,
)
from liftlab.lifting import deck_search


def oracle_transitive(pa, pb) -> bool:
    """Union-find connectivity, written independently of the library BFS."""
    d = len(pa)
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in range(d):
        for y in (pa[x], pb[x]):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    return len({find(x) for x in range(d)}) == 1


def canonical_form(pa, pb):
    """Minimum over all simultaneous relabelings, by full enumeration."""
    d = len(pa)
    best = None
    for relabel in itertools.permutations(range(d)):
        ra = [0] * d
        rb = [0] * d
        for x in range(d):
            ra[relabel[x]] = relabel[pa[x]]
            rb[relabel[x]] = relabel[pb[x]]
        form = (tuple(ra), tuple(rb))
        if best is None or form < best:
            best = form
    return best


def brute_force_classes(d):
    perms = list(itertools.permutations(range(d)))
    classes = set()
    for pa in perms:
        for pb in perms:
            if oracle_transitive(pa, pb):
                classes.add(canonical_form(pa, pb))
    return classes


def hall_subgroup_counts(limit):
    """Index-d subgroup counts of the rank-2 free group, by recursion."""
    counts = {}
    for d in range(1, limit + 1):
        total = d * factorial(d)
        total -= sum(factorial(d - i) * counts[i] for i in range(1, d))
        counts[d] = total
    return counts


class TestHelpers:
    def test_is_power(self):
        assert is_power(1, 2) and is_power(8, 2) and is_power(9, 3)
        assert not is_power(6, 2) and not is_power(6, 3) and not is_power(0, 2)

    def test_cycle_lengths(self):
        assert cycle_lengths((1, 2, 3, 0)) == [4]
        assert cycle_lengths((1, 0, 3, 2)) == [2, 2]
        assert cycle_lengths((0, 1, 2)) == [1, 1, 1]


class TestObstruction:
    def test_admissible_degrees(self):
        assert factorization_obstruction(1)
        for d in range(2, 13):
            assert not factorization_obstruction(d)

    def test_compatibility_examples(self):
        one = CoveringPermutationRep(1, (0,), (0,))
        assert cyclic_quotient_compatible(one, "a", 2)
        assert cyclic_quotient_compatible(one, "b", 3)
        four_cycle = CoveringPermutationRep(4, (1, 2, 3, 0), (0, 1, 2, 3))
        assert cyclic_quotient_compatible(four_cycle, "a", 2)
        assert not cyclic_quotient_compatible(four_cycle, "a", 3)
        assert not cyclic_quotient_compatible(four_cycle, "b", 2)


class TestEnumeration:
    def test_degree_one(self):
        assert enumerate_connected_coverings(1) == [
            CoveringPermutationRep(1, (0,), (0,))
        ]

    def test_degree_two_has_three_classes(self):
        assert len(enumerate_connected_coverings(2)) == 3

    def test_matches_brute_force_to_degree_four(self):
        for d in range(1, 5):
            brute = brute_force_classes(d)
            enumerated = enumerate_connected_coverings(d)
            assert len(enumerated) == len(brute)
            assert {
                canonical_form(rep.perm_a, rep.perm_b) for rep in enumerated
            } == brute

    def test_every_rep_is_transitive(self):
        for d in range(1, 7):
            for rep in enumerate_connected_coverings(d):
                assert is_transitive(rep.perm_a, rep.perm_b)
                assert oracle_transitive(rep.perm_a, rep.perm_b)

    def test_no_duplicate_classes(self):
        for d in range(2, 6):
            reps = enumerate_connected_coverings(d)
            forms = {canonical_form(rep.perm_a, rep.perm_b) for rep in reps}
            assert len(forms) == len(reps)

    def test_class_counts_against_subgroup_counts(self):
        # sum over classes of (labeled pairs per class) equals the labeled
        # transitive pair count N_d * (d-1)! from the subgroup recursion
        counts = hall_subgroup_counts(6)
        for d in range(1, 7):
            total = 0
            for rep in enumerate_connected_coverings(d):
                centralizer = len(deck_search(rep.as_system()))
                total += factorial(d) // centralizer
            assert total == counts[d] * factorial(d - 1)

    def test_degree_bound_enforced(self):
        with pytest.raises(ValueError):
            enumerate_connected_coverings(13)
        with pytest.raises(ValueError):
            enumerate_connected_coverings(7, max_degree=6)


class TestFullCycleFamily:
    def test_matches_exhaustive_restriction(self):
        for d in (3, 4, 5, 6):
            constrained = list(full_cycle_coverings(d, "a"))
            from_exhaustive = [
                rep
                for rep in enumerate_connected_coverings(d)
                if cycle_lengths(rep.perm_a) == [d]
            ]
            assert len(constrained) == len(from_exhaustive)

    def test_all_have_the_full_cycle(self):
        for rep in full_cycle_coverings(5, "b"):
            assert cycle_lengths(rep.perm_b) == [5]
            assert is_transitive(rep.perm_a, rep.perm_b)

    def test_dedup_only_drops_conjugates(self):
        raw = sum(1 for _ in full_cycle_coverings(4, "a", deduplicate=False))
        deduped = sum(1 for _ in full_cycle_coverings(4, "a"))
        assert raw == 24 and deduped == 10
