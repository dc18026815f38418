"""The squaring tower over a truncated nest of circles.

The base is the union of N shrinking circles through one point, truncated
to finitely many circles. Level n of the tower doubles the first n circles:
its fibre is the sign vectors {+-1}^n, circle j <= n flips coordinate j,
and circles beyond n act trivially. Lifting a loop word therefore only sees
the per-letter parity, which is the boundary map into (Z/2)^n computed by
``parity_boundary``.

Graphs, connectivity, the deck group (coordinatewise sign multiplications)
and the kernel characterizations are all exact finite checks at level n;
every report carries the truncation N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .lifting import LoopWord, MonodromySystem, RoseBase, TowerModel, deck_search

HLetter = tuple[int, int]
HLetterWord = tuple[HLetter, ...]

SignVector = tuple[int, ...]


def validate_h_word(word: HLetterWord, circles: int) -> None:
    for index, exp in word:
        if not 1 <= index <= circles:
            raise ValueError(f"letter index {index} outside 1..{circles}")
        if exp not in (1, -1):
            raise ValueError(f"letter exponent must be +-1, got {exp}")


def sign_string(vector: SignVector) -> str:
    return "".join("+" if s == 1 else "-" for s in vector)


def parse_signs(text: str) -> SignVector:
    if any(c not in "+-" for c in text):
        raise ValueError(f"sign string must use only + and -: {text!r}")
    return tuple(1 if c == "+" else -1 for c in text)


def all_sign_vectors(n: int) -> list[SignVector]:
    return list(itertools.product((1, -1), repeat=n))


def parity_boundary(word: HLetterWord, level: int) -> tuple[int, ...]:
    """Per-circle signed letter count mod 2, for circles 1..level."""
    bits = [0] * level
    for index, exp in word:
        if index <= level:
            bits[index - 1] = (bits[index - 1] + exp) % 2
    return tuple(bits)


def lift_word_hn(level: int, word: HLetterWord, start: SignVector) -> SignVector:
    """Endpoint of the lift: coordinate j flips once per odd letter count."""
    if len(start) != level or any(s not in (1, -1) for s in start):
        raise ValueError(f"start must be a sign vector of length {level}")
    parity = parity_boundary(word, level)
    return tuple(s * (-1) ** b for s, b in zip(start, parity))


def connect_fibre_points(
    level: int, source: SignVector, target: SignVector
) -> HLetterWord:
    """A word lifting source to target: one letter per differing coordinate.

    Constructive proof that the boundary map onto (Z/2)^level is surjective.
    """
    if len(source) != level or len(target) != level:
        raise ValueError("sign vectors must have length equal to the level")
    return tuple(
        (j + 1, 1) for j in range(level) if source[j] != target[j]
    )


def kernel_check(word: HLetterWord, level: int) -> bool:
    """Zero boundary iff the lift fixes every start; both computed, compared."""
    parity_trivial = parity_boundary(word, level) == (0,) * level
    lift_trivial = all(
        lift_word_hn(level, word, start) == start
        for start in all_sign_vectors(level)
    )
    if parity_trivial != lift_trivial:
        raise AssertionError(
            "parity and lifting disagree; the model is inconsistent"
        )
    return parity_trivial


# ---------------------------------------------------------------------------
# level graphs


@dataclass(frozen=True)
class HnGraph:
    """Level-n graph: vertices are sign vectors, doubled circles give
    parallel semicircle edges, untouched circles give loops at every vertex."""

    level: int
    circles: int

    def __post_init__(self) -> None:
        if not 1 <= self.level <= self.circles:
            raise ValueError(
                f"level must satisfy 1 <= n <= circles, got n={self.level} "
                f"N={self.circles}"
            )

    def vertices(self) -> list[SignVector]:
        return all_sign_vectors(self.level)

    def edges(self) -> list[tuple[SignVector, SignVector, int, str]]:
        out = []
        for eps in self.vertices():
            for j in range(1, self.level + 1):
                if eps[j - 1] == 1:  # one endpoint per unordered pair
                    other = flip(eps, j)
                    out.append((eps, other, j, "semicircle-up"))
                    out.append((eps, other, j, "semicircle-down"))
            for j in range(self.level + 1, self.circles + 1):
                out.append((eps, eps, j, "outer-loop"))
        return out


def flip(vector: SignVector, circle: int) -> SignVector:
    return tuple(
        -s if j == circle - 1 else s for j, s in enumerate(vector)
    )


def hn_graph(level: int, circles: int) -> HnGraph:
    return HnGraph(level, circles)


def is_connected(graph: HnGraph, omit_circle: int | None = None) -> bool:
    """Breadth-first connectivity; optionally drop all edges of one circle."""
    verts = graph.vertices()
    start = verts[0]
    seen = {start}
    queue = [start]
    while queue:
        eps = queue.pop()
        for j in range(1, graph.level + 1):
            if j == omit_circle:
                continue
            other = flip(eps, j)
            if other not in seen:
                seen.add(other)
                queue.append(other)
    return len(seen) == len(verts)


def hn_graph_to_json(graph: HnGraph) -> dict:
    return {
        "kind": "hn-graph",
        "level": graph.level,
        "circles": graph.circles,
        "vertices": [sign_string(v) for v in graph.vertices()],
        "edges": [
            [sign_string(u), sign_string(v), j, kind]
            for u, v, j, kind in graph.edges()
        ],
    }


# ---------------------------------------------------------------------------
# monodromy systems and the tower


def petal_name(circle: int) -> str:
    return f"a{circle}"


def h_word_to_loop_word(word: HLetterWord) -> LoopWord:
    return tuple((petal_name(j), exp) for j, exp in word)


def hn_level(level: int, circles: int) -> MonodromySystem:
    """Level-n monodromy over the N-petal rose: flips below n, trivial above."""
    if not 1 <= level <= circles:
        raise ValueError("need 1 <= level <= circles")
    fibre = all_sign_vectors(level)
    actions = {}
    for j in range(1, circles + 1):
        if j <= level:
            actions[petal_name(j)] = {eps: flip(eps, j) for eps in fibre}
        else:
            actions[petal_name(j)] = {eps: eps for eps in fibre}
    base = RoseBase(tuple(petal_name(j) for j in range(1, circles + 1)))
    return MonodromySystem(base, fibre, actions)


def hn_tower(circles: int) -> TowerModel:
    """Levels 1..N with bonds forgetting the last coordinate."""
    if circles < 1:
        raise ValueError("need at least one circle")
    levels = [hn_level(n, circles) for n in range(1, circles + 1)]
    bonds = []
    for n in range(1, circles):
        upper = levels[n]
        bonds.append({eps: eps[:-1] for eps in upper.fibre})
    return TowerModel(levels, bonds)


# ---------------------------------------------------------------------------
# deck group


def apply_deck(delta: SignVector, eps: SignVector) -> SignVector:
    return tuple(d * e for d, e in zip(delta, eps))


def deck_group_hn(
    level: int, exhaustive_limit: int = 4, method: str = "auto"
) -> list[SignVector]:
    """The deck group at level n: all coordinatewise sign multiplications.

    For small levels the group is found by exhaustive centralizer search
    over the fibre and verified to consist of sign multiplications; beyond
    the limit the closed form is returned directly. Order 2^n either way.
    """
    if method not in ("auto", "exhaustive", "closed-form"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exhaustive" and level > exhaustive_limit:
        raise ValueError(f"exhaustive search limited to level <= {exhaustive_limit}")
    closed_form = sorted(all_sign_vectors(level), reverse=True)
    exhaustive = method == "exhaustive" or (
        method == "auto" and level <= exhaustive_limit
    )
    if not exhaustive:
        return closed_form
    sys = hn_level(level, level)
    found = deck_search(sys, max_results=2 ** (level + 1))
    deltas = []
    for h in found:
        base_point = (1,) * level
        delta = h[base_point]
        if any(h[eps] != apply_deck(delta, eps) for eps in sys.fibre):
            raise AssertionError("centralizer element is not a sign multiplication")
        deltas.append(delta)
    if sorted(deltas, reverse=True) != closed_form:
        raise AssertionError("exhaustive deck group differs from the closed form")
    return closed_form


# ---------------------------------------------------------------------------
# lifting criterion and the limit-space point test


def factorization_test(target: MonodromySystem) -> bool:
    """Does the squaring tower factor through this monodromy model?

    Criterion: every petal action squares to the identity and all petal
    actions commute. Words in which every letter appears an even number of
    times are generated by squares and commutators, so exactly then does
    every such word act trivially on the target.
    """
    acts = target.actions
    petals = target.base.petals
    for petal in petals:
        act = acts[petal]
        for p in target.fibre:
            if act[act[p]] != p:
                return False
    for g, h in itertools.combinations(petals, 2):
        for p in target.fibre:
            if acts[g][acts[h][p]] != acts[h][acts[g][p]]:
                return False
    return True


def hinfty_membership(coordinates) -> bool:
    """At most one coordinate may sit away from the two anchor points +-1."""
    active = sum(1 for c in coordinates if c not in (1, -1))
    return active <= 1


@dataclass(frozen=True)
class HInftyPoint:
    """A point of the limit space: anchored everywhere but at most one circle."""

    coordinates: tuple

    def __post_init__(self) -> None:
        if not hinfty_membership(self.coordinates):
            raise ValueError("more than one coordinate is away from +-1")


def random_kernel_word(rng, circles: int, max_distinct: int = 4,
                       max_pair_count: int = 2) -> HLetterWord:
    """A seeded word in which every letter appears an even number of times."""
    chosen = rng.sample(
        range(1, circles + 1), k=rng.randint(1, min(max_distinct, circles))
    )
    letters = [
        (j, rng.choice((1, -1)))
        for j in chosen
        for _ in range(2 * rng.randint(1, max_pair_count))
    ]
    rng.shuffle(letters)
    return tuple(letters)
