"""Thue-Morse machinery and finite witnesses for shift dynamics.

Binary words are plain ASCII 0/1 strings. A :class:`CentralWord` is a finite
window of a two-sided sequence, indexed -m..m-1 around the origin; the
two-sided base point ``omega0`` is the Thue-Morse sequence preceded by its
own reversal. The metric on windows is 2^-(innermost disagreement), with
full agreement reported only as a bound, matching the working resolution.

Witness searches here are deterministic scans. They can only ever produce
evidence at a stated depth and horizon, or bounded-horizon absence; neither
outcome is a limit claim.

Finite shift systems and strict towers of them model inverse sequences of
finite dynamics. Strictness (onto, equivariant bonds) is enforced at
construction; ``equicontinuity_modulus`` then certifies level by level that
agreement depth is preserved by every iterate of the step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from random import Random

from .ultrametric import Distance, bounded_distance, exact_distance


class WindowError(ValueError):
    """A window is too small for the requested operation."""


# ---------------------------------------------------------------------------
# word generators

MT_RULES = {"0": "01", "1": "10"}

_SWAP = str.maketrans("01", "10")


def complement(word: str) -> str:
    return word.translate(_SWAP)


def apply_substitution(rules: dict[str, str], seed: str, n: int) -> str:
    """Apply a letter substitution n times to the seed word."""
    word = seed
    for _ in range(n):
        word = "".join(rules[c] for c in word)
    return word


def mt_substitution(n: int) -> str:
    """n-fold substitution 0 -> 01, 1 -> 10 on the seed "0"; length 2^n."""
    return apply_substitution(MT_RULES, "0", n)


def mt_doubling(n: int) -> str:
    """Doubling construction: a_{k+1} = a_k followed by its complement."""
    word = "0"
    for _ in range(n):
        word += complement(word)
    return word


@lru_cache(maxsize=8)
def _mt_block(n: int) -> str:
    return mt_doubling(n)


def mt_prefix(length: int) -> str:
    """The first ``length`` symbols of the Thue-Morse sequence."""
    n = 0
    while (1 << n) < length:
        n += 1
    return _mt_block(n)[:length]


def popcount_parity_prefix(length: int) -> str:
    """Third route to the same sequence: parity of the binary digit sum."""
    return "".join(str(bin(i).count("1") & 1) for i in range(length))


# ---------------------------------------------------------------------------
# central windows of two-sided sequences


@dataclass(frozen=True)
class CentralWord:
    """Window of a two-sided binary sequence over indices -radius..radius-1."""

    radius: int
    symbols: str

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        if len(self.symbols) != 2 * self.radius:
            raise ValueError(
                f"window of radius {self.radius} needs {2 * self.radius} symbols"
            )
        if any(c not in "01" for c in self.symbols):
            raise ValueError("window symbols must be 0/1")

    def __getitem__(self, index: int) -> str:
        if not -self.radius <= index < self.radius:
            raise WindowError(f"index {index} outside window of radius {self.radius}")
        return self.symbols[index + self.radius]

    @property
    def right_half(self) -> str:
        return self.symbols[self.radius :]


def omega0(radius: int) -> CentralWord:
    """Two-sided base point: Thue-Morse on i >= 0, its reversal on i < 0."""
    t = mt_prefix(radius) if radius else ""
    return CentralWord(radius, t[::-1] + t)


def shift(x: CentralWord, t: int) -> CentralWord:
    """Shifted window (sigma^t x)(i) = x(i + t); radius shrinks by |t|."""
    if abs(t) >= x.radius:
        raise WindowError(
            f"shift by {t} exceeds window of radius {x.radius}"
        )
    m = x.radius - abs(t)
    lo = (t - m) + x.radius
    return CentralWord(m, x.symbols[lo : lo + 2 * m])


def truncate_window(x: CentralWord, radius: int) -> CentralWord:
    if radius > x.radius:
        raise WindowError(f"cannot grow window from {x.radius} to {radius}")
    lo = x.radius - radius
    return CentralWord(radius, x.symbols[lo : lo + 2 * radius])


def word_metric(x: CentralWord, y: CentralWord) -> Distance:
    """2^-(smallest |n| with x_n != y_n); a bound if the windows agree."""
    if x.radius != y.radius:
        raise WindowError(f"radius mismatch: {x.radius} vs {y.radius}")
    for v in range(x.radius):
        if x[v] != y[v] or x[-v - 1] != y[-v - 1]:
            return exact_distance(2, v)
    return bounded_distance(2, x.radius)


# ---------------------------------------------------------------------------
# factor language


@dataclass(frozen=True)
class SubshiftSample:
    """The set of length-L factors of a finite sample of a subshift."""

    length: int
    factors: frozenset[str]

    def sorted_factors(self) -> list[str]:
        return sorted(self.factors)


def _source_symbols(source: str | CentralWord) -> str:
    return source.symbols if isinstance(source, CentralWord) else source


def factor_language(source: str | CentralWord, length: int) -> SubshiftSample:
    """All length-L contiguous subwords of the source."""
    word = _source_symbols(source)
    if length < 1 or length > len(word):
        raise ValueError(f"factor length {length} outside [1, {len(word)}]")
    factors = {word[i : i + length] for i in range(len(word) - length + 1)}
    return SubshiftSample(length, frozenset(factors))


def factor_counts(source: str | CentralWord, lengths: range) -> dict[int, int]:
    return {L: len(factor_language(source, L).factors) for L in lengths}


def aperiodicity_check(word: str, max_period: int) -> int | None:
    """Least global period <= max_period of the word, or None."""
    if len(word) < 2 * max_period:
        raise WindowError(
            f"need a word of length >= {2 * max_period} to scan periods <= {max_period}"
        )
    for p in range(1, max_period + 1):
        if word[:-p] == word[p:]:
            return p
    return None


def recurrence_gap(word: str, factor: str) -> int:
    """Largest distance between consecutive occurrence starts of the factor."""
    positions = []
    start = word.find(factor)
    while start != -1:
        positions.append(start)
        start = word.find(factor, start + 1)
    if len(positions) < 2:
        raise ValueError(
            f"factor occurs {len(positions)} time(s); need at least two occurrences"
        )
    return max(b - a for a, b in zip(positions, positions[1:]))


def max_recurrence_gap(word: str, length: int) -> tuple[int, str]:
    """Uniform recurrence bound over all length-L factors, with a witness.

    Returns the largest gap between consecutive occurrences of any length-L
    factor, and a factor achieving it. Every factor must recur.
    """
    positions: dict[str, list[int]] = {}
    for i in range(len(word) - length + 1):
        positions.setdefault(word[i : i + length], []).append(i)
    worst = 0
    witness = ""
    for factor in sorted(positions):
        starts = positions[factor]
        if len(starts) < 2:
            raise ValueError(f"factor {factor!r} occurs only once in the sample")
        gap = max(b - a for a, b in zip(starts, starts[1:]))
        if gap > worst:
            worst, witness = gap, factor
    return worst, witness


# ---------------------------------------------------------------------------
# witness searches over windows


@dataclass(frozen=True)
class OrbitPairWitness:
    """Two distinct windows and a shift exhibiting approach or separation."""

    x: CentralWord
    y: CentralWord
    shift_by: int
    start_distance: Distance
    end_distance: Distance


def omega0_windows(radius: int, count: int, start: int = 0) -> list[CentralWord]:
    """Windows of omega0 centred at start, start+1, ..., start+count-1."""
    source = omega0(radius + max(abs(start), abs(start + count - 1)) + 1)
    out = []
    for c in range(start, start + count):
        lo = c - radius + source.radius
        out.append(CentralWord(radius, source.symbols[lo : lo + 2 * radius]))
    return out


def _signed_shifts(horizon: int, include_zero: bool) -> list[int]:
    shifts = [0] if include_zero else []
    for t in range(1, horizon + 1):
        shifts.append(t)
        shifts.append(-t)
    return shifts


def proximal_search(
    windows: list[CentralWord],
    depth: int,
    horizon: int,
    max_pairs: int = 100_000,
) -> OrbitPairWitness | None:
    """Distinct windows whose shifted copies agree to the given depth.

    Scans pairs in input order and shifts 0, 1, -1, 2, ... and returns the
    first pair x != y with d(shift(x, t), shift(y, t)) <= 2^-depth. Absence
    within the horizon is a valid outcome (None).
    """
    if depth < 0 or horizon < 0:
        raise ValueError("depth and horizon must be >= 0")
    if windows and windows[0].radius < horizon + depth + 1:
        raise WindowError(
            f"windows of radius {windows[0].radius} cannot shift by {horizon} "
            f"and still certify depth {depth}"
        )
    target = Fraction(1, 2**depth)
    shifts = _signed_shifts(horizon, include_zero=True)
    scanned = 0
    for i, j in itertools.combinations(range(len(windows)), 2):
        x, y = windows[i], windows[j]
        if x == y:
            continue
        scanned += 1
        if scanned > max_pairs:
            return None
        for t in shifts:
            xs, ys = shift(x, t), shift(y, t)
            d = word_metric(xs, ys)
            if d.at_most(target):
                return OrbitPairWitness(x, y, t, word_metric(x, y), d)
    return None


def non_equicontinuity_witness(
    windows: list[CentralWord],
    depth: int,
    horizon: int,
    max_pairs: int = 100_000,
) -> OrbitPairWitness | None:
    """Windows within 2^-depth whose orbits separate to >= 1/2 within the horizon."""
    if depth < 1 or horizon < 1:
        raise ValueError("depth and horizon must be >= 1")
    if windows and windows[0].radius < horizon + max(depth, 2):
        raise WindowError(
            f"windows of radius {windows[0].radius} cannot shift by {horizon} "
            f"and still certify depth {depth}"
        )
    half = Fraction(1, 2)
    # Pairs must agree to the requested depth first; bucket on the central block.
    buckets: dict[str, list[int]] = {}
    order: list[str] = []
    for idx, w in enumerate(windows):
        lo = w.radius - depth + 1
        key = w.symbols[lo : lo + 2 * depth - 1]
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append(idx)
    scanned = 0
    for key in order:
        members = buckets[key]
        for a, b in itertools.combinations(members, 2):
            x, y = windows[a], windows[b]
            if x == y:
                continue
            scanned += 1
            if scanned > max_pairs:
                return None
            start = word_metric(x, y)
            if not start.at_most(Fraction(1, 2**depth)):
                continue
            for t in _signed_shifts(horizon, include_zero=False):
                d = word_metric(shift(x, t), shift(y, t))
                if d.at_least(half):
                    return OrbitPairWitness(x, y, t, start, d)
    return None


# ---------------------------------------------------------------------------
# finite shift systems and strict towers


class FiniteZSystem:
    """A finite set with a bijective step, i.e. a finite action of the integers."""

    def __init__(self, points, step: dict):
        self.points = tuple(points)
        self.step = dict(step)
        if set(self.step) != set(self.points) or set(self.step.values()) != set(
            self.points
        ):
            raise ValueError("step must be a bijection of the point set")

    def __repr__(self) -> str:
        return f"FiniteZSystem({len(self.points)} points)"

    def iterate(self, point, times: int):
        for _ in range(times):
            point = self.step[point]
        return point


def kernel_of_action(sys: FiniteZSystem) -> int:
    """Index of the action kernel: the least n >= 1 with step^n = identity."""
    order = 1
    seen = set()
    for p in sys.points:
        if p in seen:
            continue
        length = 0
        q = p
        while True:
            seen.add(q)
            q = sys.step[q]
            length += 1
            if q == p:
                break
        order = order * length // gcd(order, length)
    return order


class StrictTower:
    """Inverse sequence of finite shift systems with onto equivariant bonds.

    ``bonds[i]`` maps the points of ``levels[i + 1]`` onto ``levels[i]``.
    Violations are rejected here, at construction.
    """

    def __init__(self, levels: list[FiniteZSystem], bonds: list[dict]):
        if not levels:
            raise ValueError("a tower needs at least one level")
        if len(bonds) != len(levels) - 1:
            raise ValueError(f"{len(levels)} levels require {len(levels) - 1} bonds")
        for i, bond in enumerate(bonds):
            upper, lower = levels[i + 1], levels[i]
            if set(bond) != set(upper.points):
                raise ValueError(f"bond {i} is not defined on all of level {i + 2}")
            if set(bond.values()) != set(lower.points):
                raise ValueError(f"bond {i} is not onto level {i + 1}")
            for p in upper.points:
                if bond[upper.step[p]] != lower.step[bond[p]]:
                    raise ValueError(
                        f"bond {i} is not equivariant at point {p!r}"
                    )
        self.levels = list(levels)
        self.bonds = [dict(b) for b in bonds]

    def project(self, point, from_level: int, to_level: int):
        """Compose bonds downward; levels are 1-based."""
        for lv in range(from_level - 1, to_level - 1, -1):
            point = self.bonds[lv - 1][point]
        return point


def equicontinuity_modulus(tower: StrictTower) -> list[dict]:
    """Certify the identity modulus for the thread metric, level by level.

    For agreement depth n the same depth n works as a modulus: any pair of
    level-(n+1) points over a common level-n point stays over a common point
    under every power of the step. The check is exhaustive per level and the
    returned table records how much was checked.
    """
    table = []
    for n in range(1, len(tower.levels) + 1):
        if n == len(tower.levels):
            sys_top = tower.levels[n - 1]
            table.append(
                {
                    "level": n,
                    "delta_level": n,
                    "pairs_checked": len(sys_top.points),
                    "powers_checked": kernel_of_action(sys_top),
                }
            )
            continue
        upper = tower.levels[n]
        bond = tower.bonds[n - 1]
        fibres: dict = {}
        for p in upper.points:
            fibres.setdefault(bond[p], []).append(p)
        order = kernel_of_action(upper)
        pairs = 0
        for members in fibres.values():
            for a in members:
                for b in members:
                    x, y = a, b
                    for _ in range(order):
                        x, y = upper.step[x], upper.step[y]
                        if bond[x] != bond[y]:
                            raise AssertionError(
                                "agreement not preserved; tower invariants violated"
                            )
                    pairs += 1
        table.append(
            {
                "level": n,
                "delta_level": n,
                "pairs_checked": pairs,
                "powers_checked": order,
            }
        )
    return table


def cyclic_mod_tower(base: int, top_level: int) -> StrictTower:
    """The +1 actions on Z/base^n with reduction bonds, levels 1..top_level."""
    levels = []
    for n in range(1, top_level + 1):
        m = base**n
        levels.append(FiniteZSystem(range(m), {x: (x + 1) % m for x in range(m)}))
    bonds = []
    for n in range(1, top_level):
        m = base**n
        bonds.append({x: x % m for x in range(base ** (n + 1))})
    return StrictTower(levels, bonds)


def random_strict_tower(seed: int, depth: int = 4, width: int = 5) -> StrictTower:
    """A seeded random strict tower of permutation systems.

    Level 1 is a random permutation; each next level sits over it with fibre
    sizes constant along step orbits (so an equivariant bijective step over
    the base exists) and random fibre bijections.
    """
    rng = Random(seed)
    size = rng.randint(2, width)
    base_points = list(range(size))
    perm = base_points[:]
    rng.shuffle(perm)
    levels = [FiniteZSystem(base_points, dict(zip(base_points, perm)))]
    bonds = []
    for _ in range(depth - 1):
        lower = levels[-1]
        # fibre sizes constant on each step orbit
        orbit_of: dict = {}
        for p in lower.points:
            if p in orbit_of:
                continue
            orbit = [p]
            q = lower.step[p]
            while q != p:
                orbit.append(q)
                q = lower.step[q]
            size = rng.randint(1, 3)
            for item in orbit:
                orbit_of[item] = size
        points = [(p, i) for p in lower.points for i in range(orbit_of[p])]
        step = {}
        for p in lower.points:
            image = lower.step[p]
            matching = list(range(orbit_of[p]))
            rng.shuffle(matching)
            for i, j in enumerate(matching):
                step[(p, i)] = (image, j)
        bonds.append({pt: pt[0] for pt in points})
        levels.append(FiniteZSystem(points, step))
    return StrictTower(levels, bonds)
