"""Thue-Morse generators, window dynamics, witness searches, towers."""

from fractions import Fraction
from math import gcd
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liftlab.symdyn import (
    CentralWord,
    FiniteZSystem,
    StrictTower,
    WindowError,
    aperiodicity_check,
    apply_substitution,
    cyclic_mod_tower,
    equicontinuity_modulus,
    factor_counts,
    factor_language,
    kernel_of_action,
    max_recurrence_gap,
    mt_doubling,
    mt_prefix,
    mt_substitution,
    non_equicontinuity_witness,
    omega0,
    omega0_windows,
    proximal_search,
    random_strict_tower,
    recurrence_gap,
    shift,
    truncate_window,
    word_metric,
)


def oracle_thue_morse(length: int) -> str:
    """Independent route: t(2n) = t(n), t(2n+1) = 1 - t(n), t(0) = 0."""
    bits = [0] * max(length, 1)
    for i in range(1, length):
        bits[i] = bits[i // 2] if i % 2 == 0 else 1 - bits[i // 2]
    return "".join(map(str, bits[:length]))


class TestGenerators:
    def test_seed_and_displayed_blocks(self):
        assert mt_substitution(0) == "0"
        assert mt_substitution(3) == "01101001"
        assert mt_substitution(5) == "01101001100101101001011001101001"

    def test_doubling_examples(self):
        assert mt_doubling(1) == "01"
        assert mt_doubling(3) == "01101001"

    def test_three_routes_agree_to_4096(self):
        for n in range(13):
            sub = mt_substitution(n)
            assert sub == mt_doubling(n) == oracle_thue_morse(len(sub))

    def test_generic_substitution_engine(self):
        # period-doubling substitution as a second 2-letter system
        word = apply_substitution({"0": "01", "1": "00"}, "0", 5)
        assert len(word) == 32 and set(word) <= {"0", "1"}

    def test_prefix_slices(self):
        assert mt_prefix(10) == oracle_thue_morse(10)
        assert mt_prefix(1000) == oracle_thue_morse(1000)


class TestWindows:
    def test_omega0_center(self):
        w = omega0(1)
        assert (w[-1], w[0]) == ("0", "0")

    def test_omega0_right_half_and_mirror(self):
        w = omega0(4)
        assert w.right_half == "0110"
        t = mt_prefix(4)
        assert w.symbols == t[::-1] + t

    def test_windows_nest(self):
        big, small = omega0(16), omega0(5)
        assert truncate_window(big, 5) == small

    def test_shift_identity_and_example(self):
        w = omega0(8)
        assert shift(w, 0) == w
        assert shift(w, 1).right_half.startswith("1101")

    def test_shift_action_law_same_sign(self):
        w = omega0(32)
        assert shift(shift(w, 3), 2) == shift(w, 5)
        assert shift(shift(w, -4), -1) == shift(w, -5)

    def test_shift_action_law_mixed_sign_on_overlap(self):
        w = omega0(32)
        double = shift(shift(w, 6), -2)
        direct = shift(w, 4)
        assert double == truncate_window(direct, double.radius)

    def test_shift_window_error(self):
        with pytest.raises(WindowError):
            shift(omega0(3), 3)

    def test_metric_examples(self):
        x = omega0(8)
        same = word_metric(x, x)
        assert not same.exact and same.bound == Fraction(1, 256)
        flipped_center = CentralWord(
            8, x.symbols[:8] + ("1" if x[0] == "0" else "0") + x.symbols[9:]
        )
        d = word_metric(x, flipped_center)
        assert d.exact and d.bound == 1
        flipped_three = CentralWord(
            8, x.symbols[:11] + ("1" if x[3] == "0" else "0") + x.symbols[12:]
        )
        d3 = word_metric(x, flipped_three)
        assert d3.exact and d3.bound == Fraction(1, 8)

    def test_metric_radius_mismatch(self):
        with pytest.raises(WindowError):
            word_metric(omega0(3), omega0(4))

    @settings(deadline=None, max_examples=60)
    @given(st.integers(2, 24), st.data())
    def test_metric_is_symmetric_ultrametric(self, radius, data):
        def window():
            bits = data.draw(
                st.lists(st.sampled_from("01"), min_size=2 * radius, max_size=2 * radius)
            )
            return CentralWord(radius, "".join(bits))

        x, y, z = window(), window(), window()
        assert word_metric(x, y).bound == word_metric(y, x).bound
        assert word_metric(x, z).bound <= max(
            word_metric(x, y).bound, word_metric(y, z).bound
        )


class TestFactorLanguage:
    def test_tiny_alphabet_counts(self):
        assert factor_language(mt_prefix(4), 1).factors == {"0", "1"}
        sample = factor_language(mt_prefix(4096), 2)
        assert sample.factors == {"00", "01", "10", "11"}

    def test_counts_from_enumeration_oracle(self):
        word = mt_prefix(2**16)
        oracle = {
            L: len({word[i : i + L] for i in range(len(word) - L + 1)})
            for L in range(1, 7)
        }
        assert oracle == {1: 2, 2: 4, 3: 6, 4: 10, 5: 12, 6: 16}
        assert factor_counts(word, range(1, 7)) == oracle

    def test_no_cubes_of_letters(self):
        sample = factor_language(mt_prefix(4096), 3)
        assert len(sample.factors) == 6
        assert "000" not in sample.factors and "111" not in sample.factors

    def test_factor_closure_to_16(self):
        word = mt_prefix(2**14)
        for L in range(2, 17):
            level = factor_language(word, L).factors
            below = factor_language(word, L - 1).factors
            derived = {f[:-1] for f in level} | {f[1:] for f in level}
            assert derived == below

    def test_length_error(self):
        with pytest.raises(ValueError):
            factor_language("0101", 5)

    def test_omega0_window_language_computed_directly(self):
        # language of the doubled sequence is computed, not assumed equal to
        # the one-sided language; at short lengths the two coincide here
        window = omega0(2**12)
        for L in range(1, 7):
            assert factor_language(window, L).factors == factor_language(
                mt_prefix(2**13), L
            ).factors


class TestAperiodicityRecurrence:
    def test_periodic_controls(self):
        assert aperiodicity_check("0101", 2) == 2
        assert aperiodicity_check("0000", 2) == 1

    def test_mt_prefix_has_no_short_period(self):
        assert aperiodicity_check(mt_prefix(4096), 128) is None

    def test_window_too_small(self):
        with pytest.raises(WindowError):
            aperiodicity_check("0101", 3)

    def test_zero_recurs_quickly(self):
        assert recurrence_gap(mt_prefix(64), "0") <= 3

    def test_whole_word_occurs_once(self):
        w = mt_prefix(64)
        with pytest.raises(ValueError):
            recurrence_gap(w, w)

    def test_uniform_bound_pinned_from_oracle_run(self):
        # regression values fixed by the first enumeration run
        gap, factor = max_recurrence_gap(mt_prefix(2**14), 8)
        assert gap == 36
        assert factor == "00101101"


class TestWitnessSearches:
    def test_depth_zero_trivial(self):
        windows = omega0_windows(8, 6)
        w = proximal_search(windows, 0, 4)
        assert w is not None and w.x != w.y

    def test_proximal_on_mt(self):
        windows = omega0_windows(64 + 4 + 2, 128)
        w = proximal_search(windows, 4, 64)
        assert w is not None
        assert word_metric(shift(w.x, w.shift_by), shift(w.y, w.shift_by)).at_most(
            Fraction(1, 16)
        )

    def test_proximal_none_for_swapped_constants(self):
        m = 8
        windows = [CentralWord(m, "0" * 2 * m), CentralWord(m, "1" * 2 * m)]
        assert proximal_search(windows, 1, 4) is None

    def test_separation_on_mt_all_depths(self):
        for depth in range(1, 9):
            horizon = 2 ** (depth + 4)
            windows = omega0_windows(horizon + max(depth, 2) + 1, 256)
            w = non_equicontinuity_witness(windows, depth, horizon)
            assert w is not None, f"no separation witness at depth {depth}"
            assert w.start_distance.at_most(Fraction(1, 2**depth))
            assert w.end_distance.at_least(Fraction(1, 2))
            # re-verify the reported shift directly
            d = word_metric(shift(w.x, w.shift_by), shift(w.y, w.shift_by))
            assert d.at_least(Fraction(1, 2))

    def test_separation_none_for_single_window(self):
        windows = [omega0(16)]
        assert non_equicontinuity_witness(windows, 2, 8) is None

    def test_window_length_precondition(self):
        with pytest.raises(WindowError):
            proximal_search(omega0_windows(8, 4), 4, 16)


class TestFiniteZSystems:
    def test_step_must_be_bijection(self):
        with pytest.raises(ValueError):
            FiniteZSystem([0, 1, 2], {0: 1, 1: 1, 2: 0})

    def test_kernel_examples(self):
        ident = FiniteZSystem([0, 1], {0: 0, 1: 1})
        assert kernel_of_action(ident) == 1
        cyc = FiniteZSystem(range(8), {x: (x + 1) % 8 for x in range(8)})
        assert kernel_of_action(cyc) == 8

    def test_kernel_matches_lcm_oracle(self):
        rng = Random(7)
        for _ in range(25):
            n = rng.randint(2, 10)
            perm = list(range(n))
            rng.shuffle(perm)
            sys = FiniteZSystem(range(n), dict(enumerate(perm)))
            # independent oracle: cycle decomposition by hand
            lengths = []
            seen = set()
            for p in range(n):
                if p in seen:
                    continue
                q, size = p, 0
                while True:
                    seen.add(q)
                    q = perm[q]
                    size += 1
                    if q == p:
                        break
                lengths.append(size)
            expected = 1
            for size in lengths:
                expected = expected * size // gcd(expected, size)
            assert kernel_of_action(sys) == expected


class TestStrictTowers:
    def test_construction_rejects_non_onto_bond(self):
        lower = FiniteZSystem([0, 1], {0: 1, 1: 0})
        upper = FiniteZSystem(range(4), {x: (x + 1) % 4 for x in range(4)})
        with pytest.raises(ValueError, match="onto"):
            StrictTower([lower, upper], [{x: 0 for x in range(4)}])

    def test_construction_rejects_non_equivariant_bond(self):
        lower = FiniteZSystem([0, 1], {0: 1, 1: 0})
        upper = FiniteZSystem(range(4), {x: (x + 1) % 4 for x in range(4)})
        with pytest.raises(ValueError, match="equivariant"):
            StrictTower([lower, upper], [{0: 0, 1: 1, 2: 1, 3: 0}])

    def test_one_level_tower_modulus(self):
        tower = StrictTower([FiniteZSystem([0, 1], {0: 1, 1: 0})], [])
        table = equicontinuity_modulus(tower)
        assert table == [
            {"level": 1, "delta_level": 1, "pairs_checked": 2, "powers_checked": 2}
        ]

    def test_cyclic_tower_identity_modulus(self):
        table = equicontinuity_modulus(cyclic_mod_tower(2, 3))
        assert [row["level"] for row in table] == [1, 2, 3]
        assert all(row["delta_level"] == row["level"] for row in table)

    def test_random_towers_identity_modulus(self):
        for seed in range(10):
            tower = random_strict_tower(seed)
            table = equicontinuity_modulus(tower)
            assert all(row["delta_level"] == row["level"] for row in table)

    def test_projection_compose(self):
        tower = cyclic_mod_tower(3, 3)
        assert tower.project(25, 3, 1) == 25 % 3
