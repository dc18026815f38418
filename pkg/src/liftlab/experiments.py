"""The named experiments behind the command line driver.

Each runner takes an :class:`ExperimentConfig`, fills in its defaults,
computes a deterministic payload, and returns a verdict from the closed
vocabulary. Randomized runners derive every sample from the config seed;
nothing reads ambient randomness or the clock (wall time is measured by
the orchestrator, outside the deterministic region).
"""

from __future__ import annotations

import json
from fractions import Fraction
from random import Random
from time import perf_counter

from . import amalgam, covers, hawaiian, lifting, symdyn
from .profinite import TruncatedPadic, rigidity_witness
from .reports import CLAIMS, ExperimentConfig, Report, UsageError, frac_str


def _witness_json(witness: symdyn.OrbitPairWitness, display_radius: int = 8) -> dict:
    show = min(display_radius, witness.x.radius)
    return {
        "radius": witness.x.radius,
        "x_center": symdyn.truncate_window(witness.x, show).symbols,
        "y_center": symdyn.truncate_window(witness.y, show).symbols,
        "shift": witness.shift_by,
        "start_distance": str(witness.start_distance),
        "end_distance": str(witness.end_distance),
    }


# ---------------------------------------------------------------------------


def run_mt_generate(cfg: ExperimentConfig):
    n = cfg.level if cfg.level is not None else 5
    word = symdyn.mt_substitution(n)
    doubling = symdyn.mt_doubling(n)
    parity = symdyn.popcount_parity_prefix(len(word))
    ok = word == doubling == parity
    payload = {
        "n": n,
        "length": len(word),
        "word": word,
        "doubling_agrees": word == doubling,
        "popcount_agrees": word == parity,
    }
    return ("pass" if ok else "fail"), payload, {"level": n}


def run_mt_dynamics(cfg: ExperimentConfig):
    prefix_exp = cfg.level if cfg.level is not None else 14
    if prefix_exp < 8:
        raise UsageError("--level must be >= 8: the period scan needs 256 symbols")
    depth = cfg.depth if cfg.depth is not None else 4
    horizon = cfg.horizon if cfg.horizon is not None else 2 ** (depth + 4)
    window_count = cfg.words if cfg.words is not None else 192

    prefix = symdyn.mt_prefix(2**prefix_exp)
    counts = symdyn.factor_counts(prefix, range(1, 7))
    period = symdyn.aperiodicity_check(prefix[:4096], 128)
    gap, gap_factor = symdyn.max_recurrence_gap(prefix, 8)

    radius = horizon + max(depth, 2) + 1
    windows = symdyn.omega0_windows(radius, window_count)
    proximal = symdyn.proximal_search(windows, depth, horizon)
    separation = symdyn.non_equicontinuity_witness(windows, depth, horizon)

    payload = {
        "prefix_length": len(prefix),
        "factor_counts": {str(L): c for L, c in counts.items()},
        "least_period_up_to_128": period,
        "recurrence": {"factor_length": 8, "max_gap": gap, "worst_factor": gap_factor},
        "witness_depth": depth,
        "witness_horizon": horizon,
        "proximal": None if proximal is None else _witness_json(proximal),
        "separation": None if separation is None else _witness_json(separation),
    }
    if period is not None:
        verdict = "fail"
    elif proximal is None or separation is None:
        verdict = "no-witness-at-horizon"
    else:
        verdict = "witness-found"
    effective = {
        "level": prefix_exp,
        "depth": depth,
        "horizon": horizon,
        "words": window_count,
    }
    return verdict, payload, effective


def run_tower_equicontinuity(cfg: ExperimentConfig):
    top = cfg.level if cfg.level is not None else 8
    count = cfg.words if cfg.words is not None else 20
    rng = Random(cfg.seed)

    cyclic = symdyn.cyclic_mod_tower(2, top)
    cyclic_table = symdyn.equicontinuity_modulus(cyclic)

    random_tables = []
    for _ in range(count):
        tower_seed = rng.randrange(2**32)
        tower = symdyn.random_strict_tower(tower_seed)
        table = symdyn.equicontinuity_modulus(tower)
        random_tables.append(
            {
                "tower_seed": tower_seed,
                "levels": len(tower.levels),
                "identity_modulus": all(
                    row["delta_level"] == row["level"] for row in table
                ),
            }
        )

    rejected = []
    lower = symdyn.FiniteZSystem([0, 1], {0: 1, 1: 0})
    upper = symdyn.FiniteZSystem(range(4), {x: (x + 1) % 4 for x in range(4)})
    for label, bond in (
        ("non-surjective bond", {x: 0 for x in range(4)}),
        ("non-equivariant bond", {0: 0, 1: 1, 2: 1, 3: 0}),
    ):
        try:
            symdyn.StrictTower([lower, upper], [bond])
            rejected.append({"defect": label, "rejected": False})
        except ValueError as err:
            rejected.append({"defect": label, "rejected": True, "reason": str(err)})

    ok = (
        all(row["delta_level"] == row["level"] for row in cyclic_table)
        and all(entry["identity_modulus"] for entry in random_tables)
        and all(entry["rejected"] for entry in rejected)
    )
    payload = {
        "cyclic_tower": {"base": 2, "levels": top, "modulus_table": cyclic_table},
        "random_towers": random_tables,
        "rejected_examples": rejected,
    }
    return ("pass" if ok else "fail"), payload, {
        "level": top,
        "words": count,
        "seed": cfg.seed,
    }


def _find_fibre_point(sys: lifting.MonodromySystem, text: str):
    for point in sys.fibre:
        if str(point) == text:
            return point
    raise UsageError(f"start point {text!r} is not in the fibre")


def run_solenoid_lift(cfg: ExperimentConfig):
    level = cfg.level if cfg.level is not None else 3
    word_text = cfg.word if cfg.word is not None else "a^5"
    start_text = cfg.start if cfg.start is not None else "0"

    if cfg.system is not None:
        with open(cfg.system, encoding="utf-8") as handle:
            sys = lifting.system_from_json(json.load(handle))
    else:
        sys = lifting.solenoid_level(2, level)

    word = lifting.parse_loop_word(word_text)
    start = _find_fibre_point(sys, start_text)
    endpoint, crossed = lifting.lift_word_flagged(sys, word, start)
    orbits = lifting.orbit_partition(sys)
    degrees = [lifting.component_cover_degree(sys, orbit) for orbit in orbits]

    payload = {
        "word": word_text,
        "start": str(start),
        "endpoint": str(endpoint),
        "crossed_truncation": crossed,
        "orbit_count": len(orbits),
        "component_degrees": [
            {"size": deg.value, "truncation_flagged": deg.truncation_flagged}
            for deg in degrees
        ],
        "system": lifting.system_to_json(sys),
    }
    effective = {"level": level, "word": word_text, "start": start_text}
    if cfg.system is not None:
        effective["system"] = cfg.system
    return "pass", payload, effective


def run_amalgam_rigidity(cfg: ExperimentConfig):
    precision = cfg.precision if cfg.precision is not None else 64
    samples = cfg.words if cfg.words is not None else 50
    iterations = cfg.depth if cfg.depth is not None else 30
    rng = Random(cfg.seed)

    rows = []
    all_diverge = True
    for _ in range(samples):
        residue = rng.randrange(1, 2**precision)
        a = TruncatedPadic(2, precision, residue)
        report = rigidity_witness(a, iterations)
        all_diverge = all_diverge and report.diverges
        rows.append(
            {
                "a": a.digits(),
                "binary_valuations": [str(v) for v in report.u_valuations],
                "ternary_step_distance": frac_str(report.expected_distance),
                "distances_constant": report.distances_constant,
                "valuations_march": report.valuations_march,
                "diverges": report.diverges,
            }
        )
    payload = {
        "binary_precision": precision,
        "iterations": iterations,
        "samples": rows,
        "all_diverge": all_diverge,
    }
    effective = {
        "precision": precision,
        "words": samples,
        "depth": iterations,
        "seed": cfg.seed,
    }
    return ("pass" if all_diverge else "fail"), payload, effective


def run_amalgam_deck(cfg: ExperimentConfig):
    precision = cfg.precision if cfg.precision is not None else 6
    if precision > 10:
        raise UsageError(
            "--precision is supported up to 10: the pair search is quadratic "
            "in the fibre"
        )
    model = amalgam.amalgam_model(precision)
    survivors = amalgam.translation_deck_search(model)
    identity_only = len(survivors) == 1 and survivors[0].binary_offset == 0 and (
        survivors[0].ternary_offset == 0
    )
    payload = {
        "binary_precision": precision,
        "survivors": [
            {
                "binary_offset": pair.binary_offset,
                "ternary_offset": pair.ternary_offset,
                "ternary_precision": pair.ternary_precision,
            }
            for pair in survivors
        ],
        "identity_only": identity_only,
    }
    if precision <= 4:
        payload["centralizer_cross_check"] = amalgam.centralizer_deck_search(model)
    return ("pass" if identity_only else "fail"), payload, {"precision": precision}


def run_covers_obstruction(cfg: ExperimentConfig):
    bound = cfg.max_degree if cfg.max_degree is not None else 12
    if bound > 12:
        raise UsageError("--max-degree is supported up to 12")
    exhaustive_to = min(bound, 8)
    degrees = {}
    admissible = []
    clean = True
    for d in range(1, bound + 1):
        entry: dict = {
            "admissible": covers.factorization_obstruction(d),
            "power_of_2": covers.is_power(d, 2),
            "power_of_3": covers.is_power(d, 3),
        }
        if entry["admissible"]:
            admissible.append(d)
        if 2 <= d <= exhaustive_to:
            reps = covers.enumerate_connected_coverings(d, max_degree=bound)
            simultaneous = sum(
                1
                for rep in reps
                if covers.cyclic_quotient_compatible(rep, "a", 2)
                and covers.cyclic_quotient_compatible(rep, "b", 3)
            )
            entry["mode"] = "exhaustive"
            entry["classes"] = len(reps)
            entry["simultaneously_compatible"] = simultaneous
            clean = clean and simultaneous == 0
        elif d > 1 and (entry["power_of_2"] or entry["power_of_3"]):
            # complete over the only covers that satisfy one side's condition
            petal, other, other_base = (
                ("a", "b", 3) if entry["power_of_2"] else ("b", "a", 2)
            )
            checked = 0
            bad = 0
            for rep in covers.full_cycle_coverings(d, petal):
                checked += 1
                if covers.cyclic_quotient_compatible(rep, other, other_base):
                    bad += 1
            entry["mode"] = "full-cycle-complete"
            entry["constrained_classes"] = checked
            entry["simultaneously_compatible"] = bad
            clean = clean and bad == 0
        elif d > 1:
            # neither side's cycle condition is satisfiable at this degree
            entry["mode"] = "arithmetic"
            entry["simultaneously_compatible"] = 0
        degrees[str(d)] = entry
    ok = clean and admissible == [1]
    payload = {"admissible_degrees": admissible, "degrees": degrees}
    return ("pass" if ok else "fail"), payload, {"max_degree": bound}


def run_hawaiian_suite(cfg: ExperimentConfig):
    circles = cfg.circles if cfg.circles is not None else 16
    top = cfg.level if cfg.level is not None else 12
    word_count = cfg.words if cfg.words is not None else 1000
    if top > circles:
        raise UsageError("--level cannot exceed --circles")
    if top > 12:
        raise UsageError(
            "--level is supported up to 12: kernel words are checked against "
            "every start vector"
        )
    rng = Random(cfg.seed)

    per_level = []
    ok = True
    for n in range(1, top + 1):
        graph = hawaiian.hn_graph(n, circles)
        connected = hawaiian.is_connected(graph)
        fibre_size = len(graph.vertices())
        if n <= 8:
            targets = hawaiian.all_sign_vectors(n)
        else:
            targets = [
                tuple(rng.choice((1, -1)) for _ in range(n)) for _ in range(64)
            ]
        source = (1,) * n
        surjective = all(
            hawaiian.lift_word_hn(
                n, hawaiian.connect_fibre_points(n, source, t), source
            )
            == t
            for t in targets
        )
        deck = hawaiian.deck_group_hn(n)
        deck_ok = len(deck) == 2**n
        if n <= 8:
            sys_n = hawaiian.hn_level(n, n)
            deck_ok = deck_ok and all(
                hawaiian.apply_deck(delta, hawaiian.flip(eps, j))
                == hawaiian.flip(hawaiian.apply_deck(delta, eps), j)
                for delta in deck
                for eps in sys_n.fibre
                for j in range(1, n + 1)
            )
        row = {
            "level": n,
            "connected": connected,
            "fibre_size": fibre_size,
            "boundary_surjective": surjective,
            "surjectivity_targets": len(targets),
            "deck_order": len(deck),
            "deck_verified": deck_ok,
        }
        ok = ok and connected and fibre_size == 2**n and surjective and deck_ok
        per_level.append(row)

    kernel_agreements = 0
    for _ in range(word_count):
        word = hawaiian.random_kernel_word(rng, circles)
        level = rng.randint(1, top)
        if hawaiian.kernel_check(word, level):
            kernel_agreements += 1

    tower = hawaiian.hn_tower(top)
    verdict_strict = lifting.tower_strictness_check(tower)
    commute_ok = True
    for _ in range(100 if top >= 2 else 0):
        n = rng.randint(1, top - 1)
        upper, lower = tower.levels[n], tower.levels[n - 1]
        bond = tower.bonds[n - 1]
        word = tuple(
            (hawaiian.petal_name(rng.randint(1, top)), rng.choice((1, -1)))
            for _ in range(rng.randint(0, 8))
        )
        start = upper.fibre[rng.randrange(len(upper.fibre))]
        left = bond[lifting.lift_word(upper, word, start)]
        right = lifting.lift_word(lower, word, bond[start])
        commute_ok = commute_ok and left == right

    disconnect_demo = not hawaiian.is_connected(
        hawaiian.hn_graph(min(3, top), circles), omit_circle=1
    )

    ok = (
        ok
        and kernel_agreements == word_count
        and verdict_strict.ok
        and commute_ok
        and disconnect_demo
    )
    payload = {
        "circles": circles,
        "levels": per_level,
        "kernel_words": {"sampled": word_count, "agreed": kernel_agreements},
        "tower_strict": verdict_strict.ok,
        "lift_bond_commutes": commute_ok,
        "dropping_a_circle_disconnects": disconnect_demo,
        "graph_level_2": hawaiian.hn_graph_to_json(
            hawaiian.hn_graph(min(2, top), circles)
        ),
    }
    effective = {
        "circles": circles,
        "level": top,
        "words": word_count,
        "seed": cfg.seed,
    }
    return ("pass" if ok else "fail"), payload, effective


def run_spiral_orbits(cfg: ExperimentConfig):
    truncation = cfg.horizon if cfg.horizon is not None else 32
    sys = lifting.spiral_system(truncation)
    orbits = lifting.orbit_partition(sys)
    degrees = [lifting.component_cover_degree(sys, orbit) for orbit in orbits]
    spiral_orbit = max(orbits, key=len)
    closure = lifting.orbit_closure(sys, spiral_orbit)
    top_fixed = lifting.lift_word(sys, lifting.parse_loop_word("a"), "top") == "top"

    expected = (
        len(orbits) == 3
        and sorted(len(o) for o in orbits) == [1, 1, 2 * truncation + 1]
        and set(closure) == set(spiral_orbit) | {"bot", "top"}
        and top_fixed
    )
    payload = {
        "truncation": truncation,
        "orbit_sizes": [len(o) for o in orbits],
        "component_degrees": [
            {"size": deg.value, "truncation_flagged": deg.truncation_flagged}
            for deg in degrees
        ],
        "spiral_orbit_closure_adds": sorted(
            str(p) for p in set(closure) - set(spiral_orbit)
        ),
        "boundary_fixed": top_fixed,
    }
    if truncation <= 16:
        payload["system"] = lifting.system_to_json(sys)
    return ("pass" if expected else "fail"), payload, {"horizon": truncation}


def run_rotation_density(cfg: ExperimentConfig):
    count = cfg.horizon if cfg.horizon is not None else 1000
    if count < 8:
        raise UsageError("--horizon must be >= 8 for the gap comparison")
    alpha = lifting.golden_ratio_64bit()
    checkpoints = [count // 4, count // 2, count]
    gaps = {str(n): lifting.rotation_orbit_gaps(alpha, n) for n in checkpoints}
    control_gaps = {
        str(n): lifting.rotation_orbit_gaps(Fraction(1, 3), n) for n in checkpoints
    }
    decreasing = (
        gaps[str(checkpoints[0])] > gaps[str(checkpoints[1])] > gaps[str(checkpoints[2])]
    )
    control_constant = len(set(control_gaps.values())) == 1
    payload = {
        "alpha": frac_str(alpha),
        "orbit_sizes": checkpoints,
        "max_gaps": {k: frac_str(v) for k, v in gaps.items()},
        "max_gaps_float": {k: float(v) for k, v in gaps.items()},
        "control_alpha": "1/3",
        "control_gaps": {k: frac_str(v) for k, v in control_gaps.items()},
        "strictly_decreasing": decreasing,
        "control_constant": control_constant,
    }
    ok = decreasing and control_constant
    return ("pass" if ok else "fail"), payload, {"horizon": count}


REGISTRY = {
    "mt-generate": run_mt_generate,
    "mt-dynamics": run_mt_dynamics,
    "tower-equicontinuity": run_tower_equicontinuity,
    "solenoid-lift": run_solenoid_lift,
    "amalgam-rigidity": run_amalgam_rigidity,
    "amalgam-deck": run_amalgam_deck,
    "covers-obstruction": run_covers_obstruction,
    "hawaiian-suite": run_hawaiian_suite,
    "spiral-orbits": run_spiral_orbits,
    "rotation-density": run_rotation_density,
}


def run(config: ExperimentConfig) -> Report:
    """Execute one experiment and assemble its report."""
    runner = REGISTRY[config.experiment]
    started = perf_counter()
    verdict, payload, effective = runner(config)
    elapsed = perf_counter() - started
    if config.seed is not None:
        effective.setdefault("seed", config.seed)
    return Report(
        experiment=config.experiment,
        config=effective,
        claim=CLAIMS[config.experiment],
        verdict=verdict,
        payload=payload,
        wall_time_s=elapsed,
    )
