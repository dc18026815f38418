"""The glued 2-3 solenoid over the figure eight, truncated with honest precision.

The fibre is the set of binary digit strings of a fixed length (a truncated
2-adic integer). Petal ``a`` adds one on the binary side, exactly. Petal
``b`` adds one on the ternary side *through the glue*: decode the binary
digits, add one to the decoded ternary truncation, re-encode. Decoding a
cut binary string determines only finitely many ternary digits, so every
b-step reports the ternary precision it achieved and the binary precision
of its output; nothing is silently truncated or padded.

That the b-step does not descend to a fixed finite quotient is the whole
point: it is why the glued system is not an inverse limit of finite covers
and why the translation-pair deck search below finds only the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .profinite import (
    PrefixCodeHomeo,
    default_glue,
    digits_to_int,
    glue_backward,
    glue_forward,
    int_to_digits,
)


@dataclass(frozen=True)
class AmalgamModel:
    """Truncation of the glued double solenoid at a fixed binary precision."""

    binary_precision: int
    glue: PrefixCodeHomeo

    def __post_init__(self) -> None:
        if self.binary_precision < 2:
            raise ValueError("binary precision must be >= 2")

    def fibre(self) -> list[str]:
        m = self.binary_precision
        return [int_to_digits(x, 2, m) for x in range(2**m)]


def amalgam_model(binary_precision: int, glue: PrefixCodeHomeo | None = None) -> AmalgamModel:
    return AmalgamModel(binary_precision, glue if glue is not None else default_glue())


@dataclass(frozen=True)
class BStepResult:
    """Output digits of one glued +1 step with its precision accounting."""

    digits: str
    ternary_precision: int
    binary_precision: int


def a_step(model: AmalgamModel, digits: str, exponent: int = 1) -> str:
    """Binary +-1 at the current length; exact."""
    n = len(digits)
    value = (digits_to_int(digits, 2) + exponent) % 2**n
    return int_to_digits(value, 2, n)


def b_step(model: AmalgamModel, digits: str, exponent: int = 1) -> BStepResult:
    """Glued ternary +-1: decode, add, re-encode, with tracked precision."""
    decoded = glue_forward(model.glue, digits)
    m3 = decoded.precision
    if m3 == 0:
        raise ValueError(
            f"{len(digits)} binary digits determine no ternary digit; "
            "increase the binary precision"
        )
    value = (digits_to_int(decoded.digits, 3) + exponent) % 3**m3
    out = glue_backward(model.glue, int_to_digits(value, 3, m3))
    return BStepResult(out, m3, len(out))


@dataclass(frozen=True)
class AmalgamLift:
    """Endpoint of a word evaluation plus the per-step precision log."""

    digits: str
    ternary_precisions: tuple[int, ...]
    binary_precision: int


def lift_amalgam_word(model: AmalgamModel, word, start: str) -> AmalgamLift:
    """Evaluate a figure-eight loop word from a binary start string.

    ``word`` is a loop word over petals "a" (binary +1) and "b" (glued
    ternary +1). The returned log records the achieved ternary precision of
    every b-step; the final binary precision is the output string length.
    """
    digits = start
    ternary_log: list[int] = []
    for label, exp in word:
        if label == "a":
            digits = a_step(model, digits, exp)
        elif label == "b":
            step = b_step(model, digits, exp)
            digits = step.digits
            ternary_log.append(step.ternary_precision)
        else:
            raise ValueError(f"unknown petal {label!r}")
    return AmalgamLift(digits, tuple(ternary_log), len(digits))


@dataclass(frozen=True)
class TranslationPair:
    """A candidate deck transformation: +s on the binary side, +u ternary."""

    binary_offset: int
    ternary_offset: int
    ternary_precision: int


def translation_deck_search(model: AmalgamModel) -> list[TranslationPair]:
    """All translation pairs compatible with the glue at this truncation.

    A deck transformation of the glued system restricts to a translation on
    each side, so it is determined by a pair (s, u) with
    glue(x + s) = glue(x) + u for every x. For each s the candidate u is read
    off per fibre point at that point's achieved ternary precision; s
    survives only if all fibre points agree at the common precision. The
    identity (0, 0) always survives; rigidity predicts nothing else does.
    """
    m2 = model.binary_precision
    size = 2**m2
    decoded = []
    for x in range(size):
        res = glue_forward(model.glue, int_to_digits(x, 2, m2))
        decoded.append((digits_to_int(res.digits, 3), res.precision))
    survivors = []
    for s in range(size):
        common = min(
            min(decoded[x][1], decoded[(x + s) % size][1]) for x in range(size)
        )
        modulus = 3**common
        offset = None
        consistent = True
        for x in range(size):
            tx, _ = decoded[x]
            ts, _ = decoded[(x + s) % size]
            u = (ts - tx) % modulus
            if offset is None:
                offset = u
            elif offset != u:
                consistent = False
                break
        if consistent:
            survivors.append(TranslationPair(s, offset, common))
    return survivors


def centralizer_deck_search(model: AmalgamModel, max_precision: int = 4) -> list[int]:
    """Binary translations commuting with the b-step at tracked precision.

    The exact centralizer of the binary +1 petal is the full translation
    group, so candidates are the 2^m translations; each is kept only if
    translating before or after the glued step agrees on every fibre point
    to the shorter of the two certified outputs. Offered at small precision
    as an independent cross-check of the translation-pair search.
    """
    m2 = model.binary_precision
    if m2 > max_precision:
        raise ValueError(
            f"full centralizer cross-check is limited to precision <= {max_precision}"
        )
    size = 2**m2
    survivors = []
    for s in range(size):
        ok = True
        for x in range(size):
            digits = int_to_digits(x, 2, m2)
            shifted = int_to_digits((x + s) % size, 2, m2)
            left = b_step(model, shifted)
            right = b_step(model, digits)
            p = min(left.binary_precision, right.binary_precision)
            lv = digits_to_int(left.digits, 2) % 2**p
            rv = (digits_to_int(right.digits, 2) + s) % 2**p
            if lv != rv:
                ok = False
                break
        if ok:
            survivors.append(s)
    return survivors
