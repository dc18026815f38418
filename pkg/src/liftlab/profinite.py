"""Exact truncated p-adic arithmetic and the binary-to-ternary glue code.

A :class:`TruncatedPadic` is a p-adic integer known modulo ``base**precision``.
All operations are residue arithmetic with arbitrary-precision integers; no
floating point enters anywhere. Digit strings are ASCII, least significant
digit first, so ``"011"`` in base 2 denotes the residue 6.

The glue is a complete prefix-free binary code for ternary digits. Reading a
binary digit stream through the code (``glue_forward``) is a homeomorphism
from binary to ternary digit streams; on finite strings it determines only
finitely many ternary digits and reports exactly how many.

``rigidity_witness`` records the incompatibility of repeated doubling on the
two sides of the glue: doubling contracts binary residues one valuation step
per iteration, while the glued ternary images stay at a constant scale. This
is the finite obstruction to a translation-pair symmetry of the glued system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ultrametric import Distance, Valuation, bounded_distance, exact_distance


class IncompatibleOperands(ValueError):
    """Arithmetic attempted across different bases or precisions."""


class GluePrecisionError(ValueError):
    """Too few binary digits to determine the requested ternary data."""


_DIGIT_CHARS = "0123456789"


def int_to_digits(value: int, base: int, length: int) -> str:
    """Residue as a digit string, least significant digit first."""
    if base > len(_DIGIT_CHARS):
        raise ValueError(f"digit strings support base <= 10, got {base}")
    out = []
    v = value
    for _ in range(length):
        v, r = divmod(v, base)
        out.append(_DIGIT_CHARS[r])
    return "".join(out)


def digits_to_int(digits: str, base: int) -> int:
    value = 0
    for ch in reversed(digits):
        d = ord(ch) - ord("0")
        if not 0 <= d < base:
            raise ValueError(f"digit {ch!r} out of range for base {base}")
        value = value * base + d
    return value


@dataclass(frozen=True)
class TruncatedPadic:
    """A p-adic integer known to ``precision`` digits in the given base."""

    base: int
    precision: int
    residue: int

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if self.precision < 1:
            raise ValueError(f"precision must be >= 1, got {self.precision}")
        if not 0 <= self.residue < self.base**self.precision:
            raise ValueError(
                f"residue {self.residue} outside [0, {self.base}^{self.precision})"
            )

    @property
    def modulus(self) -> int:
        return self.base**self.precision

    @classmethod
    def from_int(cls, base: int, precision: int, value: int) -> "TruncatedPadic":
        return cls(base, precision, value % base**precision)

    @classmethod
    def from_digits(cls, digits: str, base: int) -> "TruncatedPadic":
        return cls(base, len(digits), digits_to_int(digits, base))

    def digits(self) -> str:
        return int_to_digits(self.residue, self.base, self.precision)

    def __add__(self, other: "TruncatedPadic") -> "TruncatedPadic":
        return padic_add(self, other)

    def __sub__(self, other: "TruncatedPadic") -> "TruncatedPadic":
        return padic_sub(self, other)

    def __neg__(self) -> "TruncatedPadic":
        return padic_neg(self)

    def __rmul__(self, n: int) -> "TruncatedPadic":
        return padic_scale(n, self)


def _check_compatible(x: TruncatedPadic, y: TruncatedPadic) -> None:
    if x.base != y.base or x.precision != y.precision:
        raise IncompatibleOperands(
            f"cannot combine base {x.base} precision {x.precision} "
            f"with base {y.base} precision {y.precision}"
        )


def padic_add(x: TruncatedPadic, y: TruncatedPadic) -> TruncatedPadic:
    _check_compatible(x, y)
    return TruncatedPadic(x.base, x.precision, (x.residue + y.residue) % x.modulus)


def padic_neg(x: TruncatedPadic) -> TruncatedPadic:
    return TruncatedPadic(x.base, x.precision, (-x.residue) % x.modulus)


def padic_sub(x: TruncatedPadic, y: TruncatedPadic) -> TruncatedPadic:
    _check_compatible(x, y)
    return TruncatedPadic(x.base, x.precision, (x.residue - y.residue) % x.modulus)


def padic_scale(n: int, x: TruncatedPadic) -> TruncatedPadic:
    """Integer multiple ``n * x`` at fixed precision; ``n`` may be negative."""
    return TruncatedPadic(x.base, x.precision, (n * x.residue) % x.modulus)


def padic_valuation(x: TruncatedPadic) -> Valuation:
    """Largest v with ``base**v`` dividing the residue.

    A zero residue saturates: the truncation certifies only valuation >= k.
    """
    if x.residue == 0:
        return Valuation(x.precision, saturated=True)
    v = 0
    r = x.residue
    while r % x.base == 0:
        r //= x.base
        v += 1
    return Valuation(v, saturated=False)


def padic_distance(x: TruncatedPadic, y: TruncatedPadic) -> Distance:
    """Ultrametric distance ``base**-v(x - y)``, bounded when residues agree."""
    _check_compatible(x, y)
    val = padic_valuation(padic_sub(x, y))
    if val.saturated:
        return bounded_distance(x.base, x.precision)
    return exact_distance(x.base, val.digits)


def padic_project(x: TruncatedPadic, precision: int) -> TruncatedPadic:
    """Forget digits beyond ``precision``; the bonding map of the quotient tower."""
    if not 1 <= precision <= x.precision:
        raise ValueError(
            f"target precision {precision} outside [1, {x.precision}]"
        )
    return TruncatedPadic(x.base, precision, x.residue % x.base**precision)


@dataclass(frozen=True)
class PrefixCodeHomeo:
    """A complete prefix-free binary code for digits of ``source_base``.

    ``code[d]`` is the binary codeword emitted for source digit ``d``. The
    default table {0: 00, 1: 01, 2: 1} is the smallest complete code between
    ternary and binary digit streams; completeness (Kraft sum exactly 1) plus
    prefix-freeness make decoding a genuine homeomorphism of digit streams.
    """

    source_base: int = 3
    code: tuple[str, ...] = ("00", "01", "1")

    def __post_init__(self) -> None:
        if len(self.code) != self.source_base:
            raise ValueError("need exactly one codeword per source digit")
        for word in self.code:
            if not word or any(c not in "01" for c in word):
                raise ValueError(f"codeword {word!r} is not a nonempty binary string")
        for i, w in enumerate(self.code):
            for j, v in enumerate(self.code):
                if i != j and v.startswith(w):
                    raise ValueError(f"codeword {w!r} is a prefix of {v!r}")
        if self.kraft_sum != 1:
            raise ValueError(f"code is not complete: Kraft sum {self.kraft_sum}")

    @property
    def kraft_sum(self) -> Fraction:
        return sum((Fraction(1, 2 ** len(w)) for w in self.code), Fraction(0))


def default_glue() -> PrefixCodeHomeo:
    return PrefixCodeHomeo()


@dataclass(frozen=True)
class GlueResult:
    """Outcome of a partial decode: full digits determined, tail discarded."""

    digits: str
    precision: int
    leftover: str


def glue_forward(glue: PrefixCodeHomeo, binary: str) -> GlueResult:
    """Greedily decode a binary digit string into source-base digits.

    Only whole codewords produce digits; a trailing partial codeword is
    reported as leftover. The count of decoded digits is the achieved
    precision on the source-base side.
    """
    table = {w: i for i, w in enumerate(glue.code)}
    lengths = sorted({len(w) for w in glue.code})
    out = []
    pos = 0
    n = len(binary)
    while pos < n:
        for length in lengths:
            piece = binary[pos : pos + length]
            if len(piece) == length and piece in table:
                out.append(_DIGIT_CHARS[table[piece]])
                pos += length
                break
        else:
            break
    return GlueResult("".join(out), len(out), binary[pos:])


def glue_backward(glue: PrefixCodeHomeo, digits: str) -> str:
    """Concatenate codewords; exact inverse of ``glue_forward`` on full inputs."""
    out = []
    for ch in digits:
        d = ord(ch) - ord("0")
        if not 0 <= d < glue.source_base:
            raise ValueError(f"digit {ch!r} out of range for base {glue.source_base}")
        out.append(glue.code[d])
    return "".join(out)


def glue_value(glue: PrefixCodeHomeo, x: TruncatedPadic) -> TruncatedPadic:
    """Image of a binary truncation on the ternary side, at achieved precision."""
    if x.base != 2:
        raise ValueError("glue consumes base-2 truncations")
    res = glue_forward(glue, x.digits())
    if res.precision == 0:
        raise GluePrecisionError(
            f"{x.precision} binary digits determine no base-{glue.source_base} digit"
        )
    return TruncatedPadic.from_digits(res.digits, glue.source_base)


def normalized_glue(glue: PrefixCodeHomeo, x: TruncatedPadic) -> TruncatedPadic:
    """The offset-free glue image: image of x minus image of 0, ternary side."""
    fx = glue_value(glue, x)
    f0 = glue_value(glue, TruncatedPadic(2, x.precision, 0))
    m = min(fx.precision, f0.precision)
    return padic_sub(padic_project(fx, m), padic_project(f0, m))


@dataclass(frozen=True)
class RigidityReport:
    """Doubling orbits of ``a`` on both sides of the glue.

    ``u_valuations[i]`` is the binary valuation of ``2^i * a``: it must climb
    by one per step until the truncation saturates (the orbit contracts to 0).
    ``w_distances[i]`` is the ternary distance between consecutive glued
    multiples ``2^i * nglue(a)``: doubling is an isometry on the ternary side,
    so the distances are one constant rational and the orbit never contracts.
    ``diverges`` is true exactly when both patterns were observed.
    """

    a: TruncatedPadic
    glued_offset: TruncatedPadic
    u_valuations: tuple[Valuation, ...]
    w_distances: tuple[Distance, ...]
    expected_distance: Fraction
    valuations_march: bool
    distances_constant: bool

    @property
    def diverges(self) -> bool:
        return self.valuations_march and self.distances_constant


def _valuations_march(vals: tuple[Valuation, ...], precision: int) -> bool:
    for prev, cur in zip(vals, vals[1:]):
        if prev.saturated:
            if not cur.saturated:
                return False
        elif prev.digits + 1 == precision:
            if not cur.saturated:
                return False
        elif not (not cur.saturated and cur.digits == prev.digits + 1):
            return False
    return True


def rigidity_witness(
    a: TruncatedPadic, iterations: int, glue: PrefixCodeHomeo | None = None
) -> RigidityReport:
    """Contrast the doubling orbit of ``a`` with its glued ternary shadow.

    Requires a nonzero ``a`` whose normalized glue image has at least one
    certified nonzero ternary digit; otherwise the truncation is too coarse
    and a :class:`GluePrecisionError` names the binary digits required.
    """
    if a.base != 2:
        raise ValueError("rigidity witness starts from a base-2 truncation")
    if a.residue == 0:
        raise ValueError("a = 0 is the excluded case: its glued offset is 0")
    if iterations < 2:
        raise ValueError("need at least two iterations to compare")
    glue = glue if glue is not None else default_glue()

    fbar = normalized_glue(glue, a)
    if fbar.residue == 0:
        raise GluePrecisionError(
            f"normalized glue image vanishes at ternary precision {fbar.precision}; "
            f"supply at least {2 * (fbar.precision + 1)} binary digits"
        )
    base_val = padic_valuation(fbar)
    expected = Fraction(1, 3**base_val.digits)

    u = a
    u_vals = []
    for _ in range(iterations):
        u_vals.append(padic_valuation(u))
        u = padic_scale(2, u)

    w = fbar
    w_dists = []
    for _ in range(iterations - 1):
        w_next = padic_scale(2, w)
        w_dists.append(padic_distance(w, w_next))
        w = w_next

    march = _valuations_march(tuple(u_vals), a.precision)
    constant = all(d.exact and d.bound == expected for d in w_dists)
    return RigidityReport(
        a=a,
        glued_offset=fbar,
        u_valuations=tuple(u_vals),
        w_distances=tuple(w_dists),
        expected_distance=expected,
        valuations_march=march,
        distances_constant=constant,
    )
