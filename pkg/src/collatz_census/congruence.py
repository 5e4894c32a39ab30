"""The (2,3)-primary congruence equation and the map B between its solutions and Collatz numbers.

For v = (v_1, ..., v_l) write P = 2^(v_1+...+v_l) and

    R = sum_{j=0}^{l-1} 3^j * 2^(v_{j+2}+...+v_l),

where the j = l-1 term has an empty exponent sum and equals 3^(l-1).
v solves the level-l equation when 3^l divides P - R exactly (3^(l+1) does not).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .syracuse import DEFAULT_CAP, UnresolvedError, trajectory

VTuple = tuple[int, ...]


def parse_tuple(text: str) -> tuple[int, ...]:
    """Parse the comma-separated text form, e.g. ``"4,3"``."""
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ValueError(f"malformed tuple {text!r}") from None
    return parts


def format_tuple(t: Sequence[int]) -> str:
    return ",".join(str(x) for x in t)


def _check_vtuple(v: Sequence[int]) -> None:
    if len(v) < 1:
        raise ValueError("tuple must have at least one entry")
    if any(x < 1 for x in v):
        raise ValueError(f"tuple entries must be positive: {format_tuple(v)}")


def rhs_terms(v: Sequence[int], modulus: int | None = None) -> tuple[int, int]:
    """(P, R) for the tuple, exact or reduced mod `modulus`."""
    l = len(v)
    power = 0  # running suffix sum v_{j+2} + ... + v_l
    rhs = 0
    for j in range(l - 1, -1, -1):
        if j < l - 1:
            power += v[j + 1]
        if modulus is None:
            rhs += 3**j << power
        else:
            rhs = (rhs + pow(3, j, modulus) * pow(2, power, modulus)) % modulus
    total = sum(v)
    lhs = 1 << total if modulus is None else pow(2, total, modulus)
    return lhs, rhs


def is_primary_solution(v: Sequence[int], exact: bool = False) -> bool:
    """True iff 2^(sum v) agrees with R mod 3^l but not mod 3^(l+1).

    The default path works mod 3^(l+1); `exact=True` uses the full integers.
    """
    _check_vtuple(v)
    l = len(v)
    if exact:
        lhs, rhs = rhs_terms(v)
        diff = lhs - rhs
        return diff % 3**l == 0 and diff % 3 ** (l + 1) != 0
    mod = 3 ** (l + 1)
    lhs, rhs = rhs_terms(v, mod)
    diff = (lhs - rhs) % mod
    return diff % 3**l == 0 and diff != 0


@dataclass(frozen=True)
class BuildResult:
    n: int
    exact_power: int
    rhs_sum: int


def build_number(v: Sequence[int]) -> BuildResult:
    """B(v) = (2^(sum v) - R) / 3^l for a solution tuple v."""
    if not is_primary_solution(v):
        raise ValueError(f"{format_tuple(v)} does not solve the level-{len(v)} equation")
    lhs, rhs = rhs_terms(v)
    n, rem = divmod(lhs - rhs, 3 ** len(v))
    assert rem == 0 and n >= 1 and n % 2 == 1 and n % 3 != 0
    return BuildResult(n, lhs, rhs)


def decompose(n: int, cap: int = DEFAULT_CAP) -> VTuple:
    """Valuations along the trajectory of n, read backwards.

    v_m = ord2(3 S^(l-m)(n) + 1), so v_l belongs to the first step and v_1
    to the last step, the one landing on 1.
    """
    if n <= 1 or n % 2 == 0:
        raise ValueError(f"decompose needs an odd n > 1, got {n}")
    if n % 3 == 0:
        raise ValueError(f"{n} is divisible by 3")
    t = trajectory(n, cap)
    if not t.terminated:
        raise UnresolvedError(f"{n} did not reach 1 within {cap} steps")
    return tuple(reversed(t.valuations))


def verify_inverse(v: Sequence[int], cap: int = DEFAULT_CAP) -> bool:
    """Check that B(v) has level len(v) and its trajectory valuations reproduce v.

    Raises UnresolvedError if B(v) does not reach 1 within `cap` steps.
    """
    if v[0] <= 2:
        raise ValueError("verify_inverse needs v_1 > 2")
    n = build_number(v).n
    t = trajectory(n, cap)
    if not t.terminated:
        raise UnresolvedError(f"B({format_tuple(v)}) = {n} did not reach 1 within {cap} steps")
    return len(t.steps) == len(v) and tuple(reversed(t.valuations)) == tuple(v)
