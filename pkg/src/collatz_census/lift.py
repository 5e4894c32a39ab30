"""Lifting free tuples u to window-constrained solutions v, and certified generation.

Each u_j >= 2 pins v_j to the window [6u_j - 7, 6u_j - 2], the six exponents
with floor((v_j + 1) / 6) = u_j - 1. Appending v to a solution prefix whose
number is a gives a solution exactly when b = (2^v * a - 1) / 3 is an integer
prime to 3, and then b is the new number. Only a mod 9 decides that, so the
lift carries a modulo a shrinking power of 3.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from math import floor
from typing import Iterator, Sequence

from .congruence import VTuple, build_number, format_tuple, is_primary_solution, rhs_terms
from .syracuse import trajectory

UTuple = tuple[int, ...]


class LiftError(RuntimeError):
    """An extension step found no admissible exponent, or a lifted number failed verification."""


@dataclass(frozen=True)
class Window:
    u: int
    lo: int
    hi: int

    def __contains__(self, v: int) -> bool:
        return self.lo <= v <= self.hi

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))


def window_of(u: int) -> Window:
    if u < 2:
        raise ValueError(f"window needs u >= 2, got {u}")
    return Window(u, 6 * u - 7, 6 * u - 2)


def _admissible(a9: int, v: int) -> bool:
    t = (pow(2, v, 9) * a9 - 1) % 9
    return t % 3 == 0 and t != 0


def _window_candidates(a9: int, u: int) -> list[int]:
    return [v for v in window_of(u) if _admissible(a9, v)]


def _prefix_residue(prefix: Sequence[int]) -> int:
    """B(prefix) mod 9 without building the number; 1 for the empty prefix."""
    if not prefix:
        return 1
    if not is_primary_solution(prefix):
        raise ValueError(f"prefix {format_tuple(prefix)} is not a solution")
    k = len(prefix)
    mod = 3 ** (k + 2)
    lhs, rhs = rhs_terms(prefix, mod)
    return ((lhs - rhs) % mod) // 3**k


def extend_candidates(prefix: Sequence[int], u_next: int) -> list[int]:
    """All v in window_of(u_next) such that prefix + (v,) solves the next-level equation."""
    return _window_candidates(_prefix_residue(prefix), u_next)


def paper_digit_choice(a9: int, u: int, literal: bool = False) -> int:
    """Exponent from the binary/ternary digit recipe, v = 6u - 2w - r.

    r is the binary digit with 2^r = a (mod 3). w is the largest ternary
    digit with 2^v * a != 1 (mod 9), which is what the recipe needs for v to
    extend the solution. literal=True instead tests 4^w * 2^r * a != 1
    (mod 9), the condition with the exponent signs as printed; that variant
    can yield inadmissible exponents. Callers check the result.
    """
    r = 0 if a9 % 3 == 1 else 1
    if literal:
        ok = [w for w in range(3) if (pow(4, w, 9) * pow(2, r, 9) * a9) % 9 != 1]
    else:
        ok = [w for w in range(3) if (pow(2, 6 * u - 2 * w - r, 9) * a9) % 9 != 1]
    return 6 * u - 2 * max(ok) - r


def lift(
    u: Sequence[int],
    selector: str = "smallest",
    strict: bool = False,
    multiplicities: Counter | None = None,
    check_exact: bool = False,
) -> VTuple:
    """Canonical solution v with v_j in window_of(u_j) for every j.

    selector="smallest" takes the least admissible exponent at each step.
    selector="paper" uses paper_digit_choice and raises LiftError when that
    exponent is not admissible. strict=True requires every u_j prime to 3.
    multiplicities, if given, counts the number of admissible exponents seen
    at each step.
    """
    if len(u) < 1 or any(x < 2 for x in u):
        raise ValueError(f"free tuple entries must be >= 2: {format_tuple(u)}")
    if strict and any(x % 3 == 0 for x in u):
        raise ValueError(f"strict mode needs entries prime to 3: {format_tuple(u)}")
    if selector not in ("smallest", "paper"):
        raise ValueError(f"unknown selector {selector!r}")

    mod = 3 ** (len(u) + 1)
    a = 1
    v: list[int] = []
    for k, uk in enumerate(u):
        cands = _window_candidates(a % 9, uk)
        if multiplicities is not None:
            multiplicities[len(cands)] += 1
        if not cands:
            raise LiftError(f"no admissible exponent for u_{k + 1}={uk} after prefix {format_tuple(v) or '()'}")
        if selector == "smallest":
            vk = cands[0]
        else:
            vk = paper_digit_choice(a % 9, uk)
            if vk not in cands:
                raise LiftError(f"digit recipe gives {vk} for u_{k + 1}={uk}, admissible: {cands}")
        v.append(vk)
        a = ((pow(2, vk, mod) * a - 1) % mod) // 3
        mod //= 3
        if check_exact:
            exact = build_number(v).n
            assert exact % mod == a % mod, (v, exact, a)
    return tuple(v)


def compositions(length: int, budget: int, least: int = 2) -> Iterator[UTuple]:
    """Tuples of `length` integers >= least with sum <= budget, in lexicographic order."""
    if length == 0:
        yield ()
        return
    for first in range(least, budget - least * (length - 1) + 1):
        for rest in compositions(length - 1, budget - first, least):
            yield (first, *rest)


@dataclass(frozen=True)
class LiftRecord:
    u: UTuple
    v: VTuple
    n: int


@dataclass
class CertifiedBatch:
    x: int
    l: int
    budget: float
    records: list[LiftRecord] = field(default_factory=list)
    admitted: int = 0
    oversize: int = 0
    multiplicities: Counter = field(default_factory=Counter)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u_tuple", "v_tuple", "n", "admitted"])
        for r in self.records:
            w.writerow([format_tuple(r.u), format_tuple(r.v), r.n, int(r.n <= self.x)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "l": self.l,
            "budget": self.budget,
            "admitted": self.admitted,
            "oversize": self.oversize,
            "records": [
                {"u_tuple": format_tuple(r.u), "v_tuple": format_tuple(r.v), "n": str(r.n), "admitted": r.n <= self.x}
                for r in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def certified_generate(
    x: int,
    l: int,
    budget_sum: float,
    verify: bool = True,
    selector: str = "smallest",
    strict: bool = False,
) -> CertifiedBatch:
    """Lift every free tuple of length l with sum <= budget_sum and build its Collatz number.

    The admitted numbers (those <= x) are distinct Collatz numbers of level
    exactly l, so their count is a lower bound for pi(x, l) that does not
    rely on any size estimate. With verify=True each number's level is
    checked by direct iteration.
    """
    if l < 1:
        raise ValueError("level must be >= 1")
    batch = CertifiedBatch(x, l, budget_sum)
    seen: set[int] = set()
    for u in compositions(l, floor(budget_sum)):
        if strict and any(x_ % 3 == 0 for x_ in u):
            continue
        v = lift(u, selector=selector, multiplicities=batch.multiplicities)
        n = build_number(v).n
        if verify:
            t = trajectory(n, l + 1)
            if not t.terminated or len(t.steps) != l or n % 3 == 0:
                raise LiftError(f"u={format_tuple(u)} v={format_tuple(v)} n={n}: level {len(t.steps)}, expected {l}")
            if n in seen:
                raise LiftError(f"u={format_tuple(u)} repeats n={n}")
            seen.add(n)
        batch.records.append(LiftRecord(tuple(u), v, n))
        if n <= x:
            batch.admitted += 1
        else:
            batch.oversize += 1
    return batch


def size_audit(records: Sequence[LiftRecord]) -> dict:
    """How many records meet n <= 12^-l 4^(3 sum u) and n <= 192^-l 4^(3 sum u), compared as integers."""
    safe = paper = 0
    for r in records:
        top = 4 ** (3 * sum(r.u))
        safe += r.n * 12 ** len(r.u) <= top
        paper += r.n * 192 ** len(r.u) <= top
    return {"records": len(records), "within_12": safe, "within_192": paper}


def paper_selector_audit(tuples: Sequence[Sequence[int]], literal: bool = False) -> dict:
    """Compare the digit recipe against the smallest admissible exponent, step by step.

    Prefixes follow the smallest-candidate lift, so every step is audited
    even where the recipe would have failed.
    """
    steps = agree = in_window = admissible = 0
    for u in tuples:
        a, mod = 1, 3 ** (len(u) + 1)
        for uk in u:
            cands = _window_candidates(a % 9, uk)
            alt = paper_digit_choice(a % 9, uk, literal)
            steps += 1
            in_window += alt in window_of(uk)
            admissible += alt in cands
            agree += alt == cands[0]
            vk = cands[0]
            a = ((pow(2, vk, mod) * a - 1) % mod) // 3
            mod //= 3
    return {"steps": steps, "in_window": in_window, "admissible": admissible, "agrees_with_smallest": agree}
