"""Independent brute-force references used by the tests.

These deliberately avoid the package: plain halving loops, itertools
enumeration, direct big-integer arithmetic.
"""

from collections import Counter
from itertools import product


def brute_level(n, cap=10**5):
    steps = 0
    while n != 1:
        if steps >= cap:
            return None
        n = 3 * n + 1
        while n % 2 == 0:
            n //= 2
        steps += 1
    return steps


def brute_census(x, cap=10**5):
    levels = Counter(brute_level(n, cap) for n in range(1, x + 1, 2))
    unresolved = levels.pop(None, 0)
    return dict(levels), unresolved


def brute_valuations(n):
    out = []
    while n != 1:
        m, k = 3 * n + 1, 0
        while m % 2 == 0:
            m //= 2
            k += 1
        out.append(k)
        n = m
    return out


def brute_omega(y, l, least=2):
    top = int(y // 1)
    if top < least * l:
        return 0
    return sum(1 for u in product(range(least, top + 1), repeat=l) if sum(u) <= y)


def brute_B(v):
    l = len(v)
    rhs = sum(3**j * 2 ** sum(v[j + 1:]) for j in range(l))
    return 2 ** sum(v) - rhs
