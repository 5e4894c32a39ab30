"""Machine-word Syracuse kernels.

Every kernel stops before a step whose 3v+1 could overflow int64 and hands
the offending start value back to the caller, which finishes it with Python
integers. Results are therefore identical to the big-integer path.
"""

import numba
import numpy as np

# largest v with 3v + 1 < 2**63
WORD_LIMIT = (2**63 - 2) // 3


@numba.njit(cache=True, nogil=True)
def _walk(v, steps, stop_below, table, cap, word_limit):
    # Returns (level or -1 for unresolved, or -2 when word_limit is exceeded).
    while True:
        if v == 1:
            return steps
        if v < stop_below:
            lv = table[(v - 1) >> 1]
            if lv < 0:
                return -1
            total = steps + lv
            return total if total <= cap else -1
        if steps >= cap:
            return -1
        if v > word_limit:
            return -2
        m = 3 * v + 1
        while (m & 1) == 0:
            m >>= 1
        v = m
        steps += 1


@numba.njit(cache=True, nogil=True)
def fill_levels(table, start, cap, word_limit):
    """Fill table[i] = level(2i+1) for i >= start, in increasing order.

    Each walk stops at the first value below its start, whose entry is
    already final. Returns len(table), or the index whose walk left the
    word range.
    """
    for i in range(start, len(table)):
        n = 2 * i + 1
        if n == 1:
            table[i] = 0
            continue
        lv = _walk(n, 0, n, table, cap, word_limit)
        if lv == -2:
            return i
        table[i] = lv
    return len(table)


@numba.njit(cache=True, nogil=True)
def count_levels(n, hi, table, cap, word_limit, counts):
    """Add the level of every odd value in [n, hi) to counts.

    Walks stop on entering the table's range. Returns (next start, number
    of unresolved values); next start < hi marks a value needing big integers.
    """
    bound = 2 * len(table) + 1
    unresolved = 0
    while n < hi:
        lv = _walk(n, 0, bound, table, cap, word_limit)
        if lv == -2:
            return n, unresolved
        if lv < 0:
            unresolved += 1
        else:
            counts[lv] += 1
        n += 2
    return n, unresolved


def empty_table():
    return np.zeros(0, dtype=np.int32)
