"""Independent brute-force oracles and map pools shared by the tests.

The parameter oracle treats a map as a black box over growing windows and
classifies each parameter by stabilization: a count that stops growing
between two windows is finite and equal to the stabilized value, a count
that keeps growing is infinite.  Only the window sizes use the shape of
the normal form; the counts themselves come from raw evaluation.
"""

from collections import Counter
import random

from maxsemi.core import ALEPH0, Card
from maxsemi.mapexpr import AffinePeriodic, evaluate


def oracle_params(f: AffinePeriodic) -> tuple[Card, Card, Card]:
    """Window-extrapolated (defect, collapse, infinite-fiber count)."""
    n, p, s = f.threshold, f.period, f.shift
    top = max(f.table)
    if s == 0:
        m1 = (n + p) * 4 + 16
        m2 = m1 * 2
        c1 = Counter(f(x) for x in range(m1))
        c2 = Counter(f(x) for x in range(m2))
        growing = [y for y in c2 if c2[y] > c1.get(y, 0)]
        k = Card(len(growing))
        b1, b2 = top + 3, top + 9
        image = set(c2)
        d_grow = sum(1 for y in range(b1, b2) if y not in image)
        d = ALEPH0 if d_grow else Card(sum(1 for y in range(b1) if y not in image))
        coll1 = sum(v - 1 for v in c1.values())
        coll2 = sum(v - 1 for v in c2.values())
        c = ALEPH0 if coll2 > coll1 else Card(coll1)
        return d, c, k

    y1 = top + 1 + s
    y2 = y1 + s
    m = n + p + p * (y2 // s + 2)
    fibers = Counter(f(x) for x in range(m))
    fibers2 = Counter(f(x) for x in range(2 * m))
    image = set(fibers)

    def misses(bound):
        return sum(1 for y in range(bound) if y not in image)

    d = Card(misses(y1)) if misses(y2) == misses(y1) else ALEPH0

    def collisions(bound):
        return sum(fibers[y] - 1 for y in range(bound) if fibers[y])

    c = Card(collisions(y1)) if collisions(y2) == collisions(y1) else ALEPH0

    growing = [y for y in range(y1) if fibers2.get(y, 0) > fibers.get(y, 0)]
    k = Card(len(growing))
    return d, c, k


def shape_grid(max_len=8, max_p=6, max_s=12):
    """Every (threshold, period, shift) with period <= max_p, table length
    <= max_len, shift <= max_s."""
    shapes = []
    for p in range(1, max_p + 1):
        for n in range(0, max_len - p + 1):
            for s in range(0, max_s + 1):
                shapes.append((n, p, s))
    return shapes


def affine_pool(seed=20260809, per_shape=3, max_entry=12):
    """Deterministic pool covering the whole shape grid."""
    rng = random.Random(seed)
    pool = []
    for n, p, s in shape_grid():
        for _ in range(per_shape):
            table = tuple(rng.randint(0, max_entry) for _ in range(n + p))
            pool.append(AffinePeriodic(n, p, s, table))
    return pool


def random_affine(rng, max_len=8, max_p=6, max_s=12, max_entry=12):
    p = rng.randint(1, max_p)
    n = rng.randint(0, max_len - p)
    s = rng.randint(0, max_s)
    table = tuple(rng.randint(0, max_entry) for _ in range(n + p))
    return AffinePeriodic(n, p, s, table)


def eval_equal(e1, e2, bound) -> bool:
    return all(evaluate(e1, x) == evaluate(e2, x) for x in range(bound))
