"""Independent rational-arithmetic reference for frozen test values.

Run: python3 tools/oracle.py
"""

from fractions import Fraction as Q
from functools import lru_cache


def measure(pairs):
    return tuple(sorted((Q(x), Q(w)) for x, w in pairs))


def update(m, x):
    d = dict(m)
    d[x] = d.get(x, Q(0)) + 1
    return tuple(sorted(d.items()))


def predictive(m):
    total = sum(w for _, w in m)
    return [(x, w / total) for x, w in m]


@lru_cache(maxsize=None)
def value(a1, a2, disc):
    if not disc:
        return Q(0), Q(0), Q(0)
    head, rest = disc[0], disc[1:]
    w1 = sum(p * (head * x + value(update(a1, x), a2, rest)[0]) for x, p in predictive(a1))
    w2 = sum(p * (head * x + value(a1, update(a2, x), rest)[0]) for x, p in predictive(a2))
    return max(w1, w2), w1, w2


def known_optimal(arm, lam, disc):
    _, w1, w2 = value(arm, measure([(lam, 1)]), disc)
    return w1 <= w2


def break_even(arm, disc, iters=80):
    lo = sum(x * w for x, w in arm) / sum(w for _, w in arm)
    hi = max(x for x, _ in arm)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if known_optimal(arm, mid, disc):
            hi = mid
        else:
            lo = mid
    return hi


def main():
    coin = measure([(0, 1), (1, 1)])
    half = measure([(Q(1, 2), 1)])
    print("coin W", value(coin, half, (Q(1), Q(1))))
    print("coin lambda ~", float(break_even(coin, (Q(1), Q(1)))))

    three1 = measure([(0, Q(1, 2)), (Q(1, 2), 1), (1, Q(1, 2))])
    three2 = measure([(Q(1, 4), 1), (Q(5, 8), 1), (Q(3, 4), 2)])
    geo = tuple(Q(3, 4) ** k for k in range(4))
    print("three-atom W", value(three1, three2, geo))

    p3a = measure([(0, 1), (Q(1, 2), 1), (1, 1)])
    p3b = measure([(Q(1, 8), 1), (Q(1, 2), 2), (Q(7, 8), 1)])
    print("s=3 n=8 W", value(p3a, p3b, tuple(Q(1) for _ in range(8)))[0])

    beta = measure([(0, 2), (1, 1)])
    print("arm {0:2,1:1} n=3 lambda ~", float(break_even(beta, (Q(1),) * 3)))
    skew = measure([(0, 1), (Q(1, 2), 1), (2, 1)])
    print("arm {0,1/2,2} geo(1/2) n=3 lambda ~",
          float(break_even(skew, (Q(1), Q(1, 2), Q(1, 4)))))


if __name__ == "__main__":
    main()
