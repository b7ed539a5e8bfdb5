"""Independent numpy oracles for the frozen constants in the C++ unit tests.

Run: python3 tests/oracle/compute_oracles.py
Nothing here shares code with the library; every value is recomputed from dense matrices.
"""
import itertools
import math

import numpy as np


def proj(cols):
    q, _ = np.linalg.qr(np.atleast_2d(np.array(cols, dtype=float)).T)
    return q @ q.T


def unit(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v


def slownono(J):
    n = 2 * J
    L = [[], [], []]
    for j in range(1, J + 1):
        b = 2 * (j - 1)
        L[0].append(unit(n, b))
        L[1].append(unit(n, b) + unit(n, b + 1) / j)
        L[2].append(unit(n, b) + 2 * unit(n, b + 1) / j)
    return [proj(c) for c in L]


def bk(J):
    n = 3 * J
    L = [[], [], []]
    for j in range(1, J + 1):
        b = 3 * (j - 1)
        L[0].append(unit(n, b + 1))
        L[1].append(unit(n, b + 1) + unit(n, b + 2) / j)
        L[2].append(unit(n, b))
    return [proj(c) for c in L]


def gap(Ps):
    # intersection is {0} for these families, so L-perp is everything
    n = Ps[0].shape[0]
    S = sum(np.eye(n) - P for P in Ps)
    return np.linalg.eigvalsh(S)[0]


def cycle_rate(Ps):
    T = np.eye(Ps[0].shape[0])
    for P in Ps:
        T = P @ T
    return max(abs(np.linalg.eigvals(T)))


print("dist(e3, span{e3+e4/2}) =", repr(np.linalg.norm(unit(4, 2) - proj([unit(4, 2) + unit(4, 3) / 2]) @ unit(4, 2))))

# ladder: M lines from u to v in the (u, v) plane, composed numerically
for M in (1, 2, 10, 90):
    u, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    x = u.copy()
    for k in range(1, M + 1):
        t = k * math.pi / (2 * M)
        d = np.array([math.cos(t), math.sin(t)])
        x = d * (d @ x)
    print(f"ladder residual M={M}:", repr(np.linalg.norm(v - x)))
M = 1
while 1 - math.cos(math.pi / (2 * M)) ** M >= 0.02:
    M += 1
print("ladder crossover for 0.02:", M)

for J in (10, 20):
    Ps = slownono(J)
    e = unit(2 * J, 2 * J - 2)
    s = sum(np.linalg.norm(e - P @ e) ** 2 for P in Ps)
    print(f"slownono J={J}: gap", repr(gap(Ps)), "sum dist^2 e_2J-1", repr(s), "cycle rate", repr(cycle_rate(Ps)))

for J in (10, 20):
    Ps = bk(J)
    print(f"bk J={J}: triple gap", repr(gap(Ps)), "pair gap", repr(gap(Ps[:2])))

th = 0.7
P1, P2 = proj([[1, 0]]), proj([[math.cos(th), math.sin(th)]])
print("two lines theta=0.7 gap", repr(gap([P1, P2])), "1-cos", repr(1 - math.cos(th)))

for K in range(5, 10):
    V = list(itertools.combinations(range(1, K + 1), 4))
    E = sum(1 for a, b in itertools.combinations(V, 2) if len(set(a) & set(b)) == 3)
    print(f"J({K},4): vertices {len(V)} edges {E}")
