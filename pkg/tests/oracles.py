"""Independent brute-force references used to cross-check the fast paths.

Everything here is written the slow, obvious way (triple enumeration,
Floyd-Warshall, numpy Pearson) on purpose; none of it shares code with the
implementations it checks. Undefined quantities come back as None.
"""

from itertools import combinations

import numpy as np


def degrees(g):
    return {u: len(g.neighbors(u)) for u in g.nodes()}


def bf_max_degree(g):
    degs = degrees(g)
    return max(degs.values()) if degs else None


def bf_average_degree(g):
    degs = degrees(g)
    return sum(degs.values()) / len(degs) if degs else None


def bf_ccdf(g):
    degs = list(degrees(g).values())
    n = len(degs)
    out = []
    for k in sorted(set(degs)):
        out.append((k, sum(1 for d in degs if d >= k) / n))
    return out


def bf_components(g):
    nodes = set(g.nodes())
    comps = []
    while nodes:
        start = min(nodes)
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in g.neighbors(u):
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        comps.append(comp)
        nodes -= comp
    return comps


def bf_giant_nodes(g):
    comps = bf_components(g)
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps[0] if comps else set()


def bf_all_pairs(g, nodes):
    """Floyd-Warshall over the induced subgraph on nodes."""
    order = sorted(nodes)
    index = {u: i for i, u in enumerate(order)}
    n = len(order)
    inf = float("inf")
    dist = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u in order:
        for v in g.neighbors(u):
            if v in index:
                dist[index[u]][index[v]] = 1
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return order, dist


def bf_aspl(g):
    giant = bf_giant_nodes(g)
    if len(giant) < 2:
        return None
    order, dist = bf_all_pairs(g, giant)
    total = 0
    pairs = 0
    for i, j in combinations(range(len(order)), 2):
        total += dist[i][j]
        pairs += 1
    return total / pairs


def bf_clustering(g):
    nodes = sorted(g.nodes())
    triangles = 0
    for a, b, c in combinations(nodes, 3):
        if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c):
            triangles += 1
    paths2 = 0
    for center in nodes:
        for a, b in combinations(sorted(g.neighbors(center)), 2):
            paths2 += 1
    if paths2 == 0:
        return None
    return 3 * triangles / paths2


def bf_assortativity(g):
    ends_x = []
    ends_y = []
    degs = degrees(g)
    for u, v in g.edges():
        ends_x.extend([degs[u], degs[v]])
        ends_y.extend([degs[v], degs[u]])
    if not ends_x:
        return None
    x = np.array(ends_x, dtype=float)
    y = np.array(ends_y, dtype=float)
    if np.var(x) == 0 or np.var(y) == 0:
        return None
    return float(np.corrcoef(x, y)[0, 1])
