"""Independent brute-force oracles used to validate graph construction.

Everything here is deliberately written as plain Python loops over pairs —
no shared code paths with the package internals, so agreement between the
two is meaningful evidence.
"""

import math


def oracle_dist(u, v, metric):
    if metric == "euclidean":
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(u, v)))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return 1.0 - sum(a * b for a, b in zip(u, v)) / (nu * nv)


def brute_knn_edges(vectors, k, metric):
    """Directed k-NN edge set, ties broken toward the smaller index."""
    n = len(vectors)
    edges = set()
    for i in range(n):
        ranked = sorted(
            (oracle_dist(vectors[i], vectors[j], metric), j)
            for j in range(n) if j != i
        )
        for _, j in ranked[:k]:
            edges.add((i, j))
    return edges


def brute_inc_knn_edges(vectors, k, order, metric):
    """Sequential-insertion edge set for a given insertion order.

    ``order[t]`` is the original row inserted at step t; the first k
    insertions add no edges.
    """
    edges = set()
    for t in range(k, len(order)):
        i = order[t]
        ranked = sorted(
            (oracle_dist(vectors[i], vectors[j], metric), j)
            for j in order[:t]
        )
        for _, j in ranked[:k]:
            edges.add((i, j))
    return edges


def brute_epsilon_pairs(vectors, eps, metric):
    """Unordered pairs within (inclusive) threshold."""
    n = len(vectors)
    return {
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if oracle_dist(vectors[i], vectors[j], metric) <= eps
    }


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def kruskal_mst(vectors, metric):
    """Exact MST of the complete graph: (pair set, total weight, max weight)."""
    n = len(vectors)
    ranked = sorted(
        (oracle_dist(vectors[i], vectors[j], metric), i, j)
        for i in range(n) for j in range(i + 1, n)
    )
    uf = UnionFind(n)
    pairs = set()
    total = 0.0
    longest = 0.0
    for d, i, j in ranked:
        if uf.union(i, j):
            pairs.add((i, j))
            total += d
            longest = max(longest, d)
            if len(pairs) == n - 1:
                break
    return pairs, total, longest


# ---------------------------------------------------------------------------
# graph-statistics oracles (plain-Python, adjacency sets and O(n^3) loops)
# ---------------------------------------------------------------------------

def adjacency_sets(n, pairs):
    """Neighbor sets of the undirected graph given by (u, v) pairs."""
    nbrs = [set() for _ in range(n)]
    for u, v in pairs:
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def brute_density(n, pairs):
    return 2.0 * len(set(map(tuple, map(sorted, pairs)))) / (n * (n - 1))


def brute_assortativity(n, pairs):
    """Pearson degree correlation over both orderings of every edge."""
    nbrs = adjacency_sets(n, pairs)
    deg = [len(s) for s in nbrs]
    distinct = sorted(set(map(tuple, map(sorted, pairs))))
    xs, ys = [], []
    for u, v in distinct:
        xs += [deg[u], deg[v]]
        ys += [deg[v], deg[u]]
    m = len(xs)
    mx = sum(xs) / m
    my = sum(ys) / m
    sxy = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    sxx = sum((a - mx) ** 2 for a in xs)
    syy = sum((b - my) ** 2 for b in ys)
    if sxx == 0.0 or syy == 0.0:
        return None
    return sxy / math.sqrt(sxx * syy)


def brute_transitivity(n, pairs):
    """3 * triangles / connected triples by full triple enumeration."""
    nbrs = adjacency_sets(n, pairs)
    triples = 0
    closed = 0
    for center in range(n):
        around = sorted(nbrs[center])
        for i in range(len(around)):
            for j in range(i + 1, len(around)):
                triples += 1
                if around[j] in nbrs[around[i]]:
                    closed += 1
    if triples == 0:
        return 0.0
    return closed / triples


def brute_local_clustering(n, pairs):
    """Per-node C_v by neighborhood edge counting; 0 below degree 2."""
    nbrs = adjacency_sets(n, pairs)
    coeffs = []
    for v in range(n):
        k = len(nbrs[v])
        if k < 2:
            coeffs.append(0.0)
            continue
        around = sorted(nbrs[v])
        links = sum(
            1
            for i in range(k)
            for j in range(i + 1, k)
            if around[j] in nbrs[around[i]]
        )
        coeffs.append(2.0 * links / (k * (k - 1)))
    return coeffs


def brute_pagerank(n, directed_edges, d=0.85):
    """Dense linear-solve PageRank: (I - d P^T) x = (1-d)/n, dangling rows
    of P uniform."""
    import numpy as np

    p = np.zeros((n, n))
    out = [set() for _ in range(n)]
    for s, t in directed_edges:
        out[s].add(t)
    for s in range(n):
        if out[s]:
            for t in out[s]:
                p[s, t] = 1.0 / len(out[s])
        else:
            p[s, :] = 1.0 / n
    a = np.eye(n) - d * p.T
    x = np.linalg.solve(a, np.full(n, (1.0 - d) / n))
    return x / x.sum()


def brute_homophily(pairs, labels):
    seen = set(map(tuple, map(sorted, pairs)))
    if not seen:
        return None
    same = sum(1 for u, v in seen if labels[u] == labels[v])
    return same / len(seen)


def brute_vmeasure(true, pred, beta=1.0):
    """Entropy-based homogeneity/completeness/V from first principles."""
    from collections import Counter

    n = len(true)
    h_true = _label_entropy(Counter(true), n)
    h_pred = _label_entropy(Counter(pred), n)
    joint = Counter(zip(true, pred))
    # H(true | pred) and H(pred | true) from the joint distribution
    h_t_given_p = -sum(
        c / n * math.log((c / n) / (Counter(pred)[p] / n))
        for (t, p), c in joint.items()
    )
    h_p_given_t = -sum(
        c / n * math.log((c / n) / (Counter(true)[t] / n))
        for (t, p), c in joint.items()
    )
    h = 1.0 if h_true == 0.0 else 1.0 - h_t_given_p / h_true
    c = 1.0 if h_pred == 0.0 else 1.0 - h_p_given_t / h_pred
    denom = beta * h + c
    v = 0.0 if denom == 0.0 else (1.0 + beta) * h * c / denom
    return h, c, v


def _label_entropy(counts, n):
    return -sum(c / n * math.log(c / n) for c in counts.values())
