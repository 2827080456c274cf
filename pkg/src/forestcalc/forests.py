"""Links, graphs, forests and trees on the index set {1..n}.

A *link* is an unordered pair {i,j} of distinct vertices, a *graph* is any
set of links, and a *forest* is a loop-free graph.  The connected components
of a forest are its *clusters*; a forest with a single cluster spanning all
vertices is a *tree*.  Enumeration order is canonical (lexicographic on the
sorted link list) so that outputs are byte-for-byte reproducible.

Vertices are labelled 1..n throughout, matching the usual convention for
rooted variants where each cluster is rooted at its least vertex.
"""

from __future__ import annotations

import bisect
from itertools import product
from math import factorial
from typing import Iterator, Optional, Sequence

from .errors import SizeLimitError, ValidationError
from .limits import active_limits

Link = tuple[int, int]

# Absolute ceiling for enumeration regardless of FORESTCALC_LIMIT; n = 8
# already means 561948 forests / 262144 trees.
HARD_MAX_N = 8


def canon_link(i: int, j: int) -> Link:
    if i == j:
        raise ValidationError(f"link endpoints must be distinct, got ({i}, {j})")
    return (i, j) if i < j else (j, i)


def all_links(n: int) -> list[Link]:
    """The complete link set on {1..n}, lexicographically sorted."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


class Forest:
    """A loop-free link set together with its cluster partition.

    Instances are immutable and hashable; the cluster partition, adjacency
    map and per-cluster root/layer data are computed once at construction.
    """

    __slots__ = ("n", "links", "_adj", "clusters", "_cluster_index", "_parent", "_layer")

    def __init__(self, n: int, links=()):
        if n < 1:
            raise ValidationError(f"vertex count must be >= 1, got {n}")
        self.n = n
        canon = set()
        for i, j in links:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValidationError(f"link ({i}, {j}) has endpoints outside 1..{n}")
            canon.add(canon_link(i, j))
        self.links = tuple(sorted(canon))
        self._adj = {v: [] for v in range(1, n + 1)}
        for i, j in self.links:
            self._adj[i].append(j)
            self._adj[j].append(i)
        self._build_clusters()
        if len(self.links) != n - len(self.clusters):
            raise ValidationError("link set contains a loop; not a forest")
        self._parent = None
        self._layer = None

    def _build_clusters(self):
        seen = {}
        clusters = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            comp = [start]
            seen[start] = len(clusters)
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self._adj[v]:
                    if u not in seen:
                        seen[u] = len(clusters)
                        comp.append(u)
                        stack.append(u)
            clusters.append(frozenset(comp))
        self.clusters = tuple(clusters)
        self._cluster_index = seen

    # -- structural queries -------------------------------------------------

    def same_cluster(self, i: int, j: int) -> bool:
        self._check_vertex(i)
        self._check_vertex(j)
        return self._cluster_index[i] == self._cluster_index[j]

    def cluster_of(self, i: int) -> frozenset:
        self._check_vertex(i)
        return self.clusters[self._cluster_index[i]]

    def path(self, i: int, j: int) -> Optional[list[Link]]:
        """The unique simple path from i to j as a list of links.

        Returns None when i and j lie in different clusters and [] when
        i == j.  Uniqueness is automatic in a loop-free graph.
        """
        self._check_vertex(i)
        self._check_vertex(j)
        if i == j:
            return []
        if not self.same_cluster(i, j):
            return None
        prev = {i: None}
        stack = [i]
        while stack:
            v = stack.pop()
            if v == j:
                break
            for u in self._adj[v]:
                if u not in prev:
                    prev[u] = v
                    stack.append(u)
        path = []
        v = j
        while prev[v] is not None:
            path.append(canon_link(v, prev[v]))
            v = prev[v]
        path.reverse()
        return path

    def _root_data(self):
        # Root each cluster at its least vertex; layer = distance to root.
        if self._parent is None:
            parent = {}
            layer = {}
            for comp in self.clusters:
                root = min(comp)
                parent[root] = None
                layer[root] = 0
                stack = [root]
                while stack:
                    v = stack.pop()
                    for u in self._adj[v]:
                        if u not in layer:
                            layer[u] = layer[v] + 1
                            parent[u] = v
                            stack.append(u)
            self._parent = parent
            self._layer = layer
        return self._parent, self._layer

    def layer(self, i: int) -> int:
        """Height of i: number of links to the root of its cluster."""
        self._check_vertex(i)
        return self._root_data()[1][i]

    def ancestor(self, i: int) -> Optional[int]:
        """The neighbour of i on the path to its cluster root (None at a root)."""
        self._check_vertex(i)
        return self._root_data()[0][i]

    def is_spanning_tree(self) -> bool:
        return len(self.clusters) == 1

    def _check_vertex(self, i: int) -> None:
        if not (1 <= i <= self.n):
            raise ValidationError(f"vertex {i} outside 1..{self.n}")

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Forest) and (self.n, self.links) == (other.n, other.links)

    def __hash__(self):
        return hash((self.n, self.links))

    def __repr__(self):
        return f"Forest(n={self.n}, links={list(self.links)})"


class Tree(Forest):
    """A forest whose single cluster spans all of {1..n}.

    The empty link set is the tree on a singleton (n = 1).  The root is the
    least vertex, i.e. vertex 1.
    """

    def __init__(self, n: int, links=()):
        super().__init__(n, links)
        if len(self.clusters) != 1:
            raise ValidationError("link set does not connect {1..n}; not a tree")

    @property
    def root(self) -> int:
        return 1

    def __repr__(self):
        return f"Tree(n={self.n}, links={list(self.links)})"


def _trusted_forest(n: int, links: tuple) -> Forest:
    # Internal fast path for enumeration: skips the per-link validation but
    # still computes clusters (needed by every consumer anyway).
    f = Forest.__new__(Forest)
    f.n = n
    f.links = links
    f._adj = {v: [] for v in range(1, n + 1)}
    for i, j in links:
        f._adj[i].append(j)
        f._adj[j].append(i)
    f._build_clusters()
    f._parent = None
    f._layer = None
    return f


def enumerate_forests(n: int, max_n: Optional[int] = None) -> Iterator[Forest]:
    """Yield every forest on {1..n} exactly once, in canonical order.

    The empty forest comes first.  Backtracking over the lexicographically
    sorted complete link set extends the current forest only by links that
    do not close a loop, so the output order is lexicographic on sorted
    link lists and no post-filtering is needed.
    """
    bound = max_n if max_n is not None else max(active_limits().trees, HARD_MAX_N)
    if not 1 <= n <= min(bound, HARD_MAX_N):
        raise SizeLimitError(
            f"forest enumeration supports 1 <= n <= {min(bound, HARD_MAX_N)}, got {n}"
        )
    links = all_links(n)
    m = len(links)
    chosen: list[Link] = []
    # Union-find over vertices; undo log keeps the recursion allocation-free.
    parent = list(range(n + 1))

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    def rec(start: int) -> Iterator[Forest]:
        yield _trusted_forest(n, tuple(chosen))
        for idx in range(start, m):
            i, j = links[idx]
            ri, rj = find(i), find(j)
            if ri == rj:
                continue
            parent[ri] = rj
            chosen.append(links[idx])
            yield from rec(idx + 1)
            chosen.pop()
            parent[ri] = ri

    return rec(0)


def _prufer_to_links(seq: Sequence[int], n: int) -> tuple[Link, ...]:
    # Standard decoding; seq has length n - 2 with entries in 1..n.
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    links = []
    # Min-heap-free variant: n is tiny, a sorted scan per step is fine.
    leaves = sorted(v for v in range(1, n + 1) if degree[v] == 1)
    seq = list(seq)
    for v in seq:
        leaf = leaves.pop(0)
        links.append(canon_link(leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            bisect.insort(leaves, v)
    links.append(canon_link(leaves[0], leaves[1]))
    return tuple(sorted(links))


def enumerate_trees(n: int, max_n: Optional[int] = None) -> list[Tree]:
    """All labeled trees on {1..n}, canonically ordered.

    Uses the Prüfer-sequence bijection, which generates exactly n^(n-2)
    trees for n >= 2; for n = 1 the empty tree is the unique tree.  The
    result is sorted by link list so the order matches enumerate_forests.
    """
    bound = max_n if max_n is not None else active_limits().trees
    if not 1 <= n <= min(bound, HARD_MAX_N):
        raise SizeLimitError(
            f"tree enumeration supports 1 <= n <= {min(bound, HARD_MAX_N)}, got {n}"
        )
    if n == 1:
        return [Tree(1)]
    if n == 2:
        return [Tree(2, [(1, 2)])]
    link_lists = sorted(_prufer_to_links(seq, n) for seq in product(range(1, n + 1), repeat=n - 2))
    trees = []
    for ll in link_lists:
        t = Tree.__new__(Tree)
        Forest.__init__(t, n, ll)
        trees.append(t)
    return trees


def tree_path(forest: Forest, i: int, j: int) -> Optional[list[Link]]:
    """Module-level alias for Forest.path (absence is a value, not an error)."""
    return forest.path(i, j)


def count_trees_by_degree(n: int, degrees: Sequence[int]) -> int:
    """Number of labeled trees on {1..n} with the given coordination numbers.

    degrees[i-1] is the required degree of vertex i.  This is the multinomial
    count (n-2)! / prod (d_i - 1)!, valid for n >= 2; the degree sum must be
    2(n-1) with every d_i >= 1.
    """
    if n < 2:
        raise ValidationError("degree-constrained count needs n >= 2")
    if len(degrees) != n:
        raise ValidationError(f"expected {n} degrees, got {len(degrees)}")
    if any(d < 1 for d in degrees):
        raise ValidationError("every coordination number must be >= 1")
    if sum(degrees) != 2 * (n - 1):
        raise ValidationError(
            f"degree sum {sum(degrees)} != 2(n-1) = {2 * (n - 1)}; no such trees"
        )
    count = factorial(n - 2)
    for d in degrees:
        count //= factorial(d - 1)
    return count
