"""Labelled enumeration of small hereditary graph classes.

Provides the half-graph family, flipped disjoint paths with their
recovery formulas, brute-force labelled counting of hereditary classes
given by generators or forbidden induced subgraphs, and the largest
semi-induced half-graph in a graph.

Graphs are adjacency bitsets (one Python int per vertex).  Membership
testing is backtracking induced-subgraph isomorphism; for hosts of at
most 64 vertices a numba kernel sweeps whole ranges of the 2^C(n,2)
labelled-graph space at once, and those ranges parallelise across
threads because the kernel releases the GIL.  The pure path has the
same contract with no size limit.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Iterator

import numpy as np

from ._backend import HAS_NUMBA, njit, resolve_backend
from .errors import CapacityError, ParseError

MODE_GENERATORS = "generators"
MODE_FORBIDDEN = "forbidden"

DEFAULT_NODE_BUDGET = 10**7
#: labelled counting enumerates all graphs on [n]; 2^C(8,2) is too many
MAX_COUNT_N = 7


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..v-1 with adjacency bitsets.

    ``adj[u]`` has bit w set iff u and w are adjacent; no self-loops.
    ``colors``, when present, assigns every vertex one of the three
    classes used by the flip-recovery formulas.
    """

    v: int
    adj: tuple[int, ...]
    colors: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.v < 1:
            raise ValueError("graph needs at least one vertex")
        adj = tuple(int(m) for m in self.adj)
        if len(adj) != self.v:
            raise ValueError("adjacency list length differs from vertex count")
        full = (1 << self.v) - 1
        for u, mask in enumerate(adj):
            if mask & ~full:
                raise ValueError(f"adjacency of vertex {u} mentions vertices >= {self.v}")
            if mask >> u & 1:
                raise ValueError(f"self-loop at vertex {u}")
            for w in range(self.v):
                if mask >> w & 1 and not adj[w] >> u & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {w}")
        object.__setattr__(self, "adj", adj)
        if self.colors is not None:
            colors = tuple(int(c) for c in self.colors)
            if len(colors) != self.v:
                raise ValueError("colors must be total")
            if any(c not in (0, 1, 2) for c in colors):
                raise ValueError("colors must be 0, 1 or 2")
            object.__setattr__(self, "colors", colors)

    @classmethod
    def from_edges(
        cls, v: int, edges: Iterable[tuple[int, int]], colors: Iterable[int] | None = None
    ) -> "Graph":
        adj = [0] * v
        for u, w in edges:
            if u == w:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << w
            adj[w] |= 1 << u
        return cls(v, tuple(adj), None if colors is None else tuple(colors))

    def has_edge(self, u: int, w: int) -> bool:
        return bool(self.adj[u] >> w & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.v):
            for w in range(u + 1, self.v):
                if self.adj[u] >> w & 1:
                    yield (u, w)

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(bin(m).count("1") for m in self.adj)


@dataclass(frozen=True)
class FlipSpec:
    """A symmetric set of class pairs to complement between.

    Classes are 0..t-1; (i, j) in pairs always comes with (j, i).  The
    diagonal entry (j, j) complements within class j.
    """

    t: int
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        for i, j in pairs:
            if not (0 <= i < self.t and 0 <= j < self.t):
                raise ValueError(f"pair ({i}, {j}) outside classes 0..{self.t - 1}")
            if (j, i) not in pairs:
                raise ValueError(f"pairs must be symmetric; ({j}, {i}) is missing")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_pairs(cls, t: int, pairs: Iterable[tuple[int, int]]) -> "FlipSpec":
        """Build a spec closing the given pairs under symmetry."""
        closed = set()
        for i, j in pairs:
            closed.add((i, j))
            closed.add((j, i))
        return cls(t, frozenset(closed))

    @classmethod
    def random(cls, t: int, rng: random.Random) -> "FlipSpec":
        """Uniformly random symmetric spec: each unordered pair with
        probability one half."""
        pairs = set()
        for i in range(t):
            for j in range(i, t):
                if rng.random() < 0.5:
                    pairs.add((i, j))
                    pairs.add((j, i))
        return cls(t, frozenset(pairs))

    def unordered(self) -> list[tuple[int, int]]:
        return sorted({(min(i, j), max(i, j)) for i, j in self.pairs})


@dataclass(frozen=True)
class ClassSpec:
    """A hereditary graph class, by generators or forbidden subgraphs.

    generators: the class is every graph isomorphic to an induced
    subgraph of one of the listed graphs.  forbidden: every graph with
    no listed graph as induced subgraph.  Both are hereditary by
    construction.
    """

    mode: str
    graphs: tuple[Graph, ...]

    def __post_init__(self):
        if self.mode not in (MODE_GENERATORS, MODE_FORBIDDEN):
            raise ValueError(f"mode must be {MODE_GENERATORS!r} or {MODE_FORBIDDEN!r}")
        if not self.graphs:
            raise ValueError("a class spec needs at least one graph")


def half_graph(t: int) -> Graph:
    """The bipartite graph on a_0..a_{t-1}, b_0..b_{t-1} with an edge
    between a_i and b_j iff i <= j.  Vertices 0..t-1 are the a side and
    t..2t-1 the b side."""
    if t < 1:
        raise ValueError("t must be at least 1")
    return Graph.from_edges(
        2 * t, [(i, t + j) for i in range(t) for j in range(t) if i <= j]
    )


def flipped_paths(k: int, copies: int = 3, spec: FlipSpec | None = None) -> Graph:
    """Disjoint paths of length k with classes complemented per spec.

    Vertex (path i, position j) is i*k + j; the base graph is ``copies``
    disjoint paths on positions 0..k-1, coloured by path index.  The
    partition used for flips groups vertices by position, so class j is
    {(i, j) : all i}; a spec pair (j, j') complements all edges between
    class j and class j', and a diagonal pair (j, j) complements within
    the class.
    """
    if k < 2:
        raise ValueError("paths need at least two vertices")
    if not 1 <= copies <= 3:
        raise ValueError("copies must be 1, 2 or 3")
    if spec is None:
        spec = FlipSpec(k, frozenset())
    if spec.t != k:
        raise ValueError(f"spec has {spec.t} classes but paths have {k} positions")
    v = copies * k
    adj = [0] * v

    def toggle(x: int, y: int) -> None:
        adj[x] ^= 1 << y
        adj[y] ^= 1 << x

    for i in range(copies):
        for j in range(k - 1):
            toggle(i * k + j, i * k + j + 1)
    for j, j2 in spec.unordered():
        if j == j2:
            for i in range(copies):
                for i2 in range(i + 1, copies):
                    toggle(i * k + j, i2 * k + j)
        else:
            for i in range(copies):
                for i2 in range(copies):
                    toggle(i * k + j, i2 * k + j2)
    colors = tuple(i for i in range(copies) for _ in range(k))
    return Graph(v, tuple(adj), colors)


def labelled_path_count(k: int) -> int:
    """Number of labelled graphs on [k] isomorphic to the k-vertex path.

    Each of the k! vertex orders traces a path and exactly the reversed
    order traces the same edge set, so the count is k!/2.
    """
    if k < 2:
        raise ValueError("paths need at least two vertices")
    return factorial(k) // 2


# ---------------------------------------------------------------------------
# membership: backtracking induced-subgraph isomorphism
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _embeds_numba(pat, p, host, h, budget):  # pragma: no cover
        # returns (found, nodes, capacity_hit)
        if p > h:
            return False, np.int64(0), False
        full = np.uint64(0xFFFFFFFFFFFFFFFF) if h == 64 else np.uint64((1 << h) - 1)
        img = np.empty(p, dtype=np.int64)
        cand = np.empty(p, dtype=np.uint64)
        cand[0] = full
        used = np.uint64(0)
        nodes = np.int64(0)
        depth = 0
        while True:
            if cand[depth] == np.uint64(0):
                depth -= 1
                if depth < 0:
                    return False, nodes, False
                used &= ~(np.uint64(1) << np.uint64(img[depth]))
                continue
            low = cand[depth] & (np.uint64(0) - cand[depth])
            cand[depth] ^= low
            w = np.int64(np.log2(np.float64(low)) + 0.5)
            nodes += 1
            if nodes > budget:
                return False, nodes, True
            if depth == p - 1:
                return True, nodes, False
            img[depth] = w
            used |= np.uint64(1) << np.uint64(w)
            nxt = full & ~used
            for e in range(depth + 1):
                if pat[depth + 1] >> np.uint64(e) & np.uint64(1):
                    nxt &= host[img[e]]
                else:
                    nxt &= ~host[img[e]]
            depth += 1
            cand[depth] = nxt
        return False, nodes, False

    @njit(cache=True, nogil=True)
    def _count_masks_numba(
        n, lo, hi, adjs, sizes, generator_mode, budget
    ):  # pragma: no cover
        # count labelled graphs on [n], masks lo..hi-1, in the class
        count = np.int64(0)
        nodes_total = np.int64(0)
        mask_adj = np.empty(n, dtype=np.uint64)
        for mask in range(lo, hi):
            for i in range(n):
                mask_adj[i] = np.uint64(0)
            bit = 0
            for i in range(n):
                for j in range(i + 1, n):
                    if mask >> bit & 1:
                        mask_adj[i] |= np.uint64(1) << np.uint64(j)
                        mask_adj[j] |= np.uint64(1) << np.uint64(i)
                    bit += 1
            member = not generator_mode
            for g in range(adjs.shape[0]):
                if generator_mode:
                    found, nodes, cap = _embeds_numba(mask_adj, n, adjs[g], sizes[g], budget)
                    nodes_total += nodes
                    if cap:
                        return count, nodes_total, np.int64(1)
                    if found:
                        member = True
                        break
                else:
                    if sizes[g] > n:
                        continue
                    found, nodes, cap = _embeds_numba(adjs[g], sizes[g], mask_adj, n, budget)
                    nodes_total += nodes
                    if cap:
                        return count, nodes_total, np.int64(1)
                    if found:
                        member = False
                        break
            if member:
                count += 1
        return count, nodes_total, np.int64(0)


def _embeds_python(pat: list[int], host: list[int], budget: int) -> tuple[bool, int]:
    """Induced embedding of the pattern into the host, pure-int bitsets."""
    p, h = len(pat), len(host)
    if p > h:
        return False, 0
    full = (1 << h) - 1
    img = [0] * p
    cand = [0] * p
    cand[0] = full
    used = 0
    nodes = 0
    depth = 0
    while True:
        if not cand[depth]:
            depth -= 1
            if depth < 0:
                return False, nodes
            used &= ~(1 << img[depth])
            continue
        low = cand[depth] & -cand[depth]
        cand[depth] ^= low
        w = low.bit_length() - 1
        nodes += 1
        if nodes > budget:
            raise CapacityError(f"membership node budget {budget} exceeded")
        if depth == p - 1:
            return True, nodes
        img[depth] = w
        used |= 1 << w
        nxt = full & ~used
        for e in range(depth + 1):
            nxt &= host[img[e]] if pat[depth + 1] >> e & 1 else full & ~host[img[e]]
        depth += 1
        cand[depth] = nxt


def _mask_adj(n: int, mask: int) -> list[int]:
    adj = [0] * n
    bit = 0
    for i in range(n):
        for j in range(i + 1, n):
            if mask >> bit & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            bit += 1
    return adj


def _count_masks_python(
    n: int, lo: int, hi: int, graphs: list[list[int]], generator_mode: bool, budget: int
) -> tuple[int, int]:
    count = 0
    nodes_total = 0
    for mask in range(lo, hi):
        adj = _mask_adj(n, mask)
        member = not generator_mode
        for other in graphs:
            if generator_mode:
                found, nodes = _embeds_python(adj, other, budget)
                nodes_total += nodes
                if found:
                    member = True
                    break
            else:
                if len(other) > n:
                    continue
                found, nodes = _embeds_python(other, adj, budget)
                nodes_total += nodes
                if found:
                    member = False
                    break
        if member:
            count += 1
    return count, nodes_total


def graph_in_class(spec: ClassSpec, g: Graph, *, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """Membership of one graph in the class, by induced embeddings."""
    adj = list(g.adj)
    if spec.mode == MODE_GENERATORS:
        return any(_embeds_python(adj, list(h.adj), node_budget)[0] for h in spec.graphs)
    return not any(
        _embeds_python(list(h.adj), adj, node_budget)[0]
        for h in spec.graphs
        if h.v <= g.v
    )


def count_labelled(
    spec: ClassSpec,
    n: int,
    *,
    jobs: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    backend: str | None = None,
) -> int:
    """Exact number of labelled graphs on [n] that belong to the class.

    Enumerates all 2^C(n,2) graphs on [n] and tests membership, so n is
    capped at MAX_COUNT_N.  With the numba backend and jobs > 1 the mask
    space splits into contiguous ranges summed in range order, keeping
    the result independent of scheduling.  Hosts above 64 vertices are
    handled by the pure path regardless of backend.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_COUNT_N:
        raise CapacityError(f"labelled counting is capped at n = {MAX_COUNT_N}; got n = {n}")
    if n == 0:
        return 1
    total_masks = 1 << comb(n, 2)
    which = resolve_backend(backend)
    use_numba = which == "numba" and all(g.v <= 64 for g in spec.graphs)
    generator_mode = spec.mode == MODE_GENERATORS

    if not use_numba:
        graphs = [list(g.adj) for g in spec.graphs]
        count, _ = _count_masks_python(n, 0, total_masks, graphs, generator_mode, node_budget)
        return count

    num = len(spec.graphs)
    adjs = np.zeros((num, 64), dtype=np.uint64)
    sizes = np.zeros(num, dtype=np.int64)
    for gi, g in enumerate(spec.graphs):
        sizes[gi] = g.v
        for u in range(g.v):
            adjs[gi, u] = np.uint64(g.adj[u])

    jobs = max(1, jobs)
    ranges = []
    step = max(1, total_masks // max(jobs * 4, 1))
    lo = 0
    while lo < total_masks:
        hi = min(lo + step, total_masks)
        ranges.append((lo, hi))
        lo = hi

    def run(rng: tuple[int, int]):
        return _count_masks_numba(n, rng[0], rng[1], adjs, sizes, generator_mode, node_budget)

    if jobs == 1 or len(ranges) == 1:
        results = [run(r) for r in ranges]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, ranges))
    for _, _, status in results:
        if status:
            raise CapacityError(f"membership node budget {node_budget} exceeded")
    return int(sum(c for c, _, _ in results))


def semi_induced_order(
    G: Graph, *, lax: bool = False, node_budget: int = DEFAULT_NODE_BUDGET
) -> int:
    """Largest t such that the half-graph on 2t vertices is semi-induced.

    Searches for vertices a_0..a_{t-1} and b_0..b_{t-1} with an edge
    between a_i and b_j iff i <= j; pairs within one side are
    unconstrained.  The strict reading makes all 2t vertices distinct;
    with ``lax`` a vertex may appear on both sides when the pattern
    tolerates it (the pair it fills must then be a non-edge).  Each side
    is always distinct within itself.

    Backtracking chooses a_0, b_0, a_1, b_1, ... so each new vertex is
    constrained by every chosen vertex of the other side.
    """
    full = (1 << G.v) - 1
    nodes = 0

    def exists(t: int) -> bool:
        nonlocal nodes
        a_img = [0] * t
        b_img = [0] * t

        def rec(pos: int, used_a: int, used_b: int) -> bool:
            nonlocal nodes
            if pos == 2 * t:
                return True
            side_a = pos % 2 == 0
            i = pos // 2
            if side_a:
                cand = full & ~used_a
                if not lax:
                    cand &= ~used_b
                for j in range(i):
                    cand &= full & ~G.adj[b_img[j]]
            else:
                cand = full & ~used_b
                if not lax:
                    cand &= ~used_a
                for j in range(i + 1):
                    cand &= G.adj[a_img[j]]
            while cand:
                low = cand & -cand
                cand ^= low
                w = low.bit_length() - 1
                nodes += 1
                if nodes > node_budget:
                    raise CapacityError(f"semi-induced node budget {node_budget} exceeded")
                if side_a:
                    a_img[i] = w
                    if rec(pos + 1, used_a | low, used_b):
                        return True
                else:
                    b_img[i] = w
                    if rec(pos + 1, used_a, used_b | low):
                        return True
            return False

        return rec(0, 0, 0)

    best = 0
    t = 1
    while t <= G.v and exists(t):
        best = t
        t += 1
    return best


def flip_recover(H: Graph) -> Graph:
    """Evaluate the recovery formulas on a 3-coloured graph.

    With classes C_0, C_1, C_2 and indices mod 3:

      pi_i(x, y):  x in C_i, y in C_{i+1}, x and y have the same
                   neighbourhood inside C_{i+2}
      psi_i(x, y): x, y in C_i and some z has pi_i(y, z) and an edge xz
      phi(x, y):   for some i, x != y, both in C_i, and psi_i(x, y)
                   holds exactly when xy is a non-edge

    Returns the graph of phi with the colours kept.  On a flipped
    disjoint-paths graph coloured by path this reconstructs the
    unflipped paths, because same-position vertices share cross-path
    neighbourhoods.  phi is evaluated on ordered pairs; if it ever
    disagrees with its transpose the input was not a flip of coloured
    paths and a ValueError reports the pair instead of guessing.
    """
    if H.colors is None:
        raise ValueError("flip recovery needs a total 3-colouring")
    class_mask = [0, 0, 0]
    for u, c in enumerate(H.colors):
        class_mask[c] |= 1 << u
    members = [[u for u in range(H.v) if H.colors[u] == c] for c in range(3)]

    # partner_mask[y] = bits of z in C_{i+1} sharing y's view of C_{i+2}
    partner_mask = [0] * H.v
    for i in range(3):
        m1, m2 = class_mask[(i + 1) % 3], class_mask[(i + 2) % 3]
        for y in members[i]:
            view = H.adj[y] & m2
            acc = 0
            for z in members[(i + 1) % 3]:
                if H.adj[z] & m2 == view:
                    acc |= 1 << z
            partner_mask[y] = acc & m1

    def phi(x: int, y: int) -> bool:
        psi = bool(H.adj[x] & partner_mask[y])
        return psi == (not H.has_edge(x, y))

    adj = [0] * H.v
    for i in range(3):
        for x in members[i]:
            for y in members[i]:
                if x >= y:
                    continue
                fwd, back = phi(x, y), phi(y, x)
                if fwd != back:
                    raise ValueError(
                        f"recovery formula is asymmetric at ({x}, {y}); "
                        "input is not a flip of coloured paths"
                    )
                if fwd:
                    adj[x] |= 1 << y
                    adj[y] |= 1 << x
    return Graph(H.v, tuple(adj), H.colors)


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------


def _parse_graph_lines(lines: list[tuple[int, str]]) -> Graph:
    if not lines:
        raise ParseError("empty graph block")
    ln, first = lines[0]
    if not first.startswith("v="):
        raise ParseError(f"line {ln}: expected 'v=<count>', got {first!r}", ln)
    try:
        v = int(first[2:])
    except ValueError:
        raise ParseError(f"line {ln}: bad vertex count {first[2:]!r}", ln) from None
    if v < 1:
        raise ParseError(f"line {ln}: vertex count must be at least 1", ln)
    edges = []
    colors: dict[int, int] = {}
    for ln, line in lines[1:]:
        parts = line.split()
        if parts[0] == "color":
            if len(parts) != 3:
                raise ParseError(f"line {ln}: expected 'color <vertex> <class>'", ln)
            try:
                u, c = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"line {ln}: bad color line {line!r}", ln) from None
            colors[u] = c
            continue
        if len(parts) != 2:
            raise ParseError(f"line {ln}: expected an edge 'u w', got {line!r}", ln)
        try:
            u, w = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {ln}: bad edge {line!r}", ln) from None
        if not (0 <= u < v and 0 <= w < v):
            raise ParseError(f"line {ln}: edge {u} {w} outside 0..{v - 1}", ln)
        if u == w:
            raise ParseError(f"line {ln}: self-loop at {u}", ln)
        edges.append((u, w))
    color_tuple = None
    if colors:
        missing = [u for u in range(v) if u not in colors]
        if missing:
            raise ParseError(f"colors must be total; missing vertex {missing[0]}")
        color_tuple = tuple(colors[u] for u in range(v))
    try:
        return Graph.from_edges(v, edges, color_tuple)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _numbered_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((ln, line))
    return out


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: 'v=<n>', then 'u w' edge lines and
    optional 'color u c' lines.  '#' comments and blank lines are
    skipped."""
    return _parse_graph_lines(_numbered_lines(text))


def parse_class_spec(text: str, mode: str) -> ClassSpec:
    """Parse a class file: graph blocks in the edge-list format
    separated by lines of '---'."""
    blocks: list[list[tuple[int, str]]] = [[]]
    for ln, line in _numbered_lines(text):
        if set(line) == {"-"} and len(line) >= 3:
            blocks.append([])
            continue
        blocks[-1].append((ln, line))
    graphs = [_parse_graph_lines(b) for b in blocks if b]
    if not graphs:
        raise ParseError("class file holds no graphs")
    return ClassSpec(mode, tuple(graphs))
