"""Brute-force orbit counting for finite permutation groups.

Ground truth for the growth-sequence calculus: orbits of a generated
group on n-tuples are counted by BFS over the tuple graph whose edges
are generator applications.  No group theory beyond closure is used;
the point of this module is to be trustworthy, not fast, although the
inner loop is compiled with numba when available (see _backend).

Tuples over a domain of size d are encoded as mixed-radix integers
sum p_i * d^i, and the visited set is a flat byte array, so the state
space d^n must fit the MAX_TUPLE_STATES cap.  Two budgets protect the
caller: a tuple budget on visited states (every BFS) and an element
budget on group closure (only stabilizer_bound_check enumerates group
elements).  Hitting either raises CapacityError, never a wrong count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import HAS_NUMBA, njit, resolve_backend
from .errors import CapacityError

DEFAULT_TUPLE_BUDGET = 10**7
DEFAULT_ELEMENT_BUDGET = 10**6
MAX_TUPLE_STATES = 1 << 28
MAX_TRUNC_DEGREE = 4096


@dataclass(frozen=True)
class FinPermGroup:
    """A finite permutation group on points 0..degree-1, by generators.

    Generators are image tuples: g maps point p to g[p].  The identity
    is implicit; an empty generator list is the trivial group.
    """

    degree: int
    generators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be at least 1")
        gens = tuple(tuple(int(p) for p in g) for g in self.generators)
        for g in gens:
            if sorted(g) != list(range(self.degree)):
                raise ValueError(f"generator {g} is not a permutation of 0..{self.degree - 1}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def trivial(cls, degree: int) -> "FinPermGroup":
        return cls(degree, ())

    @classmethod
    def symmetric(cls, degree: int) -> "FinPermGroup":
        """The full symmetric group, generated by a swap and a cycle."""
        if degree == 1:
            return cls(1, ())
        swap = tuple([1, 0] + list(range(2, degree)))
        if degree == 2:
            return cls(2, (swap,))
        cycle = tuple(list(range(1, degree)) + [0])
        return cls(degree, (swap, cycle))


@dataclass(frozen=True)
class OrbitCount:
    """Result of one orbit count, with telemetry.

    ``tuples_visited`` is the number of tuples the BFS actually marked;
    it is deterministic for a given group, n and injectivity flag.
    """

    n: int
    injective: bool
    count: int
    tuples_visited: int


if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _bfs_orbits_numba(gens, domain, n, injective, budget):  # pragma: no cover
        size = np.int64(1)
        for _ in range(n):
            size *= domain
        n_gens = gens.shape[0]
        visited = np.zeros(size, dtype=np.uint8)
        queue = np.empty(1024, dtype=np.int64)
        digits = np.empty(n, dtype=np.int64)
        seen = np.zeros(domain, dtype=np.uint8)
        count = np.int64(0)
        total = np.int64(0)

        for start in range(size):
            if visited[start]:
                continue
            code = start
            for i in range(n):
                digits[i] = code % domain
                code //= domain
            if injective:
                ok = True
                for i in range(n):
                    if seen[digits[i]]:
                        ok = False
                    seen[digits[i]] = 1
                for i in range(n):
                    seen[digits[i]] = 0
                if not ok:
                    visited[start] = 1
                    continue
            count += 1
            visited[start] = 1
            total += 1
            if total > budget:
                return count, total, np.int64(1)
            queue[0] = start
            head = np.int64(0)
            tail = np.int64(1)
            while head < tail:
                code = queue[head]
                head += 1
                for i in range(n):
                    digits[i] = code % domain
                    code //= domain
                for j in range(n_gens):
                    nxt = np.int64(0)
                    for i in range(n - 1, -1, -1):
                        nxt = nxt * domain + gens[j, digits[i]]
                    if not visited[nxt]:
                        visited[nxt] = 1
                        total += 1
                        if total > budget:
                            return count, total, np.int64(1)
                        if tail == queue.shape[0]:
                            bigger = np.empty(queue.shape[0] * 2, dtype=np.int64)
                            bigger[:tail] = queue
                            queue = bigger
                        queue[tail] = nxt
                        tail += 1
        return count, total, np.int64(0)


def _bfs_orbits_numpy(gens: np.ndarray, domain: int, n: int, injective: bool, budget: int):
    size = domain**n
    powers = domain ** np.arange(n, dtype=np.int64)
    visited = np.zeros(size, dtype=np.uint8)
    chunk = 1 << 18

    if injective and n >= 2:
        # pre-mark non-injective codes so the start scan skips them
        for lo in range(0, size, chunk):
            codes = np.arange(lo, min(lo + chunk, size), dtype=np.int64)
            digs = (codes[:, None] // powers) % domain
            digs.sort(axis=1)
            bad = (np.diff(digs, axis=1) == 0).any(axis=1)
            visited[codes[bad]] = 1

    count = 0
    total = 0
    scan = 0
    while scan < size:
        block = visited[scan : min(scan + chunk, size)]
        zeros = np.flatnonzero(block == 0)
        if zeros.size == 0:
            scan += block.size
            continue
        start = scan + int(zeros[0])
        scan = start
        count += 1
        total += 1
        visited[start] = 1
        if total > budget:
            raise CapacityError(f"tuple budget {budget} exceeded after visiting {total} tuples")
        frontier = np.array([start], dtype=np.int64)
        while frontier.size and gens.shape[0]:
            digs = (frontier[:, None] // powers) % domain
            images = [gens[j][digs] @ powers for j in range(gens.shape[0])]
            cand = np.unique(np.concatenate(images))
            cand = cand[visited[cand] == 0]
            if cand.size == 0:
                break
            visited[cand] = 1
            total += cand.size
            if total > budget:
                raise CapacityError(
                    f"tuple budget {budget} exceeded after visiting {total} tuples"
                )
            frontier = cand
    return count, total


def _count_orbits(
    group: FinPermGroup, n: int, injective: bool, budget: int, backend: str | None
) -> OrbitCount:
    if n < 0:
        raise ValueError("tuple length must be non-negative")
    if n == 0:
        return OrbitCount(0, injective, 1, 0)
    if injective and n > group.degree:
        return OrbitCount(n, injective, 0, 0)
    size = group.degree**n
    if size > MAX_TUPLE_STATES:
        raise CapacityError(
            f"state space {group.degree}^{n} = {size} exceeds the cap {MAX_TUPLE_STATES}"
        )
    gens = np.array(group.generators, dtype=np.int64).reshape(
        len(group.generators), group.degree
    )
    which = resolve_backend(backend)
    if which == "numba":
        count, total, status = _bfs_orbits_numba(gens, group.degree, n, injective, budget)
        if status:
            raise CapacityError(f"tuple budget {budget} exceeded after visiting {total} tuples")
        return OrbitCount(n, injective, int(count), int(total))
    count, total = _bfs_orbits_numpy(gens, group.degree, n, injective, budget)
    return OrbitCount(n, injective, count, total)


def count_orbits_injective(
    group: FinPermGroup,
    n: int,
    *,
    budget: int = DEFAULT_TUPLE_BUDGET,
    backend: str | None = None,
) -> OrbitCount:
    """Orbits of the generated group on injective n-tuples.

    1 for n = 0 and 0 for n above the degree, both without search.
    """
    return _count_orbits(group, n, True, budget, backend)


def count_orbits_all(
    group: FinPermGroup,
    n: int,
    *,
    budget: int = DEFAULT_TUPLE_BUDGET,
    backend: str | None = None,
) -> OrbitCount:
    """Orbits of the generated group on all n-tuples."""
    return _count_orbits(group, n, False, budget, backend)


def truncate_expr(expr, m: int) -> FinPermGroup:
    """Finite stand-in for an expression: wreath layers become wreaths
    with the symmetric group on m copies.

    Finite leaves pass through; a product acts on the disjoint union of
    its factors' domains; a wreath layer with base domain b yields the
    group on b*m points (point p of copy c sits at c*b + p) generated by
    the base generators on copy 0 plus a copy swap and a copy m-cycle.
    Those copy permutations together with one embedded copy of the base
    group generate the full wreath product.
    """
    from .group_expr import DirectProduct, Finite, WreathSomega

    if m < 1:
        raise ValueError("truncation level m must be at least 1")
    if isinstance(expr, Finite):
        return expr.group
    if isinstance(expr, DirectProduct):
        parts = [truncate_expr(child, m) for child in expr.factors]
        degree = sum(p.degree for p in parts)
        if degree > MAX_TRUNC_DEGREE:
            raise CapacityError(f"truncated domain {degree} exceeds cap {MAX_TRUNC_DEGREE}")
        gens: list[tuple[int, ...]] = []
        offset = 0
        for part in parts:
            for g in part.generators:
                image = list(range(degree))
                for p, q in enumerate(g):
                    image[offset + p] = offset + q
                gens.append(tuple(image))
            offset += part.degree
        return FinPermGroup(degree, tuple(gens))
    if isinstance(expr, WreathSomega):
        base = truncate_expr(expr.base, m)
        b = base.degree
        degree = b * m
        if degree > MAX_TRUNC_DEGREE:
            raise CapacityError(f"truncated domain {degree} exceeds cap {MAX_TRUNC_DEGREE}")
        gens = []
        for g in base.generators:
            image = list(range(degree))
            for p, q in enumerate(g):
                image[p] = q
            gens.append(tuple(image))
        if m >= 2:
            swap = list(range(degree))
            for p in range(b):
                swap[p], swap[b + p] = b + p, p
            gens.append(tuple(swap))
        if m >= 3:
            cycle = [((c + 1) % m) * b + p for c in range(m) for p in range(b)]
            gens.append(tuple(cycle))
        return FinPermGroup(degree, tuple(gens))
    raise TypeError(f"not a group expression: {expr!r}")


def _enumerate_elements(group: FinPermGroup, cap: int) -> list[tuple[int, ...]]:
    identity = tuple(range(group.degree))
    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for g in group.generators:
                prod = tuple(g[p] for p in e)
                if prod not in elements:
                    elements.add(prod)
                    if len(elements) > cap:
                        raise CapacityError(
                            f"element budget {cap} exceeded while closing the group"
                        )
                    nxt.append(prod)
        frontier = nxt
    return sorted(elements)


def stabilizer_bound_check(
    group: FinPermGroup,
    a: int,
    n: int,
    *,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
    tuple_budget: int = DEFAULT_TUPLE_BUDGET,
    backend: str | None = None,
) -> bool:
    """Check l_n(G_a) <= n * l_n(G) + l_{n+1}(G) for the point stabilizer.

    Any orbit of the stabilizer of a on injective n-tuples either maps
    into an orbit of G on injective (n+1)-tuples by appending a, or the
    tuple already contains a in one of its n positions; hence the bound
    whenever n + 1 points fit in the domain.

    This is the one operation that enumerates group elements: the full
    element set of the stabilizer doubles as its generator set for the
    tuple BFS.  The element budget applies here only.
    """
    if not 0 <= a < group.degree:
        raise ValueError(f"point {a} outside domain of size {group.degree}")
    if n < 1:
        raise ValueError("n must be at least 1")
    if n + 1 > group.degree:
        raise ValueError("need n + 1 points in the domain")
    elements = _enumerate_elements(group, element_budget)
    stab_gens = tuple(e for e in elements if e[a] == a)
    stabilizer = FinPermGroup(group.degree, stab_gens)
    l_n_stab = count_orbits_injective(stabilizer, n, budget=tuple_budget, backend=backend).count
    l_n = count_orbits_injective(group, n, budget=tuple_budget, backend=backend).count
    l_n1 = count_orbits_injective(group, n + 1, budget=tuple_budget, backend=backend).count
    return l_n_stab <= n * l_n + l_n1
