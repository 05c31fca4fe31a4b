"""Search for order and coding witnesses in finite relations.

An order witness of size n in a binary relation D consists of
sequences a_1..a_n and b_1..b_n with (a_i, b_j) in D exactly when
i < j.  A coding witness of size m in a (2k+1)-ary relation consists
of k-tuple sequences x_1..x_m and y_1..y_m together with m^2 distinct
points z_ij such that, restricted to Z = {z_ij}, the fiber over
(x_i, y_j) is exactly {z_ij}.

Searches are exact backtracking with a node budget; results are
three-valued so an exhausted budget is reported as indeterminate
rather than as absence.  The verifiers test raw tuple membership and
share no machinery with the searchers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import ParseError

STATUS_FOUND = "found"
STATUS_NONE = "none"
STATUS_INDETERMINATE = "indeterminate"

DEFAULT_NODE_BUDGET = 10**7


class _BudgetHit(Exception):
    pass


@dataclass(frozen=True)
class FinRelation:
    """A finite relation: a set of arity-tuples over 0..universe-1."""

    universe: int
    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if self.universe < 1:
            raise ValueError("universe must be non-empty")
        if self.arity < 1:
            raise ValueError("arity must be at least 1")
        tuples = frozenset(tuple(int(v) for v in t) for t in self.tuples)
        for t in tuples:
            if len(t) != self.arity:
                raise ValueError(f"tuple {t} has length {len(t)}, arity is {self.arity}")
            for v in t:
                if not 0 <= v < self.universe:
                    raise ValueError(f"tuple {t} leaves the universe 0..{self.universe - 1}")
        object.__setattr__(self, "tuples", tuples)


@dataclass(frozen=True)
class OrderWitness:
    """Sequences realising the i < j edge pattern."""

    a_seq: tuple[int, ...]
    b_seq: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(v) for v in self.a_seq)
        b = tuple(int(v) for v in self.b_seq)
        if not a or len(a) != len(b):
            raise ValueError("sides must be non-empty and of equal length")
        if len(set(a)) != len(a) or len(set(b)) != len(b):
            raise ValueError("each side must consist of distinct points")
        object.__setattr__(self, "a_seq", a)
        object.__setattr__(self, "b_seq", b)

    @property
    def size(self) -> int:
        return len(self.a_seq)


@dataclass(frozen=True)
class CodingWitness:
    """An m x m grid of private points indexed by two k-tuple sides.

    Side entries are always tuples, even for k = 1.  The table is an
    m x m matrix whose entries are exactly z_points, each used once.
    """

    x_side: tuple[tuple[int, ...], ...]
    y_side: tuple[tuple[int, ...], ...]
    z_points: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.x_side)
        if m < 1 or len(self.y_side) != m:
            raise ValueError("sides must be non-empty and of equal length")
        k = len(self.x_side[0])
        for side in (self.x_side, self.y_side):
            for t in side:
                if len(t) != k:
                    raise ValueError("all side entries must be tuples of one width")
        if len(set(self.x_side)) != m or len(set(self.y_side)) != m:
            raise ValueError("each side must consist of distinct tuples")
        if len(self.table) != m or any(len(row) != m for row in self.table):
            raise ValueError(f"table must be {m} x {m}")
        flat = [v for row in self.table for v in row]
        if len(set(flat)) != m * m:
            raise ValueError("table entries must be pairwise distinct")
        if sorted(flat) != sorted(self.z_points) or len(self.z_points) != m * m:
            raise ValueError("z_points must list exactly the table entries")

    @property
    def size(self) -> int:
        return len(self.x_side)

    @property
    def width(self) -> int:
        return len(self.x_side[0])


Witness = Union[OrderWitness, CodingWitness]


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a witness search.

    status is found, none, or indeterminate; the last means the node
    budget ran out before the search space was exhausted.  nodes is the
    number of candidate placements tried.
    """

    status: str
    witness: Witness | None
    nodes: int

    def __post_init__(self):
        if self.status not in (STATUS_FOUND, STATUS_NONE, STATUS_INDETERMINATE):
            raise ValueError(f"unknown status {self.status!r}")
        if (self.witness is not None) != (self.status == STATUS_FOUND):
            raise ValueError("a witness accompanies exactly the found status")


# ---------------------------------------------------------------------------
# verifiers: raw membership tests only
# ---------------------------------------------------------------------------


def verify_order_witness(rel: FinRelation, w: OrderWitness) -> bool:
    if rel.arity != 2:
        return False
    n = w.size
    for i in range(n):
        for j in range(n):
            if ((w.a_seq[i], w.b_seq[j]) in rel.tuples) != (i < j):
                return False
    return True


def verify_coding_witness(rel: FinRelation, w: CodingWitness) -> bool:
    m, k = w.size, w.width
    if rel.arity != 2 * k + 1:
        return False
    zset = set(w.z_points)
    if len(zset) != m * m:
        return False
    for i in range(m):
        for j in range(m):
            for z in zset:
                member = w.x_side[i] + w.y_side[j] + (z,) in rel.tuples
                if member != (z == w.table[i][j]):
                    return False
    return True


# ---------------------------------------------------------------------------
# order witness search
# ---------------------------------------------------------------------------


def find_order_witness(
    rel: FinRelation, n: int, *, node_budget: int = DEFAULT_NODE_BUDGET
) -> SearchResult:
    """Backtracking search for an order witness of size n.

    Vertices interleave a_0, b_0, a_1, b_1, ... so every placement is
    checked against all placed points of the other side; candidate sets
    are bitsets over the universe and candidates are tried in ascending
    order, so the found witness is the lexicographically least one in
    placement order.  Distinctness inside each side needs no explicit
    check: a repeated point would have to be on both sides of one
    membership constraint.
    """
    if rel.arity != 2:
        raise ValueError(f"order witnesses need a binary relation, got arity {rel.arity}")
    if n < 1:
        raise ValueError("witness size must be at least 1")
    row = [0] * rel.universe
    col = [0] * rel.universe
    for x, y in rel.tuples:
        row[x] |= 1 << y
        col[y] |= 1 << x
    full = (1 << rel.universe) - 1
    a_img = [0] * n
    b_img = [0] * n
    nodes = 0

    def rec(pos: int) -> bool:
        nonlocal nodes
        if pos == 2 * n:
            return True
        i = pos // 2
        if pos % 2 == 0:
            cand = full
            for j in range(i):
                cand &= full & ~col[b_img[j]]
        else:
            cand = full & ~row[a_img[i]]
            for j in range(i):
                cand &= row[a_img[j]]
        while cand:
            low = cand & -cand
            cand ^= low
            nodes += 1
            if nodes > node_budget:
                raise _BudgetHit
            v = low.bit_length() - 1
            if pos % 2 == 0:
                a_img[i] = v
            else:
                b_img[i] = v
            if rec(pos + 1):
                return True
        return False

    try:
        found = rec(0)
    except _BudgetHit:
        return SearchResult(STATUS_INDETERMINATE, None, nodes)
    if not found:
        return SearchResult(STATUS_NONE, None, nodes)
    w = OrderWitness(tuple(a_img), tuple(b_img))
    assert verify_order_witness(rel, w)
    return SearchResult(STATUS_FOUND, w, nodes)


# ---------------------------------------------------------------------------
# coding witness search, point version (k = 1)
# ---------------------------------------------------------------------------


def find_coding_witness(
    rel: FinRelation, m: int, *, node_budget: int = DEFAULT_NODE_BUDGET
) -> SearchResult:
    """Backtracking search for a size-m coding witness in a ternary
    relation.

    A witness needs, for every cell (i, j), a point z in the fiber over
    (x_i, y_j) lying in no other cell's fiber; such private points are
    automatically pairwise distinct, and a witness exists iff every
    cell keeps a non-empty private set, which only shrinks as cells are
    added.  The search interleaves x_0, y_0, x_1, y_1, ... with both
    sides increasing (reordering a witness permutes table rows and
    columns, so this loses nothing) and prunes on an empty private set.
    Fibers and private sets are bitsets over the universe.
    """
    if rel.arity != 3:
        raise ValueError(f"coding witnesses need a ternary relation, got arity {rel.arity}")
    if m < 1:
        raise ValueError("witness size must be at least 1")
    fiber: dict[tuple[int, int], int] = {}
    for x, y, z in rel.tuples:
        fiber[x, y] = fiber.get((x, y), 0) | 1 << z
    xs_pool = sorted({x for x, _, _ in rel.tuples})
    ys_pool = sorted({y for _, y, _ in rel.tuples})
    if len(xs_pool) < m or len(ys_pool) < m:
        return SearchResult(STATUS_NONE, None, 0)
    x_img = [0] * m
    y_img = [0] * m
    nodes = 0

    def rec(pos: int, privates: dict[tuple[int, int], int], covered: int):
        nonlocal nodes
        if pos == 2 * m:
            return privates
        on_x = pos % 2 == 0
        idx = pos // 2
        pool = xs_pool if on_x else ys_pool
        img = x_img if on_x else y_img
        floor = img[idx - 1] if idx > 0 else -1
        for v in pool:
            if v <= floor:
                continue
            nodes += 1
            if nodes > node_budget:
                raise _BudgetHit
            img[idx] = v
            if on_x:
                cells = [(idx, j) for j in range(idx)]
            else:
                cells = [(i, idx) for i in range(idx + 1)]
            nxt = dict(privates)
            cov = covered
            ok = True
            for cell in cells:
                fib = fiber.get((x_img[cell[0]], y_img[cell[1]]), 0)
                priv = fib & ~cov
                if not priv:
                    ok = False
                    break
                for other, mask in nxt.items():
                    mask &= ~fib
                    if not mask:
                        ok = False
                        break
                    nxt[other] = mask
                if not ok:
                    break
                nxt[cell] = priv
                cov |= fib
            if not ok:
                continue
            res = rec(pos + 1, nxt, cov)
            if res is not None:
                return res
        return None

    try:
        privates = rec(0, {}, 0)
    except _BudgetHit:
        return SearchResult(STATUS_INDETERMINATE, None, nodes)
    if privates is None:
        return SearchResult(STATUS_NONE, None, nodes)
    table = [[0] * m for _ in range(m)]
    for (i, j), mask in privates.items():
        low = mask & -mask
        table[i][j] = low.bit_length() - 1
    w = CodingWitness(
        tuple((x,) for x in x_img),
        tuple((y,) for y in y_img),
        tuple(sorted(v for r in table for v in r)),
        tuple(tuple(r) for r in table),
    )
    assert verify_coding_witness(rel, w)
    return SearchResult(STATUS_FOUND, w, nodes)


# ---------------------------------------------------------------------------
# coding witness search, tuple version (any k)
# ---------------------------------------------------------------------------


def find_tuple_coding_witness(
    rel: FinRelation, m: int, k: int, *, node_budget: int = DEFAULT_NODE_BUDGET
) -> SearchResult:
    """Backtracking search for a size-m coding witness whose sides are
    k-tuples, in a (2k+1)-ary relation.

    Same privacy argument as the point search: every cell needs a z in
    its fiber and outside all other fibers, so sides are extended in
    the interleaved increasing order and a cell whose private set
    empties prunes the branch.  Sides range over the distinct k-tuple
    projections of the relation; fibers and privates are kept as plain
    sets keyed by tuple pairs.
    """
    if k < 1:
        raise ValueError("side width must be at least 1")
    if rel.arity != 2 * k + 1:
        raise ValueError(
            f"width-{k} coding witnesses need arity {2 * k + 1}, got {rel.arity}"
        )
    if m < 1:
        raise ValueError("witness size must be at least 1")
    fiber: dict[tuple[tuple[int, ...], tuple[int, ...]], set[int]] = {}
    for t in rel.tuples:
        key = (t[:k], t[k : 2 * k])
        fiber.setdefault(key, set()).add(t[2 * k])
    xs_pool = sorted({t[:k] for t in rel.tuples})
    ys_pool = sorted({t[k : 2 * k] for t in rel.tuples})
    if len(xs_pool) < m or len(ys_pool) < m:
        return SearchResult(STATUS_NONE, None, 0)
    empty: set[int] = set()
    x_img: list[tuple[int, ...]] = [()] * m
    y_img: list[tuple[int, ...]] = [()] * m
    nodes = 0

    def rec(pos, privates, covered):
        nonlocal nodes
        if pos == 2 * m:
            return privates
        on_x = pos % 2 == 0
        idx = pos // 2
        pool = xs_pool if on_x else ys_pool
        img = x_img if on_x else y_img
        floor = img[idx - 1] if idx > 0 else None
        for v in pool:
            if floor is not None and v <= floor:
                continue
            nodes += 1
            if nodes > node_budget:
                raise _BudgetHit
            img[idx] = v
            cells = (
                [(idx, j) for j in range(idx)]
                if on_x
                else [(i, idx) for i in range(idx + 1)]
            )
            nxt = {c: s for c, s in privates.items()}
            cov = set(covered)
            ok = True
            for cell in cells:
                fib = fiber.get((x_img[cell[0]], y_img[cell[1]]), empty)
                priv = fib - cov
                if not priv:
                    ok = False
                    break
                for other in list(nxt):
                    trimmed = nxt[other] - fib
                    if not trimmed:
                        ok = False
                        break
                    nxt[other] = trimmed
                if not ok:
                    break
                nxt[cell] = priv
                cov |= fib
            if not ok:
                continue
            res = rec(pos + 1, nxt, cov)
            if res is not None:
                return res
        return None

    try:
        privates = rec(0, {}, set())
    except _BudgetHit:
        return SearchResult(STATUS_INDETERMINATE, None, nodes)
    if privates is None:
        return SearchResult(STATUS_NONE, None, nodes)
    table = [[0] * m for _ in range(m)]
    for (i, j), zs in privates.items():
        table[i][j] = min(zs)
    w = CodingWitness(
        tuple(x_img),
        tuple(y_img),
        tuple(sorted(v for r in table for v in r)),
        tuple(tuple(r) for r in table),
    )
    assert verify_coding_witness(rel, w)
    return SearchResult(STATUS_FOUND, w, nodes)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def parse_relation(text: str) -> FinRelation:
    """Parse a relation file: a header line 'a=<size> r=<arity>', then
    one tuple of integers per line.  '#' comments and blank lines are
    skipped."""
    lines = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((ln, line))
    if not lines:
        raise ParseError("empty relation file")
    ln, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not parts[0].startswith("a=") or not parts[1].startswith("r="):
        raise ParseError(f"line {ln}: expected 'a=<size> r=<arity>', got {header!r}", ln)
    try:
        universe = int(parts[0][2:])
        arity = int(parts[1][2:])
    except ValueError:
        raise ParseError(f"line {ln}: bad header {header!r}", ln) from None
    tuples = []
    for ln, line in lines[1:]:
        fields = line.split()
        if len(fields) != arity:
            raise ParseError(
                f"line {ln}: expected {arity} entries, got {len(fields)}", ln
            )
        try:
            t = tuple(int(f) for f in fields)
        except ValueError:
            raise ParseError(f"line {ln}: bad tuple {line!r}", ln) from None
        for v in t:
            if not 0 <= v < universe:
                raise ParseError(f"line {ln}: entry {v} outside 0..{universe - 1}", ln)
        tuples.append(t)
    try:
        return FinRelation(universe, arity, frozenset(tuples))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
