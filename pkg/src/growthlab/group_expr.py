"""AST, parser and evaluator for the group-expression grammar.

Expressions describe the oligomorphic permutation groups built from
finite permutation groups by finite direct products and wreath products
with the infinite symmetric group:

    (finite <k>)                    trivial group on k points
    (finite <k> full-sym)           symmetric group on k points
    (finite <k> gens=[...])         generated group, cycle notation
    (prod e1 e2 ...)                direct product, two or more factors
    (wr e)                          e wr S_omega

Cycle notation inside gens=[...] is 0-based over the k points, e.g.
gens=[(0 1)(2 3), (0 1 2)] gives two generators; multiple cycles in one
generator compose left to right.  An omitted gens list means the
trivial group.

eval_lseq computes the injective-tuple growth sequence by structural
recursion: orbit BFS at finite leaves, EGF product at products, and
exp(f - 1) at wreath layers.  classify sorts expressions into finite,
cellular and msnc (infinite, every wreath layer over a finite domain,
versus some wreath layer over an infinite one); the label is syntactic,
which the command-line layer makes explicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence, Union

from .egf_algebra import Egf, egf_exp_shift, egf_product, from_seq, to_seq
from .errors import ParseError
from .orbit_oracle import FinPermGroup, count_orbits_injective
from .seq_core import BoundReport, IntSeq, Rational, check_bounds, stirling_transform

CLASS_FINITE = "finite"
CLASS_CELLULAR = "cellular"
CLASS_MSNC = "msnc"

#: default (c, d) grid for cellular-bound checks
DEFAULT_CELL_GRID: tuple[tuple[Fraction, Fraction], ...] = tuple(
    (Fraction(c), Fraction(p, q))
    for c in (1, 2)
    for p, q in ((1, 2), (3, 5), (2, 3), (3, 4), (4, 5))
)
#: default c grid for factorial-upper checks
DEFAULT_C_GRID: tuple[Fraction, ...] = (Fraction(2),)


@dataclass(frozen=True)
class Finite:
    group: FinPermGroup


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple["GroupExpr", ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("a direct product needs at least two factors")


@dataclass(frozen=True)
class WreathSomega:
    base: "GroupExpr"


GroupExpr = Union[Finite, DirectProduct, WreathSomega]


def domain_size(expr: GroupExpr) -> int | None:
    """Domain size of the group the expression generates; None if infinite."""
    if isinstance(expr, Finite):
        return expr.group.degree
    if isinstance(expr, DirectProduct):
        sizes = [domain_size(f) for f in expr.factors]
        return None if None in sizes else sum(sizes)
    if isinstance(expr, WreathSomega):
        return None
    raise TypeError(f"not a group expression: {expr!r}")


def _wreath_bases(expr: GroupExpr) -> list[GroupExpr]:
    if isinstance(expr, Finite):
        return []
    if isinstance(expr, DirectProduct):
        return [b for f in expr.factors for b in _wreath_bases(f)]
    return [expr.base] + _wreath_bases(expr.base)


@lru_cache(maxsize=None)
def classify(expr: GroupExpr) -> str:
    """finite, cellular or msnc.

    finite: no wreath layer.  cellular: infinite, and every wreath layer
    sits over a finite domain, so the structure is finitely many finite
    cells spread along one equivalence relation with full symmetry.
    msnc: some wreath layer over an infinite domain, which yields a
    definable equivalence relation with infinitely many infinite
    classes.  Within this grammar the criterion is syntactic.
    """
    bases = _wreath_bases(expr)
    if not bases:
        return CLASS_FINITE
    if all(domain_size(b) is not None for b in bases):
        return CLASS_CELLULAR
    return CLASS_MSNC


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(f"parse error at position {self.pos}: {message}", self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def word(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] in "-_"
        ):
            self.pos += 1
        if self.pos == start:
            self.error("expected a word")
        return self.text[start : self.pos]

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start : self.pos])


def _parse_cycles(sc: _Scanner, degree: int) -> tuple[int, ...]:
    # one generator: a product of cycles applied left to right
    image = list(range(degree))
    saw_cycle = False
    while True:
        sc.skip_ws()
        if sc.peek() != "(":
            break
        sc.expect("(")
        points = []
        while True:
            sc.skip_ws()
            if sc.peek() == ")":
                sc.expect(")")
                break
            p = sc.integer()
            if p >= degree:
                sc.error(f"point {p} outside domain of size {degree}")
            if p in points:
                sc.error(f"point {p} repeated within a cycle")
            points.append(p)
        if not points:
            sc.error("empty cycle")
        saw_cycle = True
        cycle_map = {points[i]: points[(i + 1) % len(points)] for i in range(len(points))}
        image = [cycle_map.get(q, q) for q in image]
    if not saw_cycle:
        sc.error("expected a cycle like (0 1)")
    return tuple(image)


def _parse_finite(sc: _Scanner) -> Finite:
    sc.skip_ws()
    k = sc.integer()
    if k < 1:
        sc.error("domain size must be at least 1")
    sc.skip_ws()
    if sc.peek() == ")":
        return Finite(FinPermGroup.trivial(k))
    mark = sc.pos
    word = sc.word()
    if word == "full-sym":
        return Finite(FinPermGroup.symmetric(k))
    if word != "gens":
        sc.pos = mark
        sc.error("expected 'full-sym' or 'gens=[...]'")
    sc.expect("=")
    sc.expect("[")
    gens = []
    sc.skip_ws()
    while sc.peek() != "]":
        gens.append(_parse_cycles(sc, k))
        sc.skip_ws()
        if sc.peek() == ",":
            sc.expect(",")
            sc.skip_ws()
            continue
        if sc.peek() != "]":
            sc.error("expected ',' or ']' in generator list")
    sc.expect("]")
    return Finite(FinPermGroup(k, tuple(gens)))


def _parse_node(sc: _Scanner) -> GroupExpr:
    sc.skip_ws()
    sc.expect("(")
    sc.skip_ws()
    head = sc.word()
    if head == "finite":
        node: GroupExpr = _parse_finite(sc)
    elif head == "prod":
        factors = []
        while True:
            sc.skip_ws()
            if sc.peek() == ")":
                break
            factors.append(_parse_node(sc))
        if len(factors) < 2:
            sc.error("prod needs at least two factors")
        node = DirectProduct(tuple(factors))
    elif head == "wr":
        node = WreathSomega(_parse_node(sc))
    else:
        sc.error(f"unknown form {head!r}; expected finite, prod or wr")
    sc.skip_ws()
    sc.expect(")")
    return node


def parse_expr(text: str) -> GroupExpr:
    """Parse the expression DSL; errors carry the character position."""
    sc = _Scanner(text)
    node = _parse_node(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        sc.error("trailing input after expression")
    return node


def _perm_to_cycles(perm: tuple[int, ...]) -> str:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        q = perm[start]
        while q != start:
            cycle.append(q)
            seen[q] = True
            q = perm[q]
        out.append("(" + " ".join(str(p) for p in cycle) + ")")
    return "".join(out) if out else "(0)"


def format_expr(expr: GroupExpr) -> str:
    """Render an AST back into the DSL (inverse of parse_expr)."""
    if isinstance(expr, Finite):
        g = expr.group
        if not g.generators:
            return f"(finite {g.degree})"
        gens = ", ".join(_perm_to_cycles(p) for p in g.generators)
        return f"(finite {g.degree} gens=[{gens}])"
    if isinstance(expr, DirectProduct):
        return "(prod " + " ".join(format_expr(f) for f in expr.factors) + ")"
    if isinstance(expr, WreathSomega):
        return f"(wr {format_expr(expr.base)})"
    raise TypeError(f"not a group expression: {expr!r}")


def _leaf_egf(group: FinPermGroup, order: int) -> Egf:
    values = []
    for n in range(order + 1):
        if n > group.degree:
            values.append(0)
        else:
            values.append(count_orbits_injective(group, n).count)
    return from_seq(IntSeq(tuple(values)))


def _expr_egf(expr: GroupExpr, order: int) -> Egf:
    if isinstance(expr, Finite):
        return _leaf_egf(expr.group, order)
    if isinstance(expr, DirectProduct):
        return reduce(egf_product, (_expr_egf(f, order) for f in expr.factors))
    if isinstance(expr, WreathSomega):
        return egf_exp_shift(_expr_egf(expr.base, order))
    raise TypeError(f"not a group expression: {expr!r}")


def eval_lseq(expr: GroupExpr, n_max: int) -> IntSeq:
    """Injective-tuple growth sequence l_0..l_{n_max} of the expression.

    Exact for the group the expression generates.  The recursion keeps
    everything as truncated EGFs and converts once at the end; a
    non-integral coefficient there would mean a bug, not data error.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return to_seq(_expr_egf(expr, n_max), label=format_expr(expr))


def eval_sseq(expr: GroupExpr, n_max: int) -> IntSeq:
    """All-tuples growth sequence, the Stirling transform of eval_lseq."""
    return stirling_transform(eval_lseq(expr, n_max))


def gap_verdict(
    expr: GroupExpr,
    n_max: int,
    *,
    cell_grid: Sequence[tuple[Rational, Rational]] | None = None,
    c_grid: Sequence[Rational] | None = None,
) -> list[BoundReport]:
    """Classification-driven growth-bound checks on the l-prefix.

    finite expressions get no checks (their growth is eventually zero);
    cellular ones get a cellular-bound pass over the (c, d) grid; msnc
    ones get the Bell lower bound plus one factorial-upper check per c.
    """
    if n_max < 10:
        raise ValueError("gap_verdict needs n_max of at least 10")
    kind = classify(expr)
    if kind == CLASS_FINITE:
        return []
    seq = eval_lseq(expr, n_max)
    if kind == CLASS_CELLULAR:
        return [check_bounds(seq, "cellular-bound", grid=cell_grid or DEFAULT_CELL_GRID)]
    reports = [check_bounds(seq, "bell-lower")]
    for c in c_grid or DEFAULT_C_GRID:
        reports.append(check_bounds(seq, "factorial-upper", c=c))
    return reports
