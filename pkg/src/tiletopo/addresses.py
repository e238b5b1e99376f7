"""Eventually periodic symbol sequences and the point map they address.

An address pre (per)^w names the point obtained by running the contractions
for its symbols forever. Equivalence of two addresses (naming the same point)
and membership of an address in a boundary set's path language are decided by
finite walks over the neighbor graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmat import identity, mat_mul, mat_vec, solve_exact
from .neighborgraph import NeighborGraph
from .tilespec import TileSystem

Word = tuple[int, ...]


@dataclass(frozen=True)
class Address:
    """Canonical eventually periodic word: minimal period, minimal preperiod."""

    preperiod: Word
    period: Word

    def __post_init__(self):
        if not self.period:
            raise ValueError("address period must be nonempty")

    def symbol(self, n: int) -> int:
        """0-based access into the infinite sequence."""
        if n < len(self.preperiod):
            return self.preperiod[n]
        return self.period[(n - len(self.preperiod)) % len(self.period)]

    def position(self, n: int) -> int:
        """Collapse 0-based position n into the finite position automaton."""
        if n < len(self.preperiod):
            return n
        return len(self.preperiod) + (n - len(self.preperiod)) % len(self.period)

    def state_count(self) -> int:
        return len(self.preperiod) + len(self.period)


def _primitive_root(word: Word) -> Word:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(n)):
            return word[:d]
    return word


def make_address(preperiod: Sequence[int], period: Sequence[int]) -> Address:
    """Canonicalize: shrink the period to its primitive root, then absorb any
    preperiod tail that merely repeats the period's tail."""
    per = _primitive_root(tuple(int(x) for x in period))
    pre = list(int(x) for x in preperiod)
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = (per[-1],) + per[:-1]
    return Address(tuple(pre), per)


def parse_address(text: str) -> Address:
    """Parse "1(212)w" style notation (the trailing w is optional)."""
    s = text.strip().removesuffix("w")
    if "(" in s:
        head, _, rest = s.partition("(")
        per, _, tail = rest.partition(")")
        if tail:
            raise ValueError(f"malformed address {text!r}")
    else:
        head, per = "", s
    if not per.isdigit() or (head and not head.isdigit()):
        raise ValueError(f"malformed address {text!r}")
    return make_address(tuple(int(c) for c in head), tuple(int(c) for c in per))


def format_address(a: Address) -> str:
    pre = "".join(str(x) for x in a.preperiod)
    per = "".join(str(x) for x in a.period)
    return f"{pre}({per})w"


def format_word(word: Sequence[int]) -> str:
    return "".join(str(x) for x in word)


def parse_word(text: str) -> Word:
    if not text.isdigit():
        raise ValueError(f"malformed word {text!r}")
    return tuple(int(c) for c in text)


def flip_word(word: Sequence[int]) -> Word:
    """Swap the two symbols of a binary alphabet."""
    return tuple(3 - x for x in word)


def flip_address(a: Address) -> Address:
    return make_address(flip_word(a.preperiod), flip_word(a.period))


def point_of_address(ts: TileSystem, a: Address) -> tuple[Fraction, ...]:
    """Exact coordinates of the point the address names.

    The periodic tail is the fixed point of the composed map for the period
    word, solved exactly; the preperiod is then applied in reverse.
    """
    n = ts.dimension
    mat = ts.matrix
    power = identity(n)
    rhs = tuple(Fraction(0) for _ in range(n))
    # After the loop, power = M^L and rhs = sum M^(L-t) k_(per_t).
    for sym in a.period:
        rhs = tuple(Fraction(x) for x in mat_vec(mat, rhs))
        rhs = tuple(r + d for r, d in zip(rhs, ts.digit(sym)))
        power = mat_mul(power, mat)
    lhs = tuple(
        tuple(Fraction(power[i][j]) - (1 if i == j else 0) for j in range(n))
        for i in range(n)
    )
    y = solve_exact(lhs, rhs)
    x = y
    for sym in reversed(a.preperiod):
        shifted = tuple(xq + dq for xq, dq in zip(x, ts.digit(sym)))
        x = solve_exact(mat, shifted)
    return tuple(x)


def addresses_equivalent(g: NeighborGraph, s: Address, t: Address) -> bool:
    """Whether two addresses name the same point of the tile.

    Runs the deterministic difference walk v <- M v + k(t_n) - k(s_n) from the
    root; the addresses agree exactly when the walk never leaves the vertex
    set. Eventual periodicity makes repetition detection complete.
    """
    ts = g.system
    v = g.root
    vertex_set = set(g.vertices)
    seen = set()
    n = 0
    while True:
        state = (s.position(n), t.position(n), v)
        if state in seen:
            return True
        seen.add(state)
        mv = mat_vec(ts.matrix, v)
        v = tuple(
            x + y - z
            for x, y, z in zip(mv, ts.digit(t.symbol(n)), ts.digit(s.symbol(n)))
        )
        if v not in vertex_set:
            return False
        n += 1


def address_membership(g: NeighborGraph, s: Address, vertex: tuple) -> bool:
    """Whether the address labels an infinite path starting at the vertex.

    Nondeterministic walk over subsets of vertices; acceptance is detected by
    repetition of the (position, subset) state, rejection by the empty subset.
    """
    if vertex not in g.out:
        raise ValueError(f"unknown vertex {vertex!r}")
    current = frozenset([vertex])
    seen = set()
    n = 0
    while True:
        state = (s.position(n), current)
        if state in seen:
            return True
        seen.add(state)
        sym = s.symbol(n)
        nxt = frozenset(
            w for v in current for lab, w in g.out[v] if lab == sym
        )
        if not nxt:
            return False
        current = nxt
        n += 1


def _coextendable_states(g: NeighborGraph, s: Address) -> frozenset:
    """States (position, vertex) from which the tail of s admits an
    equivalent-address continuation staying inside the graph."""
    ts = g.system
    vertex_set = set(g.vertices)
    positions = range(s.state_count())
    states = {(p, v) for p in positions for v in g.vertices}

    def successors(p: int, v: tuple):
        nxt_p = p + 1 if p + 1 < s.state_count() else len(s.preperiod)
        mv = mat_vec(ts.matrix, v)
        base = tuple(x - z for x, z in zip(mv, ts.digit(s.symbol(p))))
        for c in range(1, ts.m + 1):
            w = tuple(x + y for x, y in zip(base, ts.digit(c)))
            if w in vertex_set:
                yield (nxt_p, w)

    changed = True
    while changed:
        changed = False
        for state in list(states):
            if not any(nx in states for nx in successors(*state)):
                states.discard(state)
                changed = True
    return frozenset(states)


class PrefixOracle:
    """Decides whether finite words are prefixes of some address of a point.

    The point is given by one of its addresses. A word w qualifies exactly
    when the difference walk against the reference address stays inside the
    graph and ends in a state from which it can continue forever.
    """

    def __init__(self, g: NeighborGraph, reference: Address):
        self.g = g
        self.reference = reference
        self._acc = _coextendable_states(g, reference)

    def walk(self, word: Sequence[int]):
        """Final (position, vertex) state, or None when the word disqualifies."""
        g, s = self.g, self.reference
        ts = g.system
        vertex_set = set(g.vertices)
        v = g.root
        if (0, v) not in self._acc:
            return None
        for n, sym in enumerate(word):
            mv = mat_vec(ts.matrix, v)
            v = tuple(
                x + y - z for x, y, z in zip(mv, ts.digit(sym), ts.digit(s.symbol(n)))
            )
            if v not in vertex_set:
                return None
            state = (s.position(n + 1), v)
            if state not in self._acc:
                return None
        return (s.position(len(word)), v)

    def is_prefix(self, word: Sequence[int]) -> bool:
        return self.walk(word) is not None
