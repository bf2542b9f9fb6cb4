"""
Latin squares with a fixed first row and the alignment schemes they induce.

A scheme is a K x 3 array of symbols: row ``j`` is transmitter ``j`` and
column ``i`` is receiver ``i``, so entry ``(j, i)`` labels the beamformer
``v_ij``. At receiver ``i`` the two interference beamformers carrying the
same symbol in the other two columns are aligned onto one direction. Every
symbol appears once per column, which makes the three beamformers sharing a
symbol form a 3-cycle of alignment constraints (a chain).

All indices are 0-based; ``str(BeamformerId(0, 2))`` renders as ``v13``.
"""

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import BudgetExceeded, ChainStructureViolation, InvalidTriple

__all__ = ['LatinSquare', 'BeamformerId', 'AlignmentScheme', 'AlignmentPair',
           'ChainStep', 'Chain', 'enumerate_fixed_first_row',
           'expected_square_count', 'scheme_from_columns', 'alignment_pairs',
           'extract_chains', 'build_schemes', 'all_ordered_triples',
           'MAX_ENUMERATION_K']

MAX_ENUMERATION_K = 6

# OEIS A000315: reduced Latin squares of order n.
REDUCED_LATIN_SQUARES = {1: 1, 2: 1, 3: 1, 4: 4, 5: 56, 6: 9408}

SYMBOLS = 'ABCDEFGHIJKLMNOPQRSTUVWXYZ'


class BeamformerId(NamedTuple):
    """Beamformer ``v_ij``: stream from transmitter ``j`` to receiver ``i``."""
    receiver: int
    transmitter: int

    def __str__(self):
        return f"v{self.receiver + 1}{self.transmitter + 1}"


@dataclass(frozen=True)
class LatinSquare:
    cells: tuple

    def __post_init__(self):
        cells = tuple(tuple(int(x) for x in row) for row in self.cells)
        object.__setattr__(self, 'cells', cells)
        k = len(cells)
        full = set(range(k))
        if any(len(row) != k or set(row) != full for row in cells):
            raise ValueError("every row must be a permutation of 0..K-1")
        if any({row[c] for row in cells} != full for c in range(k)):
            raise ValueError("every column must be a permutation of 0..K-1")
        if cells[0] != tuple(range(k)):
            raise ValueError("first row must be (0, 1, ..., K-1)")

    @property
    def K(self):
        return len(self.cells)

    def column(self, c):
        return tuple(row[c] for row in self.cells)

    def __str__(self):
        return '\n'.join(' '.join(SYMBOLS[x] for x in row) for row in self.cells)


def expected_square_count(K):
    """(K-1)! times the number of reduced K x K Latin squares."""
    return math.factorial(K - 1) * REDUCED_LATIN_SQUARES[K]


def _fill(K):
    grid = [list(range(K))] + [[-1] * K for _ in range(K - 1)]
    col_used = [{c} for c in range(K)]
    row_used = [set(range(K))] + [set() for _ in range(K - 1)]

    def place(pos):
        if pos == K * K:
            yield tuple(tuple(row) for row in grid)
            return
        r, c = divmod(pos, K)
        for s in range(K):
            if s in row_used[r] or s in col_used[c]:
                continue
            grid[r][c] = s
            row_used[r].add(s)
            col_used[c].add(s)
            yield from place(pos + 1)
            row_used[r].discard(s)
            col_used[c].discard(s)
        grid[r][c] = -1

    yield from place(K)


def enumerate_fixed_first_row(K):
    """All K x K Latin squares whose first row is ``0, 1, ..., K-1``.

    Depth-first backtracking, filled row by row; output order is
    lexicographic in the row-major cell sequence.

    Raises
    ------
    BudgetExceeded
        For K > 6.
    """
    if K < 3:
        raise ValueError("K must be at least 3")
    if K > MAX_ENUMERATION_K:
        raise BudgetExceeded(f"enumeration is limited to K <= {MAX_ENUMERATION_K}")
    return [LatinSquare(cells) for cells in _fill(K)]


@dataclass(frozen=True)
class AlignmentScheme:
    """K x 3 symbol array; ``symbols[j][i]`` labels beamformer ``v_ij``."""
    symbols: tuple
    source: tuple = None  # (square index, column triple)

    def __post_init__(self):
        symbols = tuple(tuple(int(x) for x in row) for row in self.symbols)
        object.__setattr__(self, 'symbols', symbols)
        if any(len(row) != 3 for row in symbols):
            raise ValueError("scheme rows must have exactly three entries")
        for i in range(3):
            if len({row[i] for row in symbols}) != len(symbols):
                raise ValueError(f"column {i} repeats a symbol")
        for row in symbols:
            if len(set(row)) != 3:
                raise ValueError("a scheme row repeats a symbol")

    @property
    def K(self):
        return len(self.symbols)

    @property
    def label(self):
        if self.source is None:
            return 'custom'
        index, triple = self.source
        return f"{index}:{''.join(str(c) for c in triple)}"

    def symbol(self, bf):
        return self.symbols[bf.transmitter][bf.receiver]

    def holder(self, symbol, column):
        """The beamformer in `column` that carries `symbol`."""
        for j, row in enumerate(self.symbols):
            if row[column] == symbol:
                return BeamformerId(column, j)
        raise KeyError(symbol)

    def __str__(self):
        return '\n'.join(' '.join(SYMBOLS[x] for x in row) for row in self.symbols)


def scheme_from_columns(square, triple=(0, 1, 2), square_index=None):
    """Restrict `square` to three ordered columns.

    Column ``triple[i]`` of the square becomes the receiver-``i`` column of
    the scheme.
    """
    triple = tuple(int(c) for c in triple)
    if (len(triple) != 3 or len(set(triple)) != 3
            or any(not 0 <= c < square.K for c in triple)):
        raise InvalidTriple(f"invalid column triple {triple} for K={square.K}")
    symbols = tuple(tuple(row[c] for c in triple) for row in square.cells)
    return AlignmentScheme(symbols, source=(square_index, triple))


@dataclass(frozen=True)
class AlignmentPair:
    """Two interference beamformers aligned onto one direction at `receiver`."""
    receiver: int
    members: tuple
    symbol: int

    def __str__(self):
        a, b = self.members
        return f"({a},{b})"


def alignment_pairs(scheme, receiver):
    """The K aligned interference pairs at `receiver`.

    Pairs are ordered by their smaller member and each pair lists its
    members in increasing id order.
    """
    if receiver not in (0, 1, 2):
        raise ValueError("receiver must be 0, 1 or 2")
    c1, c2 = [c for c in range(3) if c != receiver]
    pairs = []
    for s in range(scheme.K):
        members = tuple(sorted((scheme.holder(s, c1), scheme.holder(s, c2))))
        pairs.append(AlignmentPair(receiver, members, s))
    pairs.sort(key=lambda p: p.members)
    return pairs


@dataclass(frozen=True)
class ChainStep:
    """Span equality at `receiver` linking `source` to `target`.

    Read as ``span(H[receiver][source.tx] v_source) =
    span(H[receiver][target.tx] v_target)``.
    """
    receiver: int
    source: BeamformerId
    target: BeamformerId


@dataclass(frozen=True)
class Chain:
    """A 3-cycle of alignment constraints, one per receiver.

    ``members`` starts at the anchor (the smallest id, which always sits in
    receiver column 0) and follows the cycle through columns 0 -> 1 -> 2;
    ``steps`` are the three links in that order, the last one closing back
    onto the anchor.
    """
    members: tuple
    steps: tuple

    @property
    def anchor(self):
        return self.members[0]

    def constraint(self, receiver):
        for step in self.steps:
            if step.receiver == receiver:
                return step
        raise KeyError(receiver)

    def __str__(self):
        return '{' + ', '.join(str(m) for m in self.members) + '}'


def extract_chains(scheme):
    """Decompose the scheme's 3K alignment pairs into K chains.

    Raises
    ------
    ChainStructureViolation
        If the pair graph is not a union of K vertex-disjoint 3-cycles with
        one edge per receiver.
    """
    K = scheme.K
    if len({frozenset(row[i] for row in scheme.symbols) for i in range(3)}) != 1:
        raise ChainStructureViolation("the three columns use different symbol sets")
    adjacency = {BeamformerId(i, j): [] for i in range(3) for j in range(K)}
    for r in range(3):
        for pair in alignment_pairs(scheme, r):
            a, b = pair.members
            adjacency[a].append((r, b))
            adjacency[b].append((r, a))

    seen = set()
    chains = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        component = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for _, nb in adjacency[node]:
                if nb not in component:
                    component.add(nb)
                    frontier.append(nb)
        seen |= component
        edges = {(r, frozenset((a, b))) for a in component for r, b in adjacency[a]}
        receivers = sorted(r for r, _ in edges)
        columns = sorted(m.receiver for m in component)
        if len(component) != 3 or receivers != [0, 1, 2] or columns != [0, 1, 2]:
            raise ChainStructureViolation(
                f"component {sorted(map(str, component))} is not a 3-cycle "
                "with one constraint per receiver")
        by_column = sorted(component, key=lambda m: m.receiver)
        # Link from column c to column c+1 sits at the remaining receiver.
        steps = tuple(ChainStep(3 - c - (c + 1) % 3, by_column[c], by_column[(c + 1) % 3])
                      for c in range(3))
        chains.append(Chain(tuple(by_column), steps))

    if len(chains) != K:
        raise ChainStructureViolation(f"expected {K} chains, found {len(chains)}")
    chains.sort(key=lambda ch: ch.anchor)
    return chains


def build_schemes(K, scope='first', triple=(0, 1, 2)):
    """Alignment schemes for a scheme scope.

    `scope` is ``'first'`` (first square), ``'all'`` (every square with a
    fixed first row) or an integer N (first N squares). Every square uses
    the same column `triple`.
    """
    if scope == 'first':
        count = 1
    elif scope == 'all':
        count = None
    else:
        count = int(scope)
        if count < 1:
            raise ValueError("scheme count must be positive")
    if K > MAX_ENUMERATION_K:
        raise BudgetExceeded(f"enumeration is limited to K <= {MAX_ENUMERATION_K}")
    cells = _fill(K) if count is None else itertools.islice(_fill(K), count)
    return [scheme_from_columns(LatinSquare(c), triple, index)
            for index, c in enumerate(cells)]


def all_ordered_triples(K):
    """Every ordered choice of three distinct columns."""
    return list(itertools.permutations(range(K), 3))
