"""Generalised sequential games and the product of selection functions.

Rounds are played in order; a strategy gives each round a dense table from
partial histories to moves. The product of selection functions computes a
play whose first move anticipates the later rounds' selections; applying each
round's selection at every history yields a strategy that is optimal after
every history (the subgame-perfect analogue).

History tables are dense arrays in mixed-radix order over the preceding move
sets, first round most significant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .budget import check_budget
from .core import OutcomeTable, Quantifier, SelectionFunction
from .errors import StructuralError
from .simultaneous import default_move_labels

Play = tuple[int, ...]
# Strategy: per round, a dense move table indexed by history (mixed-radix).
SeqStrategy = tuple[tuple[int, ...], ...]


def history_index(sizes: Sequence[int], history: Sequence[int]) -> int:
    """Mixed-radix rank of a history among all histories with the given
    per-round sizes (first coordinate most significant)."""
    idx = 0
    for size, move in zip(sizes, history):
        idx = idx * size + move
    return idx


def histories(sizes: Sequence[int]):
    """All histories over the given sizes, lexicographically (= index order)."""
    return itertools.product(*(range(s) for s in sizes))


@dataclass(frozen=True)
class SequentialGame:
    """n rounds, per-round move sets, a single outcome function on full
    plays, and per-round quantifier/selection pairs (each selection is
    expected to attain its quantifier)."""

    moves: tuple[tuple[str, ...], ...]
    outcome_fn: Callable
    quantifiers: tuple[Quantifier, ...]
    selections: tuple[SelectionFunction, ...]

    def __post_init__(self):
        if not self.moves:
            raise StructuralError("a sequential game needs at least one round")
        for i, ms in enumerate(self.moves):
            if not ms:
                raise StructuralError(f"round {i} has an empty move set")
        n = len(self.moves)
        if len(self.quantifiers) != n or len(self.selections) != n:
            raise StructuralError(
                "quantifiers and selections must have one entry per round"
            )

    @classmethod
    def from_tensor(cls, move_counts: Sequence[int], payoffs: Sequence[float],
                    quantifiers: Sequence[Quantifier],
                    selections: Sequence[SelectionFunction],
                    moves: Sequence[Sequence[str]] | None = None) -> "SequentialGame":
        """Build from a dense row-major payoff tensor over plays."""
        counts = tuple(int(c) for c in move_counts)
        size = 1
        for c in counts:
            size *= c
        flat = tuple(payoffs)
        if len(flat) != size:
            raise StructuralError(
                f"payoff tensor has {len(flat)} entries, expected {size}"
            )

        def fn(play: Play):
            return flat[history_index(counts, play)]

        if moves is None:
            moves = tuple(default_move_labels(c) for c in counts)
        else:
            moves = tuple(tuple(ms) for ms in moves)
            for ms, c in zip(moves, counts):
                if len(ms) != c:
                    raise StructuralError("move labels must match move counts")
        return cls(moves=moves, outcome_fn=fn,
                   quantifiers=tuple(quantifiers), selections=tuple(selections))

    @property
    def rounds(self) -> int:
        return len(self.moves)

    @property
    def move_counts(self) -> tuple[int, ...]:
        return tuple(len(ms) for ms in self.moves)

    def history_count(self, i: int) -> int:
        """Number of histories before round i."""
        n = 1
        for c in self.move_counts[:i]:
            n *= c
        return n

    def play_count(self) -> int:
        return self.history_count(self.rounds)

    def outcome(self, play: Play):
        return self.outcome_fn(tuple(play))

    def validate_strategy(self, strategy: Sequence[Sequence[int]]) -> SeqStrategy:
        strategy = tuple(tuple(t) for t in strategy)
        if len(strategy) != self.rounds:
            raise StructuralError(
                f"strategy has {len(strategy)} tables for {self.rounds} rounds"
            )
        for i, table in enumerate(strategy):
            if len(table) != self.history_count(i):
                raise StructuralError(
                    f"round {i} table has {len(table)} entries, expected "
                    f"{self.history_count(i)}"
                )
            for move in table:
                if not 0 <= move < self.move_counts[i]:
                    raise StructuralError(f"move {move} invalid in round {i}")
        return strategy

    def validate_play(self, play: Sequence[int]) -> Play:
        play = tuple(play)
        if len(play) != self.rounds:
            raise StructuralError(f"play has {len(play)} moves for {self.rounds} rounds")
        for i, (m, c) in enumerate(zip(play, self.move_counts)):
            if not 0 <= m < c:
                raise StructuralError(f"move {m} invalid in round {i} (size {c})")
        return play


def extend_with_strategy(g: SequentialGame, strategy: SeqStrategy,
                         prefix: Sequence[int]) -> Play:
    """Complete a partial history to a full play by following the strategy."""
    play = tuple(prefix)
    sizes = g.move_counts
    while len(play) < g.rounds:
        i = len(play)
        play = play + (strategy[i][history_index(sizes[:i], play)],)
    return play


def strategic_play(g: SequentialGame, strategy: Sequence[Sequence[int]]) -> Play:
    """The play obtained by running the strategy against itself from the
    empty history."""
    strategy = g.validate_strategy(strategy)
    return extend_with_strategy(g, strategy, ())


def is_optimal_strategy(g: SequentialGame, strategy: Sequence[Sequence[int]],
                        tol: float = 0.0, budget: int | None = None) -> bool:
    """True iff after every partial history, the outcome of following the
    strategy is acceptable to that round's quantifier on the table of
    one-round deviations (each deviation continued by the strategy)."""
    strategy = g.validate_strategy(strategy)
    sizes = g.move_counts
    total = sum(g.history_count(i) * sizes[i] for i in range(g.rounds))
    check_budget(total, budget, "optimality checks")
    for i in range(g.rounds):
        phi = g.quantifiers[i]
        for prefix in histories(sizes[:i]):
            value = g.outcome(extend_with_strategy(g, strategy, prefix))
            entries = [
                g.outcome(extend_with_strategy(g, strategy, prefix + (x,)))
                for x in range(sizes[i])
            ]
            if not phi.contains(OutcomeTable(entries), value, tol):
                return False
    return True


def selection_product(eps: SelectionFunction, delta: SelectionFunction,
                      q: Sequence[Sequence]) -> tuple[int, int]:
    """Binary product of selection functions on a two-round outcome grid
    ``q[x][y]``: the second move is delta's reply to each x, the first is
    eps's choice anticipating those replies. Returns (a, reply_to_a)."""
    rows = [tuple(row) for row in q]
    if not rows or not rows[0]:
        raise StructuralError("product table must be nonempty")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise StructuralError("product table must be rectangular")
    replies = [delta.select(OutcomeTable(row)) for row in rows]
    outer = OutcomeTable([row[b] for row, b in zip(rows, replies)])
    a = eps.select(outer)
    return a, replies[a]


def compute_optimal_play(g: SequentialGame, budget: int | None = None) -> Play:
    """The play computed by the right-nested iterated product of the
    per-round selections applied to the outcome function."""
    check_budget(g.play_count(), budget, "plays")

    def solve(prefix: Play) -> Play:
        i = len(prefix)
        if i == g.rounds:
            return ()
        tails = [solve(prefix + (x,)) for x in range(g.move_counts[i])]
        table = OutcomeTable([
            g.outcome(prefix + (x,) + tail) for x, tail in enumerate(tails)
        ])
        a = g.selections[i].select(table)
        return (a,) + tails[a]

    return solve(())


def compute_optimal_strategy(g: SequentialGame,
                             budget: int | None = None) -> SeqStrategy:
    """Apply each round's selection at every history, last round first, so
    the optimality condition holds pointwise. Its strategic play equals
    compute_optimal_play."""
    sizes = g.move_counts
    total = sum(g.history_count(i) * sizes[i] for i in range(g.rounds))
    check_budget(total, budget, "histories")
    tables: list[tuple[int, ...]] = [()] * g.rounds
    partial: list[tuple[int, ...]] = [()] * g.rounds

    def continuation(play: Play) -> Play:
        while len(play) < g.rounds:
            i = len(play)
            play = play + (partial[i][history_index(sizes[:i], play)],)
        return play

    for i in range(g.rounds - 1, -1, -1):
        choices = []
        for prefix in histories(sizes[:i]):
            table = OutcomeTable([
                g.outcome(continuation(prefix + (x,))) for x in range(sizes[i])
            ])
            choices.append(g.selections[i].select(table))
        tables[i] = tuple(choices)
        partial[i] = tables[i]
    return tuple(tables)
