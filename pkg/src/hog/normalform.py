"""Normal form of a sequential game.

Each round becomes a player whose moves are contingent strategies (dense
history -> move tables), the outcome function evaluates the original game on
the strategic play, and each round's quantifier is lifted so that membership
only consults the outcomes of constant contingent strategies. Optimal
strategies of the sequential game are equilibria of its normal form; the
converse fails (equilibria may rest on non-credible off-path behaviour).
"""

from __future__ import annotations

from dataclasses import dataclass

from .budget import resolve_budget
from .core import OutcomeTable, Quantifier
from .errors import BudgetExceededError, StructuralError
from .sequential import SeqStrategy, SequentialGame, extend_with_strategy
from .simultaneous import SimultaneousGame


@dataclass(frozen=True)
class ContingentMoveSet:
    """The move set of round ``round_index`` in the normal form: all dense
    tables from the round's history space to its base moves, enumerated in
    lexicographic (big-endian mixed-radix) order."""

    round_index: int
    base_move_count: int
    history_count: int

    @property
    def size(self) -> int:
        return self.base_move_count ** self.history_count

    def table(self, index: int) -> tuple[int, ...]:
        """Decode an index into a history table (first history most
        significant)."""
        if not 0 <= index < self.size:
            raise StructuralError(
                f"contingent move {index} outside 0..{self.size - 1}"
            )
        digits = []
        for _ in range(self.history_count):
            index, d = divmod(index, self.base_move_count)
            digits.append(d)
        return tuple(reversed(digits))

    def index(self, table) -> int:
        """Inverse of :meth:`table`."""
        if len(table) != self.history_count:
            raise StructuralError(
                f"table has {len(table)} entries, expected {self.history_count}"
            )
        idx = 0
        for move in table:
            if not 0 <= move < self.base_move_count:
                raise StructuralError(f"move {move} invalid in contingent table")
            idx = idx * self.base_move_count + move
        return idx

    def constant_index(self, move: int) -> int:
        """Index of the table that plays ``move`` at every history."""
        return self.index((move,) * self.history_count)

    def all_tables(self) -> list[tuple[int, ...]]:
        return [self.table(k) for k in range(self.size)]


def lift_round_quantifier(phi: Quantifier, cms: ContingentMoveSet) -> Quantifier:
    """Quantifier over contingent strategies: membership restricts the table
    to the constant contingent strategies and delegates to the round
    quantifier. Only those entries are ever consulted."""

    def restrict(p: OutcomeTable) -> OutcomeTable:
        if len(p) != cms.size:
            raise StructuralError(
                f"table has {len(p)} entries, expected {cms.size} contingent moves"
            )
        return OutcomeTable(
            [p[cms.constant_index(x)] for x in range(cms.base_move_count)]
        )

    def contains(p: OutcomeTable, r, tol: float) -> bool:
        return phi.contains(restrict(p), r, tol)

    canonical = None
    if phi.canonical is not None:
        canonical = lambda p: phi.canonical(restrict(p))
    in_domain = None
    if phi.in_domain is not None:
        in_domain = lambda p, tol: phi.in_domain(restrict(p), tol)
    descriptor = None
    if phi.descriptor is not None:
        descriptor = {
            "kind": "seq_lift",
            "inner": dict(phi.descriptor),
            "base_moves": cms.base_move_count,
            "histories": cms.history_count,
        }
    return Quantifier(phi.kind, contains, canonical, in_domain, descriptor)


def contingent_move_sets(g: SequentialGame) -> list[ContingentMoveSet]:
    return [
        ContingentMoveSet(i, g.move_counts[i], g.history_count(i))
        for i in range(g.rounds)
    ]


def contingent_label(cms: ContingentMoveSet, g: SequentialGame, index: int) -> str:
    """Mixed-radix index plus a readable history -> move listing."""
    table = cms.table(index)
    i = cms.round_index
    if i == 0:
        listing = g.moves[0][table[0]]
    else:
        from .sequential import histories
        parts = []
        for hist, move in zip(histories(g.move_counts[:i]), table):
            hist_txt = "".join(g.moves[j][h] for j, h in enumerate(hist))
            parts.append(f"{hist_txt}>{g.moves[i][move]}")
        listing = ",".join(parts)
    return f"{index}:{listing}"


def to_normal_form(g: SequentialGame, budget: int | None = None) -> SimultaneousGame:
    """The simultaneous game whose players are the rounds and whose moves are
    contingent strategies, with a single shared outcome function. Refuses
    when the summed move-set sizes or the profile space exceed the budget."""
    sets = contingent_move_sets(g)
    limit = resolve_budget(budget)
    total_moves = sum(c.size for c in sets)
    if total_moves > limit:
        raise BudgetExceededError(total_moves, limit, "contingent moves")
    profile_space = 1
    for c in sets:
        profile_space *= c.size
    if profile_space > limit:
        raise BudgetExceededError(profile_space, limit, "normal-form profiles")

    # Materialise every contingent strategy up front so moves have decidable
    # equality and a fixed enumeration order.
    decoded = [c.all_tables() for c in sets]

    def outcome(profile):
        strategy = tuple(decoded[i][k] for i, k in enumerate(profile))
        return g.outcome(extend_with_strategy(g, strategy, ()))

    labels = tuple(
        tuple(contingent_label(c, g, k) for k in range(c.size)) for c in sets
    )
    return SimultaneousGame(
        moves=labels,
        outcome_fns=tuple(outcome for _ in sets),
        quantifiers=tuple(
            lift_round_quantifier(g.quantifiers[i], c)
            for i, c in enumerate(sets)
        ),
        players=tuple(f"round{i}" for i in range(g.rounds)),
        single_outcome_space=True,
    )


def strategy_to_profile(g: SequentialGame, strategy: SeqStrategy) -> tuple[int, ...]:
    """Reinterpret a sequential strategy as a pure profile of the normal form."""
    strategy = g.validate_strategy(strategy)
    return tuple(
        cms.index(table)
        for cms, table in zip(contingent_move_sets(g), strategy)
    )


def profile_to_strategy(g: SequentialGame, profile) -> SeqStrategy:
    return tuple(
        cms.table(k) for cms, k in zip(contingent_move_sets(g), profile)
    )


def check_soundness(g: SequentialGame, strategy: SeqStrategy, tol: float = 0.0,
                    budget: int | None = None) -> bool:
    """Whether the strategy, reinterpreted as a pure profile of the normal
    form, is a generalised Nash equilibrium there. Implied by optimality of
    the strategy; not conversely."""
    from .simultaneous import is_generalised_nash

    nf = to_normal_form(g, budget)
    return is_generalised_nash(nf, strategy_to_profile(g, strategy), tol)
