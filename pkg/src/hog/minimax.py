"""Two-player stages and the binary Berardi-Bezem-Coquand functional.

The BBC functional has the same type as the binary product of selection
functions but computes both coordinates independently: each player's move is
chosen against the opponent's pointwise replies. For total single-valued
quantifiers the resulting pair is a reply-robust profile: each move is
acceptable against every reply function the opponent's quantifier admits
(with max/min this is the classical minimax strategy).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .budget import check_budget
from .core import OutcomeTable, Quantifier, SelectionFunction, as_outcome
from .errors import StructuralError
from .sequential import selection_product
from .simultaneous import SimultaneousGame, default_move_labels


@dataclass(frozen=True)
class TwoPlayerStage:
    """A 2-player single-outcome-space game given by an outcome grid
    ``payoff[x][y]``, quantifiers (phi for the first player, psi for the
    second), and selections attaining them. The reply-robustness theorem
    needs both quantifiers single-valued; the verifier itself accepts
    multi-valued ones."""

    moves: tuple[tuple[str, ...], tuple[str, ...]]
    payoff: tuple[tuple[float, ...], ...]
    quantifiers: tuple[Quantifier, Quantifier]
    selections: tuple[SelectionFunction, SelectionFunction]

    def __post_init__(self):
        nx, ny = len(self.moves[0]), len(self.moves[1])
        if nx == 0 or ny == 0:
            raise StructuralError("stage move sets must be nonempty")
        if len(self.payoff) != nx or any(len(row) != ny for row in self.payoff):
            raise StructuralError(
                f"payoff grid must be {nx}x{ny}"
            )

    @classmethod
    def from_tensor(cls, move_counts: Sequence[int], payoffs: Sequence[float],
                    quantifiers, selections,
                    moves: Sequence[Sequence[str]] | None = None) -> "TwoPlayerStage":
        nx, ny = (int(c) for c in move_counts)
        flat = [as_outcome(v) for v in payoffs]
        if len(flat) != nx * ny:
            raise StructuralError(
                f"payoff tensor has {len(flat)} entries, expected {nx * ny}"
            )
        grid = tuple(tuple(flat[x * ny + y] for y in range(ny)) for x in range(nx))
        if moves is None:
            moves = (default_move_labels(nx), default_move_labels(ny))
        else:
            moves = tuple(tuple(ms) for ms in moves)
        return cls(moves=moves, payoff=grid, quantifiers=tuple(quantifiers),
                   selections=tuple(selections))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.moves[0]), len(self.moves[1])

    def row_table(self, x: int) -> OutcomeTable:
        """Outcomes over the second player's moves with the first fixed at x."""
        return OutcomeTable(self.payoff[x])

    def col_table(self, y: int) -> OutcomeTable:
        """Outcomes over the first player's moves with the second fixed at y."""
        return OutcomeTable([row[y] for row in self.payoff])

    def single_valued(self) -> bool:
        return all(phi.single_valued for phi in self.quantifiers)

    def to_simultaneous(self) -> SimultaneousGame:
        grid = self.payoff

        def outcome(profile):
            return grid[profile[0]][profile[1]]

        return SimultaneousGame(
            moves=self.moves,
            outcome_fns=(outcome, outcome),
            quantifiers=self.quantifiers,
            single_outcome_space=True,
        )


def bbc(stage: TwoPlayerStage) -> tuple[int, int]:
    """The pair (a, b) where a is chosen against the second selection's
    pointwise replies and b against the first's, each computed independently
    (unlike the product, whose second coordinate is the reply to a)."""
    eps, delta = stage.selections
    nx, ny = stage.shape
    replies_to_x = [delta.select(stage.row_table(x)) for x in range(nx)]
    a = eps.select(OutcomeTable(
        [stage.payoff[x][replies_to_x[x]] for x in range(nx)]
    ))
    replies_to_y = [eps.select(stage.col_table(y)) for y in range(ny)]
    b = delta.select(OutcomeTable(
        [stage.payoff[replies_to_y[y]][y] for y in range(ny)]
    ))
    return a, b


def is_psi_phi_profile(stage: TwoPlayerStage, pair: tuple[int, int],
                       tol: float = 0.0, budget: int | None = None) -> bool:
    """Verify reply-robustness of (a, b): a's outcome must be acceptable to
    the first quantifier against every reply function admitted pointwise by
    the second quantifier, and symmetrically for b. Admissibility is
    pointwise, so reply functions are enumerated as a product of per-move
    acceptable sets (vacuously true when some move has no acceptable reply).
    """
    a, b = pair
    nx, ny = stage.shape
    if not (0 <= a < nx and 0 <= b < ny):
        raise StructuralError(f"pair {pair} outside {nx}x{ny} stage")
    phi, psi = stage.quantifiers
    q = stage.payoff

    row_tables = [stage.row_table(x) for x in range(nx)]
    a_choices = [
        [y for y in range(ny) if psi.contains(row_tables[x], q[x][y], tol)]
        for x in range(nx)
    ]
    col_tables = [stage.col_table(y) for y in range(ny)]
    b_choices = [
        [x for x in range(nx) if phi.contains(col_tables[y], q[x][y], tol)]
        for y in range(ny)
    ]

    total = 0
    if all(a_choices):
        count = 1
        for c in a_choices:
            count *= len(c)
        total += count
    if all(b_choices):
        count = 1
        for c in b_choices:
            count *= len(c)
        total += count
    check_budget(total, budget, "reply functions")

    if all(a_choices):
        for f in itertools.product(*a_choices):
            table = OutcomeTable([q[x][f[x]] for x in range(nx)])
            if not phi.contains(table, q[a][f[a]], tol):
                return False
    if all(b_choices):
        for gfun in itertools.product(*b_choices):
            table = OutcomeTable([q[gfun[y]][y] for y in range(ny)])
            if not psi.contains(table, q[gfun[b]][b], tol):
                return False
    return True


def compare_bbc_vs_product(stage: TwoPlayerStage) -> dict:
    """Exploratory comparison of the independent-coordinates pair with the
    product-of-selections pair on the same stage; no relationship is
    asserted beyond what the report shows."""
    pair_bbc = bbc(stage)
    pair_prod = selection_product(stage.selections[0], stage.selections[1],
                                  stage.payoff)
    return {
        "bbc": {
            "pair": list(pair_bbc),
            "moves": [stage.moves[0][pair_bbc[0]], stage.moves[1][pair_bbc[1]]],
            "outcome": stage.payoff[pair_bbc[0]][pair_bbc[1]],
        },
        "product": {
            "pair": list(pair_prod),
            "moves": [stage.moves[0][pair_prod[0]], stage.moves[1][pair_prod[1]]],
            "outcome": stage.payoff[pair_prod[0]][pair_prod[1]],
        },
        "coincide": pair_bbc == pair_prod,
    }
