"""Generalised simultaneous games over finite move sets.

A game assigns each player a finite move set, an outcome function over full
profiles, and a quantifier over their own moves. A profile is an equilibrium
when every player's realized outcome is acceptable to their quantifier on the
table of their unilateral deviations. With max quantifiers and scalar
outcomes this is exactly the classical Nash condition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .budget import check_budget
from .core import Outcome, OutcomeTable, Quantifier
from .errors import StructuralError

PureProfile = tuple[int, ...]


def _default_players(n: int) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in range(n))


def default_move_labels(count: int) -> tuple[str, ...]:
    return tuple(f"m{i}" for i in range(count))


@dataclass(frozen=True)
class SimultaneousGame:
    """Finite simultaneous game with per-player outcome functions and
    quantifiers. ``single_outcome_space`` flags that all outcome functions
    coincide (as normal forms of sequential games do)."""

    moves: tuple[tuple[str, ...], ...]
    outcome_fns: tuple[Callable, ...]
    quantifiers: tuple[Quantifier, ...]
    players: tuple[str, ...] = ()
    single_outcome_space: bool = False

    def __post_init__(self):
        if not self.moves:
            raise StructuralError("a game needs at least one player")
        for i, ms in enumerate(self.moves):
            if not ms:
                raise StructuralError(f"player {i} has an empty move set")
        n = len(self.moves)
        if len(self.outcome_fns) != n or len(self.quantifiers) != n:
            raise StructuralError(
                "moves, outcome_fns and quantifiers must have one entry per player"
            )
        if not self.players:
            object.__setattr__(self, "players", _default_players(n))
        elif len(self.players) != n:
            raise StructuralError("player labels must match the number of players")

    @classmethod
    def from_tensors(cls, move_counts: Sequence[int],
                     payoffs: Sequence[Sequence[float]],
                     quantifiers: Sequence[Quantifier],
                     moves: Sequence[Sequence[str]] | None = None,
                     players: Sequence[str] | None = None,
                     single_outcome_space: bool = False) -> "SimultaneousGame":
        """Build a game from dense row-major payoff tensors, one per player
        (the first player's move varies slowest)."""
        counts = tuple(int(c) for c in move_counts)
        size = 1
        for c in counts:
            size *= c
        fns = []
        for i, tensor in enumerate(payoffs):
            flat = tuple(tensor)
            if len(flat) != size:
                raise StructuralError(
                    f"payoff tensor for player {i} has {len(flat)} entries, "
                    f"expected {size}"
                )
            fns.append(_tensor_fn(flat, counts))
        if len(fns) != len(counts):
            raise StructuralError("need one payoff tensor per player")
        if moves is None:
            moves = tuple(default_move_labels(c) for c in counts)
        else:
            moves = tuple(tuple(ms) for ms in moves)
            for ms, c in zip(moves, counts):
                if len(ms) != c:
                    raise StructuralError("move labels must match move counts")
        return cls(moves=moves, outcome_fns=tuple(fns),
                   quantifiers=tuple(quantifiers),
                   players=tuple(players) if players else (),
                   single_outcome_space=single_outcome_space)

    @property
    def num_players(self) -> int:
        return len(self.moves)

    @property
    def move_counts(self) -> tuple[int, ...]:
        return tuple(len(ms) for ms in self.moves)

    def profile_count(self) -> int:
        n = 1
        for c in self.move_counts:
            n *= c
        return n

    def profiles(self):
        """All pure profiles in lexicographic order."""
        return itertools.product(*(range(c) for c in self.move_counts))

    def outcome(self, i: int, profile: PureProfile) -> Outcome:
        return self.outcome_fns[i](tuple(profile))

    def validate_profile(self, profile: Sequence[int]) -> PureProfile:
        profile = tuple(profile)
        if len(profile) != self.num_players:
            raise StructuralError(
                f"profile has {len(profile)} moves for {self.num_players} players"
            )
        for i, (m, c) in enumerate(zip(profile, self.move_counts)):
            if not 0 <= m < c:
                raise StructuralError(f"move {m} invalid for player {i} (size {c})")
        return profile


def _tensor_fn(flat: tuple, counts: tuple[int, ...]) -> Callable:
    strides = []
    acc = 1
    for c in reversed(counts):
        strides.append(acc)
        acc *= c
    strides = tuple(reversed(strides))

    def fn(profile: PureProfile):
        idx = 0
        for m, s in zip(profile, strides):
            idx += m * s
        return flat[idx]

    return fn


def unilateral_map(g: SimultaneousGame, i: int, profile: PureProfile) -> OutcomeTable:
    """Table of player i's outcomes under unilateral deviations from
    ``profile``; the entry at the profile's own move is the realized outcome."""
    profile = g.validate_profile(profile)
    entries = []
    for x in range(g.move_counts[i]):
        deviated = profile[:i] + (x,) + profile[i + 1:]
        entries.append(g.outcome(i, deviated))
    return OutcomeTable(entries)


def is_generalised_nash(g: SimultaneousGame, profile: PureProfile,
                        tol: float = 0.0) -> bool:
    """True iff every player's realized outcome is acceptable on their
    unilateral deviation table."""
    profile = g.validate_profile(profile)
    for i in range(g.num_players):
        table = unilateral_map(g, i, profile)
        if not g.quantifiers[i].contains(table, table[profile[i]], tol):
            return False
    return True


def best_response_set(g: SimultaneousGame, profile: PureProfile,
                      tol: float = 0.0,
                      budget: int | None = None) -> list[PureProfile]:
    """All profiles whose per-player moves are acceptable responses to
    ``profile``. Only coordinate i is constrained by player i's condition, so
    the set is a product of per-player acceptable move sets; it is returned
    in lexicographic order."""
    profile = g.validate_profile(profile)
    check_budget(g.profile_count(), budget, "profiles")
    acceptable = []
    for i in range(g.num_players):
        table = unilateral_map(g, i, profile)
        phi = g.quantifiers[i]
        acceptable.append(
            [x for x in range(g.move_counts[i])
             if phi.contains(table, table[x], tol)]
        )
    return [tuple(choice) for choice in itertools.product(*acceptable)]


def enumerate_pure_equilibria(g: SimultaneousGame, tol: float = 0.0,
                              budget: int | None = None) -> list[PureProfile]:
    """All pure equilibria, in lexicographic order."""
    check_budget(g.profile_count(), budget, "profiles")
    return [p for p in g.profiles() if is_generalised_nash(g, p, tol)]
