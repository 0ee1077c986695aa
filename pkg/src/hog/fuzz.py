"""Seeded random game generation and theorem certification.

Each family draws games from a fixed-shape distribution, runs the relevant
certification, and shrinks any failing game before reporting it. All
randomness flows from an explicit seed; the certifications exercise the
package's own checkers, so a failure means either a checker bug or a genuine
counterexample to a theorem (the latter should never happen).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import minimax, normalform, sequential
from .budget import resolve_budget
from .errors import BudgetExceededError
from .core import (argmax_selection, argmin_selection, average_quantifier,
                   max_quantifier, min_quantifier, nearest_mean_selection)
from .minimax import TwoPlayerStage
from .sequential import SequentialGame
from .simultaneous import SimultaneousGame

FAMILIES = ("seq", "normal-form", "bbc")

_SEQ_KINDS = ("max", "min", "average")


def _round_pair(kind: str):
    if kind == "max":
        return max_quantifier(), argmax_selection()
    if kind == "min":
        return min_quantifier(), argmin_selection()
    if kind == "average":
        return average_quantifier(), nearest_mean_selection()
    raise ValueError(f"unknown round kind {kind!r}")


def random_sequential_game(rng: random.Random, max_rounds: int = 4,
                           max_moves: int = 3, min_moves: int = 2,
                           payoff_range: tuple[int, int] = (-9, 9),
                           kinds=_SEQ_KINDS) -> SequentialGame:
    n = rng.randint(1, max_rounds)
    counts = [rng.randint(min_moves, max_moves) for _ in range(n)]
    size = 1
    for c in counts:
        size *= c
    lo, hi = payoff_range
    tensor = [rng.randint(lo, hi) for _ in range(size)]
    quantifiers, selections = [], []
    for _ in range(n):
        phi, eps = _round_pair(rng.choice(kinds))
        quantifiers.append(phi)
        selections.append(eps)
    return SequentialGame.from_tensor(counts, tensor, quantifiers, selections)


def random_max_game(rng: random.Random, players: int = 2, max_moves: int = 4,
                    min_moves: int = 2,
                    payoff_range: tuple[int, int] = (-9, 9)) -> SimultaneousGame:
    """Random finite game with max quantifiers and integer payoffs."""
    counts = [rng.randint(min_moves, max_moves) for _ in range(players)]
    size = 1
    for c in counts:
        size *= c
    lo, hi = payoff_range
    tensors = [[rng.randint(lo, hi) for _ in range(size)] for _ in range(players)]
    return SimultaneousGame.from_tensors(
        counts, tensors, [max_quantifier() for _ in range(players)]
    )


def random_stage(rng: random.Random, max_moves: int = 4, min_moves: int = 2,
                 payoff_range: tuple[int, int] = (-9, 9)) -> TwoPlayerStage:
    """Random stage with max/min quantifiers and argmax/argmin selections."""
    nx = rng.randint(min_moves, max_moves)
    ny = rng.randint(min_moves, max_moves)
    lo, hi = payoff_range
    tensor = [rng.randint(lo, hi) for _ in range(nx * ny)]
    return TwoPlayerStage.from_tensor(
        (nx, ny), tensor,
        (max_quantifier(), min_quantifier()),
        (argmax_selection(), argmin_selection()),
    )


def certify_sequential(g: SequentialGame, budget: int | None = None) -> bool:
    """The constructive solution is consistent and optimal: the iterated
    product's play equals the strategic play of the computed strategy, and
    the strategy passes the optimality check at tolerance 0."""
    play = sequential.compute_optimal_play(g, budget)
    strategy = sequential.compute_optimal_strategy(g, budget)
    if sequential.strategic_play(g, strategy) != play:
        return False
    return sequential.is_optimal_strategy(g, strategy, 0.0, budget)


def certify_normal_form(g: SequentialGame, budget: int | None = None) -> bool:
    """The computed optimal strategy is an equilibrium of the normal form."""
    strategy = sequential.compute_optimal_strategy(g, budget)
    return normalform.check_soundness(g, strategy, 0.0, budget)


def certify_stage(stage: TwoPlayerStage, budget: int | None = None) -> bool:
    """The independently-computed pair is reply-robust at tolerance 0."""
    pair = minimax.bbc(stage)
    return minimax.is_psi_phi_profile(stage, pair, 0.0, budget)


def shrink_sequential(g: SequentialGame, failing, budget=None) -> SequentialGame:
    """Greedy shrink: drop rounds (fixing their move to 0), drop moves, zero
    payoffs, as long as the certification keeps failing."""
    current = g
    changed = True
    while changed:
        changed = False
        # Drop a whole round by pinning it to move 0.
        for r in range(current.rounds - 1, -1, -1):
            if current.rounds == 1:
                break
            cand = _drop_round(current, r)
            if not failing(cand):
                continue
            current, changed = cand, True
            break
        if changed:
            continue
        # Drop the last move of some round.
        for r in range(current.rounds):
            if current.move_counts[r] <= 1:
                continue
            cand = _drop_move(current, r)
            if not failing(cand):
                continue
            current, changed = cand, True
            break
        if changed:
            continue
        # Zero payoff entries.
        counts = current.move_counts
        tensor = [current.outcome(p) for p in sequential.histories(counts)]
        for idx, value in enumerate(tensor):
            if value == 0:
                continue
            cand_tensor = list(tensor)
            cand_tensor[idx] = 0
            cand = SequentialGame.from_tensor(
                counts, cand_tensor, current.quantifiers, current.selections
            )
            if failing(cand):
                current, changed = cand, True
                break
    return current


def _drop_round(g: SequentialGame, r: int) -> SequentialGame:
    counts = g.move_counts
    new_counts = counts[:r] + counts[r + 1:]
    tensor = []
    for play in sequential.histories(new_counts):
        full = play[:r] + (0,) + play[r:]
        tensor.append(g.outcome(full))
    return SequentialGame.from_tensor(
        new_counts, tensor,
        g.quantifiers[:r] + g.quantifiers[r + 1:],
        g.selections[:r] + g.selections[r + 1:],
    )


def _drop_move(g: SequentialGame, r: int) -> SequentialGame:
    counts = g.move_counts
    new_counts = counts[:r] + (counts[r] - 1,) + counts[r + 1:]
    tensor = [g.outcome(play) for play in sequential.histories(new_counts)]
    return SequentialGame.from_tensor(
        new_counts, tensor, g.quantifiers, g.selections
    )


def shrink_stage(stage: TwoPlayerStage, failing) -> TwoPlayerStage:
    current = stage
    changed = True
    while changed:
        changed = False
        nx, ny = current.shape
        if nx > 1:
            cand = _stage_from_grid(current, [row for row in current.payoff[:-1]])
            if failing(cand):
                current, changed = cand, True
                continue
        if ny > 1:
            cand = _stage_from_grid(current, [row[:-1] for row in current.payoff])
            if failing(cand):
                current, changed = cand, True
                continue
        for x in range(current.shape[0]):
            for y in range(current.shape[1]):
                if current.payoff[x][y] == 0:
                    continue
                grid = [list(row) for row in current.payoff]
                grid[x][y] = 0
                cand = _stage_from_grid(current, grid)
                if failing(cand):
                    current, changed = cand, True
                    break
            if changed:
                break
    return current


def _stage_from_grid(stage: TwoPlayerStage, grid) -> TwoPlayerStage:
    nx, ny = len(grid), len(grid[0])
    flat = [v for row in grid for v in row]
    return TwoPlayerStage.from_tensor(
        (nx, ny), flat, stage.quantifiers, stage.selections
    )


@dataclass
class FuzzFailure:
    family: str
    index: int
    seed: int
    game: SequentialGame | TwoPlayerStage


@dataclass
class FuzzResult:
    seed: int
    count: int
    families: tuple[str, ...]
    checked: int = 0
    failures: list[FuzzFailure] = field(default_factory=list)
    # Every generated game, for corpus export: (family, index, game).
    corpus: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


_NF_WORST_CAP = 10_000_000


def _normal_form_worst_case(max_rounds: int, max_moves: int) -> int:
    """Largest normal-form profile space the shape can produce."""
    histories = sum(max_moves ** i for i in range(max_rounds))
    return max_moves ** histories


def run_fuzz(seed: int, count: int, families=FAMILIES, max_rounds: int = 4,
             max_moves: int = 3, payoff_range: tuple[int, int] = (-9, 9),
             budget: int | None = None, stop_on_failure: bool = True) -> FuzzResult:
    """Certify ``count`` random games per family. Failing games are shrunk
    before being recorded.

    The normal-form family caps rounds at 3 and, when no budget is given,
    raises the enumeration budget to its worst-case profile space (refusing
    shapes past an absolute cap), so that the advertised shape never trips
    the default guard mid-run.
    """
    families = tuple(families)
    result = FuzzResult(seed, count, families)
    nf_rounds = min(max_rounds, 3)
    nf_budget = budget
    if "normal-form" in families and budget is None:
        worst = _normal_form_worst_case(nf_rounds, max_moves)
        if worst > _NF_WORST_CAP:
            raise BudgetExceededError(worst, _NF_WORST_CAP,
                                      "worst-case normal-form profiles")
        nf_budget = max(resolve_budget(None), worst)
    for family in families:
        # Hashing strings is salted per process; derive integer seeds.
        rng = random.Random(seed * 7919 + FAMILIES.index(family))
        for index in range(count):
            if family == "seq":
                game = random_sequential_game(
                    rng, max_rounds=max_rounds, max_moves=max_moves,
                    payoff_range=payoff_range)
                check = certify_sequential
                ok = check(game, budget)
                shrinker, check_budget_arg = shrink_sequential, budget
            elif family == "normal-form":
                game = random_sequential_game(
                    rng, max_rounds=nf_rounds, max_moves=max_moves,
                    payoff_range=payoff_range)
                check = certify_normal_form
                ok = check(game, nf_budget)
                shrinker, check_budget_arg = shrink_sequential, nf_budget
            elif family == "bbc":
                game = random_stage(rng, max_moves=max_moves,
                                    payoff_range=payoff_range)
                check = certify_stage
                ok = check(game, budget)
                shrinker, check_budget_arg = shrink_stage, budget
            else:
                raise ValueError(f"unknown family {family!r}")
            result.corpus.append((family, index, game))
            result.checked += 1
            if ok:
                continue

            def failing(g, _check=check, _budget=check_budget_arg):
                return not _check(g, _budget)

            small = shrinker(game, failing)
            result.failures.append(FuzzFailure(family, index, seed, small))
            if stop_on_failure:
                return result
    return result
