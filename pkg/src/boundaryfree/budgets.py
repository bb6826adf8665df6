"""Computation budgets.

Word-problem closures over a plain automaton terminate on their own
(sections never grow), so the caps below only bite for hand-written
recursive definitions whose sections are full words.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Budgets:
    closure_cap: int = 200_000      # nodes explored per section closure
    word_len_cap: int = 10_000      # letters per section word (recursive bases)
    family_bound: int = 20          # instantiations of a relator family
    brute_max_len: int = 5          # word length for the rigid-stabilizer search
    perm_level_max: int = 12        # deepest level for explicit permutations
    element_cap: int = 4096         # enumerated elements for finiteness checks

    def __post_init__(self):
        for name in ("closure_cap", "word_len_cap", "family_bound",
                     "brute_max_len", "perm_level_max", "element_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")


DEFAULT = Budgets()
