"""Finite invertible Mealy automata over a small alphabet.

The central family is the 5832 three-state binary automata, numbered by the
lexicographic position of their defining tuple: with wreath recursion

    q_i = (a_{i1}, a_{i2}) sigma^{a_{i3}},   i = 1, 2, 3,

the automaton gets number

    a11 + 3*a12 + 9*a21 + 27*a22 + 81*a31 + 243*a32
        + 729*(a13 + 2*a23 + 4*a33) + 1.

The algebra here (inversion, duality, minimization) works for any finite
alphabet; the symmetry and numbering machinery is specific to the binary
three-state family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MIN_NUMBER = 1
MAX_NUMBER = 5832


def _default_names(n: int) -> tuple[str, ...]:
    return tuple(chr(ord("a") + i) if i < 26 else f"s{i}" for i in range(n))


@dataclass(frozen=True)
class MealyAutomaton:
    """A transducer: ``transition[q][x]`` is the next state, ``output[q][x]``
    the emitted letter."""

    transition: tuple[tuple[int, ...], ...]
    output: tuple[tuple[int, ...], ...]
    state_names: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.transition)
        if n == 0 or len(self.output) != n:
            raise ValueError("transition and output must cover the same states")
        d = len(self.transition[0])
        for row_t, row_o in zip(self.transition, self.output):
            if len(row_t) != d or len(row_o) != d:
                raise ValueError("transition and output must be total")
            if any(not (0 <= q < n) for q in row_t):
                raise ValueError("transition target out of range")
            if any(not (0 <= x < d) for x in row_o):
                raise ValueError("output letter out of range")
        if not self.state_names:
            object.__setattr__(self, "state_names", _default_names(n))
        elif len(self.state_names) != n:
            raise ValueError("state_names length mismatch")

    @property
    def state_count(self) -> int:
        return len(self.transition)

    @property
    def alphabet_size(self) -> int:
        return len(self.transition[0])

    def __repr__(self):
        return f"MealyAutomaton({automaton_text(self)!r})"


def automaton_from_number(n: int) -> MealyAutomaton:
    """Decode an automaton number (1..5832) into its 3-state automaton."""
    if not (MIN_NUMBER <= n <= MAX_NUMBER):
        raise ValueError(f"automaton number {n} out of range 1..{MAX_NUMBER}")
    m = n - 1
    perm_part, section_part = divmod(m, 729)
    # base-3 digits, least significant first: a11, a12, a21, a22, a31, a32
    digits = []
    r = section_part
    for _ in range(6):
        digits.append(r % 3)
        r //= 3
    a11, a12, a21, a22, a31, a32 = digits
    a13 = perm_part & 1
    a23 = (perm_part >> 1) & 1
    a33 = (perm_part >> 2) & 1
    transition = ((a11, a12), (a21, a22), (a31, a32))
    output = tuple(((0, 1) if e == 0 else (1, 0)) for e in (a13, a23, a33))
    return MealyAutomaton(transition, output)


def number_of(aut: MealyAutomaton) -> int:
    """Inverse of automaton_from_number; requires 3 states over 2 letters."""
    if aut.state_count != 3 or aut.alphabet_size != 2:
        raise ValueError("numbering is defined for 3-state binary automata only")
    (a11, a12), (a21, a22), (a31, a32) = aut.transition
    perms = []
    for row in aut.output:
        if row == (0, 1):
            perms.append(0)
        elif row == (1, 0):
            perms.append(1)
        else:
            raise ValueError("output row is not a permutation of {0,1}")
    a13, a23, a33 = perms
    return (a11 + 3 * a12 + 9 * a21 + 27 * a22 + 81 * a31 + 243 * a32
            + 729 * (a13 + 2 * a23 + 4 * a33) + 1)


def is_invertible(aut: MealyAutomaton) -> bool:
    """True iff every state's output map permutes the alphabet."""
    full = set(range(aut.alphabet_size))
    return all(set(row) == full for row in aut.output)


def inverse_automaton(aut: MealyAutomaton) -> MealyAutomaton:
    """The automaton whose state q acts as the inverse of aut's state q."""
    if not is_invertible(aut):
        raise ValueError("automaton is not invertible")
    n, d = aut.state_count, aut.alphabet_size
    transition = [[0] * d for _ in range(n)]
    output = [[0] * d for _ in range(n)]
    for q in range(n):
        for x in range(d):
            y = aut.output[q][x]
            transition[q][y] = aut.transition[q][x]
            output[q][y] = x
    return MealyAutomaton(tuple(map(tuple, transition)),
                          tuple(map(tuple, output)), aut.state_names)


def dual_automaton(aut: MealyAutomaton) -> MealyAutomaton:
    """Exchange the roles of states and letters."""
    n, d = aut.state_count, aut.alphabet_size
    transition = tuple(tuple(aut.output[q][x] for q in range(n)) for x in range(d))
    output = tuple(tuple(aut.transition[q][x] for q in range(n)) for x in range(d))
    return MealyAutomaton(transition, output)


def is_bireversible(aut: MealyAutomaton) -> bool:
    """Invertible, with invertible dual and invertible dual of the inverse."""
    if not is_invertible(aut):
        return False
    if not is_invertible(dual_automaton(aut)):
        return False
    return is_invertible(dual_automaton(inverse_automaton(aut)))


def minimize(aut: MealyAutomaton) -> MealyAutomaton:
    """Merge states inducing identical transformations.

    Partition refinement: start from the output rows, split by transition
    target blocks until stable.  Blocks are ordered by their least original
    state index, and the quotient state keeps that least state's name.
    """
    n = aut.state_count
    block_of = {}
    sig_to_block: dict[tuple, int] = {}
    for q in range(n):
        sig = aut.output[q]
        block_of[q] = sig_to_block.setdefault(sig, len(sig_to_block))
    while True:
        sig_to_block = {}
        new_block_of = {}
        for q in range(n):
            sig = (block_of[q], tuple(block_of[t] for t in aut.transition[q]))
            new_block_of[q] = sig_to_block.setdefault(sig, len(sig_to_block))
        if len(sig_to_block) == len(set(block_of.values())):
            block_of = new_block_of
            break
        block_of = new_block_of
    reps = sorted(set(block_of.values()),
                  key=lambda b: min(q for q in range(n) if block_of[q] == b))
    renumber = {b: i for i, b in enumerate(reps)}
    members = {renumber[b]: min(q for q in range(n) if block_of[q] == b) for b in reps}
    k = len(reps)
    transition = tuple(
        tuple(renumber[block_of[aut.transition[members[i]][x]]]
              for x in range(aut.alphabet_size))
        for i in range(k))
    output = tuple(tuple(aut.output[members[i]]) for i in range(k))
    names = tuple(aut.state_names[members[i]] for i in range(k))
    return MealyAutomaton(transition, output, names)


@dataclass(frozen=True)
class SymmetryOp:
    """Relabel states, optionally swap the two alphabet letters, optionally
    pass to the inverse automaton.  These operations commute pairwise, so the
    triples compose componentwise."""

    state_perm: tuple[int, ...]
    letter_swap: bool = False
    invert: bool = False

    def compose(self, other: "SymmetryOp") -> "SymmetryOp":
        """The operation 'self then other'."""
        if len(self.state_perm) != len(other.state_perm):
            raise ValueError("symmetry degree mismatch")
        perm = tuple(other.state_perm[self.state_perm[q]]
                     for q in range(len(self.state_perm)))
        return SymmetryOp(perm,
                          self.letter_swap ^ other.letter_swap,
                          self.invert ^ other.invert)

    @staticmethod
    def identity(degree: int) -> "SymmetryOp":
        return SymmetryOp(tuple(range(degree)))


def all_symmetry_ops(degree: int) -> list[SymmetryOp]:
    return [SymmetryOp(perm, swap, inv)
            for perm in itertools.permutations(range(degree))
            for swap in (False, True)
            for inv in (False, True)]


def apply_symmetry(aut: MealyAutomaton, op: SymmetryOp) -> MealyAutomaton:
    if len(op.state_perm) != aut.state_count:
        raise ValueError("state permutation degree mismatch")
    if aut.alphabet_size != 2:
        raise ValueError("symmetry operations assume the binary alphabet")
    n = aut.state_count
    rho = op.state_perm
    transition = [[0, 0] for _ in range(n)]
    output = [[0, 0] for _ in range(n)]
    for q in range(n):
        for x in range(2):
            transition[rho[q]][x] = rho[aut.transition[q][x]]
            output[rho[q]][x] = aut.output[q][x]
    if op.letter_swap:
        transition = [[row[1], row[0]] for row in transition]
        output = [[row[1] ^ 1, row[0] ^ 1] for row in output]
    result = MealyAutomaton(tuple(map(tuple, transition)),
                            tuple(map(tuple, output)))
    if op.invert:
        result = inverse_automaton(result)
    return result


def _serialize(aut: MealyAutomaton) -> bytes:
    parts = [aut.state_count, aut.alphabet_size]
    for q in range(aut.state_count):
        for x in range(aut.alphabet_size):
            parts.append(aut.transition[q][x])
            parts.append(aut.output[q][x])
    return bytes(parts)


def canonical_key(aut: MealyAutomaton) -> bytes:
    """Least serialized form of the minimized automaton over its symmetry
    orbit.  Two automata share a key iff one's minimization can be carried to
    the other's by relabeling states, swapping letters, and/or inverting."""
    if not is_invertible(aut):
        raise ValueError("canonical_key requires an invertible automaton")
    m = minimize(aut)
    return min(_serialize(apply_symmetry(m, op))
               for op in all_symmetry_ops(m.state_count))


@lru_cache(maxsize=1)
def class_partition() -> dict[bytes, tuple[int, ...]]:
    """Partition all 5832 numbered automata by canonical key."""
    classes: dict[bytes, list[int]] = {}
    for n in range(MIN_NUMBER, MAX_NUMBER + 1):
        classes.setdefault(canonical_key(automaton_from_number(n)), []).append(n)
    return {key: tuple(ids) for key, ids in classes.items()}


def class_of(n: int) -> tuple[int, ...]:
    return class_partition()[canonical_key(automaton_from_number(n))]


def enumerate_class_representatives() -> list[int]:
    """Least id of every symmetry class that meets the range 1..5103.

    The excluded classes are exactly the boundary family of automata all of
    whose states swap every letter (numbers 5104..5832); every other class
    contains an automaton numbered at most 5103.
    """
    reps = [ids[0] for ids in class_partition().values() if ids[0] <= 5103]
    return sorted(reps)


# Text form, e.g. "a=(c,b)(0,1), b=(a,a)(0,1), c=(a,a)".

def automaton_text(aut: MealyAutomaton) -> str:
    entries = []
    for q in range(aut.state_count):
        secs = ",".join(aut.state_names[t] for t in aut.transition[q])
        root = ""
        if aut.alphabet_size == 2 and aut.output[q] == (1, 0):
            root = "(0,1)"
        elif aut.output[q] != tuple(range(aut.alphabet_size)):
            raise ValueError("text form only covers binary automata")
        entries.append(f"{aut.state_names[q]}=({secs}){root}")
    return ", ".join(entries)


def parse_automaton(text: str) -> MealyAutomaton:
    """Parse the wreath-recursion text form of a binary Mealy automaton."""
    from .action import parse_recursion_entries  # shared splitter

    entries = parse_recursion_entries(text)
    names = [name for name, _, _ in entries]
    index = {name: i for i, name in enumerate(names)}
    if len(index) != len(names):
        raise ValueError("duplicate state name")
    transition = []
    output = []
    for name, secs, root in entries:
        if len(secs) != 2:
            raise ValueError(f"state {name}: expected two sections")
        row = []
        for sec in secs:
            if len(sec) != 1 or sec[0][1] != 1:
                raise ValueError(f"state {name}: sections must be single states")
            sym = sec[0][0]
            if sym not in index:
                raise ValueError(f"state {name}: unknown section state {sym}")
            row.append(index[sym])
        transition.append(tuple(row))
        output.append((1, 0) if root else (0, 1))
    return MealyAutomaton(tuple(transition), tuple(output), tuple(names))
