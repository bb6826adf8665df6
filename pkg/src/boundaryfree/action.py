"""Automorphisms of the binary rooted tree given by automaton words.

Vertices are finite 0/1 words.  The composition convention is left to
right: in a product ``g*h`` the factor ``g`` acts first, so
``act(g*h, v) == act(h, act(g, v))``.  Sections follow the product rule
``(g*h)|_v = g|_v * h|_{g(v)}``.

Elements are :class:`GroupWord` values: freely reduced words over the
states of a :class:`RecursiveBase`.  A base built from a Mealy automaton
has single-letter sections, so sections of a word never get longer than
the word and every closure below is finite.  Hand-written recursive
definitions may have multi-letter sections; those computations run under
the budgets in :mod:`boundaryfree.budgets`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import words as W
from .budgets import DEFAULT, Budgets
from .errors import BudgetExceededError, SingularSystemError
from .mealy import MealyAutomaton

IDENTITY = 0
SWAP = 1

# letters of a word over a base: (state index, +1 | -1)
BLetter = tuple[int, int]
BWord = tuple[BLetter, ...]


def _reduce(letters: Iterable[BLetter]) -> BWord:
    out: list[BLetter] = []
    for idx, exp in letters:
        if out and out[-1][0] == idx and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((idx, exp))
    return tuple(out)


def _invert(word: BWord) -> BWord:
    return tuple((idx, -exp) for idx, exp in reversed(word))


class RecursiveBase:
    """Named tree automorphisms defined by mutual wreath recursion.

    ``rows[i] = (sec0, sec1, root)`` where the sections are words over the
    base's own states and ``root`` says whether state i swaps the two
    top-level subtrees.  Identity comparison is used for caching; merge two
    bases with :func:`merge_bases` before comparing words across them.
    """

    def __init__(self, names: Sequence[str],
                 rows: Sequence[tuple[BWord, BWord, int]]):
        if len(names) != len(rows):
            raise ValueError("names/rows length mismatch")
        self.names = tuple(names)
        self.rows = tuple((tuple(s0), tuple(s1), root) for s0, s1, root in rows)
        self.index = {name: i for i, name in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate state name")
        for s0, s1, root in self.rows:
            if root not in (IDENTITY, SWAP):
                raise ValueError("root permutation must be 0 or 1")
            for sec in (s0, s1):
                for idx, exp in sec:
                    if not 0 <= idx < len(self.names) or exp not in (1, -1):
                        raise ValueError("section letter out of range")
        # single-letter sections mean sections of a word never grow
        self.shrinking = all(len(s0) <= 1 and len(s1) <= 1
                             for s0, s1, _ in self.rows)
        self._identity_words: set[BWord] = set()
        self._nonidentity_words: set[BWord] = set()

    @staticmethod
    def from_mealy(aut: MealyAutomaton) -> "RecursiveBase":
        if aut.alphabet_size != 2:
            raise ValueError("tree actions are binary only")
        rows = []
        for q in range(aut.state_count):
            root = SWAP if aut.output[q] == (1, 0) else IDENTITY
            if aut.output[q] not in ((0, 1), (1, 0)):
                raise ValueError("state output is not a permutation")
            rows.append(((((aut.transition[q][0], 1),)),
                         (((aut.transition[q][1], 1),)), root))
        return RecursiveBase(aut.state_names, rows)

    def state(self, name: str) -> "GroupWord":
        return GroupWord(self, ((self.index[name], 1),))

    def states(self) -> list["GroupWord"]:
        return [GroupWord(self, ((i, 1),)) for i in range(len(self.names))]

    def identity(self) -> "GroupWord":
        return GroupWord(self, ())

    def word(self, text: str) -> "GroupWord":
        """Parse CLI word syntax over this base's state names."""
        return self.from_symbolic(W.parse_word(text))

    def from_symbolic(self, word: W.Word) -> "GroupWord":
        letters = []
        for sym, exp in word:
            if sym not in self.index:
                raise ValueError(f"unknown state {sym!r}")
            letters.append((self.index[sym], exp))
        return GroupWord(self, _reduce(letters))

    def to_symbolic(self, word: BWord) -> W.Word:
        return tuple((self.names[i], e) for i, e in word)

    def __repr__(self):
        return f"RecursiveBase({recursion_text(self)!r})"


_MEALY_BASES: dict[MealyAutomaton, RecursiveBase] = {}


def base_of(aut: MealyAutomaton) -> RecursiveBase:
    """Shared per-automaton base so word-problem caches accumulate."""
    base = _MEALY_BASES.get(aut)
    if base is None:
        base = _MEALY_BASES[aut] = RecursiveBase.from_mealy(aut)
    return base


@dataclass(frozen=True)
class GroupWord:
    base: RecursiveBase = field(repr=False)
    letters: BWord = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if other.base is not self.base:
            raise ValueError("mixed bases; use merge_bases first")
        return GroupWord(self.base, self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(self.base, _invert(self.letters))

    def __pow__(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.base.identity()
        for _ in range(n):
            out = out * self
        return out

    def conj(self, by: "GroupWord") -> "GroupWord":
        return by.inverse() * self * by

    def is_trivial_word(self) -> bool:
        return not self.letters

    def text(self) -> str:
        return W.word_text(self.base.to_symbolic(self.letters))

    def __repr__(self):
        return f"<{self.text()}>"


def _letter_root(base: RecursiveBase, letter: BLetter) -> int:
    return base.rows[letter[0]][2]


def _letter_section(base: RecursiveBase, letter: BLetter, x: int) -> BWord:
    """Section of a signed letter at top-level vertex x."""
    idx, exp = letter
    s0, s1, root = base.rows[idx]
    if exp == 1:
        return s0 if x == 0 else s1
    # (q^-1)|_x = (q|_{q^-1(x)})^-1 and q^-1 moves x by the same root swap
    y = x ^ root
    return _invert(s0 if y == 0 else s1)


def word_root(base: RecursiveBase, letters: BWord) -> int:
    r = IDENTITY
    for letter in letters:
        r ^= _letter_root(base, letter)
    return r


def _section_once(base: RecursiveBase, letters: BWord, x: int,
                  budgets: Budgets = DEFAULT) -> BWord:
    out: list[BLetter] = []
    cur = x
    for letter in letters:
        out.extend(_letter_section(base, letter, cur))
        cur ^= _letter_root(base, letter)
    word = _reduce(out)
    if not base.shrinking and len(word) > budgets.word_len_cap:
        raise BudgetExceededError("word_len_cap", budgets.word_len_cap,
                                  "computing a section")
    return word


def act(g: GroupWord, vertex: str | Sequence[int]) -> str:
    """Image of a finite 0/1 word under the automorphism g."""
    bits = tuple(int(ch) for ch in vertex)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("vertex must be a word over {0,1}")
    base = g.base
    out: list[int] = []
    letters = g.letters
    for i, b in enumerate(bits):
        cur = b
        nxt: list[BLetter] = []
        for letter in letters:
            nxt.extend(_letter_section(base, letter, cur))
            cur ^= _letter_root(base, letter)
        out.append(cur)
        letters = _reduce(nxt)
    return "".join(map(str, out))


def wreath_decompose(g: GroupWord,
                     budgets: Budgets = DEFAULT) -> tuple[GroupWord, GroupWord, int]:
    """(g|_0, g|_1, root swap) via the section product rule."""
    base = g.base
    return (GroupWord(base, _section_once(base, g.letters, 0, budgets)),
            GroupWord(base, _section_once(base, g.letters, 1, budgets)),
            word_root(base, g.letters))


def section(g: GroupWord, vertex: str | Sequence[int],
            budgets: Budgets = DEFAULT) -> GroupWord:
    """Iterated section g|_v."""
    letters = g.letters
    for ch in vertex:
        b = int(ch)
        if b not in (0, 1):
            raise ValueError("vertex must be a word over {0,1}")
        letters = _section_once(g.base, letters, b, budgets)
    return GroupWord(g.base, letters)


def is_identity(g: GroupWord, budgets: Budgets = DEFAULT) -> bool:
    """Decide whether g acts trivially on the whole tree.

    Explores the closure of g under sections, declaring failure at the first
    word with a nontrivial root swap.  Results are cached on the base: a
    successful closure proves every word in it trivial, a failure marks the
    path from g down to the offending section.
    """
    base = g.base
    start = g.letters
    if not start:
        return True
    true_cache = base._identity_words
    false_cache = base._nonidentity_words
    if start in true_cache:
        return True
    if start in false_cache:
        return False
    seen: set[BWord] = {start}
    parent: dict[BWord, BWord] = {}
    stack = [start]

    def fail(bad: BWord) -> bool:
        w: BWord | None = bad
        while w is not None:
            false_cache.add(w)
            w = parent.get(w)
        false_cache.add(start)
        return False

    while stack:
        w = stack.pop()
        if w in false_cache:
            return fail(w)
        if word_root(base, w):
            return fail(w)
        for x in (0, 1):
            child = _section_once(base, w, x, budgets)
            if not child or child in seen or child in true_cache:
                continue
            if len(seen) >= budgets.closure_cap:
                raise BudgetExceededError("closure_cap", budgets.closure_cap,
                                          "deciding triviality")
            seen.add(child)
            parent[child] = w
            stack.append(child)
    true_cache.update(seen)
    return True


def merge_bases(b1: RecursiveBase, b2: RecursiveBase
                ) -> tuple[RecursiveBase, dict[int, int], dict[int, int]]:
    """Disjoint union of two bases; clashing names from b2 get a prime."""
    if b1 is b2:
        ident = {i: i for i in range(len(b1.names))}
        return b1, ident, ident
    names = list(b1.names)
    taken = set(names)
    map2 = {}
    for i, name in enumerate(b2.names):
        fresh = name
        while fresh in taken:
            fresh += "_"
        taken.add(fresh)
        names.append(fresh)
        map2[i] = len(names) - 1
    rows = list(b1.rows)
    for s0, s1, root in b2.rows:
        rows.append((tuple((map2[i], e) for i, e in s0),
                     tuple((map2[i], e) for i, e in s1), root))
    merged = RecursiveBase(names, rows)
    return merged, {i: i for i in range(len(b1.names))}, map2


def _rebase(g: GroupWord, base: RecursiveBase, mapping: dict[int, int]) -> GroupWord:
    return GroupWord(base, tuple((mapping[i], e) for i, e in g.letters))


def equal(g: GroupWord, h: GroupWord, budgets: Budgets = DEFAULT) -> bool:
    """Semantic equality of the two automorphisms."""
    if g.base is h.base:
        return is_identity(g * h.inverse(), budgets)
    merged, m1, m2 = merge_bases(g.base, h.base)
    return is_identity(_rebase(g, merged, m1) * _rebase(h, merged, m2).inverse(),
                       budgets)


def _closure(g: GroupWord, budgets: Budgets) -> tuple[list[BWord], dict[BWord, int],
                                                      list[tuple[int, int, int]]]:
    """Full section closure of g: word list, index, rows (t0, t1, root)."""
    base = g.base
    start = g.letters
    order: list[BWord] = [start]
    index: dict[BWord, int] = {start: 0}
    rows: list[tuple[int, int, int]] = []
    i = 0
    while i < len(order):
        w = order[i]
        children = []
        for x in (0, 1):
            child = _section_once(base, w, x, budgets)
            if child not in index:
                if len(order) >= budgets.closure_cap:
                    raise BudgetExceededError("closure_cap", budgets.closure_cap,
                                              "building a section closure")
                index[child] = len(order)
                order.append(child)
            children.append(index[child])
        rows.append((children[0], children[1], word_root(base, w)))
        i += 1
    return order, index, rows


def canonical_form(g: GroupWord, budgets: Budgets = DEFAULT) -> bytes:
    """Canonical bytes for the automorphism: its minimal section automaton,
    states numbered in breadth-first order from g.  Equal automorphisms give
    equal bytes."""
    order, _, rows = _closure(g, budgets)
    n = len(order)
    block = [rows[i][2] for i in range(n)]
    while True:
        sig_to_block: dict[tuple, int] = {}
        new = [0] * n
        for i in range(n):
            sig = (block[i], block[rows[i][0]], block[rows[i][1]])
            new[i] = sig_to_block.setdefault(sig, len(sig_to_block))
        if len(sig_to_block) == len(set(block)):
            block = new
            break
        block = new
    # BFS from g's block through the quotient automaton
    rep = {}
    for i in range(n):
        rep.setdefault(block[i], i)
    seen = {block[0]: 0}
    bfs = [block[0]]
    k = 0
    while k < len(bfs):
        b = bfs[k]
        i = rep[b]
        for t in (rows[i][0], rows[i][1]):
            if block[t] not in seen:
                seen[block[t]] = len(bfs)
                bfs.append(block[t])
        k += 1
    out = []
    for b in bfs:
        i = rep[b]
        out.extend((seen[block[rows[i][0]]], seen[block[rows[i][1]]], rows[i][2]))
    return bytes(out) if len(bfs) < 256 else repr(out).encode()


def perm_on_level(g: GroupWord, level: int,
                  budgets: Budgets = DEFAULT) -> tuple[int, ...]:
    """Permutation induced on the 2^level words of the given length, in
    lexicographic order (leftmost letter most significant)."""
    if level < 1:
        raise ValueError("level must be at least 1")
    if level > budgets.perm_level_max:
        raise BudgetExceededError("perm_level_max", budgets.perm_level_max,
                                  f"permutation on level {level}")
    base = g.base
    size = 1 << level
    result = [0] * size
    # depth-first over input prefixes, carrying image prefix and section word
    stack: list[tuple[int, int, int, BWord]] = [(0, 0, 0, g.letters)]
    while stack:
        depth, inp, img, letters = stack.pop()
        if depth == level:
            result[inp] = img
            continue
        if not letters:
            # identity below this vertex: the block maps straight across
            width = level - depth
            for v in range(1 << width):
                result[(inp << width) | v] = (img << width) | v
            continue
        for x in (0, 1):
            cur = x
            nxt: list[BLetter] = []
            for letter in letters:
                nxt.extend(_letter_section(base, letter, cur))
                cur ^= _letter_root(base, letter)
            stack.append((depth + 1, (inp << 1) | x, (img << 1) | cur,
                          _reduce(nxt)))
    return tuple(result)


def perm_order(perm: Sequence[int]) -> int:
    from math import lcm

    seen = [False] * len(perm)
    order = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        order = lcm(order, length)
    return order


def level_group_order(aut: MealyAutomaton, level: int,
                      budgets: Budgets = DEFAULT) -> tuple[int, int]:
    """Order of the permutation group the states generate on a level, and
    the order of its derived subgroup."""
    from sympy.combinatorics import Permutation, PermutationGroup

    base = base_of(aut)
    perms = [Permutation(list(perm_on_level(s, level, budgets)))
             for s in base.states()]
    group = PermutationGroup([p for p in perms] or
                             [Permutation(list(range(1 << level)))])
    derived = group.derived_subgroup()
    return int(group.order()), int(derived.order())


@dataclass(frozen=True)
class Transitivity:
    transitive: bool
    level: int            # first failing level, or deepest level checked
    certified_all: bool   # cycle certificate: transitive on every level

    @property
    def spherically_transitive(self) -> bool:
        return self.transitive and self.certified_all


def level_transitive_element(g: GroupWord, n_max: int = 64,
                             budgets: Budgets = DEFAULT) -> Transitivity:
    """Transitivity of the cyclic group <g> on tree levels.

    Uses the binary recursion: g is transitive on level n+1 iff it swaps the
    top subtrees and g|_0 * g|_1 is transitive on level n.  If the iteration
    revisits a word while every root along the chain swapped, the behaviour
    repeats forever and g is spherically transitive.
    """
    base = g.base
    h = g.letters
    seen: set[BWord] = set()
    level = 1
    while level <= n_max:
        if word_root(base, h) == IDENTITY:
            return Transitivity(False, level, False)
        if h in seen:
            return Transitivity(True, level, True)
        seen.add(h)
        h = _reduce(_section_once(base, h, 0, budgets)
                    + _section_once(base, h, 1, budgets))
        if not base.shrinking and len(h) > budgets.word_len_cap:
            raise BudgetExceededError("word_len_cap", budgets.word_len_cap,
                                      "transitivity recursion")
        level += 1
    return Transitivity(True, n_max, False)


@dataclass(frozen=True)
class OrderResult:
    kind: str                  # "finite" | "infinite" | "unknown"
    value: int | None = None   # the order when finite
    certificate: str = ""

    def __str__(self):
        if self.kind == "finite":
            return str(self.value)
        return "infinity" if self.kind == "infinite" else "unknown"


def element_order(g: GroupWord, budgets: Budgets = DEFAULT) -> OrderResult:
    """Order of the automorphism.

    Finite orders come from the stabilized order of the level permutations,
    confirmed by an exact triviality check.  Infinite orders are certified by
    a spherically transitive section of a small power at a fixed vertex.
    """
    if is_identity(g, budgets):
        return OrderResult("finite", 1)
    orders: list[int] = []
    for level in range(1, budgets.perm_level_max + 1):
        orders.append(perm_order(perm_on_level(g, level, budgets)))
        if len(orders) >= 3 and orders[-1] == orders[-2] == orders[-3]:
            candidate = orders[-1]
            if is_identity(g ** candidate, budgets):
                return OrderResult("finite", candidate)
    # look for a spherically transitive section of a small power
    for k in range(1, 5):
        h = g ** k
        if is_identity(h, budgets):
            continue
        for depth in range(0, 5):
            for v in range(1 << depth):
                vertex = format(v, f"0{depth}b") if depth else ""
                if act(h, vertex) != vertex:
                    continue
                result = level_transitive_element(section(h, vertex, budgets),
                                                  budgets=budgets)
                if result.spherically_transitive:
                    cert = (f"power {k} fixes vertex '{vertex or 'root'}' with "
                            f"spherically transitive section")
                    return OrderResult("infinite", None, cert)
    return OrderResult("unknown")


def fixed_count(g: GroupWord, level: int, budgets: Budgets = DEFAULT,
                _memo=None) -> int:
    """Number of words of the given length fixed by g (exact, by recursion)."""
    if _memo is None:
        _memo = {}
    letters = g.letters
    key = (letters, level)
    if key in _memo:
        return _memo[key]
    if level == 0:
        result = 1
    elif not letters:
        result = 1 << level
    elif word_root(g.base, letters):
        result = 0
    else:
        result = sum(
            fixed_count(GroupWord(g.base, _section_once(g.base, letters, x, budgets)),
                        level - 1, budgets, _memo)
            for x in (0, 1))
    _memo[key] = result
    return result


def fixed_point_measure(g: GroupWord, budgets: Budgets = DEFAULT) -> Fraction:
    """Exact measure of the set of boundary rays fixed by g.

    Builds the minimal automaton of g's section closure; with the identity
    class removed, the vector of measures satisfies m = M m + b where M
    counts fixed letters into non-identity classes and b those into the
    identity class (weight 1/2 each).  In a minimized automaton every closed
    class of non-identity states contains a state fixing no letter, so the
    spectral radius is below 1 and the system is uniquely solvable; a
    singular system is an internal error.
    """
    order, _, rows = _closure(g, budgets)
    n = len(order)
    # identity states: those from which no swapping state is reachable
    reaches_swap = [bool(rows[i][2]) for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if not reaches_swap[i] and (reaches_swap[rows[i][0]]
                                        or reaches_swap[rows[i][1]]):
                reaches_swap[i] = True
                changed = True
    if not reaches_swap[0]:
        return Fraction(1)
    live = [i for i in range(n) if reaches_swap[i]]
    pos = {s: k for k, s in enumerate(live)}
    m = len(live)
    half = Fraction(1, 2)
    matrix = [[Fraction(0)] * m for _ in range(m)]
    rhs = [Fraction(0)] * m
    for s in live:
        t0, t1, root = rows[s]
        if root == SWAP:
            continue  # fixes neither letter
        for t in (t0, t1):
            if reaches_swap[t]:
                matrix[pos[s]][pos[t]] += half
            else:
                rhs[pos[s]] += half
    # solve (I - M) x = b exactly
    a = [[(Fraction(1) if i == j else Fraction(0)) - matrix[i][j]
          for j in range(m)] + [rhs[i]] for i in range(m)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularSystemError(
                f"fixed-point system singular at column {col} "
                f"({m} states, word {g.text()!r})")
        a[col], a[pivot] = a[pivot], a[col]
        inv_p = 1 / a[col][col]
        a[col] = [v * inv_p for v in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return a[pos[0]][m]


@dataclass(frozen=True)
class SHProfile:
    """Level-by-level first-letter action of a spherically homogeneous
    automorphism."""

    prefix: tuple[int, ...]          # entry l: common root swap of level-l sections
    homogeneous_to: int | None       # depth verified, None when refuted
    refuted_at_level: int | None = None
    period: tuple[int, ...] | None = None

    @property
    def is_homogeneous(self) -> bool:
        return self.refuted_at_level is None


def _level_sets(g: GroupWord, depth: int, budgets: Budgets):
    """Distinct section words of g level by level, up to the given depth."""
    current = {g.letters}
    yield current
    base = g.base
    total = 1
    for _ in range(depth):
        nxt = set()
        for w in current:
            for x in (0, 1):
                nxt.add(_section_once(base, w, x, budgets))
        total += len(nxt)
        if total > budgets.closure_cap:
            raise BudgetExceededError("closure_cap", budgets.closure_cap,
                                      "enumerating level sections")
        current = nxt
        yield current


def sh_profile(g: GroupWord, depth: int, budgets: Budgets = DEFAULT) -> SHProfile:
    """Check spherical homogeneity to the given depth and read the profile."""
    base = g.base
    prefix: list[int] = []
    seen_sets: dict[frozenset, int] = {}
    period: tuple[int, ...] | None = None
    for level, level_words in enumerate(_level_sets(g, depth - 1, budgets)):
        roots = {word_root(base, w) for w in level_words}
        if len(roots) > 1:
            return SHProfile(tuple(prefix), None, refuted_at_level=level)
        prefix.append(roots.pop())
        key = frozenset(level_words)
        if period is None:
            if key in seen_sets:
                start = seen_sets[key]
                period = tuple(prefix[start:level])
            else:
                seen_sets[key] = level
    return SHProfile(tuple(prefix), depth, period=period)


@dataclass(frozen=True)
class DepthResult:
    found: bool
    depth: int | None
    searched_to: int


def finitary_depth(g: GroupWord, max_depth: int = 20,
                   budgets: Budgets = DEFAULT) -> DepthResult:
    """Least level at which every section of g is the identity."""
    for level, level_words in enumerate(_level_sets(g, max_depth, budgets)):
        if all(is_identity(GroupWord(g.base, w), budgets) for w in level_words):
            return DepthResult(True, level, max_depth)
    return DepthResult(False, None, max_depth)


def all_swap_base() -> RecursiveBase:
    """One-state base for the automorphism flipping every letter."""
    return RecursiveBase(("s",), ((((0, 1),), ((0, 1),), SWAP),))


_SWAP_BASE = all_swap_base()


def antidepth(g: GroupWord, max_depth: int = 20,
              budgets: Budgets = DEFAULT) -> DepthResult:
    """Least level at which every section equals the all-swapping
    automorphism s = (s, s) swap."""
    merged, m1, m2 = merge_bases(g.base, _SWAP_BASE)
    s = GroupWord(merged, ((m2[0], 1),))
    g2 = _rebase(g, merged, m1)
    for level, level_words in enumerate(_level_sets(g2, max_depth, budgets)):
        if all(equal(GroupWord(merged, w), s, budgets) for w in level_words):
            return DepthResult(True, level, max_depth)
    return DepthResult(False, None, max_depth)


# ----- recursion text format ---------------------------------------------

def parse_recursion_entries(text: str) -> list[tuple[str, list[W.Word], int]]:
    """Split ``name=(w0,w1)(0,1), ...`` entries (newlines also separate).

    Returns (name, [section words], root swap) triples with the section
    words still symbolic.  Accepts ``(0,1)`` or the 1-based ``(1,2)`` for the
    letter swap.
    """
    entries = []
    # split on commas/newlines at paren depth 0
    chunks = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced parentheses in recursion")
        if (ch == "," and depth == 0) or ch == "\n":
            chunks.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    chunks.append("".join(cur))
    for chunk in chunks:
        chunk = chunk.strip()
        if not chunk or chunk.startswith("#"):
            continue
        name, _, rhs = chunk.partition("=")
        name = name.strip()
        rhs = rhs.strip()
        if not name or not rhs.startswith("("):
            raise ValueError(f"bad recursion entry {chunk!r}")
        # find matching paren for the section list
        depth = 0
        for i, ch in enumerate(rhs):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    break
        secs_text, tail = rhs[1:i], rhs[i + 1:].replace(" ", "")
        if tail in ("", "()"):
            root = IDENTITY
        elif tail in ("(0,1)", "(1,2)"):
            root = SWAP
        else:
            raise ValueError(f"bad root permutation {tail!r} in {chunk!r}")
        # split sections at depth 0
        parts = []
        depth = 0
        cur = []
        for ch in secs_text:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                parts.append("".join(cur))
                cur = []
            else:
                cur.append(ch)
        parts.append("".join(cur))
        entries.append((name, [W.parse_word(p) for p in parts], root))
    return entries


def parse_recursion(text: str) -> RecursiveBase:
    """Parse an extended wreath recursion whose sections are words."""
    entries = parse_recursion_entries(text)
    names = [name for name, _, _ in entries]
    index = {name: i for i, name in enumerate(names)}
    if len(index) != len(names):
        raise ValueError("duplicate state name")
    rows = []
    for name, secs, root in entries:
        if len(secs) != 2:
            raise ValueError(f"state {name}: expected two sections")
        converted = []
        for sec in secs:
            letters = []
            for sym, exp in sec:
                if sym not in index:
                    raise ValueError(f"state {name}: unknown state {sym!r}")
                letters.append((index[sym], exp))
            converted.append(_reduce(letters))
        rows.append((converted[0], converted[1], root))
    return RecursiveBase(names, rows)


def recursion_text(base: RecursiveBase) -> str:
    entries = []
    for name, (s0, s1, root) in zip(base.names, base.rows):
        w0 = W.word_text(base.to_symbolic(s0))
        w1 = W.word_text(base.to_symbolic(s1))
        suffix = "(0,1)" if root else ""
        entries.append(f"{name}=({w0},{w1}){suffix}")
    return ", ".join(entries)
