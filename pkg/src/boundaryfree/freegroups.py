"""Free-group side of the first-level stabilizer.

Words here live in the free group on an automaton's state names.  The
stabilizer of the first tree level is an index-two (or index-one) subgroup;
its Schreier generators decompose through the wreath embedding into pairs of
free words.  Nielsen reduction driven by the first coordinates, mirrored on
the second, splits the generating pairs into a basis (b_i, w_i) and kernel
pairs (1, r_k).  A kernel word that survives in the group is an element
acting trivially on one half of the tree: a certificate that the action is
not essentially free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import words as W
from .action import GroupWord, base_of, is_identity, section, wreath_decompose
from .budgets import DEFAULT, Budgets
from .mealy import MealyAutomaton, is_invertible

Word = W.Word


class NotInStabilizerError(ValueError):
    pass


def _acts_at_root(aut: MealyAutomaton, q: int) -> bool:
    return aut.output[q] == (1, 0)


def stabilizer1_generators(aut: MealyAutomaton) -> list[Word]:
    """Schreier generators of the first-level stabilizer inside the free
    group on the states.

    Transversal: the empty word together with the least state that moves the
    root level; if no state does, the stabilizer is everything and the
    states themselves are returned.
    """
    if aut.alphabet_size != 2:
        raise ValueError("stabilizer machinery assumes the binary alphabet")
    if not is_invertible(aut):
        raise ValueError("automaton must be invertible")
    names = aut.state_names
    acting = [q for q in range(aut.state_count) if _acts_at_root(aut, q)]
    if not acting:
        return [((name, 1),) for name in names]
    g0 = ((names[acting[0]], 1),)
    in_stab = {q: not _acts_at_root(aut, q) for q in range(aut.state_count)}
    gens: list[Word] = []
    for t in ((), g0):
        t_in_stab = (t == ())
        for q in range(aut.state_count):
            letter = ((names[q], 1),)
            # coset of t * letter: stabilizer iff parities agree
            if t_in_stab == in_stab[q]:
                rep: Word = ()
            else:
                rep = g0
            gen = W.mul(t, letter, W.inv(rep))
            if gen and gen not in gens:
                gens.append(gen)
    return gens


@dataclass(frozen=True)
class PairedWord:
    first: Word
    second: Word

    def mul(self, other: "PairedWord") -> "PairedWord":
        return PairedWord(W.mul(self.first, other.first),
                          W.mul(self.second, other.second))

    def inv(self) -> "PairedWord":
        return PairedWord(W.inv(self.first), W.inv(self.second))

    def is_trivial(self) -> bool:
        return not self.first and not self.second

    def text(self) -> tuple[str, str]:
        return (W.word_text(self.first), W.word_text(self.second))


def wreath_decompose_free(word: Word, aut: MealyAutomaton) -> PairedWord:
    """Sections (w|_0, w|_1) computed symbolically in the free group.

    Raises NotInStabilizerError when the word moves the first level.
    """
    names = aut.state_names
    index = {n: i for i, n in enumerate(names)}
    root = 0
    for sym, _ in word:
        if aut.output[index[sym]] == (1, 0):
            root ^= 1
    if root:
        raise NotInStabilizerError(f"{W.word_text(word)} moves the first level")
    sections = []
    for x in (0, 1):
        cur = x
        out: list[tuple[str, int]] = []
        for sym, exp in word:
            q = index[sym]
            swaps = aut.output[q] == (1, 0)
            if exp == 1:
                out.append((names[aut.transition[q][cur]], 1))
            else:
                y = cur ^ (1 if swaps else 0)
                out.append((names[aut.transition[q][y]], -1))
            cur ^= 1 if swaps else 0
        sections.append(W.reduce_word(out))
    return PairedWord(sections[0], sections[1])


# ----- paired Nielsen reduction -------------------------------------------

def _shortlex_key(word: Word) -> tuple:
    # positive letters sort before inverses: a < b < ... < a^-1 < ...
    return (len(word), tuple((sym, 0 if exp > 0 else 1) for sym, exp in word))


@dataclass
class _Item:
    uid: int
    pair: PairedWord
    history: tuple[tuple[int, int], ...]  # word in input pair uids

    def invert(self) -> None:
        self.pair = self.pair.inv()
        self.history = tuple((u, -e) for u, e in reversed(self.history))


def _reduce_ids(seq):
    out = []
    for u, e in seq:
        if out and out[-1][0] == u and out[-1][1] == -e:
            out.pop()
        else:
            out.append((u, e))
    return tuple(out)


@dataclass
class MikhailovaSystem:
    """Nielsen-reduced generating pairs of the first-level stabilizer.

    ``basis`` pairs have nontrivial first coordinates forming a free basis of
    the subgroup they generate; ``kernel`` pairs are (1, r) with r freely
    nontrivial.  ``expressions`` writes each output pair as a word in the
    input pairs, ``input_expressions`` the converse, so the generated
    subgroup of F x F is preserved by construction.
    """

    basis: list[PairedWord]
    kernel: list[PairedWord]
    transversal: tuple[str, ...]
    expressions: list[tuple[tuple[int, int], ...]] = field(default_factory=list)
    input_expressions: list[tuple[tuple[int, int], ...]] = field(default_factory=list)
    stabilizer_generators: list[Word] = field(default_factory=list)

    @property
    def kernel_words(self) -> list[Word]:
        return [p.second for p in self.kernel]


def nielsen_reduce_paired(pairs: list[PairedWord],
                          transversal: tuple[str, ...] = ()) -> MikhailovaSystem:
    """Nielsen-reduce a pair list, driven by first coordinates.

    Greedy: multiply one pair by another (either side, either sign) whenever
    that shortens its first coordinate; on equal length, accept a shortlex
    decrease.  Each move is mirrored on second coordinates and recorded both
    as output-in-input and input-in-output rewritings.
    """
    items = [_Item(k, p, ((k, 1),)) for k, p in enumerate(pairs)]
    # input uid -> word over current uids
    back: dict[int, tuple] = {k: ((k, 1),) for k in range(len(pairs))}

    def substitute_back(uid: int, replacement: tuple) -> None:
        for key, word in back.items():
            if any(u == uid for u, _ in word):
                out: list[tuple[int, int]] = []
                for u, e in word:
                    if u == uid:
                        out.extend(replacement if e == 1 else
                                   tuple((v, -f) for v, f in reversed(replacement)))
                    else:
                        out.append((u, e))
                back[key] = _reduce_ids(out)

    def drop_trivial() -> None:
        for item in list(items):
            if item.pair.is_trivial():
                substitute_back(item.uid, ())
                items.remove(item)

    drop_trivial()
    changed = True
    while changed:
        changed = False
        # canonical orientation: first coordinate shortlex-least of the pair
        for item in items:
            if item.pair.first and (_shortlex_key(W.inv(item.pair.first))
                                    < _shortlex_key(item.pair.first)):
                substitute_back(item.uid, ((item.uid, -1),))
                item.invert()
                changed = True
        best = None
        for target in items:
            if not target.pair.first:
                continue
            for other in items:
                if other.uid == target.uid or not other.pair.first:
                    continue
                for exp in (1, -1):
                    for side in ("right", "left"):
                        f = other.pair.first if exp == 1 else W.inv(other.pair.first)
                        cand = (W.mul(target.pair.first, f) if side == "right"
                                else W.mul(f, target.pair.first))
                        old_key = _shortlex_key(target.pair.first)
                        new_key = _shortlex_key(cand)
                        if new_key < old_key and (best is None or new_key < best[0]):
                            best = (new_key, target, other, exp, side)
        if best is not None:
            _, target, other, exp, side = best
            # target <- target * other^exp (or other^exp * target)
            factor = other.pair if exp == 1 else other.pair.inv()
            hist = (other.history if exp == 1
                    else tuple((u, -e) for u, e in reversed(other.history)))
            if side == "right":
                target.pair = target.pair.mul(factor)
                target.history = _reduce_ids(target.history + hist)
                # old target = new * factor^-1
                repl = ((target.uid, 1), (other.uid, -exp))
            else:
                target.pair = factor.mul(target.pair)
                target.history = _reduce_ids(hist + target.history)
                repl = ((other.uid, -exp), (target.uid, 1))
            substitute_back(target.uid, _reduce_ids(repl))
            drop_trivial()
            changed = True
    basis = sorted((i for i in items if i.pair.first),
                   key=lambda i: _shortlex_key(i.pair.first))
    kernel = sorted((i for i in items if not i.pair.first),
                    key=lambda i: _shortlex_key(i.pair.second))
    ordered = basis + kernel
    uid_to_out = {item.uid: k for k, item in enumerate(ordered)}
    input_expressions = []
    for k in range(len(pairs)):
        word = back.get(k, ())
        input_expressions.append(tuple((uid_to_out[u], e) for u, e in word))
    return MikhailovaSystem(
        basis=[i.pair for i in basis],
        kernel=[i.pair for i in kernel],
        transversal=transversal,
        expressions=[i.history for i in ordered],
        input_expressions=input_expressions,
    )


def mikhailova_system(aut: MealyAutomaton) -> MikhailovaSystem:
    """Stabilizer generators -> paired decompositions -> Nielsen reduction."""
    gens = stabilizer1_generators(aut)
    pairs = [wreath_decompose_free(g, aut) for g in gens]
    acting = [q for q in range(aut.state_count) if _acts_at_root(aut, q)]
    transversal = ("1",) if not acting else ("1", aut.state_names[acting[0]])
    system = nielsen_reduce_paired(pairs, transversal)
    system.stabilizer_generators = gens
    return system


@dataclass(frozen=True)
class Witness:
    """A stabilizer word decomposing as (1, r) with r nontrivial in the
    group: a nonidentity element supported on half the tree."""

    stabilizer_word: Word
    kernel_word: Word

    def texts(self) -> tuple[str, str]:
        return (W.word_text(self.stabilizer_word), W.word_text(self.kernel_word))


def expand_history(history, gens: list[Word]) -> Word:
    out: list[tuple[str, int]] = []
    for idx, exp in history:
        g = gens[idx]
        out.extend(g if exp == 1 else W.inv(g))
    return W.reduce_word(out)


def mikhailova_witness(aut: MealyAutomaton,
                       budgets: Budgets = DEFAULT) -> Witness | None:
    """First kernel word that survives in the group, if any.

    The returned stabilizer word is re-verified: it fixes the first level,
    its 0-section is freely trivial and its 1-section is the kernel word.
    """
    system = mikhailova_system(aut)
    gens = system.stabilizer_generators
    base = base_of(aut)
    n_basis = len(system.basis)
    for k, pair in enumerate(system.kernel):
        r = pair.second
        if is_identity(base.from_symbolic(r), budgets):
            continue
        stab_word = expand_history(system.expressions[n_basis + k], gens)
        check = wreath_decompose_free(stab_word, aut)
        if check.first or check.second != r:
            raise AssertionError("witness rewriting failed to reproduce the pair")
        return Witness(stab_word, r)
    return None


# ----- diagonal type and endomorphism checks ------------------------------

def _singleton_letters(pairs: list[PairedWord]) -> dict[str, Word] | None:
    """If the first coordinates are exactly the generators up to sign and
    order, return the induced generator -> second coordinate map."""
    mapping: dict[str, Word] = {}
    for p in pairs:
        if len(p.first) != 1:
            return None
        sym, exp = p.first[0]
        if sym in mapping:
            return None
        mapping[sym] = p.second if exp == 1 else W.inv(p.second)
    return mapping


def diagonal_type_map(aut: MealyAutomaton) -> dict[str, Word] | None:
    """The endomorphism candidate a_i -> w_i when the Nielsen-reduced basis
    first coordinates are a full free basis and the w_i generate everything.

    The automaton is taken as given; callers interested in the group usually
    pass the minimized automaton.
    """
    system = mikhailova_system(aut)
    mapping = _singleton_letters(system.basis)
    if mapping is None or set(mapping) != set(aut.state_names):
        return None
    images = [PairedWord(mapping[name], ()) for name in aut.state_names]
    reduced = nielsen_reduce_paired(images)
    check = _singleton_letters(reduced.basis)
    if check is None or set(check) != set(aut.state_names) or reduced.kernel:
        return None
    return mapping


@dataclass(frozen=True)
class RelatorCheck:
    relator: str
    family: bool
    passed: bool
    verified_up_to: int | None = None    # family instantiation bound reached
    failed_at: int | None = None         # family index of the first failure
    relator_holds: bool | None = None    # the relator itself dies in the group


@dataclass(frozen=True)
class RelatorReport:
    all_passed: bool
    checks: tuple[RelatorCheck, ...]
    family_bound: int


def verify_endo_on_relators(phi: dict[str, Word], relators: list[str],
                            aut: MealyAutomaton, family_bound: int | None = None,
                            budgets: Budgets = DEFAULT,
                            check_relators_hold: bool = False) -> RelatorReport:
    """Check that the substitution phi kills every relator in the group.

    Family relators (containing ``{i}``) are instantiated for
    i = 1..family_bound; a pass is only ever 'verified up to' that bound.
    """
    if family_bound is None:
        family_bound = budgets.family_bound
    base = base_of(aut)
    checks: list[RelatorCheck] = []
    ok = True

    def holds(word: Word) -> bool:
        return is_identity(base.from_symbolic(word), budgets)

    for text in relators:
        if W.is_family(text):
            passed = True
            failed_at = None
            r_holds: bool | None = True if check_relators_hold else None
            for i in range(1, family_bound + 1):
                r = W.instantiate_family(text, i)
                if check_relators_hold and not holds(r):
                    r_holds = False
                if not holds(W.substitute(r, phi)):
                    passed = False
                    failed_at = i
                    break
            checks.append(RelatorCheck(text, True, passed,
                                       verified_up_to=(family_bound if passed else None),
                                       failed_at=failed_at,
                                       relator_holds=r_holds))
        else:
            r = W.parse_word(text)
            r_holds = holds(r) if check_relators_hold else None
            passed = holds(W.substitute(r, phi))
            checks.append(RelatorCheck(text, False, passed,
                                       relator_holds=r_holds))
        ok = ok and checks[-1].passed and (checks[-1].relator_holds is not False)
    return RelatorReport(ok, tuple(checks), family_bound)


def relator_file_parse(text: str) -> tuple[list[str], int | None]:
    """Relator files: one word per line, optional ``family_bound = N`` header."""
    relators = []
    bound = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.replace(" ", "").startswith("family_bound="):
            bound = int(line.split("=")[1])
            continue
        relators.append(line)
    return relators, bound
