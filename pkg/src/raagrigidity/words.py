"""Word algebra of a right-angled Artin group.

Words are tuples of letters ``(label, sign)`` with ``sign`` in {+1, -1}.
Normal forms are shortlex-least among commutation-equivalent reduced words,
ordering letters by (vertex position, sign) with ``-1 < +1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from .graph import DefiningGraph, Join, maximal_joins

Letter = tuple  # (label, +1 | -1)
Word = tuple


class WordError(ValueError):
    pass


class NotBasicError(ValueError):
    """The pair does not generate (a finite-index subgroup of) a basic Z^2."""


# --------------------------------------------------------------------------
# parsing / formatting

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^\(?(-?\d+)\)?)?$")


def parse_word(text: str) -> Word:
    """Parse ``"a b^-1 a^2"``; ``""``, ``"1"`` and ``"e"``-free empty input give the identity."""
    text = text.strip()
    if text in ("", "1", "ε", "eps"):
        return ()
    out = []
    for tok in text.replace("*", " ").replace("·", " ").split():
        m = _TOKEN.match(tok)
        if m is None:
            raise WordError(f"bad token {tok!r} in word {text!r}")
        label, exp = m.group(1), int(m.group(2) or 1)
        s = 1 if exp > 0 else -1
        out.extend([(label, s)] * abs(exp))
    return tuple(out)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        label, s = w[i]
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = (j - i) * s
        parts.append(label if k == 1 else f"{label}^{k}")
        i = j
    return " ".join(parts)


def inverse(w: Word) -> Word:
    return tuple((x, -s) for x, s in reversed(w))


def power(w: Word, k: int) -> Word:
    if k < 0:
        return inverse(w) * (-k)
    return tuple(w) * k


def free_reduce(w) -> Word:
    out = []
    for letter in w:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def free_cyclic_reduce(w) -> tuple:
    """Return ``(conjugator, core)`` with ``w = conjugator core conjugator^-1`` in a free group."""
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i][0] == w[j][0] and w[i][1] == -w[j][1]:
        i += 1
        j -= 1
    return w[:i], w[i:j + 1]


def free_root(w) -> tuple:
    """Primitive root and exponent of a nontrivial element of a free group."""
    c, core = free_cyclic_reduce(w)
    if not core:
        raise WordError("identity has no primitive root")
    n = len(core)
    for p in range(1, n + 1):
        if n % p == 0 and core == core[:p] * (n // p):
            return free_reduce(c + core[:p] + inverse(c)), n // p
    raise AssertionError("unreachable")


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclicClass:
    conjugator: Word
    core: Word


@dataclass(frozen=True)
class BasicZ2:
    """Basic generators ``gen1 in F(side1)``, ``gen2 in F(side2)`` conjugated by ``conjugator``."""

    join: Join
    gen1: Word
    gen2: Word
    conjugator: Word = ()

    def generators(self) -> tuple:
        """The two generators as group elements (conjugator applied)."""
        c, ci = self.conjugator, inverse(self.conjugator)
        return c + self.gen1 + ci, c + self.gen2 + ci

    def element(self, i: int, j: int) -> Word:
        c = self.conjugator
        return c + power(self.gen1, i) + power(self.gen2, j) + inverse(c)

    def conjugate(self, g: Word) -> "BasicZ2":
        return BasicZ2(self.join, self.gen1, self.gen2, tuple(g) + tuple(self.conjugator))

    def __str__(self):
        s = f"<{format_word(self.gen1)}, {format_word(self.gen2)}>"
        if self.conjugator:
            s = f"({format_word(self.conjugator)}) {s} ({format_word(inverse(self.conjugator))})"
        return s


class RAAG:
    """The right-angled Artin group of a defining graph."""

    def __init__(self, graph: DefiningGraph):
        self.graph = graph
        self._labels = set(graph.vertices)

    # basic predicates -----------------------------------------------------
    def letter_key(self, letter) -> tuple:
        return (self.graph.index(letter[0]), letter[1])

    def word_key(self, w) -> tuple:
        return (len(w), tuple(self.letter_key(x) for x in w))

    def check(self, w) -> Word:
        w = tuple(w)
        for label, s in w:
            if label not in self._labels:
                raise WordError(f"unknown generator {label!r}")
            if s not in (1, -1):
                raise WordError(f"bad sign {s!r}")
        return w

    def letters_commute(self, x, y) -> bool:
        return x[0] == y[0] or self.graph.adjacent(x[0], y[0])

    def parse(self, text: str) -> Word:
        return self.check(parse_word(text))

    # reduction and normal forms ------------------------------------------
    def reduce(self, w) -> Word:
        """A reduced word for ``w`` (no cancellable pair up to commutation)."""
        out: list = []
        for y in self.check(w):
            inv = (y[0], -y[1])
            k = len(out) - 1
            cancelled = False
            while k >= 0:
                z = out[k]
                if z == inv:
                    del out[k]
                    cancelled = True
                    break
                if not self.letters_commute(z, y):
                    break
                k -= 1
            if not cancelled:
                out.append(y)
        return tuple(out)

    def _lex_least(self, w) -> Word:
        rest = list(w)
        out = []
        while rest:
            best = None
            for i, x in enumerate(rest):
                if all(self.letters_commute(rest[j], x) for j in range(i)):
                    if best is None or self.letter_key(x) < self.letter_key(rest[best]):
                        best = i
                # letters after a non-commuting one can still be movable; keep scanning
            out.append(rest.pop(best))
        return tuple(out)

    def normal_form(self, w) -> Word:
        return self._lex_least(self.reduce(w))

    def multiply(self, *ws) -> Word:
        out = ()
        for w in ws:
            out = out + tuple(w)
        return self.normal_form(out)

    def equal(self, u, w) -> bool:
        return self.normal_form(tuple(u) + inverse(w)) == ()

    def is_identity(self, w) -> bool:
        return self.reduce(w) == ()

    def support(self, w) -> frozenset:
        return frozenset(x for x, _ in self.reduce(w))

    def commutes(self, u, w) -> bool:
        u, w = tuple(u), tuple(w)
        return self.is_identity(u + w + inverse(u) + inverse(w))

    # cyclic reduction ----------------------------------------------------
    def _movable_first(self, w, i) -> bool:
        return all(self.letters_commute(w[j], w[i]) for j in range(i))

    def _movable_last(self, w, i) -> bool:
        return all(self.letters_commute(w[j], w[i]) for j in range(i + 1, len(w)))

    def _peel(self, w):
        """One conjugation step ``w = x u x^-1``; returns ``(x, u)`` or None."""
        for i, x in enumerate(w):
            if not self._movable_first(w, i):
                continue
            inv = (x[0], -x[1])
            for j in range(len(w) - 1, i, -1):
                if w[j] == inv and self._movable_last(w, j):
                    u = w[:i] + w[i + 1:j] + w[j + 1:]
                    return x, u
        return None

    def is_cyclically_reduced(self, w) -> bool:
        return self._peel(self.reduce(w)) is None

    def cyclic_reduce(self, w) -> CyclicClass:
        """Conjugator and canonical cyclically reduced core of ``w``."""
        w = self.normal_form(w)
        conj: list = []
        while True:
            step = self._peel(w)
            if step is None:
                break
            x, w = step
            conj.append(x)
        core = self.normal_form(w)
        conj_w = self.normal_form(tuple(conj))
        # canonical representative among rotations and shuffles
        best_core, best_conj = core, conj_w
        seen = {core: conj_w}
        frontier = [core]
        while frontier:
            cur = frontier.pop()
            cur_conj = seen[cur]
            # rotating by one front-movable letter x: rot = x^-1 cur x
            for i, x in enumerate(cur):
                if not self._movable_first(cur, i):
                    continue
                rot = self.normal_form(cur[:i] + cur[i + 1:] + (x,))
                if rot in seen:
                    continue
                seen[rot] = self.normal_form(cur_conj + (x,))
                frontier.append(rot)
        for cand, cc in seen.items():
            if self.word_key(cand) < self.word_key(best_core):
                best_core, best_conj = cand, cc
        return CyclicClass(best_conj, best_core)

    # roots -----------------------------------------------------------------
    def _prefixes(self, w, m):
        """Words of length m that are prefixes of some shuffle of ``w``."""
        out = set()

        def rec(rest, acc):
            if len(acc) == m:
                out.add(tuple(acc))
                return
            used = set()
            for i, x in enumerate(rest):
                if x in used:
                    continue
                if self._movable_first(rest, i):
                    used.add(x)
                    rec(rest[:i] + rest[i + 1:], acc + [x])

        rec(tuple(w), [])
        return out

    def primitive_root(self, w) -> tuple:
        """``(root, exponent)`` with ``w = root^exponent`` and root not a proper power."""
        w = self.normal_form(w)
        if not w:
            raise WordError("identity has no primitive root")
        cc = self.cyclic_reduce(w)
        core = cc.core
        n = len(core)
        for k in range(n, 1, -1):
            if n % k:
                continue
            for p in sorted(self._prefixes(core, n // k), key=self.word_key):
                if self.normal_form(p * k) == core:
                    c = cc.conjugator
                    return self.normal_form(c + p + inverse(c)), k
        return w, 1

    def power_relation(self, g, h, bound: int = 64):
        """Exponents ``(m, n)``, ``0 < |m|, |n| <= bound``, with ``g^m = h^n``, or None.

        RAAGs have unique roots, so ``g`` and ``h`` satisfy a power relation
        exactly when their primitive roots agree up to inversion.
        """
        rg, eg = self.primitive_root(g)
        rh, eh = self.primitive_root(h)
        if rg == rh:
            s = 1
        elif self.normal_form(inverse(rg)) == rh:
            s = -1
        else:
            return None
        L = eg * eh // gcd(eg, eh)
        m, n = L // eg, s * L // eh
        if abs(m) > bound or abs(n) > bound:
            return None
        return m, n

    # basic Z^2 subgroups ---------------------------------------------------
    def find_join(self, side_a, side_b):
        """First maximal join with ``side_a`` on one side and ``side_b`` on the other."""
        for j in maximal_joins(self.graph):
            s1, s2 = set(j.side1), set(j.side2)
            if side_a <= s1 and side_b <= s2:
                return j, False
            if side_a <= s2 and side_b <= s1:
                return j, True
        return None

    def join_containing(self, support):
        for j in maximal_joins(self.graph):
            if support <= j.vertices():
                return j
        return None

    def basic_generators(self, g, h) -> BasicZ2:
        """Basic generators of the maximal Z^2 containing ``<g, h>``.

        Each generator is oriented so that the input's component along it is a
        positive power (``g``'s component when nontrivial, else ``h``'s).
        """
        g, h = self.normal_form(g), self.normal_form(h)
        if not g or not h:
            raise NotBasicError("trivial generator")
        if not self.commutes(g, h):
            raise NotBasicError("elements do not commute")
        if self.power_relation(g, h) is not None:
            raise NotBasicError("elements generate a cyclic group")
        cc = self.cyclic_reduce(g)
        c = cc.conjugator
        gp = cc.core
        hp = self.normal_form(inverse(c) + h + c)
        supp = self.support(gp) | self.support(hp)
        j = self.join_containing(supp)
        if j is None:
            raise NotBasicError(
                f"support {{{','.join(sorted(map(str, supp)))}}} spans no join: "
                "centralizer of the cyclically reduced element is cyclic"
            )
        s1, s2 = set(j.side1), set(j.side2)
        comps = []
        for side in (s1, s2):
            pg = free_reduce([x for x in gp if x[0] in side])
            ph = free_reduce([x for x in hp if x[0] in side])
            src = pg if pg else ph
            if not src:
                raise NotBasicError("subgroup lies in a single factor")
            root, _ = free_root(src)
            comps.append(root)
        return BasicZ2(j, self.normal_form(comps[0]), self.normal_form(comps[1]), c)

    def subgroup_intersection(self, G: BasicZ2, H: BasicZ2, bound: int = 64):
        """Generator of ``G ∩ H`` when it is infinite cyclic, ``"equal"`` if G = H, else None.

        Any nontrivial element of G ∩ H is a common power of basic generators
        (an element using both directions would force G = H).
        """
        gens_g = G.generators()
        gens_h = H.generators()
        found = []
        for a in gens_g:
            for b in gens_h:
                rel = self.power_relation(a, b, bound)
                if rel is not None:
                    m, _ = rel
                    found.append(self.normal_form(power(a, m)))
        if len(found) >= 2:
            return "equal"
        if found:
            return found[0]
        return None
