"""Finitely presented groups, the integral group ring, and finite covers.

Subgroups only ever appear as basepoint stabilizers of transitive permutation
actions (the covering-space encoding), which keeps every operation total: no
word problem is ever decided, words are only freely reduced and then pushed
through representations or rewritings.
"""

from __future__ import annotations

import itertools
from collections import deque

from .matrices import Matrix, int_diagonal, smith_normal_form_int

# A word is a tuple of (generator index, +1/-1) letters, always freely reduced.
Word = tuple[tuple[int, int], ...]

EMPTY_WORD: Word = ()


def free_reduce(letters) -> Word:
    """Freely reduce a letter sequence; idempotent and length-non-increasing."""
    out: list[tuple[int, int]] = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError(f"letter exponent must be +-1, got {e}")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word_inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def word_mul(*words: Word) -> Word:
    return free_reduce([l for w in words for l in w])


def word_from_ints(ints) -> Word:
    """Word from signed 1-based generator numbers, e.g. [1, -2, 1]."""
    letters = []
    for v in ints:
        v = int(v)
        if v == 0:
            raise ValueError("0 is not a valid signed generator number")
        letters.append((abs(v) - 1, 1 if v > 0 else -1))
    return free_reduce(letters)


def word_to_ints(w: Word) -> list[int]:
    return [(g + 1) * e for g, e in w]


def word_exponent_sum(w: Word, gen: int) -> int:
    return sum(e for g, e in w if g == gen)


def word_power(g: int, k: int) -> Word:
    return tuple(((g, 1) if k > 0 else (g, -1)) for _ in range(abs(k)))


# ---------------------------------------------------------------------------
# group ring Z[pi]
# ---------------------------------------------------------------------------

class GroupRingElt:
    """Integer combination of freely reduced words; zero coefficients dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[Word, int] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for w, c in items:
                w = free_reduce(w)
                c = int(c)
                if c:
                    c0 = clean.get(w, 0) + c
                    if c0:
                        clean[w] = c0
                    else:
                        clean.pop(w, None)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, *a):
        raise AttributeError("GroupRingElt is immutable")

    @staticmethod
    def from_word(w, coeff: int = 1) -> "GroupRingElt":
        return GroupRingElt([(tuple(w), coeff)])

    @staticmethod
    def one() -> "GroupRingElt":
        return GroupRingElt([(EMPTY_WORD, 1)])

    def __add__(self, other):
        if not isinstance(other, GroupRingElt):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElt(out)

    def __neg__(self):
        return GroupRingElt({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GroupRingElt):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElt({w: c * other for w, c in self.terms.items()})
        if not isinstance(other, GroupRingElt):
            return NotImplemented
        out: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = word_mul(w1, w2)
                out[w] = out.get(w, 0) + c1 * c2
        return GroupRingElt(out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, GroupRingElt):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def bar(self) -> "GroupRingElt":
        """The involution sum n_g g  |->  sum n_g g^-1."""
        return GroupRingElt({word_inverse(w): c for w, c in self.terms.items()})

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{word_to_ints(w)}" for w, c in self.terms.items())


GR_ZERO = GroupRingElt()


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

class GroupPresentation:
    """A finitely presented group: generator count plus freely reduced relators."""

    __slots__ = ("num_generators", "relators")

    def __init__(self, num_generators: int, relators=()):
        relators = tuple(free_reduce(r) for r in relators)
        for r in relators:
            if not r:
                raise ValueError("relators must be nonempty after free reduction")
            if any(g < 0 or g >= num_generators for g, _ in r):
                raise ValueError("relator uses an unknown generator")
        object.__setattr__(self, "num_generators", num_generators)
        object.__setattr__(self, "relators", relators)

    def __setattr__(self, *a):
        raise AttributeError("GroupPresentation is immutable")

    def __eq__(self, other):
        if not isinstance(other, GroupPresentation):
            return NotImplemented
        return (self.num_generators, self.relators) == (other.num_generators, other.relators)

    def __hash__(self):
        return hash((self.num_generators, self.relators))

    def __repr__(self):
        rels = ", ".join(str(word_to_ints(r)) for r in self.relators)
        return f"<{self.num_generators} generators | {rels}>"

    def exponent_matrix(self) -> Matrix:
        """Generators x relators matrix of total exponents (the relator matrix of H1)."""
        return Matrix(self.num_generators, len(self.relators),
                      [[word_exponent_sum(r, g) for r in self.relators]
                       for g in range(self.num_generators)])


def abelianization(p: GroupPresentation) -> tuple[int, list[int]]:
    """(free rank, invariant factors > 1 in divisibility order) of H1 = Z^g / relators."""
    if p.num_generators == 0:
        return 0, []
    _, d, _ = smith_normal_form_int(p.exponent_matrix())
    diag = int_diagonal(d)
    betti = p.num_generators - sum(1 for x in diag if x)
    torsion = [x for x in diag if x > 1]
    return betti, torsion


def abelianization_change_of_basis(p: GroupPresentation):
    """(U, diag) with U the row transform of the SNF of the relator matrix.

    Columns of H1's canonical coordinates are read off as y = U x, so the
    character data of the torsion part pulls back to generator j through
    column j of U.
    """
    u, d, _ = smith_normal_form_int(p.exponent_matrix())
    return u, int_diagonal(d)


def free_product(p1: GroupPresentation, p2: GroupPresentation) -> GroupPresentation:
    """Generators concatenated (p2 shifted), relators concatenated."""
    shift = p1.num_generators
    shifted = [tuple((g + shift, e) for g, e in r) for r in p2.relators]
    return GroupPresentation(p1.num_generators + p2.num_generators,
                             list(p1.relators) + shifted)


# ---------------------------------------------------------------------------
# integer gradings pi -> Z
# ---------------------------------------------------------------------------

def grading_weight(phi, w: Word) -> int:
    return sum(e * phi[g] for g, e in w)


def verify_grading(p: GroupPresentation, phi) -> bool:
    """True iff every relator has total weight zero under phi."""
    if len(phi) != p.num_generators:
        return False
    return all(grading_weight(phi, r) == 0 for r in p.relators)


# ---------------------------------------------------------------------------
# permutation actions (finite-index subgroups as basepoint stabilizers)
# ---------------------------------------------------------------------------

Perm = tuple[int, ...]


def perm_compose(p: Perm, q: Perm) -> Perm:
    """(p o q)[i] = p[q[i]]: apply q first."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


class PermAction:
    """Transitive action of a presented group on {0..degree-1}, basepoint 0.

    Encodes the finite-index subgroup Stab(0); the degree is the index.
    """

    __slots__ = ("presentation", "degree", "generator_images", "_inverses")

    def __init__(self, presentation: GroupPresentation, generator_images):
        images = tuple(tuple(int(x) for x in perm) for perm in generator_images)
        if len(images) != presentation.num_generators:
            raise ValueError("one permutation per generator required")
        degree = len(images[0]) if images else 1
        if degree < 1:
            raise ValueError("degree must be >= 1")
        for perm in images:
            if sorted(perm) != list(range(degree)):
                raise ValueError(f"not a permutation of 0..{degree - 1}: {perm}")
        object.__setattr__(self, "presentation", presentation)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "generator_images", images)
        object.__setattr__(self, "_inverses", tuple(perm_inverse(x) for x in images))
        for r in presentation.relators:
            if self.word_perm(r) != tuple(range(degree)):
                raise ValueError(f"relator {word_to_ints(r)} does not act trivially")
        if not self._is_transitive():
            raise ValueError("action is not transitive")

    def __setattr__(self, *a):
        raise AttributeError("PermAction is immutable")

    def _is_transitive(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for perm in self.generator_images + self._inverses:
                j = perm[i]
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        return len(seen) == self.degree

    def apply_letter(self, point: int, gen: int, exp: int) -> int:
        perm = self.generator_images[gen] if exp == 1 else self._inverses[gen]
        return perm[point]

    def apply_word(self, w: Word, point: int) -> int:
        # letters act as functions composed left to right: w = uv acts as u(v(point))
        for g, e in reversed(w):
            point = self.apply_letter(point, g, e)
        return point

    def word_perm(self, w: Word) -> Perm:
        return tuple(self.apply_word(w, i) for i in range(self.degree))

    def __eq__(self, other):
        if not isinstance(other, PermAction):
            return NotImplemented
        return (self.presentation, self.generator_images) == (other.presentation, other.generator_images)

    def __hash__(self):
        return hash(self.generator_images)

    def __repr__(self):
        return f"PermAction(degree={self.degree}, images={self.generator_images})"


def trivial_action(p: GroupPresentation) -> PermAction:
    return PermAction(p, [tuple([0]) for _ in range(p.num_generators)])


# ---------------------------------------------------------------------------
# Reidemeister-Schreier
# ---------------------------------------------------------------------------

class SchreierData:
    """Transversal and rewriting data for the basepoint stabilizer.

    ``transversal[i]`` is the left coset representative carrying the basepoint
    to coset i (BFS over generators in index order, inverses after positives).
    ``pair_index[(coset, gen)]`` is the Schreier generator index, or None for
    spanning-tree edges.
    """

    __slots__ = ("action", "transversal", "pair_index", "pairs")

    def __init__(self, action: PermAction, transversal, pair_index, pairs):
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "transversal", transversal)
        object.__setattr__(self, "pair_index", pair_index)
        object.__setattr__(self, "pairs", pairs)

    def __setattr__(self, *a):
        raise AttributeError("SchreierData is immutable")

    def num_schreier_generators(self) -> int:
        return len(self.pairs)

    def schreier_generator_word(self, idx: int) -> Word:
        """The Schreier generator as a word in the ambient group."""
        coset, gen = self.pairs[idx]
        target = self.action.apply_letter(coset, gen, 1)
        return word_mul(word_inverse(self.transversal[target]),
                        ((gen, 1),), self.transversal[coset])

    def rewrite(self, w: Word) -> Word:
        """Express a word stabilizing the basepoint in Schreier generators."""
        action = self.action
        out_reversed = []
        c = 0
        for g, e in reversed(w):
            if e == 1:
                idx = self.pair_index[(c, g)]
                c2 = action.apply_letter(c, g, 1)
                if idx is not None:
                    out_reversed.append((idx, 1))
                c = c2
            else:
                c2 = action.apply_letter(c, g, -1)
                idx = self.pair_index[(c2, g)]
                if idx is not None:
                    out_reversed.append((idx, -1))
                c = c2
        if c != 0:
            raise ValueError("word does not lie in the basepoint stabilizer")
        return free_reduce(reversed(out_reversed))


def reidemeister_schreier(p: GroupPresentation, action: PermAction) -> tuple[GroupPresentation, SchreierData]:
    """Presentation of the basepoint stabilizer plus its rewriting data.

    Schreier generators: one per (coset, generator) pair off the BFS spanning
    tree.  Relators: rewrites of T[i]^-1 r T[i] over all cosets i and base
    relators r, with freely trivial ones dropped.
    """
    if action.presentation != p:
        raise ValueError("action does not belong to this presentation")
    d = action.degree
    transversal: list[Word | None] = [None] * d
    transversal[0] = EMPTY_WORD
    tree: set[tuple[int, int]] = set()
    queue = deque([0])
    steps = [(g, 1) for g in range(p.num_generators)] + \
            [(g, -1) for g in range(p.num_generators)]
    while queue:
        i = queue.popleft()
        for g, e in steps:
            j = action.apply_letter(i, g, e)
            if transversal[j] is None:
                transversal[j] = word_mul(((g, e),), transversal[i])
                tree.add((i, g) if e == 1 else (j, g))
                queue.append(j)
    assert all(t is not None for t in transversal)

    pair_index: dict[tuple[int, int], int | None] = {}
    pairs: list[tuple[int, int]] = []
    for i in range(d):
        for g in range(p.num_generators):
            if (i, g) in tree:
                pair_index[(i, g)] = None
            else:
                pair_index[(i, g)] = len(pairs)
                pairs.append((i, g))

    data = SchreierData(action, tuple(transversal), pair_index, tuple(pairs))
    relators = []
    for i in range(d):
        for r in p.relators:
            conj = word_mul(word_inverse(transversal[i]), r, transversal[i])
            rewritten = data.rewrite(conj)
            if rewritten:
                relators.append(rewritten)
    sub = GroupPresentation(len(pairs), relators)
    return sub, data


# ---------------------------------------------------------------------------
# enumeration of transitive actions up to conjugacy
# ---------------------------------------------------------------------------

def _perm_conjugate(g: Perm, x: Perm, g_inv: Perm) -> Perm:
    return tuple(g[x[g_inv[i]]] for i in range(len(g)))


def _word_perm_images(images, w: Word, degree: int) -> Perm:
    pts = []
    invs = {}
    for i in range(degree):
        c = i
        for g, e in reversed(w):
            perm = images[g]
            if e == 1:
                c = perm[c]
            else:
                if g not in invs:
                    invs[g] = perm_inverse(perm)
                c = invs[g][c]
        pts.append(c)
    return tuple(pts)


def transitive_actions(p: GroupPresentation, degree: int) -> list[PermAction]:
    """All transitive actions of the given degree, one per conjugacy class.

    Backtracks generator by generator; at each level the candidate images are
    deduplicated under the pointwise stabilizer of the earlier images, which
    enumerates orbit representatives exactly (orbits of S_d on tuples split as
    orbits of successive stabilizers).  Deterministic: lexicographically least
    representatives, in lexicographic order.
    """
    sym = sorted(itertools.permutations(range(degree)))
    identity = tuple(range(degree))
    by_max: dict[int, list[Word]] = {}
    for r in p.relators:
        m = max(g for g, _ in r)
        by_max.setdefault(m, []).append(r)

    out: list[PermAction] = []

    def recurse(images: list[Perm], stab: list[Perm]):
        k = len(images)
        if k == p.num_generators:
            try:
                out.append(PermAction(p, images))
            except ValueError:
                pass  # not transitive
            return
        cands = []
        for x in sym:
            trial = images + [x]
            ok = all(_word_perm_images(trial, r, degree) == identity
                     for r in by_max.get(k, ()))
            if ok:
                cands.append(x)
        seen: set[Perm] = set()
        inv_stab = [(g, perm_inverse(g)) for g in stab]
        for x in cands:
            if x in seen:
                continue
            orbit = {_perm_conjugate(g, x, gi) for g, gi in inv_stab}
            seen |= orbit
            new_stab = [g for g, gi in inv_stab if _perm_conjugate(g, x, gi) == x]
            recurse(images + [x], new_stab)

    recurse([], sym)
    return out


def transitive_actions_up_to(p: GroupPresentation, max_degree: int) -> list[PermAction]:
    acts = []
    for d in range(1, max_degree + 1):
        acts.extend(transitive_actions(p, d))
    return acts
