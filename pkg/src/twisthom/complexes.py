"""Free equivariant chain complexes over Z[pi] and the 3-manifold catalog.

Boundary matrices are stored in right-module coordinates: the cellular chain
complex of the universal cover is a right Z[pi]-module via sigma*g = g^-1 sigma,
so the stored entry for a classical left-coordinate coefficient c is bar(c)
(words inverted).  With this convention a representation specializes an entry
by substituting alpha(word) directly and consecutive boundaries multiply to
zero for every representation, commutative or not.
"""

from __future__ import annotations

import math

from .groups import (EMPTY_WORD, GroupPresentation, GroupRingElt, PermAction,
                     Word, free_reduce, reidemeister_schreier, word_inverse,
                     word_mul, word_power)
from .matrices import Matrix, int_matrix_rank

GR_ONE = GroupRingElt.one()


def _gr(terms) -> GroupRingElt:
    return GroupRingElt(terms)


def _gen_minus_one_bar(gen: int) -> GroupRingElt:
    """Stored form of the classical edge boundary (x - 1): here x^-1 - 1."""
    return _gr([(((gen, -1),), 1), (EMPTY_WORD, -1)])


class EquivariantComplex:
    """Finite free Z[pi]-chain complex given by boundary matrices.

    ``boundaries[k]`` is the boundary C_{k+1} -> C_k, of shape
    ranks[k] x ranks[k+1], with GroupRingElt entries in stored (right-module)
    coordinates.  The d.d = 0 identity holds under every specialization; it is
    checked there, not symbolically.
    """

    __slots__ = ("group", "ranks", "boundaries")

    def __init__(self, group: GroupPresentation, ranks, boundaries):
        ranks = tuple(int(r) for r in ranks)
        boundaries = tuple(boundaries)
        if any(r < 0 for r in ranks):
            raise ValueError("ranks must be non-negative")
        if len(boundaries) != max(0, len(ranks) - 1):
            raise ValueError("need one boundary matrix per adjacent degree pair")
        for k, b in enumerate(boundaries):
            if not isinstance(b, Matrix) or (b.rows, b.cols) != (ranks[k], ranks[k + 1]):
                raise ValueError(f"boundary {k + 1} must be {ranks[k]}x{ranks[k + 1]}")
            for row in b.entries:
                for e in row:
                    if not isinstance(e, GroupRingElt):
                        raise ValueError("boundary entries must be GroupRingElt")
                    for w, _ in e.terms.items():
                        if any(g >= group.num_generators for g, _ in w):
                            raise ValueError("boundary word uses an unknown generator")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "boundaries", boundaries)

    def __setattr__(self, *a):
        raise AttributeError("EquivariantComplex is immutable")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * r for i, r in enumerate(self.ranks))

    def __repr__(self):
        return f"EquivariantComplex(ranks={self.ranks}, group={self.group!r})"


# ---------------------------------------------------------------------------
# Fox calculus
# ---------------------------------------------------------------------------

def fox_derivative(w: Word, gen: int) -> GroupRingElt:
    """Free Fox derivative d(w)/d(gen) in classical left coordinates."""
    terms: list[tuple[Word, int]] = []
    prefix: Word = EMPTY_WORD
    for g, e in w:
        if g == gen:
            if e == 1:
                terms.append((prefix, 1))
            else:
                terms.append((word_mul(prefix, ((g, -1),)), -1))
        prefix = word_mul(prefix, ((g, e),))
    return _gr(terms)


def presentation_complex(p: GroupPresentation) -> EquivariantComplex:
    """Three-term complex of the presentation 2-complex, Fox-calculus boundaries.

    Classical coordinates are d1 = (x - 1) and d2[x, r] = dr/dx; the stored
    matrices carry their bar-involutes (right-module coordinates).
    """
    g, r = p.num_generators, len(p.relators)
    d1 = Matrix(1, g, [[_gen_minus_one_bar(i) for i in range(g)]])
    d2 = Matrix(g, r, [[fox_derivative(p.relators[j], i).bar() for j in range(r)]
                       for i in range(g)])
    if r == 0:
        return EquivariantComplex(p, (1, g), (d1,))
    return EquivariantComplex(p, (1, g, r), (d1, d2))


# ---------------------------------------------------------------------------
# circle product (mapping cone over a new central generator)
# ---------------------------------------------------------------------------

def circle_product(c: EquivariantComplex) -> EquivariantComplex:
    """The complex of X x S^1 over G x Z: C'_k = C_k + C_{k-1}.

    The new generator t is central (commutator relators with every old
    generator); the connecting blocks are (-1)^deg (t^-1 - 1) in stored
    coordinates, the Koszul sign making consecutive boundaries anticommute.
    """
    p = c.group
    t = p.num_generators
    commutators = [free_reduce([(t, 1), (i, 1), (t, -1), (i, -1)])
                   for i in range(p.num_generators)]
    new_group = GroupPresentation(t + 1, list(p.relators) + commutators)

    n = list(c.ranks)
    top = c.top
    new_ranks = [n[0]] + [n[k] + n[k - 1] for k in range(1, top + 1)] + [n[top]]

    def old_boundary(k: int) -> Matrix | None:
        # d_k: C_k -> C_{k-1}, or None when out of range
        if 1 <= k <= top:
            return c.boundaries[k - 1]
        return None

    t_block = _gr([(((t, -1),), 1), (EMPTY_WORD, -1)])  # t^-1 - 1

    new_boundaries = []
    for k in range(1, top + 2):
        rows = new_ranks[k - 1]
        cols = new_ranks[k]
        top_rows = n[k - 1] if k - 1 <= top else 0
        left_cols = n[k] if k <= top else 0
        entries = [[GroupRingElt() for _ in range(cols)] for _ in range(rows)]
        mk = old_boundary(k)
        if mk is not None:
            for i in range(mk.rows):
                for j in range(mk.cols):
                    entries[i][j] = mk[i, j]
        # connecting block D_{k-1} = (-1)^(k-1) (t^-1 - 1) I on the C_{k-1} summand
        sign = -1 if (k - 1) % 2 else 1
        d_entry = t_block * sign
        for i in range(n[k - 1]):
            entries[i][left_cols + i] = d_entry
        mk1 = old_boundary(k - 1)
        if mk1 is not None:
            for i in range(mk1.rows):
                for j in range(mk1.cols):
                    entries[top_rows + i][left_cols + j] = mk1[i, j]
        new_boundaries.append(Matrix(rows, cols, entries))
    return EquivariantComplex(new_group, new_ranks, new_boundaries)


# ---------------------------------------------------------------------------
# finite covers
# ---------------------------------------------------------------------------

def cover_complex(c: EquivariantComplex, action: PermAction) -> EquivariantComplex:
    """The same complex over the basepoint-stabilizer subgroup of a finite cover.

    Each free rank multiplies by the degree; a stored entry word w contributes
    rewrite(T[j]^-1 w T[i]) from lift (cell, i) to lift (cell, j) where
    j = w(i).  Lifts are indexed cell-major: index = cell*degree + coset.
    """
    if action.presentation != c.group:
        raise ValueError("action is not an action of the complex's group")
    sub, data = reidemeister_schreier(c.group, action)
    d = action.degree
    new_ranks = [r * d for r in c.ranks]
    new_boundaries = []
    for b in c.boundaries:
        acc: dict[tuple[int, int], dict[Word, int]] = {}
        for f in range(b.rows):
            for e in range(b.cols):
                entry = b[f, e]
                if not entry:
                    continue
                for w, coeff in entry.terms.items():
                    for i in range(d):
                        j = action.apply_word(w, i)
                        h = data.rewrite(word_mul(
                            word_inverse(data.transversal[j]), w, data.transversal[i]))
                        cell = acc.setdefault((f * d + j, e * d + i), {})
                        cell[h] = cell.get(h, 0) + coeff
        rows, cols = b.rows * d, b.cols * d
        entries = [[GroupRingElt() for _ in range(cols)] for _ in range(rows)]
        for (i, j), terms in acc.items():
            entries[i][j] = _gr(terms)
        new_boundaries.append(Matrix(rows, cols, entries))
    return EquivariantComplex(sub, new_ranks, new_boundaries)


# ---------------------------------------------------------------------------
# standard presentations
# ---------------------------------------------------------------------------

def cyclic_group(p: int) -> GroupPresentation:
    return GroupPresentation(1, [word_power(0, p)])


def free_group(g: int) -> GroupPresentation:
    return GroupPresentation(g)


def surface_group(g: int) -> GroupPresentation:
    """<a1, b1, ..., ag, bg | prod [ai, bi]> with a_i = 2i, b_i = 2i+1."""
    rel: list[tuple[int, int]] = []
    for i in range(g):
        a, b = 2 * i, 2 * i + 1
        rel += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return GroupPresentation(2 * g, [free_reduce(rel)])


def torus2_group() -> GroupPresentation:
    return GroupPresentation(2, [free_reduce([(0, 1), (1, 1), (0, -1), (1, -1)])])


def trefoil_group() -> GroupPresentation:
    # a b a b^-1 a^-1 b^-1
    return GroupPresentation(2, [free_reduce([(0, 1), (1, 1), (0, 1),
                                              (1, -1), (0, -1), (1, -1)])])


def quaternion_presentation() -> GroupPresentation:
    """Q8 = <x, y | x^2 y^-2, x y x y^-1>."""
    r1 = free_reduce([(0, 1), (0, 1), (1, -1), (1, -1)])
    r2 = free_reduce([(0, 1), (1, 1), (0, 1), (1, -1)])
    return GroupPresentation(2, [r1, r2])


def quaternion_elements() -> list[tuple[int, int]]:
    """The eight elements of Q8 encoded as (a, b) with value x^a y^b."""
    return [(a, b) for b in range(2) for a in range(4)]


def quaternion_mul(e1: tuple[int, int], e2: tuple[int, int]) -> tuple[int, int]:
    # y x^a = x^-a y and y^2 = x^2
    a1, b1 = e1
    a2, b2 = e2
    a = a1 + (a2 if b1 == 0 else -a2)
    b = b1 + b2
    if b == 2:
        a += 2
        b = 0
    return (a % 4, b % 2)


def quaternion_regular_action() -> PermAction:
    """Left-regular action of Q8 on its eight elements (degree-8 cover by S^3)."""
    elems = quaternion_elements()
    idx = {e: i for i, e in enumerate(elems)}
    perms = [tuple(idx[quaternion_mul(g, h)] for h in elems) for g in [(1, 0), (0, 1)]]
    return PermAction(quaternion_presentation(), perms)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

class CatalogEntry:
    """A named, validated complex with frozen trivial-representation homology."""

    __slots__ = ("name", "parameters", "complex", "expected_trivial_dims",
                 "notes", "closed")

    def __init__(self, name, parameters, cx, expected_trivial_dims, notes, closed):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "parameters", tuple(parameters))
        object.__setattr__(self, "complex", cx)
        object.__setattr__(self, "expected_trivial_dims", tuple(expected_trivial_dims))
        object.__setattr__(self, "notes", notes)
        object.__setattr__(self, "closed", closed)
        if closed and cx.euler_characteristic() != 0:
            raise ValueError(f"closed entry {name} has nonzero Euler characteristic")

    def __setattr__(self, *a):
        raise AttributeError("CatalogEntry is immutable")

    def __repr__(self):
        return f"CatalogEntry({self.spec_string()!r}, ranks={self.complex.ranks})"

    def spec_string(self) -> str:
        if self.parameters:
            return f"{self.name}:{','.join(str(x) for x in self.parameters)}"
        return self.name


def _sphere_complex() -> EquivariantComplex:
    triv = GroupPresentation(0)
    d1 = Matrix(1, 0, [[]])
    d2 = Matrix(0, 1, [])
    return EquivariantComplex(triv, (1, 0, 1), (d1, d2))


def _point_complex() -> EquivariantComplex:
    return EquivariantComplex(GroupPresentation(0), (1,), ())


def _circle_complex() -> EquivariantComplex:
    return circle_product(_point_complex())


def _lens_complex(p: int, q: int) -> EquivariantComplex:
    qbar = pow(q % p, -1, p) if p > 1 else 0
    group = cyclic_group(p)
    d1 = Matrix(1, 1, [[_gen_minus_one_bar(0)]])
    # bar(1 + x + ... + x^(p-1)) = sum of x^-i
    d2 = Matrix(1, 1, [[_gr([(word_power(0, -i), 1) for i in range(p)])]])
    d3 = Matrix(1, 1, [[_gr([(word_power(0, -qbar), 1), (EMPTY_WORD, -1)])]])
    return EquivariantComplex(group, (1, 1, 1, 1), (d1, d2, d3))


def _quaternion_complex() -> EquivariantComplex:
    """Rank (1,2,2,1) complex of S^3/Q8 from the period-4 resolution of Q8.

    Classical coordinates (transcribed): d2 columns are the Fox rows of the
    two relators, d3 = (x-1, 1-xy); stored matrices are their bar-involutes.
    Gated by the regression tests: d.d = 0 under the regular representation,
    trivial dims (1,0,0,1), integral H1 invariant factors (2,2).
    """
    p = quaternion_presentation()
    x, y = 0, 1
    d1 = Matrix(1, 2, [[_gen_minus_one_bar(x), _gen_minus_one_bar(y)]])
    d2 = Matrix(2, 2, [
        [fox_derivative(p.relators[0], x).bar(), fox_derivative(p.relators[1], x).bar()],
        [fox_derivative(p.relators[0], y).bar(), fox_derivative(p.relators[1], y).bar()],
    ])
    # bar(x - 1) = x^-1 - 1 and bar(1 - xy) = 1 - y^-1 x^-1
    d3 = Matrix(2, 1, [
        [_gr([(((x, -1),), 1), (EMPTY_WORD, -1)])],
        [_gr([(EMPTY_WORD, 1), (free_reduce([(y, -1), (x, -1)]), -1)])],
    ])
    return EquivariantComplex(p, (1, 2, 2, 1), (d1, d2, d3))


def _trivial_dims_by_augmentation(c: EquivariantComplex) -> tuple[int, ...]:
    """Homology dims over Q under the trivial 1-dim rep, via integer ranks."""
    ranks = []
    for b in c.boundaries:
        rows = [[b[i, j].augmentation() for j in range(b.cols)] for i in range(b.rows)]
        ranks.append(int_matrix_rank(rows) if b.rows and b.cols else 0)
    ranks = [0] + ranks + [0]
    return tuple(c.ranks[i] - ranks[i] - ranks[i + 1] for i in range(len(c.ranks)))


CATALOG_NAMES = ("lens", "s1xs2", "t3", "s1x_sigma", "quaternion_q8",
                 "trefoil_exterior", "handlebody", "torus2d", "free_product_of")


def catalog_complex(name: str, params=()) -> CatalogEntry:
    """Build a validated catalog entry; raises ValueError on unknown input."""
    params = list(params)
    if name == "lens":
        if len(params) != 2:
            raise ValueError("lens requires parameters p,q")
        p, q = int(params[0]), int(params[1])
        if p <= 0:
            raise ValueError("lens space requires p > 0")
        if math.gcd(p, q) != 1:
            raise ValueError("lens space requires gcd(p, q) = 1")
        return CatalogEntry("lens", (p, q), _lens_complex(p, q), (1, 0, 0, 1),
                            "L(p,q): cyclic group, d3 twisted by the inverse of q mod p",
                            closed=True)
    if name == "s1xs2":
        return CatalogEntry("s1xs2", (), circle_product(_sphere_complex()),
                            (1, 1, 1, 1), "circle times sphere", closed=True)
    if name == "t3":
        cx = circle_product(circle_product(_circle_complex()))
        return CatalogEntry("t3", (), cx, (1, 3, 3, 1), "3-torus as an iterated circle product",
                            closed=True)
    if name == "s1x_sigma":
        if len(params) != 1:
            raise ValueError("s1x_sigma requires a genus parameter")
        g = int(params[0])
        if g < 1:
            raise ValueError("genus must be >= 1")
        cx = circle_product(presentation_complex(surface_group(g)))
        return CatalogEntry("s1x_sigma", (g,), cx, (1, 2 * g + 1, 2 * g + 1, 1),
                            "circle times genus-g surface", closed=True)
    if name == "quaternion_q8":
        return CatalogEntry("quaternion_q8", (), _quaternion_complex(), (1, 0, 0, 1),
                            "S^3/Q8 from the period-4 resolution of the quaternion group",
                            closed=True)
    if name == "trefoil_exterior":
        cx = presentation_complex(trefoil_group())
        return CatalogEntry("trefoil_exterior", (), cx, (1, 1, 0),
                            "trefoil knot exterior (presentation 2-complex)", closed=False)
    if name == "handlebody":
        if len(params) != 1:
            raise ValueError("handlebody requires a genus parameter")
        g = int(params[0])
        if g < 0:
            raise ValueError("genus must be >= 0")
        cx = presentation_complex(free_group(g))
        return CatalogEntry("handlebody", (g,), cx, (1, g),
                            "genus-g handlebody (free group)", closed=False)
    if name == "torus2d":
        cx = presentation_complex(torus2_group())
        return CatalogEntry("torus2d", (), cx, (1, 2, 1),
                            "2-torus (obstruction example: free middle Alexander rank)",
                            closed=False)
    if name == "free_product_of":
        if not params:
            raise ValueError("free_product_of requires at least one entry name")
        parts = [catalog_entry_from_string(str(s)) for s in params]
        group = parts[0].complex.group
        from .groups import free_product as fp
        for part in parts[1:]:
            group = fp(group, part.complex.group)
        cx = presentation_complex(group)
        expected = _trivial_dims_by_augmentation(cx)
        label = ",".join(str(s) for s in params)
        return CatalogEntry("free_product_of", tuple(params), cx, expected,
                            f"presentation complex of the free product of [{label}]",
                            closed=False)
    raise ValueError(f"unknown catalog name: {name!r} (know {CATALOG_NAMES})")


def catalog_entry_from_string(spec: str) -> CatalogEntry:
    """Parse "name" or "name:p1,p2" into a catalog entry."""
    if ":" in spec:
        name, _, rest = spec.partition(":")
        params = [s.strip() for s in rest.split(",") if s.strip()]
        parsed = []
        for s in params:
            try:
                parsed.append(int(s))
            except ValueError:
                parsed.append(s)
        return catalog_complex(name.strip(), parsed)
    return catalog_complex(spec.strip(), ())
