"""Acyclicity certificates for fibered-type complexes.

Pipeline: specialize the complex along a surjective grading pi -> Z into
Q[t, t^-1] matrices, present each homology module over that PID (free ranks
plus torsion polynomials), pick the smallest root of unity avoiding every
middle-degree torsion polynomial, and certify acyclicity of the resulting
character both directly and through the universal-coefficient dimension count.
"""

from __future__ import annotations

import math

from .complexes import EquivariantComplex
from .groups import grading_weight, verify_grading
from .homology import CrossCheckError, HomologyReport, twisted_homology
from .matrices import (Matrix, kernel_basis_poly, poly_diagonal,
                       smith_normal_form_poly, solve_in_column_span)
from .numbers import Laurent, cyclotomic_polynomial, euler_phi
from .reps import UnitaryRep, character_from_grading


class GradingError(ValueError):
    """The grading does not vanish on relators or is not surjective."""


class FreeRankObstruction(ValueError):
    """A homology module has positive free rank: no character of the fibered
    form can make the complex acyclic."""

    def __init__(self, degree: int, free_rank: int):
        self.degree = degree
        self.free_rank = free_rank
        super().__init__(
            f"H_{degree} over Q[t, t^-1] has free rank {free_rank}; "
            f"no root-of-unity character along this grading is acyclic")


class TorsionData:
    """Free ranks and torsion polynomials of H_*(-; Q[t, t^-1]) per degree.

    Torsion polynomials are monic with nonzero constant term and non-unit.
    Data computed by torsion_invariants additionally lists them in
    divisibility order (Smith normal form); hand-built instances may not.
    """

    __slots__ = ("free_ranks", "torsion_polys")

    def __init__(self, free_ranks, torsion_polys):
        free_ranks = tuple(int(x) for x in free_ranks)
        torsion_polys = tuple(tuple(ps) for ps in torsion_polys)
        if len(free_ranks) != len(torsion_polys):
            raise ValueError("free_ranks and torsion_polys must align per degree")
        for ps in torsion_polys:
            for p in ps:
                if not p or p.is_unit():
                    raise ValueError("torsion polynomials must be non-unit and nonzero")
                if p.valuation() != 0 or p.leading_coeff() != 1:
                    raise ValueError("torsion polynomials must be unit-normalized")
        object.__setattr__(self, "free_ranks", free_ranks)
        object.__setattr__(self, "torsion_polys", torsion_polys)

    def in_divisibility_order(self) -> bool:
        return all(ps[i].divides(ps[i + 1])
                   for ps in self.torsion_polys for i in range(len(ps) - 1))

    def __setattr__(self, *a):
        raise AttributeError("TorsionData is immutable")

    def degrees(self) -> int:
        return len(self.free_ranks)

    def __repr__(self):
        return f"TorsionData(free={self.free_ranks}, torsion={self.torsion_polys})"


def laurent_specialize(c: EquivariantComplex, phi) -> list[Matrix]:
    """Boundary matrices over Q[t, t^-1] under the ring map g -> t^phi(g).

    The d.d = 0 identity is verified over the Laurent ring (hard error).
    """
    if not verify_grading(c.group, phi):
        raise GradingError("grading does not vanish on all relators")
    mats = []
    for b in c.boundaries:
        entries = []
        for i in range(b.rows):
            row = []
            for j in range(b.cols):
                terms: dict[int, int] = {}
                for w, coeff in b[i, j].terms.items():
                    e = grading_weight(phi, w)
                    terms[e] = terms.get(e, 0) + coeff
                row.append(Laurent(terms))
            entries.append(row)
        mats.append(Matrix(b.rows, b.cols, entries))
    for t in range(len(mats) - 1):
        if mats[t].cols and mats[t + 1].cols and mats[t].rows:
            if not (mats[t] @ mats[t + 1]).is_zero():
                raise ValueError(f"d{t + 1}.d{t + 2} != 0 over Q[t, t^-1]")
    return mats


def torsion_invariants(mats: list[Matrix], ranks) -> TorsionData:
    """Present each H_i = ker d_i / im d_{i+1} over the PID Q[t, t^-1].

    A free kernel basis K is computed per degree, the image of d_{i+1} is
    expressed in that basis (exact division; failure means d.d != 0), and the
    Smith normal form of the relation matrix yields the invariant factors.
    """
    ranks = [int(r) for r in ranks]
    if len(mats) != max(0, len(ranks) - 1):
        raise ValueError("need one matrix per adjacent degree pair")
    one = Laurent.const(1)
    free_ranks = []
    torsion = []
    for i in range(len(ranks)):
        if i == 0:
            kernel = Matrix.identity(ranks[0], one, Laurent())
        else:
            kernel = kernel_basis_poly(mats[i - 1])
        image = mats[i] if i < len(mats) else None
        if image is None or image.cols == 0 or kernel.cols == 0:
            if kernel.cols == 0 and image is not None and not image.is_zero():
                raise ValueError(f"image in degree {i} cannot lie in a zero kernel")
            free_ranks.append(kernel.cols)
            torsion.append(())
            continue
        relations = solve_in_column_span(kernel, image)
        _, d, _ = smith_normal_form_poly(relations)
        diag = poly_diagonal(d)
        nonzero = [x for x in diag if x]
        free_ranks.append(kernel.cols - len(nonzero))
        torsion.append(tuple(x for x in nonzero if not x.is_unit()))
    return TorsionData(free_ranks, torsion)


def alexander_data(c: EquivariantComplex, phi) -> TorsionData:
    return torsion_invariants(laurent_specialize(c, phi), c.ranks)


def select_root_of_unity(td: TorsionData) -> tuple[int, int]:
    """Smallest n >= 2 with Phi_n dividing no torsion polynomial in degrees >= 1.

    Degree-0 torsion is the (1 - t) coset pattern, killed by any z != 1, so it
    is excluded from the divisibility test.  Positive free rank anywhere is a
    hard obstruction (the complex is not of the fibered shape).
    """
    for degree, fr in enumerate(td.free_ranks):
        if fr:
            raise FreeRankObstruction(degree, fr)
    polys = [p for degree in range(1, td.degrees()) for p in td.torsion_polys[degree]]
    max_deg = max((p.degree() for p in polys), default=0)
    n = 2
    while True:
        if euler_phi(n) > max_deg:
            return (n, 1)
        phi_n = cyclotomic_polynomial(n)
        if not any(phi_n.divides(p) for p in polys):
            return (n, 1)
        n += 1


def uct_dims(td: TorsionData, n: int) -> list[int]:
    """Twisted dims under the character t -> zeta_n via universal coefficients.

    dim H_i = free_i + #{p in torsion_i : Phi_n | p}
                      + #{p in torsion_{i-1} : Phi_n | p},
    the last term being the Tor contribution of the degree below.
    """
    if n < 1:
        raise ValueError("root order must be >= 1")
    phi_n = cyclotomic_polynomial(n)

    def hits(degree: int) -> int:
        if degree < 0:
            return 0
        return sum(1 for p in td.torsion_polys[degree] if phi_n.divides(p))

    return [td.free_ranks[i] + hits(i) + hits(i - 1) for i in range(td.degrees())]


class AcyclicityCertificate:
    """A root-of-unity character together with the data certifying acyclicity."""

    __slots__ = ("z_order", "z_power", "character", "report", "torsion")

    def __init__(self, z_order: int, z_power: int, character: UnitaryRep,
                 report: HomologyReport, torsion: TorsionData):
        if not report.acyclic:
            raise ValueError("certificate requires an acyclic report")
        if z_order < 2:
            raise ValueError("certificate requires z != 1 (order >= 2)")
        phi_n = cyclotomic_polynomial(z_order)
        for ps in torsion.torsion_polys[1:]:
            for p in ps:
                if phi_n.divides(p):
                    raise ValueError("certificate root divides a torsion polynomial")
        object.__setattr__(self, "z_order", z_order)
        object.__setattr__(self, "z_power", z_power)
        object.__setattr__(self, "character", character)
        object.__setattr__(self, "report", report)
        object.__setattr__(self, "torsion", torsion)

    def __setattr__(self, *a):
        raise AttributeError("AcyclicityCertificate is immutable")

    def __repr__(self):
        return (f"AcyclicityCertificate(z=zeta_{self.z_order}^{self.z_power}, "
                f"dims={self.report.dims})")


def make_acyclic_fibered(c: EquivariantComplex, phi) -> AcyclicityCertificate:
    """Full pipeline: torsion invariants, root selection, direct verification.

    Requires a surjective grading (gcd of generator images 1).  The direct
    twisted dims must vanish and agree with the universal-coefficient count;
    disagreement is an internal error, not a negative result.
    """
    phi = list(phi)
    if not verify_grading(c.group, phi):
        raise GradingError("grading does not vanish on all relators")
    g = 0
    for v in phi:
        g = math.gcd(g, abs(int(v)))
    if g != 1:
        raise GradingError("grading must be surjective onto Z (gcd of images 1); "
                           "rescale a non-primitive grading before calling")
    mats = laurent_specialize(c, phi)
    td = torsion_invariants(mats, c.ranks)
    n, a = select_root_of_unity(td)
    character = character_from_grading(c.group, phi, n, a)
    report = twisted_homology(c, character)
    expected = uct_dims(td, n)
    if list(report.dims) != expected:
        raise CrossCheckError(
            f"direct dims {report.dims} disagree with UCT dims {expected}")
    if not report.acyclic:
        raise CrossCheckError(
            f"selected character is not acyclic: dims {report.dims}")
    return AcyclicityCertificate(n, a, character, report, td)
