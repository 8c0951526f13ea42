"""JSON encoding/decoding for the CLI wire formats.

Schemas: rationals are strings "a" or "a/b"; cyclotomic numbers are
{"conductor": n, "coeffs": [...]}; Laurent polynomials {"terms": {exp: coeff}};
words are lists of signed 1-based generator numbers; complexes carry their
group, ranks and boundary matrices of [coeff, word] term lists.
"""

from __future__ import annotations

from fractions import Fraction

from .alexander import AcyclicityCertificate, TorsionData
from .complexes import EquivariantComplex
from .groups import (GroupPresentation, GroupRingElt, PermAction,
                     word_from_ints, word_to_ints)
from .homology import HomologyReport
from .matrices import Matrix
from .numbers import Cyclo, Laurent
from .reps import UnitaryRep, explicit_rep


class InputError(ValueError):
    """Malformed JSON input (schema violation, bad numbers, bad indices)."""


def fraction_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fraction_from_str(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad rational {s!r}: {e}") from None


def cyclo_to_json(x: Cyclo) -> dict:
    return {"conductor": x.conductor,
            "coeffs": [fraction_to_str(c) for c in x.coeffs]}


def cyclo_from_json(obj) -> Cyclo:
    try:
        n = int(obj["conductor"])
        coeffs = [fraction_from_str(c) for c in obj["coeffs"]]
        return Cyclo(n, coeffs)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad cyclotomic number {obj!r}: {e}") from None


def laurent_to_json(x: Laurent) -> dict:
    return {"terms": {str(e): fraction_to_str(c) for e, c in x.terms.items()}}


def laurent_from_json(obj) -> Laurent:
    try:
        return Laurent({int(e): fraction_from_str(c)
                        for e, c in obj["terms"].items()})
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise InputError(f"bad Laurent polynomial {obj!r}: {e}") from None


def presentation_to_json(p: GroupPresentation) -> dict:
    return {"num_generators": p.num_generators,
            "relators": [word_to_ints(r) for r in p.relators]}


def presentation_from_json(obj) -> GroupPresentation:
    try:
        return GroupPresentation(int(obj["num_generators"]),
                                 [word_from_ints(r) for r in obj["relators"]])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad group presentation: {e}") from None


def _entry_to_json(e: GroupRingElt) -> list:
    return [[c, word_to_ints(w)] for w, c in e.terms.items()]


def _entry_from_json(obj) -> GroupRingElt:
    return GroupRingElt([(word_from_ints(w), int(c)) for c, w in obj])


def complex_to_json(c: EquivariantComplex) -> dict:
    return {
        "group": presentation_to_json(c.group),
        "ranks": list(c.ranks),
        "boundaries": [[[_entry_to_json(b[i, j]) for j in range(b.cols)]
                        for i in range(b.rows)] for b in c.boundaries],
    }


def complex_from_json(obj) -> EquivariantComplex:
    try:
        group = presentation_from_json(obj["group"])
        ranks = [int(r) for r in obj["ranks"]]
        boundaries = []
        for k, rows in enumerate(obj["boundaries"]):
            entries = [[_entry_from_json(e) for e in row] for row in rows]
            boundaries.append(Matrix(ranks[k], ranks[k + 1], entries))
        return EquivariantComplex(group, ranks, boundaries)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise InputError(f"bad complex: {e}") from None


def action_to_json(a: PermAction) -> list:
    return [list(img) for img in a.generator_images]


def rep_to_json(r: UnitaryRep) -> dict:
    return {
        "dim": r.dim,
        "conductor": r.conductor,
        "generators": [[[cyclo_to_json(m[i, j]) for j in range(m.cols)]
                        for i in range(m.rows)] for m in r.generator_images],
        "provenance": r.provenance,
    }


def rep_from_json(obj, group: GroupPresentation) -> UnitaryRep:
    """Bind a serialized representation to the group of the paired complex."""
    try:
        dim = int(obj["dim"])
        mats = []
        for rows in obj["generators"]:
            entries = [[cyclo_from_json(x) for x in row] for row in rows]
            mats.append(Matrix(len(rows), len(rows[0]) if rows else 0, entries))
        provenance = str(obj.get("provenance", "explicit"))
        return explicit_rep(group, mats, provenance=provenance, dim=dim)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise InputError(f"bad representation: {e}") from None


def torsion_to_json(td: TorsionData) -> dict:
    return {str(i): {"free_rank": td.free_ranks[i],
                     "polys": [laurent_to_json(p) for p in td.torsion_polys[i]]}
            for i in range(td.degrees())}


def certificate_to_json(cert: AcyclicityCertificate) -> dict:
    return {
        "z_order": cert.z_order,
        "z_power": cert.z_power,
        "character": rep_to_json(cert.character),
        "torsion": torsion_to_json(cert.torsion),
        "dims": list(cert.report.dims),
        "verified": True,
    }


def report_to_json(r: HomologyReport) -> dict:
    return r.to_json()
