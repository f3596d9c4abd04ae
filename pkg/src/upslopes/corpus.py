"""
Bundled data: the two ``U_3`` matrices on weight-2 forms (levels 27 and 81),
the recipe for the Hurwitz order example, and its unit table.

>>> c = fixtures()
>>> c.m3[0, 0].literal()
'z'
>>> from upslopes.padic import CycloElt
>>> c.m4[0, 0] == CycloElt.zeta(c.m4.ctx, 19)
True
"""

from __future__ import annotations

from dataclasses import dataclass

from .io import load_json, matrix_from_json
from .padic import CMatrix, PadicContext
from .quatalg import unit_table
from .upmat import FIXTURE_DIR, UpRecipe, example53_recipe

MATRIX_NAMES = ("m3", "m4")


def fixture_path(name: str):
    return FIXTURE_DIR / ("%s.json" % name)


def load_fixture_matrix(name: str, prec: int | None = None) -> CMatrix:
    """Load ``m3`` or ``m4``, optionally at another precision."""
    name = name.lower()
    if name not in MATRIX_NAMES:
        raise KeyError("unknown fixture matrix %r" % name)
    data = load_json(fixture_path(name))
    ctx = PadicContext.from_json(data["context"])
    if prec is not None:
        ctx = ctx.with_prec(prec)
    return matrix_from_json(data, ctx)


@dataclass
class Corpus:
    m3: CMatrix
    m4: CMatrix
    recipe: UpRecipe
    units: list

    def matrix(self, name: str) -> CMatrix:
        return {"m3": self.m3, "m4": self.m4}[name.lower()]

    def to_json(self) -> dict:
        from .io import matrix_to_json
        return {
            "m3": matrix_to_json(self.m3, "M3"),
            "m4": matrix_to_json(self.m4, "M4"),
            "recipe": self.recipe.to_json(),
            "units": [{"unit": str(u), "doubled": list(u.doubled), "image_mod_9": list(img)}
                      for u, img in self.units],
        }


def fixtures(prec: int | None = None) -> Corpus:
    """The bundled corpus; matrices are read at ``prec`` if given."""
    return Corpus(load_fixture_matrix("m3", prec), load_fixture_matrix("m4", prec),
                  example53_recipe(), unit_table())
