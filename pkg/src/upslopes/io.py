"""
JSON wire format for contexts, matrices, polygons and reports.

Matrices are written as::

    {"context": {"p": 3, "m": 3, "prec": 40, "cyclo_order": 9},
     "rows": [["z", "z^2", "z^8"], ...]}

with entries in the cyclotomic literal grammar.  Rationals are written
as ``"num/den"`` strings so that output is exact and deterministic.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .padic import CMatrix, CycloElt, PadicContext


def frac_str(q) -> str:
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)


def parse_frac(s) -> Fraction:
    return Fraction(s)


def matrix_to_json(M: CMatrix, name: str | None = None, **extra) -> dict:
    out = {}
    if name is not None:
        out["name"] = name
    out.update(extra)
    out["context"] = M.ctx.to_json()
    out["rows"] = [[M[i, j].literal() for j in range(M.ncols)] for i in range(M.nrows)]
    return out


def matrix_from_json(data: dict, ctx: PadicContext | None = None) -> CMatrix:
    if ctx is None:
        ctx = PadicContext.from_json(data["context"])
    rows = data["rows"]
    return CMatrix.from_entries(ctx, [[_entry(ctx, x) for x in r] for r in rows])


def _entry(ctx, x):
    if isinstance(x, int):
        return CycloElt.from_int(ctx, x)
    return CycloElt.parse(ctx, str(x))


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def write_matrix(path, M: CMatrix, name: str | None = None):
    """Write a matrix file with one row per line."""
    data = matrix_to_json(M, name)
    lines = ["{"]
    if name is not None:
        lines.append('  "name": %s,' % json.dumps(name))
    lines.append('  "context": %s,' % json.dumps(data["context"]))
    lines.append('  "rows": [')
    rows = [json.dumps(r) for r in data["rows"]]
    lines.append(",\n".join("    " + r for r in rows))
    lines.append("  ]")
    lines.append("}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
