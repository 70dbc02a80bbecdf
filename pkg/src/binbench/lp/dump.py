"""Plain-text LP listing for cross-checking with external solvers.

Format::

    min
    <c_1> <c_2> ... <c_n>
    <a_11> ... <a_1n> >= <b_1>
    ...
    end

Lines starting with ``#`` are comments. Floats are written with ``repr`` so a
dump parses back to the same LP.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from binbench.lp.simplex import Constraint, LinearProgram, Relation


def dump_lp(lp: LinearProgram) -> str:
    lines = []
    if lp.names is not None:
        lines.append("# vars: " + " ".join(lp.names))
    lines.append("min")
    lines.append(" ".join(repr(float(v)) for v in lp.objective))
    for row in lp.constraints:
        coeffs = " ".join(repr(float(v)) for v in row.coeffs)
        lines.append(f"{coeffs} {row.relation.value} {float(row.rhs)!r}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_lp_text(text: str) -> LinearProgram:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or lines[0].lower() != "min":
        raise ValueError("first line must be 'min'")
    if len(lines) < 2:
        raise ValueError("missing objective line")
    c = np.array([float(x) for x in lines[1].split()], dtype=float)
    rows = []
    for ln in lines[2:]:
        if ln.lower() == "end":
            break
        for rel in (Relation.LE, Relation.GE, Relation.EQ):
            if rel.value in ln:
                left, rhs = ln.split(rel.value)
                break
        else:
            raise ValueError(f"constraint line must contain <=, >= or =: {ln!r}")
        a = [float(x) for x in left.split()]
        if len(a) != len(c):
            raise ValueError(f"constraint has {len(a)} coefficients, expected {len(c)}")
        rows.append(Constraint(np.array(a), rel, float(rhs)))
    return LinearProgram(c, rows)


def write_lp(lp: LinearProgram, path: str | Path) -> None:
    Path(path).write_text(dump_lp(lp))
