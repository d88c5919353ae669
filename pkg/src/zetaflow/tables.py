"""Tabular output for batch evaluations.

One row per evaluation point: the point, the complex value, and the
certified tail bound (zero when no truncation was involved). Floats are
written with shortest round-trip formatting, so reparsing reproduces the
exact bit pattern; the decimal separator is always '.' regardless of
locale because repr never localizes.
"""

from __future__ import annotations

import json
import sys
from typing import NamedTuple, Sequence

from .errors import ValidationError

HEADER = ("s_re", "s_im", "value_re", "value_im", "tail_bound")


class ResultRow(NamedTuple):
    s: complex
    value: complex
    tail_bound: float


def render_table(rows: Sequence[ResultRow], format: str) -> str:
    if format == "csv":
        lines = [",".join(HEADER)]
        for r in rows:
            s, v = complex(r.s), complex(r.value)
            lines.append(
                f"{s.real!r},{s.imag!r},{v.real!r},{v.imag!r},{float(r.tail_bound)!r}"
            )
        return "\n".join(lines) + "\n"
    if format == "json":
        records = [
            {
                "s_re": complex(r.s).real,
                "s_im": complex(r.s).imag,
                "value_re": complex(r.value).real,
                "value_im": complex(r.value).imag,
                "tail_bound": float(r.tail_bound),
            }
            for r in rows
        ]
        return json.dumps(records, indent=1) + "\n"
    raise ValidationError(f"format: expected 'csv' or 'json', got {format!r}")


def emit_table(rows: Sequence[ResultRow], format: str, path: str | None = None) -> None:
    """Write rows as CSV or JSON to ``path``, or to stdout when path is None."""
    text = render_table(rows, format)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_table(path: str) -> list[ResultRow]:
    """Parse a table previously written by emit_table (either format)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("["):
        records = json.loads(text)
        return [
            ResultRow(
                s=complex(rec["s_re"], rec["s_im"]),
                value=complex(rec["value_re"], rec["value_im"]),
                tail_bound=float(rec["tail_bound"]),
            )
            for rec in records
        ]
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or tuple(lines[0].split(",")) != HEADER:
        raise ValidationError(f"unrecognized table header in {path}")
    out = []
    for ln in lines[1:]:
        sr, si, vr, vi, tb = (float(x) for x in ln.split(","))
        out.append(ResultRow(s=complex(sr, si), value=complex(vr, vi), tail_bound=tb))
    return out
