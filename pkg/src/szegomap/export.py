"""Deterministic CSV/JSON text with 17 significant digits for floats."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def to_json(obj, indent: int = 0) -> str:
    """Serialize dicts, lists, strings and numbers; key order is preserved."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if all(not isinstance(v, (Mapping, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(to_json(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, complex):
        return "[" + fmt(obj.real) + ", " + fmt(obj.imag) + "]"
    return fmt(obj)


def csv_text(header: Iterable[str], rows: Iterable[Iterable], comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_atomic(out_dir: Path, files: Mapping[str, str]) -> None:
    """Write every file via a temporary name and rename once all succeed."""
    out_dir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(text)
            staged.append((tmp, out_dir / name))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)


def basis_csv(basis) -> str:
    h = basis.hessenberg
    rows = [(k, i, h[i, k].real, h[i, k].imag) for k in range(h.shape[1]) for i in range(k + 2)]
    comments = [
        f"n={basis.max_degree}",
        f"c={fmt(basis.center.real)},{fmt(basis.center.imag)}",
        f"r={fmt(basis.scale)}",
        f"nodes={basis.rule.size}",
        "recurrence: u*p_k = sum_i H[i,k] p_i with u = (z - c)/r",
    ]
    return csv_text(["k", "i", "re_h", "im_h"], rows, comments)


def kernel_csv(exp) -> str:
    rows = [(k, v.real, v.imag, e) for k, (v, e) in enumerate(zip(exp.zeta_values, exp.partial_energy))]
    return csv_text(["k", "re_p", "im_p", "energy"], rows)


def map_grid_csv(z: np.ndarray, values: np.ndarray) -> str:
    rows = [(zi.real, zi.imag, vi.real, vi.imag, abs(vi)) for zi, vi in zip(z, values)]
    return csv_text(["re_z", "im_z", "re_j", "im_j", "abs_j"], rows)
