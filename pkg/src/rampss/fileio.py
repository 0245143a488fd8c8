"""JSON file formats for schemes, structures, share bundles and transforms.

Participant indices in structure files are 1-based; symbol indices in
scheme files are 0-based column numbers of ``G``.  Only integers appear.
"""

from __future__ import annotations

import json
from pathlib import Path

from .access import AccessStructure, validate
from .gf import FieldMatrix
from .schemes import LinearScheme, ShareBundle

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{what} must be an integer, got {x!r}")
    return x


def _version(d: dict, kind: str):
    if not isinstance(d, dict):
        raise FormatError(f"{kind} file must hold a JSON object")
    if d.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"{kind} file: unsupported format_version {d.get('format_version')!r}")


def scheme_to_dict(s: LinearScheme) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "p": s.p, "L": s.L, "m": s.m,
        "participants": [{"name": s.names[i], "symbols": s.symbols_of(i)} for i in range(s.n)],
        "G": s.G.tolist(),
    }


def scheme_from_dict(d: dict) -> LinearScheme:
    _version(d, "scheme")
    try:
        p, L, m = (_int(d[k], k) for k in ("p", "L", "m"))
        parts = d["participants"]
        G = d["G"]
    except KeyError as e:
        raise FormatError(f"scheme file is missing {e}") from None
    rows = []
    for r in G:
        row = [_int(x, "G entry") for x in r]
        if any(not 0 <= x < p for x in row):
            raise FormatError(f"G entries must lie in [0, {p})")
        rows.append(row)
    cols = len(rows[0]) if rows else 0
    owner = [None] * cols
    names = []
    for i, part in enumerate(parts):
        names.append(str(part.get("name", f"V{i + 1}")))
        for c in part["symbols"]:
            c = _int(c, "symbol index")
            if not 0 <= c < cols or owner[c] is not None:
                raise FormatError(f"symbol {c} is out of range or owned twice")
            owner[c] = i
    if any(o is None for o in owner):
        raise FormatError("every column of G must be owned by a participant")
    try:
        return LinearScheme(p, L, m, len(parts), tuple(owner), FieldMatrix.from_rows(rows, p, cols), tuple(names))
    except ValueError as e:
        raise FormatError(str(e)) from None


def structure_to_dict(s: AccessStructure) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "n": s.n, "L": s.L,
        "cumulative_minimal": [s.sets(l) for l in range(1, s.L + 1)],
    }


def structure_from_dict(d: dict) -> AccessStructure:
    _version(d, "structure")
    try:
        n, L = _int(d["n"], "n"), _int(d["L"], "L")
        levels = d["cumulative_minimal"]
    except KeyError as e:
        raise FormatError(f"structure file is missing {e}") from None
    for lvl in levels:
        for st in lvl:
            for i in st:
                if not 1 <= _int(i, "participant index") <= n:
                    raise FormatError(f"participant index {i} outside 1..{n}")
    try:
        s = AccessStructure.from_sets(n, levels)
    except ValueError as e:
        raise FormatError(str(e)) from None
    if s.L != L:
        raise FormatError(f"L={L} but {s.L} levels listed")
    problem = validate(s)
    if problem is not None:
        raise FormatError(f"invalid access structure: {problem}")
    return s


def bundle_to_dict(b: ShareBundle, scheme: LinearScheme) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "p": scheme.p,
        "shares": [{"participant": i + 1, "name": scheme.names[i], "values": list(v)}
                   for i, v in zip(b.participants, b.values)],
    }


def bundle_from_dict(d: dict) -> ShareBundle:
    _version(d, "bundle")
    try:
        shares = d["shares"]
        parts = tuple(_int(s["participant"], "participant") - 1 for s in shares)
        vals = tuple(tuple(_int(v, "share value") for v in s["values"]) for s in shares)
    except KeyError as e:
        raise FormatError(f"bundle file is missing {e}") from None
    if len(set(parts)) != len(parts):
        raise FormatError("a participant appears twice in the bundle")
    return ShareBundle(parts, vals)


def matrix_to_dict(M: FieldMatrix) -> dict:
    return {"format_version": FORMAT_VERSION, "p": M.p, "T": M.tolist()}


def matrix_from_dict(d: dict, p: int | None = None) -> FieldMatrix:
    # A bare integer matrix is accepted too; it is then reduced mod the scheme's p.
    if isinstance(d, list):
        if p is None:
            raise FormatError("bare matrix needs a modulus")
        rows = d
    else:
        _version(d, "matrix")
        p = _int(d["p"], "p")
        rows = d["T"]
    rows = [[_int(x, "matrix entry") for x in r] for r in rows]
    try:
        return FieldMatrix.from_rows(rows, p)
    except ValueError as e:
        raise FormatError(str(e)) from None


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"{path}: {e}") from None


def dump_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")
