"""JSON reading and writing.

Integers beyond the 53-bit range that JSON consumers can represent exactly
are written as decimal strings; on input both forms are accepted. Every
parse failure is raised as :class:`InputError` with a ``file:line`` prefix
when the location is known.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import InputError
from .lattice import GramLattice
from .polytope import Polytope3, WeightSystem, convex_hull

SAFE_INT = 2**53


def encode(obj: Any) -> Any:
    """Recursively convert to JSON-safe values (big ints and Fractions as strings)."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str) or isinstance(obj, float):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < SAFE_INT else str(obj)
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else encode(obj.numerator)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return encode(obj.as_dict())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(encode(obj), indent=2, ensure_ascii=False) + "\n"


def parse_int(x: Any, where: str = "value") -> int:
    if isinstance(x, bool):
        raise InputError(f"{where}: expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if x.is_integer() and abs(x) < SAFE_INT:
            return int(x)
        raise InputError(f"{where}: expected an integer, got {x!r}")
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            raise InputError(f"{where}: expected an integer string, got {x!r}") from None
    raise InputError(f"{where}: expected an integer, got {type(x).__name__}")


def parse_int_list(x: Any, where: str, length: int | None = None) -> list[int]:
    if not isinstance(x, list):
        raise InputError(f"{where}: expected a list")
    if length is not None and len(x) != length:
        raise InputError(f"{where}: expected {length} entries, got {len(x)}")
    return [parse_int(v, f"{where}[{i}]") for i, v in enumerate(x)]


def parse_matrix(x: Any, where: str, cols: int | None = None) -> list[list[int]]:
    if not isinstance(x, list):
        raise InputError(f"{where}: expected a list of rows")
    return [parse_int_list(r, f"{where}[{i}]", cols) for i, r in enumerate(x)]


def _locate(text: str, needle: str) -> int | None:
    for lineno, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return lineno
    return None


def load_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{p}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{p}: not UTF-8 ({exc.reason})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def with_context(path: str | Path, fn, data):
    """Run a ``*_from_json`` parser and prefix failures with ``path:line``."""
    try:
        return fn(data)
    except InputError as exc:
        msg = str(exc)
        key = msg.split(":", 1)[0].split("[", 1)[0].split(".")[-1]
        line = None
        try:
            line = _locate(Path(path).read_text(encoding="utf-8"), f'"{key}"')
        except OSError:
            pass
        loc = f"{path}:{line}" if line else str(path)
        raise InputError(f"{loc}: {msg}") from None
    except (ValueError, ArithmeticError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _require(d: Any, key: str, where: str):
    if not isinstance(d, dict):
        raise InputError(f"{where}: expected an object")
    if key not in d:
        raise InputError(f"{key}: missing in {where}")
    return d[key]


# polytopes ------------------------------------------------------------------


def polytope_from_json(d: Any) -> Polytope3:
    name = d.get("name", "") if isinstance(d, dict) else ""
    pts = parse_matrix(_require(d, "vertices", "polytope"), "vertices", 3)
    return convex_hull(pts, str(name))


def polytope_to_json(P: Polytope3) -> dict:
    return {"name": P.name, "vertices": [list(v) for v in P.vertices]}


def weights_from_json(d: Any) -> WeightSystem:
    w = parse_int_list(_require(d, "weights", "weight system"), "weights", 4)
    b = parse_matrix(_require(d, "basis", "weight system"), "basis", 4)
    if len(b) != 3:
        raise InputError(f"basis: expected 3 vectors, got {len(b)}")
    return WeightSystem(tuple(w), tuple(tuple(r) for r in b))


def weights_to_json(ws: WeightSystem) -> dict:
    return {"weights": list(ws.weights), "basis": [list(r) for r in ws.basis]}


# lattices ---------------------------------------------------------------------


def gram_from_json(d: Any) -> GramLattice:
    g = parse_matrix(_require(d, "gram", "gram file"), "gram")
    n = len(g)
    if any(len(r) != n for r in g):
        raise InputError("gram: matrix is not square")
    if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
        raise InputError("gram: matrix is not symmetric")
    return GramLattice.from_rows(g, str(d.get("label", "")))


def gram_to_json(L: GramLattice) -> dict:
    return {"label": L.label, "gram": [list(r) for r in L.gram]}


def picard_gram_json(kept: list[int], dropped: list[int], L: GramLattice) -> dict:
    """Picard Gram output; ray indices are 1-based."""
    return {
        "basis_rays": [i + 1 for i in kept],
        "dropped": [i + 1 for i in dropped],
        "gram": [list(r) for r in L.gram],
    }
