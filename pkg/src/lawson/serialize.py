"""JSON encoding with bit-stable complex numbers.

Complex values become ``{"re": "...", "im": "..."}`` with 17 significant
digits; key order is fixed by construction, never sorted at dump time.
"""

from __future__ import annotations

import json
import math

from .linalg import Mat2

SCHEMA = "lawson/1"

PROFILE_KEYS = ("index", "zeta", "A", "G", "t1", "t2", "t3", "t4", "t12", "t13", "t14",
                "t123", "surface_traces", "unitarizable", "defect", "relation_defect",
                "status", "error")


def dec(x: float) -> str:
    return format(float(x) + 0.0, ".17g")  # + 0.0 folds -0 into 0


def cnum(z) -> dict:
    z = complex(z)
    return {"re": dec(z.real), "im": dec(z.imag)}


def real(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else dec(x)


def mat(m: Mat2) -> list:
    return [[cnum(m.a11), cnum(m.a12)], [cnum(m.a21), cnum(m.a22)]]


def encode(obj):
    """Recursively convert numbers, matrices and containers to JSON-ready values."""
    if isinstance(obj, Mat2):
        return mat(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, complex):
        return cnum(obj)
    if isinstance(obj, float):
        return real(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return encode(obj.item())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(encode(obj), ensure_ascii=True, separators=(", ", ": "))


def document(**fields) -> dict:
    out = {"schema": SCHEMA}
    out.update(fields)
    return out


def profile_record(p) -> dict:
    rec = {"schema": SCHEMA}
    for k in PROFILE_KEYS:
        rec[k] = getattr(p, k)
    return rec


def profile_lines(profiles) -> str:
    return "".join(dumps(profile_record(p)) + "\n" for p in profiles)


def emit_profile(profiles, path) -> None:
    """Newline-delimited JSON, one profile per line."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(profile_lines(profiles))


def parse_cnum(d) -> complex:
    return complex(float(d["re"]), float(d["im"]))
