"""JSON (de)serialization for towers, field elements, matrices, subspaces and
codes.

Field elements appear in two forms: the Fe form {level, coeffs} with the
coefficient vector over the prime field, and (inside matrices and code bases)
plain integer codes, whose base-p digits are exactly those coefficients.
Towers serialize with their derived moduli; deserialization re-derives the
deterministic moduli and verifies they match, so files are portable.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import IoError, UsageError
from .fields import Fe, FieldTower, make_tower
from .fqlinalg import Mat
from .linsets import HammingCode
from .rankcodes import RankCode
from .subspaces import FqSubspace


def tower_to_json(tower: FieldTower) -> dict[str, Any]:
    base, mid = tower.base, tower.mid
    return {
        "p": tower.p,
        "e": tower.e,
        "n": tower.n,
        "t": tower.t,
        "modulus_mid": [base.prime_vec(c) for c in tower.modulus_mid],
        "modulus_top": [mid.prime_vec(c) for c in tower.modulus_top],
    }


def tower_from_json(obj: dict[str, Any]) -> FieldTower:
    try:
        tower = make_tower(int(obj["p"]), int(obj["e"]), int(obj["n"]), int(obj["t"]))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed tower object: {exc}") from exc
    want_mid = [tower.base.prime_vec(c) for c in tower.modulus_mid]
    want_top = [tower.mid.prime_vec(c) for c in tower.modulus_top]
    if obj.get("modulus_mid") != want_mid or obj.get("modulus_top") != want_top:
        raise UsageError("tower moduli do not match the deterministic derivation")
    return tower


def fe_to_json(x: Fe) -> dict[str, Any]:
    return {"level": x.level, "coeffs": x.prime_coeffs()}


def fe_from_json(tower: FieldTower, obj: dict[str, Any]) -> Fe:
    level = obj["level"]
    F = tower.field(level)
    coeffs = obj["coeffs"]
    if len(coeffs) != F.dim_over_prime:
        raise UsageError("element coefficient vector has wrong length")
    code = 0
    for c in reversed(coeffs):
        code = code * tower.p + int(c) % tower.p
    return Fe(tower, level, code)


def mat_to_json(tower: FieldTower, level: str, M: Mat) -> dict[str, Any]:
    return {"level": level, "rows": M.rows, "cols": M.cols,
            "entries": [list(r) for r in M.data]}


def _checked_entries(order: int, rows) -> list[list[int]]:
    out = []
    for row in rows:
        vals = [int(x) for x in row]
        if any(not 0 <= x < order for x in vals):
            raise UsageError(f"entry out of range for field of order {order}")
        out.append(vals)
    return out


def mat_from_json(tower: FieldTower, obj: dict[str, Any]) -> Mat:
    F = tower.field(obj["level"])
    return Mat.from_rows(F, _checked_entries(F.order, obj["entries"]),
                         int(obj["cols"]))


def subspace_to_json(U: FqSubspace) -> dict[str, Any]:
    tower = U.tower
    mid = tower.mid
    return {
        "tower": tower_to_json(tower),
        "r": U.r,
        "k": U.k,
        "basis_mid": [
            [{"level": "mid", "coeffs": mid.prime_vec(c)} for c in v]
            for v in U.basis_mid
        ],
    }


def subspace_from_json(obj: dict[str, Any]) -> FqSubspace:
    tower = tower_from_json(obj["tower"])
    vectors = []
    for vec in obj["basis_mid"]:
        vectors.append(tuple(fe_from_json(tower, fe).code for fe in vec))
    U = FqSubspace.from_mid_vectors(tower, int(obj["r"]), vectors)
    if "k" in obj and U.k != int(obj["k"]):
        raise UsageError("stored k does not match the basis rank")
    return U


def rankcode_to_json(C: RankCode) -> dict[str, Any]:
    return {
        "q": C.q,
        "p": C.field.p,
        "e": C.field.dim_over_prime,
        "m": C.m,
        "n": C.n,
        "basis": [[list(row) for row in M] for M in C.basis_matrices()],
    }


def rankcode_from_json(obj: dict[str, Any]) -> RankCode:
    p, e = int(obj["p"]), int(obj["e"])
    field = make_tower(p, e, 1, 1).base
    if field.order != int(obj["q"]):
        raise UsageError("q does not equal p^e")
    return RankCode.from_generators(field, int(obj["m"]), int(obj["n"]),
                                    [_checked_entries(field.order, M)
                                     for M in obj["basis"]])


def hamming_to_json(tower: FieldTower, C: HammingCode,
                    enumerator: dict[int, int] | None = None,
                    convention: str | None = None) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "field": {"p": tower.p, "e": tower.e, "n": tower.n},
        "k": C.k,
        "N": C.N,
        "d": C.d,
        "generator": [list(r) for r in C.gen],
    }
    if enumerator is not None:
        obj["enumerator"] = {str(w): c for w, c in sorted(enumerator.items())}
        obj["convention"] = convention
    return obj


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators (determinism)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def load_file(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def dump_file(path: str, obj: Any) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True, indent=1)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
