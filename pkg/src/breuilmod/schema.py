"""JSON documents for modules, presentations, morphisms and descriptors.

Layout of a module document (schema version 1):

    {"schema": 1,
     "params": {"p": int, "e": int, "r": int, "f": int},
     "rank": int,
     "fil_exponents": [int],
     "G":    [[entry]],          # rows of columns of APoly entries
     "Nmat": [[entry]]}

where an entry is a length-ep list of length-f lists of integers (powers of
u little-endian, then the F_p-coefficients of the field element).  Optional
fields: "name", "provenance", "validated".  In strict mode unknown fields
and out-of-range coefficients are rejected, with the JSON path reported.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .aring import AMatrix, get_aring
from .core import BreuilModule, FilPresentation, Morphism, validate
from .errors import SchemaError
from .params import GlobalParams, ParameterError
from .simples import SimpleDescriptor

SCHEMA_VERSION = 1

_MODULE_FIELDS = {"schema", "params", "rank", "fil_exponents", "G", "Nmat",
                  "name", "provenance", "validated"}
_PARAMS_FIELDS = {"p", "e", "r", "f"}


def dumps_canonical(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _expect_int(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value


def _expect_list(value, path: str, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected a list, got {type(value).__name__}")
    if length is not None and len(value) != length:
        raise SchemaError(path, f"expected length {length}, got {len(value)}")
    return value


def params_from_doc(doc, path: str = "/params", strict: bool = False) -> GlobalParams:
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    if strict:
        for key in doc:
            if key not in _PARAMS_FIELDS:
                raise SchemaError(f"{path}/{key}", "unknown field")
    for key in ("p", "e", "r"):
        if key not in doc:
            raise SchemaError(f"{path}/{key}", "missing field")
    try:
        return GlobalParams(_expect_int(doc["p"], f"{path}/p"),
                            _expect_int(doc["e"], f"{path}/e"),
                            _expect_int(doc["r"], f"{path}/r"),
                            _expect_int(doc.get("f", 1), f"{path}/f"))
    except ParameterError as exc:
        raise SchemaError(path, str(exc)) from None


def _entry_from_doc(entry, ring, path: str, strict: bool) -> np.ndarray:
    rows = _expect_list(entry, path, ring.ep)
    arr = np.zeros((ring.ep, ring.f), dtype=np.int64)
    for i, row in enumerate(rows):
        row = _expect_list(row, f"{path}/{i}", ring.f)
        for l, c in enumerate(row):
            c = _expect_int(c, f"{path}/{i}/{l}")
            if strict and not 0 <= c < ring.p:
                raise SchemaError(f"{path}/{i}/{l}",
                                  f"coefficient {c} outside [0, {ring.p})")
            arr[i, l] = c % ring.p
    return arr


def _matrix_from_doc(doc, ring, rows, cols, path: str, strict: bool) -> AMatrix:
    outer = _expect_list(doc, path, rows)
    arr = np.zeros((rows, cols, ring.ep, ring.f), dtype=np.int64)
    for i, row in enumerate(outer):
        row = _expect_list(row, f"{path}/{i}", cols)
        for j, entry in enumerate(row):
            arr[i, j] = _entry_from_doc(entry, ring, f"{path}/{i}/{j}", strict)
    return AMatrix(ring, arr)


def _matrix_to_doc(mat: AMatrix) -> list:
    return mat.array.tolist()


def check_schema_version(doc, strict: bool):
    if "schema" not in doc:
        raise SchemaError("/schema", "missing field")
    if _expect_int(doc["schema"], "/schema") != SCHEMA_VERSION:
        raise SchemaError("/schema", f"unsupported version {doc['schema']}")


def module_to_doc(M: BreuilModule, name: str | None = None,
                  validated: bool | None = None) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "params": {"p": M.params.p, "e": M.params.e,
                   "r": M.params.r, "f": M.params.f},
        "rank": M.rank,
        "fil_exponents": list(M.fil_exponents),
        "G": _matrix_to_doc(M.G),
        "Nmat": _matrix_to_doc(M.Nmat),
    }
    if name is not None:
        doc["name"] = name
    if validated is not None:
        doc["validated"] = validated
    return doc


def module_from_doc(doc, strict: bool = False) -> BreuilModule:
    if not isinstance(doc, dict):
        raise SchemaError("", "expected a JSON object")
    check_schema_version(doc, strict)
    if strict:
        for key in doc:
            if key not in _MODULE_FIELDS:
                raise SchemaError(f"/{key}", "unknown field")
    for key in ("params", "rank", "fil_exponents", "G", "Nmat"):
        if key not in doc:
            raise SchemaError(f"/{key}", "missing field")
    params = params_from_doc(doc["params"], strict=strict)
    ring = get_aring(params)
    rank = _expect_int(doc["rank"], "/rank")
    if rank < 0:
        raise SchemaError("/rank", "rank must be nonnegative")
    exps = _expect_list(doc["fil_exponents"], "/fil_exponents", rank)
    for j, n in enumerate(exps):
        n = _expect_int(n, f"/fil_exponents/{j}")
        if not 0 <= n <= params.er:
            raise SchemaError(f"/fil_exponents/{j}",
                              f"exponent {n} outside [0, {params.er}]")
    G = _matrix_from_doc(doc["G"], ring, rank, rank, "/G", strict)
    N = _matrix_from_doc(doc["Nmat"], ring, rank, rank, "/Nmat", strict)
    M = BreuilModule(params, exps, G, N)
    if doc.get("validated") is True:
        report = validate(M)
        if not report.ok:
            raise SchemaError("/validated",
                              "document marked validated but fails: "
                              + "; ".join(report.violations))
    return M


def presentation_to_doc(pres: FilPresentation) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "params": {"p": pres.params.p, "e": pres.params.e,
                   "r": pres.params.r, "f": pres.params.f},
        "rank": pres.rank,
        "generators": [np.asarray(g).tolist() for g in pres.generators],
    }


def presentation_from_doc(doc, strict: bool = False) -> FilPresentation:
    if not isinstance(doc, dict):
        raise SchemaError("", "expected a JSON object")
    check_schema_version(doc, strict)
    allowed = {"schema", "params", "rank", "generators", "name"}
    if strict:
        for key in doc:
            if key not in allowed:
                raise SchemaError(f"/{key}", "unknown field")
    for key in ("params", "rank", "generators"):
        if key not in doc:
            raise SchemaError(f"/{key}", "missing field")
    params = params_from_doc(doc["params"], strict=strict)
    ring = get_aring(params)
    rank = _expect_int(doc["rank"], "/rank")
    gens = []
    for g_idx, gen in enumerate(_expect_list(doc["generators"], "/generators")):
        vec = _expect_list(gen, f"/generators/{g_idx}", rank)
        arr = np.zeros((rank, ring.ep, ring.f), dtype=np.int64)
        for j, entry in enumerate(vec):
            arr[j] = _entry_from_doc(entry, ring, f"/generators/{g_idx}/{j}", strict)
        gens.append(arr)
    return FilPresentation(params, rank, gens)


def morphism_to_doc(m: Morphism) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "source": module_to_doc(m.source),
        "target": module_to_doc(m.target),
        "matrix": _matrix_to_doc(m.matrix),
    }


def morphism_from_doc(doc, strict: bool = False) -> Morphism:
    if not isinstance(doc, dict):
        raise SchemaError("", "expected a JSON object")
    check_schema_version(doc, strict)
    allowed = {"schema", "source", "target", "matrix", "name"}
    if strict:
        for key in doc:
            if key not in allowed:
                raise SchemaError(f"/{key}", "unknown field")
    for key in ("source", "target", "matrix"):
        if key not in doc:
            raise SchemaError(f"/{key}", "missing field")
    src = module_from_doc(doc["source"], strict=strict)
    tgt = module_from_doc(doc["target"], strict=strict)
    if src.params != tgt.params:
        raise SchemaError("/target/params", "params differ from source")
    mat = _matrix_from_doc(doc["matrix"], src.ring, tgt.rank, src.rank,
                           "/matrix", strict)
    return Morphism(src, tgt, mat)


def descriptor_to_doc(desc: SimpleDescriptor) -> dict:
    return {"schema": SCHEMA_VERSION, "digits": list(desc.digits)}


def descriptor_from_doc(doc, params: GlobalParams,
                        strict: bool = False) -> SimpleDescriptor:
    if not isinstance(doc, dict):
        raise SchemaError("", "expected a JSON object")
    check_schema_version(doc, strict)
    allowed = {"schema", "digits", "params", "name"}
    if strict:
        for key in doc:
            if key not in allowed:
                raise SchemaError(f"/{key}", "unknown field")
    if "params" in doc:
        params = params_from_doc(doc["params"], strict=strict)
    if "digits" not in doc:
        raise SchemaError("/digits", "missing field")
    digits = [_expect_int(x, f"/digits/{i}")
              for i, x in enumerate(_expect_list(doc["digits"], "/digits"))]
    try:
        return SimpleDescriptor(params, tuple(digits))
    except Exception as exc:
        raise SchemaError("/digits", str(exc)) from None
