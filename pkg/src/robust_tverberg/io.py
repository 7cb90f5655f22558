"""JSON layouts for point sets, partitions, families and certificates.

Rationals are written as ``"p/q"`` (or ``"p"`` for integers) so a
round trip is bit-exact; decimal strings such as ``"0.25"`` are accepted
on input.  Point indices in certificates are 0-based, part labels 1..r.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

from .adversary_verifier import BadSubsetCertificate, FamilyVerdict
from .colorful import ColorfulBadSet, ColorfulFamily
from .errors import SchemaError
from .geom_core import Halfspace, PointConfig, format_scalar, to_scalar
from .robust_constructor import PartitionFamily
from .sarkaria_lift import Partition

PathLike = Union[str, Path]


def _require(doc: Any, key: str, kind) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"missing field {key!r}")
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise SchemaError(f"field {key!r} has the wrong type")
    return val


def _scalar(x: Any):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise SchemaError(f"coordinate {x!r} must be a string or an integer")
    try:
        return to_scalar(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {x!r}") from exc


def _point(row: Any, dim: int):
    if not isinstance(row, list) or len(row) != dim:
        raise SchemaError(f"each point needs {dim} coordinates")
    return tuple(_scalar(x) for x in row)


def points_to_json(config: PointConfig) -> dict:
    return {"dim": config.dim, "points": [[format_scalar(x) for x in p] for p in config.points]}


def points_from_json(doc: Any) -> PointConfig:
    dim = _require(doc, "dim", int)
    rows = _require(doc, "points", list)
    if dim < 1 or not rows:
        raise SchemaError("need dim >= 1 and at least one point")
    return PointConfig(dim, tuple(_point(row, dim) for row in rows))


def partition_to_json(p: Partition) -> dict:
    return {"r": p.r, "labels": list(p.labels)}


def partition_from_json(doc: Any) -> Partition:
    r = _require(doc, "r", int)
    labels = _require(doc, "labels", list)
    try:
        return Partition(tuple(labels), r)
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc)) from exc


def family_to_json(family: PartitionFamily, report: Optional[dict] = None, manifest: Optional[dict] = None) -> dict:
    doc = {
        "r": family.r,
        "m": family.m,
        "seed": family.seed,
        "partitions": [list(p.labels) for p in family],
        "report": report or {},
    }
    if manifest is not None:
        doc["manifest"] = manifest
    return doc


def family_from_json(doc: Any, n_points: Optional[int] = None) -> PartitionFamily:
    r = _require(doc, "r", int)
    rows = _require(doc, "partitions", list)
    if "m" in doc and doc["m"] != len(rows):
        raise SchemaError("m does not match the number of partitions")
    seed = doc.get("seed")
    try:
        fam = PartitionFamily.from_labels(rows, r, seed)
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc)) from exc
    if n_points is not None and any(len(p) != n_points for p in fam):
        raise SchemaError(f"every partition must label {n_points} points")
    return fam


def halfspace_to_json(h: Halfspace) -> dict:
    return {"normal": [format_scalar(x) for x in h.normal], "offset": format_scalar(h.offset)}


def halfspace_from_json(doc: Any) -> Halfspace:
    normal = _require(doc, "normal", list)
    return Halfspace(tuple(_scalar(x) for x in normal), _scalar(doc.get("offset", "0")))


def witness_to_json(w) -> dict:
    if isinstance(w, int):
        return {"empty_part": w}
    return halfspace_to_json(w)


def witness_from_json(doc: Any):
    if isinstance(doc, dict) and "empty_part" in doc:
        return _require(doc, "empty_part", int)
    return halfspace_from_json(doc)


def certificate_to_json(cert: BadSubsetCertificate) -> dict:
    return {"indices": list(cert.indices), "per_k_witness": [witness_to_json(w) for w in cert.per_k_witness]}


def certificate_from_json(doc: Any) -> BadSubsetCertificate:
    idx = _require(doc, "indices", list)
    wit = _require(doc, "per_k_witness", list)
    return BadSubsetCertificate(tuple(int(i) for i in idx), tuple(witness_from_json(w) for w in wit))


def verdict_to_json(v: FamilyVerdict) -> dict:
    return {
        "verdict": "robust" if v.robust else "violated",
        "max_bad_size": v.max_bad_size,
        "threshold": v.threshold,
        "mode": v.mode,
        "certificate": None if v.certificate is None else certificate_to_json(v.certificate),
    }


def colored_from_json(doc: Any) -> tuple[int, int, list]:
    """Colored input ``{"dim", "r", "classes"}``; returns (dim, r, classes)."""
    dim = _require(doc, "dim", int)
    r = _require(doc, "r", int)
    classes = _require(doc, "classes", list)
    if dim < 1 or r < 2 or not classes:
        raise SchemaError("need dim >= 1, r >= 2 and at least one class")
    out = []
    for cls in classes:
        if not isinstance(cls, list) or len(cls) != r:
            raise SchemaError(f"each class needs exactly {r} points")
        out.append([_point(p, dim) for p in cls])
    return dim, r, out


def colored_to_json(dim: int, r: int, classes) -> dict:
    return {"dim": dim, "r": r, "classes": [[[format_scalar(x) for x in p] for p in cls] for cls in classes]}


def colorful_family_to_json(family: ColorfulFamily, report: Optional[dict] = None, manifest: Optional[dict] = None) -> dict:
    doc = {
        "r": family.r,
        "m": family.m,
        "seed": family.seed,
        "permutations": [[list(p) for p in trans] for trans in family.transversals],
        "report": report or {},
    }
    if manifest is not None:
        doc["manifest"] = manifest
    return doc


def colorful_family_from_json(doc: Any) -> ColorfulFamily:
    r = _require(doc, "r", int)
    perms = _require(doc, "permutations", list)
    trans = []
    for t in perms:
        if not isinstance(t, list):
            raise SchemaError("permutations must be nested lists")
        rows = []
        for p in t:
            if not isinstance(p, list) or sorted(p) != list(range(r)):
                raise SchemaError(f"{p!r} is not a permutation of 0..{r - 1}")
            rows.append(tuple(p))
        trans.append(tuple(rows))
    return ColorfulFamily(tuple(trans), r, doc.get("seed"))


def colorful_certificate_to_json(cert: ColorfulBadSet) -> dict:
    return {"blocks": list(cert.blocks), "per_k_witness": [halfspace_to_json(h) for h in cert.per_k_witness]}


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(doc: Any, path: Optional[PathLike]) -> str:
    text = dumps(doc)
    if path is not None and str(path) != "-":
        Path(path).write_text(text)
    return text


def read_json(path: PathLike) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc.msg})") from exc
