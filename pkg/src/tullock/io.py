"""JSON documents for instances, SSLT inputs and solver results.

Canonical text is ``json.dumps`` with sorted keys and two-space indentation.
Floats go through ``repr`` and so round-trip exactly.
"""
from __future__ import annotations

import json
import math
from typing import Any, Iterable, Mapping

from .certificates import EpsSolution, EquilibriumCertificate
from .contest import ContestInstance, Player
from .errors import DomainError, SchemaError
from .hardness import SSLTInstance
from .verify import VerificationReport

SCHEMA_VERSION = 1
_INSTANCE_KEYS = {"schemaVersion", "R", "players", "metadata"}
_PLAYER_KEYS = {"a", "r"}
RESULT_KINDS = ("exact", "approx", "no-pne", "not-applicable")


def dumps(doc: Mapping) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _load(text_or_doc) -> Any:
    if isinstance(text_or_doc, (str, bytes)):
        try:
            return json.loads(text_or_doc)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    return text_or_doc


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {type(value).__name__}")
    out = float(value)
    if not math.isfinite(out):
        raise SchemaError(path, "must be finite")
    return out


def _object(value, path: str, allowed: set[str], required: Iterable[str]) -> Mapping:
    if not isinstance(value, Mapping):
        raise SchemaError(path, f"expected an object, got {type(value).__name__}")
    extra = sorted(set(value) - allowed)
    if extra:
        raise SchemaError(path, f"unknown field {extra[0]!r}")
    for key in required:
        if key not in value:
            raise SchemaError(f"{path}.{key}", "missing required field")
    return value


def _check_version(doc: Mapping, path: str = "$") -> None:
    v = doc.get("schemaVersion", SCHEMA_VERSION)
    if v != SCHEMA_VERSION or isinstance(v, bool):
        raise SchemaError(f"{path}.schemaVersion", f"unsupported version {v!r}, expected {SCHEMA_VERSION}")


def parse_instance_document(text_or_doc) -> tuple[ContestInstance, dict]:
    """Instance and its metadata from an instance document."""
    doc = _object(_load(text_or_doc), "$", _INSTANCE_KEYS, ("R", "players"))
    _check_version(doc)
    R = _number(doc["R"], "$.R")
    if not R > 1:
        raise DomainError(f"R must exceed 1, got {R!r}")
    raw = doc["players"]
    if not isinstance(raw, list):
        raise SchemaError("$.players", "expected a list")
    players = []
    for k, item in enumerate(raw):
        path = f"$.players[{k}]"
        _object(item, path, _PLAYER_KEYS, ("a", "r"))
        a, r = _number(item["a"], f"{path}.a"), _number(item["r"], f"{path}.r")
        if not a > 0:
            raise DomainError(f"{path}.a must be positive, got {a!r}")
        if not r > 0:
            raise DomainError(f"{path}.r must be positive, got {r!r}")
        players.append(Player(a, r))
    if len(players) < 2:
        raise DomainError(f"need at least 2 players, got {len(players)}")
    meta = doc.get("metadata", {})
    if not isinstance(meta, Mapping):
        raise SchemaError("$.metadata", "expected an object")
    return ContestInstance(R, tuple(players)), dict(meta)


def parse_instance(text_or_doc) -> ContestInstance:
    return parse_instance_document(text_or_doc)[0]


def instance_document(instance: ContestInstance, metadata: Mapping | None = None) -> dict:
    doc = {
        "schemaVersion": SCHEMA_VERSION,
        "R": instance.R,
        "players": [{"a": p.a, "r": p.r} for p in instance.players],
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def serialize_instance(instance: ContestInstance, metadata: Mapping | None = None) -> str:
    return dumps(instance_document(instance, metadata))


def parse_sslt(text_or_doc) -> SSLTInstance:
    doc = _object(_load(text_or_doc), "$", {"schemaVersion", "elements", "target"}, ("elements", "target"))
    _check_version(doc)
    if not isinstance(doc["elements"], list):
        raise SchemaError("$.elements", "expected a list")
    els = tuple(_number(z, f"$.elements[{k}]") for k, z in enumerate(doc["elements"]))
    return SSLTInstance(els, _number(doc["target"], "$.target"))


def serialize_sslt(sslt: SSLTInstance) -> str:
    return dumps({"schemaVersion": SCHEMA_VERSION, "elements": list(sslt.elements), "target": sslt.target})


def certificate_to_dict(cert: EquilibriumCertificate) -> dict:
    return {
        "aggregate": cert.aggregate,
        "active": list(cert.active),
        "shares": list(cert.shares),
        "efforts": list(cert.efforts),
    }


def solution_to_dict(sol: EpsSolution) -> dict:
    return {
        "aggregate": sol.aggregate,
        "active": list(sol.active),
        "shares": list(sol.shares),
        "shareSum": sol.share_sum,
        "epsilon": sol.epsilon,
        "source": sol.source,
    }


def report_to_dict(rep: VerificationReport) -> dict:
    return {
        "passed": rep.passed,
        "tolerance": rep.tolerance,
        "violations": [
            {"condition": v.condition, "player": v.player, "magnitude": v.magnitude, "detail": v.detail}
            for v in rep.violations
        ],
    }


def result_document(kind: str, *, certificates=(), solutions=(), reports=(), parameters=None,
                    reason: str = "", timing: Mapping | None = None) -> dict:
    """Result document; ``reports`` pair up with certificates then solutions, in order."""
    if kind not in RESULT_KINDS:
        raise ValueError(f"unknown result kind {kind!r}")
    doc = {
        "schemaVersion": SCHEMA_VERSION,
        "outcome": kind,
        "certificates": [certificate_to_dict(c) for c in certificates],
        "solutions": [solution_to_dict(s) for s in solutions],
        "verification": [report_to_dict(r) for r in reports],
        "parameters": dict(parameters or {}),
    }
    if reason:
        doc["reason"] = reason
    if timing is not None:
        doc["timing"] = dict(timing)
    return doc


def _int_list(value, path: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise SchemaError(path, "expected a list of integers")
    return tuple(value)


def _num_list(value, path: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise SchemaError(path, "expected a list of numbers")
    return tuple(_number(v, f"{path}[{k}]") for k, v in enumerate(value))


def parse_result(text_or_doc) -> tuple[str, list[EquilibriumCertificate], list[EpsSolution]]:
    """Outcome kind plus the certificates and ε-solutions embedded in a result document."""
    doc = _load(text_or_doc)
    if not isinstance(doc, Mapping):
        raise SchemaError("$", "expected an object")
    _check_version(doc)
    kind = doc.get("outcome")
    if kind not in RESULT_KINDS:
        raise SchemaError("$.outcome", f"expected one of {', '.join(RESULT_KINDS)}")
    certs, sols = [], []
    for k, c in enumerate(doc.get("certificates", [])):
        path = f"$.certificates[{k}]"
        c = _object(c, path, {"aggregate", "active", "shares", "efforts"}, ("aggregate", "active", "shares"))
        certs.append(EquilibriumCertificate(
            _number(c["aggregate"], f"{path}.aggregate"),
            _int_list(c["active"], f"{path}.active"),
            _num_list(c["shares"], f"{path}.shares"),
            _num_list(c.get("efforts", []), f"{path}.efforts"),
        ))
    for k, s in enumerate(doc.get("solutions", [])):
        path = f"$.solutions[{k}]"
        s = _object(s, path, {"aggregate", "active", "shares", "shareSum", "epsilon", "source"},
                    ("aggregate", "active", "shares", "epsilon"))
        shares = _num_list(s["shares"], f"{path}.shares")
        sols.append(EpsSolution(
            _number(s["aggregate"], f"{path}.aggregate"),
            _int_list(s["active"], f"{path}.active"),
            shares,
            math.fsum(shares),
            _number(s["epsilon"], f"{path}.epsilon"),
            str(s.get("source", "node")),
        ))
    for c in certs:
        if len(c.active) != len(c.shares):
            raise SchemaError("$.certificates", "active and shares differ in length")
    for s in sols:
        if len(s.active) != len(s.shares):
            raise SchemaError("$.solutions", "active and shares differ in length")
    return kind, certs, sols
