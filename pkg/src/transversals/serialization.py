"""Canonical JSON interchange for instances and certificates, plus DOT export.

Both file formats are versioned and serialize byte-stably: keys are sorted,
arrays keep construction order and no timestamps or environment data are
embedded, so identical inputs always produce identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any

from .errors import ParseError
from .model import HEAVY, LIGHT, Block, PartitionedInstance
from .solving import (
    Certificate,
    ForbiddenStep,
    ForbiddenViaForcedStep,
    ForcedSetStep,
    JoinForcedStep,
    Step,
)

INSTANCE_VERSION = 1
CERTIFICATE_VERSION = 1


# -- instances ------------------------------------------------------------------


def instance_to_obj(instance: PartitionedInstance) -> dict[str, Any]:
    blocks = []
    for b in instance.blocks:
        entry: dict[str, Any] = {
            "id": b.id,
            "vertices": [
                {"id": v}
                if instance.roles[v] is None
                else {"id": v, "role": instance.roles[v]}
                for v in b.members
            ],
        }
        if b.grade is not None:
            entry["grade"] = b.grade
        if b.padding:
            entry["padding"] = True
        blocks.append(entry)
    return {
        "version": INSTANCE_VERSION,
        "r": instance.r,
        "blocks": blocks,
        "edges": [list(e) for e in instance.edges],
        "meta": dict(sorted(instance.meta.items())),
    }


def serialize_instance(instance: PartitionedInstance) -> bytes:
    text = json.dumps(instance_to_obj(instance), sort_keys=True, separators=(",", ":"))
    return (text + "\n").encode("utf-8")


def parse_instance(data: bytes | str) -> PartitionedInstance:
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top-level value must be an object")
    version = obj.get("version")
    if version != INSTANCE_VERSION:
        raise ParseError(f"unsupported instance version {version!r}")
    r = obj.get("r")
    if not isinstance(r, int) or r < 2:
        raise ParseError(f"invalid uniformity {r!r}")

    blocks: list[Block] = []
    roles: dict[int, str | None] = {}
    owner: dict[int, int] = {}
    raw_blocks = obj.get("blocks")
    if not isinstance(raw_blocks, list):
        raise ParseError("blocks must be an array")
    for i, raw in enumerate(raw_blocks):
        loc = f"block {i}"
        if not isinstance(raw, dict):
            raise ParseError("block entry must be an object", location=loc)
        bid = raw.get("id")
        if bid != i:
            raise ParseError(f"block ids must be dense and ordered, got {bid!r}", location=loc)
        grade = raw.get("grade")
        if grade is not None and (not isinstance(grade, int) or grade < 1):
            raise ParseError(f"invalid grade {grade!r}", location=loc)
        padding = bool(raw.get("padding", False))
        members = []
        for entry in raw.get("vertices", []):
            if not isinstance(entry, dict) or not isinstance(entry.get("id"), int):
                raise ParseError("vertex entry must be an object with an id", location=loc)
            v = entry["id"]
            if v in owner:
                raise ParseError(
                    f"partition violation: vertex {v} already in block {owner[v]}",
                    location=loc,
                )
            owner[v] = i
            role = entry.get("role")
            if role not in (None, HEAVY, LIGHT):
                raise ParseError(f"unknown role {role!r} for vertex {v}", location=loc)
            roles[v] = role
            members.append(v)
        blocks.append(Block(id=i, members=tuple(members), grade=grade, padding=padding))

    n = len(owner)
    if set(owner) != set(range(n)):
        raise ParseError("vertex ids must be dense (0..num_vertices-1)")

    raw_edges = obj.get("edges")
    if not isinstance(raw_edges, list):
        raise ParseError("edges must be an array")
    seen: set[tuple[int, ...]] = set()
    edges: list[tuple[int, ...]] = []
    for i, raw in enumerate(raw_edges):
        loc = f"edge {i}"
        if not isinstance(raw, list) or len(raw) != r:
            raise ParseError(f"edge must be an array of {r} vertex ids", location=loc)
        if not all(isinstance(v, int) and 0 <= v < n for v in raw):
            raise ParseError("edge references an unknown vertex", location=loc)
        tup = tuple(sorted(raw))
        if len(set(tup)) != r:
            raise ParseError("edge has repeated vertices", location=loc)
        if tup in seen:
            raise ParseError(f"duplicate edge {list(tup)}", location=loc)
        seen.add(tup)
        edges.append(tup)

    meta = obj.get("meta", {})
    if not isinstance(meta, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in meta.items()
    ):
        raise ParseError("meta must map strings to strings")

    role_list = [roles[v] for v in range(n)]
    return PartitionedInstance(r, blocks, edges, roles=role_list, meta=meta)


def write_instance(instance: PartitionedInstance, path: str | Path) -> None:
    _atomic_write(Path(path), serialize_instance(instance))


def read_instance(path: str | Path) -> PartitionedInstance:
    return parse_instance(Path(path).read_bytes())


# -- certificates ----------------------------------------------------------------


def certificate_to_obj(cert: Certificate) -> dict[str, Any]:
    steps: list[dict[str, Any]] = []
    for step in cert.steps:
        if isinstance(step, ForcedSetStep):
            steps.append(
                {"kind": "forced", "block": step.block, "survivors": list(step.survivors)}
            )
        elif isinstance(step, ForbiddenStep):
            steps.append(
                {
                    "kind": "forbidden",
                    "vertex": step.vertex,
                    "witnesses": list(step.witnesses),
                }
            )
        elif isinstance(step, JoinForcedStep):
            steps.append(
                {
                    "kind": "join_forced",
                    "blocks": list(step.blocks),
                    "kept": [list(part) for part in step.kept],
                    "forced": list(step.forced),
                }
            )
        elif isinstance(step, ForbiddenViaForcedStep):
            steps.append(
                {
                    "kind": "forbidden_via_forced",
                    "vertex": step.vertex,
                    "forced_step": step.forced_step,
                    "witnesses": list(step.witnesses),
                }
            )
        else:  # pragma: no cover - the step union is closed
            raise ParseError(f"unknown step type {type(step).__name__}")
    return {
        "version": CERTIFICATE_VERSION,
        "steps": steps,
        "conclusion": cert.conclusion,
    }


def serialize_certificate(cert: Certificate) -> bytes:
    text = json.dumps(certificate_to_obj(cert), sort_keys=True, separators=(",", ":"))
    return (text + "\n").encode("utf-8")


def parse_certificate(data: bytes | str) -> Certificate:
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("version") != CERTIFICATE_VERSION:
        raise ParseError(f"unsupported certificate version {obj.get('version')!r}")
    steps: list[Step] = []
    for i, raw in enumerate(obj.get("steps", [])):
        loc = f"step {i}"
        if not isinstance(raw, dict):
            raise ParseError("step must be an object", location=loc)
        kind = raw.get("kind")
        try:
            if kind == "forced":
                steps.append(
                    ForcedSetStep(
                        block=raw["block"], survivors=tuple(raw["survivors"])
                    )
                )
            elif kind == "forbidden":
                steps.append(
                    ForbiddenStep(
                        vertex=raw["vertex"], witnesses=tuple(raw["witnesses"])
                    )
                )
            elif kind == "join_forced":
                steps.append(
                    JoinForcedStep(
                        blocks=tuple(raw["blocks"]),
                        kept=tuple(tuple(part) for part in raw["kept"]),
                        forced=tuple(raw["forced"]),
                    )
                )
            elif kind == "forbidden_via_forced":
                steps.append(
                    ForbiddenViaForcedStep(
                        vertex=raw["vertex"],
                        forced_step=raw["forced_step"],
                        witnesses=tuple(raw["witnesses"]),
                    )
                )
            else:
                raise ParseError(f"unknown step kind {kind!r}", location=loc)
        except KeyError as exc:
            raise ParseError(f"step missing field {exc}", location=loc) from exc
    conclusion = obj.get("conclusion")
    if not isinstance(conclusion, int):
        raise ParseError(f"invalid conclusion {conclusion!r}")
    return Certificate(steps=tuple(steps), conclusion=conclusion)


def write_certificate(cert: Certificate, path: str | Path) -> None:
    _atomic_write(Path(path), serialize_certificate(cert))


def read_certificate(path: str | Path) -> Certificate:
    return parse_certificate(Path(path).read_bytes())


# -- DOT export ------------------------------------------------------------------


def export_dot(instance: PartitionedInstance) -> str:
    """Deterministic Graphviz text: blocks as clusters, heavy vertices as
    boxes, light ones as circles.  Hypergraphs render as a bipartite
    incidence graph with one point node per edge."""
    lines = ["graph G {"]
    for b in instance.blocks:
        label = f"block {b.id}"
        if b.grade is not None:
            label += f" (grade {b.grade})"
        if b.padding:
            label += " [padding]"
        lines.append(f"  subgraph cluster_{b.id} {{")
        lines.append(f'    label="{label}";')
        for v in b.members:
            shape = {HEAVY: "box", LIGHT: "circle", None: "ellipse"}[instance.roles[v]]
            lines.append(f"    v{v} [shape={shape}];")
        lines.append("  }")
    if instance.r == 2:
        for u, v in instance.edges:
            lines.append(f"  v{u} -- v{v};")
    else:
        for i, e in enumerate(instance.edges):
            lines.append(f"  e{i} [shape=point];")
            for v in e:
                lines.append(f"  e{i} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- helpers ---------------------------------------------------------------------


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
