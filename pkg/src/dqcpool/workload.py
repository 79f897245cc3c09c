"""Seeded generation of bursty remote-gate-request batches.

A batch holds every request generated at one time instant.  Qubit-level
bursts flip an independent Bernoulli coin per computing qubit; node-level
bursts flip one coin per node and engage all of its qubits.  Targets are
uniform over the computing qubits of the other nodes, so contention is a
matter for the scheduler, not for generation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .costs import SystemShape
from .errors import InvalidInputError, InvalidShapeError
from .rng import Xoshiro256StarStar, bernoulli_threshold

LEVELS = ("qubit", "node")


class QubitAddr(NamedTuple):
    node: int
    qubit: int


class GateRequest(NamedTuple):
    src: QubitAddr
    dst: QubitAddr
    seq: int


@dataclass(frozen=True)
class Batch:
    """All remote-gate requests generated at one time instant."""

    requests: tuple[GateRequest, ...]
    shape: SystemShape

    def __len__(self) -> int:
        return len(self.requests)


@dataclass(frozen=True)
class WorkloadSpec:
    level: str
    burst_ratio: float
    master_seed: int = 0

    def __post_init__(self):
        if self.level not in LEVELS:
            raise InvalidInputError(f"level must be one of {LEVELS}, got {self.level!r}")
        if not 0.0 <= self.burst_ratio <= 1.0:
            raise InvalidInputError(
                f"burst ratio must lie in [0, 1], got {self.burst_ratio}"
            )


def draw_remote_target(
    rng: Xoshiro256StarStar, shape: SystemShape, src_node: int
) -> QubitAddr:
    """Uniform draw over the (M-1)*N computing qubits outside src_node.

    Remote qubits are enumerated node-major with the source node skipped;
    one bounded draw selects the index.
    """
    n = shape.qubits_per_node
    k = rng.next_below((shape.nodes - 1) * n)
    node = k // n
    if node >= src_node:
        node += 1
    return QubitAddr(node, k % n)


def _require_multi_node(shape: SystemShape):
    if shape.nodes < 2:
        raise InvalidShapeError("remote gate workloads need at least 2 nodes")


def gen_qubit_level(
    shape: SystemShape, spec: WorkloadSpec, rng: Xoshiro256StarStar
) -> Batch:
    """Each computing qubit independently starts a remote gate with probability p.

    Qubits are visited in node-major ascending order and every qubit
    consumes exactly one engage draw, so the stream layout is fixed.
    """
    _require_multi_node(shape)
    threshold = bernoulli_threshold(spec.burst_ratio)
    requests = []
    seq = 0
    for node in range(shape.nodes):
        for qubit in range(shape.qubits_per_node):
            if rng.next_u64() < threshold:
                dst = draw_remote_target(rng, shape, node)
                requests.append(GateRequest(QubitAddr(node, qubit), dst, seq))
                seq += 1
    return Batch(requests=tuple(requests), shape=shape)


def gen_node_level(
    shape: SystemShape, spec: WorkloadSpec, rng: Xoshiro256StarStar
) -> Batch:
    """Each node bursts with probability p; a bursting node engages all its qubits."""
    _require_multi_node(shape)
    threshold = bernoulli_threshold(spec.burst_ratio)
    requests = []
    seq = 0
    for node in range(shape.nodes):
        if rng.next_u64() < threshold:
            for qubit in range(shape.qubits_per_node):
                dst = draw_remote_target(rng, shape, node)
                requests.append(GateRequest(QubitAddr(node, qubit), dst, seq))
                seq += 1
    return Batch(requests=tuple(requests), shape=shape)


def generate_batch(
    shape: SystemShape, spec: WorkloadSpec, rng: Xoshiro256StarStar
) -> Batch:
    if spec.level == "qubit":
        return gen_qubit_level(shape, spec, rng)
    return gen_node_level(shape, spec, rng)


def write_batch_jsonl(batch: Batch, path: str):
    """One request per line: {"seq": ..., "src": [node, qubit], "dst": [node, qubit]}."""
    with open(path, "w", encoding="utf-8") as fh:
        for req in batch.requests:
            fh.write(
                json.dumps(
                    {"seq": req.seq, "src": list(req.src), "dst": list(req.dst)}
                )
            )
            fh.write("\n")


def read_batch_jsonl(path: str, shape: SystemShape) -> Batch:
    """Load and validate a request batch against a system shape."""
    requests = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                src = QubitAddr(*(int(v) for v in obj["src"]))
                dst = QubitAddr(*(int(v) for v in obj["dst"]))
                seq = int(obj["seq"])
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidInputError(f"{path}:{lineno}: malformed request: {exc}")
            requests.append(GateRequest(src, dst, seq))
    validate_batch(requests, shape, source=path)
    return Batch(requests=tuple(requests), shape=shape)


def validate_batch(requests, shape: SystemShape, source: str = "batch"):
    """Check addresses in range, cross-node endpoints, unique seq and src qubits."""
    seen_seq = set()
    seen_src = set()
    for req in requests:
        for addr in (req.src, req.dst):
            if not (0 <= addr.node < shape.nodes):
                raise InvalidInputError(f"{source}: node {addr.node} out of range")
            if not (0 <= addr.qubit < shape.qubits_per_node):
                raise InvalidInputError(f"{source}: qubit {addr.qubit} out of range")
        if req.src.node == req.dst.node:
            raise InvalidInputError(
                f"{source}: request {req.seq} is not cross-node"
            )
        if req.seq in seen_seq:
            raise InvalidInputError(f"{source}: duplicate seq {req.seq}")
        seen_seq.add(req.seq)
        if req.src in seen_src:
            raise InvalidInputError(
                f"{source}: qubit {tuple(req.src)} is source of multiple requests"
            )
        seen_src.add(req.src)
