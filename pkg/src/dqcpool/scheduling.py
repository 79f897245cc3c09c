"""Discrete-time greedy scheduling of remote-gate batches under resource limits.

Every remote gate occupies both endpoint qubits for exactly one time step
and, depending on the resource model, either one communication qubit at
each endpoint node (``dedicated``), one module from the shared pool
(``shared``), or nothing (``ideal``).  All resources are released at the
end of the step, when the modules are reset.

The policy is FIFO-greedy: at each step pending requests are scanned in
generation order and scheduled whenever both endpoint qubits are still
free and the resource check passes.  The same policy runs under every
model, so latency ratios isolate resource contention.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .costs import SystemShape
from .errors import (
    DqcPoolError,
    InfeasibleScheduleError,
    InvalidInputError,
    InvalidShapeError,
)
from .workload import Batch

ARCHITECTURES = ("dedicated", "shared")


@dataclass(frozen=True)
class ResourceModel:
    kind: str  # "dedicated" | "shared" | "ideal"
    per_node_comm: int = 0
    modules: int = 0

    @classmethod
    def dedicated(cls, per_node_comm: int) -> "ResourceModel":
        if per_node_comm < 0:
            raise InvalidInputError("per-node communication qubits must be >= 0")
        return cls(kind="dedicated", per_node_comm=per_node_comm)

    @classmethod
    def shared(cls, modules: int) -> "ResourceModel":
        if modules < 0:
            raise InvalidInputError("module count must be >= 0")
        return cls(kind="shared", modules=modules)

    @classmethod
    def ideal(cls) -> "ResourceModel":
        return cls(kind="ideal")

    @classmethod
    def from_architecture(cls, arch: str, shape: SystemShape) -> "ResourceModel":
        """Split the shape's communication budget Q per architecture.

        Dedicated nodes each get Q/M qubits (Q must divide evenly over
        homogeneous nodes); the shared pool pairs qubits into floor(Q/2)
        modules.
        """
        q = shape.comm_qubit_total
        if arch == "dedicated":
            if q % shape.nodes != 0:
                raise InvalidShapeError(
                    f"communication budget {q} does not divide evenly over "
                    f"{shape.nodes} nodes"
                )
            return cls.dedicated(q // shape.nodes)
        if arch == "shared":
            return cls.shared(q // 2)
        raise InvalidInputError(f"unknown architecture {arch!r}")


@dataclass(frozen=True)
class ScheduleResult:
    """Greedy schedule: per-step seq sets, total steps, peak resource usage.

    peak_utilization is the busiest step's usage relative to capacity:
    communication qubits for the dedicated model, modules for the shared
    model, and busy computing qubits for the ideal model.
    """

    makespan: int
    steps: tuple[tuple[int, ...], ...]
    peak_utilization: float

    def to_dict(self, include_steps: bool = False) -> dict:
        out = {"makespan": self.makespan, "peak_utilization": self.peak_utilization}
        if include_steps:
            out["steps"] = [list(step) for step in self.steps]
        return out

    def to_json(self, include_steps: bool = False) -> str:
        return json.dumps(self.to_dict(include_steps=include_steps))


def _check_capacity(model: ResourceModel, batch_len: int):
    if batch_len == 0:
        return
    if model.kind == "dedicated" and model.per_node_comm == 0:
        raise InfeasibleScheduleError(
            "no communication qubits per node: batch can never complete"
        )
    if model.kind == "shared" and model.modules == 0:
        raise InfeasibleScheduleError("no shared modules: batch can never complete")


def simulate(batch: Batch, model: ResourceModel, shape: SystemShape) -> ScheduleResult:
    """Run the FIFO-greedy schedule of one batch to completion."""
    _check_capacity(model, len(batch.requests))
    if not batch.requests:
        return ScheduleResult(makespan=0, steps=(), peak_utilization=0.0)

    n_per = shape.qubits_per_node
    nodes = shape.nodes
    srcs = [r.src.node * n_per + r.src.qubit for r in batch.requests]
    dsts = [r.dst.node * n_per + r.dst.qubit for r in batch.requests]
    seqs = [r.seq for r in batch.requests]

    dedicated = model.kind == "dedicated"
    shared = model.kind == "shared"
    cap = model.per_node_comm
    modules = model.modules

    pending = list(range(len(srcs)))
    steps: list[tuple[int, ...]] = []
    peak_ops = 0

    while pending:
        busy: set[int] = set()
        scheduled: list[int] = []
        deferred: list[int] = []
        node_used = [0] * nodes if dedicated else None
        ops = 0
        for pos, i in enumerate(pending):
            if shared and ops >= modules:
                deferred.extend(pending[pos:])
                break
            s = srcs[i]
            t = dsts[i]
            if s in busy or t in busy:
                deferred.append(i)
                continue
            if dedicated:
                sn = s // n_per
                tn = t // n_per
                if node_used[sn] >= cap or node_used[tn] >= cap:
                    deferred.append(i)
                    continue
                node_used[sn] += 1
                node_used[tn] += 1
            busy.add(s)
            busy.add(t)
            scheduled.append(seqs[i])
            ops += 1
        steps.append(tuple(scheduled))
        if ops > peak_ops:
            peak_ops = ops
        pending = deferred

    if dedicated:
        util = (2 * peak_ops) / (nodes * cap)
    elif shared:
        util = peak_ops / modules
    else:
        util = (2 * peak_ops) / (nodes * n_per)
    return ScheduleResult(
        makespan=len(steps), steps=tuple(steps), peak_utilization=util
    )


def ideal_latency(batch: Batch, shape: SystemShape) -> int:
    """Makespan with unlimited communication resources, same greedy policy."""
    return simulate(batch, ResourceModel.ideal(), shape).makespan


def optimal_makespan_bruteforce(
    batch: Batch, model: ResourceModel, shape: SystemShape, max_size: int = 10
) -> int:
    """Exact minimum makespan by branch-and-bound over step assignments.

    Verification oracle only: refuses batches larger than max_size.  Step
    feasibility is the same predicate the greedy scheduler uses.
    """
    n_reqs = len(batch.requests)
    if n_reqs == 0:
        return 0
    if n_reqs > max_size:
        raise InvalidInputError(
            f"brute-force oracle limited to {max_size} requests, got {n_reqs}"
        )
    _check_capacity(model, n_reqs)

    n_per = shape.qubits_per_node
    srcs = [r.src.node * n_per + r.src.qubit for r in batch.requests]
    dsts = [r.dst.node * n_per + r.dst.qubit for r in batch.requests]

    dedicated = model.kind == "dedicated"
    shared = model.kind == "shared"
    cap = model.per_node_comm
    modules = model.modules

    best = simulate(batch, model, shape).makespan  # greedy upper bound

    # Each open step tracks its busy qubits, op count and per-node usage.
    step_busy: list[set[int]] = []
    step_ops: list[int] = []
    step_node_used: list[dict[int, int]] = []

    def fits(k: int, i: int) -> bool:
        s, t = srcs[i], dsts[i]
        if s in step_busy[k] or t in step_busy[k]:
            return False
        if shared and step_ops[k] >= modules:
            return False
        if dedicated:
            used = step_node_used[k]
            if used.get(s // n_per, 0) >= cap or used.get(t // n_per, 0) >= cap:
                return False
        return True

    def place(k: int, i: int):
        s, t = srcs[i], dsts[i]
        step_busy[k].add(s)
        step_busy[k].add(t)
        step_ops[k] += 1
        if dedicated:
            used = step_node_used[k]
            used[s // n_per] = used.get(s // n_per, 0) + 1
            used[t // n_per] = used.get(t // n_per, 0) + 1

    def remove(k: int, i: int):
        s, t = srcs[i], dsts[i]
        step_busy[k].discard(s)
        step_busy[k].discard(t)
        step_ops[k] -= 1
        if dedicated:
            used = step_node_used[k]
            used[s // n_per] -= 1
            used[t // n_per] -= 1

    def search(i: int):
        nonlocal best
        if len(step_busy) >= best:
            return  # cannot beat the incumbent
        if i == n_reqs:
            best = len(step_busy)
            return
        for k in range(len(step_busy)):
            if fits(k, i):
                place(k, i)
                search(i + 1)
                remove(k, i)
        if len(step_busy) + 1 < best:
            step_busy.append(set())
            step_ops.append(0)
            step_node_used.append({})
            place(len(step_busy) - 1, i)
            search(i + 1)
            step_busy.pop()
            step_ops.pop()
            step_node_used.pop()

    search(0)
    return best


def csr(mean_li: float, mean_lr: float) -> tuple[float, float]:
    """Communication satisfaction ratio and raw latency ratio.

    Returns (csr, latency_ratio) where csr = min(1, L_i / L_r) so that 1
    means no contention penalty, and latency_ratio = L_r / L_i is the raw
    realistic-over-ideal ratio.  An empty workload (both latencies zero)
    counts as fully satisfied.
    """
    if mean_li < 0 or mean_lr < 0:
        raise InvalidInputError("latencies must be non-negative")
    if mean_lr == 0.0:
        if mean_li == 0.0:
            return 1.0, 1.0
        raise InvalidInputError(
            "ideal latency positive while realistic latency is zero"
        )
    if mean_li == 0.0:
        return 0.0, math.inf
    return min(1.0, mean_li / mean_lr), mean_lr / mean_li


def check_latency_invariant(li: int, lr: int, context: str = ""):
    """Ideal latency may never exceed the resource-constrained latency."""
    if li > lr:
        raise DqcPoolError(
            f"defect: ideal latency {li} exceeds realistic latency {lr}"
            + (f" ({context})" if context else "")
        )
