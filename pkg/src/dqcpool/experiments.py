"""Sweep runner: cost curves, communication-budget curves and Monte-Carlo CSR grids.

Reproducibility contract: a sweep is fully determined by its SweepSpec.
Grid points are enumerated in canonical order (architecture, then node
count, then burst ratio, each ascending) and trial t of grid point g uses
the stream derived from ``master_seed`` and the global trial counter
``g * trials + t``, so results do not depend on execution order and grid
points may run in parallel.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from statistics import fmean

from . import __version__
from .costs import (
    CostParams,
    DEFAULT_COST_PARAMS,
    SystemShape,
    comm_budget_even,
    comm_budget_uneven,
    cost_entanglement,
    cost_entanglement_partial_even,
    cost_entanglement_partial_uneven,
    cost_monolithic,
    cost_sqgpu,
    cost_sqgpu_partial,
    log10_cost_entanglement,
    log10_cost_monolithic,
    log10_cost_sqgpu,
)
from .errors import ConfigError, InvalidInputError, InvalidPairingError
from .rng import derive_trial_rng
from .scheduling import (
    ARCHITECTURES,
    ResourceModel,
    check_latency_invariant,
    csr,
    simulate,
)
from .workload import LEVELS, Batch, WorkloadSpec, generate_batch, read_batch_jsonl

SWEEP_KINDS = ("cost_vs_N", "cost_contour", "qcount_E", "qcount_U", "csr_sweep")

DEFAULT_M_GRID = (8, 16, 24, 32, 40)
DEFAULT_QUBIT_BURSTS = (0.05, 0.1, 0.2, 0.4)
DEFAULT_NODE_BURSTS = (0.1, 0.3, 0.5)
DEFAULT_TRIALS = 500
DEFAULT_SEED = 42
DEFAULT_QUBITS_PER_NODE = 50

WORKERS_ENV_VAR = "DQCPOOL_WORKERS"


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of one experiment grid."""

    kind: str
    params: CostParams = DEFAULT_COST_PARAMS
    m_values: tuple[int, ...] = ()          # cost grids, csr sweeps; single value for qcount
    n_values: tuple[int, ...] = ()          # cost grids
    x_values: tuple[int, ...] = ()          # qcount_E: engaged qubits per node
    r_values: tuple[int, ...] = ()          # qcount_U: concurrent gate counts
    y_nodes: int = 0                        # qcount_E: engaged node count
    partial_r: int | None = None            # cost variant: shared pool sized for R gates
    even_x: int | None = None               # cost variant: conventional, even spread
    uneven_r: int | None = None             # cost variant: conventional, uneven spread
    archs: tuple[str, ...] = ARCHITECTURES  # csr
    level: str = "qubit"                    # csr
    burst_ratios: tuple[float, ...] = ()    # csr
    qubits_per_node: int = DEFAULT_QUBITS_PER_NODE
    comm_qubit_total: int | None = None     # csr; None means 10 qubits per node count
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_SEED
    inject_path: str | None = None          # csr: replay a JSONL batch instead of generating

    def canonical(self) -> "SweepSpec":
        """Sorted grids and fixed architecture order; defines trial numbering."""
        archs = tuple(a for a in ARCHITECTURES if a in self.archs)
        return replace(
            self,
            m_values=tuple(sorted(set(self.m_values))),
            n_values=tuple(sorted(set(self.n_values))),
            x_values=tuple(sorted(set(self.x_values))),
            r_values=tuple(sorted(set(self.r_values))),
            burst_ratios=tuple(sorted(set(self.burst_ratios))),
            archs=archs,
        )


@dataclass(frozen=True)
class StatSummary:
    mean: float
    stderr: float
    count: int


@dataclass(frozen=True)
class CsrPoint:
    """Aggregated Monte-Carlo result for one (arch, level, M, burst) grid point.

    The first thirteen fields are the published table schema; the trailing
    fields are diagnostics (per-trial ratio mean, latency stderrs) exposed
    through the API only.
    """

    arch: str
    level: str
    m: int
    n: int
    q: int
    burst_ratio: float
    trials: int
    mean_lr: float
    mean_li: float
    csr: float
    latency_ratio: float
    stderr_csr: float
    seed: int
    mean_trial_ratio: float = field(default=1.0, compare=False)
    stderr_lr: float = field(default=0.0, compare=False)
    stderr_li: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.mean_li > self.mean_lr:
            raise InvalidInputError(
                f"defect: mean ideal latency {self.mean_li} exceeds mean "
                f"realistic latency {self.mean_lr}"
            )
        if not 0.0 < self.csr <= 1.0:
            raise InvalidInputError(f"CSR must lie in (0, 1], got {self.csr}")

    def to_row(self) -> dict:
        return {
            "arch": self.arch,
            "level": self.level,
            "M": self.m,
            "N": self.n,
            "Q": self.q,
            "burst_ratio": self.burst_ratio,
            "trials": self.trials,
            "mean_Lr": self.mean_lr,
            "mean_Li": self.mean_li,
            "csr": self.csr,
            "latency_ratio": self.latency_ratio,
            "stderr_csr": self.stderr_csr,
            "seed": self.seed,
        }


def aggregate_stats(samples) -> StatSummary:
    """Mean and standard error (unbiased s / sqrt(n)) of a sample list."""
    values = list(samples)
    n = len(values)
    if n == 0:
        raise InvalidInputError("cannot aggregate an empty sample list")
    mean = fmean(values)
    if n == 1:
        return StatSummary(mean=mean, stderr=0.0, count=1)
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return StatSummary(mean=mean, stderr=math.sqrt(var / n), count=n)


def _ratio_of_means_stderr(xs: list[float], ys: list[float]) -> float:
    """Delta-method standard error of mean(xs)/mean(ys) from paired samples."""
    n = len(xs)
    if n < 2:
        return 0.0
    mx = fmean(xs)
    my = fmean(ys)
    if my == 0.0:
        return 0.0
    vx = sum((x - mx) ** 2 for x in xs) / (n - 1)
    vy = sum((y - my) ** 2 for y in ys) / (n - 1)
    cxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / (n - 1)
    var = (vx / my**2 + (mx * mx) * vy / my**4 - 2.0 * mx * cxy / my**3) / n
    return math.sqrt(max(var, 0.0))


def spec_hash(spec: SweepSpec) -> str:
    """Stable digest of a canonicalized sweep spec, for output audit trails."""
    payload = json.dumps(asdict(spec.canonical()), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def sweep_metadata(spec: SweepSpec) -> dict:
    return {
        "tool_version": __version__,
        "spec_sha256": spec_hash(spec),
        "master_seed": spec.master_seed,
    }


def run_cost_sweep(spec: SweepSpec) -> list[dict]:
    """Cost of all three designs over an (M, N) grid.

    ``cost_vs_N`` rows carry plain dollar values; ``cost_contour`` rows
    carry log10 dollars so the full grid stays finite.  The optional
    partial-pairing variants swap the corresponding column's formula.
    """
    spec = spec.canonical()
    if spec.kind not in ("cost_vs_N", "cost_contour"):
        raise ConfigError(f"not a cost sweep kind: {spec.kind!r}")
    if not spec.m_values or not spec.n_values:
        raise ConfigError("cost sweep needs non-empty M and N ranges")
    variants = [v for v in (spec.partial_r, spec.even_x, spec.uneven_r) if v is not None]
    if len(variants) > 1:
        raise ConfigError("at most one partial-pairing variant may be set")
    log_scale = spec.kind == "cost_contour"
    if log_scale and variants:
        raise ConfigError("contour sweeps support only the full-pairing formulas")

    rows = []
    for m in spec.m_values:
        for n in spec.n_values:
            shape = SystemShape(m, n)
            if log_scale:
                c_s = log10_cost_sqgpu(shape, spec.params)
                c_e = log10_cost_entanglement(shape, spec.params)
                c_0 = log10_cost_monolithic(shape, spec.params)
            else:
                if spec.partial_r is not None:
                    c_s = cost_sqgpu_partial(shape, spec.partial_r, spec.params)
                else:
                    c_s = cost_sqgpu(shape, spec.params)
                if spec.even_x is not None:
                    c_e = cost_entanglement_partial_even(shape, spec.even_x, spec.params)
                elif spec.uneven_r is not None:
                    c_e = cost_entanglement_partial_uneven(
                        shape, spec.uneven_r, spec.params
                    )
                else:
                    c_e = cost_entanglement(shape, spec.params)
                c_0 = cost_monolithic(shape, spec.params)
            rows.append(
                {
                    "M": m,
                    "N": n,
                    "cost_sqgpu": c_s,
                    "cost_entanglement": c_e,
                    "cost_monolithic": c_0,
                }
            )
    return rows


def run_qcount_sweep(spec: SweepSpec) -> list[dict]:
    """Communication-qubit budgets of both designs over a pairing range.

    Subcase ``qcount_E`` varies x for fixed (M, y); points with odd x*y
    admit no integral gate pairing and are skipped.  Subcase ``qcount_U``
    varies R for fixed (M, N).
    """
    spec = spec.canonical()
    if spec.kind == "qcount_E":
        if len(spec.m_values) != 1 or not spec.x_values or spec.y_nodes < 1:
            raise ConfigError("qcount_E needs one M value, an x range and y nodes")
        m = spec.m_values[0]
        rows = []
        for x in spec.x_values:
            if (x * spec.y_nodes) % 2 != 0:
                continue  # no integral number of gate pairs
            budget = comm_budget_even(m, x, spec.y_nodes)
            rows.append(
                {"param": x, "Q_E": budget.q_entanglement, "Q_S": budget.q_sqgpu}
            )
        return rows
    if spec.kind == "qcount_U":
        if len(spec.m_values) != 1 or not spec.r_values:
            raise ConfigError("qcount_U needs one M value and an R range")
        m = spec.m_values[0]
        rows = []
        for r in spec.r_values:
            budget = comm_budget_uneven(m, spec.qubits_per_node, r)
            rows.append(
                {"param": r, "Q_E": budget.q_entanglement, "Q_S": budget.q_sqgpu}
            )
        return rows
    raise ConfigError(f"not a qcount sweep kind: {spec.kind!r}")


def _csr_grid(spec: SweepSpec) -> list[tuple[str, int, float]]:
    return [
        (arch, m, p)
        for arch in spec.archs
        for m in spec.m_values
        for p in spec.burst_ratios
    ]


def _validate_csr_spec(spec: SweepSpec):
    if spec.kind != "csr_sweep":
        raise ConfigError(f"not a csr sweep kind: {spec.kind!r}")
    if not spec.m_values:
        raise ConfigError("csr sweep needs a non-empty M range")
    if not spec.burst_ratios and spec.inject_path is None:
        raise ConfigError("csr sweep needs burst ratios (or an injected batch)")
    if not spec.archs:
        raise ConfigError(f"architectures must come from {ARCHITECTURES}")
    if spec.level not in LEVELS:
        raise ConfigError(f"level must be one of {LEVELS}, got {spec.level!r}")
    if spec.trials < 1:
        raise ConfigError("csr sweep needs trials >= 1")
    for p in spec.burst_ratios:
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"burst ratio must lie in [0, 1], got {p}")
    if any(m < 2 for m in spec.m_values):
        raise ConfigError("remote gate simulation needs M >= 2")


def _point_shape(spec: SweepSpec, m: int) -> SystemShape:
    q = spec.comm_qubit_total if spec.comm_qubit_total is not None else 10 * m
    return SystemShape(m, spec.qubits_per_node, q)


def _run_csr_point(spec: SweepSpec, point_index: int) -> CsrPoint:
    arch, m, p = _csr_grid(spec)[point_index]
    shape = _point_shape(spec, m)
    model = ResourceModel.from_architecture(arch, shape)
    ideal = ResourceModel.ideal()
    injected = (
        read_batch_jsonl(spec.inject_path, shape) if spec.inject_path else None
    )
    wl = WorkloadSpec(level=spec.level, burst_ratio=p, master_seed=spec.master_seed)

    base = point_index * spec.trials
    lrs: list[float] = []
    lis: list[float] = []
    ratios: list[float] = []
    for t in range(spec.trials):
        if injected is not None:
            batch = injected
        else:
            rng = derive_trial_rng(spec.master_seed, base + t)
            batch = generate_batch(shape, wl, rng)
        lr = simulate(batch, model, shape).makespan
        li = simulate(batch, ideal, shape).makespan
        check_latency_invariant(li, lr, context=f"{arch} M={m} p={p} trial={t}")
        lrs.append(float(lr))
        lis.append(float(li))
        ratios.append(1.0 if lr == 0 else li / lr)

    mean_lr = fmean(lrs)
    mean_li = fmean(lis)
    csr_value, latency_ratio = csr(mean_li, mean_lr)
    return CsrPoint(
        arch=arch,
        level=spec.level,
        m=m,
        n=shape.qubits_per_node,
        q=shape.comm_qubit_total,
        burst_ratio=p,
        trials=spec.trials,
        mean_lr=mean_lr,
        mean_li=mean_li,
        csr=csr_value,
        latency_ratio=latency_ratio,
        stderr_csr=_ratio_of_means_stderr(lis, lrs),
        seed=spec.master_seed,
        mean_trial_ratio=fmean(ratios),
        stderr_lr=aggregate_stats(lrs).stderr,
        stderr_li=aggregate_stats(lis).stderr,
    )


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV_VAR, "1")))
    except ValueError:
        return 1


def run_csr_sweep(spec: SweepSpec, workers: int | None = None) -> list[CsrPoint]:
    """Monte-Carlo CSR comparison over (arch, M, burst_ratio) grid points.

    With an injected batch every trial replays the same requests, so the
    point collapses to a deterministic measurement.  Empty-batch trials
    contribute zero latency to both means and are counted.
    """
    spec = spec.canonical()
    _validate_csr_spec(spec)
    if spec.inject_path is None and spec.qubits_per_node < 1:
        raise ConfigError("csr sweep needs qubits_per_node >= 1")
    grid = _csr_grid(spec)
    if workers is None:
        workers = default_workers()
    if workers > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_csr_point, [spec] * len(grid), range(len(grid))))
    return [_run_csr_point(spec, g) for g in range(len(grid))]
