"""Analytical cost model for distributed quantum computing architectures.

Three system designs are compared for M nodes with N computing qubits each:

* ``sqgpu`` — nodes hold computing qubits only; all remote gates run on a
  shared pool of two-qubit gate modules (one module per concurrent gate,
  two pooled communication qubits per module).
* ``entanglement`` — the conventional design: every node carries its own
  dedicated communication qubits next to its computing qubits.
* ``monolithic`` — a single fully-connected machine with M*N qubits, the
  reference point both distributed designs are measured against.

A fully-connected n-qubit machine is priced at ``epsilon * (a**n - 1)``;
channel and optical-switch hardware add linear and quadratic terms.  The
partial-pairing variants cover systems provisioned for at most R
simultaneous remote gates instead of the full M*N/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateInputError,
    InfeasibleCalibrationError,
    InvalidInputError,
    InvalidPairingError,
    InvalidShapeError,
)


@dataclass(frozen=True)
class CostParams:
    """Cost coefficients: node price scale, growth base, channel and switch-path prices."""

    epsilon: float  # USD scale of a fully-connected node
    a: float        # per-qubit growth base, > 1
    b: float        # USD per quantum communication channel
    d: float        # USD per optical switching path

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidInputError(f"epsilon must be positive, got {self.epsilon}")
        if not self.a > 1:
            raise InvalidInputError(f"growth base a must exceed 1, got {self.a}")
        if self.b < 0 or self.d < 0:
            raise InvalidInputError("channel and switch costs must be non-negative")


#: Published calibration: a 2-qubit machine at $5,000 and a 50-qubit machine
#: at $4,000,000 give epsilon = $21,476 and a = 1.11032; b and d are the
#: illustrative channel/switch prices used throughout.
DEFAULT_COST_PARAMS = CostParams(epsilon=21476.0, a=1.11032, b=10000.0, d=100.0)


@dataclass(frozen=True)
class SystemShape:
    """M nodes of N computing qubits each, plus a total communication-qubit budget Q."""

    nodes: int
    qubits_per_node: int
    comm_qubit_total: int = 0

    def __post_init__(self):
        if self.nodes < 1:
            raise InvalidShapeError(f"node count must be >= 1, got {self.nodes}")
        if self.qubits_per_node < 1:
            raise InvalidShapeError(
                f"qubits per node must be >= 1, got {self.qubits_per_node}"
            )
        if self.comm_qubit_total < 0:
            raise InvalidShapeError("communication qubit budget must be >= 0")

    @property
    def total_qubits(self) -> int:
        return self.nodes * self.qubits_per_node


@dataclass(frozen=True)
class PairingSpec:
    """Partial-pairing shape: x qubits engaged on each of y nodes, R = x*y/2 gates."""

    x: int
    y: int
    r: int

    @classmethod
    def from_xy(cls, x: int, y: int) -> "PairingSpec":
        if x < 1 or y < 1:
            raise InvalidPairingError("x and y must be >= 1")
        if (x * y) % 2 != 0:
            raise InvalidPairingError(f"x*y must be even, got x={x}, y={y}")
        return cls(x=x, y=y, r=(x * y) // 2)


@dataclass(frozen=True)
class CommBudget:
    """Total communication qubits required by each architecture."""

    q_entanglement: int
    q_sqgpu: int


def calibrate_cost_params(
    point1: tuple[int, float],
    point2: tuple[int, float],
    a_max: float = 1000.0,
) -> tuple[float, float]:
    """Fit (epsilon, a) to two observed machine prices.

    Solves epsilon*(a**n1 - 1) = c1 and epsilon*(a**n2 - 1) = c2 by bisecting
    the price ratio on a in (1, a_max]; the ratio (a**n2-1)/(a**n1-1) is
    strictly increasing in a, so the bracket either contains exactly one
    root or none.
    """
    (n1, c1), (n2, c2) = point1, point2
    if n1 < 2 or n2 < 2:
        raise InvalidInputError("qubit counts must be >= 2")
    if c1 <= 0 or c2 <= 0:
        raise InvalidInputError("prices must be positive")
    if n1 == n2:
        raise DegenerateInputError("calibration points need distinct qubit counts")
    if n1 > n2:
        n1, c1, n2, c2 = n2, c2, n1, c1
    if c2 <= c1:
        raise DegenerateInputError(
            "price must increase with qubit count for a growth base > 1"
        )

    ratio = c2 / c1

    def residual(a: float) -> float:
        return (a**n2 - 1.0) / (a**n1 - 1.0) - ratio

    lo = 1.0 + 1e-9
    hi = a_max
    # As a -> 1+ the ratio tends to n2/n1; a root in (1, a_max] needs the
    # residual to change sign across the bracket.
    if residual(lo) >= 0.0 or residual(hi) < 0.0:
        raise InfeasibleCalibrationError(
            f"no growth base in (1, {a_max}] matches price ratio {ratio:g}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if residual(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    a = 0.5 * (lo + hi)
    epsilon = c1 / (a**n1 - 1.0)

    for n, c in ((n1, c1), (n2, c2)):
        if abs(epsilon * (a**n - 1.0) - c) > 1e-10 * c:
            raise InfeasibleCalibrationError(
                "calibration residual exceeds 1e-10 relative tolerance"
            )
    return epsilon, a


def cost_sqgpu(shape: SystemShape, params: CostParams = DEFAULT_COST_PARAMS) -> float:
    """Total price of the shared-pool system at full pairing capacity.

    M*epsilon*(a**N - 1) node hardware, M*N/2 two-qubit gate modules priced
    as two-qubit machines, M*N channels and an (M*N)**2-path switch.
    Requires M*N even so all computing qubits can pair simultaneously.
    """
    if (shape.nodes * shape.qubits_per_node) % 2 != 0:
        raise InvalidShapeError(
            f"full pairing needs an even total qubit count, got "
            f"M*N = {shape.nodes * shape.qubits_per_node}"
        )
    return cost_sqgpu_partial(shape, (shape.nodes * shape.qubits_per_node) // 2, params)


def cost_sqgpu_partial(
    shape: SystemShape, r: int, params: CostParams = DEFAULT_COST_PARAMS
) -> float:
    """Shared-pool system provisioned for at most R simultaneous remote gates."""
    m, n = shape.nodes, shape.qubits_per_node
    if r < 1 or 2 * r > m * n:
        raise InvalidPairingError(
            f"concurrent gate count R must satisfy 1 <= R <= M*N/2, got R={r}"
        )
    return (
        params.epsilon * m * (params.a**n - 1.0)
        + params.epsilon * r * (params.a**2 - 1.0)
        + params.b * (m * n)
        + params.d * (m * n * 2 * r)
    )


def _cost_entanglement_engaged(shape: SystemShape, engaged: int, params: CostParams) -> float:
    # Each node carries `engaged` dedicated communication qubits next to its
    # N computing qubits, so a node is priced as an (N + engaged)-qubit machine.
    m, n = shape.nodes, shape.qubits_per_node
    return (
        params.epsilon * m * (params.a ** (n + engaged) - 1.0)
        + params.b * (m * n)
        + params.d * (m * n * m * engaged)
    )


def cost_entanglement(shape: SystemShape, params: CostParams = DEFAULT_COST_PARAMS) -> float:
    """Total price of the conventional system: 2N-qubit nodes plus channels and switch."""
    return _cost_entanglement_engaged(shape, shape.qubits_per_node, params)


def cost_entanglement_partial_even(
    shape: SystemShape, x: int, params: CostParams = DEFAULT_COST_PARAMS
) -> float:
    """Conventional system sized for evenly spread load: x engaged qubits per node.

    Which y nodes will engage is unknown in advance, so every node carries
    x communication qubits.
    """
    if x < 1 or x > shape.qubits_per_node:
        raise InvalidPairingError(
            f"engaged qubits per node must satisfy 1 <= x <= N, got x={x}"
        )
    return _cost_entanglement_engaged(shape, x, params)


def cost_entanglement_partial_uneven(
    shape: SystemShape, r: int, params: CostParams = DEFAULT_COST_PARAMS
) -> float:
    """Conventional system sized for unevenly spread load of R concurrent gates.

    One node may host all R engaged qubits, so every node carries min(R, N)
    communication qubits; beyond R = N the requirement plateaus at the
    full-pairing configuration.
    """
    if r < 1:
        raise InvalidPairingError(f"concurrent gate count R must be >= 1, got R={r}")
    return _cost_entanglement_engaged(shape, min(r, shape.qubits_per_node), params)


def cost_monolithic(shape: SystemShape, params: CostParams = DEFAULT_COST_PARAMS) -> float:
    """Price of one fully-connected machine with all M*N qubits.

    Overflows to +inf for very large M*N; use log10_cost_monolithic for
    plotting-scale values.
    """
    try:
        grown = params.a ** (shape.nodes * shape.qubits_per_node)
    except OverflowError:
        return math.inf
    return params.epsilon * (grown - 1.0)


def _log10_growth_term(scale: float, a: float, exponent: int) -> float:
    # log10(scale * (a**exponent - 1)) without overflowing double precision.
    if scale == 0.0 or exponent == 0:
        return -math.inf
    t = exponent * math.log(a)
    if t > 700.0:
        # a**-exponent underflows; (a**exponent - 1) == a**exponent to 1 ulp.
        return math.log10(scale) + exponent * math.log10(a)
    return math.log10(scale) + math.log10(math.expm1(t))


def _log10_sum(terms: list[float]) -> float:
    peak = max(terms)
    if peak == -math.inf:
        return -math.inf
    return peak + math.log10(sum(10.0 ** (t - peak) for t in terms))


def log10_cost_sqgpu(shape: SystemShape, params: CostParams = DEFAULT_COST_PARAMS) -> float:
    """log10 of cost_sqgpu, finite even where the plain value overflows."""
    m, n = shape.nodes, shape.qubits_per_node
    if (m * n) % 2 != 0:
        raise InvalidShapeError(
            f"full pairing needs an even total qubit count, got M*N = {m * n}"
        )
    r = (m * n) // 2
    terms = [
        _log10_growth_term(params.epsilon * m, params.a, n),
        _log10_growth_term(params.epsilon * r, params.a, 2),
    ]
    if params.b > 0:
        terms.append(math.log10(params.b * (m * n)))
    if params.d > 0:
        terms.append(math.log10(params.d) + math.log10(m * n * 2 * r))
    return _log10_sum(terms)


def log10_cost_entanglement(
    shape: SystemShape, params: CostParams = DEFAULT_COST_PARAMS
) -> float:
    """log10 of cost_entanglement, finite even where the plain value overflows."""
    m, n = shape.nodes, shape.qubits_per_node
    terms = [_log10_growth_term(params.epsilon * m, params.a, 2 * n)]
    if params.b > 0:
        terms.append(math.log10(params.b * (m * n)))
    if params.d > 0:
        terms.append(math.log10(params.d) + math.log10(m * n * m * n))
    return _log10_sum(terms)


def log10_cost_monolithic(
    shape: SystemShape, params: CostParams = DEFAULT_COST_PARAMS
) -> float:
    """log10 of cost_monolithic, finite even where the plain value overflows."""
    return _log10_growth_term(
        params.epsilon, params.a, shape.nodes * shape.qubits_per_node
    )


def asymptotic_ratio(
    m: int, n: int, params: CostParams = DEFAULT_COST_PARAMS, which: str = "S_over_E"
) -> float:
    """Large-N approximations of the cost ratios.

    ``S_over_0``: shared-pool over monolithic, M * a**(N - M*N).
    ``S_over_E``: shared-pool over conventional, a**(-N).
    """
    if m < 1 or n < 0:
        raise InvalidInputError("need m >= 1 and n >= 0")
    if which == "S_over_0":
        return m * params.a ** (n - m * n)
    if which == "S_over_E":
        return params.a ** (-n)
    raise InvalidInputError(f"unknown ratio kind {which!r}")


def comm_budget_even(m: int, x: int, y: int) -> CommBudget:
    """Communication qubits needed when x qubits engage on each of y nodes.

    The conventional design must equip all M nodes (Q_E = M*x); the shared
    pool needs only the engaged pairs (Q_S = x*y = 2R).
    """
    if m < 1:
        raise InvalidInputError(f"node count must be >= 1, got {m}")
    if x < 1 or y < 1 or y > m:
        raise InvalidPairingError(f"need x >= 1 and 1 <= y <= M, got x={x}, y={y}")
    if (x * y) % 2 != 0:
        raise InvalidPairingError(f"x*y must be even, got x={x}, y={y}")
    return CommBudget(q_entanglement=m * x, q_sqgpu=x * y)


def comm_budget_uneven(m: int, n: int, r: int) -> CommBudget:
    """Communication qubits needed when R concurrent gates may crowd one node.

    Per-node provisioning plateaus at N once R exceeds a node's qubit count,
    so Q_E = M*min(R, N); the shared pool still needs only Q_S = 2R.
    """
    if m < 1 or n < 1:
        raise InvalidInputError(f"need M >= 1 and N >= 1, got M={m}, N={n}")
    if r < 1:
        raise InvalidPairingError(f"concurrent gate count R must be >= 1, got R={r}")
    return CommBudget(q_entanglement=m * min(r, n), q_sqgpu=2 * r)
