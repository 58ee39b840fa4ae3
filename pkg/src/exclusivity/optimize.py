"""Seeded multistart penalty optimization over model families.

All tasks share one engine: maximize a probability objective subject to
equality constraints (probabilities or inner products that must vanish, sums
that must hit 1), handled by quadratic penalties on a geometrically
increasing schedule with adaptive Nelder-Mead as the local search, finished
by a feasibility polish that minimizes the squared residuals alone.  The
polish step matters: near impossibility boundaries the penalized iterates
ride ridges where the objective scales like the square root of the residual,
so values at loose feasibility (1e-8) can overstate the true feasible
supremum by orders of magnitude.  Driving the residuals to ~1e-16 first and
only then reading off the objective removes that bias.

Every restart draws its starting point from a stream seeded by
(seed, restart index), so results are bit-reproducible and independent of
execution order.  Ties prefer the lowest restart index.

Two-qubit tasks optimize over a gauge-fixed parameterization: state
hyperspherical magnitudes (chi1, chi2, chi3) and the |11> phase, plus Bloch
angles for the second setting of each party (8 parameters total).  The
remaining state phases are removable by local diagonal unitaries that leave
the pinned first settings alone, so nothing is lost.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .quantum import BellLocalModel, _bell_event_indices, _bell_probabilities, bell_event_probabilities
from .scenario import Event, bell_event

TAU = 2 * math.pi


@dataclass(frozen=True)
class OptimizerConfig:
    """Multistart/penalty settings shared by every optimization task."""

    restarts: int = 200
    seed: int = 20240
    penalty_schedule: tuple[float, ...] = (1e2, 1e5, 1e8)
    nm_max_iterations: int = 3000
    xatol: float = 1e-12
    fatol: float = 1e-14
    feasibility_tol: float = 1e-8
    polish: bool = True

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if any(b <= a for a, b in zip(self.penalty_schedule, self.penalty_schedule[1:])):
            raise ValueError("penalty schedule must be strictly increasing")
        if self.xatol <= 0 or self.fatol <= 0 or self.feasibility_tol <= 0:
            raise ValueError("tolerances must be positive")

    def to_json(self) -> dict:
        return {
            "restarts": self.restarts,
            "seed": self.seed,
            "penalty_schedule": list(self.penalty_schedule),
            "nm_max_iterations": self.nm_max_iterations,
            "xatol": self.xatol,
            "fatol": self.fatol,
            "feasibility_tol": self.feasibility_tol,
            "polish": self.polish,
        }

    @classmethod
    def from_json(cls, data) -> "OptimizerConfig":
        return cls(
            restarts=int(data.get("restarts", 200)),
            seed=int(data.get("seed", 20240)),
            penalty_schedule=tuple(data.get("penalty_schedule", (1e2, 1e5, 1e8))),
            nm_max_iterations=int(data.get("nm_max_iterations", 3000)),
            xatol=float(data.get("xatol", 1e-12)),
            fatol=float(data.get("fatol", 1e-14)),
            feasibility_tol=float(data.get("feasibility_tol", 1e-8)),
            polish=bool(data.get("polish", True)),
        )


class Classification(enum.Enum):
    """Structural classes of near-feasible two-qubit local models."""

    COMPATIBLE_MEASUREMENTS = "compatible_measurements"
    PRODUCT_STATE = "product_state"
    VIOLATING = "violating"


@dataclass(frozen=True)
class RestartSummary:
    index: int
    value: float
    max_residual: float
    feasible: bool
    classification: Optional[Classification]
    stage_values: tuple[float, ...]


@dataclass(frozen=True)
class OptimizationResult:
    """Best feasible point of a multistart run, with per-restart audit data."""

    task: str
    best_value: float
    best_parameters: dict
    best_residuals: dict[str, float]
    feasible: bool
    classification: Optional[Classification]
    restarts_completed: int
    restart_summaries: tuple[RestartSummary, ...]
    best_model: Optional[BellLocalModel] = None
    best_raw: tuple[float, ...] = ()

    def to_json(self) -> dict:
        return {
            "task": self.task,
            "best_value": self.best_value,
            "feasible": self.feasible,
            "classification": self.classification.value if self.classification else None,
            "best_parameters": self.best_parameters,
            "best_residuals": self.best_residuals,
            "restarts_completed": self.restarts_completed,
            "restarts": [
                {
                    "index": s.index,
                    "value": s.value,
                    "max_residual": s.max_residual,
                    "feasible": s.feasible,
                    "classification": s.classification.value if s.classification else None,
                }
                for s in self.restart_summaries
            ],
        }


def _nelder_mead(f, x0: np.ndarray, config: OptimizerConfig) -> np.ndarray:
    out = minimize(
        f,
        x0,
        method="Nelder-Mead",
        options=dict(
            maxiter=config.nm_max_iterations,
            maxfev=2 * config.nm_max_iterations,
            xatol=config.xatol,
            fatol=config.fatol,
            adaptive=True,
        ),
    )
    return out.x


def _multistart(
    task: str,
    sample_start: Callable[[np.random.Generator], np.ndarray],
    evaluate: Callable[[np.ndarray], tuple[float, np.ndarray]],
    describe: Callable[[np.ndarray], tuple[dict, dict, Optional[BellLocalModel]]],
    config: OptimizerConfig,
    classify: Optional[Callable[[np.ndarray], Classification]] = None,
) -> OptimizationResult:
    """Run the penalty pipeline from ``config.restarts`` seeded starts.

    ``evaluate`` maps parameters to (objective value, signed residual array);
    ``describe`` renders the winning parameters for the result payload.
    """
    constrained = any(mu > 0 for mu in config.penalty_schedule)
    summaries: list[RestartSummary] = []
    best_key = None
    best: Optional[tuple[np.ndarray, float, np.ndarray, Optional[Classification]]] = None

    for index in range(config.restarts):
        rng = np.random.default_rng([config.seed, index])
        x = np.asarray(sample_start(rng), dtype=float)
        stage_values = []
        for mu in config.penalty_schedule:
            def penalized(xx, _mu=mu):
                value, residuals = evaluate(xx)
                return -value + _mu * float(residuals @ residuals)

            x = _nelder_mead(penalized, x, config)
            stage_values.append(evaluate(x)[0])
        if config.polish and constrained:
            def infeasibility(xx):
                _, residuals = evaluate(xx)
                return float(residuals @ residuals)

            x = _nelder_mead(infeasibility, x, config)
        value, residuals = evaluate(x)
        max_residual = float(np.max(np.abs(residuals))) if residuals.size else 0.0
        feasible = max_residual <= config.feasibility_tol
        cls = classify(x) if classify is not None and feasible else None
        summaries.append(
            RestartSummary(
                index=index,
                value=value,
                max_residual=max_residual,
                feasible=feasible,
                classification=cls,
                stage_values=tuple(stage_values),
            )
        )
        key = (feasible, value, -index)
        if best_key is None or key > best_key:
            best_key = key
            best = (x, value, residuals, cls)

    x, value, residuals, cls = best
    parameters, residual_map, model = describe(x)
    return OptimizationResult(
        task=task,
        best_value=value,
        best_parameters=parameters,
        best_residuals=residual_map,
        feasible=bool(best_key[0]),
        classification=cls,
        restarts_completed=config.restarts,
        restart_summaries=tuple(summaries),
        best_model=model,
        best_raw=tuple(float(v) for v in x),
    )


# ---------------------------------------------------------------------------
# Two-qubit local-measurement tasks


def _state_from_hyperspherical(x: np.ndarray) -> tuple[complex, complex, complex, complex]:
    chi1, chi2, chi3, phi_d = x[0], x[1], x[2], x[3]
    s1 = math.sin(chi1)
    s12 = s1 * math.sin(chi2)
    return (
        complex(math.cos(chi1)),
        complex(s1 * math.cos(chi2)),
        complex(s12 * math.cos(chi3)),
        s12 * math.sin(chi3) * cmath.exp(1j * phi_d),
    )


def _bell_model_from_raw(x: np.ndarray) -> BellLocalModel:
    psi = _state_from_hyperspherical(x)
    return BellLocalModel.from_unconstrained(
        amplitudes=(psi[0].real, psi[1].real, psi[2].real, abs(psi[3])),
        phases=(0.0, 0.0, cmath.phase(psi[3])),
        theta_a1=float(x[4]),
        phi_a1=float(x[5]),
        theta_b1=float(x[6]),
        phi_b1=float(x[7]),
    )


def _sample_bell_start(rng: np.random.Generator) -> np.ndarray:
    return np.concatenate(
        [
            rng.uniform(0.0, math.pi, 3),
            rng.uniform(0.0, TAU, 1),
            rng.uniform(0.0, math.pi, 1),
            rng.uniform(0.0, TAU, 1),
            rng.uniform(0.0, math.pi, 1),
            rng.uniform(0.0, TAU, 1),
        ]
    )


def _maximize_bell_paradox(
    task: str,
    positive_events: Sequence[Event],
    zero_events: Sequence[Event],
    config: OptimizerConfig,
    classify_optimum: bool,
) -> OptimizationResult:
    indices = [_bell_event_indices(e) for e in list(positive_events) + list(zero_events)]
    n_pos = len(positive_events)
    zero_labels = [str(e) for e in zero_events]

    def evaluate(x: np.ndarray) -> tuple[float, np.ndarray]:
        probs = _bell_probabilities(
            _state_from_hyperspherical(x), x[4], x[5], x[6], x[7], indices
        )
        return float(sum(probs[:n_pos])), np.asarray(probs[n_pos:])

    def describe(x: np.ndarray):
        model = _bell_model_from_raw(x)
        _, residuals = evaluate(x)
        return (
            {"model": model.to_json(), "raw": [float(v) for v in x]},
            dict(zip(zero_labels, (float(r) for r in residuals))),
            model,
        )

    def classify(x: np.ndarray) -> Classification:
        return classify_local_model(_bell_model_from_raw(x), tol=config.feasibility_tol)

    return _multistart(
        task,
        _sample_bell_start,
        evaluate,
        describe,
        config,
        classify=classify if classify_optimum else None,
    )


def maximize_hardy_local(config: Optional[OptimizerConfig] = None) -> OptimizationResult:
    """Maximize P(00|00) over two-qubit local models under the three zeros.

    The feasible optimum is (5*sqrt(5) - 11)/2, about 0.09017.
    """
    from .paradox import hardy_spec

    config = config or OptimizerConfig()
    spec = hardy_spec()
    return _maximize_bell_paradox(
        "hardy-local", spec.positive_events, spec.zero_events, config, classify_optimum=False
    )


def maximize_chsh_paradox_local(config: Optional[OptimizerConfig] = None) -> OptimizationResult:
    """Maximize P(01|00) + P(01|10) under the four CHSH-paradox zeros.

    The feasible supremum for two-qubit local models is 0; the run reports
    the best feasible value over the restarts plus a structural
    classification of every feasible optimum (see ``classify_local_model``).
    """
    from .paradox import chsh_paradox_spec

    config = config or OptimizerConfig(restarts=1000)
    spec = chsh_paradox_spec()
    return _maximize_bell_paradox(
        "chsh-paradox-local", spec.positive_events, spec.zero_events, config, classify_optimum=True
    )


def classify_local_model(
    model: BellLocalModel,
    tol: float = 1e-8,
    branch_tol: Optional[float] = None,
) -> Classification:
    """Classify a model satisfying P(11|00) <= tol and P(11|10) <= tol.

    Those two conditions force |d| <= sqrt(tol) and sin(theta_a1/2)*b to be
    of order sqrt(tol), hence one of two structural branches: the second
    Alice setting collapses onto the first (compatible measurements), or the
    |01> and |11> amplitudes vanish (product state).  With the default
    ``branch_tol = 2*sqrt(tol)`` applied to sin^2 and its square root applied
    to amplitudes, every point passing the preconditions lands in a branch;
    anything else would witness a genuinely nonlocal feasible model.
    """
    p11_00, p11_10 = bell_event_probabilities(
        model, [bell_event("11|00"), bell_event("11|10")]
    )
    if p11_00 > tol or p11_10 > tol:
        raise ValueError(
            f"preconditions unmet: P(11|00)={p11_00:.2e}, P(11|10)={p11_10:.2e} > tol={tol:.0e}"
        )
    branch_sq = 2.0 * math.sqrt(tol) if branch_tol is None else branch_tol
    amp_tol = math.sqrt(branch_sq)
    if math.sin(model.theta_a1 / 2) ** 2 <= branch_sq:
        return Classification.COMPATIBLE_MEASUREMENTS
    if model.b <= amp_tol and model.d <= amp_tol:
        return Classification.PRODUCT_STATE
    return Classification.VIOLATING


# ---------------------------------------------------------------------------
# Pentagon (KCBS) task


def _spherical(angles: Sequence[float]) -> tuple[float, ...]:
    """Unit vector in R^(len(angles)+1) from hyperspherical angles."""
    v = []
    sin_prod = 1.0
    for t in angles[:-1]:
        v.append(sin_prod * math.cos(t))
        sin_prod *= math.sin(t)
    v.append(sin_prod * math.cos(angles[-1]))
    v.append(sin_prod * math.sin(angles[-1]))
    return tuple(v)


PENTAGON_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0))
PENTAGON_SATURATION_PAIRS = ((0, 1), (2, 3))
PENTAGON_POSITIVE_VERTEX = 4


def maximize_kcbs_qutrit(
    constrained: bool,
    config: Optional[OptimizerConfig] = None,
    dimension: int = 3,
) -> OptimizationResult:
    """Maximize the pentagon vertex sum over real unit vectors.

    Five vectors in the given dimension, consecutive ones orthogonal, handle
    pinned to the first basis vector (a global rotation gauge).  The
    unconstrained optimum is sqrt(5); adding the two logical-proof
    saturation conditions (vertex pairs (1,2) and (3,4) summing to 1) lowers
    it to 2 + 1/9.  Dimensions too small for the orthogonality pattern
    come back with ``feasible=False``.
    """
    config = config or OptimizerConfig(restarts=100)
    task = "kcbs-qutrit-constrained" if constrained else "kcbs-qutrit"
    if dimension < 1:
        raise ValueError("dimension must be positive")

    if dimension == 1:
        # vectors are +-1; every edge inner product is +-1, never 0
        residuals = [1.0] * len(PENTAGON_EDGES)
        if constrained:
            residuals += [abs(1.0 + 1.0 - 1.0)] * len(PENTAGON_SATURATION_PAIRS)
        return OptimizationResult(
            task=task,
            best_value=5.0,
            best_parameters={"vectors": [[1.0]] * 5, "dimension": 1},
            best_residuals={f"edge{e}": r for e, r in zip(PENTAGON_EDGES, residuals)},
            feasible=False,
            classification=None,
            restarts_completed=0,
            restart_summaries=(),
        )

    per_vector = dimension - 1

    def unpack(x: np.ndarray) -> list[tuple[float, ...]]:
        return [
            _spherical(x[k * per_vector : (k + 1) * per_vector]) for k in range(5)
        ]

    def evaluate(x: np.ndarray) -> tuple[float, np.ndarray]:
        v = unpack(x)
        p = [v[k][0] ** 2 for k in range(5)]
        residuals = [
            sum(v[i][t] * v[j][t] for t in range(dimension)) for i, j in PENTAGON_EDGES
        ]
        if constrained:
            residuals += [p[i] + p[j] - 1.0 for i, j in PENTAGON_SATURATION_PAIRS]
        return float(sum(p)), np.asarray(residuals)

    def describe(x: np.ndarray):
        v = unpack(x)
        _, residuals = evaluate(x)
        labels = [f"edge{e}" for e in PENTAGON_EDGES]
        if constrained:
            labels += [f"saturation{p}" for p in PENTAGON_SATURATION_PAIRS]
        return (
            {
                "vectors": [[float(c) for c in vec] for vec in v],
                "handle": [1.0] + [0.0] * (dimension - 1),
                "dimension": dimension,
            },
            dict(zip(labels, (float(r) for r in residuals))),
            None,
        )

    def sample(rng: np.random.Generator) -> np.ndarray:
        chunks = []
        for _ in range(5):
            if per_vector > 1:
                chunks.append(rng.uniform(0.0, math.pi, per_vector - 1))
            chunks.append(rng.uniform(0.0, TAU, 1))
        return np.concatenate(chunks)

    return _multistart(task, sample, evaluate, describe, config)
