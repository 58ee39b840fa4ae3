"""Quantum models for exclusivity graphs: states, projectors, Born rule.

Two numeric tracks coexist.  Vectors whose entries are (Gaussian) integers
divided by a common square-root normalizer, like (1,1,0,0)/sqrt(2), are kept
exact: inner products are Gaussian integers over sqrt(d1*d2), so squared
overlaps and orthogonality tests are exact rational arithmetic.  Everything
else falls back to complex floats.

The module ships the explicit ququart realization of the CHSH paradox: a
handle state plus eight rank-one projector vectors whose orthogonality graph
is the CHSH exclusivity graph.  Its headline numbers are exact: each positive
vertex carries probability 1/12 (their sum 1/6), the three saturation pairs
each sum to 1, and the total vertex sum is 19/6.

Two-qubit states with local projective measurements are modelled by
``BellLocalModel``: a generic state  a|00> + b e^{i phi_b}|01> +
c e^{i phi_c}|10> + d e^{i phi_d}|11>  with the first measurement of each
party pinned to the computational basis (a harmless local-unitary gauge) and
the second parameterized on the Bloch sphere.  The parameterized kets are the
outcome-0 eigenvectors; outcome 1 projects on their orthogonal complements.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from . import graphs
from .classical import Behavior, enumerate_deterministic
from .scenario import (
    Event,
    ExclusivityGraph,
    GraphVertex,
    Scenario,
    atomic_event,
    bell_222,
    bell_event,
    chsh_event_graph,
    contextual_chsh_scenario,
    enumerate_events,
)

GaussianInt = tuple[int, int]


def _as_gaussian(entry) -> GaussianInt:
    if isinstance(entry, tuple):
        re, im = entry
        return int(re), int(im)
    return int(entry), 0


def _fraction_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a non-negative rational, or None."""
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class StateVector:
    """A unit vector, exact (integer entries over sqrt(den_sq)) or float.

    Exact form: ``amplitude_k = (num[k].re + i num[k].im) / sqrt(den_sq)``.
    """

    dim: int
    num: Optional[tuple[GaussianInt, ...]] = None
    den_sq: Optional[int] = None
    floats: Optional[tuple[complex, ...]] = None

    def __post_init__(self):
        if (self.num is None) == (self.floats is None):
            raise ValueError("exactly one of num/floats must be given")
        if self.num is not None:
            if self.den_sq is None or self.den_sq <= 0:
                raise ValueError("exact vectors need a positive den_sq")
            if len(self.num) != self.dim:
                raise ValueError("dimension mismatch")
            object.__setattr__(self, "num", tuple(_as_gaussian(e) for e in self.num))
        else:
            if len(self.floats) != self.dim:
                raise ValueError("dimension mismatch")
            object.__setattr__(self, "floats", tuple(complex(z) for z in self.floats))

    @classmethod
    def exact(cls, entries: Sequence, den_sq: int) -> "StateVector":
        return cls(dim=len(entries), num=tuple(_as_gaussian(e) for e in entries), den_sq=den_sq)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "StateVector":
        return cls(dim=len(amplitudes), floats=tuple(complex(z) for z in amplitudes))

    @property
    def is_exact(self) -> bool:
        return self.num is not None

    @property
    def amplitudes(self) -> np.ndarray:
        if self.is_exact:
            root = math.sqrt(self.den_sq)
            return np.array([complex(re, im) / root for re, im in self.num])
        return np.array(self.floats)

    def norm_sq(self) -> Union[Fraction, float]:
        if self.is_exact:
            return Fraction(sum(re * re + im * im for re, im in self.num), self.den_sq)
        return float(sum(abs(z) ** 2 for z in self.floats))

    def _check_dim(self, other: "StateVector"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def inner_exact(self, other: "StateVector") -> tuple[GaussianInt, int]:
        """<self|other> as (Gaussian integer, d) meaning (re+i*im)/sqrt(d)."""
        self._check_dim(other)
        re_total = im_total = 0
        for (ar, ai), (br, bi) in zip(self.num, other.num):
            # conj(a) * b
            re_total += ar * br + ai * bi
            im_total += ar * bi - ai * br
        return (re_total, im_total), self.den_sq * other.den_sq

    def inner(self, other: "StateVector") -> complex:
        """<self|other> as a complex float."""
        self._check_dim(other)
        if self.is_exact and other.is_exact:
            (re, im), d = self.inner_exact(other)
            return complex(re, im) / math.sqrt(d)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def inner_is_zero(self, other: "StateVector", float_tol: float = 1e-12) -> bool:
        if self.is_exact and other.is_exact:
            (re, im), _ = self.inner_exact(other)
            return re == 0 and im == 0
        return abs(self.inner(other)) <= float_tol

    def born(self, other: "StateVector") -> Union[Fraction, float]:
        """|<self|other>|^2, exact when both vectors are exact."""
        self._check_dim(other)
        if self.is_exact and other.is_exact:
            (re, im), d = self.inner_exact(other)
            return Fraction(re * re + im * im, d)
        return float(abs(self.inner(other)) ** 2)

    def to_json(self) -> dict:
        if self.is_exact:
            return {"dim": self.dim, "num": [list(g) for g in self.num], "den_sq": self.den_sq}
        return {
            "dim": self.dim,
            "amplitudes": [[z.real, z.imag] for z in self.floats],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "StateVector":
        if "num" in data:
            return cls.exact([tuple(g) for g in data["num"]], int(data["den_sq"]))
        return cls.from_amplitudes([complex(re, im) for re, im in data["amplitudes"]])


def born_probability(state: StateVector, vector: StateVector) -> Union[Fraction, float]:
    """|<vector|state>|^2, the outcome probability of a rank-one projector."""
    return vector.born(state)


@dataclass(frozen=True)
class SqrtFraction:
    """sign * sqrt(square) with rational square; exact decomposition weights."""

    square: Fraction
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        if self.square < 0:
            raise ValueError("square must be non-negative")
        object.__setattr__(self, "square", Fraction(self.square))

    def __float__(self) -> float:
        return self.sign * math.sqrt(self.square)


# ---------------------------------------------------------------------------
# The explicit CHSH-paradox construction (ququart handle + 8 vectors)

_CONSTRUCTION_HANDLE = ((1, 1, 0, 0), 2)
_CONSTRUCTION_VECTORS: dict[int, tuple[tuple[int, int, int, int], int]] = {
    1: ((0, -1, -2, 1), 6),
    2: ((1, 0, 0, 0), 1),
    3: ((0, 1, 0, 0), 1),
    4: ((0, 2, 1, 1), 6),
    5: ((3, 1, -1, -1), 12),
    6: ((2, 0, 1, -1), 6),
    7: ((1, 3, -1, 1), 12),
    8: ((1, 0, 2, 1), 6),
}

# Vertex -> 2-2-2 event dictionary tying the construction to the CHSH
# expression.  Derived once by pinned isomorphism search (see
# derive_chsh_vertex_event_mapping) and frozen here; a test revalidates it.
CHSH_VERTEX_EVENT_LABELS: dict[int, str] = {
    1: "01|00",
    2: "10|01",
    3: "11|11",
    4: "01|01",
    5: "10|00",
    6: "00|11",
    7: "10|10",
    8: "01|10",
}


def construction_handle() -> StateVector:
    entries, den = _CONSTRUCTION_HANDLE
    return StateVector.exact(entries, den)


def construction_vectors() -> dict[int, StateVector]:
    return {
        i: StateVector.exact(entries, den)
        for i, (entries, den) in sorted(_CONSTRUCTION_VECTORS.items())
    }


def contextual_chsh_graph() -> ExclusivityGraph:
    """Orthogonality graph of the construction vectors, vertices 1..8.

    Vertex ``i`` carries the atomic event (1|Ai) of the eight-measurement
    contextual scenario; edges are the exactly-orthogonal vector pairs.  The
    result is 3-regular with 12 edges and isomorphic to the CHSH event graph.
    """
    vecs = construction_vectors()
    ids = sorted(vecs)
    vertices = tuple(GraphVertex(id=i, event=atomic_event(f"A{i}", 1)) for i in ids)
    edges = tuple(
        (ids[a], ids[b])
        for a in range(len(ids))
        for b in range(a + 1, len(ids))
        if vecs[ids[a]].inner_is_zero(vecs[ids[b]])
    )
    return ExclusivityGraph(vertices=vertices, edges=edges)


@dataclass(frozen=True)
class QuantumContextModel:
    """A graph, one unit vector per vertex, and a handle state.

    Construction validates the orthonormal-representation property: unit
    norms and orthogonality across every edge (exactly, for exact vectors).
    """

    graph: ExclusivityGraph
    vertex_vectors: Mapping[int, StateVector]
    handle: StateVector

    def __post_init__(self):
        object.__setattr__(self, "vertex_vectors", dict(self.vertex_vectors))
        dims = {v.dim for v in self.vertex_vectors.values()} | {self.handle.dim}
        if len(dims) != 1:
            raise ValueError("all vectors must share one dimension")
        if self.handle.dim < 2:
            raise ValueError("dimension must be at least 2")
        report = graphs.verify_orthonormal_representation(self.graph, self.representation())
        if not report.valid:
            raise ValueError(f"not an orthonormal representation: {report.to_json()}")

    def representation(self) -> graphs.OrthonormalRepresentation:
        return graphs.OrthonormalRepresentation(
            dimension=self.handle.dim, vectors=self.vertex_vectors, handle=self.handle
        )

    def to_json(self) -> dict:
        from .scenario import graph_to_json

        return {
            "graph": graph_to_json(self.graph),
            "vertex_vectors": {str(i): v.to_json() for i, v in sorted(self.vertex_vectors.items())},
            "handle": self.handle.to_json(),
        }


def chsh_construction() -> QuantumContextModel:
    """The exact ququart model verifying the CHSH paradox (value 1/6)."""
    return QuantumContextModel(
        graph=contextual_chsh_graph(),
        vertex_vectors=construction_vectors(),
        handle=construction_handle(),
    )


def model_vertex_probabilities(model: QuantumContextModel) -> dict[int, Union[Fraction, float]]:
    """p(1|i) = |<v_i|psi>|^2 for every vertex of the model."""
    return {
        vid: born_probability(model.handle, vec)
        for vid, vec in sorted(model.vertex_vectors.items())
    }


def derive_chsh_vertex_event_mapping() -> dict[int, Event]:
    """Recompute the construction-vertex -> CHSH-event dictionary.

    The positive vertices 1 and 8 are pinned to the two positive events
    (01|00) and (01|10); the rest is fixed by isomorphism search in canonical
    order.  Any automorphic variant would serve equally, the pinning just
    makes the choice reproducible.
    """
    event_graph = chsh_event_graph()
    pins = {
        1: event_graph.vertex_by_event(bell_event("01|00")).id,
        8: event_graph.vertex_by_event(bell_event("01|10")).id,
    }
    mapping = graphs.find_vertex_event_mapping(contextual_chsh_graph(), event_graph, pins=pins)
    if mapping is None:
        raise RuntimeError("construction orthogonality graph is not the CHSH graph")
    return {i: event_graph.event_of(j) for i, j in mapping.items()}


def chsh_vertex_event_mapping() -> dict[int, Event]:
    """The frozen vertex -> event dictionary of the construction."""
    return {i: bell_event(s) for i, s in CHSH_VERTEX_EVENT_LABELS.items()}


def contextual_behavior(model: QuantumContextModel) -> Behavior:
    """Behavior over the eight-measurement contextual scenario."""
    scenario = contextual_chsh_scenario()
    probs = {}
    for vid, p in model_vertex_probabilities(model).items():
        one = p if isinstance(p, Fraction) else float(p)
        probs[atomic_event(f"A{vid}", 1)] = one
        probs[atomic_event(f"A{vid}", 0)] = 1 - one
    return Behavior(scenario=scenario, probabilities=probs)


def construction_bell_behavior() -> Behavior:
    """The 2-2-2 behavior induced by the construction.

    CHSH events inherit the vertex probabilities through the vertex-event
    dictionary, the four paradox zero events get probability 0, and the one
    remaining event of each context absorbs the exact rational remainder.
    The result is no-signaling but, per the local-model impossibility, not
    reachable by two-qubit local measurements.
    """
    from .paradox import chsh_paradox_spec

    scenario = bell_222()
    mapping = chsh_vertex_event_mapping()
    vertex_probs = model_vertex_probabilities(chsh_construction())
    probs: dict[Event, Fraction] = {
        mapping[i]: Fraction(p) for i, p in vertex_probs.items()
    }
    for zero in chsh_paradox_spec().zero_events:
        probs[zero] = Fraction(0)
    for ctx in scenario.contexts:
        events = scenario.context_events(ctx)
        free = [e for e in events if e not in probs]
        if len(free) != 1:
            raise RuntimeError(f"context {ctx} should have exactly one free event")
        probs[free[0]] = 1 - sum(probs[e] for e in events if e in probs)
    return Behavior(scenario=scenario, probabilities=probs)


def verify_state_decomposition(
    model: QuantumContextModel,
    vertex_pair: tuple[int, int],
    coefficients: tuple[Union[SqrtFraction, float, complex], ...],
) -> bool:
    """Check  handle = c1 * v_i + c2 * v_j  for a vertex pair.

    With exact vectors and SqrtFraction coefficients the check is exact
    whenever the rescaled weights are rational (true for all the shipped
    decompositions); otherwise it falls back to floats at 1e-12.
    """
    i, j = vertex_pair
    if i not in model.vertex_vectors or j not in model.vertex_vectors:
        raise ValueError(f"unknown vertices {vertex_pair}")
    c1, c2 = coefficients
    psi = model.handle
    vi, vj = model.vertex_vectors[i], model.vertex_vectors[j]

    if (
        psi.is_exact
        and vi.is_exact
        and vj.is_exact
        and isinstance(c1, SqrtFraction)
        and isinstance(c2, SqrtFraction)
    ):
        s1 = _fraction_sqrt(c1.square * psi.den_sq / Fraction(vi.den_sq))
        s2 = _fraction_sqrt(c2.square * psi.den_sq / Fraction(vj.den_sq))
        if s1 is not None and s2 is not None:
            s1, s2 = c1.sign * s1, c2.sign * s2
            for (pr, pi_), (ar, ai), (br, bi) in zip(psi.num, vi.num, vj.num):
                if Fraction(pr) != s1 * ar + s2 * br or Fraction(pi_) != s1 * ai + s2 * bi:
                    return False
            return True

    target = psi.amplitudes
    approx = complex(c1) * vi.amplitudes + complex(c2) * vj.amplitudes
    return bool(np.max(np.abs(target - approx)) <= 1e-12)


def ep_cover_check(events: Iterable[Event], scenario: Scenario) -> bool:
    """True when the events are pairwise exclusive and every deterministic
    strategy makes exactly one of them occur.

    Such a set saturates the exclusivity principle: the associated projectors
    resolve the identity, so any quantum behavior sums to exactly 1 on it.
    """
    from .scenario import are_exclusive

    events = list(events)
    for event in events:
        scenario.check_event(event)
    for a in range(len(events)):
        for b in range(a + 1, len(events)):
            if not are_exclusive(events[a], events[b]):
                return False
    for strategy in enumerate_deterministic(scenario):
        if sum(1 for e in events if strategy.occurs(e)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Two-qubit states with local measurements


@dataclass(frozen=True)
class BellLocalModel:
    """Generic two-qubit state plus one Bloch-parameterized second setting
    per party; first settings are pinned to the computational basis.

    Amplitudes (a, b, c, d) are non-negative with unit norm; phases ride on
    the |01>, |10>, |11> components.  The parameterized kets are the
    outcome-0 eigenvectors of their measurements.
    """

    a: float
    b: float
    c: float
    d: float
    phi_b: float = 0.0
    phi_c: float = 0.0
    phi_d: float = 0.0
    theta_a1: float = 0.0
    phi_a1: float = 0.0
    theta_b1: float = 0.0
    phi_b1: float = 0.0

    NORM_TOL = 1e-9

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("amplitudes must be non-negative (phases are separate)")
        norm = self.a**2 + self.b**2 + self.c**2 + self.d**2
        if abs(norm - 1.0) > self.NORM_TOL:
            raise ValueError(f"state norm^2 = {norm}, expected 1")
        for theta in (self.theta_a1, self.theta_b1):
            if not -1e-12 <= theta <= math.pi + 1e-12:
                raise ValueError("polar angles must lie in [0, pi]")
        for phi in (self.phi_b, self.phi_c, self.phi_d, self.phi_a1, self.phi_b1):
            if not -1e-12 <= phi < 2 * math.pi + 1e-12:
                raise ValueError("azimuthal angles must lie in [0, 2*pi)")

    @classmethod
    def from_unconstrained(
        cls,
        amplitudes: Sequence[float],
        phases: Sequence[float],
        theta_a1: float,
        phi_a1: float,
        theta_b1: float,
        phi_b1: float,
    ) -> "BellLocalModel":
        """Build a valid model from arbitrary reals (normalize, wrap angles).

        Negative amplitudes are folded into the phases: a global sign flip
        (probabilities are phase-blind) makes the |00> coefficient
        non-negative, then each remaining sign moves into its phase as pi.
        """
        amps = [float(x) for x in amplitudes]
        ph = [float(p) for p in phases]
        if amps[0] < 0:
            amps = [-x for x in amps]
        for k in (1, 2, 3):
            if amps[k] < 0:
                amps[k] = -amps[k]
                ph[k - 1] += math.pi
        norm = math.sqrt(sum(x * x for x in amps)) or 1.0
        a, b, c, d = (x / norm for x in amps)

        def wrap_polar(theta: float, phi: float) -> tuple[float, float]:
            theta = theta % (2 * math.pi)
            if theta > math.pi:
                theta, phi = 2 * math.pi - theta, phi + math.pi
            return theta, phi % (2 * math.pi)

        ta, pa = wrap_polar(theta_a1, phi_a1)
        tb, pb = wrap_polar(theta_b1, phi_b1)
        pb_, pc_, pd_ = (p % (2 * math.pi) for p in ph)
        return cls(a, b, c, d, pb_, pc_, pd_, ta, pa, tb, pb)

    def state_vector(self) -> StateVector:
        return StateVector.from_amplitudes(
            (
                self.a,
                self.b * cmath.exp(1j * self.phi_b),
                self.c * cmath.exp(1j * self.phi_c),
                self.d * cmath.exp(1j * self.phi_d),
            )
        )

    def to_json(self) -> dict:
        return {
            "amplitudes": [self.a, self.b, self.c, self.d],
            "phases": [self.phi_b, self.phi_c, self.phi_d],
            "theta_a1": self.theta_a1,
            "phi_a1": self.phi_a1,
            "theta_b1": self.theta_b1,
            "phi_b1": self.phi_b1,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "BellLocalModel":
        a, b, c, d = data["amplitudes"]
        pb, pc, pd = data["phases"]
        return cls(
            a, b, c, d, pb, pc, pd,
            data["theta_a1"], data["phi_a1"], data["theta_b1"], data["phi_b1"],
        )


def _bell_event_indices(event: Event) -> tuple[int, int, int, int]:
    """(a, b, x, y) of a 2-2-2 event with ids A0/A1/B0/B1."""
    alice = bob = None
    for mid, outcome in event.assignments:
        if mid[0] == "A":
            alice = (outcome, int(mid[1:]))
        elif mid[0] == "B":
            bob = (outcome, int(mid[1:]))
    if alice is None or bob is None:
        raise ValueError(f"not a bipartite event: {event}")
    return alice[0], bob[0], alice[1], bob[1]


def _bell_probabilities(
    psi: tuple[complex, complex, complex, complex],
    theta_a1: float,
    phi_a1: float,
    theta_b1: float,
    phi_b1: float,
    indices: Sequence[tuple[int, int, int, int]],
) -> list[float]:
    """P(ab|xy) for the listed events; shared by behaviors and optimizers.

    The outcome-0 eigenvector of setting 1 is cos(t/2)|0> + e^{i p} sin(t/2)|1>;
    outcome 1 uses the orthogonal complement (conj-swapped with a sign).
    """
    c00, c01, c10, c11 = (z.conjugate() for z in psi)
    ka = (math.cos(theta_a1 / 2), math.sin(theta_a1 / 2) * cmath.exp(1j * phi_a1))
    kb = (math.cos(theta_b1 / 2), math.sin(theta_b1 / 2) * cmath.exp(1j * phi_b1))
    vecs_a = {
        (0, 0): (1.0, 0j),
        (1, 0): (0j, -1.0),
        (0, 1): ka,
        (1, 1): (ka[1].conjugate(), -ka[0]),
    }
    vecs_b = {
        (0, 0): (1.0, 0j),
        (1, 0): (0j, -1.0),
        (0, 1): kb,
        (1, 1): (kb[1].conjugate(), -kb[0]),
    }
    out = []
    for a, b, x, y in indices:
        u0, u1 = vecs_a[(a, x)]
        v0, v1 = vecs_b[(b, y)]
        amp = c00 * u0 * v0 + c01 * u0 * v1 + c10 * u1 * v0 + c11 * u1 * v1
        out.append(abs(amp) ** 2)
    return out


def bell_event_probabilities(model: BellLocalModel, events: Sequence[Event]) -> list[float]:
    psi = tuple(model.state_vector().floats)
    indices = [_bell_event_indices(e) for e in events]
    return _bell_probabilities(
        psi, model.theta_a1, model.phi_a1, model.theta_b1, model.phi_b1, indices
    )


def bell_local_behavior(model: BellLocalModel) -> Behavior:
    """The 16-event behavior of a two-qubit state with local measurements."""
    scenario = bell_222()
    events = enumerate_events(scenario)
    probs = bell_event_probabilities(model, events)
    return Behavior(scenario=scenario, probabilities=dict(zip(events, probs)))


def measurement_direction_marginal(model: BellLocalModel, party: str, setting: int, outcome: int) -> float:
    """Direct single-party marginal, bypassing the joint distribution."""
    psi = np.array(model.state_vector().floats).reshape(2, 2)
    if setting == 0:
        ket = np.array([1.0, 0.0], dtype=complex)
    elif party == "A":
        ket = np.array(
            [math.cos(model.theta_a1 / 2), math.sin(model.theta_a1 / 2) * cmath.exp(1j * model.phi_a1)]
        )
    else:
        ket = np.array(
            [math.cos(model.theta_b1 / 2), math.sin(model.theta_b1 / 2) * cmath.exp(1j * model.phi_b1)]
        )
    if outcome == 1:
        ket = np.array([ket[1].conjugate(), -ket[0]])
    if party == "A":
        collapsed = ket.conjugate() @ psi
    else:
        collapsed = psi @ ket.conjugate()
    return float(np.sum(np.abs(collapsed) ** 2))
