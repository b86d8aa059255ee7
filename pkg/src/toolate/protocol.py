"""Composite path (x) spin registers and the value-first measurement protocol.

Register layout
---------------
A particle occupies a 6-dim space: path factor of dim 3 (ports p1/p2/p3,
each aimed at one magnet orientation) tensored with a spin factor of
dim 2 (z basis).  Single-particle basis index = 2*port + spin.  The pair
lives in 36 dims laid out as path_A (x) spin_A (x) path_B (x) spin_B,
row-major, so the joint index is 6*(2*pA + sA) + (2*pB + sB).

Exit bookkeeping
----------------
A detector-level outcome ("exit") is an orientation together with a
spin value.  Exits are enumerated by ascending orientation angle, not
by port, so every tabulated statistic is invariant under re-binding of
ports to orientations; the port is recovered through the trine when a
spatial mode is needed.

Protocol stages are tagged t1 (beam split), t2 (value measurement),
t3 (orientation measurement); records keep them in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import qcore
from .rng import TrialRng
from .spinlab import SpinValue, singlet, spin_eigenstates, wrap_angle

PATH_DIM = 3
SPIN_DIM = 2
PARTICLE_DIM = PATH_DIM * SPIN_DIM
JOINT_DIM = PARTICLE_DIM * PARTICLE_DIM
JOINT_LAYOUT = (PATH_DIM, SPIN_DIM, PATH_DIM, SPIN_DIM)

STAGE_SPLIT = "t1:split"
STAGE_VALUE = "t2:value"
STAGE_ORIENTATION = "t3:orientation"

PARTICLE_A = 0
PARTICLE_B = 1


@dataclass(frozen=True)
class Trine:
    """Three distinct coplanar orientations with their port binding.

    ``angles_by_port[k]`` is the orientation of the magnet behind port
    k.  ``orientations`` lists the same angles sorted ascending; that
    order is the canonical exit enumeration used by every table.
    """

    angles_by_port: tuple[float, float, float]

    def __post_init__(self):
        wrapped = tuple(wrap_angle(t) for t in self.angles_by_port)
        if len(set(wrapped)) != PATH_DIM:
            raise ValueError("orientations must be distinct")
        object.__setattr__(self, "angles_by_port", wrapped)

    @classmethod
    def default(cls) -> "Trine":
        return cls((0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0))

    @classmethod
    def from_degrees(cls, degrees: Sequence[float]) -> "Trine":
        return cls(tuple(math.radians(d) for d in degrees))

    def permuted(self, perm: Sequence[int]) -> "Trine":
        """Re-bind ports: new port k carries angles_by_port[perm[k]]."""
        if sorted(perm) != [0, 1, 2]:
            raise ValueError("perm must be a permutation of (0, 1, 2)")
        return Trine(tuple(self.angles_by_port[p] for p in perm))

    @property
    def orientations(self) -> tuple[float, float, float]:
        return tuple(sorted(self.angles_by_port))

    def port_of(self, theta: float) -> int:
        t = wrap_angle(theta)
        for port, angle in enumerate(self.angles_by_port):
            if angle == t:
                return port
        raise ValueError(f"orientation {theta!r} is not in the trine")

    def degrees(self) -> tuple[float, float, float]:
        return tuple(degrees_of(t) for t in self.angles_by_port)


def degrees_of(theta: float) -> float:
    """Angle in degrees, rounded so conversion dust never leaks into
    labels or records (119.99999999999999 -> 120.0)."""
    return round(math.degrees(theta), 9)


class ExitLabel(NamedTuple):
    theta: float
    value: SpinValue

    @property
    def degrees(self) -> float:
        return degrees_of(self.theta)

    def text(self, trine: "Trine | None" = None) -> str:
        port = f"p{trine.port_of(self.theta) + 1}@" if trine is not None else ""
        return f"{port}{self.degrees:g}deg:{self.value.label}"


def exit_labels(trine: Trine) -> list[ExitLabel]:
    """The six exits in canonical order: ascending angle, up before down."""
    return [ExitLabel(t, v) for t in trine.orientations for v in SpinValue]


def exit_index(trine: Trine, label: ExitLabel) -> int:
    rank = trine.orientations.index(wrap_angle(label.theta))
    return 2 * rank + int(label.value)


@dataclass(frozen=True, eq=False)
class JointState:
    """Normalized 36-dim pair state plus the trine it was built with."""

    vec: np.ndarray
    trine: Trine

    def __post_init__(self):
        object.__setattr__(self, "vec", qcore.require_normalized(self.vec))
        if self.vec.size != JOINT_DIM:
            raise ValueError("joint state must have dim 36")


def three_port_splitter() -> np.ndarray:
    """Balanced three-port splitter: DFT entries w**(j*k)/sqrt 3."""
    w = np.exp(2j * math.pi / PATH_DIM)
    j, k = np.meshgrid(np.arange(PATH_DIM), np.arange(PATH_DIM), indexing="ij")
    return w ** (j * k) / math.sqrt(PATH_DIM)


def uniform_paths() -> np.ndarray:
    """Splitter output for input port p1: equal coherent amplitudes."""
    return three_port_splitter()[:, 0]


def exit_vector(trine: Trine, label: ExitLabel) -> np.ndarray:
    """Single-particle exit state |port> (x) |eigenstate along theta>."""
    port = trine.port_of(label.theta)
    path = np.zeros(PATH_DIM, dtype=complex)
    path[port] = 1.0
    spin = spin_eigenstates(label.theta)[label.value]
    return np.kron(path, spin)


def prepare_joint(trine: Trine) -> JointState:
    """Both particles beam-split from port p1, spins in the singlet.

    Paths and spins start as a product, so the reduced spin state is
    exactly the singlet projector and each path marginal is uniform.
    """
    u = uniform_paths()
    spin_pair = singlet().reshape(SPIN_DIM, SPIN_DIM)
    vec = np.einsum("p,q,sz->psqz", u, u, spin_pair).reshape(JOINT_DIM)
    return JointState(vec, trine)


def _particle_operator(op6: np.ndarray, particle: int) -> np.ndarray:
    eye = np.eye(PARTICLE_DIM, dtype=complex)
    if particle == PARTICLE_A:
        return np.kron(op6, eye)
    if particle == PARTICLE_B:
        return np.kron(eye, op6)
    raise ValueError("particle must be 0 (A) or 1 (B)")


def value_projectors(trine: Trine, particle: int) -> tuple[np.ndarray, np.ndarray]:
    """Projectors fixing one particle's spin value across all three ports.

    P_up sums |port(o)><port(o)| (x) |up(o)><up(o)| over the trine; the
    orientation stays superposed.  P_up + P_down is the identity.
    """
    blocks = {v: np.zeros((PARTICLE_DIM, PARTICLE_DIM), dtype=complex) for v in SpinValue}
    for theta in trine.orientations:
        for v in SpinValue:
            vec = exit_vector(trine, ExitLabel(theta, v))
            blocks[v] += np.outer(vec, vec.conj())
    return (
        _particle_operator(blocks[SpinValue.UP], particle),
        _particle_operator(blocks[SpinValue.DOWN], particle),
    )


def exit_projector(trine: Trine, particle: int, label: ExitLabel) -> np.ndarray:
    vec = exit_vector(trine, label)
    return _particle_operator(np.outer(vec, vec.conj()), particle)


def measure_value(
    state: JointState, particle: int, rng: TrialRng
) -> tuple[SpinValue, JointState, float]:
    """Measure one particle's spin value only; orientation stays superposed."""
    partition = value_projectors(state.trine, particle)
    probs = [qcore.projection_probability(p, state.vec) for p in partition]
    index, post = qcore.sample(state.vec, partition, rng)
    return SpinValue(index), JointState(post, state.trine), probs[index]


def measure_orientation(
    state: JointState, particle: int, rng: TrialRng
) -> tuple[ExitLabel, JointState, float]:
    """Complete one particle's measurement by sampling its six exits."""
    labels = exit_labels(state.trine)
    partition = [exit_projector(state.trine, particle, lab) for lab in labels]
    probs = [qcore.projection_probability(p, state.vec) for p in partition]
    index, post = qcore.sample(state.vec, partition, rng)
    return labels[index], JointState(post, state.trine), probs[index]


def joint_exit_basis(trine: Trine) -> np.ndarray:
    """Columns are the 36 joint exit states in canonical (A, B) order."""
    singles = [exit_vector(trine, lab) for lab in exit_labels(trine)]
    basis = np.empty((JOINT_DIM, JOINT_DIM), dtype=complex)
    col = 0
    for va in singles:
        for vb in singles:
            basis[:, col] = np.kron(va, vb)
            col += 1
    return basis


def exit_amplitudes(state: JointState) -> np.ndarray:
    """Amplitude of every joint exit pair, shape (6, 6), indexed [A, B]."""
    basis = joint_exit_basis(state.trine)
    return (basis.conj().T @ state.vec).reshape(PARTICLE_DIM, PARTICLE_DIM)


def joint_distribution(state: JointState) -> np.ndarray:
    """Exact Born probability of every joint exit pair, shape (6, 6)."""
    return np.abs(exit_amplitudes(state)) ** 2


STAGE_ORDERS: tuple[tuple[str, ...], ...] = (
    ("vA", "vB", "oA", "oB"),
    ("vA", "vB", "oB", "oA"),
    ("vA", "oA", "vB", "oB"),
    ("vB", "vA", "oA", "oB"),
    ("vB", "vA", "oB", "oA"),
    ("vB", "oB", "vA", "oA"),
)


def composed_distribution(state: JointState, order: Sequence[str]) -> np.ndarray:
    """Joint exit table composed from sequential stage probabilities.

    ``order`` interleaves the four stages (value/orientation for each
    particle) with each particle's value before its orientation.  Used
    as the ordering-invariance oracle against ``joint_distribution``.
    """
    if sorted(order) != ["oA", "oB", "vA", "vB"]:
        raise ValueError("order must contain vA, vB, oA, oB exactly once")
    if order.index("vA") > order.index("oA") or order.index("vB") > order.index("oB"):
        raise ValueError("each particle's value stage must precede its orientation stage")

    trine = state.trine
    labels = exit_labels(trine)
    table = np.zeros((PARTICLE_DIM, PARTICLE_DIM))

    def recurse(stage: int, vec: np.ndarray, weight: float, outcome: dict) -> None:
        if stage == len(order):
            table[outcome["oA"], outcome["oB"]] += weight
            return
        tag = order[stage]
        particle = PARTICLE_A if tag.endswith("A") else PARTICLE_B
        if tag.startswith("v"):
            partition = list(value_projectors(trine, particle))
            names = list(SpinValue)
        else:
            value = outcome[f"v{'A' if particle == PARTICLE_A else 'B'}"]
            partition = [exit_projector(trine, particle, lab) for lab in labels]
            names = list(range(len(labels)))
        for name, proj in zip(names, partition):
            prob = qcore.projection_probability(proj, vec)
            if prob <= qcore.ZERO_PROB:
                continue
            if tag.startswith("o") and labels[name].value != value:
                # exits conflicting with the recorded value carry zero
                # weight; reaching here would mean a broken collapse
                raise AssertionError("nonzero weight on a value-inconsistent exit")
            post = (proj @ vec) / np.sqrt(prob)
            recurse(stage + 1, post, weight * prob, {**outcome, tag: name})
        return

    recurse(0, state.vec, 1.0, {})
    return table


def _snap(probs: np.ndarray) -> np.ndarray:
    out = np.where(probs <= qcore.ZERO_PROB, 0.0, probs)
    total = out.sum()
    return out / total


@dataclass(frozen=True)
class StageConditionals:
    """Exact stage-by-stage outcome probabilities for the value-first run.

    Derived once from the prepared pair by actual projection and
    collapse; a Monte Carlo trial then consumes one uniform per stage
    against these tables, which reproduces sequential measurement
    draw for draw.  Entries at or below 1e-12 are snapped to zero so
    impossible exits are never sampled.
    """

    trine: Trine
    p_value_a: np.ndarray          # (2,)
    p_value_b: np.ndarray          # (2, 2)    [vA, vB]
    p_exit_a: np.ndarray           # (2, 2, 6) [vA, vB, eA]
    p_exit_b: np.ndarray           # (2, 2, 6, 6) [vA, vB, eA, eB]


def stage_conditionals(trine: Trine) -> StageConditionals:
    start = prepare_joint(trine)
    labels = exit_labels(trine)
    pa_up, pa_down = value_projectors(trine, PARTICLE_A)
    pb_up, pb_down = value_projectors(trine, PARTICLE_B)
    proj_a = {SpinValue.UP: pa_up, SpinValue.DOWN: pa_down}
    proj_b = {SpinValue.UP: pb_up, SpinValue.DOWN: pb_down}

    p_value_a = np.zeros(2)
    p_value_b = np.zeros((2, 2))
    p_exit_a = np.zeros((2, 2, PARTICLE_DIM))
    p_exit_b = np.zeros((2, 2, PARTICLE_DIM, PARTICLE_DIM))

    for va in SpinValue:
        prob_a, state_a = qcore.project(proj_a[va], start.vec)
        p_value_a[va] = prob_a
        for vb in SpinValue:
            prob_b, state_b = qcore.project(proj_b[vb], state_a)
            p_value_b[va, vb] = prob_b
            for ea, label_a in enumerate(labels):
                prob_ea = qcore.projection_probability(
                    exit_projector(trine, PARTICLE_A, label_a), state_b
                )
                p_exit_a[va, vb, ea] = prob_ea
                if prob_ea <= qcore.ZERO_PROB:
                    continue
                _, state_ea = qcore.project(
                    exit_projector(trine, PARTICLE_A, label_a), state_b
                )
                for eb, label_b in enumerate(labels):
                    p_exit_b[va, vb, ea, eb] = qcore.projection_probability(
                        exit_projector(trine, PARTICLE_B, label_b), state_ea
                    )

    p_value_a = _snap(p_value_a)
    p_value_b = np.stack([_snap(row) for row in p_value_b])
    for va in SpinValue:
        for vb in SpinValue:
            p_exit_a[va, vb] = _snap(p_exit_a[va, vb])
            for ea in range(PARTICLE_DIM):
                row = p_exit_b[va, vb, ea]
                if p_exit_a[va, vb, ea] == 0.0:
                    p_exit_b[va, vb, ea] = 0.0
                else:
                    p_exit_b[va, vb, ea] = _snap(row)
    return StageConditionals(trine, p_value_a, p_value_b, p_exit_a, p_exit_b)


@dataclass(frozen=True)
class OutcomeRecord:
    """One trial's measurement events in stage order t1 < t2 < t3."""

    trial: int
    seed: int
    value_a: SpinValue
    value_b: SpinValue
    exit_a: ExitLabel
    exit_b: ExitLabel
    stages: tuple[str, ...] = field(
        default=(STAGE_SPLIT, STAGE_VALUE, STAGE_VALUE, STAGE_ORIENTATION, STAGE_ORIENTATION)
    )

    def __post_init__(self):
        if self.exit_a.value != self.value_a or self.exit_b.value != self.value_b:
            raise ValueError("exit value disagrees with the recorded stage-t2 value")


def run_trial(trine: Trine, rng: TrialRng, trial: int = 0) -> OutcomeRecord:
    """One full value-first trial via explicit state collapse (slow path)."""
    state = prepare_joint(trine)
    value_a, state, _ = measure_value(state, PARTICLE_A, rng)
    value_b, state, _ = measure_value(state, PARTICLE_B, rng)
    exit_a, state, _ = measure_orientation(state, PARTICLE_A, rng)
    exit_b, state, _ = measure_orientation(state, PARTICLE_B, rng)
    return OutcomeRecord(trial, rng.seed, value_a, value_b, exit_a, exit_b)
