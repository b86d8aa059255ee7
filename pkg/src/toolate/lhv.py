"""Local-hidden-variable baselines.

Two model families: deterministic per-orientation value assignments for
the standard Bell test, and source-fixed "conspiracy" joint tables for
the value-first protocol, where orientation and value are both decided
at emission.  Bell statistics alone cannot exclude the latter; the
interference module provides the discriminator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .protocol import PATH_DIM, Trine, three_port_splitter


@dataclass(frozen=True)
class DeterministicStrategy:
    """Pre-assigned +-1 outcomes for each side's two settings."""

    a: int
    a2: int
    b: int
    b2: int

    def __post_init__(self):
        for v in (self.a, self.a2, self.b, self.b2):
            if v not in (-1, 1):
                raise ValueError("assignments must be +-1")

    def chsh(self) -> int:
        return self.a * self.b - self.a * self.b2 + self.a2 * self.b + self.a2 * self.b2


def enumerate_chsh_max(
    a: float, a2: float, b: float, b2: float
) -> tuple[float, DeterministicStrategy]:
    """Exhaustive maximum of |S| over all 16 deterministic strategies.

    The angles only label the settings; deterministic assignments make S
    a pure sign combination, so the maximum is exactly 2 for any angles.
    """
    del a, a2, b, b2  # settings are labels here; S depends only on signs
    best = None
    best_s = -1
    for signs in itertools.product((1, -1), repeat=4):
        strat = DeterministicStrategy(*signs)
        s = abs(strat.chsh())
        if s > best_s:
            best_s, best = s, strat
    return float(best_s), best


def lhv_epr_sample(
    mixture: list[tuple[float, DeterministicStrategy]],
    n: int,
    master_seed: int,
    backend: str | None = None,
) -> dict[str, float]:
    """Monte Carlo Bell estimates under a mixture of deterministic strategies.

    Each trial draws one strategy; outcomes are then fixed, so the four
    correlation estimates are exact averages of the drawn strategies'
    sign products.  Returns per-pair estimates and the sampled S.
    """
    if n < 1:
        raise ValueError("need at least one trial")
    weights = np.array([w for w, _ in mixture], dtype=float)
    if np.any(weights < 0) or weights.sum() <= 0:
        raise ValueError("mixture weights must be nonnegative and not all zero")
    cum = np.cumsum(weights / weights.sum()).reshape(1, -1)
    counts = _kernels.categorical_counts(cum, master_seed, n, backend=backend)[0]

    strategies = [s for _, s in mixture]
    est = {"E_ab": 0.0, "E_ab2": 0.0, "E_a2b": 0.0, "E_a2b2": 0.0}
    for count, strat in zip(counts, strategies):
        frac = count / n
        est["E_ab"] += frac * strat.a * strat.b
        est["E_ab2"] += frac * strat.a * strat.b2
        est["E_a2b"] += frac * strat.a2 * strat.b
        est["E_a2b2"] += frac * strat.a2 * strat.b2
    est["S"] = est["E_ab"] - est["E_ab2"] + est["E_a2b"] + est["E_a2b2"]
    est["n"] = float(n)
    return est


@dataclass(frozen=True)
class ConspiracyModel:
    """Joint source distribution over both orientations and both values.

    ``table[oa, ob, va, vb]`` is the probability that the source fixes
    orientation rank oa/ob and value va/vb for particles A/B.  Nothing
    constrains the table: models that copy the quantum exit statistics
    are deliberately representable.
    """

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.shape != (PATH_DIM, PATH_DIM, 2, 2):
            raise ValueError("table must have shape (3, 3, 2, 2)")
        if np.any(t < -1e-15):
            raise ValueError("probabilities must be nonnegative")
        if abs(t.sum() - 1.0) > 1e-10:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "table", np.clip(t, 0.0, None))

    @classmethod
    def uniform(cls) -> "ConspiracyModel":
        return cls(np.full((PATH_DIM, PATH_DIM, 2, 2), 1.0 / 36.0))

    @classmethod
    def from_exit_table(cls, dist: np.ndarray) -> "ConspiracyModel":
        """Copy a quantum joint exit table into a source-fixed model."""
        d = np.asarray(dist, dtype=float).reshape(6, 6)
        table = np.zeros((PATH_DIM, PATH_DIM, 2, 2))
        for ea in range(6):
            for eb in range(6):
                table[ea // 2, eb // 2, ea % 2, eb % 2] = d[ea, eb]
        return cls(table)

    def exit_table(self) -> np.ndarray:
        """The model's joint exit-pair distribution, shape (6, 6)."""
        out = np.zeros((6, 6))
        for oa in range(PATH_DIM):
            for ob in range(PATH_DIM):
                for va in range(2):
                    for vb in range(2):
                        out[2 * oa + va, 2 * ob + vb] = self.table[oa, ob, va, vb]
        return out


def conspiracy_predictions(
    model: ConspiracyModel, trine: Trine
) -> tuple[np.ndarray, np.ndarray]:
    """Exit-pair table and recombination-port prediction of a source model.

    A source-fixed orientation means a definite port, so recombination
    sees an incoherent mixture: each definite port spreads uniformly
    through the inverse splitter and every model predicts equal thirds,
    whatever its joint table.
    """
    inverse = three_port_splitter().conj().T
    port_marginal = np.zeros(PATH_DIM)
    for rank in range(PATH_DIM):
        port = trine.port_of(trine.orientations[rank])
        port_marginal[port] += model.table[rank].sum()
    ports = np.zeros(PATH_DIM)
    for port in range(PATH_DIM):
        spread = np.abs(inverse[:, port]) ** 2
        ports += port_marginal[port] * spread
    return model.exit_table(), ports
