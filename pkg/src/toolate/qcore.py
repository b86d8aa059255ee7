"""Dense complex linear algebra for small fixed-dimension quantum states.

State vectors are plain complex128 ndarrays over a computational basis;
operators are square complex128 matrices.  Basis ordering is row-major
over tensor factors (first factor outermost).  This module is agnostic
about what the factors mean; composite-state modules own the layout and
pass it in as a tuple of factor dimensions.

Dimensions in this package never exceed 36, so plain dense arithmetic
at double precision is exact to well below the stated tolerances.
"""

from __future__ import annotations

import numpy as np

from .rng import TrialRng

ATOL = 1e-10
ZERO_PROB = 1e-12


class ZeroProbability(Exception):
    """Raised when a projection has (numerically) zero Born weight."""


class InvalidPartition(Exception):
    """Raised when a measurement partition is not complete and orthogonal."""


def as_state(vec) -> np.ndarray:
    arr = np.asarray(vec, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError("state vector has non-finite amplitudes")
    return arr


def norm(state) -> float:
    return float(np.linalg.norm(as_state(state)))


def normalize(state) -> np.ndarray:
    arr = as_state(state)
    n = np.linalg.norm(arr)
    if n <= ZERO_PROB:
        raise ZeroProbability("cannot normalize a zero vector")
    return arr / n


def require_normalized(state, atol: float = ATOL) -> np.ndarray:
    arr = as_state(state)
    if abs(np.linalg.norm(arr) - 1.0) > atol:
        raise ValueError("state vector is not normalized")
    return arr


def dagger(op) -> np.ndarray:
    return np.asarray(op, dtype=complex).conj().T


def is_unitary(op, atol: float = ATOL) -> bool:
    u = np.asarray(op, dtype=complex)
    return u.shape[0] == u.shape[1] and np.allclose(
        dagger(u) @ u, np.eye(u.shape[0]), atol=atol, rtol=0.0
    )


def is_projector(op, atol: float = ATOL) -> bool:
    p = np.asarray(op, dtype=complex)
    if p.shape[0] != p.shape[1]:
        return False
    hermitian = np.allclose(p, dagger(p), atol=atol, rtol=0.0)
    idempotent = np.allclose(p @ p, p, atol=atol, rtol=0.0)
    return hermitian and idempotent


def tensor(u, v) -> np.ndarray:
    """Tensor product of two normalized states, first factor outermost."""
    a = require_normalized(u)
    b = require_normalized(v)
    return np.kron(a, b)


def apply_unitary(op, state, dims, axis: int) -> np.ndarray:
    """Apply a unitary to one tensor factor of ``state``.

    ``dims`` lists the factor dimensions in basis order and ``axis``
    selects the factor the operator acts on; identity is implied on the
    rest.  Norm is preserved.
    """
    u = np.asarray(op, dtype=complex)
    arr = as_state(state)
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != arr.size:
        raise ValueError(f"layout {dims} does not match state of dim {arr.size}")
    if u.shape != (dims[axis], dims[axis]):
        raise ValueError(
            f"operator of shape {u.shape} does not fit factor {axis} of dim {dims[axis]}"
        )
    if not is_unitary(u):
        raise ValueError("operator is not unitary")
    t = arr.reshape(dims)
    t = np.moveaxis(np.tensordot(u, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


def projection_probability(proj, state) -> float:
    p = np.asarray(proj, dtype=complex)
    arr = as_state(state)
    val = float(np.real(np.vdot(arr, p @ arr)))
    # clip rounding dust outside [0, 1]
    return min(max(val, 0.0), 1.0)


def project(proj, state) -> tuple[float, np.ndarray]:
    """Born probability and collapsed state for a projector.

    Raises ZeroProbability when the weight is at or below 1e-12; zeros
    in this package are analytic zeros, so the threshold only guards
    rounding.
    """
    p = np.asarray(proj, dtype=complex)
    if not is_projector(p):
        raise ValueError("operator is not a projector")
    arr = as_state(state)
    prob = projection_probability(p, arr)
    if prob <= ZERO_PROB:
        raise ZeroProbability(f"projection weight {prob:.3e} at or below {ZERO_PROB:.0e}")
    return prob, (p @ arr) / np.sqrt(prob)


def validate_partition(partition, dim: int, atol: float = ATOL) -> list[np.ndarray]:
    ops = [np.asarray(p, dtype=complex) for p in partition]
    if not ops:
        raise InvalidPartition("empty partition")
    total = np.zeros((dim, dim), dtype=complex)
    for p in ops:
        if p.shape != (dim, dim):
            raise InvalidPartition("partition element has wrong shape")
        if not is_projector(p, atol):
            raise InvalidPartition("partition element is not a projector")
        total += p
    if not np.allclose(total, np.eye(dim), atol=atol, rtol=0.0):
        raise InvalidPartition("partition does not sum to the identity")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if np.max(np.abs(ops[i] @ ops[j])) > atol:
                raise InvalidPartition("partition elements are not orthogonal")
    return ops


def sample(state, partition, rng: TrialRng) -> tuple[int, np.ndarray]:
    """Draw one outcome from a complete orthogonal projector family.

    One uniform is consumed per call: outcome = first index whose
    cumulative Born weight exceeds the draw.  Weights at or below 1e-12
    are snapped to zero first, so analytically impossible outcomes are
    never produced.
    """
    arr = require_normalized(state)
    ops = validate_partition(partition, arr.size)
    probs = np.array([projection_probability(p, arr) for p in ops])
    probs[probs <= ZERO_PROB] = 0.0
    total = probs.sum()
    if abs(total - 1.0) > ATOL:
        raise InvalidPartition(f"probabilities sum to {total}, expected 1")
    cum = np.cumsum(probs / total)
    cum[-1] = 1.0
    u = rng.uniform()
    index = int(np.searchsorted(cum, u, side="right"))
    post = (ops[index] @ arr) / np.sqrt(probs[index])
    return index, post


def reduced_density(state, dims, keep) -> np.ndarray:
    """Partial trace of a pure state down to the ``keep`` factors.

    ``keep`` is a set of factor indices into ``dims``; the kept factors
    stay in their original relative order.
    """
    arr = as_state(state)
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != arr.size:
        raise ValueError(f"layout {dims} does not match state of dim {arr.size}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError("keep indices outside layout")
    drop = [i for i in range(len(dims)) if i not in keep]
    t = arr.reshape(dims)
    perm = keep + drop
    t = np.transpose(t, perm)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    dd = arr.size // dk
    m = t.reshape(dk, dd)
    return m @ m.conj().T


def entanglement_entropy(rho) -> float:
    """Von Neumann entropy in bits; eigenvalues at or below 1e-12 contribute 0."""
    mat = np.asarray(rho, dtype=complex)
    if not np.allclose(mat, dagger(mat), atol=ATOL, rtol=0.0):
        raise ValueError("density matrix is not Hermitian")
    evals = np.linalg.eigvalsh(mat)
    ent = 0.0
    for lam in evals:
        if lam > ZERO_PROB:
            ent -= float(lam) * float(np.log2(lam))
    return ent


def fidelity(a, b) -> float:
    """Squared overlap of two normalized pure states."""
    va = require_normalized(a)
    vb = require_normalized(b)
    if va.size != vb.size:
        raise ValueError(f"dimension mismatch: {va.size} vs {vb.size}")
    val = float(abs(np.vdot(va, vb)) ** 2)
    return min(val, 1.0)
