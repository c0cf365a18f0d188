"""Entanglement measures: GGM in closed form, GM by rank-1 alternating optimization."""

import warnings
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .states import all_bipartitions, schmidt_spectrum

GM_WARN_QUBITS = 8

BipartiteCapacities = namedtuple("BipartiteCapacities", "classical quantum entanglement")


def von_neumann_entropy(spectrum):
    """Base-2 entropy -sum p log2 p of a Schmidt spectrum, with 0 log 0 := 0.

    Accepts a :class:`SchmidtSpectrum` or any probability sequence.
    """
    probs = np.asarray(getattr(spectrum, "squared_coeffs", spectrum), dtype=float)
    if probs.size == 0 or np.any(probs < -1e-12):
        raise ValueError("spectrum entries must be nonnegative")
    if abs(float(probs.sum()) - 1.0) > 1e-8:
        raise ValueError(f"spectrum sums to {probs.sum()}, expected 1")
    probs = probs[probs > 0]
    return float(-(probs @ np.log2(probs)))


def bipartite_capacities(state):
    """Dense-coding, teleportation, and entanglement values of a two-party state.

    For equal local dimensions ``d`` these are ``log2 d + S``, ``S``, ``S``
    (bits, qubits, ebits) with ``S`` the entropy of either reduced side.
    """
    if state.n_parties != 2:
        raise ValueError(f"need exactly 2 parties, got {state.n_parties}")
    d_a, d_b = state.local_dims
    if d_a != d_b:
        raise ValueError(f"local dimensions must be equal, got {state.local_dims}")
    split = all_bipartitions(2)[0]
    entropy = von_neumann_entropy(schmidt_spectrum(state, split))
    return BipartiteCapacities(float(np.log2(d_a)) + entropy, entropy, entropy)


def ggm(state):
    """Genuine-multiparty entanglement: 1 minus the largest squared Schmidt
    coefficient over all canonical bipartitions.

    Zero exactly for states that are product across some split.
    """
    if state.n_parties < 2:
        raise ValueError("need at least 2 parties")
    largest = max(
        schmidt_spectrum(state, split).max_squared for split in all_bipartitions(state.n_parties)
    )
    return max(0.0, 1.0 - largest)


@dataclass
class GmResult:
    """Outcome of the rank-1 approximation behind the geometric measure."""

    value: float
    best_overlap: float
    product_vectors: tuple
    restarts_used: int
    iterations: int
    converged: bool


def _contract_except(tensor, vectors, skip):
    """Contract conj(vectors[m]) into every axis m != skip; returns the axis-``skip`` vector."""
    out = np.moveaxis(tensor, skip, 0)
    for m in range(len(vectors)):
        if m != skip:
            out = np.tensordot(out, np.conj(vectors[m]), axes=(1, 0))
    return out


def gm(state, restarts=50, tol=1e-10, seed=None, max_iterations=10000):
    """Geometric measure 1 - Lambda_max^2 over fully product states.

    The best product ansatz is found by alternating optimization: with all
    parties but one fixed, the optimal local vector is the normalized
    contraction of the state against the other parties' vectors, so the
    overlap is non-decreasing from sweep to sweep.  The best of ``restarts``
    random initializations is reported; the seed makes runs reproducible.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if int(np.prod(state.local_dims)) > 2**GM_WARN_QUBITS:
        warnings.warn(
            f"gm on a state of total dimension {int(np.prod(state.local_dims))} "
            "may be slow",
            stacklevel=2,
        )
    rng = np.random.default_rng(seed)
    tensor = state.tensor()
    n = state.n_parties

    best = None
    for _ in range(restarts):
        vectors = []
        for d in state.local_dims:
            v = rng.normal(size=d) + 1j * rng.normal(size=d)
            vectors.append(v / np.linalg.norm(v))
        overlap = 0.0
        converged = False
        sweeps = 0
        while sweeps < max_iterations:
            sweeps += 1
            for k in range(n):
                contracted = _contract_except(tensor, vectors, k)
                norm = np.linalg.norm(contracted)
                if norm < 1e-300:
                    # ansatz momentarily orthogonal to the state; re-randomize
                    contracted = rng.normal(size=vectors[k].size) + 1j * rng.normal(
                        size=vectors[k].size
                    )
                    norm = np.linalg.norm(contracted)
                vectors[k] = contracted / norm
            new_overlap = float(norm)
            assert new_overlap >= overlap - 1e-12, "overlap must be non-decreasing"
            gain = new_overlap - overlap
            overlap = new_overlap
            if gain < tol:
                converged = True
                break
        if best is None or overlap > best[0]:
            best = (overlap, tuple(vectors), sweeps, converged)

    overlap, vectors, sweeps, converged = best
    return GmResult(
        value=max(0.0, 1.0 - overlap * overlap),
        best_overlap=overlap,
        product_vectors=vectors,
        restarts_used=restarts,
        iterations=sweeps,
        converged=converged,
    )
