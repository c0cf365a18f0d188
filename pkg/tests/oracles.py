"""Independent oracles used to freeze expected values.

Everything here deliberately avoids the code paths under test: reduced
density matrices are built by explicit partial trace and diagonalized with
eigvalsh (never SVD of the amplitude matrix), conversion probabilities come
from the majorization tail-sum rule, and best product overlaps come from
direct optimization over explicit ansatz parameters.
"""

import itertools

import numpy as np
from scipy import optimize


def reduced_density_eigvals(state, keep):
    """Eigenvalues of the reduced density matrix on ``keep``, descending."""
    tensor = state.tensor()
    n = state.n_parties
    keep = tuple(keep)
    traced = tuple(k for k in range(n) if k not in keep)
    dim_keep = int(np.prod([state.local_dims[k] for k in keep]))
    moved = np.transpose(tensor, keep + traced).reshape(dim_keep, -1)
    rho = moved @ moved.conj().T
    return np.sort(np.linalg.eigvalsh(rho))[::-1]


def vidal_conversion_prob(source_sq, target_sq):
    """Optimal pure-state conversion probability from tail-sum ratios.

    ``p = min_l (sum_{i>=l} source_i) / (sum_{i>=l} target_i)`` over the
    descending squared Schmidt coefficients, with vacuous ratios (zero
    target tail) skipped.
    """
    src = np.sort(np.asarray(source_sq, dtype=float))[::-1]
    tgt = np.sort(np.asarray(target_sq, dtype=float))[::-1]
    size = max(src.size, tgt.size)
    src = np.pad(src, (0, size - src.size))
    tgt = np.pad(tgt, (0, size - tgt.size))
    best = 1.0
    for l in range(size):
        tail_t = tgt[l:].sum()
        if tail_t <= 1e-15:
            continue
        best = min(best, src[l:].sum() / tail_t)
    return best


def project_out_two_qubits(state, party_i, party_j, ket):
    """Project parties (i, j) onto ``ket`` (4-vector); returns (p, residual).

    The residual is renormalized and lives on the remaining parties in
    original order.  Built directly from the projector algebra.
    """
    n = state.n_parties
    rest = [k for k in range(n) if k not in (party_i, party_j)]
    moved = np.transpose(state.tensor(), [party_i, party_j] + rest).reshape(4, -1)
    residual = np.conj(np.asarray(ket)) @ moved
    p = float(np.real(np.vdot(residual, residual)))
    if p < 1e-14:
        return p, None
    return p, residual / np.sqrt(p)


def best_single_vs_rest_overlap2(amps, n_parties=3):
    """Brute-force max squared overlap with |a>_i (x) |rest> ansatz states.

    For each single-party split the pair side is optimized analytically
    (it is the normalized contraction), so only the 2 real parameters of
    |a> = (cos t, e^{i p} sin t) are searched: a coarse grid followed by
    Nelder-Mead refinement.  No singular value decomposition involved.
    """
    tensor = np.asarray(amps).reshape([2] * n_parties)
    best = 0.0
    ts = np.linspace(0.0, np.pi / 2.0, 31)
    ps = np.linspace(0.0, 2.0 * np.pi, 61, endpoint=False)
    tg, pg = np.meshgrid(ts, ps, indexing="ij")
    ansatz = np.stack(
        [np.cos(tg.ravel()), np.exp(1j * pg.ravel()) * np.sin(tg.ravel())], axis=1
    )
    for party in range(n_parties):
        matrix = np.moveaxis(tensor, party, 0).reshape(2, -1)

        def neg_overlap2(params, matrix=matrix):
            t, p = params
            a = np.array([np.cos(t), np.exp(1j * p) * np.sin(t)])
            contr = np.conj(a) @ matrix
            return -float(np.real(np.vdot(contr, contr)))

        coarse = np.sum(np.abs(np.conj(ansatz) @ matrix) ** 2, axis=1)
        order = np.argsort(coarse)[::-1][:3]
        for flat in order:
            start = [tg.ravel()[flat], pg.ravel()[flat]]
            res = optimize.minimize(
                neg_overlap2,
                start,
                method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000},
            )
            best = max(best, -res.fun)
    return best


def direct_overlap(state_a, state_b):
    """Plain summed conjugate product of the two amplitude lists."""
    total = 0.0 + 0.0j
    for x, y in zip(state_a.amplitudes, state_b.amplitudes):
        total += complex(x).conjugate() * complex(y)
    return total


def outcome_probability_by_summation(state, party, outcome_bit):
    """Born probability of a computational outcome by summing |amplitude|^2."""
    total = 0.0
    n = state.n_parties
    for flat, amp in enumerate(state.amplitudes):
        digits = []
        rem = flat
        for d in reversed(state.local_dims):
            digits.append(rem % d)
            rem //= d
        digits.reverse()
        if digits[party] == outcome_bit:
            total += abs(amp) ** 2
    return total


def random_product_state_overlap(amps, vectors):
    """|<v_0 (x) ... (x) v_{n-1} | psi>| recomputed from scratch."""
    ansatz = vectors[0]
    for v in vectors[1:]:
        ansatz = np.kron(ansatz, v)
    return abs(np.vdot(ansatz, np.asarray(amps).reshape(-1)))


def all_two_vs_two_splits():
    return [(0, 1), (0, 2), (0, 3)]


def pairwise_min_maximum(values):
    """max over unordered pairs of the pairwise minimum (reference form)."""
    return max(min(a, b) for a, b in itertools.combinations(values, 2))
