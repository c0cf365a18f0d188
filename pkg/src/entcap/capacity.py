"""Multi-access capacity machinery: conversion probabilities, maxmin upper
bounds, one-round measurement protocols, grid sweeps, and capacity brackets."""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .states import (
    Bipartition,
    ProjectiveQubitBasis,
    joint_bell_measure,
    joint_measure,
    measure_party,
    schmidt_spectrum,
)

DEFAULT_GRID = (101, 101)
BRACKET_TOL = 1e-9


class CapacityConsistencyError(RuntimeError):
    """A computed lower bound exceeded its upper bound beyond tolerance.

    This always signals an implementation bug, never valid data.
    """


@dataclass(frozen=True)
class ProtocolResult:
    """Outcome ensemble of one measurement protocol.

    ``branches`` holds ``(probability, conversion_probability)`` per outcome;
    ``value`` is the branch-weighted singlet-production probability.
    ``bases`` is a pair of :class:`ProjectiveQubitBasis`, the string "bell",
    or the 4x4 matrix of an arbitrary joint basis.
    """

    party_pair: tuple
    bases: object
    branches: tuple
    value: float


@dataclass(frozen=True)
class CapacityBracket:
    """Lower/upper bounds in ebits plus the protocol achieving the lower one."""

    lower: float
    upper: float
    kind: str
    achieving_protocol: dict


def singlet_conversion_prob(spectrum):
    """Maximal probability of converting a pure bipartite state to a singlet
    by local operations: min(1, 2 (1 - max squared Schmidt coefficient))."""
    coeffs = getattr(spectrum, "squared_coeffs", spectrum)
    lam_max = float(max(coeffs))
    return float(min(1.0, max(0.0, 2.0 * (1.0 - lam_max))))


def _require_four_parties(state):
    if state.n_parties != 4:
        raise ValueError(f"need a 4-party state, got {state.n_parties} parties")


def _require_four_qubits(state):
    if state.local_dims != (2, 2, 2, 2):
        raise ValueError(f"need a 4-qubit state, got local dimensions {state.local_dims}")


def _second_largest(values):
    return sorted(values)[-2]


def p_maxmin_s(state):
    """Largest pairwise minimum of the four single-versus-rest conversion
    probabilities, i.e. their second-largest value.  Upper-bounds both the
    assisted and unassisted capacity."""
    _require_four_parties(state)
    probs = [
        singlet_conversion_prob(schmidt_spectrum(state, Bipartition((k,), 4))) for k in range(4)
    ]
    return _second_largest(probs)


def p_maxmin_d(state):
    """Second-largest conversion probability over the three two-versus-two
    splits.  Upper-bounds the unassisted capacity."""
    _require_four_parties(state)
    probs = [
        singlet_conversion_prob(schmidt_spectrum(state, Bipartition((0, k), 4)))
        for k in (1, 2, 3)
    ]
    return _second_largest(probs)


def _residual_conversion(outcomes):
    """(probability, conversion) per branch for 2-party residual states."""
    branches = []
    for p, post in outcomes:
        if post is None:
            branches.append((p, 0.0))
        else:
            split = Bipartition((0,), post.n_parties)
            branches.append((p, singlet_conversion_prob(schmidt_spectrum(post, split))))
    return tuple(branches)


def unassisted_protocol_value(state, party_i, party_j, basis_i, basis_j):
    """Measure two parties in product bases and convert each residual pair.

    The four branches are ordered by outcome (0,0), (0,1), (1,0), (1,1); the
    value is the branch-probability-weighted sum of the residual conversion
    probabilities.
    """
    _require_four_qubits(state)
    if party_i == party_j:
        raise ValueError("measured parties must differ")
    first = measure_party(state, party_i, basis_i)
    j_after = party_j - 1 if party_j > party_i else party_j
    branches = []
    for p_first, mid in first:
        if mid is None:
            branches.extend([(0.0, 0.0), (0.0, 0.0)])
            continue
        second = measure_party(mid, j_after, basis_j)
        for (p_second, post) in second:
            joint = p_first * p_second
            if post is None or joint < 1e-14:
                branches.append((joint, 0.0))
            else:
                split = Bipartition((0,), 2)
                branches.append(
                    (joint, singlet_conversion_prob(schmidt_spectrum(post, split)))
                )
    value = float(sum(p * c for p, c in branches))
    return ProtocolResult(
        party_pair=(party_i, party_j),
        bases=(basis_i, basis_j),
        branches=tuple(branches),
        value=value,
    )


def assisted_bell_value(state, party_i, party_j):
    """Joint Bell measurement on the assisted pair, then residual conversion.

    Models one round of the singlet-assisted protocol: the shared singlet
    lets the pair realize an entangled (Bell) measurement.
    """
    _require_four_qubits(state)
    branches = _residual_conversion(joint_bell_measure(state, party_i, party_j))
    value = float(sum(p * c for p, c in branches))
    return ProtocolResult(
        party_pair=(party_i, party_j), bases="bell", branches=branches, value=value
    )


def assisted_joint_value(state, party_i, party_j, kets):
    """Assisted protocol with an arbitrary rank-1 joint basis on the pair.

    ``kets`` is a 4x4 matrix of orthonormal measurement vectors; the Bell
    basis reproduces :func:`assisted_bell_value`.
    """
    _require_four_qubits(state)
    kets = np.asarray(kets, dtype=complex)
    branches = _residual_conversion(joint_measure(state, party_i, party_j, kets))
    value = float(sum(p * c for p, c in branches))
    return ProtocolResult(
        party_pair=(party_i, party_j), bases=kets, branches=branches, value=value
    )


# ---------------------------------------------------------------------------
# Vectorized sweep kernel.


def _basis_grid(xs, phis):
    """Stack of measurement bases over the (x, phi) grid, shape (nx*nphi, 2, 2)."""
    x, phi = np.meshgrid(xs, phis, indexing="ij")
    x, phi = x.ravel(), phi.ravel()
    kets = np.empty((x.size, 2, 2), dtype=complex)
    kets[:, 0, 0] = np.cos(x)
    kets[:, 0, 1] = np.exp(1j * phi) * np.sin(x)
    kets[:, 1, 0] = np.exp(-1j * phi) * np.sin(x)
    kets[:, 1, 1] = -np.cos(x)
    return kets


def _lambda_min_2x2(r):
    """Smallest eigenvalue of R^dag R for 2x2 matrices in the trailing axes.

    Uses the Gram-matrix gap hypot((p - s), 2|q|) and the stable quadratic
    root 2|det R|^2 / (tr + gap), accurate both near degeneracy and near
    rank 1.
    """
    p = np.abs(r[..., 0, 0]) ** 2 + np.abs(r[..., 0, 1]) ** 2
    s = np.abs(r[..., 1, 0]) ** 2 + np.abs(r[..., 1, 1]) ** 2
    q = r[..., 0, 0] * np.conj(r[..., 1, 0]) + r[..., 0, 1] * np.conj(r[..., 1, 1])
    gap = np.hypot(p - s, 2.0 * np.abs(q))
    det2 = np.abs(r[..., 0, 0] * r[..., 1, 1] - r[..., 0, 1] * r[..., 1, 0]) ** 2
    denom = p + s + gap
    return np.where(denom > 0.0, 2.0 * det2 / np.where(denom > 0.0, denom, 1.0), 0.0)


def _pair_tensor(state, pair):
    rest = [k for k in range(4) if k not in pair]
    return np.transpose(state.tensor(), list(pair) + rest)


def _pair_values_same_basis(state, pair, kets):
    """Protocol values over the basis grid with identical bases at both parties."""
    t4 = _pair_tensor(state, pair)
    residuals = np.einsum("gms,gnt,stuv->gmnuv", np.conj(kets), np.conj(kets), t4)
    return np.sum(2.0 * _lambda_min_2x2(residuals), axis=(1, 2))


def _pair_values_independent(state, pair, kets, chunk=64):
    """Max over the second party's grid for every first-party grid point.

    Also returns the argmax index of the second basis per first-party point.
    """
    t4 = _pair_tensor(state, pair)
    n = kets.shape[0]
    best = np.empty(n)
    best_arg = np.empty(n, dtype=int)
    for start in range(0, n, chunk):
        block = kets[start : start + chunk]
        residuals = np.einsum("gms,hnt,stuv->ghmnuv", np.conj(block), np.conj(kets), t4)
        values = np.sum(2.0 * _lambda_min_2x2(residuals), axis=(2, 3))
        best[start : start + chunk] = values.max(axis=1)
        best_arg[start : start + chunk] = values.argmax(axis=1)
    return best, best_arg


@dataclass(frozen=True)
class SweepResult:
    """Grid of protocol values per measuring pair, plus the best protocol.

    ``values[pair_index, ix, iphi]`` is the protocol value with basis
    parameters ``(xs[ix], phis[iphi])``; in independent-bases mode it is the
    maximum over the second party's grid for that first-party basis.
    """

    pairs: tuple
    pair_labels: tuple
    xs: np.ndarray
    phis: np.ndarray
    values: np.ndarray
    best: ProtocolResult
    independent: bool

    def iter_rows(self):
        """Rows (x, phi, pair_label, value) in deterministic export order."""
        for pair_index, label in enumerate(self.pair_labels):
            for ix, x in enumerate(self.xs):
                for iphi, phi in enumerate(self.phis):
                    yield float(x), float(phi), label, float(self.values[pair_index, ix, iphi])


def _resolve_pairs(state, pairs):
    if pairs == "all" or pairs is None:
        resolved = list(itertools.combinations(range(4), 2))
    else:
        resolved = []
        index = {lab.upper(): k for k, lab in enumerate(state.party_labels)}
        for item in pairs:
            if isinstance(item, str):
                if len(item) != 2 or item[0].upper() not in index or item[1].upper() not in index:
                    raise ValueError(f"bad measuring pair {item!r}")
                item = (index[item[0].upper()], index[item[1].upper()])
            i, j = sorted(int(k) for k in item)
            if i == j or not 0 <= i < 4 or not 0 <= j < 4:
                raise ValueError(f"bad measuring pair {item!r}")
            resolved.append((i, j))
    return tuple(resolved)


def sweep_unassisted(state, grid=DEFAULT_GRID, pairs="all", independent=False, threads=None):
    """Evaluate the two-party measurement protocol over a basis-parameter grid.

    The grid covers x in [0, pi/2] (endpoints included) and phi in [0, 2 pi)
    (periodic, endpoint excluded), with identical basis parameters at both
    measuring parties by default; ``independent=True`` optimizes the second
    party's basis over the same grid (quadratic cost, intended for coarse
    grids).  Grid evaluations are index-addressed, so the result does not
    depend on thread scheduling.
    """
    _require_four_qubits(state)
    steps_x, steps_phi = int(grid[0]), int(grid[1])
    if steps_x < 2 or steps_phi < 2:
        raise ValueError(f"grid steps must be >= 2, got {grid}")
    resolved = _resolve_pairs(state, pairs)
    xs = np.linspace(0.0, np.pi / 2.0, steps_x)
    phis = np.linspace(0.0, 2.0 * np.pi, steps_phi, endpoint=False)
    kets = _basis_grid(xs, phis)

    def run_pair(pair):
        if independent:
            return _pair_values_independent(state, pair, kets)
        return _pair_values_same_basis(state, pair, kets), None

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_pair, resolved))
    else:
        results = [run_pair(pair) for pair in resolved]

    values = np.stack([flat for flat, _ in results]).reshape(
        len(resolved), steps_x, steps_phi
    )
    best_index = int(np.argmax(values))
    pair_index, ix, iphi = np.unravel_index(best_index, values.shape)
    basis_i = ProjectiveQubitBasis(float(xs[ix]), float(phis[iphi]))
    if independent:
        arg = results[pair_index][1][ix * steps_phi + iphi]
        basis_j = ProjectiveQubitBasis(float(xs[arg // steps_phi]), float(phis[arg % steps_phi]))
    else:
        basis_j = basis_i
    best = unassisted_protocol_value(state, *resolved[pair_index], basis_i, basis_j)

    labels = tuple(
        "".join(state.party_labels[k] for k in pair) for pair in resolved
    )
    return SweepResult(
        pairs=resolved,
        pair_labels=labels,
        xs=xs,
        phis=phis,
        values=values,
        best=best,
        independent=independent,
    )


def write_sweep_csv(sweep, fh, mu=None, header=True):
    """Write sweep rows as CSV ``x,phi,pair,value`` (12 significant digits).

    When ``mu`` is given, a trailing ``mu`` column marks a family sweep;
    passing ``header=False`` appends to an already-started file.
    """
    if header:
        fh.write("x,phi,pair,value" + (",mu" if mu is not None else "") + "\n")
    suffix = "" if mu is None else f",{format(float(mu), '.12g')}"
    for x, phi, pair, value in sweep.iter_rows():
        fh.write(
            f"{format(x, '.12g')},{format(phi, '.12g')},{pair},{format(value, '.12g')}{suffix}\n"
        )


def _protocol_description(result, labels):
    pair = "".join(labels[k] for k in result.party_pair)
    if isinstance(result.bases, str):
        return {"pair": pair, "basis": result.bases}
    if isinstance(result.bases, np.ndarray):
        return {"pair": pair, "basis": "joint", "kets": result.bases.tolist()}
    basis_i, basis_j = result.bases
    desc = {"pair": pair, "basis": {"x": basis_i.x, "phi": basis_i.phi}}
    if (basis_j.x, basis_j.phi) != (basis_i.x, basis_i.phi):
        desc["basis_second"] = {"x": basis_j.x, "phi": basis_j.phi}
    return desc


def capacity_bracket(state, kind, grid=DEFAULT_GRID, threads=None, sweep=None):
    """Bracket the assisted or unassisted remote-singlet-production capacity.

    Lower bounds come from explicit protocols (grid sweep; plus the Bell
    measurement on every pair in the assisted case), upper bounds from the
    maxmin conversion probabilities.  A precomputed ``sweep`` for the same
    state may be passed to avoid recomputation.
    """
    if kind not in ("assisted", "unassisted"):
        raise ValueError(f"kind must be 'assisted' or 'unassisted', got {kind!r}")
    _require_four_qubits(state)
    if sweep is None:
        sweep = sweep_unassisted(state, grid=grid, pairs="all", threads=threads)
    best = sweep.best
    if kind == "unassisted":
        lower = best.value
        upper = min(p_maxmin_s(state), p_maxmin_d(state))
    else:
        for pair in itertools.combinations(range(4), 2):
            candidate = assisted_bell_value(state, *pair)
            if candidate.value > best.value:
                best = candidate
        lower = best.value
        upper = p_maxmin_s(state)
    if lower > upper + BRACKET_TOL:
        raise CapacityConsistencyError(
            f"{kind} lower bound {lower} exceeds upper bound {upper}; "
            "this indicates an implementation bug"
        )
    lower = float(min(max(lower, 0.0), upper, 1.0))
    upper = float(min(upper, 1.0))
    return CapacityBracket(
        lower=lower,
        upper=upper,
        kind=kind,
        achieving_protocol=_protocol_description(best, state.party_labels),
    )


def bracket_as_dict(bracket):
    """Structured record with fields kind, lower, upper, protocol."""
    return {
        "kind": bracket.kind,
        "lower": bracket.lower,
        "upper": bracket.upper,
        "protocol": bracket.achieving_protocol,
    }
