"""Pure multiparty states: splits, Schmidt spectra, local unitaries, measurements.

Index convention: the flat amplitude index encodes the local indices with
party 0 most significant, i.e. ``i = sum_k i_k * prod_{m>k} d_m``.  This is
numpy C order, so ``amplitudes.reshape(local_dims)`` gives the coefficient
tensor ``T[i_0, ..., i_{n-1}]``.
"""

import itertools
import json
import warnings
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
SPECTRUM_CLIP = 1e-12
ZERO_PROB = 1e-14
UNITARY_TOL = 1e-10


class RawStateError(ValueError):
    """A raw state file is missing or malformed."""


def default_labels(n):
    """Party display names A, B, C, ..."""
    if n > 26:
        raise ValueError("more than 26 parties is not supported")
    return tuple(chr(ord("A") + k) for k in range(n))


class PureState:
    """Normalized pure state of ``n`` parties with local dimensions ``d_k >= 2``.

    Amplitudes are normalized on construction; instances are immutable and
    safe to share between threads.
    """

    __slots__ = ("amplitudes", "local_dims", "party_labels")

    def __init__(self, amplitudes, local_dims, party_labels=None):
        dims = tuple(int(d) for d in local_dims)
        if len(dims) < 1 or any(d < 2 for d in dims):
            raise ValueError(f"local dimensions must all be >= 2, got {dims}")
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        expected = int(np.prod(dims))
        if amps.size != expected:
            raise ValueError(
                f"amplitude vector has length {amps.size}, expected {expected} "
                f"for local dimensions {dims}"
            )
        norm = np.linalg.norm(amps)
        if norm < 1e-12:
            raise ValueError("cannot normalize an (almost) all-zero amplitude vector")
        amps = amps / norm
        amps.setflags(write=False)
        if party_labels is None:
            party_labels = default_labels(len(dims))
        elif len(party_labels) != len(dims):
            raise ValueError("party_labels length must match local_dims")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "party_labels", tuple(str(s) for s in party_labels))

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @property
    def n_parties(self):
        return len(self.local_dims)

    def tensor(self):
        """Coefficient tensor of shape ``local_dims`` (read-only view)."""
        return self.amplitudes.reshape(self.local_dims)

    def __repr__(self):
        return f"PureState(n_parties={self.n_parties}, local_dims={self.local_dims})"


class Bipartition:
    """Proper two-sided split of the parties ``{0, ..., n-1}``.

    Canonical form keeps party 0 in ``side_a`` so a split and its complement
    compare equal.
    """

    __slots__ = ("side_a", "n_parties")

    def __init__(self, side, n_parties):
        n = int(n_parties)
        members = frozenset(int(k) for k in side)
        if not members:
            raise ValueError("bipartition side must be nonempty")
        if not members <= set(range(n)):
            raise ValueError(f"party indices {sorted(members)} out of range for {n} parties")
        if len(members) == n:
            raise ValueError("bipartition side must be a proper subset of the parties")
        if 0 not in members:
            members = frozenset(range(n)) - members
        object.__setattr__(self, "side_a", tuple(sorted(members)))
        object.__setattr__(self, "n_parties", n)

    def __setattr__(self, name, value):
        raise AttributeError("Bipartition is immutable")

    @property
    def side_b(self):
        return tuple(k for k in range(self.n_parties) if k not in self.side_a)

    @classmethod
    def from_string(cls, text, party_labels):
        """Parse splits like ``A:BCD`` or ``AB:CD`` against the given labels."""
        left, sep, right = text.partition(":")
        if not sep or not left or not right:
            raise ValueError(f"split must look like 'A:BCD' or 'AB:CD', got {text!r}")
        index = {lab.upper(): k for k, lab in enumerate(party_labels)}
        try:
            side_a = [index[ch.upper()] for ch in left]
            side_b = [index[ch.upper()] for ch in right]
        except KeyError as exc:
            raise ValueError(f"unknown party label {exc.args[0]!r} in split {text!r}") from None
        both = side_a + side_b
        if sorted(both) != list(range(len(party_labels))):
            raise ValueError(f"split {text!r} must mention every party exactly once")
        return cls(side_a, len(party_labels))

    def __eq__(self, other):
        return (
            isinstance(other, Bipartition)
            and self.n_parties == other.n_parties
            and self.side_a == other.side_a
        )

    def __hash__(self):
        return hash((self.n_parties, self.side_a))

    def __repr__(self):
        return f"Bipartition(side_a={self.side_a}, n_parties={self.n_parties})"


def all_bipartitions(n_parties):
    """All canonical bipartitions of ``n`` parties (2**(n-1) - 1 of them)."""
    if n_parties < 2:
        raise ValueError("need at least 2 parties")
    out = []
    others = list(range(1, n_parties))
    for r in range(0, n_parties - 1):
        for extra in itertools.combinations(others, r):
            out.append(Bipartition((0,) + extra, n_parties))
    return out


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Descending squared Schmidt coefficients; values below 1e-12 are dropped."""

    squared_coeffs: tuple

    def __init__(self, values):
        vals = np.sort(np.asarray(values, dtype=float))[::-1]
        if vals.size and vals[0] > 1 + 1e-10:
            raise ValueError(f"squared coefficients must lie in [0, 1], got {vals[0]}")
        vals = vals[vals >= SPECTRUM_CLIP]
        total = float(vals.sum())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"squared Schmidt coefficients sum to {total}, expected 1")
        object.__setattr__(self, "squared_coeffs", tuple(float(v) for v in vals))

    @property
    def max_squared(self):
        return self.squared_coeffs[0]

    def __iter__(self):
        return iter(self.squared_coeffs)

    def __len__(self):
        return len(self.squared_coeffs)


@dataclass(frozen=True)
class ProjectiveQubitBasis:
    """Qubit basis {cos x|0> + e^{i phi} sin x|1>, e^{-i phi} sin x|0> - cos x|1>}.

    ``x`` parameterizes [0, pi/2], ``phi`` is taken modulo 2 pi.
    """

    x: float
    phi: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.x) or not np.isfinite(self.phi):
            raise ValueError("basis parameters must be finite")
        if self.x < -1e-12 or self.x > np.pi / 2 + 1e-12:
            raise ValueError(f"x must lie in [0, pi/2], got {self.x}")
        object.__setattr__(self, "x", float(min(max(self.x, 0.0), np.pi / 2)))
        object.__setattr__(self, "phi", float(np.mod(self.phi, 2 * np.pi)))

    def vectors(self):
        """2x2 array whose rows are the two basis kets."""
        c, s = np.cos(self.x), np.sin(self.x)
        e = np.exp(1j * self.phi)
        return np.array([[c, e * s], [np.conj(e) * s, -c]])


COMPUTATIONAL_BASIS = ProjectiveQubitBasis(0.0, 0.0)
PLUS_MINUS_BASIS = ProjectiveQubitBasis(np.pi / 4, 0.0)

# Bell kets on two qubits, in the fixed output order used by joint_bell_measure.
BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")
_R2 = 1.0 / np.sqrt(2.0)
BELL_VECTORS = np.array(
    [
        [_R2, 0.0, 0.0, _R2],
        [_R2, 0.0, 0.0, -_R2],
        [0.0, _R2, _R2, 0.0],
        [0.0, _R2, -_R2, 0.0],
    ]
)


def schmidt_spectrum(state, split):
    """Squared singular values of the state reshaped across ``split``, descending."""
    if split.n_parties != state.n_parties:
        raise ValueError("bipartition refers to a different number of parties")
    order = list(split.side_a) + list(split.side_b)
    dim_a = int(np.prod([state.local_dims[k] for k in split.side_a]))
    matrix = np.transpose(state.tensor(), order).reshape(dim_a, -1)
    singular = np.linalg.svd(matrix, compute_uv=False)
    return SchmidtSpectrum(singular**2)


def apply_local_unitary(state, party, u):
    """Apply a ``d x d`` unitary on one party; the spectrum across every split is preserved."""
    if not 0 <= party < state.n_parties:
        raise ValueError(f"party index {party} out of range")
    d = state.local_dims[party]
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"unitary must be {d}x{d} for party {party}, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(d))) > UNITARY_TOL:
        raise ValueError("matrix is not unitary within 1e-10")
    rotated = np.moveaxis(np.tensordot(u, state.tensor(), axes=(1, party)), 0, party)
    return PureState(rotated.reshape(-1), state.local_dims, state.party_labels)


def _drop_party(state, party):
    dims = state.local_dims[:party] + state.local_dims[party + 1 :]
    labels = state.party_labels[:party] + state.party_labels[party + 1 :]
    return dims, labels


def measure_party(state, party, basis):
    """Projective measurement of one qubit party.

    Returns the two outcomes as ``(probability, post_state)`` with the
    renormalized post-states on the remaining parties.  Outcomes with
    probability below 1e-14 carry ``None`` instead of a state.
    """
    if state.n_parties < 2:
        raise ValueError("need at least 2 parties to measure one out")
    if not 0 <= party < state.n_parties:
        raise ValueError(f"party index {party} out of range")
    if state.local_dims[party] != 2:
        raise ValueError(f"party {party} has dimension {state.local_dims[party]}, expected 2")
    dims, labels = _drop_party(state, party)
    tensor = state.tensor()
    kets = basis.vectors()
    outcomes = []
    for m in range(2):
        residual = np.tensordot(np.conj(kets[m]), tensor, axes=(0, party))
        p = float(np.real(np.vdot(residual, residual)))
        if p < ZERO_PROB:
            outcomes.append((p, None))
        else:
            outcomes.append((p, PureState(residual.reshape(-1), dims, labels)))
    return outcomes


def joint_measure(state, party_i, party_j, kets):
    """Rank-1 joint projective measurement of two qubit parties.

    ``kets`` is a 4x4 matrix whose rows are the orthonormal measurement
    vectors on the pair (checked unitary within 1e-10).
    """
    if party_i == party_j:
        raise ValueError("measured parties must differ")
    if state.n_parties < 3:
        raise ValueError("need at least 3 parties for a joint measurement")
    for party in (party_i, party_j):
        if not 0 <= party < state.n_parties:
            raise ValueError(f"party index {party} out of range")
        if state.local_dims[party] != 2:
            raise ValueError(f"party {party} has dimension {state.local_dims[party]}, expected 2")
    kets = np.asarray(kets, dtype=complex)
    if kets.shape != (4, 4):
        raise ValueError(f"joint basis must be 4x4, got {kets.shape}")
    if np.max(np.abs(kets @ kets.conj().T - np.eye(4))) > UNITARY_TOL:
        raise ValueError("joint basis rows are not orthonormal within 1e-10")
    rest = [k for k in range(state.n_parties) if k not in (party_i, party_j)]
    dims = tuple(state.local_dims[k] for k in rest)
    labels = tuple(state.party_labels[k] for k in rest)
    moved = np.transpose(state.tensor(), [party_i, party_j] + rest)
    stacked = moved.reshape(4, -1)
    outcomes = []
    for ket in kets:
        residual = np.conj(ket) @ stacked
        p = float(np.real(np.vdot(residual, residual)))
        if p < ZERO_PROB:
            outcomes.append((p, None))
        else:
            outcomes.append((p, PureState(residual, dims, labels)))
    return outcomes


def joint_bell_measure(state, party_i, party_j):
    """Joint measurement of two qubit parties in the Bell basis.

    Outcomes are ordered as ``BELL_LABELS`` = (phi+, phi-, psi+, psi-).
    """
    return joint_measure(state, party_i, party_j, BELL_VECTORS)


def inner_product(s1, s2):
    """Overlap <s1|s2>, conjugate-linear in the first argument."""
    if s1.local_dims != s2.local_dims:
        raise ValueError(f"local dimensions differ: {s1.local_dims} vs {s2.local_dims}")
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def states_equal_up_to_phase(s1, s2, tol=1e-10):
    """True when |<s1|s2>| = 1 within ``tol`` (global phase ignored)."""
    return abs(abs(inner_product(s1, s2)) - 1.0) <= tol


def haar_random_unitary(d, rng):
    """Haar-distributed ``d x d`` unitary (QR of a complex Ginibre matrix)."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_pure_state(local_dims, rng):
    """Normalized state with complex-Gaussian amplitudes (Haar on the sphere)."""
    size = int(np.prod(local_dims))
    return PureState(rng.normal(size=size) + 1j * rng.normal(size=size), local_dims)


def save_raw_state(state, path):
    """Write the raw state file: local_dims plus [real, imaginary] amplitude pairs."""
    doc = {
        "local_dims": list(state.local_dims),
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_raw_state(path):
    """Read a raw state file; normalizes and warns when the norm is off by > 1e-6."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise RawStateError(f"cannot read state file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RawStateError(f"state file {path} is not valid JSON: {exc}") from exc
    try:
        dims = [int(d) for d in doc["local_dims"]]
        pairs = doc["amplitudes"]
        amps = np.array([complex(float(re), float(im)) for re, im in pairs])
    except (KeyError, TypeError, ValueError) as exc:
        raise RawStateError(
            f"state file {path} must carry 'local_dims' and 'amplitudes' as [re, im] pairs"
        ) from exc
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-6:
        warnings.warn(
            f"state file {path}: input norm {norm:.6g} deviates from 1 by more than 1e-6; "
            "renormalizing",
            stacklevel=2,
        )
    try:
        return PureState(amps, dims)
    except ValueError as exc:
        raise RawStateError(f"state file {path}: {exc}") from exc
