"""Named state families of the four-party study set, plus the CLI spec grammar."""

import numpy as np

from .states import PureState, load_raw_state

RVB_MU_LIMIT = 1e6

SS_PAIRINGS = ("AB|CD", "AC|BD", "AD|BC")


class StateSpecError(ValueError):
    """A state spec string could not be parsed into a state."""


def _four_qubit(entries):
    amps = np.zeros(16, dtype=complex)
    for bits, value in entries.items():
        amps[int(bits, 2)] = value
    return PureState(amps, (2, 2, 2, 2))


def singlet():
    """Two-qubit singlet (|01> - |10>)/sqrt(2)."""
    return PureState([0, 1, -1, 0], (2, 2))


def ghz(alpha, beta):
    """Generalized GHZ state alpha|0000> + beta|1111> with |alpha| >= |beta|."""
    alpha, beta = complex(alpha), complex(beta)
    if abs(alpha) < abs(beta):
        alpha, beta = beta, alpha
    return _four_qubit({"0000": alpha, "1111": beta})


def ghz_from_beta2(beta2):
    """GHZ state from the smaller squared amplitude |beta|^2 in [0, 1/2]."""
    beta2 = float(beta2)
    if not 0.0 <= beta2 <= 1.0:
        raise ValueError(f"beta2 must lie in [0, 1], got {beta2}")
    return ghz(np.sqrt(1.0 - beta2), np.sqrt(beta2))


def cluster():
    """Four-qubit cluster state (|0000> + |0011> + |1100> - |1111>)/2."""
    return _four_qubit({"0000": 1, "0011": 1, "1100": 1, "1111": -1})


def chi():
    """Four-qubit chi state, written out in the computational basis."""
    return _four_qubit(
        {
            "0000": 1,
            "0011": -1,
            "1100": 1,
            "1111": 1,
            "0101": -1,
            "0110": 1,
            "1001": 1,
            "1010": 1,
        }
    )


def w(a=0.5, b=0.5, c=0.5, d=0.5):
    """Generalized W state a|0001> + b|0010> + c|0100> + d|1000>.

    Parameters are reordered so |a| >= |b| >= |c| >= |d| and normalized;
    ``a`` weighs the excitation at party D, ``d`` the one at party A.
    """
    a, b, c, d = sorted((complex(a), complex(b), complex(c), complex(d)), key=abs, reverse=True)
    return _four_qubit({"0001": a, "0010": b, "0100": c, "1000": d})


def w2():
    """Equal superposition of the six weight-2 basis states of four qubits."""
    return _four_qubit({bits: 1 for bits in ("0011", "0110", "1100", "1001", "0101", "1010")})


def two_singlets(pairing="AB|CD"):
    """Two disjoint singlets; ``pairing`` is one of AB|CD, AC|BD, AD|BC."""
    key = pairing.replace("-", "|").upper()
    if key not in SS_PAIRINGS:
        raise ValueError(f"pairing must be one of {SS_PAIRINGS}, got {pairing!r}")
    s = np.array([[0, 1], [-1, 0]]) / np.sqrt(2.0)
    tensor = np.zeros((2, 2, 2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    if key == "AB|CD":
                        tensor[a, b, c, d] = s[a, b] * s[c, d]
                    elif key == "AC|BD":
                        tensor[a, b, c, d] = s[a, c] * s[b, d]
                    else:
                        tensor[a, b, c, d] = s[a, d] * s[b, c]
    return PureState(tensor.reshape(-1), (2, 2, 2, 2))


def rvb_ferro(mu):
    """RVB-to-ferromagnet family

    (|0101> + |1010> + |0011> + |1100> - mu|1001> - mu|0110>)/sqrt(4 + 2 mu^2)

    for mu >= 0.  mu = 2 is the four-site RVB state; the mu -> infinity limit
    is GHZ-like and available as :func:`rvb_ferro_limit`.
    """
    mu = float(mu)
    if not np.isfinite(mu) or mu < 0:
        raise ValueError(f"mu must be a finite nonnegative real, got {mu}")
    if mu > RVB_MU_LIMIT:
        raise ValueError(
            f"mu = {mu} exceeds {RVB_MU_LIMIT:g}; use rvb_ferro_limit() for the "
            "mu -> infinity endpoint"
        )
    norm = np.sqrt(4.0 + 2.0 * mu * mu)
    return _four_qubit(
        {
            "0101": 1 / norm,
            "1010": 1 / norm,
            "0011": 1 / norm,
            "1100": 1 / norm,
            "1001": -mu / norm,
            "0110": -mu / norm,
        }
    )


def rvb_ferro_limit():
    """mu -> infinity endpoint of the RVB family: (|0110> + |1001>)/sqrt(2)."""
    return _four_qubit({"0110": 1, "1001": 1})


def _parse_params(text, spec):
    params = {}
    if not text:
        return params
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise StateSpecError(f"malformed parameter {item!r} in spec {spec!r}")
        params[key.strip()] = value.strip()
    return params


def _pop_float(params, key, spec, default=None):
    if key not in params:
        if default is None:
            raise StateSpecError(f"spec {spec!r} needs parameter {key}")
        return default
    try:
        return float(params.pop(key))
    except ValueError:
        raise StateSpecError(f"parameter {key} in spec {spec!r} is not a number") from None


def make_state(spec):
    """Build a state from a spec string, e.g. ``ghz:beta2=0.3``, ``w2``, ``rvb:mu=2``.

    Grammar: ``name`` or ``name:key=value,key=value``.  Known names: ghz,
    cluster, chi, w, w2, ss, rvb, singlet.
    """
    if not isinstance(spec, str) or not spec.strip():
        raise StateSpecError(f"empty state spec {spec!r}")
    name, _, argtext = spec.strip().partition(":")
    name = name.lower()
    params = _parse_params(argtext, spec)
    try:
        if name == "ghz":
            state = ghz_from_beta2(_pop_float(params, "beta2", spec, default=0.5))
        elif name == "cluster":
            state = cluster()
        elif name == "chi":
            state = chi()
        elif name == "w":
            state = w(
                _pop_float(params, "a", spec, default=0.5),
                _pop_float(params, "b", spec, default=0.5),
                _pop_float(params, "c", spec, default=0.5),
                _pop_float(params, "d", spec, default=0.5),
            )
        elif name == "w2":
            state = w2()
        elif name == "ss":
            state = two_singlets(params.pop("pairing", "AB|CD"))
        elif name == "rvb":
            state = rvb_ferro(_pop_float(params, "mu", spec, default=2.0))
        elif name == "singlet":
            state = singlet()
        else:
            raise StateSpecError(f"unknown state family {name!r} in spec {spec!r}")
    except StateSpecError:
        raise
    except ValueError as exc:
        raise StateSpecError(f"bad parameters in spec {spec!r}: {exc}") from exc
    if params:
        raise StateSpecError(f"unknown parameters {sorted(params)} in spec {spec!r}")
    return state


def state_from_spec_or_file(spec=None, path=None):
    """Resolve a CLI state argument: named-family spec or raw state file."""
    if (spec is None) == (path is None):
        raise StateSpecError("give exactly one of a state spec or a state file")
    if path is not None:
        return load_raw_state(path)
    return make_state(spec)
