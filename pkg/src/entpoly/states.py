"""State constructors: qudit pure-state families, Haar sampling, networks.

A pure state is a :class:`MultiQuditState`; an entanglement network built
from two-party and multi-party resources is composed into a
:class:`NetworkState` density matrix whose sites are grouped per party.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .tensor import as_dims, is_hermitian, kron, partial_trace, reduced_of_pure, total_dim

NORM_LOAD_TOL = 1e-6  # acceptance band for user-supplied amplitude vectors


@dataclass(frozen=True, eq=False)
class MultiQuditState:
    """Normalized pure state of qudits with per-site dimensions ``dims``."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = as_dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != total_dim(dims):
            raise InvalidInputError(
                f"expected {total_dim(dims)} amplitudes for dims {list(dims)}, "
                f"got {amps.size}")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-9:
            raise InvalidInputError("amplitudes are not normalized")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_sites(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def reduced(self, keep) -> np.ndarray:
        """Reduced density matrix on the ``keep`` sites."""
        return reduced_of_pure(self.amplitudes, self.dims, keep)


def from_amplitudes(dims, amplitudes) -> MultiQuditState:
    """Build a state, renormalizing when the norm is within 1e-6 of 1.

    A zero vector or a norm outside the tolerance band is rejected: it is
    more likely a malformed input than an unnormalized state.
    """
    dims = as_dims(dims)
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.size != total_dim(dims):
        raise InvalidInputError(
            f"expected {total_dim(dims)} amplitudes for dims {list(dims)}, got {amps.size}")
    nrm = float(np.linalg.norm(amps))
    if nrm == 0.0:
        raise InvalidInputError("amplitude vector is zero")
    if abs(nrm - 1.0) > NORM_LOAD_TOL:
        raise InvalidInputError(f"norm {nrm!r} is outside the accepted band around 1")
    return MultiQuditState(dims, amps / nrm)


def ghz(d: int, m: int) -> MultiQuditState:
    """m-party d-dimensional cat state: uniform over the m-fold repeated kets."""
    if d < 2 or m < 2:
        raise InvalidInputError("ghz requires d >= 2 and m >= 2")
    amps = np.zeros(d**m, dtype=np.complex128)
    step = (d**m - 1) // (d - 1)  # index of |j...j> is j * (1 + d + ... + d^(m-1))
    amps[np.arange(d) * step] = 1.0 / math.sqrt(d)
    return MultiQuditState((d,) * m, amps)


def epr() -> MultiQuditState:
    return ghz(2, 2)


def generalized_ghz3(theta: float, phi: float) -> MultiQuditState:
    """Three-qutrit family spanned by |000>, |111>, |222> with angle weights.

    Marginal eigenvalues are sin^2(theta)cos^2(phi), sin^2(theta)sin^2(phi)
    and cos^2(theta) on every site.
    """
    amps = np.zeros(27, dtype=np.complex128)
    amps[0] = math.sin(theta) * math.cos(phi)
    amps[13] = math.sin(theta) * math.sin(phi)
    amps[26] = math.cos(theta)
    return from_amplitudes((3, 3, 3), amps)


def w_qutrit() -> MultiQuditState:
    """Symmetric three-qutrit state with marginal spectrum (2/3, 1/6, 1/6).

    One dominant branch plus two light ones: (2|000> + |111> + |222>)/sqrt(6).
    Every single-site marginal is exactly diag(2/3, 1/6, 1/6), so all three
    one-to-group cuts carry the same entanglement.
    """
    amps = np.zeros(27, dtype=np.complex128)
    amps[0] = 2.0 / math.sqrt(6)
    amps[13] = 1.0 / math.sqrt(6)
    amps[26] = 1.0 / math.sqrt(6)
    return MultiQuditState((3, 3, 3), amps)


def star4() -> MultiQuditState:
    """Hub-and-spokes state of three EPR pairs on dims (8, 2, 2, 2).

    Site 0 is the 8-dimensional hub holding one half of each pair; its basis
    index encodes the three partner bits (most significant bit pairs with
    site 1).
    """
    amps = np.zeros(64, dtype=np.complex128)
    for b1 in (0, 1):
        for b2 in (0, 1):
            for b3 in (0, 1):
                hub = (b1 << 2) | (b2 << 1) | b3
                amps[((hub * 2 + b1) * 2 + b2) * 2 + b3] = 1.0 / math.sqrt(8)
    return MultiQuditState((8, 2, 2, 2), amps)


def haar_random(dims, seed: int) -> MultiQuditState:
    """Haar-uniform pure state: normalized i.i.d. complex Gaussian amplitudes.

    Deterministic for a given ``seed``; streams for different seeds are
    independent for fuzzing purposes.
    """
    dims = as_dims(dims)
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    z = rng.standard_normal(total_dim(dims)) + 1j * rng.standard_normal(total_dim(dims))
    nrm = np.linalg.norm(z)
    if nrm == 0.0:  # unreachable in practice, guards the division
        raise InvalidInputError("degenerate zero sample")
    return MultiQuditState(dims, z / nrm)


# -- network composition ------------------------------------------------------

RESOURCE_KINDS = ("epr", "ghz", "ghz_diag")


@dataclass(frozen=True)
class Resource:
    """One shared resource: an EPR pair, a GHZ state, or a GHZ-diagonal pair.

    ``parties`` lists the owner of each particle in site order; ``d`` is the
    local dimension (fixed at 2 for EPR).  The GHZ-diagonal pair is the mixed
    two-site state (1/d) sum_j |jj><jj|.
    """

    kind: str
    parties: tuple[int, ...]
    d: int = 2

    def __post_init__(self):
        object.__setattr__(self, "parties", tuple(int(p) for p in self.parties))
        if self.kind not in RESOURCE_KINDS:
            raise InvalidInputError(f"unknown resource kind {self.kind!r}")
        if self.d < 2:
            raise InvalidInputError("resource dimension must be >= 2")
        want = 2 if self.kind in ("epr", "ghz_diag") else len(self.parties)
        if self.kind == "ghz" and len(self.parties) < 2:
            raise InvalidInputError("a ghz resource needs at least 2 parties")
        if len(self.parties) != want or len(set(self.parties)) != len(self.parties):
            raise InvalidInputError(
                f"{self.kind} resource needs {want} distinct parties, got {list(self.parties)}")
        if self.kind == "epr" and self.d != 2:
            raise InvalidInputError("epr resources are two-dimensional")

    @staticmethod
    def epr(i: int, j: int) -> "Resource":
        return Resource("epr", (i, j))

    @staticmethod
    def ghz(d: int, parties) -> "Resource":
        return Resource("ghz", tuple(parties), d)

    @staticmethod
    def ghz_diag(d: int, i: int, j: int) -> "Resource":
        return Resource("ghz_diag", (i, j), d)

    def site_dims(self) -> tuple[int, ...]:
        return (self.d,) * len(self.parties)

    def density(self) -> np.ndarray:
        if self.kind == "ghz_diag":
            rho = np.zeros((self.d**2, self.d**2), dtype=np.complex128)
            for j in range(self.d):
                rho[j * self.d + j, j * self.d + j] = 1.0 / self.d
            return rho
        return ghz(self.d, len(self.parties)).density()


@dataclass(frozen=True)
class NetworkSpec:
    """``parties`` numbered 0..n-1 sharing the listed resources."""

    parties: int
    resources: tuple[Resource, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "resources", tuple(self.resources))
        if self.parties < 2:
            raise InvalidInputError("a network needs at least 2 parties")
        if not self.resources:
            raise InvalidInputError("a network needs at least one resource")
        for res in self.resources:
            if any(p < 0 or p >= self.parties for p in res.parties):
                raise InvalidInputError(
                    f"resource references a party outside 0..{self.parties - 1}: "
                    f"{list(res.parties)}")


@dataclass(frozen=True, eq=False)
class NetworkState:
    """Composed network density matrix with one composite site per party."""

    density: np.ndarray
    party_dims: tuple[int, ...]

    def __post_init__(self):
        dims = as_dims(self.party_dims)
        rho = np.asarray(self.density, dtype=np.complex128)
        if rho.shape != (total_dim(dims),) * 2:
            raise InvalidInputError("density shape does not match party dimensions")
        if not is_hermitian(rho):
            raise InvalidInputError("network density is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-9:
            raise InvalidInputError("network density does not have unit trace")
        rho = rho.copy()
        rho.flags.writeable = False
        object.__setattr__(self, "density", rho)
        object.__setattr__(self, "party_dims", dims)

    @property
    def num_parties(self) -> int:
        return len(self.party_dims)

    def reduced(self, keep_parties) -> np.ndarray:
        return partial_trace(self.density, self.party_dims, keep_parties)


def compose_network(spec: NetworkSpec) -> NetworkState:
    """Tensor all resources together and group sites by owning party.

    Particles are physically reordered so each party's subsystems are
    contiguous (party 0 first); ``party_dims`` records the resulting
    composite dimension per party.  Every party must hold at least one
    particle.
    """
    owners: list[int] = []
    dims: list[int] = []
    rho = np.ones((1, 1), dtype=np.complex128)
    for res in spec.resources:
        owners.extend(res.parties)
        dims.extend(res.site_dims())
        rho = kron(rho, res.density())
    for p in range(spec.parties):
        if p not in owners:
            raise InvalidInputError(f"party {p} holds no particle")
    n = len(dims)
    # stable sort: per-party site order follows resource declaration order
    perm = sorted(range(n), key=lambda k: owners[k])
    d = rho.shape[0]
    rho = rho.reshape(tuple(dims) * 2)
    rho = rho.transpose(tuple(perm) + tuple(n + k for k in perm)).reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    party_dims = []
    for p in range(spec.parties):
        party_dims.append(math.prod(dims[k] for k in range(n) if owners[k] == p))
    return NetworkState(rho, tuple(party_dims))


# -- state file format --------------------------------------------------------


def state_to_dict(psi: MultiQuditState) -> dict:
    return {
        "dims": [int(d) for d in psi.dims],
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
    }


def state_from_dict(doc: dict) -> MultiQuditState:
    try:
        dims = doc["dims"]
        pairs = doc["amplitudes"]
        amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed state document: {exc}") from exc
    return from_amplitudes(dims, amps)


def save_state(psi: MultiQuditState, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(psi), fh)
        fh.write("\n")


def load_state(path) -> MultiQuditState:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"malformed state file {path}: {exc}") from exc
    return state_from_dict(doc)
