"""Sparse multiparticle pure states and one-site operations.

States of ``n`` particles with ``d`` levels each are stored as sparse
maps from multi-indices (tuples of site labels) to complex amplitudes.
Everything downstream, from collective-invariance checks to subsystem
marginals, is built on the handful of primitives defined here:

* :class:`SystemShape`, :class:`SupportProfile`: particle count, level
  count, and per-label occupation bookkeeping.
* :class:`PureState`: an immutable sparse state with a canonical global
  phase, JSON (de)serialization, and dense-vector bridges.
* :class:`LocalOperator`: a one-site operator applied identically to
  every site, with exact fast paths for basis permutations and
  diagonal phases.
* :func:`apply_local`, :func:`permute_particles`, :func:`apply_collective`,
  :func:`partial_trace`: the operations the rest of the package uses.

Sites are indexed ``0 .. n-1`` and levels are labeled ``0 .. d-1``
throughout.  Multi-indices compare lexicographically, which fixes the
ordering used for serialization and for canonical phase choices.
"""

from __future__ import annotations

import cmath
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "SystemShape",
    "SupportProfile",
    "PureState",
    "LocalOperator",
    "MarginalMatrix",
    "enumerate_support",
    "apply_local",
    "permute_particles",
    "apply_collective",
    "partial_trace",
    "cross_marginal",
    "superpose",
    "state_to_dict",
    "state_from_dict",
    "save_state",
    "load_state",
]

#: Default numerical tolerance for every approximate predicate in the
#: package.  Single knob; operations take an explicit ``tol`` argument
#: that defaults to this value.
DEFAULT_TOL = 1e-9


@dataclass(frozen=True, order=True)
class SystemShape:
    """Number of particles ``n`` and levels per particle ``d``."""

    n: int
    d: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and isinstance(self.d, int)):
            raise TypeError("n and d must be integers")
        if self.n < 1 or self.d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")

    @property
    def divisible(self) -> bool:
        """Whether the level count divides the particle count."""
        return self.n % self.d == 0

    @property
    def copies(self) -> int:
        """Occupation ``n // d`` each label must carry on a balanced support.

        Only defined when ``d`` divides ``n``.
        """
        if not self.divisible:
            raise ValueError(f"d={self.d} does not divide n={self.n}")
        return self.n // self.d

    @property
    def total_dimension(self) -> int:
        return self.d**self.n

    def validate_index(self, index: Sequence[int]) -> tuple[int, ...]:
        """Check one multi-index against this shape and return it as a tuple."""
        idx = tuple(index)
        if len(idx) != self.n:
            raise ValueError(f"multi-index {idx} has length {len(idx)}, expected {self.n}")
        for entry in idx:
            if not isinstance(entry, (int, np.integer)) or isinstance(entry, bool):
                raise TypeError(f"multi-index entries must be integers, got {entry!r}")
            if not 0 <= entry < self.d:
                raise ValueError(f"entry {entry} out of range for d={self.d} in {idx}")
        return tuple(int(e) for e in idx)


@dataclass(frozen=True)
class SupportProfile:
    """Occupation numbers: how often each label appears in a multi-index."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError(f"occupation numbers must be nonnegative, got {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def d(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def of_index(cls, index: Sequence[int], d: int) -> "SupportProfile":
        """Count label occurrences in one multi-index."""
        counts = [0] * d
        for entry in index:
            counts[entry] += 1
        return cls(tuple(counts))

    @classmethod
    def uniform(cls, shape: SystemShape) -> "SupportProfile":
        """The balanced profile where every label appears ``n // d`` times."""
        return cls((shape.copies,) * shape.d)

    def is_uniform(self) -> bool:
        return len(set(self.counts)) <= 1

    def size(self) -> int:
        """Number of multi-indices realizing this profile (multinomial)."""
        out = math.factorial(self.total)
        for c in self.counts:
            out //= math.factorial(c)
        return out


def enumerate_support(shape: SystemShape, profile: SupportProfile) -> list[tuple[int, ...]]:
    """All multi-indices with the given occupation numbers, in lexicographic order.

    Parameters
    ----------
    shape : SystemShape
        System to enumerate over; ``profile`` must have one count per level
        and the counts must sum to ``shape.n``.
    profile : SupportProfile
        Target occupation numbers.

    Returns
    -------
    list of tuple of int
        Sorted lexicographically; length equals the multinomial
        coefficient ``n! / prod_k(counts[k]!)``.
    """
    if profile.d != shape.d:
        raise ValueError(f"profile has {profile.d} labels, shape has d={shape.d}")
    if profile.total != shape.n:
        raise ValueError(f"profile sums to {profile.total}, expected n={shape.n}")
    remaining = list(profile.counts)
    prefix: list[int] = []
    out: list[tuple[int, ...]] = []

    def descend(depth: int) -> None:
        if depth == shape.n:
            out.append(tuple(prefix))
            return
        for label in range(shape.d):
            if remaining[label]:
                remaining[label] -= 1
                prefix.append(label)
                descend(depth + 1)
                prefix.pop()
                remaining[label] += 1

    descend(0)
    return out


def _canonical_phase(amplitudes: dict[tuple[int, ...], complex]) -> dict[tuple[int, ...], complex]:
    """Rotate the global phase so the lexicographically first amplitude is real positive."""
    if not amplitudes:
        return amplitudes
    lead_key = min(amplitudes)
    lead = amplitudes[lead_key]
    if lead.imag == 0.0 and lead.real > 0.0:
        return amplitudes
    phase = lead / abs(lead)
    rotated = {key: value / phase for key, value in amplitudes.items()}
    rotated[lead_key] = complex(abs(lead), 0.0)
    return rotated


class PureState:
    """Immutable sparse pure state.

    Parameters
    ----------
    shape : SystemShape
        Particle and level counts.
    amplitudes : mapping from index tuples to complex
        Only nonzero entries are stored; exact zeros are dropped.
    canonicalize : bool, keyword only
        When true (the default for user-facing construction) the global
        phase is fixed so the amplitude on the lexicographically
        smallest stored multi-index is real and positive.  Operator
        applications construct results with ``canonicalize=False`` so
        that overall signs and phases produced by the operator survive
        and can be measured.
    """

    __slots__ = ("_shape", "_amplitudes")

    def __init__(
        self,
        shape: SystemShape,
        amplitudes: Mapping[Sequence[int], complex],
        *,
        canonicalize: bool = True,
    ) -> None:
        cleaned: dict[tuple[int, ...], complex] = {}
        for index, value in amplitudes.items():
            idx = shape.validate_index(index)
            amp = complex(value)
            if amp != 0.0:
                if idx in cleaned:
                    raise ValueError(f"duplicate multi-index {idx}")
                cleaned[idx] = amp
        if canonicalize:
            cleaned = _canonical_phase(cleaned)
        self._shape = shape
        self._amplitudes = dict(sorted(cleaned.items()))

    @property
    def shape(self) -> SystemShape:
        return self._shape

    @property
    def amplitudes(self) -> Mapping[tuple[int, ...], complex]:
        """Read-only view of the stored (nonzero) amplitudes."""
        return MappingProxyType(self._amplitudes)

    def support(self) -> list[tuple[int, ...]]:
        """Stored multi-indices in lexicographic order."""
        return list(self._amplitudes)

    def amplitude(self, index: Sequence[int]) -> complex:
        return self._amplitudes.get(self._shape.validate_index(index), 0.0 + 0.0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self._amplitudes.values()))

    def is_normalized(self, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> "PureState":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero state")
        return PureState(
            self._shape,
            {k: v / nrm for k, v in self._amplitudes.items()},
            canonicalize=False,
        )

    def canonicalized(self) -> "PureState":
        return PureState(self._shape, self._amplitudes, canonicalize=True)

    def scaled(self, factor: complex) -> "PureState":
        """Multiply every amplitude by ``factor`` (no phase canonicalization)."""
        return PureState(
            self._shape,
            {k: v * factor for k, v in self._amplitudes.items()},
            canonicalize=False,
        )

    def overlap(self, other: "PureState") -> complex:
        """Inner product ``<self|other>`` (conjugate-linear in ``self``)."""
        if other._shape != self._shape:
            raise ValueError(f"shape mismatch: {self._shape} vs {other._shape}")
        small, large = self._amplitudes, other._amplitudes
        if len(large) < len(small):
            return sum(large[k].conjugate() * small[k] for k in large if k in small).conjugate()
        return sum(small[k].conjugate() * large[k] for k in small if k in large)

    def distance(self, other: "PureState") -> float:
        """Euclidean distance between amplitude vectors."""
        if other._shape != self._shape:
            raise ValueError(f"shape mismatch: {self._shape} vs {other._shape}")
        keys = set(self._amplitudes) | set(other._amplitudes)
        gap = 0.0
        for k in keys:
            gap += abs(self._amplitudes.get(k, 0.0) - other._amplitudes.get(k, 0.0)) ** 2
        return math.sqrt(gap)

    def allclose(self, other: "PureState", tol: float = DEFAULT_TOL) -> bool:
        return self.distance(other) <= tol

    def common_profile(self) -> SupportProfile | None:
        """The occupation profile shared by every stored index, or None.

        Returns the profile when all stored multi-indices carry identical
        per-label counts, which is the support pattern collective
        diagonal-phase invariance enforces.
        """
        profile: SupportProfile | None = None
        for index in self._amplitudes:
            current = SupportProfile.of_index(index, self._shape.d)
            if profile is None:
                profile = current
            elif current != profile:
                return None
        return profile

    def has_uniform_support(self) -> bool:
        """Whether every stored index occupies each label exactly ``n // d`` times."""
        if not self._shape.divisible:
            return False
        profile = self.common_profile()
        return profile is not None and profile == SupportProfile.uniform(self._shape)

    def to_dense(self) -> np.ndarray:
        """Amplitude vector of length ``d**n`` in lexicographic index order."""
        shape = self._shape
        vec = np.zeros(shape.total_dimension, dtype=complex)
        for index, value in self._amplitudes.items():
            vec[_encode(index, shape.d)] = value
        return vec

    @classmethod
    def from_dense(
        cls,
        shape: SystemShape,
        vector: np.ndarray,
        *,
        canonicalize: bool = False,
    ) -> "PureState":
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        if vec.size != shape.total_dimension:
            raise ValueError(f"vector has {vec.size} entries, expected {shape.total_dimension}")
        amps: dict[tuple[int, ...], complex] = {}
        for flat in np.flatnonzero(vec):
            amps[_decode(int(flat), shape)] = complex(vec[flat])
        return cls(shape, amps, canonicalize=canonicalize)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PureState):
            return NotImplemented
        return self._shape == other._shape and self._amplitudes == other._amplitudes

    def __hash__(self) -> int:
        return hash((self._shape, tuple(self._amplitudes.items())))

    def __repr__(self) -> str:
        return (
            f"PureState(n={self._shape.n}, d={self._shape.d}, "
            f"terms={len(self._amplitudes)}, norm={self.norm():.6g})"
        )


def _encode(index: Sequence[int], d: int) -> int:
    flat = 0
    for entry in index:
        flat = flat * d + entry
    return flat


def _decode(flat: int, shape: SystemShape) -> tuple[int, ...]:
    out = []
    for _ in range(shape.n):
        flat, rem = divmod(flat, shape.d)
        out.append(rem)
    return tuple(reversed(out))


_KIND_GENERAL = "general-unitary"
_KIND_PERMUTATION = "basis-permutation"
_KIND_DIAGONAL = "diagonal-phase"
_KIND_GENERATOR = "lie-generator"


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """A ``d x d`` one-site operator, tagged with how it can be applied.

    ``basis-permutation`` and ``diagonal-phase`` operators act on sparse
    states by exact index relabeling and phase multiplication; the
    general kinds go through a dense tensor contraction.
    """

    matrix: np.ndarray
    kind: str
    permutation: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def unitary(cls, matrix: np.ndarray, tol: float = DEFAULT_TOL) -> "LocalOperator":
        """Wrap a general unitary; unitarity is checked to ``tol``."""
        mat = np.asarray(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {mat.shape}")
        defect = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
        if defect > tol:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e} > tol {tol:.1e})")
        return cls(mat, _KIND_GENERAL)

    @classmethod
    def basis_permutation(cls, mapping: Sequence[int]) -> "LocalOperator":
        """Label relabeling ``k -> mapping[k]`` as a permutation matrix."""
        perm = tuple(int(p) for p in mapping)
        d = len(perm)
        if sorted(perm) != list(range(d)):
            raise ValueError(f"{perm} is not a permutation of 0..{d - 1}")
        mat = np.zeros((d, d), dtype=complex)
        for src, dst in enumerate(perm):
            mat[dst, src] = 1.0
        return cls(mat, _KIND_PERMUTATION, permutation=perm)

    @classmethod
    def diagonal_phase(cls, angles: Sequence[float]) -> "LocalOperator":
        """Diagonal unitary ``diag(exp(i * angles[k]))``."""
        phases = [cmath.exp(1j * float(a)) for a in angles]
        return cls(np.diag(phases), _KIND_DIAGONAL)

    @classmethod
    def generator(cls, matrix: np.ndarray) -> "LocalOperator":
        """Wrap an arbitrary (not necessarily unitary) one-site matrix."""
        return cls(np.asarray(matrix, dtype=complex), _KIND_GENERATOR)

    def sign(self) -> int:
        """Parity of a basis-permutation operator: +1 even, -1 odd."""
        if self.permutation is None:
            raise ValueError("sign() is only defined for basis-permutation operators")
        return permutation_sign(self.permutation)


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given in one-line notation ``k -> perm[k]``."""
    perm = tuple(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"{perm} is not a permutation of 0..{len(perm) - 1}")
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        node = start
        while not seen[node]:
            seen[node] = True
            node = perm[node]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def apply_local(state: PureState, op: LocalOperator) -> PureState:
    """Apply the same one-site operator to every particle.

    Returns the image of the state under ``op`` acting on each of the
    ``n`` sites simultaneously (the n-fold tensor power).  The result is
    *not* phase-canonicalized: a permutation that negates the state
    really returns the negated amplitudes.

    Basis permutations are applied by exact index relabeling and
    diagonal phases by exact per-index phase multiplication; other kinds
    use a dense contraction of cost ``n * d**(n+1)``.
    """
    if op.d != state.shape.d:
        raise ValueError(f"operator acts on d={op.d}, state has d={state.shape.d}")
    if op.kind == _KIND_PERMUTATION:
        perm = op.permutation
        assert perm is not None
        relabeled = {
            tuple(perm[entry] for entry in index): value
            for index, value in state.amplitudes.items()
        }
        return PureState(state.shape, relabeled, canonicalize=False)
    if op.kind == _KIND_DIAGONAL:
        diag = np.diagonal(op.matrix)
        rotated = {
            index: value * math.prod((complex(diag[entry]) for entry in index), start=1.0 + 0.0j)
            for index, value in state.amplitudes.items()
        }
        return PureState(state.shape, rotated, canonicalize=False)
    n, d = state.shape.n, state.shape.d
    tensor = state.to_dense().reshape((d,) * n)
    for axis in range(n):
        tensor = np.moveaxis(np.tensordot(op.matrix, tensor, axes=([1], [axis])), 0, axis)
    return PureState.from_dense(state.shape, tensor.reshape(-1))


def permute_particles(state: PureState, omega: Sequence[int]) -> PureState:
    """Reorder particles: site ``a`` of the output reads site ``omega[a]`` of the input.

    Exact integer relabeling of the stored multi-indices; amplitudes are
    moved untouched and no phase canonicalization is applied.
    """
    n = state.shape.n
    omega = tuple(int(w) for w in omega)
    if sorted(omega) != list(range(n)):
        raise ValueError(f"{omega} is not a permutation of 0..{n - 1}")
    moved = {
        tuple(index[omega[a]] for a in range(n)): value
        for index, value in state.amplitudes.items()
    }
    return PureState(state.shape, moved, canonicalize=False)


def apply_collective(state: PureState, matrix: np.ndarray) -> PureState:
    """Apply the collective operator ``sum_a g^(a)`` (one-site ``g`` summed over sites).

    This is the infinitesimal counterpart of :func:`apply_local` and is
    what annihilates collectively invariant states when ``g`` is
    traceless.  Sparse: cost is ``O(terms * n * d)``.
    """
    g = np.asarray(matrix, dtype=complex)
    d = state.shape.d
    if g.shape != (d, d):
        raise ValueError(f"generator must be {d}x{d}, got {g.shape}")
    out: dict[tuple[int, ...], complex] = {}
    for index, value in state.amplitudes.items():
        for site, entry in enumerate(index):
            column = g[:, entry]
            for target in np.flatnonzero(column):
                image = index[:site] + (int(target),) + index[site + 1 :]
                out[image] = out.get(image, 0.0 + 0.0j) + complex(column[target]) * value
    return PureState(state.shape, {k: v for k, v in out.items() if v != 0.0}, canonicalize=False)


def superpose(
    coefficients: Sequence[complex],
    states: Sequence[PureState],
    *,
    canonicalize: bool = True,
) -> PureState:
    """Linear combination ``sum_j coefficients[j] * states[j]``."""
    if len(coefficients) != len(states):
        raise ValueError("need one coefficient per state")
    if not states:
        raise ValueError("cannot superpose an empty list of states")
    shape = states[0].shape
    total: dict[tuple[int, ...], complex] = {}
    for coeff, state in zip(coefficients, states):
        if state.shape != shape:
            raise ValueError(f"shape mismatch: {state.shape} vs {shape}")
        c = complex(coeff)
        if c == 0.0:
            continue
        for index, value in state.amplitudes.items():
            total[index] = total.get(index, 0.0 + 0.0j) + c * value
    total = {k: v for k, v in total.items() if v != 0.0}
    return PureState(shape, total, canonicalize=canonicalize)


@dataclass(frozen=True, eq=False)
class MarginalMatrix:
    """Reduced density matrix on a subsystem, as a dense Hermitian block.

    Rows and columns enumerate the subsystem multi-indices in
    lexicographic order, with sites listed by ascending site label.
    """

    sites: tuple[int, ...]
    d: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        dim = self.d ** len(self.sites)
        if matrix.shape != (dim, dim):
            raise ValueError(f"marginal on {self.sites} must be {dim}x{dim}, got {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def entry(self, row: Sequence[int], col: Sequence[int]) -> complex:
        """Matrix element between two subsystem multi-indices."""
        return complex(self.matrix[_encode(row, self.d), _encode(col, self.d)])

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def uniform_deviation(self) -> float:
        """Squared Frobenius distance to the maximally mixed matrix ``I / dim``."""
        delta = self.matrix - np.eye(self.dim) / self.dim
        return float(np.sum(np.abs(delta) ** 2))

    def is_maximally_mixed(self, tol: float = DEFAULT_TOL) -> bool:
        return self.uniform_deviation() <= tol


def _site_split(index: tuple[int, ...], keep: Sequence[int], drop: Sequence[int]):
    return tuple(index[s] for s in keep), tuple(index[s] for s in drop)


def cross_marginal(left: PureState, right: PureState, sites: Sequence[int]) -> np.ndarray:
    """Subsystem block ``Tr_B |left><right|`` as a dense array.

    Entry ``(i_A, j_A)`` is ``sum_{i_B} left[i_A, i_B] * conj(right[j_A, i_B])``
    where ``A`` is ``sites`` (ascending) and ``B`` the complement.
    ``partial_trace`` is the ``left is right`` case; the optimizer uses
    the general form for basis cross terms.
    """
    if left.shape != right.shape:
        raise ValueError(f"shape mismatch: {left.shape} vs {right.shape}")
    n, d = left.shape.n, left.shape.d
    keep = sorted(int(s) for s in sites)
    if not keep:
        raise ValueError("subsystem must contain at least one site")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate sites in subsystem {tuple(sites)}")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"subsystem {tuple(sites)} out of range for n={n}")
    drop = [s for s in range(n) if s not in set(keep)]

    def grouped(state: PureState) -> dict[tuple[int, ...], list[tuple[int, complex]]]:
        groups: dict[tuple[int, ...], list[tuple[int, complex]]] = {}
        for index, value in state.amplitudes.items():
            part_a, part_b = _site_split(index, keep, drop)
            groups.setdefault(part_b, []).append((_encode(part_a, d), value))
        return groups

    dim = d ** len(keep)
    block = np.zeros((dim, dim), dtype=complex)
    left_groups = grouped(left)
    right_groups = grouped(right) if right is not left else left_groups
    for part_b, left_entries in left_groups.items():
        right_entries = right_groups.get(part_b)
        if not right_entries:
            continue
        for row, lval in left_entries:
            for col, rval in right_entries:
                block[row, col] += lval * rval.conjugate()
    return block


def partial_trace(
    state: PureState, sites: Iterable[int], tol: float = DEFAULT_TOL
) -> MarginalMatrix:
    """Reduced density matrix of a normalized state on ``sites``.

    Parameters
    ----------
    state : PureState
        Must be normalized to within ``tol``.
    sites : iterable of int
        Nonempty subset of ``0 .. n-1``; order is ignored, rows and
        columns follow ascending site label.
    tol : float
        Normalization tolerance.

    Returns
    -------
    MarginalMatrix
        Hermitian, trace one (up to roundoff), of dimension ``d**|sites|``.
    """
    if not state.is_normalized(tol):
        raise ValueError(f"state norm is {state.norm():.12g}, expected 1 within {tol:.1e}")
    keep = tuple(sorted(int(s) for s in sites))
    block = cross_marginal(state, state, keep)
    return MarginalMatrix(sites=keep, d=state.shape.d, matrix=block)


# --- JSON interface -------------------------------------------------------
#
# {"n": ..., "d": ..., "amplitudes": [{"index": [...], "re": ..., "im": ...}, ...]}
# with only nonzero amplitudes, sorted lexicographically by index.


def state_to_dict(state: PureState) -> dict:
    """Plain-dict form of a state (see module notes for the schema)."""
    return {
        "n": state.shape.n,
        "d": state.shape.d,
        "amplitudes": [
            {"index": list(index), "re": value.real, "im": value.imag}
            for index, value in state.amplitudes.items()
        ],
    }


def state_from_dict(obj: Mapping, *, canonicalize: bool = False) -> PureState:
    """Parse the JSON-dict form back into a PureState.

    Stored amplitudes are taken verbatim by default so that files
    round-trip exactly.
    """
    try:
        shape = SystemShape(int(obj["n"]), int(obj["d"]))
        entries = obj["amplitudes"]
        amps: dict[tuple[int, ...], complex] = {}
        for entry in entries:
            index = tuple(int(i) for i in entry["index"])
            amps[index] = complex(float(entry["re"]), float(entry["im"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state document: {exc}") from exc
    if len(amps) != len(entries):
        raise ValueError("malformed state document: duplicate multi-index")
    return PureState(shape, amps, canonicalize=canonicalize)


def save_state(state: PureState, path: str) -> None:
    from . import _json

    _json.dump(state_to_dict(state), path)


def load_state(path: str) -> PureState:
    with open(path, "r", encoding="utf-8") as handle:
        document = json.load(handle)
    if not isinstance(document, dict):
        raise ValueError("malformed state document: expected a JSON object")
    return state_from_dict(document)
