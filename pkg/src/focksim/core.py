"""Mode bookkeeping, Fock occupations, and sparse complex state vectors.

A mode is labeled by (spatial index, polarization, temporal index) and a
registry assigns every label a dense index under a fixed canonical order.
Basis states are occupation tuples (one photon count per registered mode)
and a pure state is a sparse map from occupation tuples to complex
amplitudes.  States may be sub-normalized: the squared norm of a heralded
state is the probability of the heralding event.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import (
    DimensionMismatchError,
    DomainError,
    DuplicateModeError,
    MissingModeError,
    NotNormalizedError,
    OverlappingModesError,
    ZeroStateError,
)

H = "H"
V = "V"
POLARIZATIONS = (H, V)

#: Amplitudes below this magnitude are dropped after every linear operation,
#: which keeps exact interference zeros exactly absent from storage.
PRUNE_THRESHOLD = 1e-12

#: Largest registry the simulator supports.
MODE_CAP = 16


class ModeLabel(NamedTuple):
    """One optical mode: spatial path, polarization, and temporal bin."""

    spatial: int
    pol: str
    temporal: int = 0


def mode(spatial: int, pol: str, temporal: int = 0) -> ModeLabel:
    """Validated :class:`ModeLabel` constructor."""
    if pol not in POLARIZATIONS:
        raise DomainError(f"polarization must be 'H' or 'V', got {pol!r}")
    if temporal < 0:
        raise DomainError(f"temporal index must be >= 0, got {temporal}")
    return ModeLabel(int(spatial), pol, int(temporal))


class ModeRegistry:
    """Immutable set of mode labels with dense canonical indexing.

    Labels are ordered by (spatial, polarization with H before V, temporal)
    so that indexing, enumeration and serialized output are deterministic.
    """

    def __init__(self, labels: Iterable[ModeLabel]):
        validated = [mode(*label) for label in labels]
        ordered = tuple(sorted(validated))
        if len(set(ordered)) != len(ordered):
            raise DuplicateModeError("registry labels must be distinct")
        if len(ordered) > MODE_CAP:
            raise DomainError(f"registry size {len(ordered)} exceeds cap {MODE_CAP}")
        self._labels = ordered
        self._index = {label: i for i, label in enumerate(ordered)}

    @property
    def labels(self) -> tuple[ModeLabel, ...]:
        return self._labels

    @property
    def size(self) -> int:
        return len(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label: ModeLabel) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModeRegistry) and self._labels == other._labels

    def __hash__(self) -> int:
        return hash(self._labels)

    def __repr__(self) -> str:
        return f"ModeRegistry({list(self._labels)!r})"

    def index(self, label: ModeLabel) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise MissingModeError(f"mode {label} is not registered") from None

    def vacuum(self) -> tuple[int, ...]:
        return (0,) * self.size

    def occupation(self, counts: Mapping[ModeLabel, int]) -> tuple[int, ...]:
        """Occupation tuple with the given per-label counts, zero elsewhere."""
        occ = [0] * self.size
        for label, count in counts.items():
            if count < 0 or count != int(count):
                raise DomainError(f"photon count must be a non-negative integer, got {count}")
            occ[self.index(label)] = int(count)
        return tuple(occ)


class PureState:
    """Sparse pure state: occupation tuple -> complex amplitude.

    Amplitudes smaller than :data:`PRUNE_THRESHOLD` in magnitude are pruned
    on construction.  The squared norm is not forced to 1; heralded states
    legitimately carry norms below 1.
    """

    def __init__(self, registry: ModeRegistry, amplitudes: Mapping[tuple[int, ...], complex]):
        self._registry = registry
        size = registry.size
        kept: dict[tuple[int, ...], complex] = {}
        for occ, amp in amplitudes.items():
            if len(occ) != size:
                raise DimensionMismatchError(
                    f"occupation length {len(occ)} does not match registry size {size}"
                )
            if any(c < 0 or c != int(c) for c in occ):
                raise DomainError(f"occupation counts must be non-negative integers: {occ}")
            value = complex(amp)
            if abs(value) >= PRUNE_THRESHOLD:
                kept[tuple(int(c) for c in occ)] = value
        self._amplitudes = kept

    @property
    def registry(self) -> ModeRegistry:
        return self._registry

    def items(self) -> Iterator[tuple[tuple[int, ...], complex]]:
        return iter(self._amplitudes.items())

    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self._amplitudes))

    def amplitude(self, occ: tuple[int, ...] | Mapping[ModeLabel, int]) -> complex:
        if isinstance(occ, Mapping):
            occ = self._registry.occupation(occ)
        return self._amplitudes.get(tuple(occ), 0j)

    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self._amplitudes.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def is_zero(self) -> bool:
        return not self._amplitudes

    def modes_used(self) -> frozenset[ModeLabel]:
        """Labels that carry at least one photon in some basis component."""
        labels = self._registry.labels
        used = set()
        for occ in self._amplitudes:
            for i, count in enumerate(occ):
                if count:
                    used.add(labels[i])
        return frozenset(used)

    def scaled(self, factor: complex) -> "PureState":
        return PureState(self._registry, {occ: factor * a for occ, a in self.items()})

    def __repr__(self) -> str:
        return f"PureState({dict(sorted(self._amplitudes.items()))!r})"


def basis_state(registry: ModeRegistry, counts: Mapping[ModeLabel, int]) -> PureState:
    """Single Fock basis state with unit amplitude."""
    return PureState(registry, {registry.occupation(counts): 1.0 + 0j})


def vacuum_state(registry: ModeRegistry) -> PureState:
    return PureState(registry, {registry.vacuum(): 1.0 + 0j})


def normalize(state: PureState) -> tuple[PureState, float]:
    """Scale to unit norm; returns (normalized state, original norm)."""
    norm = state.norm()
    if norm == 0.0:
        raise ZeroStateError("cannot normalize a state with empty support")
    return state.scaled(1.0 / norm), norm


def canonical_phase(state: PureState) -> PureState:
    """Fix the global phase so the first canonical basis amplitude is real positive."""
    if state.is_zero():
        return state
    first = min(occ for occ, _ in state.items())
    a0 = state.amplitude(first)
    return state.scaled(a0.conjugate() / abs(a0))


def tensor_product(a: PureState, b: PureState) -> PureState:
    """Combine states occupying disjoint mode subsets of one registry."""
    if a.registry != b.registry:
        raise DimensionMismatchError("tensor factors must share a registry")
    overlap = a.modes_used() & b.modes_used()
    if overlap:
        raise OverlappingModesError(f"tensor factors both occupy {sorted(overlap)}")
    combined: dict[tuple[int, ...], complex] = {}
    for occ_a, amp_a in a.items():
        for occ_b, amp_b in b.items():
            occ = tuple(x + y for x, y in zip(occ_a, occ_b))
            combined[occ] = combined.get(occ, 0j) + amp_a * amp_b
    return PureState(a.registry, combined)


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 for two normalized states on the same registry."""
    if a.registry != b.registry:
        raise DimensionMismatchError("fidelity requires a common registry")
    for name, state in (("first", a), ("second", b)):
        if abs(state.norm_squared() - 1.0) > 1e-6:
            raise NotNormalizedError(f"{name} state has norm^2 {state.norm_squared():.9f}")
    inner = sum(a.amplitude(occ).conjugate() * amp for occ, amp in b.items())
    return abs(inner) ** 2


def relabel(state: PureState, mapping: Mapping[ModeLabel, ModeLabel]) -> PureState:
    """Rename modes; labels absent from the mapping are kept unchanged."""
    old_labels = state.registry.labels
    new_labels = [mapping.get(label, label) for label in old_labels]
    target = ModeRegistry(new_labels)
    moved: dict[tuple[int, ...], complex] = {}
    for occ, amp in state.items():
        new_occ = [0] * target.size
        for i, count in enumerate(occ):
            new_occ[target.index(new_labels[i])] = count
        moved[tuple(new_occ)] = amp
    return PureState(target, moved)


def expand_onto(state: PureState, registry: ModeRegistry) -> PureState:
    """Re-express a state on a larger registry, vacuum on the new modes."""
    positions = [registry.index(label) for label in state.registry.labels]
    expanded: dict[tuple[int, ...], complex] = {}
    for occ, amp in state.items():
        new_occ = [0] * registry.size
        for pos, count in zip(positions, occ):
            new_occ[pos] = count
        expanded[tuple(new_occ)] = amp
    return PureState(registry, expanded)


class Ensemble:
    """Incoherent mixture of normalized pure states with weights summing to <= 1."""

    def __init__(self, components: Iterable[tuple[float, PureState]]):
        items = []
        total = 0.0
        for weight, state in components:
            if weight <= 0.0:
                raise DomainError(f"ensemble weights must be positive, got {weight}")
            if abs(state.norm_squared() - 1.0) > 1e-6:
                raise NotNormalizedError("ensemble components must be normalized")
            items.append((float(weight), state))
            total += weight
        if total > 1.0 + 1e-9:
            raise DomainError(f"ensemble weights sum to {total}, above 1")
        self._components = tuple(items)

    @property
    def components(self) -> tuple[tuple[float, PureState], ...]:
        return self._components

    def total_weight(self) -> float:
        return math.fsum(w for w, _ in self._components)

    def __iter__(self):
        return iter(self._components)


def ket_string(state: PureState, precision: int = 6) -> str:
    """Human-readable rendering of a sparse state, canonical basis order."""
    if state.is_zero():
        return "0"
    parts = []
    for occ in state.support():
        amp = state.amplitude(occ)
        if abs(amp.imag) < 1e-12:
            text = f"{amp.real:+.{precision}f}"
        else:
            text = f"+({amp.real:.{precision}f}{amp.imag:+.{precision}f}j)"
        parts.append(f"{text}|{','.join(str(c) for c in occ)}>")
    return " ".join(parts)
