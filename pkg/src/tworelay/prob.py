"""Probability tensors for the two-relay network with relay-to-sender feedback.

Conventions used throughout the package:

* Variables are identified by fixed string ids drawn from the canonical order
  ``X0, X1, X2, V1, V2, Y0, Y1, Y2, Yh1, Yh2``.  ``X0`` is the sender input,
  ``X1``/``X2`` the relay inputs, ``Y0`` the receiver output, ``Y1``/``Y2``
  the relay observations, ``Yh1``/``Yh2`` the relay compression variables and
  ``V1``/``V2`` the relay decode-and-forward auxiliaries.
* Every joint tensor stores its axes sorted by that canonical order, so two
  tensors over the same variable set always agree axis-by-axis.
* Conditional tensors store the conditioning axes first (canonically sorted),
  then the target axes (canonically sorted); each conditional slice is a pmf.
* Alphabets are small by design: the library targets exhaustive desk-scale
  computation, not large-alphabet numerics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

CANONICAL_ORDER = ("X0", "X1", "X2", "V1", "V2", "Y0", "Y1", "Y2", "Yh1", "Yh2")
_CANON_INDEX = {vid: k for k, vid in enumerate(CANONICAL_ORDER)}

# einsum letter per canonical variable, fixed once
_EINSUM_LETTER = dict(zip(CANONICAL_ORDER, "abcdefghij"))

MAX_ALPHABET_SIZE = 8
MAX_JOINT_ENTRIES = 10**8
NEGATIVITY_CLAMP = 1e-12
NORMALIZATION_TOL = 1e-12


class ValidationError(ValueError):
    """Raised when a tensor, alphabet, or law fails its construction contract."""


class ResourceLimitError(RuntimeError):
    """Raised when a requested computation exceeds the desk-scale caps."""


class InvariantError(AssertionError):
    """Raised when an internal consistency check fails; indicates a bug."""


def canonical_index(var_id: str) -> int:
    try:
        return _CANON_INDEX[var_id]
    except KeyError:
        raise ValidationError(f"unknown variable id {var_id!r}") from None


def canonical_sorted(ids: Iterable[str]) -> tuple[str, ...]:
    """Sort variable ids into canonical order, rejecting unknown ids."""
    ids = tuple(ids)
    for vid in ids:
        canonical_index(vid)
    if len(set(ids)) != len(ids):
        raise ValidationError(f"duplicate variable ids in {ids}")
    return tuple(sorted(ids, key=canonical_index))


@dataclass(frozen=True)
class Alphabet:
    """A finite alphabet for one network variable."""

    id: str
    size: int

    def __post_init__(self):
        canonical_index(self.id)
        if not (1 <= self.size <= MAX_ALPHABET_SIZE):
            raise ValidationError(
                f"alphabet {self.id}: size {self.size} outside [1, {MAX_ALPHABET_SIZE}]"
            )


def _clamp_tiny_negatives(mass: np.ndarray) -> np.ndarray:
    """Zero out negativity within the clamp tolerance; larger negativity errors."""
    worst = float(mass.min()) if mass.size else 0.0
    if worst < -NEGATIVITY_CLAMP:
        raise ValidationError(f"tensor entry {worst} below -{NEGATIVITY_CLAMP}")
    if worst < 0.0:
        mass = np.where(mass < 0.0, 0.0, mass)
    return mass


def _check_axes(axes: Sequence[Alphabet], where: str) -> tuple[Alphabet, ...]:
    axes = tuple(axes)
    ids = [a.id for a in axes]
    if ids != list(canonical_sorted(ids)):
        raise ValidationError(f"{where}: axes {ids} not in canonical order")
    return axes


@dataclass(frozen=True, eq=False)
class JointPmf:
    """A joint pmf over a canonically ordered tuple of variables."""

    axes: tuple[Alphabet, ...]
    mass: np.ndarray

    def __post_init__(self):
        axes = _check_axes(self.axes, "JointPmf")
        object.__setattr__(self, "axes", axes)
        mass = np.asarray(self.mass, dtype=float)
        if mass.shape != tuple(a.size for a in axes):
            raise ValidationError(
                f"JointPmf: mass shape {mass.shape} does not match axes "
                f"{[(a.id, a.size) for a in axes]}"
            )
        if mass.size > MAX_JOINT_ENTRIES:
            raise ResourceLimitError(
                f"joint tensor has {mass.size} entries, cap is {MAX_JOINT_ENTRIES}"
            )
        mass = _clamp_tiny_negatives(mass)
        total = float(mass.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"JointPmf: total mass {total} not within tolerance of 1")
        mass = mass.copy()
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def raw(cls, axes: Sequence[Alphabet], mass: np.ndarray) -> "JointPmf":
        """Bypass construction checks.  For diagnostics and tests only."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "axes", tuple(axes))
        object.__setattr__(obj, "mass", np.asarray(mass, dtype=float))
        return obj

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.axes)

    def alphabet(self, var_id: str) -> Alphabet:
        for a in self.axes:
            if a.id == var_id:
                return a
        raise ValidationError(f"variable {var_id!r} not among axes {self.ids}")

    def marginal(self, keep: Iterable[str]) -> "JointPmf":
        return marginalize(self, keep)


@dataclass(frozen=True, eq=False)
class CondPmf:
    """A conditional pmf: a pmf over ``target`` for every setting of ``given``.

    The tensor shape is given-axes then target-axes, both canonically sorted.
    """

    given: tuple[Alphabet, ...]
    target: tuple[Alphabet, ...]
    mass: np.ndarray

    def __post_init__(self):
        given = _check_axes(self.given, "CondPmf given")
        target = _check_axes(self.target, "CondPmf target")
        if not target:
            raise ValidationError("CondPmf: empty target")
        overlap = set(a.id for a in given) & set(a.id for a in target)
        if overlap:
            raise ValidationError(f"CondPmf: axes {sorted(overlap)} both given and target")
        object.__setattr__(self, "given", given)
        object.__setattr__(self, "target", target)
        mass = np.asarray(self.mass, dtype=float)
        shape = tuple(a.size for a in given) + tuple(a.size for a in target)
        if mass.shape != shape:
            raise ValidationError(f"CondPmf: mass shape {mass.shape}, expected {shape}")
        mass = _clamp_tiny_negatives(mass)
        n_given = int(np.prod([a.size for a in given], dtype=np.int64)) if given else 1
        totals = mass.reshape(n_given, -1).sum(axis=1)
        worst = float(np.abs(totals - 1.0).max())
        if worst > NORMALIZATION_TOL:
            raise ValidationError(f"CondPmf: slice mass off by {worst}")
        mass = mass.copy()
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def raw(cls, given: Sequence[Alphabet], target: Sequence[Alphabet], mass: np.ndarray) -> "CondPmf":
        """Bypass construction checks.  For diagnostics and tests only."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "given", tuple(given))
        object.__setattr__(obj, "target", tuple(target))
        object.__setattr__(obj, "mass", np.asarray(mass, dtype=float))
        return obj

    @property
    def given_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.given)

    @property
    def target_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.target)


@dataclass(frozen=True)
class PmfDiagnostics:
    """Pure report from :func:`validate`; never raises."""

    max_negativity: float
    max_normalization_deviation: float
    passed: bool


def validate(pmf: JointPmf | CondPmf) -> PmfDiagnostics:
    """Report negativity and normalization health of a (possibly raw) tensor."""
    mass = np.asarray(pmf.mass, dtype=float)
    max_neg = float(max(0.0, -mass.min())) if mass.size else 0.0
    effective = np.where((mass < 0.0) & (mass >= -NEGATIVITY_CLAMP), 0.0, mass)
    if isinstance(pmf, CondPmf):
        n_given = int(np.prod([a.size for a in pmf.given], dtype=np.int64)) if pmf.given else 1
        totals = effective.reshape(n_given, -1).sum(axis=1)
    else:
        totals = np.array([effective.sum()])
    max_dev = float(np.abs(totals - 1.0).max())
    passed = max_neg <= NEGATIVITY_CLAMP and max_dev <= NORMALIZATION_TOL
    return PmfDiagnostics(max_neg, max_dev, passed)


def marginalize(joint: JointPmf, keep: Iterable[str]) -> JointPmf:
    """Sum out all axes not named in ``keep``; result axes stay canonical."""
    keep = canonical_sorted(keep)
    have = joint.ids
    missing = [vid for vid in keep if vid not in have]
    if missing:
        raise ValidationError(f"marginalize: {missing} not among axes {have}")
    drop = tuple(k for k, a in enumerate(joint.axes) if a.id not in keep)
    mass = joint.mass.sum(axis=drop) if drop else joint.mass
    axes = tuple(a for a in joint.axes if a.id in keep)
    return JointPmf(axes, mass)


def conditional(joint: JointPmf, target: Iterable[str], given: Iterable[str]) -> CondPmf:
    """Exact conditional of ``joint``: p(target | given).

    Conditioning cells with zero probability get a uniform target slice, which
    never affects any downstream expectation.
    """
    target = canonical_sorted(target)
    given = canonical_sorted(given)
    sub = marginalize(joint, target + given)
    # reorder from canonical interleave to (given..., target...)
    perm = [sub.ids.index(vid) for vid in given + target]
    mass = np.transpose(sub.mass, perm)
    g_axes = tuple(sub.alphabet(vid) for vid in given)
    t_axes = tuple(sub.alphabet(vid) for vid in target)
    n_given = int(np.prod([a.size for a in g_axes], dtype=np.int64)) if g_axes else 1
    flat = mass.reshape(n_given, -1)
    totals = flat.sum(axis=1, keepdims=True)
    k = flat.shape[1]
    with np.errstate(invalid="ignore", divide="ignore"):
        rows = np.where(totals > 0.0, flat / np.where(totals > 0.0, totals, 1.0), 1.0 / k)
    return CondPmf(g_axes, t_axes, rows.reshape(mass.shape))


# ---------------------------------------------------------------------------
# network channel and the two law families
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NetworkChannel:
    """Memoryless network channel p(y0, y1, y2 | x0, x1, x2)."""

    transition: CondPmf

    def __post_init__(self):
        if self.transition.given_ids != ("X0", "X1", "X2"):
            raise ValidationError(
                f"channel conditioning axes {self.transition.given_ids}, expected (X0, X1, X2)"
            )
        if self.transition.target_ids != ("Y0", "Y1", "Y2"):
            raise ValidationError(
                f"channel target axes {self.transition.target_ids}, expected (Y0, Y1, Y2)"
            )

    def alphabet(self, var_id: str) -> Alphabet:
        for a in self.transition.given + self.transition.target:
            if a.id == var_id:
                return a
        raise ValidationError(f"channel has no variable {var_id!r}")

    @property
    def input_sizes(self) -> tuple[int, int, int]:
        return tuple(a.size for a in self.transition.given)

    @property
    def output_sizes(self) -> tuple[int, int, int]:
        return tuple(a.size for a in self.transition.target)


@dataclass(frozen=True, eq=False)
class T1Law:
    """Input law of the compress-and-forward scheme (theorem 1 family).

    Factorization: p(x1) p(x2) p(x0|x1,x2) p(yh1|x1,y1) p(yh2|x2,y2).
    The relay inputs are independent of each other; each compression variable
    depends only on the local observation and the local input.
    """

    px1: JointPmf
    px2: JointPmf
    px0_given_x1x2: CondPmf
    pyh1_given_x1y1: CondPmf
    pyh2_given_x2y2: CondPmf

    def __post_init__(self):
        _expect_axes(self.px1, ("X1",), "px1")
        _expect_axes(self.px2, ("X2",), "px2")
        _expect_cond(self.px0_given_x1x2, ("X1", "X2"), ("X0",), "px0_given_x1x2")
        _expect_cond(self.pyh1_given_x1y1, ("X1", "Y1"), ("Yh1",), "pyh1_given_x1y1")
        _expect_cond(self.pyh2_given_x2y2, ("X2", "Y2"), ("Yh2",), "pyh2_given_x2y2")


@dataclass(frozen=True, eq=False)
class T2Law:
    """Input law of the hybrid scheme with decode-and-forward auxiliaries
    (theorem 2 family).

    Factorization: p(x1) p(x2) p(v1|x1) p(v2|x2) p(x0|x1,x2,v1,v2)
    p(yh1|x1,v1,y1) p(yh2|x2,v2,y2).
    """

    px1: JointPmf
    px2: JointPmf
    pv1_given_x1: CondPmf
    pv2_given_x2: CondPmf
    px0_given_x1x2v1v2: CondPmf
    pyh1_given_x1v1y1: CondPmf
    pyh2_given_x2v2y2: CondPmf

    def __post_init__(self):
        _expect_axes(self.px1, ("X1",), "px1")
        _expect_axes(self.px2, ("X2",), "px2")
        _expect_cond(self.pv1_given_x1, ("X1",), ("V1",), "pv1_given_x1")
        _expect_cond(self.pv2_given_x2, ("X2",), ("V2",), "pv2_given_x2")
        _expect_cond(
            self.px0_given_x1x2v1v2, ("X1", "X2", "V1", "V2"), ("X0",), "px0_given_x1x2v1v2"
        )
        _expect_cond(self.pyh1_given_x1v1y1, ("X1", "V1", "Y1"), ("Yh1",), "pyh1_given_x1v1y1")
        _expect_cond(self.pyh2_given_x2v2y2, ("X2", "V2", "Y2"), ("Yh2",), "pyh2_given_x2v2y2")


def _expect_axes(pmf: JointPmf, ids: tuple[str, ...], field: str) -> None:
    if pmf.ids != ids:
        raise ValidationError(f"{field}: axes {pmf.ids}, expected {ids}")


def _expect_cond(pmf: CondPmf, given: tuple[str, ...], target: tuple[str, ...], field: str) -> None:
    if pmf.given_ids != given or pmf.target_ids != target:
        raise ValidationError(
            f"{field}: axes ({pmf.given_ids} -> {pmf.target_ids}), "
            f"expected ({given} -> {target})"
        )


def _sizes_must_match(pairs: list[tuple[str, int, int]]) -> None:
    for vid, lhs, rhs in pairs:
        if lhs != rhs:
            raise ValidationError(f"alphabet mismatch on {vid}: law has {lhs}, channel has {rhs}")


def _einsum_term(ids: Sequence[str]) -> str:
    return "".join(_EINSUM_LETTER[vid] for vid in ids)


def assemble_joint_t1(channel: NetworkChannel, law: T1Law) -> JointPmf:
    """Joint pmf over (X0, X1, X2, Y0, Y1, Y2, Yh1, Yh2) under a T1 law."""
    sx0, sx1, sx2 = channel.input_sizes
    sy0, sy1, sy2 = channel.output_sizes
    _sizes_must_match(
        [
            ("X1", law.px1.axes[0].size, sx1),
            ("X2", law.px2.axes[0].size, sx2),
            ("X0", law.px0_given_x1x2.target[0].size, sx0),
            ("X1", law.px0_given_x1x2.given[0].size, sx1),
            ("X2", law.px0_given_x1x2.given[1].size, sx2),
            ("Y1", law.pyh1_given_x1y1.given[1].size, sy1),
            ("X1", law.pyh1_given_x1y1.given[0].size, sx1),
            ("Y2", law.pyh2_given_x2y2.given[1].size, sy2),
            ("X2", law.pyh2_given_x2y2.given[0].size, sx2),
        ]
    )
    out_ids = ("X0", "X1", "X2", "Y0", "Y1", "Y2", "Yh1", "Yh2")
    spec = "{},{},{},{},{},{}->{}".format(
        _einsum_term(("X1",)),
        _einsum_term(("X2",)),
        _einsum_term(("X1", "X2", "X0")),
        _einsum_term(("X0", "X1", "X2", "Y0", "Y1", "Y2")),
        _einsum_term(("X1", "Y1", "Yh1")),
        _einsum_term(("X2", "Y2", "Yh2")),
        _einsum_term(out_ids),
    )
    mass = np.einsum(
        spec,
        law.px1.mass,
        law.px2.mass,
        law.px0_given_x1x2.mass,
        channel.transition.mass,
        law.pyh1_given_x1y1.mass,
        law.pyh2_given_x2y2.mass,
    )
    axes = (
        channel.alphabet("X0"),
        channel.alphabet("X1"),
        channel.alphabet("X2"),
        channel.alphabet("Y0"),
        channel.alphabet("Y1"),
        channel.alphabet("Y2"),
        law.pyh1_given_x1y1.target[0],
        law.pyh2_given_x2y2.target[0],
    )
    return JointPmf(axes, mass)


def assemble_joint_t2(channel: NetworkChannel, law: T2Law) -> JointPmf:
    """Joint pmf over all ten variables under a T2 law."""
    sx0, sx1, sx2 = channel.input_sizes
    sy0, sy1, sy2 = channel.output_sizes
    sv1 = law.pv1_given_x1.target[0].size
    sv2 = law.pv2_given_x2.target[0].size
    _sizes_must_match(
        [
            ("X1", law.px1.axes[0].size, sx1),
            ("X2", law.px2.axes[0].size, sx2),
            ("X1", law.pv1_given_x1.given[0].size, sx1),
            ("X2", law.pv2_given_x2.given[0].size, sx2),
            ("X0", law.px0_given_x1x2v1v2.target[0].size, sx0),
            ("X1", law.px0_given_x1x2v1v2.given[0].size, sx1),
            ("X2", law.px0_given_x1x2v1v2.given[1].size, sx2),
            ("V1", law.px0_given_x1x2v1v2.given[2].size, sv1),
            ("V2", law.px0_given_x1x2v1v2.given[3].size, sv2),
            ("X1", law.pyh1_given_x1v1y1.given[0].size, sx1),
            ("V1", law.pyh1_given_x1v1y1.given[1].size, sv1),
            ("Y1", law.pyh1_given_x1v1y1.given[2].size, sy1),
            ("X2", law.pyh2_given_x2v2y2.given[0].size, sx2),
            ("V2", law.pyh2_given_x2v2y2.given[1].size, sv2),
            ("Y2", law.pyh2_given_x2v2y2.given[2].size, sy2),
        ]
    )
    out_ids = ("X0", "X1", "X2", "V1", "V2", "Y0", "Y1", "Y2", "Yh1", "Yh2")
    spec = "{},{},{},{},{},{},{},{}->{}".format(
        _einsum_term(("X1",)),
        _einsum_term(("X2",)),
        _einsum_term(("X1", "V1")),
        _einsum_term(("X2", "V2")),
        _einsum_term(("X1", "X2", "V1", "V2", "X0")),
        _einsum_term(("X0", "X1", "X2", "Y0", "Y1", "Y2")),
        _einsum_term(("X1", "V1", "Y1", "Yh1")),
        _einsum_term(("X2", "V2", "Y2", "Yh2")),
        _einsum_term(out_ids),
    )
    mass = np.einsum(
        spec,
        law.px1.mass,
        law.px2.mass,
        law.pv1_given_x1.mass,
        law.pv2_given_x2.mass,
        law.px0_given_x1x2v1v2.mass,
        channel.transition.mass,
        law.pyh1_given_x1v1y1.mass,
        law.pyh2_given_x2v2y2.mass,
    )
    axes = (
        channel.alphabet("X0"),
        channel.alphabet("X1"),
        channel.alphabet("X2"),
        law.pv1_given_x1.target[0],
        law.pv2_given_x2.target[0],
        channel.alphabet("Y0"),
        channel.alphabet("Y1"),
        channel.alphabet("Y2"),
        law.pyh1_given_x1v1y1.target[0],
        law.pyh2_given_x2v2y2.target[0],
    )
    return JointPmf(axes, mass)


# ---------------------------------------------------------------------------
# constructors and samplers
# ---------------------------------------------------------------------------


def _as_axes(axes: Alphabet | Sequence[Alphabet]) -> tuple[Alphabet, ...]:
    return (axes,) if isinstance(axes, Alphabet) else tuple(axes)


def uniform_pmf(axes: Alphabet | Sequence[Alphabet]) -> JointPmf:
    axes = _as_axes(axes)
    shape = tuple(a.size for a in axes)
    n = int(np.prod(shape, dtype=np.int64))
    return JointPmf(axes, np.full(shape, 1.0 / n))


def point_mass(alphabet: Alphabet, index: int) -> JointPmf:
    mass = np.zeros(alphabet.size)
    mass[index] = 1.0
    return JointPmf((alphabet,), mass)


def uniform_cond(
    given: Alphabet | Sequence[Alphabet], target: Alphabet | Sequence[Alphabet]
) -> CondPmf:
    g = _as_axes(given)
    t = _as_axes(target)
    shape = tuple(a.size for a in g) + tuple(a.size for a in t)
    k = int(np.prod([a.size for a in t], dtype=np.int64))
    return CondPmf(g, t, np.full(shape, 1.0 / k))


def deterministic_cond(given: Sequence[Alphabet], target: Alphabet, table: np.ndarray) -> CondPmf:
    """Conditional that maps each conditioning cell to one target letter."""
    g = tuple(given)
    table = np.asarray(table, dtype=int)
    shape = tuple(a.size for a in g)
    if table.shape != shape:
        raise ValidationError(f"deterministic table shape {table.shape}, expected {shape}")
    mass = np.zeros(shape + (target.size,))
    it = np.nditer(table, flags=["multi_index"])
    for val in it:
        mass[it.multi_index + (int(val),)] = 1.0
    return CondPmf(g, (target,), mass)


def _random_rows(rng: np.random.Generator, n_rows: int, k: int) -> np.ndarray:
    return rng.dirichlet(np.ones(k), size=n_rows)


def random_cond(rng: np.random.Generator, given: Sequence[Alphabet], target: Sequence[Alphabet]) -> CondPmf:
    g = tuple(given)
    t = tuple(target)
    n_rows = int(np.prod([a.size for a in g], dtype=np.int64)) if g else 1
    k = int(np.prod([a.size for a in t], dtype=np.int64))
    rows = _random_rows(rng, n_rows, k)
    shape = tuple(a.size for a in g) + tuple(a.size for a in t)
    return CondPmf(g, t, rows.reshape(shape))


def random_channel(rng: np.random.Generator, sizes: dict[str, int] | None = None) -> NetworkChannel:
    """Fully random memoryless channel; outputs may be arbitrarily correlated."""
    sizes = dict(sizes or {})
    get = lambda vid: Alphabet(vid, sizes.get(vid, 2))
    given = (get("X0"), get("X1"), get("X2"))
    target = (get("Y0"), get("Y1"), get("Y2"))
    return NetworkChannel(random_cond(rng, given, target))


def random_t1_law(
    rng: np.random.Generator,
    channel: NetworkChannel,
    yh1_size: int = 2,
    yh2_size: int = 2,
) -> T1Law:
    x1 = channel.alphabet("X1")
    x2 = channel.alphabet("X2")
    x0 = channel.alphabet("X0")
    y1 = channel.alphabet("Y1")
    y2 = channel.alphabet("Y2")
    yh1 = Alphabet("Yh1", yh1_size)
    yh2 = Alphabet("Yh2", yh2_size)
    return T1Law(
        px1=JointPmf((x1,), rng.dirichlet(np.ones(x1.size))),
        px2=JointPmf((x2,), rng.dirichlet(np.ones(x2.size))),
        px0_given_x1x2=random_cond(rng, (x1, x2), (x0,)),
        pyh1_given_x1y1=random_cond(rng, (x1, y1), (yh1,)),
        pyh2_given_x2y2=random_cond(rng, (x2, y2), (yh2,)),
    )


def random_t2_law(
    rng: np.random.Generator,
    channel: NetworkChannel,
    v1_size: int = 2,
    v2_size: int = 2,
    yh1_size: int = 2,
    yh2_size: int = 2,
) -> T2Law:
    x1 = channel.alphabet("X1")
    x2 = channel.alphabet("X2")
    x0 = channel.alphabet("X0")
    y1 = channel.alphabet("Y1")
    y2 = channel.alphabet("Y2")
    v1 = Alphabet("V1", v1_size)
    v2 = Alphabet("V2", v2_size)
    yh1 = Alphabet("Yh1", yh1_size)
    yh2 = Alphabet("Yh2", yh2_size)
    return T2Law(
        px1=JointPmf((x1,), rng.dirichlet(np.ones(x1.size))),
        px2=JointPmf((x2,), rng.dirichlet(np.ones(x2.size))),
        pv1_given_x1=random_cond(rng, (x1,), (v1,)),
        pv2_given_x2=random_cond(rng, (x2,), (v2,)),
        px0_given_x1x2v1v2=random_cond(rng, (x1, x2, v1, v2), (x0,)),
        pyh1_given_x1v1y1=random_cond(rng, (x1, v1, y1), (yh1,)),
        pyh2_given_x2v2y2=random_cond(rng, (x2, v2, y2), (yh2,)),
    )


def uniform_t1_law(channel: NetworkChannel, yh1_size: int = 2, yh2_size: int = 2) -> T1Law:
    x1 = channel.alphabet("X1")
    x2 = channel.alphabet("X2")
    x0 = channel.alphabet("X0")
    y1 = channel.alphabet("Y1")
    y2 = channel.alphabet("Y2")
    yh1 = Alphabet("Yh1", yh1_size)
    yh2 = Alphabet("Yh2", yh2_size)
    return T1Law(
        px1=uniform_pmf(x1),
        px2=uniform_pmf(x2),
        px0_given_x1x2=uniform_cond((x1, x2), (x0,)),
        pyh1_given_x1y1=uniform_cond((x1, y1), (yh1,)),
        pyh2_given_x2y2=uniform_cond((x2, y2), (yh2,)),
    )


def uniform_t2_law(
    channel: NetworkChannel,
    v1_size: int = 2,
    v2_size: int = 2,
    yh1_size: int = 2,
    yh2_size: int = 2,
) -> T2Law:
    x1 = channel.alphabet("X1")
    x2 = channel.alphabet("X2")
    x0 = channel.alphabet("X0")
    y1 = channel.alphabet("Y1")
    y2 = channel.alphabet("Y2")
    v1 = Alphabet("V1", v1_size)
    v2 = Alphabet("V2", v2_size)
    yh1 = Alphabet("Yh1", yh1_size)
    yh2 = Alphabet("Yh2", yh2_size)
    return T2Law(
        px1=uniform_pmf(x1),
        px2=uniform_pmf(x2),
        pv1_given_x1=uniform_cond((x1,), (v1,)),
        pv2_given_x2=uniform_cond((x2,), (v2,)),
        px0_given_x1x2v1v2=uniform_cond((x1, x2, v1, v2), (x0,)),
        pyh1_given_x1v1y1=uniform_cond((x1, v1, y1), (yh1,)),
        pyh2_given_x2v2y2=uniform_cond((x2, v2, y2), (yh2,)),
    )
