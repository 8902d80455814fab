"""Configured blow-ups of Hirzebruch surfaces and their log pairs.

A ``BlowupConfig`` records the combinatorial position of each blown-up
point: on a fresh fiber, on the fiber of an earlier point, or infinitely
near an earlier point (on or off the strict transform of its fiber).  No
point is ever on the negative section; inputs that want a point there go
through :func:`normalize_off_section`, which trades such a point for a
raise of the Hirzebruch index (an elementary transformation centered at
the point does exactly this).

Boundary divisors are lists of weighted components.  A component is either
a ``TrackedCurve`` (a class ``alpha*h + beta*f`` together with its
multiplicity at every configured point) or one of the exceptional curves.
From this data the module builds strict transforms, computes volumes
``(K + Delta)^2`` exactly, and certifies anti-nefness of ``K + Delta``
where a complete finite criterion exists.  Nefness on a blow-up depends on
the actual position of the points, which this model does not carry, so the
certification is honest about its three possible answers: certified yes,
no together with a witness curve, or unknown.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import lattice
from ._rational import fmt, rat, RationalLike
from .lattice import DivisorClass, SurfaceModel, pair


class ConfigError(ValueError):
    """Raised for structurally invalid blow-up configurations."""


class Location(enum.Enum):
    FRESH = "fresh"
    SAME_FIBER = "same_fiber"
    INF_NEAR_ON_FIBER = "inf_near_on_fiber"
    INF_NEAR_OFF_FIBER = "inf_near_off_fiber"


_GROUND = (Location.FRESH, Location.SAME_FIBER)
_INF_NEAR = (Location.INF_NEAR_ON_FIBER, Location.INF_NEAR_OFF_FIBER)


@dataclass(frozen=True)
class PointSpec:
    """One blown-up point: its 1-based id and where it sits.

    ``ref`` names an earlier point (``ref < id``): the point whose fiber is
    shared, or the point whose exceptional curve carries this one.
    """

    id: int
    loc: Location
    ref: int | None = None


@dataclass(frozen=True)
class ProjectivePlaneConfig:
    """Marker configuration for pairs living on the projective plane."""

    @property
    def k(self) -> int:
        return 0

    def surface(self) -> SurfaceModel:
        return lattice.projective_plane()


@dataclass(frozen=True)
class BlowupConfig:
    n: int
    points: tuple[PointSpec, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ConfigError("Hirzebruch index must be non-negative")
        seen_children: set[int] = set()
        for pos, p in enumerate(self.points, start=1):
            if p.id != pos:
                raise ConfigError(f"point ids must be 1..k in order, got {p.id} at {pos}")
            if p.loc is Location.FRESH:
                if p.ref is not None:
                    raise ConfigError(f"point {p.id}: fresh points take no ref")
                continue
            if p.ref is None or not 1 <= p.ref < p.id:
                raise ConfigError(f"point {p.id}: ref must name an earlier point")
            target = self.points[p.ref - 1]
            if target.loc not in _GROUND:
                raise ConfigError(
                    f"point {p.id}: ref {p.ref} is infinitely near; depth is capped at one"
                )
            if p.loc in _INF_NEAR:
                if p.ref in seen_children:
                    raise ConfigError(
                        f"at most one point may be infinitely near point {p.ref}"
                    )
                seen_children.add(p.ref)

    @property
    def k(self) -> int:
        return len(self.points)

    def surface(self) -> SurfaceModel:
        return lattice.hirzebruch(self.n, self.k)

    def point(self, pid: int) -> PointSpec:
        return self.points[pid - 1]

    def is_ground(self, pid: int) -> bool:
        return self.point(pid).loc in _GROUND

    def child_of(self, pid: int) -> int | None:
        """The point infinitely near ``pid``, if any."""
        for p in self.points:
            if p.loc in _INF_NEAR and p.ref == pid:
                return p.id
        return None

    def fiber_root(self, pid: int) -> int:
        """Earliest ground point on the same fiber as ground point ``pid``."""
        p = self.point(pid)
        if p.loc is Location.FRESH:
            return pid
        if p.loc is Location.SAME_FIBER:
            return self.fiber_root(p.ref)
        raise ConfigError(f"point {pid} is infinitely near and has no own fiber")

    def fiber_groups(self) -> dict[int, tuple[int, ...]]:
        """Map each fiber root to the ids lying on that fiber's transform.

        A point infinitely near ``j`` on the fiber through ``j`` counts as
        lying on the fiber; one off the fiber does not.
        """
        groups: dict[int, list[int]] = {}
        for p in self.points:
            if p.loc in _GROUND:
                groups.setdefault(self.fiber_root(p.id), []).append(p.id)
            elif p.loc is Location.INF_NEAR_ON_FIBER:
                groups.setdefault(self.fiber_root(p.ref), []).append(p.id)
        return {root: tuple(ids) for root, ids in sorted(groups.items())}


SurfaceConfig = Union[BlowupConfig, ProjectivePlaneConfig]


def make_config(n: int, points: Sequence[str | tuple[str, int]] = ()) -> BlowupConfig:
    """Build a config from short point descriptions.

    Each entry is ``"fresh"`` or ``(location, ref)`` with location one of
    ``"same_fiber"``, ``"inf_near_on_fiber"``, ``"inf_near_off_fiber"``.
    """
    specs = []
    for i, entry in enumerate(points, start=1):
        if entry == "fresh":
            specs.append(PointSpec(i, Location.FRESH))
        else:
            loc, ref = entry
            specs.append(PointSpec(i, Location(loc), int(ref)))
    return BlowupConfig(n, tuple(specs))


# -- normalization off the negative section ---------------------------------


@dataclass(frozen=True)
class RawPoint:
    """Pre-normalization point description, possibly flagged on the section."""

    loc: Location
    ref: int | None = None
    on_section: bool = False


def normalize_off_section(n: int, raw_points: Sequence[RawPoint]) -> BlowupConfig:
    """Trade every on-section point for a raise of the Hirzebruch index.

    Blowing up a point of the negative section and contracting the strict
    transform of its fiber turns the surface into the next Hirzebruch
    surface with the point moved off the new section.  Applying this once
    per flagged point leaves a configuration with no on-section points and
    index ``n + (number of flagged points)``.

    Flagged points must sit on fresh fibers and may not be referenced by
    other points; the elementary transformation destroys their fiber, so
    such references would be meaningless.
    """
    flagged = {i + 1 for i, p in enumerate(raw_points) if p.on_section}
    for i, p in enumerate(raw_points, start=1):
        if p.on_section and p.loc is not Location.FRESH:
            raise ConfigError(f"point {i}: an on-section point must be on a fresh fiber")
        if p.ref is not None and p.ref in flagged:
            raise ConfigError(
                f"point {i}: may not reference on-section point {p.ref}"
            )
    specs = []
    for i, p in enumerate(raw_points, start=1):
        if p.on_section:
            specs.append(PointSpec(i, Location.FRESH))
        else:
            specs.append(PointSpec(i, p.loc, p.ref))
    return BlowupConfig(n + len(flagged), tuple(specs))


# -- curves and boundaries ---------------------------------------------------


@dataclass(frozen=True)
class TrackedCurve:
    """A curve class ``alpha*h + beta*f`` with multiplicities at each point.

    ``mults[i]`` is the multiplicity of the (successively transformed)
    curve at the center of the (i+1)-th blow-up, including infinitely near
    levels.  On the projective plane, ``alpha`` is the degree, ``beta``
    must be zero and ``mults`` empty.
    """

    alpha: Fraction
    beta: Fraction
    mults: tuple[Fraction, ...] = ()
    label: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", rat(self.alpha))
        object.__setattr__(self, "beta", rat(self.beta))
        object.__setattr__(self, "mults", tuple(rat(m) for m in self.mults))


@dataclass(frozen=True)
class ExceptionalComponent:
    """The irreducible exceptional curve over configured point ``index``."""

    index: int
    label: str | None = None


Component = Union[TrackedCurve, ExceptionalComponent]


@dataclass(frozen=True)
class BoundaryEntry:
    component: Component
    coeff: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", rat(self.coeff))
        if not 0 <= self.coeff <= 1:
            raise ConfigError(f"boundary coefficient {self.coeff} outside [0, 1]")


@dataclass(frozen=True)
class LogPair:
    config: SurfaceConfig
    boundary: tuple[BoundaryEntry, ...] = ()

    def __post_init__(self) -> None:
        k = self.config.k
        for entry in self.boundary:
            c = entry.component
            if isinstance(c, TrackedCurve):
                if len(c.mults) != k:
                    raise ConfigError(
                        f"tracked curve carries {len(c.mults)} multiplicities, expected {k}"
                    )
                if isinstance(self.config, ProjectivePlaneConfig) and c.beta != 0:
                    raise ConfigError("plane curves are recorded by degree alone")
            else:
                if isinstance(self.config, ProjectivePlaneConfig):
                    raise ConfigError("the plane has no exceptional components")
                if not 1 <= c.index <= k:
                    raise ConfigError(f"no configured point {c.index}")

    def labels(self) -> tuple[str, ...]:
        out = []
        for i, entry in enumerate(self.boundary, start=1):
            c = entry.component
            if c.label:
                out.append(c.label)
            elif isinstance(c, ExceptionalComponent):
                out.append(f"E{c.index}")
            else:
                out.append(f"curve{i}")
        return tuple(out)


def log_pair(config: SurfaceConfig, boundary: Iterable[tuple[Component, RationalLike]]) -> LogPair:
    return LogPair(config, tuple(BoundaryEntry(c, rat(w)) for c, w in boundary))


def section_curve(cfg: BlowupConfig, label: str = "S") -> TrackedCurve:
    """The negative section as a tracked curve; no configured point lies on it."""
    return TrackedCurve(Fraction(1), Fraction(-cfg.n), (Fraction(0),) * cfg.k, label)


def generic_fiber_curve(cfg: BlowupConfig, label: str = "F") -> TrackedCurve:
    return TrackedCurve(Fraction(0), Fraction(1), (Fraction(0),) * cfg.k, label)


def fiber_through(cfg: BlowupConfig, root: int, label: str | None = None) -> TrackedCurve:
    """The fiber through a ground point, with multiplicity one at every
    configured point lying on its successive transforms."""
    root = cfg.fiber_root(root)
    group = cfg.fiber_groups()[root]
    mults = tuple(Fraction(1 if i in group else 0) for i in range(1, cfg.k + 1))
    return TrackedCurve(Fraction(0), Fraction(1), mults, label or f"F{root}")


def plane_curve(degree: RationalLike, label: str | None = None) -> TrackedCurve:
    return TrackedCurve(rat(degree), Fraction(0), (), label)


def strict_transform(cfg: BlowupConfig, curve: TrackedCurve) -> DivisorClass:
    """Class of the strict transform on the fully blown-up surface.

    In the orthogonal basis of total-transform exceptional classes this is
    ``alpha*h + beta*f - sum(mults[i] * e_{i+1})``; for a point infinitely
    near an earlier one, the earlier basis class already absorbs the chain
    (the exceptional curve of the earlier blow-up pulls back to the chain
    ``e_old = [strict old] + [new]``), so each level subtracts exactly its
    own multiplicity.
    """
    if len(curve.mults) != cfg.k:
        raise ConfigError(
            f"curve carries {len(curve.mults)} multiplicities, expected {cfg.k}"
        )
    s = cfg.surface()
    coeffs = [curve.alpha, curve.beta] + [-m for m in curve.mults]
    return DivisorClass(s, tuple(coeffs))


def strict_exceptional_class(cfg: BlowupConfig, pid: int) -> DivisorClass:
    """Class of the irreducible exceptional curve over point ``pid``."""
    s = cfg.surface()
    cls = lattice.e_class(s, pid)
    child = cfg.child_of(pid)
    if child is not None:
        cls = cls - lattice.e_class(s, child)
    return cls


def component_class(config: SurfaceConfig, comp: Component) -> DivisorClass:
    if isinstance(config, ProjectivePlaneConfig):
        assert isinstance(comp, TrackedCurve)
        return comp.alpha * lattice.line_class(config.surface())
    if isinstance(comp, TrackedCurve):
        return strict_transform(config, comp)
    return strict_exceptional_class(config, comp.index)


def component_mult(config: SurfaceConfig, comp: Component, pid: int) -> Fraction:
    """Multiplicity of a boundary component at configured point ``pid``.

    An exceptional curve passes (simply) through exactly the point blown up
    infinitely near it, if there is one.
    """
    if isinstance(comp, TrackedCurve):
        return comp.mults[pid - 1]
    assert isinstance(config, BlowupConfig)
    return Fraction(1 if config.child_of(comp.index) == pid else 0)


def boundary_divisor(p: LogPair) -> DivisorClass:
    total = lattice.zero(p.config.surface())
    for entry in p.boundary:
        total = total + entry.coeff * component_class(p.config, entry.component)
    return total


def log_canonical_divisor(p: LogPair) -> DivisorClass:
    return lattice.canonical_class(p.config.surface()) + boundary_divisor(p)


def volume(p: LogPair) -> Fraction:
    """Self-intersection ``(K + Delta)^2``; this is the anti-canonical
    volume whenever ``-(K + Delta)`` is nef."""
    d = log_canonical_divisor(p)
    return pair(d, d)


# -- test curves and nefness certification -----------------------------------


def test_curve_family(config: SurfaceConfig) -> list[DivisorClass]:
    """The finitely many curve classes worth pairing against.

    These are the negative section, a generic fiber, the strict transform
    of the fiber through each configured fiber group, and the irreducible
    exceptional curves (including strict transforms ``e_j - e_child`` over
    points carrying an infinitely near point).  Deduplicated, fixed order.
    """
    if isinstance(config, ProjectivePlaneConfig):
        return [lattice.line_class(config.surface())]
    s = config.surface()
    family = [lattice.section_class(s), lattice.f_class(s)]
    for root in config.fiber_groups():
        family.append(strict_transform(config, fiber_through(config, root)))
    for pid in range(1, config.k + 1):
        family.append(strict_exceptional_class(config, pid))
    out: list[DivisorClass] = []
    for cls in family:
        if cls not in out:
            out.append(cls)
    return out


def fiber_bound_violations(cfg: BlowupConfig, curve: TrackedCurve) -> list[int]:
    """Fiber roots where the curve's multiplicities are geometrically
    impossible.

    A curve sharing no component with the fiber through a group of points
    meets it at least multiplicity-by-multiplicity, so the multiplicities
    along one fiber can sum to at most ``alpha``.  The fiber itself is
    exempt.  Returns the offending roots (empty list when consistent).
    """
    bad = []
    for root, group in cfg.fiber_groups().items():
        own_fiber = (
            curve.alpha == 0
            and curve.beta == 1
            and all(
                (curve.mults[i - 1] == 1) == (i in group) for i in range(1, cfg.k + 1)
            )
        )
        if own_fiber:
            continue
        if sum(curve.mults[i - 1] for i in group) > curve.alpha:
            bad.append(root)
    return bad


class Verdict(enum.Enum):
    CERTIFIED_YES = "certified_yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class NefCertificate:
    verdict: Verdict
    witness: DivisorClass | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict is Verdict.CERTIFIED_YES


def _section_coeff_pattern(p: LogPair) -> bool:
    """All points on distinct fresh fibers, boundary exactly (1 - 2/n) times
    the section, at most n + 2 points: anti-nef unconditionally, because every
    irreducible curve other than the section and the fibers meets each fiber
    in at least its multiplicity at the point there."""
    cfg = p.config
    if not isinstance(cfg, BlowupConfig) or cfg.n < 2:
        return False
    if not (0 < cfg.k <= cfg.n + 2):
        return False
    if any(pt.loc is not Location.FRESH for pt in cfg.points):
        return False
    if len(p.boundary) != 1:
        return False
    entry = p.boundary[0]
    c = entry.component
    return (
        isinstance(c, TrackedCurve)
        and c.alpha == 1
        and c.beta == -cfg.n
        and all(m == 0 for m in c.mults)
        and entry.coeff == 1 - Fraction(2, cfg.n)
    )


def _section_plus_fiber_pattern(p: LogPair) -> bool:
    """Two points on one fiber, boundary (2n-4)/(2n-1) S + (n-2)/(2n-1) F:
    anti-nef unconditionally (the pairing against any curve reduces to
    mult_1 + mult_2 <= 2 h.C, which holds for every irreducible curve)."""
    cfg = p.config
    if not isinstance(cfg, BlowupConfig) or cfg.n < 2 or cfg.k != 2:
        return False
    locs = (cfg.points[0].loc, cfg.points[1].loc)
    if locs != (Location.FRESH, Location.SAME_FIBER) or cfg.points[1].ref != 1:
        return False
    if len(p.boundary) != 2:
        return False
    n = cfg.n
    want = {
        ((Fraction(1), Fraction(-n), (Fraction(0), Fraction(0))),
         Fraction(2 * n - 4, 2 * n - 1)),
        ((Fraction(0), Fraction(1), (Fraction(1), Fraction(1))),
         Fraction(n - 2, 2 * n - 1)),
    }
    got = set()
    for entry in p.boundary:
        c = entry.component
        if not isinstance(c, TrackedCurve):
            return False
        got.add(((c.alpha, c.beta, c.mults), entry.coeff))
    return got == want


def is_anti_nef(p: LogPair) -> NefCertificate:
    """Certify whether ``-(K + Delta)`` is nef.

    Any positive pairing against the test family is a definite ``NO`` with
    the witness handed back.  ``CERTIFIED_YES`` is returned only on a
    complete criterion: on the plane and on an unblown Hirzebruch surface
    the family generates the whole cone of curves, and two blow-up
    patterns carry an unconditional pairing argument.  Everything else is
    ``UNKNOWN``: certifying nefness on a blow-up needs to know where the
    points actually are.
    """
    d = log_canonical_divisor(p)
    for cls in test_curve_family(p.config):
        if pair(d, cls) > 0:
            return NefCertificate(Verdict.NO, witness=cls)
    cfg = p.config
    if isinstance(cfg, ProjectivePlaneConfig):
        return NefCertificate(
            Verdict.CERTIFIED_YES, reason="the line generates the cone of curves"
        )
    if cfg.k == 0:
        return NefCertificate(
            Verdict.CERTIFIED_YES,
            reason="section and fiber generate the cone of curves",
        )
    tracked = [e.component for e in p.boundary if isinstance(e.component, TrackedCurve)]
    if any(fiber_bound_violations(cfg, c) for c in tracked):
        return NefCertificate(
            Verdict.UNKNOWN,
            reason="boundary multiplicities violate the fiber intersection bound",
        )
    if _section_coeff_pattern(p):
        return NefCertificate(
            Verdict.CERTIFIED_YES,
            reason="weighted-section pattern on distinct fibers, at most n+2 points",
        )
    if _section_plus_fiber_pattern(p):
        return NefCertificate(
            Verdict.CERTIFIED_YES,
            reason="weighted section plus shared fiber pattern",
        )
    return NefCertificate(
        Verdict.UNKNOWN, reason="configuration outside the certified patterns"
    )


def is_nef_and_big(p: LogPair) -> NefCertificate:
    """Certify the weak log del Pezzo property of ``(X, Delta)``.

    A nef class is big exactly when its self-intersection is positive, so
    non-positive volume rules the pair out regardless of nefness.
    """
    vol = volume(p)
    if vol <= 0:
        return NefCertificate(Verdict.NO, reason=f"volume {fmt(vol)} is not positive")
    anti = is_anti_nef(p)
    if anti.verdict is Verdict.CERTIFIED_YES:
        return NefCertificate(Verdict.CERTIFIED_YES, reason=anti.reason)
    if anti.verdict is Verdict.NO:
        return NefCertificate(Verdict.NO, witness=anti.witness, reason=anti.reason)
    return NefCertificate(Verdict.UNKNOWN, reason=anti.reason)


# -- JSON interchange ---------------------------------------------------------


def config_to_json(config: SurfaceConfig) -> dict:
    if isinstance(config, ProjectivePlaneConfig):
        return {"kind": "P2"}
    points = []
    for p in config.points:
        entry: dict = {"loc": p.loc.value}
        if p.ref is not None:
            entry["ref"] = p.ref
        points.append(entry)
    return {"n": config.n, "points": points}


def config_from_json(data: dict) -> SurfaceConfig:
    if data.get("kind") == "P2":
        return ProjectivePlaneConfig()
    points = []
    for i, entry in enumerate(data.get("points", []), start=1):
        loc = Location(entry["loc"])
        ref = entry.get("ref")
        points.append(PointSpec(i, loc, None if ref is None else int(ref)))
    return BlowupConfig(int(data["n"]), tuple(points))


def boundary_to_json(p: LogPair) -> list[dict]:
    out = []
    for entry in p.boundary:
        c = entry.component
        if isinstance(c, TrackedCurve):
            item: dict = {
                "curve": {
                    "alpha": fmt(c.alpha),
                    "beta": fmt(c.beta),
                    "mults": [fmt(m) for m in c.mults],
                }
            }
        else:
            item = {"exceptional": c.index}
        if c.label:
            item["label"] = c.label
        item["coeff"] = fmt(entry.coeff)
        out.append(item)
    return out


def boundary_from_json(entries: Sequence[dict], config: SurfaceConfig) -> LogPair:
    boundary = []
    for item in entries:
        label = item.get("label")
        if "curve" in item:
            c = item["curve"]
            comp: Component = TrackedCurve(
                rat(c["alpha"]),
                rat(c["beta"]),
                tuple(rat(m) for m in c.get("mults", [])),
                label,
            )
        elif "exceptional" in item:
            comp = ExceptionalComponent(int(item["exceptional"]), label)
        else:
            raise ConfigError(f"bad boundary entry: {item!r}")
        boundary.append(BoundaryEntry(comp, rat(item["coeff"])))
    return LogPair(config, tuple(boundary))
