"""Brute-force exact verification of the constrained volume maximizations.

Each closed-form bound in :mod:`delpezzo.bounds` is the maximum of

    V = n*(-2 + a + sA)^2 + 2*(-2 + a + sA)*(n - 2 - n*a + sB) - sum(e_j^2)

over boundary data ``a, d_i, e_j`` and the aggregates ``sA, sB`` (standing
for ``sum(d_i * alpha_i)`` and ``sum(d_i * beta_i)``), subject to the
pairing inequalities and the multiplicity lower bounds of the relevant
case.  This module re-verifies every case by exhaustive exact search over
a rational grid plus an exact evaluation of the documented extremal
assignment.  The sweep is a falsification net: a feasible grid point
beating the closed form is a hard failure.

Grid mechanics: grid values are integer multiples of the step, so the
whole search runs in scaled integer arithmetic (numpy int64), which is
exact.  The aggregates are not enumerated: on the feasible set
``X = -2 + a + sA <= 0`` and ``Y = n - 2 - n*a + sB <= 0``, so
``dV/dsA = 2(nX + Y) <= 0`` and ``dV/dsB = 2X <= 0``, and the maximum can
only sit at the smallest feasible grid values of ``sA`` and ``sB``; every
larger choice is dominated.  The tests cross-check this reduction against
a full naive enumeration at coarse steps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from ._rational import ceil_frac, floor_frac, fmt, rat, RationalLike
from .bounds import floor_shared_fiber_index, floor_two_over, main_bound, max_points, rho4_bound
from .discrepancy import EpsilonLike, as_epsilon

FN_CASE2 = "Fn-Case2"
RHO3 = "Rho3"
RHO4_SUB11 = "Rho4-Sub11"
RHO4_SUB12 = "Rho4-Sub12"
RHO4_SUB21 = "Rho4-Sub21"
RHO4_SUB22 = "Rho4-Sub22"
GENERAL_K = "General-k"

CASE_IDS = (FN_CASE2, RHO3, RHO4_SUB11, RHO4_SUB12, RHO4_SUB21, RHO4_SUB22, GENERAL_K)

# Subcase 2.1 reduces to the same inequalities as subcase 1.2, so the two
# case ids share objective, constraints and results.
_SHARED_FIBER_CASES = (RHO4_SUB12, RHO4_SUB21)


class UnknownCaseError(ValueError):
    pass


@dataclass(frozen=True)
class Affine:
    """const + sum(coeff * var), used for constraint right-hand sides."""

    const: Fraction
    terms: tuple[tuple[str, Fraction], ...] = ()

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        total = self.const
        for var, coeff in self.terms:
            total += coeff * assignment[var]
        return total

    def describe(self) -> str:
        parts = [fmt(self.const)] if self.const != 0 or not self.terms else []
        for var, coeff in self.terms:
            if coeff == 1:
                parts.append(f"+ {var}")
            elif coeff == -1:
                parts.append(f"- {var}")
            elif coeff < 0:
                parts.append(f"- {fmt(-coeff)}*{var}")
            else:
                parts.append(f"+ {fmt(coeff)}*{var}")
        text = " ".join(parts) if parts else "0"
        return text.lstrip("+ ").strip()


@dataclass(frozen=True)
class LeZero:
    """Constraint ``expr <= 0``."""

    name: str
    expr: Affine

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        return self.expr.evaluate(assignment) <= 0

    def describe(self) -> str:
        return f"{self.name}: {self.expr.describe()} <= 0"


@dataclass(frozen=True)
class LowerMax:
    """Constraint ``var >= max(0, exprs...)``."""

    name: str
    var: str
    exprs: tuple[Affine, ...]

    def bound(self, assignment: Mapping[str, Fraction]) -> Fraction:
        lo = Fraction(0)
        for expr in self.exprs:
            lo = max(lo, expr.evaluate(assignment))
        return lo

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        return assignment[self.var] >= self.bound(assignment)

    def describe(self) -> str:
        inner = ", ".join(e.describe() for e in self.exprs)
        return f"{self.name}: {self.var} >= max(0, {inner})"


Constraint = LeZero | LowerMax


@dataclass(frozen=True)
class CaseSpec:
    """One constrained maximization problem, pinned to (n, eps) and, for
    the many-point case, to the number of points k."""

    case_id: str
    n: int
    eps: Fraction
    k: int | None = None

    def __post_init__(self) -> None:
        if self.case_id not in CASE_IDS:
            raise UnknownCaseError(f"unknown case id {self.case_id!r}")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        object.__setattr__(self, "eps", as_epsilon(self.eps))
        if self.case_id == GENERAL_K:
            if self.k is None or self.k < 0:
                raise ValueError("the many-point case needs k >= 0")
        elif self.k is not None:
            raise ValueError(f"case {self.case_id} takes no k")

    @property
    def variables(self) -> tuple[str, ...]:
        if self.case_id == FN_CASE2:
            return ("a", "sA", "sB")
        if self.case_id == RHO3:
            return ("a", "d1", "e", "sA", "sB")
        if self.case_id == RHO4_SUB11:
            return ("a", "d1", "d2", "e1", "e2", "sA", "sB")
        if self.case_id in (*_SHARED_FIBER_CASES, RHO4_SUB22):
            return ("a", "d1", "e1", "e2", "sA", "sB")
        if self.k == 0:
            return ("a", "sA", "sB")
        return ("a", "d", "e", "sA", "sB")

    def boxes(self) -> dict[str, tuple[Fraction, Fraction]]:
        cap = 1 - self.eps
        out: dict[str, tuple[Fraction, Fraction]] = {}
        for var in self.variables:
            if var in ("a", "d", "d1", "d2"):
                out[var] = (Fraction(0), cap)
            elif var in ("e", "e1", "e2"):
                out[var] = (Fraction(0), Fraction(2))
            else:
                out[var] = (Fraction(0), Fraction(4 + self.n))
        return out

    def e_weights(self) -> tuple[tuple[str, int], ...]:
        if self.case_id == RHO3:
            return (("e", 1),)
        if self.case_id in (RHO4_SUB11, *_SHARED_FIBER_CASES, RHO4_SUB22):
            return tuple((v, 1) for v in self.variables if v.startswith("e"))
        if self.case_id == GENERAL_K and self.k:
            return (("e", self.k),)
        return ()


def build_case(case_id: str, n: int, eps: EpsilonLike, k: int | None = None) -> CaseSpec:
    return CaseSpec(case_id, n, as_epsilon(eps), k)


def constraint_set(spec: CaseSpec) -> list[Constraint]:
    """The exact inequality list of the case (box bounds are separate)."""
    n = Fraction(spec.n)
    section = LeZero("section_pairing", Affine(n - 2, (("a", -n), ("sB", Fraction(1)))))
    fiber = LeZero("fiber_pairing", Affine(Fraction(-2), (("a", Fraction(1)), ("sA", Fraction(1)))))
    cons: list[Constraint] = [section, fiber]
    one = Fraction(1)
    if spec.case_id == RHO3:
        cons.append(
            LowerMax(
                "mult_bound_sA",
                "sA",
                (Affine(one, (("e", -one), ("d1", -one))),),
            )
        )
        cons.append(LowerMax("beta_bound_sB", "sB", (Affine(Fraction(0), (("d1", one),)),)))
    elif spec.case_id == RHO4_SUB11:
        cons.append(
            LowerMax(
                "mult_bound_sA",
                "sA",
                (
                    Affine(one, (("e1", -one), ("d1", -one))),
                    Affine(one, (("e2", -one), ("d2", -one))),
                ),
            )
        )
        cons.append(
            LowerMax(
                "beta_bound_sB",
                "sB",
                (Affine(Fraction(0), (("d1", one), ("d2", one))),),
            )
        )
    elif spec.case_id in _SHARED_FIBER_CASES:
        cons.append(
            LowerMax(
                "mult_bound_sA",
                "sA",
                (Affine(Fraction(2), (("e1", -one), ("e2", -one), ("d1", Fraction(-2)))),),
            )
        )
        cons.append(LowerMax("beta_bound_sB", "sB", (Affine(Fraction(0), (("d1", one),)),)))
        # pairing against the strict transforms of section and shared fiber
        cons.append(LeZero("section_pivot", Affine(n - 2, (("d1", one), ("a", -n)))))
        cons.append(LeZero("fiber_pivot", Affine(Fraction(0), (("a", one), ("d1", Fraction(-2))))))
    elif spec.case_id == RHO4_SUB22:
        cons.append(
            LowerMax(
                "mult_bound_sA",
                "sA",
                (
                    Affine(
                        one,
                        (
                            ("e1", Fraction(-1, 2)),
                            ("e2", Fraction(-1, 2)),
                            ("d1", Fraction(-1, 2)),
                        ),
                    ),
                ),
            )
        )
        cons.append(LowerMax("beta_bound_sB", "sB", (Affine(Fraction(0), (("d1", one),)),)))
    elif spec.case_id == GENERAL_K and spec.k:
        cons.append(
            LowerMax(
                "mult_bound_sA",
                "sA",
                (Affine(one, (("e", -one), ("d", -one))),),
            )
        )
        cons.append(
            LowerMax("beta_bound_sB", "sB", (Affine(Fraction(0), (("d", Fraction(spec.k)),)),))
        )
    return cons


def objective(spec: CaseSpec, assignment: Mapping[str, RationalLike]) -> Fraction:
    """Evaluate V exactly; no constraint checking happens here."""
    vals = {var: rat(v) for var, v in assignment.items()}
    n = Fraction(spec.n)
    x = -2 + vals["a"] + vals["sA"]
    y = n - 2 - n * vals["a"] + vals["sB"]
    total = n * x * x + 2 * x * y
    for var, weight in spec.e_weights():
        total -= weight * vals[var] ** 2
    return total


def feasible(spec: CaseSpec, assignment: Mapping[str, RationalLike]) -> bool:
    vals = {var: rat(v) for var, v in assignment.items()}
    for var, (lo, hi) in spec.boxes().items():
        if not lo <= vals[var] <= hi:
            return False
    return all(c.holds(vals) for c in constraint_set(spec))


def closed_form(spec: CaseSpec) -> Fraction:
    """The case's proved maximum, as a function of n (and k)."""
    n = spec.n
    base = n + 4 + Fraction(4, n) if n >= 2 else Fraction(8)
    if spec.case_id == FN_CASE2:
        return base
    if spec.case_id == RHO3:
        return base - 1
    if spec.case_id in (RHO4_SUB11, RHO4_SUB22):
        return base - 2
    if spec.case_id in _SHARED_FIBER_CASES:
        if n >= 2:
            return n + Fraction(5, 2) + Fraction(9, 4 * n - 2)
        return Fraction(6)
    return base - spec.k


def extremal_assignment(spec: CaseSpec) -> dict[str, Fraction]:
    """The documented maximizer; feasible and attaining the closed form."""
    n = spec.n
    zero = Fraction(0)
    one = Fraction(1)
    a_star = max(zero, 1 - Fraction(2, n)) if n >= 2 else zero
    if spec.case_id == FN_CASE2:
        return {"a": a_star, "sA": zero, "sB": zero}
    if spec.case_id == RHO3:
        return {"a": a_star, "d1": zero, "e": one, "sA": zero, "sB": zero}
    if spec.case_id == RHO4_SUB11:
        return {
            "a": a_star, "d1": zero, "d2": zero,
            "e1": one, "e2": one, "sA": zero, "sB": zero,
        }
    if spec.case_id in _SHARED_FIBER_CASES:
        if n >= 2:
            a = Fraction(2 * n - 4, 2 * n - 1)
            d1 = Fraction(n - 2, 2 * n - 1)
            e = Fraction(n + 1, 2 * n - 1)
            return {"a": a, "d1": d1, "e1": e, "e2": e, "sA": zero, "sB": d1}
        return {"a": zero, "d1": zero, "e1": one, "e2": one, "sA": zero, "sB": zero}
    if spec.case_id == RHO4_SUB22:
        return {"a": a_star, "d1": zero, "e1": one, "e2": one, "sA": zero, "sB": zero}
    if spec.k == 0:
        return {"a": a_star, "sA": zero, "sB": zero}
    return {"a": a_star, "d": zero, "e": one, "sA": zero, "sB": zero}


def default_step(spec: CaseSpec) -> Fraction:
    return Fraction(1, 16) if len(spec.variables) <= 3 else Fraction(1, 8)


@dataclass(frozen=True)
class OptResult:
    case_id: str
    n: int
    k: int | None
    step: Fraction
    max_value: Fraction
    argmax: tuple[tuple[str, Fraction], ...]
    closed_form: Fraction
    verified: bool
    grid_points: int
    grid_empty: bool
    extremal_value: Fraction
    extremal_feasible: bool

    def to_json(self) -> dict:
        data = {
            "case": self.case_id,
            "n": self.n,
            "step": fmt(self.step),
            "max_value": fmt(self.max_value),
            "argmax": [[var, fmt(v)] for var, v in self.argmax],
            "closed_form": fmt(self.closed_form),
            "verified": self.verified,
            "grid_points": self.grid_points,
            "grid_empty": self.grid_empty,
        }
        if self.k is not None:
            data["k"] = self.k
        return data


def _grid_scaled(lo: Fraction, hi: Fraction, step: Fraction) -> np.ndarray:
    """Scaled values i*step.numerator for all grid multiples of step in
    [lo, hi]; the common denominator is step.denominator."""
    i0 = ceil_frac(lo / step)
    i1 = floor_frac(hi / step)
    if i1 < i0:
        return np.empty(0, dtype=np.int64)
    return np.arange(i0, i1 + 1, dtype=np.int64) * step.numerator


def _ceil_to_grid(lo, p: int, den: int = 1):
    """Smallest grid value (scaled) at or above lo/den, for lo >= 0."""
    return (lo + den * p - 1) // (den * p) * p


def _mesh(arrays: list[np.ndarray]) -> list[np.ndarray]:
    if not arrays:
        return []
    grids = np.meshgrid(*arrays, indexing="ij")
    return [g.ravel() for g in grids]


def grid_maximize(spec: CaseSpec, step: RationalLike | None = None) -> OptResult:
    """Exhaustive exact maximization over the feasible grid.

    All feasible grid points are covered: the data variables are
    enumerated outright and the aggregates sit at their minimal feasible
    grid values, which dominate all others (module docstring).  The
    documented extremal assignment is evaluated exactly on top, so
    attainment does not depend on the extremal point lying on the grid.
    """
    step = rat(step) if step is not None else default_step(spec)
    if step <= 0:
        raise ValueError("step must be positive")
    p = step.numerator
    q = step.denominator
    n = spec.n
    boxes = spec.boxes()
    case = spec.case_id

    if case == FN_CASE2 or (case == GENERAL_K and spec.k == 0):
        outer_vars: tuple[str, ...] = ("a",)
        mesh_vars: tuple[str, ...] = ()
    elif case == RHO3:
        outer_vars, mesh_vars = ("a",), ("d1", "e")
    elif case == RHO4_SUB11:
        outer_vars, mesh_vars = ("a", "d1"), ("d2", "e1", "e2")
    elif case in (*_SHARED_FIBER_CASES, RHO4_SUB22):
        outer_vars, mesh_vars = ("a",), ("d1", "e1", "e2")
    else:
        outer_vars, mesh_vars = ("a",), ("d", "e")

    mesh = _mesh([_grid_scaled(*boxes[v], step) for v in mesh_vars])
    mesh_by_var = dict(zip(mesh_vars, mesh))
    outer_grids = [_grid_scaled(*boxes[v], step) for v in outer_vars]
    cell = mesh[0] if mesh else np.zeros(1, dtype=np.int64)
    agg_box_hi = (4 + n) * q  # common box for both aggregates, scaled

    best_scaled: int | None = None
    best_assign: dict[str, Fraction] | None = None
    grid_points = 0

    for outer in itertools.product(*outer_grids):
        vals = dict(zip(outer_vars, (int(v) for v in outer)))
        a_s = vals["a"]
        # aggregate upper bounds implied by the two pairing constraints
        sa_hi = min(agg_box_hi, 2 * q - a_s)
        sb_hi = min(agg_box_hi, (2 - n) * q + n * a_s)
        if sa_hi < 0 or sb_hi < 0:
            continue

        extra = None
        if not mesh_vars:
            sa_v = np.zeros_like(cell)
            sb_lo = np.zeros_like(cell)
        elif case == RHO3:
            d1, e = mesh_by_var["d1"], mesh_by_var["e"]
            sa_v = _ceil_to_grid(np.maximum(0, q - e - d1), p)
            sb_lo = d1
        elif case == RHO4_SUB11:
            d1_s = vals["d1"]
            d2, e1, e2 = (mesh_by_var[v] for v in ("d2", "e1", "e2"))
            sa_v = _ceil_to_grid(np.maximum(0, np.maximum(q - e1 - d1_s, q - e2 - d2)), p)
            sb_lo = d1_s + d2
        elif case in _SHARED_FIBER_CASES:
            d1, e1, e2 = (mesh_by_var[v] for v in ("d1", "e1", "e2"))
            sa_v = _ceil_to_grid(np.maximum(0, 2 * q - e1 - e2 - 2 * d1), p)
            sb_lo = d1
            extra = ((n - 2) * q + d1 - n * a_s <= 0) & (a_s - 2 * d1 <= 0)
        elif case == RHO4_SUB22:
            d1, e1, e2 = (mesh_by_var[v] for v in ("d1", "e1", "e2"))
            # the bound is half-integral in scaled units, so ceil over 2*p
            sa_v = _ceil_to_grid(np.maximum(0, 2 * q - e1 - e2 - d1), p, 2)
            sb_lo = d1
        else:  # GENERAL_K with k >= 1
            d, e = mesh_by_var["d"], mesh_by_var["e"]
            sa_v = _ceil_to_grid(np.maximum(0, q - e - d), p)
            sb_lo = spec.k * d
        sb_v = _ceil_to_grid(sb_lo, p)

        valid = (sa_v <= sa_hi) & (sb_v <= sb_hi)
        if extra is not None:
            valid &= extra
        if not valid.any():
            continue
        grid_points += int(valid.sum())

        x = a_s + sa_v - 2 * q
        y = (n - 2) * q - n * a_s + sb_v
        v_scaled = n * x * x + 2 * x * y
        for var, weight in spec.e_weights():
            ev = mesh_by_var[var]
            v_scaled = v_scaled - weight * ev * ev
        v_masked = np.where(valid, v_scaled, np.iinfo(np.int64).min)
        idx = int(np.argmax(v_masked))
        vmax = int(v_masked[idx])
        if best_scaled is None or vmax > best_scaled:
            best_scaled = vmax
            best_assign = {v: Fraction(vals[v], q) for v in outer_vars}
            for v in mesh_vars:
                best_assign[v] = Fraction(int(mesh_by_var[v][idx]), q)
            best_assign["sA"] = Fraction(int(sa_v[idx]), q)
            best_assign["sB"] = Fraction(int(sb_v[idx]), q)

    cf = closed_form(spec)
    ext = extremal_assignment(spec)
    ext_val = objective(spec, ext)
    ext_feas = feasible(spec, ext)

    grid_max = Fraction(best_scaled, q * q) if best_scaled is not None else None
    candidates = []
    if grid_max is not None:
        candidates.append(grid_max)
    if ext_feas:
        candidates.append(ext_val)
    if not candidates:
        raise AssertionError(f"no feasible point at all for {spec}")
    max_value = max(candidates)

    if grid_max is not None and grid_max == max_value:
        argmax_src = best_assign
    else:
        argmax_src = ext
    argmax = tuple((v, argmax_src[v]) for v in spec.variables)

    sound = grid_max is None or grid_max <= cf
    attained = max_value == cf
    return OptResult(
        case_id=spec.case_id,
        n=spec.n,
        k=spec.k,
        step=step,
        max_value=max_value,
        argmax=argmax,
        closed_form=cf,
        verified=sound and attained,
        grid_points=grid_points,
        grid_empty=grid_points == 0,
        extremal_value=ext_val,
        extremal_feasible=ext_feas,
    )


@dataclass(frozen=True)
class SweepReport:
    eps: Fraction
    step: Fraction | None
    results: tuple[OptResult, ...]
    all_verified: bool
    global_max: Fraction
    main_bound_value: Fraction
    matches_main_bound: bool
    rho4_distinct_fibers: Fraction
    rho4_same_fiber: Fraction

    def to_json(self) -> dict:
        return {
            "epsilon": fmt(self.eps),
            "step": fmt(self.step) if self.step is not None else None,
            "all_verified": self.all_verified,
            "global_max": fmt(self.global_max),
            "main_bound": fmt(self.main_bound_value),
            "matches_main_bound": self.matches_main_bound,
            "rho4_branches": {
                "distinct_fibers": fmt(self.rho4_distinct_fibers),
                "same_fiber": fmt(self.rho4_same_fiber),
            },
            "results": [r.to_json() for r in self.results],
        }


def admissible_runs(eps: EpsilonLike) -> Iterator[CaseSpec]:
    """Every case at every admissible n (and k for the many-point case).

    The Hirzebruch index is at most floor(2/eps) throughout; the shared
    fiber cases additionally force n <= floor((3+eps)/(2 eps)).
    """
    eps = as_epsilon(eps)
    m = floor_two_over(eps)
    q4 = floor_shared_fiber_index(eps)
    for case_id in CASE_IDS:
        top = q4 if case_id in _SHARED_FIBER_CASES else m
        for n in range(top + 1):
            if case_id == GENERAL_K:
                for k in range(max_points(n) + 1):
                    yield CaseSpec(case_id, n, eps, k)
            else:
                yield CaseSpec(case_id, n, eps)


def verify_all(eps: EpsilonLike, step: RationalLike | None = None) -> SweepReport:
    """Run every admissible case and aggregate pass/fail.

    The report also records the global grid maximum; together with the
    plane (a fixed volume of 9, no optimization involved) it must
    reproduce the main bound.
    """
    eps = as_epsilon(eps)
    results = []
    for spec in admissible_runs(eps):
        results.append(grid_maximize(spec, step))
    global_max = max(r.max_value for r in results)
    main_value = main_bound(eps).value
    rho4 = rho4_bound(eps)
    return SweepReport(
        eps=eps,
        step=rat(step) if step is not None else None,
        results=tuple(results),
        all_verified=all(r.verified for r in results),
        global_max=global_max,
        main_bound_value=main_value,
        matches_main_bound=max(global_max, Fraction(9)) == main_value,
        rho4_distinct_fibers=rho4.branch("distinct_fibers"),
        rho4_same_fiber=rho4.branch("same_fiber"),
    )
