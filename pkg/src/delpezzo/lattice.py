"""Exact Picard-lattice arithmetic for rational surfaces.

Two families of surfaces are modelled:

* the projective plane, with Picard basis ``l`` (a line) and ``l.l = 1``;
* a Hirzebruch surface of index ``n`` blown up at ``k`` points, with ordered
  basis ``h, f, e1, ..., ek`` and intersection form

      h.h = n,  h.f = 1,  f.f = 0,  ei.ei = -1,

  all other products zero.  Here ``h`` is the tautological class, ``f`` a
  fiber, and each ``ei`` the total transform of the exceptional divisor of
  the i-th blow-up, so the ``ei`` are mutually orthogonal even for
  infinitely near centers.

All coefficients are exact ``Fraction`` values and every operation below is
a pure function on immutable data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ._rational import fmt, rat, RationalLike

P2 = "P2"
FN = "Fn"


class SurfaceMismatchError(ValueError):
    """Raised when classes on different surfaces are combined."""


@dataclass(frozen=True)
class SurfaceModel:
    """A fixed basis of the Picard lattice of a rational surface.

    ``kind`` is ``"P2"`` or ``"Fn"``.  For ``"Fn"``, ``n >= 0`` is the
    Hirzebruch index and ``k >= 0`` the number of blown-up points; the
    Picard rank is ``k + 2``.  For ``"P2"`` the rank is 1 and ``n``/``k``
    are unused.
    """

    kind: str
    n: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (P2, FN):
            raise ValueError(f"unknown surface kind {self.kind!r}")
        if self.kind == P2 and (self.n != 0 or self.k != 0):
            raise ValueError("the projective plane takes no n or k")
        if self.n < 0 or self.k < 0:
            raise ValueError("n and k must be non-negative")

    @property
    def rho(self) -> int:
        return 1 if self.kind == P2 else self.k + 2

    @property
    def basis(self) -> tuple[str, ...]:
        if self.kind == P2:
            return ("l",)
        return ("h", "f") + tuple(f"e{i}" for i in range(1, self.k + 1))

    def gram(self, i: int, j: int) -> Fraction:
        """Intersection number of the i-th and j-th basis classes."""
        if self.kind == P2:
            return Fraction(1)
        if i > j:
            i, j = j, i
        if i == 0 and j == 0:
            return Fraction(self.n)
        if i == 0 and j == 1:
            return Fraction(1)
        if i == 1 and j == 1:
            return Fraction(0)
        if i >= 2 or j >= 2:
            if i == j:
                return Fraction(-1)
            return Fraction(0)
        raise AssertionError

    def descriptor(self) -> dict:
        if self.kind == P2:
            return {"kind": P2}
        return {"kind": FN, "n": self.n, "k": self.k}

    @staticmethod
    def from_descriptor(data: dict) -> "SurfaceModel":
        kind = data.get("kind")
        if kind == P2:
            return SurfaceModel(P2)
        if kind == FN:
            return SurfaceModel(FN, n=int(data["n"]), k=int(data.get("k", 0)))
        raise ValueError(f"bad surface descriptor: {data!r}")


def projective_plane() -> SurfaceModel:
    return SurfaceModel(P2)


def hirzebruch(n: int, k: int = 0) -> SurfaceModel:
    return SurfaceModel(FN, n=n, k=k)


@dataclass(frozen=True)
class DivisorClass:
    """A divisor class, stored as its coefficient vector over the basis."""

    surface: SurfaceModel
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.surface.rho:
            raise ValueError(
                f"expected {self.surface.rho} coefficients, got {len(self.coeffs)}"
            )
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _require_same_surface(self, other)
        return DivisorClass(
            self.surface, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        _require_same_surface(self, other)
        return DivisorClass(
            self.surface, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.surface, tuple(-a for a in self.coeffs))

    def __mul__(self, scalar: RationalLike) -> "DivisorClass":
        s = rat(scalar)
        return DivisorClass(self.surface, tuple(s * a for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __str__(self) -> str:
        terms = [
            f"{fmt(c)}*{name}"
            for c, name in zip(self.coeffs, self.surface.basis)
            if c != 0
        ]
        return " + ".join(terms) if terms else "0"


def _require_same_surface(a: DivisorClass, b: DivisorClass) -> None:
    if a.surface != b.surface:
        raise SurfaceMismatchError(
            f"classes live on different surfaces: {a.surface} vs {b.surface}"
        )


def divisor(surface: SurfaceModel, coeffs: Iterable[RationalLike]) -> DivisorClass:
    return DivisorClass(surface, tuple(rat(c) for c in coeffs))


def zero(surface: SurfaceModel) -> DivisorClass:
    return DivisorClass(surface, (Fraction(0),) * surface.rho)


def basis_class(surface: SurfaceModel, index: int) -> DivisorClass:
    coeffs = [Fraction(0)] * surface.rho
    coeffs[index] = Fraction(1)
    return DivisorClass(surface, tuple(coeffs))


def line_class(surface: SurfaceModel) -> DivisorClass:
    if surface.kind != P2:
        raise ValueError("line class only lives on the projective plane")
    return basis_class(surface, 0)


def h_class(surface: SurfaceModel) -> DivisorClass:
    return basis_class(surface, 0)


def f_class(surface: SurfaceModel) -> DivisorClass:
    if surface.kind != FN:
        raise ValueError("fiber class only lives on a Hirzebruch model")
    return basis_class(surface, 1)


def e_class(surface: SurfaceModel, i: int) -> DivisorClass:
    """Total-transform class of the exceptional divisor over the i-th point."""
    if surface.kind != FN or not 1 <= i <= surface.k:
        raise ValueError(f"no exceptional class e{i} on {surface}")
    return basis_class(surface, 1 + i)


def section_class(surface: SurfaceModel) -> DivisorClass:
    """The class h - n*f of the negative section (h itself when n = 0)."""
    if surface.kind != FN:
        raise ValueError("section class only lives on a Hirzebruch model")
    coeffs = [Fraction(1), Fraction(-surface.n)] + [Fraction(0)] * surface.k
    return DivisorClass(surface, tuple(coeffs))


def pair(d1: DivisorClass, d2: DivisorClass) -> Fraction:
    """Intersection number of two divisor classes on the same surface."""
    _require_same_surface(d1, d2)
    s = d1.surface
    if s.kind == P2:
        return d1.coeffs[0] * d2.coeffs[0]
    a, b = d1.coeffs, d2.coeffs
    total = s.n * a[0] * b[0] + a[0] * b[1] + a[1] * b[0]
    for i in range(2, s.rho):
        total -= a[i] * b[i]
    return total


def canonical_class(surface: SurfaceModel) -> DivisorClass:
    """The canonical class: -3l on the plane, -2h + (n-2)f + sum(ei) otherwise.

    The Hirzebruch form is pinned down by adjunction (K.f = -2 and
    (K + S).S = -2 for the negative section S) together with the usual
    K_X = pullback(K) + sum of exceptionals under point blow-ups.
    """
    if surface.kind == P2:
        return DivisorClass(surface, (Fraction(-3),))
    coeffs = [Fraction(-2), Fraction(surface.n - 2)] + [Fraction(1)] * surface.k
    return DivisorClass(surface, tuple(coeffs))


def _check_refinement(small: SurfaceModel, big: SurfaceModel) -> None:
    if small.kind != big.kind:
        raise SurfaceMismatchError(f"{big} does not refine {small}")
    if small.kind == P2:
        return
    if small.n != big.n or big.k < small.k:
        raise SurfaceMismatchError(f"{big} does not refine {small}")


def pullback(d: DivisorClass, to: SurfaceModel) -> DivisorClass:
    """Total transform under further point blow-ups.

    Existing coefficients are kept and the new exceptional coefficients are
    zero, so the pairing of pulled-back classes is preserved.
    """
    _check_refinement(d.surface, to)
    extra = to.rho - d.surface.rho
    return DivisorClass(d.surface if extra == 0 else to, d.coeffs + (Fraction(0),) * extra)


def pushforward(d: DivisorClass, to: SurfaceModel) -> DivisorClass:
    """Drop exceptional coordinates; the projection formula
    pair(pullback(A), D) = pair(A, pushforward(D)) holds exactly."""
    _check_refinement(to, d.surface)
    return DivisorClass(to, d.coeffs[: to.rho])


def gram_matrix(surface: SurfaceModel) -> list[list[Fraction]]:
    r = surface.rho
    return [[surface.gram(i, j) for j in range(r)] for i in range(r)]


def signature(surface: SurfaceModel) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of the intersection form.

    Computed by symmetric Gaussian elimination over the rationals, so the
    answer is exact.  Every surface here has signature (1, rho - 1, 0).
    """
    m = [row[:] for row in gram_matrix(surface)]
    r = len(m)
    pos = neg = zer = 0
    row = 0
    while row < r:
        if m[row][row] == 0:
            swap = next((j for j in range(row + 1, r) if m[j][row] != 0), None)
            if swap is None:
                zer += 1
                row += 1
                continue
            # symmetric "add row j" trick restores a nonzero pivot
            for t in range(r):
                m[row][t] += m[swap][t]
            for t in range(r):
                m[t][row] += m[t][swap]
        pivot = m[row][row]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        for j in range(row + 1, r):
            factor = m[j][row] / pivot
            if factor == 0:
                continue
            for t in range(r):
                m[j][t] -= factor * m[row][t]
            for t in range(r):
                m[t][j] -= factor * m[t][row]
        row += 1
    return pos, neg, zer


def divisor_to_json(d: DivisorClass) -> dict:
    return {
        "surface": d.surface.descriptor(),
        "coeffs": [fmt(c) for c in d.coeffs],
    }


def divisor_from_json(data: dict) -> DivisorClass:
    surface = SurfaceModel.from_descriptor(data["surface"])
    return DivisorClass(surface, tuple(rat(c) for c in data["coeffs"]))
