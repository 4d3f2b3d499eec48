"""Symbolic paths in the covering of the linear symplectic group.

A path is a loop shift plus an ordered list of elementary blocks:

* ``Rotation(lam)``: elliptic pair with signed rotation number ``lam``,
  ``lam`` not an integer (integer rotations are loops, recorded in the
  shift).  The sign of ``lam`` records the Krein-first choice.
* ``Hyperbolic(h, negative)``: real hyperbolic pair carrying its integer
  index ``h``; ``h`` is odd exactly when the eigenvalues are negative.
* ``Shear(form, size)``: unipotent block, mean index 0, all end-map
  eigenvalues 1.  Forms: ``zero`` (identity part, ``size`` = half-dim
  contribution), ``q0`` (odd ``size``), ``qplus``, ``qminus``.

Everything is immutable; iteration and direct sum are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import ParseError
from .exact import ExactReal, exact

SHEAR_FORMS = ("zero", "q0", "qplus", "qminus")


@dataclass(frozen=True)
class Rotation:
    lam: ExactReal

    def __post_init__(self):
        lam = exact(self.lam)
        object.__setattr__(self, "lam", lam)
        if lam.guard is None and lam.is_integer():
            raise ValueError(
                f"rotation number {lam.to_text()} is an integer: "
                f"absorb it into the loop shift")
        if not lam:
            raise ValueError("rotation number must be nonzero")

    @property
    def half_dim(self) -> int:
        return 1


@dataclass(frozen=True)
class Hyperbolic:
    h: int
    negative: bool = False

    def __post_init__(self):
        if not isinstance(self.h, int):
            raise ValueError(f"hyperbolic index must be an integer, got {self.h!r}")
        if (self.h % 2 == 1) != self.negative:
            raise ValueError(
                f"hyperbolic block h={self.h} negative={self.negative}: "
                f"h must be odd exactly when the eigenvalues are negative")

    @property
    def half_dim(self) -> int:
        return 1


@dataclass(frozen=True)
class Shear:
    form: str
    size: int = 1

    def __post_init__(self):
        if self.form not in SHEAR_FORMS:
            raise ValueError(f"unknown shear form {self.form!r}")
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"shear size must be a positive integer, got {self.size!r}")
        if self.form == "q0" and self.size % 2 == 0:
            raise ValueError("q0 shear size must be odd")

    @property
    def half_dim(self) -> int:
        return self.size


Block = Rotation | Hyperbolic | Shear


@dataclass(frozen=True)
class BlockPath:
    loop: int = 0
    blocks: tuple[Block, ...] = ()

    def __post_init__(self):
        if not isinstance(self.loop, int):
            raise ValueError(f"loop shift must be an integer, got {self.loop!r}")
        blocks = tuple(self.blocks)
        for b in blocks:
            if not isinstance(b, (Rotation, Hyperbolic, Shear)):
                raise ValueError(f"not an elementary block: {b!r}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def half_dim(self) -> int:
        return sum(b.half_dim for b in self.blocks)

    @property
    def dimension(self) -> int:
        return 2 * self.half_dim

    def rotations(self):
        return [b for b in self.blocks if isinstance(b, Rotation)]

    def to_json(self) -> dict:
        out = []
        for b in self.blocks:
            if isinstance(b, Rotation):
                out.append({"type": "rotation", "lambda": b.lam.to_json()})
            elif isinstance(b, Hyperbolic):
                out.append({"type": "hyperbolic", "h": b.h, "neg": b.negative})
            else:
                key = "count" if b.form == "zero" else "d"
                out.append({"type": "shear", "form": b.form, key: b.size})
        return {"loop": self.loop, "blocks": out}

    @staticmethod
    def from_json(obj) -> "BlockPath":
        if not isinstance(obj, dict) or "blocks" not in obj:
            raise ParseError(f"not a block path object: {obj!r}")
        blocks = []
        for raw in obj["blocks"]:
            try:
                t = raw["type"]
                if t == "rotation":
                    blocks.append(Rotation(ExactReal.from_json(raw["lambda"])))
                elif t == "hyperbolic":
                    blocks.append(Hyperbolic(int(raw["h"]), bool(raw["neg"])))
                elif t == "shear":
                    form = raw["form"]
                    size = raw["count"] if form == "zero" else raw["d"]
                    blocks.append(Shear(form, int(size)))
                else:
                    raise ParseError(f"unknown block type {t!r}")
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad block {raw!r}: {exc}") from None
        try:
            loop = int(obj.get("loop", 0))
        except (TypeError, ValueError):
            raise ParseError(f"bad loop shift {obj.get('loop')!r}") from None
        return BlockPath(loop, tuple(blocks))


@dataclass(frozen=True)
class EigenSummary:
    """End-map eigenvalue report for the k-th iterate."""

    ones_algebraic: int
    ones_geometric: int
    minus_ones: int
    in_minus_one_zero: int
    elliptic: tuple            # (rotation residue in (0,1), Krein sign) pairs
    hyperbolic_pairs: int
    hyperbolic_negative_pairs: int
    nu0: int
    b0: int
    bplus: int
    bminus: int
    degenerate: bool


def direct_sum(p1: BlockPath, p2: BlockPath) -> BlockPath:
    return BlockPath(p1.loop + p2.loop, p1.blocks + p2.blocks)


def iterate(path: BlockPath, k: int) -> BlockPath:
    """k-th power in the covering group, k >= 1.

    Rotations whose k-th rotation number lands on an integer c demote to a
    unit ``zero`` shear while c moves into the loop shift, so the mean
    index still scales exactly by k and further iteration composes.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"iterate power must be a positive integer, got {k!r}")
    loop = k * path.loop
    blocks = []
    for b in path.blocks:
        if isinstance(b, Rotation):
            t = b.lam * k
            if t.is_integer():  # PrecisionError near guard boundaries
                loop += t.floor()
                blocks.append(Shear("zero", 1))
            else:
                blocks.append(Rotation(t))
        elif isinstance(b, Hyperbolic):
            blocks.append(Hyperbolic(k * b.h, b.negative and k % 2 == 1))
        else:
            blocks.append(b)
    return BlockPath(loop, tuple(blocks))


def eigenvalue_summary(path: BlockPath, k: int = 1) -> EigenSummary:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"power must be a positive integer, got {k!r}")
    ones_alg = 0
    minus = 0
    in_mo = 0
    elliptic = []
    hyp = hyp_neg = 0
    nu0 = b0 = bp = bm = 0
    half = exact(Fraction(1, 2))
    for b in path.blocks:
        if isinstance(b, Rotation):
            t = b.lam * k
            if t.is_integer():
                nu0 += 1
                ones_alg += 2
                continue
            f = t.frac()
            if f == half:
                minus += 2
            else:
                elliptic.append((f, t.sign()))
        elif isinstance(b, Hyperbolic):
            hyp += 1
            if b.negative and k % 2 == 1:
                hyp_neg += 1
                in_mo += 1
        else:
            ones_alg += 2 * b.size
            if b.form == "zero":
                nu0 += b.size
            elif b.form == "q0":
                b0 += 1
            elif b.form == "qplus":
                bp += 1
            else:
                bm += 1
    ones_geo = 2 * (nu0 + b0) + bp + bm
    return EigenSummary(
        ones_algebraic=ones_alg,
        ones_geometric=ones_geo,
        minus_ones=minus,
        in_minus_one_zero=in_mo,
        elliptic=tuple(elliptic),
        hyperbolic_pairs=hyp,
        hyperbolic_negative_pairs=hyp_neg,
        nu0=nu0,
        b0=b0,
        bplus=bp,
        bminus=bm,
        degenerate=ones_alg > 0,
    )


def rational_rotation_denominators(path: BlockPath) -> list[int]:
    """Denominators q >= 2 of rational rotation numbers among the blocks."""
    out = []
    for b in path.blocks:
        if isinstance(b, Rotation) and b.lam.guard is None and b.lam.is_rational():
            out.append(b.lam.as_fraction().denominator)
    return out


def root_of_unity_lcm(path: BlockPath) -> int:
    """lcm of root-of-unity degrees among the end-map eigenvalues (D)."""
    dens = rational_rotation_denominators(path)
    return lcm(*dens) if dens else 1


def is_admissible(path: BlockPath, k: int) -> bool:
    """True iff k is divisible by no rational rotation denominator.

    Quadratic-irrational rotation numbers never contribute; guarded
    decimals are treated as irrational (rationality is not decidable
    within a guard).
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"power must be a positive integer, got {k!r}")
    return all(k % q for q in rational_rotation_denominators(path))
