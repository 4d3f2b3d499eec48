"""Index invariants of block paths and their iterates.

Per-block contributions at power k (loop shift s adds 2sk throughout):

* rotation lam, k*lam not integer:  sign(k*lam) * (2*floor|k*lam| + 1)
* rotation lam, k*lam = c integer:  degenerate, contributes 2c to the
  mean-index part of the totally degenerate piece and 1 to nu0
* hyperbolic h:                     k*h
* shears:                           0, all bookkeeping goes to beta

mu_minus = S - beta_minus and mu_plus = S + beta_plus, where S collects
the nondegenerate contributions plus the degenerate mean-index part and
beta_pm = nu0 + b0 + b_pm of the totally degenerate piece.

Hot paths run on a compiled integer kernel per path (no ExactReal
allocation inside the k loop) so million-iterate sweeps stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .blockpaths import BlockPath, Hyperbolic, Rotation
from .errors import DegenerateIterate
from .exact import ExactReal, exact, qfloor


@dataclass(frozen=True)
class IndexBundle:
    mean_index: ExactReal
    cz: Optional[int]          # present iff the iterate is nondegenerate
    mu_minus: int
    mu_plus: int
    nu0: int
    b0: int
    bplus: int
    bminus: int
    half_dim: int
    k: int

    @property
    def beta_plus(self) -> int:
        return self.nu0 + self.b0 + self.bplus

    @property
    def beta_minus(self) -> int:
        return self.nu0 + self.b0 + self.bminus

    @property
    def degenerate(self) -> bool:
        return self.cz is None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "meanIndex": self.mean_index.to_json(),
            "czIndex": self.cz,
            "muMinus": self.mu_minus,
            "muPlus": self.mu_plus,
            "nu0": self.nu0,
            "b0": self.b0,
            "bPlus": self.bplus,
            "bMinus": self.bminus,
            "betaPlus": self.beta_plus,
            "betaMinus": self.beta_minus,
            "halfDim": self.half_dim,
        }


class PathKernel:
    """Compiled integer view of a path for fast per-k index queries."""

    __slots__ = ("srot", "qrot", "grot", "hyp_sum", "loop", "nu0_s", "b0",
                 "bplus", "bminus", "half_dim", "has_shear", "path")

    def __init__(self, path: BlockPath):
        self.path = path
        self.srot = []   # (p, q) rational rotations, q >= 2
        self.qrot = []   # (num, rad, den, d, sign) quadratic rotations
        self.grot = []   # guarded-decimal rotations, slow path
        self.hyp_sum = 0
        self.loop = path.loop
        self.nu0_s = self.b0 = self.bplus = self.bminus = 0
        for b in path.blocks:
            if isinstance(b, Rotation):
                lam = b.lam
                if lam.guard is not None:
                    self.grot.append(lam)
                elif lam.rad == 0:
                    self.srot.append((lam.num, lam.den))
                else:
                    self.qrot.append((lam.num, lam.rad, lam.den, lam.d,
                                      lam.sign()))
            elif isinstance(b, Hyperbolic):
                self.hyp_sum += b.h
            else:
                if b.form == "zero":
                    self.nu0_s += b.size
                elif b.form == "q0":
                    self.b0 += 1
                elif b.form == "qplus":
                    self.bplus += 1
                else:
                    self.bminus += 1
        self.half_dim = path.half_dim
        self.has_shear = (self.nu0_s + self.b0 + self.bplus + self.bminus) > 0

    def parts(self, k: int):
        """(nondegenerate mu sum + degenerate mean part, extra nu0 at k)."""
        s = 2 * self.loop * k + self.hyp_sum * k
        nu0_extra = 0
        for p, q in self.srot:
            t2 = k * p
            c, r = divmod(t2, q)
            if r == 0:
                s += 2 * c
                nu0_extra += 1
            elif t2 > 0:
                s += 2 * (t2 // q) + 1
            else:
                s -= 2 * (-t2 // q) + 1
        for num, rad, den, d, sgn in self.qrot:
            if sgn > 0:
                s += 2 * qfloor(k * num, k * rad, den, d) + 1
            else:
                s -= 2 * qfloor(-k * num, -k * rad, den, d) + 1
        for lam in self.grot:
            t = lam * k
            if t.is_integer():  # raises PrecisionError inside guard
                s += 2 * t.floor()
                nu0_extra += 1
            elif t.sign() > 0:
                s += 2 * t.floor() + 1
            else:
                s -= 2 * (-t).floor() + 1
        return s, nu0_extra

    def mu_pm(self, k: int) -> tuple[int, int]:
        s, nx = self.parts(k)
        nu0 = nx + self.nu0_s
        return (s - (nu0 + self.b0 + self.bminus),
                s + (nu0 + self.b0 + self.bplus))

    def mu_minus(self, k: int) -> int:
        s, nx = self.parts(k)
        return s - (nx + self.nu0_s + self.b0 + self.bminus)

    def cz(self, k: int) -> int:
        s, nx = self.parts(k)
        if nx or self.has_shear:
            raise DegenerateIterate(
                f"iterate {k} of {self.path!r} has eigenvalue 1")
        return s

    def degenerate_at(self, k: int) -> bool:
        if self.has_shear:
            return True
        _, nx = self.parts(k)
        return nx > 0

    def mean_index(self) -> ExactReal:
        total = exact(2 * self.loop + self.hyp_sum)
        for p, q in self.srot:
            total = total + ExactReal(2 * p, 0, q)
        for num, rad, den, d, _ in self.qrot:
            total = total + ExactReal(2 * num, 2 * rad, den, d)
        for lam in self.grot:
            total = total + lam * 2
        return total

    def bundle(self, k: int) -> IndexBundle:
        s, nx = self.parts(k)
        nu0 = nx + self.nu0_s
        degen = nx > 0 or self.has_shear
        return IndexBundle(
            mean_index=self.mean_index() * k,
            cz=None if degen else s,
            mu_minus=s - (nu0 + self.b0 + self.bminus),
            mu_plus=s + (nu0 + self.b0 + self.bplus),
            nu0=nu0,
            b0=self.b0,
            bplus=self.bplus,
            bminus=self.bminus,
            half_dim=self.half_dim,
            k=k,
        )


@lru_cache(maxsize=4096)
def kernel(path: BlockPath) -> PathKernel:
    return PathKernel(path)


def _check_k(k):
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"power must be a positive integer, got {k!r}")


def mean_index(path: BlockPath) -> ExactReal:
    return kernel(path).mean_index()


def cz_index(path: BlockPath, k: int = 1) -> int:
    _check_k(k)
    return kernel(path).cz(k)


def mu_pm(path: BlockPath, k: int = 1) -> tuple[int, int]:
    _check_k(k)
    return kernel(path).mu_pm(k)


def beta_invariants(path: BlockPath, k: int = 1) -> tuple[int, int, int, int]:
    """(nu0, b0, bplus, bminus) of the totally degenerate part at power k."""
    _check_k(k)
    ker = kernel(path)
    _, nx = ker.parts(k)
    return (nx + ker.nu0_s, ker.b0, ker.bplus, ker.bminus)


def index_bundle(path: BlockPath, k: int = 1) -> IndexBundle:
    _check_k(k)
    return kernel(path).bundle(k)


def is_dynamically_convex(path: BlockPath) -> bool:
    return kernel(path).mu_minus(1) >= path.half_dim + 2


@dataclass(frozen=True)
class DCReport:
    dc: bool
    ok: bool
    first_violation: Optional[dict]
    k_max: int


def dc_iteration_check(path: BlockPath, k_max: int) -> DCReport:
    """Superadditivity sweep of mu_minus over iterates.

    Checks mu-(k+1) >= mu-(k) + (mu-(1) - m) for k < k_max and, when the
    path is dynamically convex, mu-(k) >= 2k + m for k <= k_max.
    """
    _check_k(k_max)
    ker = kernel(path)
    m = path.half_dim
    mu1 = ker.mu_minus(1)
    dc = mu1 >= m + 2
    prev = mu1
    for k in range(1, k_max + 1):
        cur = prev if k == 1 else ker.mu_minus(k)
        if k > 1 and cur < prev + (mu1 - m):
            return DCReport(dc, False, {
                "check": "superadditive", "k": k,
                "mu_minus": cur, "prev": prev, "slack": mu1 - m}, k_max)
        if dc and cur < 2 * k + m:
            return DCReport(dc, False, {
                "check": "dc-growth", "k": k, "mu_minus": cur,
                "bound": 2 * k + m}, k_max)
        prev = cur
    return DCReport(dc, True, None, k_max)
