"""Graded barcodes from filtered complexes, endpoint counting, and the
bar-to-orbit assignment machinery.

Bars are half-open action intervals (a, b] with an integer degree; b may
be None for an infinite bar.  ``dim_at(t)`` counts bars with a < t <= b,
which makes the dimension function left-continuous from above at every
endpoint without any special casing.

``barcode_from_filtered_complex`` runs standard column reduction over
the rationals (char 0) or a prime field, with columns ordered by exact
filtration value (ties broken by input order).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    BoundaryNotSquareZero,
    FiltrationViolation,
    ParseError,
    ZetaMismatch,
)
from .exact import ExactReal, SortKey, exact


@dataclass(frozen=True)
class Bar:
    birth: ExactReal
    death: Optional[ExactReal]      # None = infinite bar
    degree: int
    beg: Optional[str] = None       # orbit labels, when assigned
    en: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "birth", exact(self.birth))
        if self.death is not None:
            d = exact(self.death)
            object.__setattr__(self, "death", d)
            if not self.birth < d:
                raise ValueError(
                    f"bar ({self.birth.to_text()}, {d.to_text()}] is empty")

    def covers(self, t: ExactReal) -> bool:
        if not self.birth < t:
            return False
        return self.death is None or t <= self.death

    def to_json(self) -> dict:
        out = {"a": self.birth.to_json(),
               "b": "inf" if self.death is None else self.death.to_json(),
               "deg": self.degree}
        if self.beg is not None:
            out["beg"] = self.beg
        if self.en is not None:
            out["en"] = self.en
        return out

    @staticmethod
    def from_json(obj) -> "Bar":
        death = obj["b"]
        return Bar(ExactReal.from_json(obj["a"]),
                   None if death == "inf" else ExactReal.from_json(death),
                   int(obj["deg"]), obj.get("beg"), obj.get("en"))


@dataclass
class Barcode:
    bars: tuple
    field_char: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bars", tuple(self.bars))
        if self.field_char and not _is_prime(self.field_char):
            raise ValueError(f"field characteristic {self.field_char} "
                             f"must be 0 or prime")

    @property
    def spectrum(self) -> list:
        """Sorted distinct finite endpoints."""
        vals: list[ExactReal] = []
        for bar in self.bars:
            for v in (bar.birth, bar.death):
                if v is not None and all(not (v == w) for w in vals):
                    vals.append(v)
        vals.sort(key=SortKey)
        return vals

    def to_json(self) -> dict:
        return {"field": self.field_char,
                "bars": [b.to_json() for b in self.bars]}

    @staticmethod
    def from_json(obj) -> "Barcode":
        try:
            return Barcode([Bar.from_json(b) for b in obj["bars"]],
                           int(obj.get("field", 0)))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad barcode object: {exc}") from None


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    q = 2
    while q * q <= p:
        if p % q == 0:
            return False
        q += 1 if q == 2 else 2
    return True


@dataclass(frozen=True)
class Generator:
    gid: str
    degree: int
    filtration: ExactReal

    def __post_init__(self):
        object.__setattr__(self, "filtration", exact(self.filtration))


class FilteredComplex:
    """Finite filtered chain complex with integer boundary matrix.

    boundary maps generator id -> {generator id: integer coefficient};
    entries must drop degree by one and never raise filtration.
    """

    def __init__(self, generators, boundary, field_char: int = 0):
        self.generators = [g if isinstance(g, Generator) else Generator(*g)
                           for g in generators]
        ids = [g.gid for g in self.generators]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate generator ids")
        self.by_id = {g.gid: g for g in self.generators}
        self.field_char = field_char
        if field_char and not _is_prime(field_char):
            raise ValueError(f"field characteristic {field_char} must be "
                             f"0 or prime")
        self.boundary = {}
        for cid, col in boundary.items():
            if cid not in self.by_id:
                raise ValueError(f"boundary column for unknown id {cid!r}")
            clean = {}
            for rid, coeff in col.items():
                if rid not in self.by_id:
                    raise ValueError(f"boundary row for unknown id {rid!r}")
                if not isinstance(coeff, int):
                    raise ValueError(f"boundary coefficient {coeff!r} must "
                                     f"be an integer")
                if self.by_id[rid].degree != self.by_id[cid].degree - 1:
                    raise ValueError(
                        f"boundary entry {cid!r}->{rid!r} does not drop "
                        f"degree by one")
                if self.by_id[cid].filtration < self.by_id[rid].filtration:
                    raise FiltrationViolation(
                        f"boundary entry {cid!r}->{rid!r} raises filtration")
                if coeff % field_char if field_char else coeff:
                    clean[rid] = coeff
            if clean:
                self.boundary[cid] = clean
        self._check_square_zero()

    def _check_square_zero(self):
        p = self.field_char
        for cid, col in self.boundary.items():
            acc: dict[str, int] = {}
            for mid, c1 in col.items():
                for rid, c2 in self.boundary.get(mid, {}).items():
                    acc[rid] = acc.get(rid, 0) + c1 * c2
            for rid, total in acc.items():
                if (total % p) if p else total:
                    raise BoundaryNotSquareZero(
                        f"d(d({cid!r})) has coefficient {total} at {rid!r}"
                        + (f" (mod {p})" if p else ""))

    def to_json(self) -> dict:
        return {
            "field": self.field_char,
            "generators": [{"id": g.gid, "degree": g.degree,
                            "filtration": g.filtration.to_json()}
                           for g in self.generators],
            "boundary": {cid: dict(col)
                         for cid, col in self.boundary.items()},
        }

    @staticmethod
    def from_json(obj) -> "FilteredComplex":
        try:
            gens = [Generator(g["id"], int(g["degree"]),
                              ExactReal.from_json(g["filtration"]))
                    for g in obj["generators"]]
            boundary = {cid: {rid: int(c) for rid, c in col.items()}
                        for cid, col in obj.get("boundary", {}).items()}
            return FilteredComplex(gens, boundary, int(obj.get("field", 0)))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad complex object: {exc}") from None


def barcode_from_filtered_complex(cx: FilteredComplex) -> Barcode:
    """Standard persistence column reduction, exact over Q or F_p."""
    p = cx.field_char
    order = sorted(range(len(cx.generators)),
                   key=lambda i: (SortKey(cx.generators[i].filtration), i))
    pos = {cx.generators[i].gid: r for r, i in enumerate(order)}

    def norm(c):
        return c % p if p else Fraction(c)

    cols: dict[int, dict[int, object]] = {}
    for r, i in enumerate(order):
        g = cx.generators[i]
        raw = cx.boundary.get(g.gid, {})
        col = {pos[rid]: norm(c) for rid, c in raw.items()}
        cols[r] = {k: v for k, v in col.items() if v}

    pivots: dict[int, int] = {}  # pivot row -> column
    for j in range(len(order)):
        col = cols[j]
        while col:
            low = max(col)
            if low not in pivots:
                pivots[low] = j
                break
            j2 = cols[pivots[low]]
            if p:
                factor = (col[low] * pow(j2[low], p - 2, p)) % p
            else:
                factor = col[low] / j2[low]
            for r, v in j2.items():
                nv = col.get(r, 0 if p else Fraction(0)) - factor * v
                nv = nv % p if p else nv
                if nv:
                    col[r] = nv
                elif r in col:
                    del col[r]

    bars = []
    paired_rows = set(pivots)
    paired_cols = set(pivots.values())
    for low, j in sorted(pivots.items()):
        gb = cx.generators[order[low]]
        gd = cx.generators[order[j]]
        if gb.filtration < gd.filtration:
            bars.append(Bar(gb.filtration, gd.filtration, gb.degree))
    for j in range(len(order)):
        if j not in paired_cols and j not in paired_rows:
            g = cx.generators[order[j]]
            bars.append(Bar(g.filtration, None, g.degree))
    bars.sort(key=lambda b: (SortKey(b.birth), b.degree,
                             b.death is None,
                             SortKey(b.death if b.death is not None
                                     else b.birth)))
    return Barcode(bars, p)


def dim_at(bc: Barcode, t, m: Optional[int] = None) -> int:
    """Number of bars (of degree m, if given) with birth < t <= death."""
    tt = exact(t)
    return sum(1 for b in bc.bars
               if (m is None or b.degree == m) and b.covers(tt))


def zeta_counts(bc: Barcode, a) -> dict:
    """Per degree m: (bars of degree m-1 ending at a,
    bars of degree m beginning at a, their sum)."""
    aa = exact(a)
    minus: dict[int, int] = {}
    plus: dict[int, int] = {}
    for b in bc.bars:
        if b.death is not None and b.death == aa:
            minus[b.degree + 1] = minus.get(b.degree + 1, 0) + 1
        if b.birth == aa:
            plus[b.degree] = plus.get(b.degree, 0) + 1
    out = {}
    for m in sorted(set(minus) | set(plus)):
        zm = minus.get(m, 0)
        zp = plus.get(m, 0)
        out[m] = (zm, zp, zm + zp)
    return out


@dataclass(frozen=True)
class OrbitHomology:
    """Declared local homology of one orbit record at one action value."""

    label: str
    action: ExactReal
    dims: dict                      # degree -> dimension
    mu_minus: Optional[int] = None
    mu_plus: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "action", exact(self.action))


@dataclass
class AssignmentReport:
    pairs: list      # (bar, beg OrbitHomology, en OrbitHomology or None)
    items: list      # AuditItem-like dicts for the index checks

    @property
    def ok(self) -> bool:
        return all(it["ok"] for it in self.items)


def beg_end_assignment(bc: Barcode, orbit_homology) -> AssignmentReport:
    """Assign to every bar a begin orbit (carrying the bar's degree at its
    birth action) and, for finite bars, an end orbit (carrying degree+1
    at the death action), consuming declared dimensions exactly once.

    Raises ZetaMismatch when the bar endpoint counts disagree with the
    declared dimensions anywhere; otherwise returns the assignment plus
    an index-gap report (mu-(en) - mu+(beg) <= 2, with degree pinned at
    equality) for records that declare mu data.
    """
    records = list(orbit_homology)
    # demand: (action, m) -> count of endpoint uses among bars
    demand: dict[tuple, int] = {}
    for b in bc.bars:
        demand[(b.birth, b.degree)] = demand.get((b.birth, b.degree), 0) + 1
        if b.death is not None:
            key = (b.death, b.degree + 1)
            demand[key] = demand.get(key, 0) + 1
    supply: dict[tuple, int] = {}
    for r in records:
        for m, dim in r.dims.items():
            if dim < 0:
                raise ValueError(f"negative dimension in record {r.label}")
            if dim:
                key = (r.action, m)
                supply[key] = supply.get(key, 0) + dim
    for key in sorted(set(demand) | set(supply),
                      key=lambda k: (SortKey(k[0]), k[1])):
        dm = demand.get(key, 0)
        sp = supply.get(key, 0)
        if dm != sp:
            a, m = key
            raise ZetaMismatch(
                f"at action {a.to_text()}, degree {m}: bars need {dm} "
                f"endpoint slots but records declare {sp}")
    # deterministic consumption order
    slots: dict[tuple, list] = {}
    for r in records:
        for m, dim in sorted(r.dims.items()):
            slots.setdefault((r.action, m), []).extend([r] * dim)
    bar_order = sorted(
        range(len(bc.bars)),
        key=lambda i: (SortKey(bc.bars[i].birth), bc.bars[i].degree,
                       bc.bars[i].death is None,
                       SortKey(bc.bars[i].death
                               if bc.bars[i].death is not None
                               else bc.bars[i].birth), i))
    pairs = [None] * len(bc.bars)
    items = []
    for i in bar_order:
        b = bc.bars[i]
        beg = slots[(b.birth, b.degree)].pop(0)
        en = None
        if b.death is not None:
            en = slots[(b.death, b.degree + 1)].pop(0)
        pairs[i] = (b, beg, en)
        if en is not None and beg.mu_plus is not None \
                and en.mu_minus is not None:
            gap = en.mu_minus - beg.mu_plus
            ok = gap <= 2
            detail = f"mu-(en)-mu+(beg) = {gap}"
            if ok and gap == 2:
                ok = b.degree == beg.mu_plus + 1 == en.mu_minus - 1
                detail += (f"; equality forces degree {beg.mu_plus + 1}, "
                           f"bar has {b.degree}")
            items.append({"name": "index-gap",
                          "label": f"{beg.label}->{en.label}",
                          "ok": ok, "detail": detail})
    return AssignmentReport(pairs, items)


def rational_between(a: ExactReal, b: ExactReal) -> ExactReal:
    """A rational strictly between a < b, found on the dyadic grid."""
    if not a < b:
        raise ValueError("need a < b")
    for j in range(0, 240):
        scale = 1 << j
        m = (a * scale).floor() + 1
        cand = ExactReal(m, 0, scale)
        if a < cand < b:
            return cand
    raise ValueError("no dyadic rational found between bounds")


@dataclass
class AuditOptions:
    half_dim_n: Optional[int] = None        # n in the Euler sign (-1)^n
    euler_char: Optional[int] = None        # expected chi / (-1)^n
    boundary_depth_cap: Optional[ExactReal] = None
    vanishing: bool = False                 # infinite bars forbidden if True
    primes: tuple = ()
    window_top: Optional[ExactReal] = None  # truncation bound of the barcode
    intercluster_floor: Optional[ExactReal] = None
    cluster_of: Optional[dict] = None       # orbit label -> cluster id
    sample_points: Optional[list] = None

    def __post_init__(self):
        for name in ("boundary_depth_cap", "window_top", "intercluster_floor"):
            v = getattr(self, name)
            if v is not None:
                setattr(self, name, exact(v))


@dataclass
class BarcodeAuditReport:
    items: list

    @property
    def ok(self) -> bool:
        return all(it["ok"] for it in self.items)

    @property
    def failures(self) -> list:
        return [it for it in self.items if not it["ok"]]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": len(self.items),
                "failures": self.failures}


def _default_samples(bc: Barcode, top: Optional[ExactReal]):
    points = bc.spectrum
    if top is not None:
        points = [s for s in points if s <= top]
    samples = []
    prev = None
    for s in points:
        if prev is None:
            if s.sign() > 0:
                samples.append(rational_between(exact(0), s))
        else:
            samples.append(rational_between(prev, s))
        samples.append(s)
        prev = s
    if prev is not None and top is None:
        samples.append(prev + 1)
    if bc.bars:
        # below every birth the truncation is empty; nothing to check there
        first = min((b.birth for b in bc.bars), key=SortKey)
        samples = [t for t in samples if first < t]
    return samples


def barcode_audit(bc: Barcode, options: Optional[AuditOptions] = None
                  ) -> BarcodeAuditReport:
    """Structural invariants of a barcode; reports, never raises."""
    opts = options or AuditOptions()
    items = []
    push = items.append
    samples = opts.sample_points
    if samples is None:
        samples = _default_samples(bc, opts.window_top)
    samples = [exact(s) for s in samples]
    # vanishing: no infinite bars allowed
    inf_bars = [b for b in bc.bars if b.death is None]
    if opts.vanishing:
        push({"name": "vanishing", "label": "barcode", "ok": not inf_bars,
              "detail": f"{len(inf_bars)} infinite bar(s) despite declared "
                        f"vanishing"})
    # boundary depth
    if opts.boundary_depth_cap is not None:
        cap = opts.boundary_depth_cap
        ok = True
        detail = ""
        for b in bc.bars:
            if b.death is None:
                continue
            if not b.death <= b.birth + cap:
                ok = False
                detail = (f"bar ({b.birth.to_text()}, {b.death.to_text()}] "
                          f"longer than {cap.to_text()}")
                break
        push({"name": "boundary-depth", "label": "barcode", "ok": ok,
              "detail": detail})
    # Euler profile
    if opts.euler_char is not None and opts.half_dim_n is not None:
        want = (-1) ** opts.half_dim_n * opts.euler_char
        ok = True
        detail = ""
        for t in samples:
            got = sum((-1) ** b.degree for b in bc.bars if b.covers(t))
            if got != want:
                ok = False
                detail = f"chi at t={float(t):.6g}: {got} != {want}"
                break
        push({"name": "euler", "label": "barcode", "ok": ok,
              "detail": detail})
    # Smith inequality under multiplication by p
    for p in opts.primes:
        ok = True
        detail = ""
        for t in samples:
            pt = t * p
            if opts.window_top is not None and not pt <= opts.window_top:
                continue
            if dim_at(bc, pt) < dim_at(bc, t):
                ok = False
                detail = (f"dim at {float(pt):.6g} = {dim_at(bc, pt)} < "
                          f"dim at {float(t):.6g} = {dim_at(bc, t)}")
                break
        push({"name": f"smith-p{p}", "label": "barcode", "ok": ok,
              "detail": detail})
    # inter-cluster bars above the action floor
    if opts.intercluster_floor is not None and opts.cluster_of:
        ok = True
        detail = ""
        for b in bc.bars:
            if b.birth > opts.intercluster_floor and b.beg and b.en:
                cb = opts.cluster_of.get(b.beg)
                ce = opts.cluster_of.get(b.en)
                if cb is not None and ce is not None and cb != ce:
                    ok = False
                    detail = (f"bar at {float(b.birth):.6g} joins clusters "
                              f"{cb} and {ce}")
                    break
        push({"name": "intercluster", "label": "barcode", "ok": ok,
              "detail": detail})
    return BarcodeAuditReport(items)
