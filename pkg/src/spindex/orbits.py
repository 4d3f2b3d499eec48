"""Closed-orbit classification, local homology supports, ellipsoid model
systems, staircase barcodes, degree-shift prediction, and the
multiplicity and comparison audits driven by recurrence events.

Conventions: an ellipsoid with semi-axis parameters D1 < ... < Dn is
recorded through its n prime orbits; orbit j has action Dj and path
loop-shift 1 plus one rotation Dj/Di for each i != j, so its indices
are mu(yj^k) = 2k + (n-1) + 2*sum floor(k Dj/Di) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappop, heappush
from math import factorial, lcm
from typing import Optional

from .blockpaths import (
    BlockPath,
    Hyperbolic,
    Rotation,
    Shear,
    is_admissible,
    iterate,
    rational_rotation_denominators,
    root_of_unity_lcm,
)
from .errors import (
    ChieqUndefined,
    ClassificationUndefined,
    EventMismatch,
    HypothesisViolation,
    NonResonanceFailed,
    NotApplicable,
    RationalRatio,
)
from .exact import ExactReal, SortKey, exact
from .indices import cz_index, kernel, mean_index, mu_pm
from .persistence import Bar, Barcode, OrbitHomology, beg_end_assignment
from .recurrence import (
    AuditItem,
    Orbit,
    OrbitSystem,
    RecurrenceEvent,
    RecurrenceParams,
    derive_params,
    verify_event,
)


@dataclass(frozen=True)
class OrbitClass:
    """Alternating/good/bad bookkeeping for one iterate of a prime."""

    alternating: Optional[bool]   # None: degenerate prime or refused label
    nondegenerate: bool           # of the k-th iterate
    good: Optional[bool]          # None when the iterate is degenerate
    bad: Optional[bool]
    negative_count: int           # prime eigenvalues in (-1, 0)
    strongly_nondegenerate: bool


def classify_orbit(prime: BlockPath, k: int = 1) -> OrbitClass:
    """Classify the k-th iterate of a prime path.

    Alternating means an odd count of eigenvalues in (-1, 0).  A bad
    orbit is a nondegenerate even iterate of an alternating prime; every
    odd nondegenerate iterate is good regardless.  When the odd count
    coexists with an even-degree root-of-unity eigenvalue the even-k
    judgment is refused: parities can merge under iteration there.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"iterate must be a positive integer, got {k!r}")
    neg = sum(1 for b in prime.blocks
              if isinstance(b, Hyperbolic) and b.negative)
    has_shear = any(isinstance(b, Shear) for b in prime.blocks)
    dens = rational_rotation_denominators(prime)
    strongly = not has_shear and not dens
    refused = neg % 2 == 1 and any(q % 2 == 0 for q in dens)
    if refused and k % 2 == 0:
        raise ClassificationUndefined(
            f"odd count {neg} of eigenvalues in (-1,0) together with an "
            f"even-degree root-of-unity eigenvalue: good/bad is not well "
            f"defined at even iterate {k}")
    alternating = None if (has_shear or refused) else neg % 2 == 1
    it = iterate(prime, k)
    if any(isinstance(b, Shear) for b in it.blocks):
        return OrbitClass(alternating, False, None, None, neg, strongly)
    bad = False if k % 2 == 1 else bool(alternating)
    return OrbitClass(alternating, True, not bad, bad, neg, strongly)


@dataclass(frozen=True)
class ClosedOrbitRecord:
    """One closed orbit, presented as the k-th iterate of a prime path."""

    prime: BlockPath
    k: int = 1
    action: Optional[ExactReal] = None
    label: str = ""
    degree: Optional[int] = None         # declared rational-homology degree
    declared_ch: Optional[tuple] = None  # ((degree, dim), ...) when supplied

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"iterate must be a positive integer, "
                             f"got {self.k!r}")
        if self.action is not None:
            object.__setattr__(self, "action", exact(self.action))
        if self.declared_ch is not None:
            object.__setattr__(self, "declared_ch", tuple(
                (int(m), int(dim)) for m, dim in self.declared_ch))

    @property
    def path(self) -> BlockPath:
        return iterate(self.prime, self.k)


@dataclass(frozen=True)
class Support:
    """Graded support, either exact degrees or an inclusive bound."""

    degrees: Optional[tuple] = None
    lower: Optional[int] = None
    upper: Optional[int] = None   # None with lower set: unbounded above
    note: str = ""

    @property
    def is_exact(self) -> bool:
        return self.degrees is not None

    def to_json(self) -> dict:
        if self.is_exact:
            return {"degrees": list(self.degrees)}
        out = {"lower": self.lower, "upper": self.upper}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class LocalHomology:
    sh: Support
    ch: Support
    field_char: int


def local_homology(rec: ClosedOrbitRecord, field_char: int = 0
                   ) -> LocalHomology:
    """Local homology supports of the recorded orbit.

    Nondegenerate orbits have two-point non-equivariant support over any
    field; the equivariant support over characteristic 0 follows the
    good/bad dichotomy.  Characteristic p dividing the iterate admits
    group towers, so only a lower bound is reported there.  Degenerate
    orbits get the semicontinuity bounds.
    """
    it = rec.path
    if any(isinstance(b, Shear) for b in it.blocks):
        mm, mp = mu_pm(rec.prime, rec.k)
        note = "degenerate: bounds only"
        return LocalHomology(Support(lower=mm, upper=mp + 1, note=note),
                             Support(lower=mm, upper=mp, note=note),
                             field_char)
    mu = cz_index(rec.prime, rec.k)
    sh = Support(degrees=(mu, mu + 1))
    if field_char and rec.k % field_char == 0:
        ch = Support(lower=mu, upper=None,
                     note=f"characteristic {field_char} divides iterate "
                          f"{rec.k}: tower contributions possible")
        return LocalHomology(sh, ch, field_char)
    try:
        cls = classify_orbit(rec.prime, rec.k)
    except ClassificationUndefined as err:
        ch = Support(lower=mu, upper=mu + 1, note=str(err))
        return LocalHomology(sh, ch, field_char)
    ch = Support(degrees=() if cls.bad else (mu,))
    return LocalHomology(sh, ch, field_char)


def chieq(rec: ClosedOrbitRecord) -> int:
    """Equivariant Euler characteristic over the rationals."""
    if rec.declared_ch is not None:
        return sum((-1) ** m * dim for m, dim in rec.declared_ch)
    lh = local_homology(rec, 0)
    if not lh.ch.is_exact:
        raise ChieqUndefined(
            lh.ch.note or "only support bounds are known")
    return sum((-1) ** m for m in lh.ch.degrees)


def ellipsoid_system(deltas) -> OrbitSystem:
    """Prime-orbit system of the ellipsoid with the given parameters."""
    ds = [exact(v) for v in deltas]
    if not ds:
        raise ValueError("need at least one parameter")
    for v in ds:
        if v.sign() <= 0:
            raise ValueError("parameters must be positive")
    for a, b in zip(ds, ds[1:]):
        if not a < b:
            raise ValueError("parameters must be strictly increasing")
    orbits = []
    for j, dj in enumerate(ds):
        rots = []
        for i, di in enumerate(ds):
            if i == j:
                continue
            lam = dj / di
            if lam.is_rational():
                raise RationalRatio(
                    f"ratio {j + 1}:{i + 1} = {lam.to_text()} is rational")
            rots.append(Rotation(lam))
        orbits.append(Orbit(BlockPath(1, tuple(rots)), dj, f"y{j + 1}"))
    return OrbitSystem(orbits)


@dataclass(frozen=True)
class StaircasePoint:
    label: str
    orbit_index: int
    k: int
    action: ExactReal
    degree: int


@dataclass
class StaircaseResult:
    barcode: Barcode
    records: list       # OrbitHomology rows backing the beg/en re-check
    points: list        # StaircasePoint, ascending action
    n: int              # bars carry degrees n, n+2, ...

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "barcode": self.barcode.to_json(),
            "points": [{"label": p.label, "orbit": p.orbit_index,
                        "k": p.k, "action": p.action.to_json(),
                        "degree": p.degree} for p in self.points],
        }


def staircase_barcode(system: OrbitSystem, count: int) -> StaircaseResult:
    """Barcode of the first `count` action-spectrum points of a system
    whose iterate degrees follow the staircase pattern n+1, n+3, ...

    Each spectrum point must carry the next odd-offset degree exactly;
    any tie or degree defect falsifies the staircase hypotheses.
    """
    if not isinstance(count, int) or count < 1:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    half = {orb.path.half_dim for orb in system.orbits}
    if len(half) != 1:
        raise HypothesisViolation("orbits have mixed transverse dimensions")
    n = half.pop() + 1
    heap = []
    for idx, orb in enumerate(system.orbits):
        heappush(heap, (SortKey(orb.action), idx, 1))
    points = []
    for i in range(1, count + 1):
        key, idx, k = heappop(heap)
        orb = system.orbits[idx]
        if heap and heap[0][0] == key:
            oidx, ok_ = heap[0][1], heap[0][2]
            raise HypothesisViolation(
                f"action tie between {system.orbit_name(idx)}^{k} and "
                f"{system.orbit_name(oidx)}^{ok_}")
        expected = n + 2 * i - 1
        try:
            got = cz_index(orb.path, k)
        except Exception as err:
            raise HypothesisViolation(
                f"{system.orbit_name(idx)}^{k}: {err}") from None
        if got != expected:
            raise HypothesisViolation(
                f"spectrum point {i} ({system.orbit_name(idx)}^{k}) has "
                f"degree {got}, staircase needs {expected}")
        name = system.orbit_name(idx)
        label = name if k == 1 else f"{name}^{k}"
        points.append(StaircasePoint(label, idx, k, orb.action * k, expected))
        heappush(heap, (SortKey(orb.action * (k + 1)), idx, k + 1))
    bars = []
    records = [OrbitHomology("[W]", exact(0), {n: 1})]
    prev_action = exact(0)
    prev_label = "[W]"
    for i, pt in enumerate(points, start=1):
        deg = n + 2 * (i - 1)
        bars.append(Bar(prev_action, pt.action, deg,
                        beg=prev_label, en=pt.label))
        dims = {pt.degree: 1} if i == len(points) else \
            {pt.degree: 1, pt.degree + 1: 1}
        records.append(OrbitHomology(pt.label, pt.action, dims,
                                     mu_minus=pt.degree, mu_plus=pt.degree))
        prev_action, prev_label = pt.action, pt.label
    bc = Barcode(bars, 0)
    rep = beg_end_assignment(bc, records)
    for bar, beg, en in rep.pairs:
        if bar.beg != beg.label or (en is not None and bar.en != en.label):
            raise HypothesisViolation(
                f"endpoint assignment disagrees at the bar born "
                f"{bar.birth.to_text()}")
    for item in rep.items:
        if not item["ok"]:
            raise HypothesisViolation(
                f"index gap violated: {item['label']}: {item['detail']}")
    return StaircaseResult(bc, records, points, n)


def degree_shift_predict(rec: ClosedOrbitRecord, k: int) -> int:
    """Predicted rational-homology degree of the k-th iterate of the
    recorded orbit (which must declare its own degree).

    Totally degenerate orbits shift by (k-1) mean indices for every k;
    otherwise the shift is read off the nondegenerate part at odd
    admissible k only.
    """
    if rec.degree is None:
        raise NotApplicable("record declares no degree")
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"iterate must be a positive integer, got {k!r}")
    x = rec.path
    if all(isinstance(b, Shear) for b in x.blocks):
        shift = mean_index(x) * (k - 1)
        return rec.degree + shift.floor()
    if k % 2 == 0:
        raise NotApplicable(f"iterate {k} is even")
    if not is_admissible(x, k):
        raise NotApplicable(f"iterate {k} is inadmissible")
    psi = BlockPath(x.loop,
                    tuple(b for b in x.blocks if not isinstance(b, Shear)))
    return rec.degree + cz_index(psi, k) - cz_index(psi, 1)


@dataclass
class MultiplicityReport:
    """Slot-filling audit of one recurrence event over a single cluster."""

    event: RecurrenceEvent
    n: int
    d: int
    interval: tuple          # inclusive degree window around d
    slots: tuple             # its parity-(n+1) integers
    filled: dict             # slot -> orbit labels whose degree lands there
    gamma_counts: tuple      # sizes of the below/at/above groups
    s_values: tuple
    N: int
    k_divisible_by_N: bool
    distinct_primes: int
    items: list

    @property
    def ok(self) -> bool:
        return all(it.ok for it in self.items)

    @property
    def failures(self) -> list:
        return [it for it in self.items if not it.ok]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "n": self.n,
            "d": self.d,
            "interval": list(self.interval),
            "slots": list(self.slots),
            "filled": {str(s): labels for s, labels in self.filled.items()},
            "gammaCounts": list(self.gamma_counts),
            "sValues": list(self.s_values),
            "N": self.N,
            "kDivisibleByN": self.k_divisible_by_N,
            "distinctPrimes": self.distinct_primes,
            "failures": [it.to_json() for it in self.failures],
        }


def _monotone_index_path(path: BlockPath) -> bool:
    """True when mu-, mu+ and the visible degree are nondecreasing in k:
    nonnegative loop shift and positive rotation blocks only."""
    if path.loop < 0:
        return False
    return all(isinstance(b, Rotation) and b.lam.sign() > 0
               for b in path.blocks)


def _first_k_above(value, bound: int, lo: int, hi: int) -> int:
    """Smallest k in [lo, hi] with value(k) > bound, hi + 1 if none.

    value must be nondecreasing over the range.
    """
    if lo > hi or not value(hi) > bound:
        return hi + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if value(mid) > bound:
            hi = mid
        else:
            lo = mid + 1
    return lo


def multiplicity_audit(system: OrbitSystem, event: RecurrenceEvent,
                       k_ceiling: int) -> MultiplicityReport:
    """Re-verify the event, then check the degree windows of the three
    iterate groups and that the n parity-(n+1) slots around d are filled
    by n distinct non-alternating primes."""
    if k_ceiling < max(event.k) + event.ell0:
        raise ValueError(
            f"ceiling {k_ceiling} is below max event iterate plus window")
    params = derive_params(system, RecurrenceParams(
        eta=event.eta, ell0=event.ell0, divisor=event.divisor,
        k_ceiling=k_ceiling))
    audit = verify_event(system, event, params, k_ceiling)
    if not audit.ok:
        bad = audit.failures[0]
        raise EventMismatch(
            f"event fails re-verification: {bad.name} {bad.label}: "
            f"{bad.detail}")
    if len(system.clusters) != 1:
        raise HypothesisViolation("audit needs a single action cluster")
    half = {orb.path.half_dim for orb in system.orbits}
    if len(half) != 1:
        raise HypothesisViolation("orbits have mixed transverse dimensions")
    n = half.pop() + 1
    d = event.d[0]
    lo, hi = d - n + 1, d + n - 1
    slots = tuple(s for s in range(lo, hi + 1) if (s - n - 1) % 2 == 0)
    items: list[AuditItem] = []
    push = items.append
    push(AuditItem("slot-count", f"[{lo},{hi}]", len(slots) == n,
                   f"{len(slots)} slots of parity {(n + 1) % 2}, need {n}"))
    counts = [0, 0, 0]
    group_fail = [0, 0, 0]
    spot_fail = 0
    for j, orb in enumerate(system.orbits):
        ker = kernel(orb.path)
        kj = event.k[j]
        name = system.orbit_name(j)
        if _monotone_index_path(orb.path):
            # each group condition is decided at its boundary iterate and
            # any failure set is a k-interval located by bisection
            counts[0] += kj - 1
            bad_lo = _first_k_above(lambda k: ker.mu_pm(k)[1], d - 2,
                                    1, kj - 1)
            if bad_lo < kj:
                group_fail[0] += kj - bad_lo
                push(AuditItem("gamma-minus", f"{name}^{bad_lo}", False,
                               f"mu+ = {ker.mu_pm(bad_lo)[1]} exceeds "
                               f"{d - 2}"))
            spot_lo = _first_k_above(lambda k: ker.mu_pm(k)[1], d - n,
                                     1, kj - 1)
            for k in range(spot_lo, kj):
                try:
                    cls = classify_orbit(orb.path, k)
                except ClassificationUndefined:
                    cls = None
                if cls is not None and cls.good and ker.cz(k) > d - n:
                    spot_fail += 1
                    push(AuditItem("spot", f"{name}^{k}", False,
                                   f"visible degree {ker.cz(k)} "
                                   f"enters ({d - n}, {hi}]"))
            counts[1] += 1
            mm, mp = ker.mu_pm(kj)
            if not (lo <= mm and mp <= hi):
                group_fail[1] += 1
                push(AuditItem("gamma-zero", f"{name}^{kj}", False,
                               f"[mu-, mu+] = [{mm}, {mp}] leaves "
                               f"[{lo}, {hi}]"))
            counts[2] += k_ceiling - kj
            ok_hi = _first_k_above(lambda k: ker.mu_pm(k)[0], d + n,
                                   kj + 1, k_ceiling)
            if ok_hi > kj + 1:
                group_fail[2] += ok_hi - kj - 1
                push(AuditItem("gamma-plus", f"{name}^{kj + 1}", False,
                               f"mu- = {ker.mu_pm(kj + 1)[0]} below "
                               f"{d + n + 1}"))
            continue
        for k in range(1, k_ceiling + 1):
            mm, mp = ker.mu_pm(k)
            if k < kj:
                counts[0] += 1
                if mp > d - 2:
                    group_fail[0] += 1
                    push(AuditItem("gamma-minus", f"{name}^{k}", False,
                                   f"mu+ = {mp} exceeds {d - 2}"))
                else:
                    try:
                        cls = classify_orbit(orb.path, k)
                    except ClassificationUndefined:
                        cls = None
                    if cls is not None and cls.good and \
                            ker.cz(k) > d - n:
                        spot_fail += 1
                        push(AuditItem("spot", f"{name}^{k}", False,
                                       f"visible degree {ker.cz(k)} "
                                       f"enters ({d - n}, {hi}]"))
            elif k == kj:
                counts[1] += 1
                if not (lo <= mm and mp <= hi):
                    group_fail[1] += 1
                    push(AuditItem("gamma-zero", f"{name}^{k}", False,
                                   f"[mu-, mu+] = [{mm}, {mp}] leaves "
                                   f"[{lo}, {hi}]"))
            else:
                counts[2] += 1
                if mm < d + n + 1:
                    group_fail[2] += 1
                    push(AuditItem("gamma-plus", f"{name}^{k}", False,
                                   f"mu- = {mm} below {d + n + 1}"))
    for gname, fails, total in zip(
            ("gamma-minus", "gamma-zero", "gamma-plus"),
            group_fail, counts):
        push(AuditItem(gname, "all", fails == 0,
                       f"{total - fails}/{total} iterates in window"))
    push(AuditItem("spot", "all", spot_fail == 0,
                   f"{spot_fail} visible low iterates inside the slot "
                   f"interval"))
    filled: dict[int, list] = {s: [] for s in slots}
    filler_primes = set()
    for j, orb in enumerate(system.orbits):
        kj = event.k[j]
        name = system.orbit_name(j)
        try:
            cls = classify_orbit(orb.path, kj)
        except ClassificationUndefined as err:
            push(AuditItem("slot-filler", f"{name}^{kj}", False, str(err)))
            continue
        if not cls.nondegenerate:
            push(AuditItem("slot-filler", f"{name}^{kj}", False,
                           "degenerate at the event iterate"))
            continue
        if cls.bad:
            continue
        mu = kernel(orb.path).cz(kj)
        if mu in filled:
            filled[mu].append(name)
            filler_primes.add(j)
            push(AuditItem("non-alternating", name,
                           cls.alternating is False,
                           "slot filler must come from a non-alternating "
                           "prime"))
    for s in slots:
        push(AuditItem("slot-filled", str(s), bool(filled[s]),
                       f"filled by {filled[s]}" if filled[s]
                       else "no good orbit lands on this slot"))
    distinct = len(filler_primes)
    push(AuditItem("distinct-primes", "all", distinct == n,
                   f"{distinct} primes fill slots, need {n}"))
    x0 = min(range(len(system.orbits)),
             key=lambda j: SortKey(system.orbits[j].action))
    ax = system.orbits[x0].action
    s_values = []
    for j, orb in enumerate(system.orbits):
        if j == x0:
            continue
        s = (ax / orb.action).floor()
        if s >= 20:
            raise HypothesisViolation(
                f"iterate threshold {s} too large for the factorial "
                f"divisor")
        s_values.append(max(s, 0))
    p = 1
    for orb in system.orbits:
        p = lcm(p, root_of_unity_lcm(orb.path))
    big_n = 2 * p
    for s in s_values:
        big_n *= factorial(s)
    k_div = all(kj % big_n == 0 for kj in event.k)
    return MultiplicityReport(
        event=event, n=n, d=d, interval=(lo, hi), slots=slots,
        filled=filled, gamma_counts=tuple(counts),
        s_values=tuple(s_values), N=big_n, k_divisible_by_N=k_div,
        distinct_primes=distinct, items=items)


@dataclass
class ComparisonReport:
    """Outcome of matching a system against its ellipsoid model."""

    deltas: list
    items: list

    @property
    def ok(self) -> bool:
        return all(it.ok for it in self.items)

    @property
    def failures(self) -> list:
        return [it for it in self.items if not it.ok]

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "deltas": [v.to_json() for v in self.deltas],
                "checked": len(self.items),
                "failures": [it.to_json() for it in self.failures]}


def rescale_to_mean_index(system: OrbitSystem) -> OrbitSystem:
    """Rescale actions by the common cluster factor so that every orbit
    has action equal to its mean index."""
    if len(system.clusters) != 1:
        raise HypothesisViolation(
            "rescaling needs a single cluster: the action/mean-index "
            "ratio must be one constant")
    return OrbitSystem([Orbit(o.path, h, o.name)
                        for o, h in zip(system.orbits,
                                        system.mean_indices)])


def ellipsoid_comparison(system: OrbitSystem, k_max: int = 200
                         ) -> ComparisonReport:
    """Compare a normalized system (action = mean index) against the
    ellipsoid model built from its mean-index vector.

    Checks, per orbit: model mean index matches, all iterate indices up
    to k_max match, and the positive-Krein rotation residues mod 1 agree
    as multisets.
    """
    for j, orb in enumerate(system.orbits):
        if not orb.action == system.mean_indices[j]:
            raise HypothesisViolation(
                f"orbit {system.orbit_name(j)}: action "
                f"{orb.action.to_text()} differs from mean index "
                f"{system.mean_indices[j].to_text()}; rescale first")
    order = sorted(range(len(system.orbits)),
                   key=lambda j: SortKey(system.mean_indices[j]))
    deltas = [system.mean_indices[j] for j in order]
    n = len(deltas)
    for jj, dj in enumerate(deltas):
        residues = []
        for ii, di in enumerate(deltas):
            if ii == jj:
                continue
            lam = dj / di
            residues.append((lam.frac(), f"+D{jj + 1}/D{ii + 1}"))
            residues.append(((lam * -1).frac(), f"-D{jj + 1}/D{ii + 1}"))
        for a in range(len(residues)):
            for b in range(a + 1, len(residues)):
                if residues[a][0] == residues[b][0]:
                    zero = "" if residues[a][0] else ", both lie in Z"
                    raise NonResonanceFailed(
                        f"{residues[a][1]} and {residues[b][1]} coincide "
                        f"mod Z{zero}")
    model = ellipsoid_system(deltas)
    items: list[AuditItem] = []
    for pos, j in enumerate(order):
        orb = system.orbits[j]
        name = system.orbit_name(j)
        ypath = model.orbits[pos].path
        if orb.path.half_dim != n - 1:
            items.append(AuditItem("dimension", name, False,
                                   f"transverse half-dimension "
                                   f"{orb.path.half_dim}, model has "
                                   f"{n - 1}"))
            continue
        items.append(AuditItem(
            "mean-index", name,
            mean_index(orb.path) == mean_index(ypath),
            f"system {mean_index(orb.path).to_text()} vs model "
            f"{mean_index(ypath).to_text()}"))
        ok = True
        detail = f"indices agree for k <= {k_max}"
        kx, ky = kernel(orb.path), kernel(ypath)
        for k in range(1, k_max + 1):
            try:
                mx = kx.cz(k)
            except Exception as err:
                ok, detail = False, f"iterate {k}: {err}"
                break
            my = ky.cz(k)
            if mx != my:
                ok, detail = False, (f"iterate {k}: system degree {mx}, "
                                     f"model degree {my}")
                break
        items.append(AuditItem("index", name, ok, detail))
        xres = sorted((r.lam.frac() for r in orb.path.rotations()),
                      key=SortKey)
        yres = sorted((r.lam.frac() for r in ypath.rotations()),
                      key=SortKey)
        ok = len(xres) == len(yres) and \
            all(a == b for a, b in zip(xres, yres))
        items.append(AuditItem(
            "krein-residues", name, ok,
            "rotation residue multisets agree" if ok else
            f"{[v.to_text() for v in xres]} vs "
            f"{[v.to_text() for v in yres]}"))
    return ComparisonReport(deltas, items)
