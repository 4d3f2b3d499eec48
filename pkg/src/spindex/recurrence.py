"""Constructive index recurrence: Diophantine return solvers plus event
assembly and independent verification.

An orbit system is a finite collection of block paths with positive
actions and positive mean indices, partitioned into clusters of equal
action/mean-index ratio.  A recurrence event is a vector of iterates
k_ij, one per orbit, together with per-cluster integers d_i and an
action threshold C, satisfying the five recurrence conditions:

IR1  |hmu(path^k) - d| < eta and d - m <= mu-(path^k) <= mu+(path^k) <= d + m
IR2  mu_pm(path^(k+l)) = d + mu_pm(path^l)          for 0 < l <= ell0
IR3  mu+(path^(k-l)) = d - mu-(path^l) + (beta+ - beta-)(path^l)
IR4  IR1..IR3 again for the shear-stripped paths
IR5  C off the action spectrum, every k_ij a_ij within eta of C, with
     k a_ij below C - eta before k_ij and above C after it

The solver searches an integer box: a pivot iterate t for the first
orbit of the first cluster, candidate iterates for the others from the
action window |t a_11 - k a_ij| < sigma, rotation-number constraints
dist(k lambda) < epsilon, and nearest-integer d extraction.  A divisor
request N is honoured by searching at epsilon/N, sigma/N, eta/N and
scaling k and d by N, so both come out divisible by N.

The search replaces epsilon and sigma by dyadic rational lower bounds
(floor(x 2^40)/2^40) so every window test is a comparison between at
most two quadratic fields; sufficiency is unaffected and every event is
re-verified exactly before being returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .blockpaths import BlockPath, Hyperbolic, Rotation, root_of_unity_lcm
from .errors import (
    EmptyWindow,
    EventMismatch,
    ExactArithmeticError,
    NonpositiveMeanIndex,
    ParamTooTight,
    ParseError,
)
from .exact import ExactReal, SortKey, exact, _sign_quad
from .indices import is_dynamically_convex, kernel, mean_index

_DYADIC = 1 << 40


@dataclass(frozen=True)
class Orbit:
    path: BlockPath
    action: ExactReal
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "action", exact(self.action))


class OrbitSystem:
    """Orbits with cluster labels (i,j): i by ascending action/hmu ratio,
    j by input order within the cluster."""

    def __init__(self, orbits: Sequence[Orbit]):
        if not orbits:
            raise ValueError("empty orbit system")
        self.orbits = list(orbits)
        self.mean_indices = []
        ratios = []
        for n, orb in enumerate(self.orbits):
            if orb.action.sign() <= 0:
                raise ValueError(f"orbit {n}: action must be positive")
            delta = mean_index(orb.path)
            if delta.sign() <= 0:
                raise NonpositiveMeanIndex(
                    f"orbit {n} ({orb.name or 'unnamed'}): mean index "
                    f"{delta.to_text()} is not positive")
            self.mean_indices.append(delta)
            ratios.append(orb.action / delta)
        # exact-equality clustering; cross-field ratios can only tie if
        # both are rational, which the equality test decides
        groups: list[list[int]] = []
        reps: list[ExactReal] = []
        for n, r in enumerate(ratios):
            for gi, rep in enumerate(reps):
                if _ratio_equal(r, rep):
                    groups[gi].append(n)
                    break
            else:
                groups.append([n])
                reps.append(r)
        order = sorted(range(len(groups)), key=lambda gi: SortKey(reps[gi]))
        self.clusters = [groups[gi] for gi in order]
        self.ratios = [reps[gi] for gi in order]
        self.labels: list[tuple[int, int]] = [(0, 0)] * len(self.orbits)
        for i, members in enumerate(self.clusters, start=1):
            for j, n in enumerate(members, start=1):
                self.labels[n] = (i, j)

    @property
    def rho(self) -> list[ExactReal]:
        """Per-cluster mean-index/action ratio."""
        return [ExactReal(1) / r for r in self.ratios]

    def orbit_name(self, n: int) -> str:
        if self.orbits[n].name:
            return self.orbits[n].name
        i, j = self.labels[n]
        return f"x{i}{j}"

    def to_json(self) -> dict:
        return {"orbits": [
            {"name": o.name, "action": o.action.to_json(),
             "path": o.path.to_json()} for o in self.orbits]}

    @staticmethod
    def from_json(obj) -> "OrbitSystem":
        try:
            orbits = [Orbit(BlockPath.from_json(o["path"]),
                            ExactReal.from_json(o["action"]),
                            str(o.get("name", "")))
                      for o in obj["orbits"]]
            return OrbitSystem(orbits)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad orbit system: {exc}") from None


def _ratio_equal(r1: ExactReal, r2: ExactReal) -> bool:
    if r1.guard is not None or r2.guard is not None:
        return r1 == r2  # may raise PrecisionError, intentionally loud
    if r1.rad and r2.rad and r1.d != r2.d:
        return False  # one irrational in each of two distinct fields
    return r1._cmp(r2) == 0


def cluster_orbits(system: OrbitSystem) -> list[list[int]]:
    """Partition of orbit indices by exact action/mean-index ratio."""
    return [list(c) for c in system.clusters]


@dataclass(frozen=True)
class RecurrenceParams:
    eta: ExactReal
    ell0: int = 1
    divisor: int = 1
    event_count: int = 1
    k_ceiling: int = 10000
    epsilon: Optional[ExactReal] = None
    sigma: Optional[ExactReal] = None
    # derived at binding
    epsilon0: Optional[ExactReal] = None
    n_eff: int = 0
    m_prime: int = 0

    def __post_init__(self):
        object.__setattr__(self, "eta", exact(self.eta))
        for name in ("epsilon", "sigma", "epsilon0"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, exact(v))

    @property
    def bound(self) -> bool:
        return self.n_eff > 0


def _min_exact(values):
    best = None
    for v in values:
        if best is None or v < best:
            best = v
    return best


def epsilon_floor(system: OrbitSystem, ell0: int) -> Optional[ExactReal]:
    """min over orbits, rotations and 1 <= l <= ell0 of dist(l lambda),
    skipping multiples with l lambda integral; None if no terms."""
    best = None
    for orb in system.orbits:
        for b in orb.path.blocks:
            if not isinstance(b, Rotation):
                continue
            for l in range(1, ell0 + 1):
                t = b.lam * l
                if t.is_integer():
                    continue
                dist = t.dist_to_int()
                if best is None or dist < best:
                    best = dist
    return best


def _dyadic_floor(x: ExactReal) -> Fraction:
    """Largest multiple of 2^-40 that is <= x."""
    return Fraction((x * _DYADIC).floor(), _DYADIC)


def derive_params(system: OrbitSystem, params: RecurrenceParams) -> RecurrenceParams:
    """Fill in epsilon/sigma defaults and divisor lift, then validate."""
    eta = params.eta
    if eta.sign() <= 0:
        raise ParamTooTight("eta must be positive")
    if not eta.is_rational():
        raise ParamTooTight("eta must be rational (window endpoints must "
                            "stay in each orbit's field)")
    if eta.as_fraction() >= Fraction(1, 2):
        raise ParamTooTight("eta must be < 1/2 so nearest integers are unique")
    if params.ell0 < 1 or params.divisor < 1 or params.event_count < 1 \
            or params.k_ceiling < 1:
        raise ParamTooTight("ell0, divisor, eventCount, kCeiling must be >= 1")
    min_a = _min_exact(o.action for o in system.orbits)
    if not min_a > eta:
        raise ParamTooTight(
            f"eta {eta.to_text()} must stay below the smallest action "
            f"{min_a.to_text()}")
    eps0 = epsilon_floor(system, params.ell0)
    m_prime = max(len(o.path.rotations()) for o in system.orbits)
    half = Fraction(1, 2)
    eps = params.epsilon
    if eps is None:
        cands = []
        if eps0 is not None:
            cands.append(eps0)
        if m_prime > 0:
            cands.append(eta / (2 * m_prime))
        else:
            cands.append(eta)
        eps = _min_exact(cands) * half
    sig = params.sigma
    if sig is None:
        rho_max = _min_exact(ExactReal(-1) * r for r in system.rho) * -1
        sig = _min_exact([min_a, ExactReal(1) / (8 * rho_max), eta * half]) * half
    # invariants
    if eps.sign() <= 0 or sig.sign() <= 0:
        raise ParamTooTight("epsilon and sigma must be positive")
    if eps0 is not None and eps > eps0:
        raise ParamTooTight(
            f"epsilon {eps.to_text()} exceeds the return threshold "
            f"epsilon0 {eps0.to_text()}")
    if m_prime > 0 and not (eps * (2 * m_prime) < eta):
        raise ParamTooTight("2 epsilon m' < eta violated")
    if not sig < min_a:
        raise ParamTooTight("sigma < min action violated")
    for r in system.rho:
        if not sig * r * 8 < 1:
            raise ParamTooTight("sigma * max rho < 1/8 violated")
    d_lcm = 1
    for orb in system.orbits:
        d_lcm = lcm(d_lcm, root_of_unity_lcm(orb.path))
    n_eff = lcm(params.divisor, d_lcm)
    return replace(params, epsilon=eps, sigma=sig, epsilon0=eps0,
                   n_eff=n_eff, m_prime=m_prime)


class GapList(list):
    """List of results carrying the maximum observed gap."""

    def __init__(self, items=(), max_gap: Optional[int] = None):
        super().__init__(items)
        self.max_gap = max_gap


def _max_gap(values: list[int]) -> Optional[int]:
    if len(values) < 2:
        return None
    return max(b - a for a, b in zip(values, values[1:]))


def torus_returns(lambdas, epsilon, divisor: int = 1,
                  k_ceiling: int = 10000) -> GapList:
    """k <= k_ceiling, divisible by divisor, with dist(k lambda) < epsilon
    for every lambda.  Exact decisions; floats only prescreen."""
    eps = exact(epsilon)
    if eps.sign() <= 0:
        raise ValueError("epsilon must be positive")
    if divisor < 1:
        raise ValueError("divisor must be >= 1")
    lams = [exact(l) for l in lambdas]
    fl = [float(l) for l in lams]
    feps = float(eps) + 1e-7
    out = []
    for k in range(divisor, k_ceiling + 1, divisor):
        ok = True
        for lf, lam in zip(fl, lams):
            t = k * lf
            if abs(t - round(t)) > feps:
                ok = False
                break
            if not (lam * k).dist_to_int() < eps:
                ok = False
                break
        if ok:
            out.append(k)
    if not out:
        raise EmptyWindow(
            f"no return with k <= {k_ceiling} (raise the ceiling)")
    return GapList(out, _max_gap(out))


class _CompiledForm:
    """One linear form with coefficients in a single quadratic field."""

    def __init__(self, coeffs, bound: ExactReal):
        cs = [exact(c) for c in coeffs]
        d = 0
        for c in cs:
            if c.guard is not None:
                raise ExactArithmeticError("guarded coefficients unsupported")
            if c.rad:
                if d and c.d != d:
                    raise ExactArithmeticError(
                        "form mixes sqrt fields; keep one field per form")
                d = c.d
        den = 1
        for c in cs:
            den = lcm(den, c.den)
        self.d = d
        self.den = den
        self.av = [c.num * (den // c.den) for c in cs]
        self.bv = [c.rad * (den // c.den) for c in cs]
        self.bound = exact(bound)
        if self.bound.sign() <= 0:
            raise ValueError("bounds must be positive")
        self.rational_bound = (self.bound.guard is None
                               and self.bound.rad == 0)

    def within(self, vec) -> bool:
        u = sum(a * x for a, x in zip(self.av, vec))
        v = sum(b * x for b, x in zip(self.bv, vec))
        if self.rational_bound:
            # |u + v sqrt(d)| * bden < bnum * den
            c = self.bound.num * self.den
            bd = self.bound.den
            return (_sign_quad(u * bd - c, v * bd, self.d) < 0
                    and _sign_quad(u * bd + c, v * bd, self.d) > 0)
        val = ExactReal(u, v, self.den, self.d)
        return abs(val) < self.bound


def minkowski_solutions(forms, bounds, divisor: int = 1, count: int = 5,
                        box_ceiling: Optional[int] = None,
                        nvars: Optional[int] = None) -> GapList:
    """Nonzero integer vectors K, first nonzero coordinate positive, with
    |f_s(K)| < bounds[s] for every form, components divisible by divisor,
    sup-norms nondecreasing; at most count results."""
    forms = list(forms)
    if nvars is None:
        if not forms:
            raise ValueError("nvars required when no forms are given")
        nvars = len(forms[0])
    if any(len(f) != nvars for f in forms):
        raise ValueError("all forms must have the same arity")
    if len(forms) >= nvars:
        raise ValueError("need fewer forms than variables")
    if divisor < 1 or count < 1:
        raise ValueError("divisor and count must be >= 1")
    if box_ceiling is None:
        box_ceiling = 200 if nvars <= 2 else 20
    compiled = [_CompiledForm(f, b) for f, b in zip(forms, bounds)]
    out = []
    norms = []
    for radius in range(1, box_ceiling + 1):
        for raw in _box_shell(nvars, radius):
            vec = tuple(divisor * x for x in raw)
            if all(cf.within(vec) for cf in compiled):
                out.append(vec)
                norms.append(divisor * radius)
                if len(out) >= count:
                    return GapList(out, _max_gap(sorted(set(norms))))
    if not out:
        raise EmptyWindow(f"no solution in the box |k| <= {box_ceiling}")
    return GapList(out, _max_gap(sorted(set(norms))))


def _box_shell(nvars: int, radius: int):
    rng = range(-radius, radius + 1)
    for vec in itertools.product(rng, repeat=nvars):
        if max(map(abs, vec)) != radius:
            continue
        lead = next((x for x in vec if x), 0)
        if lead > 0:
            yield vec


@dataclass
class AuditItem:
    name: str
    label: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "label": self.label, "ok": self.ok,
                "detail": self.detail}


@dataclass
class EventAudit:
    items: list

    @property
    def ok(self) -> bool:
        return all(it.ok for it in self.items)

    @property
    def failures(self) -> list:
        return [it for it in self.items if not it.ok]

    def to_json(self):
        return {"ok": self.ok, "checked": len(self.items),
                "failures": [it.to_json() for it in self.failures]}


@dataclass(frozen=True)
class RecurrenceEvent:
    k: tuple            # per orbit, in system input order
    d: tuple            # per cluster
    C: ExactReal
    eta: ExactReal
    ell0: int
    divisor: int
    verified: Optional[EventAudit] = None

    def to_json(self, system: Optional[OrbitSystem] = None) -> dict:
        out = {"k": list(self.k), "d": list(self.d), "C": self.C.to_json(),
               "eta": self.eta.to_json(), "ell0": self.ell0,
               "divisor": self.divisor}
        if system is not None:
            out["orbits"] = [system.orbit_name(n) for n in range(len(self.k))]
        if self.verified is not None:
            out["verified"] = self.verified.to_json()
        return out

    @staticmethod
    def from_json(obj) -> "RecurrenceEvent":
        return RecurrenceEvent(
            k=tuple(int(x) for x in obj["k"]),
            d=tuple(int(x) for x in obj["d"]),
            C=ExactReal.from_json(obj["C"]),
            eta=ExactReal.from_json(obj["eta"]),
            ell0=int(obj["ell0"]),
            divisor=int(obj.get("divisor", 1)),
        )


def _on_spectrum(c: ExactReal, system: OrbitSystem) -> bool:
    for orb in system.orbits:
        guess = round(float(c) / float(orb.action))
        for n in range(max(1, guess - 1), guess + 2):
            if orb.action * n == c:
                return True
    return False


def choose_threshold(system: OrbitSystem, ks, eta: ExactReal) -> ExactReal:
    """C in (max k a - eta, max k a), off the spectrum: the base offset is
    eta/32, halved until the spectrum is avoided."""
    max_a = _min_exact(orb.action * -k for k, orb in zip(ks, system.orbits))
    max_a = max_a * -1
    off = eta * Fraction(1, 32)
    for _ in range(80):
        c = max_a - off
        if c.sign() > 0 and not _on_spectrum(c, system):
            return c
        off = off * Fraction(1, 2)
    raise ParamTooTight("no off-spectrum threshold found below max action")


def verify_event(system: OrbitSystem, event: RecurrenceEvent,
                 params: RecurrenceParams, k_ceiling: int) -> EventAudit:
    """Independent re-check of IR1-IR5 (plus the DC interval conditions
    when every path is dynamically convex and ell0 is large enough).
    Returns a structured report; never raises on a mere failure."""
    items: list[AuditItem] = []
    eta = exact(params.eta)
    ell0 = params.ell0
    push = items.append
    if len(event.k) != len(system.orbits) or len(event.d) != len(system.clusters):
        push(AuditItem("shape", "event", False,
                       f"k has {len(event.k)} entries for "
                       f"{len(system.orbits)} orbits, d has {len(event.d)} "
                       f"for {len(system.clusters)} clusters"))
        return EventAudit(items)
    strip_cache = {}
    for n, orb in enumerate(system.orbits):
        label = system.orbit_name(n)
        ci = system.labels[n][0] - 1
        d = event.d[ci]
        kk = event.k[n]
        ker = kernel(orb.path)
        delta = system.mean_indices[n]
        m = orb.path.half_dim
        hmu_k = delta * kk
        try:
            near = hmu_k.nearest_int()
            ok = near == d
            push(AuditItem("IR1-nearest", label, ok,
                           f"nearest({hmu_k.to_text()}) = {near}, d = {d}"))
        except Exception as exc:  # half-integer or guard ambiguity
            push(AuditItem("IR1-nearest", label, False, str(exc)))
        gap = hmu_k - d
        push(AuditItem("IR1-window", label, abs(gap) < eta,
                       f"|hmu^k - d| = {float(abs(gap)):.6g} vs eta "
                       f"{float(eta):.6g}"))
        mm, mp = ker.mu_pm(kk)
        push(AuditItem("IR1-bounds", label, d - m <= mm <= mp <= d + m,
                       f"d-m={d - m} mu-={mm} mu+={mp} d+m={d + m}"))
        for l in range(1, ell0 + 1):
            lm, lp = ker.mu_pm(l)
            km, kp = ker.mu_pm(kk + l)
            push(AuditItem("IR2", f"{label} l={l}",
                           km == d + lm and kp == d + lp,
                           f"mu_pm^(k+l)=({km},{kp}) vs d+mu_pm^l="
                           f"({d + lm},{d + lp})"))
        corr = ker.bplus - ker.bminus  # beta+ - beta- = b+ - b- at every l
        for l in range(1, min(ell0, kk - 1) + 1):
            _, kp = ker.mu_pm(kk - l)
            lm, _ = ker.mu_pm(l)
            push(AuditItem("IR3", f"{label} l={l}",
                           kp == d - lm + corr,
                           f"mu+^(k-l)={kp} vs d-mu-^l+(b+-b-)={d - lm + corr}"))
        # IR4: same checks on the shear-stripped path
        stripped = strip_cache.get(n)
        if stripped is None:
            stripped = BlockPath(orb.path.loop, tuple(
                b for b in orb.path.blocks
                if isinstance(b, (Rotation, Hyperbolic))))
            strip_cache[n] = stripped
        sker = kernel(stripped)
        sm = stripped.half_dim
        smm, smp = sker.mu_pm(kk)
        push(AuditItem("IR4-bounds", label,
                       d - sm <= smm <= smp <= d + sm,
                       f"stripped: d-m'={d - sm} mu-={smm} mu+={smp} "
                       f"d+m'={d + sm}"))
        for l in range(1, ell0 + 1):
            lm, lp = sker.mu_pm(l)
            km, kp = sker.mu_pm(kk + l)
            push(AuditItem("IR4-IR2", f"{label} l={l}",
                           km == d + lm and kp == d + lp, ""))
    # IR5
    c = event.C
    push(AuditItem("IR5-spectrum", "C", not _on_spectrum(c, system),
                   f"C = {float(c):.6g}"))
    below_max = False
    for n, orb in enumerate(system.orbits):
        label = system.orbit_name(n)
        ka = orb.action * event.k[n]
        in_window = (c - eta < ka) and (ka < c + eta)
        push(AuditItem("IR5-window", label, in_window,
                       f"k a = {float(ka):.6g}, window "
                       f"({float(c - eta):.6g}, {float(c + eta):.6g})"))
        if ka > c:
            below_max = True
        # k a is strictly increasing in k (actions are positive), so the
        # boundary iterates decide separation for the whole range
        sep_ok = True
        bad = ""
        if event.k[n] > 1 and not orb.action * (event.k[n] - 1) < c - eta:
            sep_ok, bad = False, f"k={event.k[n] - 1} action above C-eta"
        if sep_ok and event.k[n] < k_ceiling \
                and not orb.action * (event.k[n] + 1) > c:
            sep_ok, bad = False, f"k={event.k[n] + 1} action below C"
        push(AuditItem("IR5-separation", label, sep_ok, bad))
    push(AuditItem("IR5-below-max", "C", below_max,
                   "C must sit below the largest k a"))
    # DC interval conditions
    all_dc = all(is_dynamically_convex(o.path) for o in system.orbits)
    if all_dc:
        for n, orb in enumerate(system.orbits):
            m = orb.path.half_dim
            if 2 * ell0 < 3 * (m + 1):
                continue
            label = system.orbit_name(n)
            ci = system.labels[n][0] - 1
            d = event.d[ci]
            ker = kernel(orb.path)
            strong = not any(
                b.__class__.__name__ == "Shear"
                or (isinstance(b, Rotation)
                    and (b.lam.guard is not None or b.lam.rad == 0))
                for b in orb.path.blocks)
            ok = True
            bad = ""
            for k in range(1, k_ceiling + 1):
                mm, mp = ker.mu_pm(k)
                if k < event.k[n] and mp > d - 2:
                    ok, bad = False, f"k={k}: mu+={mp} > d-2"
                    break
                if k > event.k[n] and mm < d + m + 2:
                    ok, bad = False, f"k={k}: mu-={mm} < d+m+2"
                    break
                if mm <= d + m + 1 <= mp:
                    ok, bad = False, f"k={k}: interval hits d+m+1"
                    break
                if strong and k < event.k[n] and mp > d - m - 2:
                    ok, bad = False, f"k={k}: mu+={mp} > d-m-2 (strong)"
                    break
                if strong and mm <= d - m - 1 <= mp:
                    ok, bad = False, f"k={k}: interval hits d-m-1 (strong)"
                    break
            push(AuditItem("IR-DC", label, ok, bad))
    return EventAudit(items)


def _rot_constraints(orb: Orbit):
    """Quadratic and guarded rotation numbers (rational ones are handled
    by the divisor lift)."""
    quad = []
    guarded = []
    for b in orb.path.blocks:
        if isinstance(b, Rotation):
            if b.lam.guard is not None:
                guarded.append(b.lam)
            elif b.lam.rad:
                quad.append(b.lam)
    return quad, guarded


def _rot_ok(quad, guarded, floats, k: int, eps_r: Fraction, feps: float) -> bool:
    for lf in floats:
        t = k * lf
        if abs(t - round(t)) > feps:
            return False
    for lam in quad:
        if not (lam * k).dist_to_int() < eps_r:
            return False
    for lam in guarded:
        if not (lam * k).dist_to_int() < eps_r:
            return False
    return True


def find_recurrence_events(system: OrbitSystem,
                           params: RecurrenceParams) -> GapList:
    """Box search for verified recurrence events.

    Returns up to eventCount events, strictly increasing in C, every d_i
    and every k_ij, each passing verify_event up to params.k_ceiling; the
    max gap between consecutive pivot iterates is reported on the result.
    """
    bp = params if params.bound else derive_params(system, params)
    n_eff = bp.n_eff
    eta_b = bp.eta.as_fraction() / n_eff
    sig_r = _dyadic_floor(bp.sigma) / n_eff
    eps_r = _dyadic_floor(bp.epsilon) / n_eff
    if sig_r <= 0 or eps_r <= 0:
        raise ParamTooTight("epsilon/sigma vanish after divisor scaling")
    for attempt in range(3):
        events = _box_search(system, bp, n_eff, eta_b, sig_r, eps_r)
        if events:
            pivots = [ev.k[system.clusters[0][0]] for ev in events]
            return GapList(events, _max_gap(pivots))
        sig_r /= 2
        eps_r /= 2
    raise ParamTooTight(
        f"no verifiable event with k <= {bp.k_ceiling}; raise kCeiling or eta")


def _box_search(system, bp, n_eff, eta_b, sig_r, eps_r):
    pivot_idx = system.clusters[0][0]
    pivot = system.orbits[pivot_idx]
    others = [n for n in range(len(system.orbits)) if n != pivot_idx]
    pq, pg = _rot_constraints(pivot)
    pf = [float(l) for l in pq + pg]
    oq = {n: _rot_constraints(system.orbits[n]) for n in others}
    of = {n: [float(l) for l in oq[n][0] + oq[n][1]] for n in others}
    feps = float(eps_r) + 1e-9
    a_pivot = pivot.action
    af = {n: float(system.orbits[n].action) for n in others}
    apf = float(a_pivot)
    events = []
    last = None
    t_max = bp.k_ceiling // n_eff
    for t in range(1, t_max + 1):
        if not _rot_ok(pq, pg, pf, t, eps_r, feps):
            continue
        ks = [0] * len(system.orbits)
        ks[pivot_idx] = t
        feasible = True
        for n in others:
            guess = round(t * apf / af[n])
            choice = None
            for kc in (guess - 1, guess, guess + 1):
                if kc < 1:
                    continue
                # |t a_pivot - kc a_n| < sigma, decided exactly
                an = system.orbits[n].action
                lo = an * kc - sig_r
                hi = an * kc + sig_r
                ta = a_pivot * t
                if lo < ta < hi:
                    choice = kc
                    break
            if choice is None or not _rot_ok(oq[n][0], oq[n][1], of[n],
                                             choice, eps_r, feps):
                feasible = False
                break
            ks[n] = choice
        if not feasible:
            continue
        ev = _assemble(system, bp, n_eff, eta_b, ks)
        if ev is None:
            continue
        if last is not None:
            if not (ev.C > last.C
                    and all(a > b for a, b in zip(ev.d, last.d))
                    and all(a > b for a, b in zip(ev.k, last.k))):
                continue
        audit = verify_event(system, ev, bp, bp.k_ceiling)
        if not audit.ok:
            continue
        ev = replace(ev, verified=audit)
        events.append(ev)
        last = ev
        if len(events) >= bp.event_count:
            break
    return events


def _assemble(system, bp, n_eff, eta_b, base_ks) -> Optional[RecurrenceEvent]:
    """Extract per-cluster d from the base candidates; None on mismatch."""
    ds = []
    for members in system.clusters:
        e = None
        for n in members:
            t = base_ks[n]
            prod = system.mean_indices[n] * t
            cand = prod.nearest_int()  # HalfIntegerAmbiguity propagates
            if not abs(prod - cand) < eta_b:
                return None
            if e is None:
                e = cand
            elif e != cand:
                return None
        ds.append(e * n_eff)
    ks = [k * n_eff for k in base_ks]
    c = choose_threshold(system, ks, bp.eta)
    return RecurrenceEvent(k=tuple(ks), d=tuple(ds), C=c, eta=bp.eta,
                           ell0=bp.ell0, divisor=n_eff)


def event_for_iterates(system: OrbitSystem, ks,
                       params: RecurrenceParams) -> RecurrenceEvent:
    """Assemble and fully verify the event with the given iterate vector.

    This is the direct route for iterates found outside the sufficiency
    box (the box search is sufficient, not necessary): the rotation
    distances are checked against the return threshold epsilon0, the
    nearest integers against eta, the action threshold is constructed,
    and the result must pass the complete IR audit.
    """
    bp = params if params.bound else derive_params(system, params)
    ks = [int(k) for k in ks]
    if len(ks) != len(system.orbits) or any(k < 1 for k in ks):
        raise ValueError("need one positive iterate per orbit")
    if any(k % bp.n_eff for k in ks):
        raise EventMismatch(
            f"iterates {ks} not divisible by the effective divisor {bp.n_eff}")
    if bp.epsilon0 is not None:
        for n, orb in enumerate(system.orbits):
            quad, guarded = _rot_constraints(orb)
            for lam in quad + guarded:
                dist = (lam * ks[n]).dist_to_int()
                if not dist < bp.epsilon0:
                    raise EventMismatch(
                        f"orbit {system.orbit_name(n)}: rotation distance "
                        f"{float(dist):.6g} not below epsilon0 "
                        f"{float(bp.epsilon0):.6g}")
    ev = _assemble(system, bp, 1, bp.eta.as_fraction(), ks)
    if ev is None:
        raise EventMismatch(
            "nearest-integer extraction failed: mean-index multiples do not "
            "share a d within eta per cluster")
    ev = replace(ev, k=tuple(ks), divisor=bp.n_eff)
    audit = verify_event(system, ev, bp, bp.k_ceiling)
    if not audit.ok:
        first = audit.failures[0]
        raise EventMismatch(
            f"assembled event fails {first.name} ({first.label}): "
            f"{first.detail}")
    return replace(ev, verified=audit)
