"""Acceptance suite: one test per numbered delivery criterion.

Expected values are regenerated on the spot from the brute-force oracles
in _oracles (60-digit interval arithmetic with a refuse-to-decide margin,
direct Gaussian-elimination homology); no numeric constant below is
trusted to the library under test.  Wall-clock budgets are asserted
inside the tests that carry one.
"""

import random
import time
from dataclasses import replace

import pytest

from _oracles import (
    MARGIN,
    approx,
    circle_dist,
    ellipsoid_degree,
    homology_rank,
    nearest_int,
    rotation_cz,
    safe_floor,
    sign_of,
    spectrum_points,
)
from spindex import (
    AuditOptions,
    Barcode,
    BlockPath,
    ChieqUndefined,
    ClosedOrbitRecord,
    ExactReal,
    Hyperbolic,
    NonResonanceFailed,
    NotApplicable,
    Orbit,
    OrbitSystem,
    ParamTooTight,
    RecurrenceParams,
    Rotation,
    Shear,
    SortKey,
    ZetaMismatch,
    barcode_audit,
    barcode_from_filtered_complex,
    beg_end_assignment,
    beta_invariants,
    chieq,
    degree_shift_predict,
    derive_params,
    dim_at,
    direct_sum,
    ellipsoid_comparison,
    ellipsoid_system,
    event_for_iterates,
    exact,
    find_recurrence_events,
    index_bundle,
    is_admissible,
    mean_index,
    mu_pm,
    multiplicity_audit,
    random_block_path,
    random_ellipsoid_deltas,
    random_filtered_complex,
    random_nondegenerate_path,
    rescale_to_mean_index,
    staircase_barcode,
    torus_returns,
    verify_event,
)
from spindex.persistence import rational_between

# ---------------------------------------------------------------------------
# shared ellipsoid fleet: 20 systems (n cycling 2,3,4) with one verified
# divisor-2 recurrence event each.  Draws that admit no event below the
# iterate ceiling are redrawn deterministically; the construction time is
# charged to the multiplicity criterion, which consumes the events.

_FLEET = None
_STAIRS = {}


def _fleet():
    global _FLEET
    if _FLEET is not None:
        return _FLEET
    t0 = time.monotonic()
    entries = []
    for trial in range(20):
        n = (2, 3, 4)[trial % 3]
        for sub in range(50):
            rng = random.Random(4001 + 101 * trial + sub)
            deltas = random_ellipsoid_deltas(rng, n)
            system = ellipsoid_system(deltas)
            amin = min((o.action for o in system.orbits), key=SortKey)
            eta = ExactReal.rational(1, 5) \
                if ExactReal.rational(21, 100) < amin \
                else ExactReal.rational(1, 10)
            try:
                params = derive_params(system, RecurrenceParams(
                    eta=eta, ell0=1, divisor=2, event_count=1,
                    k_ceiling=500000))
                event = find_recurrence_events(system, params)[0]
            except ParamTooTight:
                continue
            entries.append((n, system, event))
            break
        else:
            raise AssertionError(f"fleet slot {trial}: no event in 50 draws")
    _FLEET = (tuple(entries), time.monotonic() - t0)
    return _FLEET


def _staircase(trial, system):
    if trial not in _STAIRS:
        _STAIRS[trial] = staircase_barcode(system, 100)
    return _STAIRS[trial]


# ---------------------------------------------------------------------------


def test_criterion_1_index_formula_suite():
    rng = random.Random(1001)
    paths = [random_block_path(rng) for _ in range(1000)]
    t0 = time.monotonic()
    for p in paths:
        m = p.half_dim
        assert m <= 4
        h1 = mean_index(p)
        base = index_bundle(p, 1)
        beta1 = (base.nu0, base.b0, base.bplus, base.bminus)
        for k in range(1, 101):
            b = index_bundle(p, k)
            hk = h1 * k
            assert b.mean_index == hk                      # homogeneity
            assert hk - m <= b.mu_minus                    # index bounds
            assert b.mu_minus <= b.mu_plus
            assert b.mu_plus <= hk + m
            assert abs(b.bplus - b.bminus) <= m            # beta gap
            if is_admissible(p, k):                        # beta iteration
                assert (b.nu0, b.b0, b.bplus, b.bminus) == beta1
    for i in range(500):                                   # mu additivity
        p, q = paths[2 * i], paths[2 * i + 1]
        s = direct_sum(p, q)
        for k in (1, 7, 100):
            pm, pq = mu_pm(p, k), mu_pm(q, k)
            assert mu_pm(s, k) == (pm[0] + pq[0], pm[1] + pq[1])
    buckets = {}                   # mean additivity needs one shared field
    for p in paths:
        h = mean_index(p)
        buckets.setdefault(h.d if h.rad else 0, []).append((p, h))
    mean_pairs = 0
    for group in buckets.values():
        for (p, hp), (q, hq) in zip(group[::2], group[1::2]):
            assert mean_index(direct_sum(p, q)) == hp + hq
            mean_pairs += 1
    assert mean_pairs >= 300
    elapsed = time.monotonic() - t0
    assert elapsed < 5.0, f"index suite took {elapsed:.2f}s"


def test_criterion_2_golden_rotation_first_event():
    lam = ExactReal.parse("-1+sqrt5") / exact(2)
    path = BlockPath(0, (Rotation(lam),))
    action = mean_index(path)          # the action is the mean index here
    system = OrbitSystem((Orbit(path, action, "g"),))
    eta = ExactReal.rational(1, 5)

    t0 = time.monotonic()
    params = derive_params(system, RecurrenceParams(
        eta=eta, ell0=1, event_count=3, k_ceiling=200))

    # oracle: brute-force every iterate up to the ceiling
    lam_v = approx(lam)
    h_v = approx(action)
    eps_v = approx(params.epsilon)
    for k in range(1, 201):
        assert mu_pm(path, k) == (rotation_cz(lam_v, k), rotation_cz(lam_v, k))
    hits = [k for k in range(1, 201)
            if abs(circle_dist(k * lam_v) - eps_v) > MARGIN
            and circle_dist(k * lam_v) < eps_v]
    assert len(hits) >= 3

    events = find_recurrence_events(system, params)
    assert [ev.k[0] for ev in events] == hits[:3]
    first = events[0]
    d = first.d[0]
    assert (first.k[0], d) == (hits[0], nearest_int(hits[0] * h_v))
    assert (first.k[0], d) == (13, 16)

    # IR1..IR3 for the first event, straight from floor arithmetic
    k0 = first.k[0]
    assert abs(k0 * h_v - d) < approx(eta) - MARGIN
    mu = lambda j: rotation_cz(lam_v, j)
    assert mu(k0 + 1) == d + mu(1)                 # forward translation
    assert mu(k0 - 1) == d - mu(1)                 # backward reflection
    audit = verify_event(system, first, params, 200)
    assert audit.ok
    names = {it.name for it in audit.items}
    assert {"IR1-nearest", "IR1-window", "IR2", "IR3"} <= names

    # torus returns at epsilon = 1/20
    eps20 = ExactReal.rational(1, 20)
    oracle_returns = [k for k in range(1, 2000)
                      if circle_dist(k * lam_v) < approx(eps20) - MARGIN][:3]
    lib_returns = list(torus_returns([lam], eps20, 1, 2000))[:3]
    assert lib_returns == oracle_returns == [13, 21, 34]
    elapsed = time.monotonic() - t0
    assert elapsed < 1.0, f"golden rotation took {elapsed:.2f}s"


def test_criterion_3_multi_orbit_event_action_matching():
    system = ellipsoid_system([exact(1), ExactReal.parse("sqrt2")])
    eta = ExactReal.rational(3, 20)
    t0 = time.monotonic()

    # oracle: smallest iterate pair with a shared nearest degree, both
    # index windows inside eta, and actions packed within one window
    a = [approx(o.action) for o in system.orbits]
    h = [approx(hm) for hm in system.mean_indices]
    eta_v = approx(eta)
    pair = None
    for k1 in range(1, 101):
        k2 = nearest_int(k1 * a[0] / a[1])
        if k2 < 1 or abs(k1 * a[0] - k2 * a[1]) >= eta_v - MARGIN:
            continue
        d1, d2 = nearest_int(k1 * h[0]), nearest_int(k2 * h[1])
        if d1 == d2 and abs(k1 * h[0] - d1) < eta_v - MARGIN \
                and abs(k2 * h[1] - d2) < eta_v - MARGIN:
            pair = (k1, k2, d1)
            break
    assert pair is not None
    assert pair == (7, 5, 24)

    params = derive_params(system, RecurrenceParams(
        eta=eta, ell0=1, k_ceiling=100))
    event = event_for_iterates(system, pair[:2], params)
    assert event.k == pair[:2] and event.d == (pair[2],)

    # C sits in the open window just below the packed action maximum
    top = max((o.action * k for o, k in zip(system.orbits, event.k)),
              key=SortKey)
    assert top - eta < event.C < top
    audit = verify_event(system, event, params, 100)
    assert audit.ok
    assert {"IR5-window", "IR5-spectrum", "IR5-separation",
            "IR2", "IR3"} <= {it.name for it in audit.items}

    # exact interval avoidance of every off-event iterate up to 100
    d = event.d[0]
    dv = [a_ for a_ in (approx(o.action) for o in system.orbits)]
    c_v = approx(event.C)
    for j, orb in enumerate(system.orbits):
        kj = event.k[j]
        for k in range(1, 101):
            deg = ellipsoid_degree(dv, j, k)
            assert mu_pm(orb.path, k) == (deg, deg)
            if k < kj:
                assert deg <= d - 2
                assert k * dv[j] < c_v - eta_v
            elif k > kj:
                assert deg >= d + 3
                assert k * dv[j] > c_v
    elapsed = time.monotonic() - t0
    assert elapsed < 2.0, f"multi-orbit event took {elapsed:.2f}s"


def test_criterion_4_staircase_fleet_graded_structure():
    entries, _ = _fleet()
    t0 = time.monotonic()
    samples = 0
    for trial, (n, system, _event) in enumerate(entries):
        res = _staircase(trial, system)
        bc = res.barcode
        dvals = [approx(o.action) for o in system.orbits]

        # merge order and degrees straight from the oracle spectrum
        pts = spectrum_points(dvals, 100)
        assert len(res.points) == 100
        for p, (_, j, k) in zip(res.points, pts):
            assert (p.orbit_index, p.k) == (j, k)
            assert p.degree == ellipsoid_degree(dvals, j, k)

        # orbit degrees fill n-1+2N in action order, bars fill n-2+2N
        assert [p.degree for p in res.points] == \
            [n - 1 + 2 * i for i in range(1, 101)]
        bars = sorted(bc.bars, key=lambda b: SortKey(b.birth))
        assert [b.degree for b in bars] == \
            [n - 2 + 2 * i for i in range(1, 101)]
        for i, b in enumerate(bars):
            assert b.death == res.points[i].action
            if i:
                assert b.birth == res.points[i - 1].action

        # 500 sampled truncation points per system: total dimension one,
        # concentrated in the parity of n, so the Euler value is (-1)^n
        srng = random.Random(9000 + trial)
        for _ in range(500):
            b = bars[srng.randrange(len(bars))]
            t = rational_between(b.birth, b.death)
            assert dim_at(bc, t) == 1
            assert dim_at(bc, t, b.degree) == 1
            assert (-1) ** b.degree == (-1) ** n
            samples += 1

        # euler_char is normalized by the dimension sign: profile (-1)^n
        rep = barcode_audit(bc, AuditOptions(
            half_dim_n=n, euler_char=1, primes=(2, 3, 5),
            window_top=res.points[-1].action))
        assert rep.ok, rep.to_json()["failures"][:3]
    assert samples == 10000
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0, f"staircase fleet took {elapsed:.2f}s"


def test_criterion_5_multiplicity_slot_filling():
    entries, build_seconds = _fleet()
    t0 = time.monotonic()
    for n, system, event in entries:
        assert all(k % 2 == 0 for k in event.k)
        assert all(d % 2 == 0 for d in event.d)
        rep = multiplicity_audit(system, event, max(event.k) + 100)
        assert rep.ok, rep.to_json()["failures"][:3]
        d = event.d[0]
        assert rep.interval == (d - n + 1, d + n - 1)
        assert len(rep.slots) == n
        assert all((s - n - 1) % 2 == 0 for s in rep.slots)
        assert sorted(rep.filled) == sorted(rep.slots)
        assert all(rep.filled[s] for s in rep.slots)
        assert rep.distinct_primes == n
        flat = {(it.name, it.label): it.ok for it in rep.items}
        assert flat[("gamma-minus", "all")]
        assert flat[("gamma-plus", "all")]
    elapsed = time.monotonic() - t0
    total = build_seconds + elapsed
    assert total < 10.0, f"event search {build_seconds:.2f}s " \
                         f"+ audits {elapsed:.2f}s"


def test_criterion_6_persistence_against_direct_homology():
    t0 = time.monotonic()
    checks = 0
    for trial in range(200):
        rng = random.Random(6001 + trial)
        char = (0, 2, 3, 5)[trial % 4]
        cx = random_filtered_complex(rng, max_generators=40, field_char=char)
        assert len(cx.generators) <= 40
        bc = barcode_from_filtered_complex(cx)
        filts = sorted((g.filtration for g in cx.generators), key=SortKey)
        uniq = [filts[0]]
        for v in filts[1:]:
            if SortKey(v) != SortKey(uniq[-1]):
                uniq.append(v)
        ts = [uniq[0], uniq[len(uniq) // 2], uniq[-1],
              uniq[-1] + exact(1)]
        if len(uniq) > 1:
            ts.append(rational_between(uniq[0], uniq[1]))
            ts.append(rational_between(uniq[-2], uniq[-1]))
            i = rng.randrange(len(uniq) - 1)
            ts.append(rational_between(uniq[i], uniq[i + 1]))
        for t in ts:
            for m in sorted({g.degree for g in cx.generators}):
                assert dim_at(bc, t, m) == homology_rank(cx, t, m)
                checks += 1
    assert checks >= 1200
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0, f"{checks} homology checks took {elapsed:.2f}s"


def test_criterion_7_beg_end_contract_and_negative_controls():
    entries, _ = _fleet()
    mutations = 0
    for trial, (n, system, _event) in enumerate(entries):
        res = _staircase(trial, system)
        bc, records = res.barcode, res.records
        rep = beg_end_assignment(bc, records)
        assert rep.ok
        assert len(rep.pairs) == len(bc.bars)

        bars = sorted(bc.bars, key=lambda b: SortKey(b.birth))
        mid = len(records) // 2
        r = records[mid]

        bumped = replace(r, dims={m: v + 1 for m, v in r.dims.items()})
        recs = list(records[:mid]) + [bumped] + list(records[mid + 1:])
        with pytest.raises(ZetaMismatch):
            beg_end_assignment(bc, recs)
        mutations += 1

        shifted = replace(r, action=rational_between(
            records[mid - 1].action, r.action))
        recs = list(records[:mid]) + [shifted] + list(records[mid + 1:])
        with pytest.raises(ZetaMismatch):
            beg_end_assignment(bc, recs)
        mutations += 1

        b = bars[mid]
        retagged = tuple(replace(x, degree=x.degree + 1) if x is b else x
                         for x in bc.bars)
        with pytest.raises(ZetaMismatch):
            beg_end_assignment(Barcode(retagged, bc.field_char), records)
        mutations += 1

        dropped = tuple(x for x in bc.bars if x is not b)
        with pytest.raises(ZetaMismatch):
            beg_end_assignment(Barcode(dropped, bc.field_char), records)
        mutations += 1
    assert mutations == 80


def test_criterion_8_chieq_invariance_and_degree_shift():
    rng = random.Random(8001)
    shear_forms = ("zero", "qplus", "qminus", "q0")

    def oracle_cz(path, k):
        total = 2 * path.loop * k
        for blk in path.blocks:
            if isinstance(blk, Rotation):
                v = approx(blk.lam)
                total += sign_of(v) * (2 * safe_floor(abs(v) * k) + 1)
            elif isinstance(blk, Hyperbolic):
                total += k * blk.h
            else:
                raise AssertionError("nondegenerate paths only")
        return total

    checked = 0
    for i in range(500):
        degree = rng.randint(-3, 11)
        if i % 5 == 4:
            # totally degenerate prime: shift is (k-1) mean indices and
            # the equivariant characteristic stays undefined at every k
            form = rng.choice(shear_forms)
            size = 1 if form == "q0" else rng.randint(1, 2)
            loop = rng.randint(1, 3)
            path = BlockPath(loop, (Shear(form, size),))
            rec = ClosedOrbitRecord(path, 1, degree=degree)
            for k in rng.sample(range(1, 100), 4):
                assert degree_shift_predict(rec, k) == \
                    degree + 2 * loop * (k - 1)
                with pytest.raises(ChieqUndefined):
                    chieq(ClosedOrbitRecord(path, k))
            checked += 1
            continue
        path = random_nondegenerate_path(rng)
        base = chieq(ClosedOrbitRecord(path, 1))
        rec = ClosedOrbitRecord(path, 1, degree=degree)
        odd_admissible = [k for k in range(1, 100, 2)
                          if is_admissible(path, k)]
        picks = rng.sample(odd_admissible, min(6, len(odd_admissible)))
        for k in picks:
            assert chieq(ClosedOrbitRecord(path, k)) == base
            assert degree_shift_predict(rec, k) == \
                degree + oracle_cz(path, k) - oracle_cz(path, 1)
        with pytest.raises(NotApplicable):
            degree_shift_predict(rec, 2)
        blocked = [k for k in range(3, 100, 2)
                   if not is_admissible(path, k)]
        if blocked:
            with pytest.raises(NotApplicable):
                degree_shift_predict(rec, blocked[0])
        checked += 1
    assert checked == 500


def test_criterion_9_ellipsoid_self_comparison_and_resonance_failure():
    entries, _ = _fleet()
    for _n, system, _event in entries:
        rep = ellipsoid_comparison(rescale_to_mean_index(system), 100)
        assert rep.ok
        assert all(it.ok for it in rep.items)

    # integer axis ratio: the two rotation residues collapse mod Z
    half = BlockPath(0, (Rotation(ExactReal.parse("1/2")),))
    loop = BlockPath(1, ())
    degen = OrbitSystem((Orbit(half, exact(1), "a"),
                         Orbit(loop, exact(2), "b")))
    with pytest.raises(NonResonanceFailed) as err:
        ellipsoid_comparison(degen, 10)
    msg = str(err.value)
    assert "+D1/D2" in msg and "-D1/D2" in msg
    assert "coincide mod Z" in msg
