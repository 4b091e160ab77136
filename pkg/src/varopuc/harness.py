"""Acceptance suite: fourteen numerical criteria at pinned tolerances."""
from __future__ import annotations

import concurrent.futures as cf
import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np

from . import cmv, measures, ratio, spectral, specfun, szego, zeros
from .schedules import Constant, Periodic, SampledFunction, Table, coefficients, exponential, power, sine, sqrt_profile

SEED = 0x5EED


@dataclass
class Criterion:
    id: int
    description: str
    tolerance: str
    measured: float = math.nan
    passed: bool = False
    runtime: float = 0.0
    skipped: bool = False
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return (f"[{status}] criterion {self.id:2d}: {self.description} "
                f"(measured {self.measured:.3e}, tolerance {self.tolerance}, {self.runtime:.2f}s)")


def _rng():
    return np.random.default_rng(SEED)


def _random_disk(rng, size, rmax=0.95):
    return rmax * np.sqrt(rng.random(size)) * np.exp(2j * np.pi * rng.random(size))


def _unimodular(rng):
    return complex(np.exp(2j * np.pi * rng.random()))


# ---------------------------------------------------------------------------


def c01():
    rng = _rng()
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 13))
        al = _random_disk(rng, n)
        cp = cmv.charpoly(cmv.build_cutoff(al[:-1], al[-1]))
        ref = szego.opuc_pair(al)[0]
        worst = max(worst, float(np.max(np.abs(cp - ref)) / np.max(np.abs(ref))))
    return worst, worst <= 1e-10, {}


def c02():
    rng = _rng()
    worst = 0.0
    for n in range(1, 11):
        for _ in range(20):
            worst = max(worst, cmv.reflection_defect(_random_disk(rng, n - 1), _unimodular(rng)))
    return worst, worst <= 1e-12, {}


def c03():
    rng = _rng()
    worst = {}
    for n in (2, 17, 100, 501):
        C = cmv.build_cutoff(_random_disk(rng, n - 1), _unimodular(rng))
        worst[n] = cmv.unitarity_defect(C)
    m = max(worst.values())
    return m, m <= 1e-12, {"per_n": worst}


def c04():
    rng = _rng()
    dist = 0.0
    modulus = 0.0
    scheds = [SampledFunction(power(1.0)), Periodic(tuple(_random_disk(rng, 3))),
              Table({None: list(_random_disk(rng, 300))})]
    beta = np.exp(1j * np.pi / 3)
    for n in (50, 300):
        for s in scheds:
            a = zeros.popuc_zeros_phase(s, n, n, beta)
            b = zeros.popuc_zeros_eig(s, n, n, beta)
            dist = max(dist, zeros.matching_distance(a, b))
            modulus = max(modulus, float(np.max(np.abs(np.abs(b.zeros) - 1))))
    return dist, dist <= 1e-8 and modulus <= 1e-10, {"max_eig_modulus_defect": modulus}


def c05():
    rng = _rng()
    z = 3.0 * np.sqrt(rng.random(1000)) * np.exp(2j * np.pi * rng.random(1000))
    z = z[np.abs(np.abs(z) - 1) > 1e-3]
    g_err = 0.0
    for a in (0.0, 0.25, 0.5, 0.9, 1.0):
        G = spectral.g_a(z, a)
        g_err = max(g_err, float(np.max(np.abs((z - G) * (1 - G) - a * a * z) / (1 + np.abs(z) ** 2))))
        Gi = spectral.g_a(1 / np.conj(z), a)
        g_err = max(g_err, float(np.max(np.abs(np.conj(Gi) - G / z) / np.maximum(1, np.abs(G / z)))))
    web = 0.0
    schur = 0.0
    for alpha in _random_disk(rng, 10, 0.97):
        F, m, f = spectral.geronimus_functions(alpha, z)
        Fi, mi, fi = spectral.geronimus_functions(alpha, 1 / np.conj(z))
        web = max(web,
                  float(np.max(np.abs(F - (1 - 2 * z * m)))),
                  float(np.max(np.abs(f - m / (z * m - 1)))),
                  float(np.max(np.abs(np.conj(mi) - z * (1 - z * m)))),
                  float(np.max(np.abs(np.conj(fi) * f - 1))))
        zi = z[np.abs(z) < 1][:100]
        fs = spectral.periodic_schur([alpha], 0, zi)
        schur = max(schur, float(np.max(np.abs(spectral.geronimus_functions(alpha, zi)[2] - fs))))
    ok = g_err <= 1e-12 and web <= 1e-10 and schur <= 1e-10
    return max(g_err, web, schur), ok, {"g_property": g_err, "web": web, "schur": schur}


def c06():
    n = 300
    worst = 0.0
    beta = np.exp(0.7j)
    for s in (SampledFunction(power(1.0)), Periodic((0.3, 0.6j))):
        C = cmv.build_cutoff(coefficients(s, n - 1, n), beta)
        tr = cmv.trace_power_moments(C, 20)
        zs = zeros.popuc_zeros_phase(s, n, n, beta)
        mo = measures.moments(measures.Empirical(zs.zeros), 20)
        worst = max(worst, float(np.max(np.abs(tr - mo))))
    return worst, worst <= 1e-8, {}


def c07():
    errs = {}
    for a in (0.0, 0.25, 0.5, 0.9, 0.999):
        errs[f"nu_a({a})"] = abs(measures.total_mass(measures.nu_a(a)) - 1)
    for pair in ((0.3, 0.6j), (0.5, 0.5), (0.2, -0.7 + 0.1j)):
        errs[f"nu_delta{pair}"] = abs(measures.total_mass(measures.nu_delta(spectral.discriminant(pair))) - 1)
    for name, kw in (("power", {"omega": 1.0}), ("exp", {"zeta": 0.5}), ("sqrt", {}), ("sine", {})):
        errs[f"sigma_{name}"] = abs(measures.total_mass(measures.sigma_closed(name, 1.0, **kw)) - 1)
    m = max(errs.values())
    return m, m <= 1e-8, {k: float(v) for k, v in errs.items()}


def _ks_ladder(zero_fn, F, ladder):
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        for n in ladder:
            out.append(measures.kolmogorov_distance(zero_fn(n).zeros, F))
    return out


def c08():
    F = measures.cdf(measures.sigma_closed("power", 1.0, omega=1.0))
    s = SampledFunction(power(1.0))
    ks = _ks_ladder(lambda n: zeros.popuc_zeros_phase(s, n, n, 1.0), F, (200, 400, 800))
    ok = ks[0] > ks[1] > ks[2] and ks[2] <= 0.05
    return ks[2], ok, {"ks": ks}


def _exclusion_mask(theta, points, radius):
    keep = np.ones(theta.shape, dtype=bool)
    for b in points:
        keep &= np.abs(np.angle(np.exp(1j * (theta - b)))) > radius
    return keep


def c09():
    theta = 2 * np.pi * (np.arange(512) + 0.5) / 512
    cases = (("power", power(1.0), {"omega": 1.0}), ("exp", exponential(0.5), {"zeta": 0.5}),
             ("sqrt", sqrt_profile(), {}), ("sine", sine(1.0), {}))
    errs = {}
    for name, prof, kw in cases:
        closed = measures.sigma_closed(name, 1.0, **kw)
        num = measures.sigma_t_numeric(prof, 1.0)
        special = [x for seg in closed.segments() for x in seg] + closed.breakpoints + num.breakpoints
        keep = _exclusion_mask(theta, special, 1e-3)
        errs[name] = float(np.max(np.abs(num(theta[keep]) - closed(theta[keep]))))
    m = max(errs.values())
    return m, m <= 1e-6, errs


def c10():
    detail = {}
    ok = True
    worst = 0.0
    for z in (0.3, 2.0):
        for label, kind, sched, limit in (
            ("constant", "popuc_step", Constant(0.5), 0.5),
            ("two_periodic", "period_step", Periodic((0.3, 0.6j)), (0.3, 0.6j)),
        ):
            rep = ratio.convergence_report(kind, sched, 1.0, z, (100, 800))
            e100, e800 = (r["error"] for r in rep["rungs"])
            mp100, mp800 = ratio.mp_error_ladder(kind, limit, 1.0, z, (100, 800))
            detail[f"{label}@{z}"] = {"double": [e100, e800], "extended": [mp100, mp800]}
            ok &= e800 <= 5e-2 and mp800 < mp100
            worst = max(worst, e800)
    return worst, ok, detail


def c11():
    s = SampledFunction(exponential(0.5), shift=1.0)
    F = measures.cdf(measures.sigma_closed("exp", 1.0, zeta=0.5))
    fracs = []
    ks = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        for n in (200, 400, 800):
            zs = zeros.opuc_zeros(s, n, n)
            fracs.append(zeros.circle_proximity_profile(zs, [0.1])[0.1])
            ks.append(measures.kolmogorov_distance(zs.zeros, F))
    # non-increasing: the fraction is already 0 at every rung
    ok = fracs[0] >= fracs[1] >= fracs[2] and ks[2] <= 0.05
    return ks[2], ok, {"proximity_0.1": fracs, "ks": ks}


def c12():
    K = 256
    flat = measures.balayage(measures.Empirical([0j]), K)
    th = np.linspace(0, 2 * np.pi, 721)
    dev = float(np.max(np.abs(flat.density(th) - 1 / (2 * np.pi))))
    rng = _rng()
    pts = np.exp(2j * np.pi * rng.random(40))
    bal = measures.balayage(measures.Empirical(pts), K)
    fixed = float(np.max(np.abs(measures.moments(bal, K) - measures.moments(measures.Empirical(pts), K))))
    pot = abs(measures.log_potential(bal, 2.0) - measures.log_potential(measures.Empirical(pts), 2.0))
    m = max(dev, fixed, pot)
    return m, dev <= 1e-3 and fixed <= 1e-12 and pot <= 1e-12, {"flat": dev, "moments": fixed, "potential": pot}


def c13():
    errs = {}
    xs = np.linspace(0.05, 30, 400)
    errs["gamma"] = max(abs(specfun.gamma(x) / math.gamma(x) - 1) for x in xs)
    errs["gamma_half"] = abs(specfun.gamma(0.5) - math.sqrt(math.pi)) / math.sqrt(math.pi)
    h = 0.0
    for omega in (0.5, 1.0, 2.0, 3.0):
        a, b, c = 0.5, 1 / (2 * omega), (2 * omega + 1) / (2 * omega)
        for x in (0.0, 0.3, 0.7, 0.9, 0.95, 0.999, 1 - 1e-9, 1.0):
            ref = float(mpmath.hyp2f1(a, b, c, x))
            h = max(h, abs(specfun.hyp2f1(a, b, c, x) / ref - 1))
        gauss = math.sqrt(math.pi) * specfun.gamma(c) / specfun.gamma((omega + 1) / (2 * omega))
        h = max(h, abs(specfun.hyp2f1(a, b, c, 1.0) / gauss - 1))
        s1 = specfun.hyp2f1_series(a, b, c, 0.5, 200).value
        s2 = specfun.hyp2f1_series(a, b, c, 0.5, 400).value
        h = max(h, abs(s1 - s2))
    errs["hyp2f1"] = h
    errs["k0"] = abs(specfun.elliptic_k(0.0) - math.pi / 2)
    errs["k_agm"] = max(abs(specfun.elliptic_k(k) - math.pi / 2 * specfun.hyp2f1(0.5, 0.5, 1.0, k * k))
                        for k in np.linspace(0, 0.95, 96))
    errs["k_ref"] = max(abs(specfun.elliptic_k(k) / float(mpmath.ellipk(k * k)) - 1)
                        for k in np.linspace(0, 0.95, 96))
    m = max(errs.values())
    return m, m <= 1e-12, {k: float(v) for k, v in errs.items()}


def c14():
    z = 2.0
    U = measures.sigma_t_log_potential(power(1.0), 1.0, z)
    s = SampledFunction(power(1.0))
    errs = []
    for n in (200, 800):
        phi, _, logs = szego.evaluate_pair_at(coefficients(s, n, n), np.asarray(z, dtype=complex))
        errs.append(abs(-(math.log(abs(complex(phi))) + float(logs)) / n - U))
    return errs[1], errs[1] < errs[0] and errs[1] <= 5e-2, {"errors": errs, "potential": U}


# id, description, tolerance, estimated seconds, function
CRITERIA = (
    (1, "cut-off characteristic polynomial equals the recurrence", "rel 1e-10", 0.5, c01),
    (2, "reflection identity of the cut-off matrix", "1e-12", 0.5, c02),
    (3, "unitarity of the unimodular-terminated cut-off", "1e-12", 1.0, c03),
    (4, "phase zeros against eigenvalues", "1e-8 / moduli 1e-10", 4.0, c04),
    (5, "G_a identities, Geronimus web and Schur fixed point", "1e-12 / 1e-10 / 1e-10", 0.5, c05),
    (6, "trace moments equal zero moments", "1e-8", 2.0, c06),
    (7, "normalisation of limit densities", "1e-8", 2.0, c07),
    (8, "KS trend of POPUC zeros for alpha = n/N", "decreasing, <= 0.05", 3.0, c08),
    (9, "numerical sigma_t against closed forms", "1e-6", 6.0, c09),
    (10, "ratio limits: constant and two-periodic", "<= 5e-2, decreasing", 2.0, c10),
    (11, "OPUC zeros approach the circle; KS against the exp density", "non-increasing, <= 0.05", 15.0, c11),
    (12, "balayage of the origin and of circle measures", "1e-3 / 1e-12", 0.5, c12),
    (13, "special functions", "1e-12", 1.0, c13),
    (14, "log-potential of OPUC against the s-averaged G_a", "decreasing, <= 5e-2", 0.5, c14),
)


def run_criterion(cid: int) -> Criterion:
    for num, desc, tol, _, fn in CRITERIA:
        if num == cid:
            rec = Criterion(num, desc, tol)
            t0 = time.perf_counter()
            measured, passed, detail = fn()
            rec.runtime = time.perf_counter() - t0
            rec.measured = float(measured)
            rec.passed = bool(passed)
            rec.detail = detail
            return rec
    raise KeyError(f"no criterion {cid}")


def run_all(budget: float | None = None, only=None, jobs: int = 1) -> list[Criterion]:
    """Run the criteria in order, skipping those whose estimate exceeds the remaining budget.

    Without a budget and with ``jobs > 1`` the criteria run in a process pool.
    """
    if budget is None and jobs > 1:
        ids = [c[0] for c in CRITERIA if only is None or c[0] in only]
        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_criterion, ids))
    out = []
    spent = 0.0
    for num, desc, tol, est, _ in CRITERIA:
        if only is not None and num not in only:
            continue
        if budget is not None and spent + est > budget:
            out.append(Criterion(num, desc, tol, skipped=True))
            continue
        rec = run_criterion(num)
        spent += rec.runtime
        out.append(rec)
    return out


def report(records) -> str:
    return "\n".join(r.line() for r in records)


def to_json(records) -> str:
    def clean(v):
        if isinstance(v, dict):
            return {str(k): clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        if isinstance(v, (np.floating, float)):
            return None if math.isnan(v) else float(v)
        return v

    return json.dumps({"schema": 1, "seed": SEED, "criteria": [clean(asdict(r)) for r in records]}, indent=2)
