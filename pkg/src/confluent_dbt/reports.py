"""Named verification checks, their manifest, and the suite runner.

Every library-level invariant is packaged as a check with a stable id
`<module>.<name>`.  Checks are deterministic: sampling uses fixed seeds,
so two runs of the same selector produce byte-identical JSON apart from
the elapsed_ms fields.  The manifest is the single source of ordering;
a build-time assertion keeps it complete against the required invariant
list, and the `cli.manifest` check re-verifies that at run time.
"""

from __future__ import annotations

import json
import math
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import chains, classical, exactalg, isotonic, tdpt, verify
from .exactalg import ExactPoly, RationalFn, TrigGauged

SCHEMA = 1


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of one named check."""

    check_id: str
    spec: dict
    status: str  # pass | fail | skip
    witness: str  # nonempty when status != pass
    elapsed_ms: int

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "spec": self.spec,
            "status": self.status,
            "witness": self.witness,
            "elapsed_ms": self.elapsed_ms,
        }


@dataclass(frozen=True)
class SuiteCheck:
    check_id: str
    module: str
    description: str
    run: object  # () -> (ok, spec, witness)


def _fmt(x) -> str:
    return repr(float(x))


# -- exactalg ---------------------------------------------------------------------


def _rand_poly(rng, max_deg=6):
    deg = rng.randint(0, max_deg)
    coeffs = [
        Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(deg + 1)
    ]
    return ExactPoly(coeffs)


def _check_exactalg_antiderivative():
    rng = random.Random(11)
    for i in range(25):
        p = _rand_poly(rng)
        lower = Fraction(rng.randint(-3, 3), rng.randint(1, 4))
        a = p.antiderivative(lower=lower)
        if a.derivative() != p:
            return False, {"cases": 25}, f"derivative mismatch at case {i}"
        if a(lower) != 0:
            return False, {"cases": 25}, f"anchor value nonzero at case {i}"
    return True, {"cases": 25}, "round trip exact on 25 seeded polynomials"


def _check_exactalg_sturm():
    rng = random.Random(12)
    for i in range(20):
        k = rng.randint(1, 6)
        roots = sorted(
            rng.sample([Fraction(j, 3) for j in range(-12, 13)], k)
        )
        p = ExactPoly.one()
        for r in roots:
            p = p * ExactPoly([-r, 1])
        extra = 12 - p.degree()
        if extra >= 2:
            # pad with a rootless even factor to reach higher degree
            p = p * ExactPoly([1, 0, 1]) ** (extra // 2)
        lo, hi = Fraction(-5), Fraction(5)
        want = sum(1 for r in roots if lo < r < hi)
        got = exactalg.count_roots(p, lo, hi)
        if got != want:
            return (
                False,
                {"cases": 20, "max_degree": 12},
                f"case {i}: counted {got}, constructed {want}",
            )
    return True, {"cases": 20, "max_degree": 12}, "counts match constructions"


def _check_exactalg_coprime():
    rng = random.Random(13)
    for i in range(20):
        f = RationalFn(_rand_poly(rng, 4), _rand_poly(rng, 3) + 1)
        g = RationalFn(_rand_poly(rng, 3), _rand_poly(rng, 4) + 1)
        for h in (f + g, f * g, f - g):
            if h.num.is_zero:
                continue
            if h.num.gcd(h.den).degree() != 0:
                return False, {"cases": 20}, f"common factor survives at case {i}"
            if h.den.lc() != 1:
                return False, {"cases": 20}, f"denominator not monic at case {i}"
    return True, {"cases": 20}, "results stay coprime with monic denominators"


def _check_exactalg_wronskian():
    base = classical.TrigPoschlTeller(1, 2)
    f, g = base.eigenstate(0), base.eigenstate(2)
    if exactalg.wronskian([f, g]) != -1 * exactalg.wronskian([g, f]):
        return False, {}, "pair Wronskian not antisymmetric"
    if not exactalg.wronskian([f, f]).is_zero:
        return False, {}, "Wronskian of a repeated function is nonzero"
    return True, {}, "antisymmetry and degeneracy hold"


# -- classical --------------------------------------------------------------------


def _check_classical_jacobi_ode():
    for n in range(9):
        for a in range(1, 5):
            for b in range(1, 5):
                p = classical.jacobi(n, a, b)
                dp, ddp = p.derivative(), p.derivative().derivative()
                lhs = (
                    ExactPoly([1, 0, -1]) * ddp
                    + ExactPoly([b - a, -(a + b + 2)]) * dp
                    + Fraction(n * (n + a + b + 1)) * p
                )
                if not lhs.is_zero:
                    return (
                        False,
                        {"n_max": 8, "param_max": 4},
                        f"residual nonzero at (n,a,b)=({n},{a},{b})",
                    )
    return True, {"n_max": 8, "param_max": 4}, "all residuals identically zero"


def _check_classical_laguerre_ode():
    for n in range(9):
        for a in range(-4, 5):
            p = classical.laguerre(n, a)
            dp, ddp = p.derivative(), p.derivative().derivative()
            lhs = (
                ExactPoly([0, 1]) * ddp
                + ExactPoly([a + 1, -1]) * dp
                + Fraction(n) * p
            )
            if not lhs.is_zero:
                return (
                    False,
                    {"n_max": 8, "alpha_range": [-4, 4]},
                    f"residual nonzero at (n,alpha)=({n},{a})",
                )
    return True, {"n_max": 8, "alpha_range": [-4, 4]}, "all residuals identically zero"


def _check_classical_derivatives():
    for n in range(1, 7):
        for a in range(1, 4):
            for b in range(1, 4):
                want = Fraction(n + a + b + 1, 2) * classical.jacobi(
                    n - 1, a + 1, b + 1
                )
                if classical.jacobi(n, a, b).derivative() != want:
                    return False, {}, f"Jacobi derivative at ({n},{a},{b})"
        for a in range(-3, 4):
            want = -1 * classical.laguerre(n - 1, a + 1)
            if classical.laguerre(n, a).derivative() != want:
                return False, {}, f"Laguerre derivative at ({n},{a})"
    return True, {}, "derivative identities exact"


def _check_classical_orthogonality():
    base = classical.TrigPoschlTeller(2, 1)
    fns = [base.eigenstate(k).eval_x for k in range(5)]
    vals, _ = verify.gram_matrix(fns, 1e-9, math.pi / 2 - 1e-9)
    worst = verify.max_offdiagonal_relative(vals)
    ok = worst < 1e-12
    spec = {"family": "trigonometric", "levels": 5, "tolerance": 1e-12}
    if not ok:
        return False, spec, f"off-diagonal mass {_fmt(worst)}"
    iso = classical.IsotonicOscillator(2)
    fns = [
        (lambda x, k=k: iso.eigenstate(k).eval_x(x, 1.0)) for k in range(5)
    ]
    vals, _ = verify.gram_matrix(fns, 0.0, math.inf)
    worst2 = verify.max_offdiagonal_relative(vals)
    if worst2 >= 1e-12:
        return False, spec, f"radial off-diagonal mass {_fmt(worst2)}"
    return True, spec, f"off-diagonal mass {_fmt(max(worst, worst2))}"


# -- tdpt -------------------------------------------------------------------------


def _check_tdpt_monotone():
    for n in range(4):
        for N in range(1, 4):
            for M in range(1, 4):
                q = tdpt.q_poly(n, N, M)
                p = classical.jacobi(n, N, M)
                want = (
                    ExactPoly([1, -1]) ** N
                    * ExactPoly([1, 1]) ** M
                    * p
                    * p
                    * Fraction(-1, 2)
                )
                if q.derivative() != want:
                    return False, {}, f"derivative form at ({n},{N},{M})"
    return True, {}, "Q' is minus half the squared-state weight, exactly"


def _check_tdpt_endpoints():
    for n in range(6):
        for N in range(1, 5):
            for M in range(1, 5):
                q = tdpt.q_poly(n, N, M)
                if q(Fraction(-1)) != 0:
                    return False, {}, f"Q(-1) != 0 at ({n},{N},{M})"
                if q(Fraction(1)) != tdpt.q_at_one(n, N, M):
                    return False, {}, f"Q(1) mismatch at ({n},{N},{M})"
    return True, {"n_max": 5, "param_max": 4}, "endpoint values exact"


def _check_tdpt_orthogonality():
    worst = 0.0
    for spec in (tdpt.TdptSpec(0, 1, 1, 1), tdpt.TdptSpec(1, 2, 1, -2)):
        fns = [tdpt.eigenfunction(spec, k).eval_x for k in range(7)]
        vals, _ = verify.gram_matrix(fns, 1e-8, math.pi / 2 - 1e-8)
        worst = max(worst, verify.max_offdiagonal_relative(vals))
    ok = worst < 1e-10
    spec_d = {"specs": [[0, 1, 1, "1"], [1, 2, 1, "-2"]], "k_max": 6}
    return ok, spec_d, f"max relative off-diagonal {_fmt(worst)}"


def _check_tdpt_shape():
    for n in (1, 2, 3):
        for N in (1, 2, 3):
            for M in (1, 2, 3):
                if not tdpt.shape_invariance_holds(n, N, M, Fraction(5, 3)):
                    return False, {}, f"residual nonzero at ({n},{N},{M})"
    broken, _, _ = tdpt.shape_invariance_residual(1, 1, 1, 1, c_factor=2)
    if broken.is_zero:
        return False, {}, "negative control did not break the identity"
    return True, {"cases": 27}, "identity exact on 27 cases, control breaks it"


def _check_tdpt_regularity():
    rng = random.Random(20240818)
    for n, N, M in [(0, 1, 1), (1, 1, 1), (2, 2, 1), (1, 2, 3)]:
        thr = tdpt.regularity_threshold(n, N, M)
        for _ in range(50):
            lam = Fraction(rng.randint(-60, 60), rng.randint(1, 40)) * thr
            predicted = tdpt.is_regular(n, N, M, lam)
            certified, _ = tdpt.certify_regularity(tdpt.TdptSpec(n, N, M, lam))
            if predicted != certified:
                return (
                    False,
                    {"samples": 50},
                    f"disagreement at ({n},{N},{M}), lambda1={lam}",
                )
    return True, {"samples": 50}, "predicate and certificate agree"


def _check_tdpt_window():
    rng = random.Random(7)
    for n, N, M in [(1, 1, 1), (2, 1, 2), (3, 2, 2)]:
        thr = tdpt.regularity_threshold(n, N, M)
        if tdpt.lambda1_shifted(n, N, M, thr) != tdpt.regularity_threshold(
            n - 1, N + 1, M + 1
        ):
            return False, {}, f"threshold mismatch at ({n},{N},{M})"
        for _ in range(25):
            lam = Fraction(rng.randint(-50, 50), rng.randint(1, 30)) * thr
            if tdpt.is_regular(n, N, M, lam) != tdpt.is_regular(
                n - 1, N + 1, M + 1, tdpt.lambda1_shifted(n, N, M, lam)
            ):
                return False, {}, f"regime flip at ({n},{N},{M}), lambda1={lam}"
    return True, {"samples": 25}, "shifted constant keeps its regularity regime"


def _check_tdpt_spectrum():
    spec = tdpt.TdptSpec(0, 1, 1, 1)
    result, expected = tdpt.isospectrality_witness(spec, 3, grid_n=2000)
    worst = max(
        abs(g - w) / max(1.0, abs(w)) for g, w in zip(result.energies, expected)
    )
    ok = worst < 1e-4 and result.node_counts == (0, 1, 2)
    return (
        ok,
        {"spec": spec.as_dict(), "levels": 3, "tolerance": 1e-4},
        f"max relative deviation {_fmt(worst)}, nodes {list(result.node_counts)}",
    )


# -- isotonic ---------------------------------------------------------------------


def _check_isotonic_ode_identity():
    for n in range(5):
        for N in range(1, 5):
            q = isotonic.q_poly(n, N)
            ln = classical.laguerre(n, N)
            if q.derivative() - q != ExactPoly([0, 1]) ** N * ln * ln:
                return False, {}, f"ODE identity fails at ({n},{N})"
            if q != isotonic.q_poly_via_ode(n, N):
                return False, {}, f"construction routes split at ({n},{N})"
    return True, {"n_max": 4, "N_max": 4}, "both routes solve Q' - Q = z^N L^2"


def _check_isotonic_endpoints():
    for n in range(6):
        for N in range(1, 5):
            if isotonic.q_poly(n, N)(Fraction(0)) != isotonic.q_at_zero(n, N):
                return False, {}, f"Q(0) mismatch at ({n},{N})"
    return True, {"n_max": 5, "N_max": 4}, "Q(0) = -(n+N)!/n! exact"


def _check_isotonic_rootless():
    for n in range(6):
        for N in range(1, 5):
            ok, witness = isotonic.rootless_certificate(n, N)
            if not ok:
                return (
                    False,
                    {"n_max": 5, "N_max": 4},
                    f"root certified at ({n},{N}): {witness.intervals}",
                )
    return True, {"n_max": 5, "N_max": 4}, "no roots on the half line"


def _check_isotonic_orthogonality():
    spec = isotonic.IsotonicSpec(1, 1)
    omega = 2.0
    fns = [
        (lambda x, f=isotonic.eigenfunction(spec, k): f.eval_x(x, omega))
        for k in (0, 2, 3, 4, 5)
    ]
    vals, _ = verify.gram_matrix(fns, 0.0, math.inf)
    worst = verify.max_offdiagonal_relative(vals)
    return (
        worst < 1e-10,
        {"spec": spec.as_dict(), "levels": [0, 2, 3, 4, 5]},
        f"max relative off-diagonal {_fmt(worst)}",
    )


def _check_isotonic_residuals():
    spec = isotonic.IsotonicSpec(1, 1)
    pot = isotonic.extended_potential(spec)
    for k in (0, 2, 3):
        res = verify.exact_ode_residual(
            isotonic.eigenfunction(spec, k), pot.zform_units, 2 * k
        )
        if not res.is_zero:
            return False, {}, f"residual nonzero at level {k}"
    res = verify.exact_ode_residual(
        isotonic.deleted_state(spec), pot.zform_units, 2 * spec.n
    )
    if not res.is_zero:
        return False, {}, "deleted-state residual nonzero"
    return True, {"spec": spec.as_dict()}, "all residuals identically zero"


def _check_isotonic_boundary():
    spec = isotonic.IsotonicSpec(1, 1)
    for k in (0, 2, 3):
        f = isotonic.eigenfunction(spec, k)
        vals = [abs(f.eval_x(x, 2.0)) for x in (0.01, 0.001)]
        slope = math.log10(vals[0] / vals[1])
        if not 1.4 < slope < 1.6:
            return False, {}, f"boundary exponent off at level {k}: {slope}"
    return True, {"spec": spec.as_dict()}, "states vanish at the origin as x^(3/2)"


def _check_isotonic_spectrum():
    spec = isotonic.IsotonicSpec(1, 1)
    result, expected = isotonic.quasi_isospectrality_witness(
        spec, 2.0, 4, grid_n=2000
    )
    worst = max(abs(g - w) for g, w in zip(result.energies, expected))
    ok = worst < 5e-4 and result.node_counts == (0, 1, 2, 3)
    return (
        ok,
        {"spec": spec.as_dict(), "omega": 2.0, "levels": 4, "tolerance": 5e-4},
        f"max absolute deviation {_fmt(worst)}, nodes {list(result.node_counts)}",
    )


# -- chains -----------------------------------------------------------------------


def _check_chains_inverse():
    seed, v = chains.tdpt_seed(0, 1, 1)
    v1, _ = chains.dbt_apply(seed, v)
    inverse = chains.SeedFunction(
        f=lambda x: 1.0 / seed.f(x),
        df=lambda x: -seed.df(x) / seed.f(x) ** 2,
        energy=seed.energy,
        domain=seed.domain,
        x0=seed.x0,
    )
    v0, _ = chains.dbt_apply(inverse, v1)
    worst = max(abs(v0(x) - v(x)) for x in np.linspace(0.1, 1.4, 12))
    return (
        worst < 1e-9,
        {"tolerance": 1e-9},
        f"max recovery deviation {_fmt(worst)}",
    )


def _check_chains_energy():
    seed, v = chains.tdpt_seed(0, 1, 1)
    vt, transform = chains.confluent_two_step(seed, v, 1.0)
    base = classical.TrigPoschlTeller(1, 1)
    g = base.eigenstate(1)
    e1 = float(base.energy(1))
    gt = transform(g.eval_x, g.d_dx().eval_x, e1)
    worst = 0.0
    for x in (0.5, 0.9):
        h = 1e-2
        dd = (
            -gt(x - 2 * h)
            + 16 * gt(x - h)
            - 30 * gt(x)
            + 16 * gt(x + h)
            - gt(x + 2 * h)
        ) / (12 * h * h)
        lhs = -dd + vt(x) * gt(x)
        worst = max(worst, abs(lhs - e1 * gt(x)) / max(abs(e1 * gt(x)), 1.0))
    return (
        worst < 1e-6,
        {"tolerance": 1e-6},
        f"max relative residual {_fmt(worst)}",
    )


def _check_chains_scaling():
    seed, v = chains.tdpt_seed(0, 1, 1)
    vt, _ = chains.confluent_two_step(seed, v, 1.0)
    vt2, _ = chains.confluent_two_step(chains.scaled_seed(seed, 3.0), v, 9.0)
    worst = max(abs(vt(x) - vt2(x)) for x in (0.2, 0.6, 1.0, 1.4))
    return (
        worst < 1e-10,
        {"scale": 3.0, "tolerance": 1e-10},
        f"max deviation {_fmt(worst)}",
    )


# -- verify -----------------------------------------------------------------------


def _check_verify_linearity():
    base = classical.TrigPoschlTeller(2, 1)
    vz = base.v_zform()
    e = base.energy(1)
    f = base.eigenstate(1)
    g = TrigGauged(f.a, f.b, RationalFn(ExactPoly([1, -2, 3])))
    lhs = verify.exact_ode_residual(f + g, vz, e)
    rhs = verify.exact_ode_residual(f, vz, e) + verify.exact_ode_residual(g, vz, e)
    if lhs != rhs:
        return False, {}, "residual is not additive"
    return True, {}, "residual additive over gauged sums"


def _check_verify_order():
    a, b = verify.tdpt_domain()
    r1 = verify.convergence_order_ratio(
        classical.TrigPoschlTeller(1, 1).v, a, b, grid_n=1000
    )
    iso = classical.IsotonicOscillator(1)
    lo, hi = verify.isotonic_domain(2.0, 16.0)
    r2 = verify.convergence_order_ratio(
        lambda x: iso.v(x, 2.0), lo, hi, grid_n=1000
    )
    ok = 3.6 < r1 < 4.4 and 3.6 < r2 < 4.4
    return (
        ok,
        {"window": [3.6, 4.4]},
        f"ratios {_fmt(r1)}, {_fmt(r2)}",
    )


def _check_verify_gram():
    fns = [lambda x, k=k: math.sin(k * x) for k in (1, 2, 3)]
    vals, _ = verify.gram_matrix(fns, 0.0, math.pi)
    if any(vals[j][j] <= 0 for j in range(3)):
        return False, {}, "non-positive diagonal"
    worst = verify.max_offdiagonal_relative(vals)
    if worst >= 1e-12:
        return False, {}, f"off-diagonal mass {_fmt(worst)}"
    return True, {}, "diagonal positive, off-diagonal at quadrature floor"


# -- cli --------------------------------------------------------------------------


def _fast_subset_payload():
    ids = ["exactalg.antiderivative", "exactalg.coprime", "classical.derivatives"]
    reports = [run_check(i) for i in ids]
    return json.dumps(
        [
            {k: v for k, v in r.to_json().items() if k != "elapsed_ms"}
            for r in reports
        ],
        sort_keys=True,
    )


def _check_cli_determinism():
    first = _fast_subset_payload()
    second = _fast_subset_payload()
    if first != second:
        return False, {}, "two runs of the same subset differ"
    return True, {"subset_size": 3}, "repeated runs byte-identical"


def _check_cli_manifest():
    ids = [c.check_id for c in MANIFEST]
    missing = [i for i in REQUIRED_INVARIANTS if i not in ids]
    if missing:
        return False, {}, f"manifest missing {missing}"
    if len(set(ids)) != len(ids):
        return False, {}, "duplicate check ids"
    if any(not c.description for c in MANIFEST):
        return False, {}, "empty description"
    if any(c.check_id.split(".")[0] != c.module for c in MANIFEST):
        return False, {}, "module field disagrees with check id prefix"
    return (
        True,
        {"checks": len(ids), "required": len(REQUIRED_INVARIANTS)},
        "manifest covers every required invariant",
    )


# -- manifest ---------------------------------------------------------------------

REQUIRED_INVARIANTS = (
    "exactalg.antiderivative",
    "exactalg.sturm",
    "exactalg.coprime",
    "exactalg.wronskian",
    "classical.jacobi-ode",
    "classical.laguerre-ode",
    "classical.derivatives",
    "classical.orthogonality",
    "tdpt.monotone",
    "tdpt.endpoints",
    "tdpt.orthogonality",
    "tdpt.shape",
    "tdpt.regularity",
    "tdpt.window",
    "isotonic.ode-identity",
    "isotonic.endpoints",
    "isotonic.rootless",
    "isotonic.orthogonality",
    "isotonic.residuals",
    "isotonic.boundary",
    "chains.inverse",
    "chains.energy",
    "chains.scaling",
    "verify.linearity",
    "verify.order",
    "verify.gram",
    "cli.determinism",
    "cli.manifest",
)

MANIFEST = (
    SuiteCheck(
        "exactalg.antiderivative",
        "exactalg",
        "antiderivative anchored at a point differentiates back exactly",
        _check_exactalg_antiderivative,
    ),
    SuiteCheck(
        "exactalg.sturm",
        "exactalg",
        "Sturm root counts match constructed root sets up to degree 12",
        _check_exactalg_sturm,
    ),
    SuiteCheck(
        "exactalg.coprime",
        "exactalg",
        "rational-function arithmetic keeps numerator and denominator coprime",
        _check_exactalg_coprime,
    ),
    SuiteCheck(
        "exactalg.wronskian",
        "exactalg",
        "Wronskian is antisymmetric and vanishes on repeats",
        _check_exactalg_wronskian,
    ),
    SuiteCheck(
        "classical.jacobi-ode",
        "classical",
        "Jacobi polynomials solve their differential equation exactly",
        _check_classical_jacobi_ode,
    ),
    SuiteCheck(
        "classical.laguerre-ode",
        "classical",
        "Laguerre polynomials solve their differential equation exactly",
        _check_classical_laguerre_ode,
    ),
    SuiteCheck(
        "classical.derivatives",
        "classical",
        "derivative identities shift the polynomial parameters exactly",
        _check_classical_derivatives,
    ),
    SuiteCheck(
        "classical.orthogonality",
        "classical",
        "bound states of both base potentials are numerically orthogonal",
        _check_classical_orthogonality,
    ),
    SuiteCheck(
        "tdpt.monotone",
        "tdpt",
        "cumulative-norm polynomial is exactly monotone on the interval",
        _check_tdpt_monotone,
    ),
    SuiteCheck(
        "tdpt.endpoints",
        "tdpt",
        "cumulative-norm endpoint values match the closed forms",
        _check_tdpt_endpoints,
    ),
    SuiteCheck(
        "tdpt.orthogonality",
        "tdpt",
        "extension bound states are orthogonal under quadrature",
        _check_tdpt_orthogonality,
    ),
    SuiteCheck(
        "tdpt.shape",
        "tdpt",
        "enlarged shape-invariance identity holds exactly on 27 cases",
        _check_tdpt_shape,
    ),
    SuiteCheck(
        "tdpt.regularity",
        "tdpt",
        "regularity predicate agrees with the Sturm certificate",
        _check_tdpt_regularity,
    ),
    SuiteCheck(
        "tdpt.window",
        "tdpt",
        "shifted integration constant keeps its regularity regime",
        _check_tdpt_window,
    ),
    SuiteCheck(
        "tdpt.spectrum",
        "tdpt",
        "extension spectrum is numerically unchanged",
        _check_tdpt_spectrum,
    ),
    SuiteCheck(
        "isotonic.ode-identity",
        "isotonic",
        "both construction routes solve the first-order identity",
        _check_isotonic_ode_identity,
    ),
    SuiteCheck(
        "isotonic.endpoints",
        "isotonic",
        "cumulative-norm value at the origin matches the closed form",
        _check_isotonic_endpoints,
    ),
    SuiteCheck(
        "isotonic.rootless",
        "isotonic",
        "denominator polynomial has no roots on the half line",
        _check_isotonic_rootless,
    ),
    SuiteCheck(
        "isotonic.orthogonality",
        "isotonic",
        "surviving bound states are orthogonal under quadrature",
        _check_isotonic_orthogonality,
    ),
    SuiteCheck(
        "isotonic.residuals",
        "isotonic",
        "extension states satisfy the exact equation, deleted state included",
        _check_isotonic_residuals,
    ),
    SuiteCheck(
        "isotonic.boundary",
        "isotonic",
        "extension states vanish at the origin with the right exponent",
        _check_isotonic_boundary,
    ),
    SuiteCheck(
        "isotonic.spectrum",
        "isotonic",
        "extension spectrum equals the punctured ladder numerically",
        _check_isotonic_spectrum,
    ),
    SuiteCheck(
        "chains.inverse",
        "chains",
        "reciprocal-seed step undoes a one-step transform",
        _check_chains_inverse,
    ),
    SuiteCheck(
        "chains.energy",
        "chains",
        "two-step state map preserves the mapped energy",
        _check_chains_energy,
    ),
    SuiteCheck(
        "chains.scaling",
        "chains",
        "seed rescaling with matched constant is a gauge move",
        _check_chains_scaling,
    ),
    SuiteCheck(
        "verify.linearity",
        "verify",
        "exact residual operator is additive",
        _check_verify_linearity,
    ),
    SuiteCheck(
        "verify.order",
        "verify",
        "finite-difference eigenvalues converge at second order",
        _check_verify_order,
    ),
    SuiteCheck(
        "verify.gram",
        "verify",
        "Gram diagonals positive, off-diagonals at the quadrature floor",
        _check_verify_gram,
    ),
    SuiteCheck(
        "cli.determinism",
        "cli",
        "repeated check runs serialize byte-identically",
        _check_cli_determinism,
    ),
    SuiteCheck(
        "cli.manifest",
        "cli",
        "manifest covers every required invariant exactly once",
        _check_cli_manifest,
    ),
)

_BY_ID = {c.check_id: c for c in MANIFEST}

_missing = [i for i in REQUIRED_INVARIANTS if i not in _BY_ID]
assert not _missing, f"manifest incomplete: {_missing}"


def manifest_rows():
    """(check_id, module, description) rows in suite order."""
    return [(c.check_id, c.module, c.description) for c in MANIFEST]


def make_report(check_id: str, fn) -> VerifyReport:
    """Time a check body and wrap it as a VerifyReport.

    `fn` returns (status, spec, witness) where status is a bool or one of
    the literal report states; an exception is recorded as a failure."""
    t0 = time.perf_counter()
    try:
        status, spec, witness = fn()
        if not isinstance(status, str):
            # bool or numpy bool truthiness
            status = "pass" if status else "fail"
    except Exception as exc:  # a crashed check is a failed check
        status, spec, witness = "fail", {}, f"{type(exc).__name__}: {exc}"
    elapsed = int(round((time.perf_counter() - t0) * 1000.0))
    if status != "pass" and not witness:
        witness = "check reported failure without detail"
    return VerifyReport(check_id, spec, status, witness, elapsed)


def run_check(check_id: str) -> VerifyReport:
    return make_report(check_id, _BY_ID[check_id].run)


def select_checks(selector: str):
    """Resolve 'all', a module name, or a full check id to manifest order."""
    if selector == "all":
        return list(MANIFEST)
    if selector in _BY_ID:
        return [_BY_ID[selector]]
    chosen = [c for c in MANIFEST if c.check_id.split(".")[0] == selector]
    if not chosen:
        raise KeyError(selector)
    return chosen


def thread_cap() -> int:
    raw = os.environ.get("CONFLUENT_DBT_THREADS", "")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"CONFLUENT_DBT_THREADS must be an integer: {raw!r}")
        if n < 1:
            raise ValueError("CONFLUENT_DBT_THREADS must be >= 1")
        return n
    return min(8, os.cpu_count() or 1)


def run_suite(selector: str = "all") -> dict:
    """Run the selected checks (manifest order) and report as JSON data."""
    checks = select_checks(selector)
    workers = thread_cap()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(lambda c: run_check(c.check_id), checks))
    failed = [r.check_id for r in reports if r.status == "fail"]
    return {
        "schema": SCHEMA,
        "selector": selector,
        "checks": [r.to_json() for r in reports],
        "counts": {
            "pass": sum(1 for r in reports if r.status == "pass"),
            "fail": len(failed),
            "skip": sum(1 for r in reports if r.status == "skip"),
        },
        "failed": failed,
    }
