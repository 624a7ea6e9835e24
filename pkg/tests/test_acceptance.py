"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line."""
import time

import numpy as np
import pytest

from jbstar.algebra import expi, involution, is_unitary, jordan_product, q_operator, triple_product, u_operator, unitary_isotope
from jbstar.checks import run_identity_suite
from jbstar.isometry import (
    OneParameterFamily,
    build_nonextendable_example,
    decompose_isometry,
    gauge_matrix,
    random_structured_isometry,
    stone_parameter,
    verify_inverted_triple_preservation,
)
from jbstar.models import ModelDescriptor as D, build_model, distance, random_selfadjoint, random_unitary
from jbstar.spectral import (
    generalized_inverse,
    is_positive_invertible_in_peirce2,
    random_regular,
    range_tripotent,
)
from jbstar.unitary import (
    UChainFactorization,
    adjoint_certificate,
    factor_path,
    factor_step,
    factor_step_raw,
    in_principal_component,
    square_action_certificate,
    winding_number,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nAC{number:<2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        return ok
    return emit


M3 = build_model(D.full(3))
S3 = build_model(D.symmetric(3))


def test_ac01_identity_suite(report):
    models = [D.full(2), D.full(3), D.full(4), D.symmetric(2), D.symmetric(3), D.circle(D.full(2), 64)]
    t0 = time.perf_counter()
    results = [r for d in models for r in run_identity_suite(d, samples=200, seed=2024, tol=1e-9)]
    elapsed = time.perf_counter() - t0
    failed = [r.name for r in results if not r.passed]
    worst = max(r.max_residual for r in results)
    ok = not failed and elapsed < 60
    report(1, "identity suite", ok,
           f"{len(models)} models x {len(results) // len(models)} checks x 200 samples, "
           f"max residual {worst:.2e}, {elapsed:.1f} s, failed {failed or 'none'}")
    assert not failed
    assert elapsed < 60


def _path(m, rng, steps=4):
    pts = [m.one()]
    for _ in range(steps):
        g = random_selfadjoint(m, rng, float(rng.uniform(0.05, 0.7)))
        pts.append(u_operator(expi(g), pts[-1]))
    return pts


def test_ac02_factorization_round_trip(report):
    rng = np.random.default_rng(2)
    worst = 0.0
    for m in (M3, S3):
        for _ in range(100):
            path = _path(m, rng)
            f = factor_path(path)
            worst = max(worst, distance(f.evaluate(m), path[-1]))
    ok = worst <= 1e-8
    report(2, "factorization round trip", ok, f"200 paths of length 5 (M3, Sym3), max endpoint error {worst:.2e}")
    assert ok


def test_ac03_logarithm_step(report):
    rng = np.random.default_rng(3)
    rec, sa, sym, count = 0.0, 0.0, 0.0, 0
    for m in (M3, S3):
        done = 0
        while done < 500:
            u = random_unitary(m, rng, float(rng.uniform(0.0, 3.0)))
            v = random_unitary(m, rng, float(rng.uniform(0.0, 3.0)))
            if distance(u, v) > 1.5:
                continue
            done += 1
            h = factor_step(u, v)
            ctx = unitary_isotope(u)
            rec = max(rec, distance(ctx.expi(h), v))
            sa = max(sa, distance(ctx.star(h), h))
            if m is S3:
                raw = factor_step_raw(u, v)[0]
                sym = max(sym, np.abs(raw - raw.T).max() / max(1.0, np.abs(raw).max()))
        count += done
    ok = rec <= 1e-8 and sa <= 1e-9 and sym <= 1e-9
    report(3, "logarithm step", ok,
           f"{count} pairs with ||u-v|| <= 1.5, exp_u(ih) error {rec:.2e}, "
           f"self-adjointness {sa:.2e}, symmetric-model asymmetry {sym:.2e}")
    assert ok


def test_ac04_spectral_suite(report):
    rng = np.random.default_rng(4)
    models = [M3, S3, build_model(D.direct_sum(D.full(2), D.symmetric(2))), build_model(D.circle(D.full(2), 32))]
    worst, bad, invertible = 0.0, 0, 0
    for i in range(200):
        m = models[i % len(models)]
        deficiency = int(rng.integers(0, 2))
        a = random_regular(m, rng, deficiency=deficiency)
        ad = generalized_inverse(a)
        # independent route: conjugate transpose of the Moore-Penrose pseudo-inverse
        pinv = np.conj(np.swapaxes(np.linalg.pinv(a.data), -1, -2))
        r = range_tripotent(a).e
        errs = [
            distance(q_operator(a, ad), a),
            np.abs(ad.data - pinv).max(),
            distance(triple_product(r, r, r), r),
        ]
        if not is_positive_invertible_in_peirce2(a, r, tol=1e-8):
            bad += 1
        if deficiency == 0:
            invertible += 1
            if not is_unitary(r, 1e-8):
                bad += 1
            errs.append(distance(ad, involution(m.wrap(np.linalg.inv(a.data)))))
        worst = max(worst, *errs)
    ok = worst <= 1e-8 and bad == 0
    report(4, "spectral suite", ok,
           f"200 regular elements ({invertible} invertible), max residual {worst:.2e}, failed predicates {bad}")
    assert ok


def test_ac05_winding_classification(report):
    scalar = build_model(D.circle(D.full(1), 256))
    sym = build_model(D.circle(D.symmetric(2), 256))
    lam = scalar.from_function(lambda z: z)
    frozen = [
        winding_number(scalar.one()) == 0,
        winding_number(lam) == 1,
        winding_number(scalar.from_function(lambda z: z * z)) == 2,
        winding_number(sym.from_function(lambda z: np.diag([z, 1.0]))) == 1,
    ]
    rng = np.random.default_rng(5)
    chains = []
    for i in range(100):
        m = (scalar, sym)[i % 2]
        hs = [random_selfadjoint(m, rng, float(rng.uniform(0.5, 4.0))) for _ in range(int(rng.integers(1, 5)))]
        chains.append(winding_number(UChainFactorization(hs).evaluate()))
    ok = all(frozen) and all(w == 0 for w in chains)
    report(5, "winding classification", ok,
           f"1, lambda, lambda^2, diag(lambda,1) -> {frozen}; 100 chain windings all zero: {all(w == 0 for w in chains)}")
    assert ok


def test_ac06_quadratic_closure(report):
    m = build_model(D.circle(D.symmetric(2), 256))
    rng = np.random.default_rng(6)
    worst, uncertified = 0.0, 0
    for _ in range(100):
        u = random_unitary(m, rng, float(rng.uniform(0.5, 3.0)))
        w = random_unitary(m, rng, float(rng.uniform(0.5, 3.0)))
        cu, cw = in_principal_component(u), in_principal_component(w)
        if not (cu and cw):
            uncertified += 1
            continue
        c_adj = adjoint_certificate(cw.certificate)
        c_sq = square_action_certificate(cw.certificate, cu.certificate)
        worst = max(worst, distance(c_adj.evaluate(), involution(w)), distance(c_sq.evaluate(), u_operator(w, u)))
        if not (in_principal_component(involution(w)) and in_principal_component(u_operator(w, u))):
            uncertified += 1
    mismatch = 0
    for _ in range(100):
        k = int(rng.integers(-3, 4))
        base = m.from_function(lambda z: np.diag([z ** k, 1.0]))
        u = u_operator(random_unitary(m, rng, 1.5), base)
        w = random_unitary(m, rng, float(rng.uniform(0.5, 3.0)))
        if winding_number(u_operator(w, u)) != winding_number(u):
            mismatch += 1
    ok = worst <= 1e-8 and uncertified == 0 and mismatch == 0
    report(6, "quadratic-subset closure", ok,
           f"100 principal pairs, certificate error {worst:.2e}, uncertified {uncertified}; "
           f"100 mixed pairs, winding mismatches {mismatch}")
    assert ok


def test_ac07_generator_recovery(report):
    rng = np.random.default_rng(7)
    models = [M3, S3, build_model(D.direct_sum(D.full(2), D.symmetric(2))), build_model(D.circle(D.full(2), 64))]
    worst = 0.0
    for i in range(50):
        m = models[i % len(models)]
        h = random_selfadjoint(m, rng, float(rng.uniform(0.05, 3.0)))
        est = stone_parameter(OneParameterFamily(lambda t, h=h: expi(h * t)))
        worst = max(worst, distance(est, h))
    ok = worst <= 1e-6
    report(7, "one-parameter group recovery", ok, f"50 families, ||h_est - h|| max {worst:.2e}")
    assert ok


def test_ac08_isometry_round_trip(report):
    models = [
        build_model(D.direct_sum(D.full(2), D.symmetric(2), D.full(1), D.full(1))),
        build_model(D.direct_sum(D.full(2), D.full(2), D.symmetric(2))),
        build_model(D.direct_sum(D.symmetric(2), D.symmetric(2), D.full(1))),
    ]
    rng = np.random.default_rng(8)
    p_err, proj_err, phi_err, rt_err, lengths = 0.0, 0.0, 0.0, 0.0, []
    for i in range(50):
        m = models[i % len(models)]
        delta = random_structured_isometry(m, rng, max_prefactors=3)
        lengths.append(len(delta.prefactors))
        rec = decompose_isometry(delta, m, seed=i)
        p = rec.p
        proj_err = max(proj_err, distance(jordan_product(p, p), p), distance(involution(p), p))
        p_err = max(p_err, distance(p, delta.p))
        phi_err = max(phi_err, float(np.abs(rec.phi - gauge_matrix(delta, rec) @ delta.phi).max()))
        for _ in range(100):
            u = random_unitary(m, rng, float(rng.uniform(0.1, 3.0)))
            rt_err = max(rt_err, distance(rec(u), delta(u)))
    ok = max(p_err, proj_err) <= 1e-8 and phi_err <= 1e-6 and rt_err <= 1e-6
    report(8, "isometry round trip", ok,
           f"50 isometries (prefactor counts {np.bincount(lengths, minlength=4).tolist()}), "
           f"p error {p_err:.2e}, projection residual {proj_err:.2e}, Phi error {phi_err:.2e}, "
           f"round trip on 100 unitaries each {rt_err:.2e}")
    assert ok


def test_ac09_inverted_triple_preservation(report):
    models = [
        build_model(D.direct_sum(D.full(2), D.symmetric(2), D.full(1))),
        M3,
        build_model(D.circle(D.symmetric(2), 64)),
    ]
    rng = np.random.default_rng(9)
    residual, b1, Ks, b2_members, b2_fail = 0.0, 0.0, [], 0, 0
    for i in range(100):
        m = models[i % len(models)]
        delta = random_structured_isometry(m, rng)
        u = random_unitary(m, rng, float(rng.uniform(0.1, 3.0)))
        v = u_operator(expi(random_selfadjoint(m, rng, float(rng.uniform(0.01, 0.24)))), u)
        rep = verify_inverted_triple_preservation(delta, u, v, b1_samples=5, b2_samples=2000, seed=i)
        residual = max(residual, rep.residual)
        b1 = max(b1, rep.b1_max_residual)
        Ks.append(rep.K)
        b2_members += rep.b2_members
        b2_fail += not rep.b2_holds
    ok = residual <= 1e-8 and min(Ks) > 1
    report(9, "inverted-triple preservation", ok,
           f"100 pairs, residual {residual:.2e}, K in [{min(Ks):.3f}, {max(Ks):.3f}], "
           f"reflection isometry residual {b1:.2e}, expansion-bound band members {b2_members} with {b2_fail} violations")
    assert ok


def test_ac10_nonextendable_example(report):
    details, ok = [], True
    for desc in (D.circle(D.full(1)), D.circle(D.symmetric(2))):
        ex = build_nonextendable_example(desc)
        rep = ex.verify(pairs=200, seed=10)
        good = (rep["max_isometry_defect"] <= 1e-9 and rep["max_cross_distance_defect"] <= 1e-9
                and rep["extendable"] is False)
        ok = ok and good
        details.append(f"{desc.fiber.kind}: isometry defect {rep['max_isometry_defect']:.1e}, "
                       f"cross distance defect {rep['max_cross_distance_defect']:.1e}, extendable {rep['extendable']}")
    report(10, "non-extendable example", ok, "200 pairs each; " + "; ".join(details))
    assert ok
