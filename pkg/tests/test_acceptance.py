"""Acceptance criteria 1-9. Each test prints one PASS/FAIL line and enforces its time limit."""
import time

import numpy as np
import pytest

from cleftlab import cleft as C
from cleftlab import harness as H
from cleftlab import linalg as la
from cleftlab.algebra import Algebra, isomorphic_by_permutation, semisimple, type_a
from cleftlab.homology import is_projective, simple, tau
from cleftlab.rep import Module, ThetaData, is_isomorphic, iso_indecomposable
from conftest import kx2


@pytest.fixture
def say(capsys):
    def emit(n, ok, seconds, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({seconds:.1f}s) {detail}".rstrip())
    return emit


def test_criterion_1_linalg(say):
    start = time.perf_counter()
    rng = np.random.default_rng(20240601)
    bad = []
    for trial in range(1000):
        p = (2, 3)[trial % 2]
        r, c = rng.integers(1, 9, 2)
        a = rng.integers(0, p, (r, c))
        rk = la.rank(a, p)
        ker = la.kernel(a, p)
        if rk + ker.shape[1] != c or ((a @ ker) % p).any():
            bad.append(("rank-nullity", trial))
        x0 = rng.integers(0, p, c)
        x = la.solve(a, (a @ x0) % p, p)
        if x is None or ((a @ x - a @ x0) % p).any():
            bad.append(("solve", trial))
        b = rng.integers(0, p, r)
        x = la.solve(a, b, p)
        consistent = la.rank(np.column_stack([a, b]), p) == rk
        if (x is None) == consistent or (x is not None and ((a @ x - b) % p).any()):
            bad.append(("solve-consistency", trial))
        sub = la.column_space(a, p)
        proj, section, dim = la.quotient_with_section(r, sub, p)
        if dim != r - rk or ((proj @ sub) % p).any() or not np.array_equal((proj @ section) % p, la.identity(dim)):
            bad.append(("quotient", trial))
    secs = time.perf_counter() - start
    ok = not bad and secs < 5
    say(1, ok, secs, f"1000 matrices, failures {bad[:3]}")
    assert ok


def test_criterion_2_structure(say):
    start = time.perf_counter()
    dims = [type_a(n).dim for n in range(1, 5)]
    a2 = type_a(2)
    cats = list(H.catalog_typeA(2, algebra=a2)), list(H.catalog_bruteforce(a2, 2))
    same_cat = len(cats[0]) == len(cats[1]) and all(any(iso_indecomposable(x, y) for y in cats[1]) for x in cats[0])
    r = semisimple(2)
    tr = C.tensor_ring(r, C.arrow_bimodule(r, [("1", "2")]), 2).total
    perm = isomorphic_by_permutation(tr, a2)
    secs = time.perf_counter() - start
    ok = dims == [n * (n + 1) // 2 for n in range(1, 5)] and same_cat and perm is not None and secs < 30
    say(2, ok, secs, f"dims {dims}, catalogs agree {same_cat}, tensor ring ≅ kA2 {perm is not None}")
    assert ok


def test_criterion_3_tau(say):
    start = time.perf_counter()
    a2 = type_a(2)
    t1 = is_isomorphic(tau(simple(a2, 0)), simple(a2, 1))
    r = kx2()
    k = H.catalog_bruteforce(r, 1)[0]
    t2 = is_isomorphic(tau(k), k)
    mismatches = []
    for key in H.SHIPPED:
        s = H.shipped(key)
        for cat in (s.cat_r, s.cat_t):
            for m in cat:
                if (tau(m).dim == 0) != is_projective(m):
                    mismatches.append((key, m.name))
    secs = time.perf_counter() - start
    ok = t1 and t2 and not mismatches and secs < 10
    say(3, ok, secs, f"τS1≅S2 {t1}, τk≅k {t2}, τ=0 ⇔ projective mismatches {mismatches}")
    assert ok


def test_criterion_4_enumeration(say):
    start = time.perf_counter()
    a = type_a(2)
    cat = H.catalog_typeA(2, algebra=a)
    stt = sorted(idx for idx, _ in H.enumerate_support_tau_tilting(a, cat))
    sweep = sorted(idx for idx, _ in H.enumerate_silting_sweep(a, cat))
    pred = sorted(idx for idx, _ in H.enumerate_silting_predicate(a, cat))
    secs = time.perf_counter() - start
    ok = len(stt) == 5 and stt == sweep == pred and secs < 60
    say(4, ok, secs, f"support τ-tilting {len(stt)}, sweep {len(sweep)}, predicate {len(pred)}")
    assert ok


def test_criterion_5_lemmas(say):
    start = time.perf_counter()
    results = {key: H.run_theorem("lemmas", H.shipped(key)) for key in H.SHIPPED}
    secs = time.perf_counter() - start
    cex = {k: len(r.counterexamples) for k, r in results.items()}
    ok = all(r.passed for r in results.values()) and secs < 300
    say(5, ok, secs, f"cases {sum(len(r.cases) for r in results.values())}, counterexamples {cex}")
    assert ok


def test_criterion_6_silting_lift(say):
    start = time.perf_counter()
    rep = H.run_theorem("thm3.3", H.shipped("trivial-kA2"))
    secs = time.perf_counter() - start
    both_sides = all({"lhs", "rhs"} <= set(v) for c in rep.cases for v in c["checks"].values())
    ok = not rep.counterexamples and rep.nonvacuous >= 7 and both_sides and secs < 600
    say(6, ok, secs, f"non-vacuous {rep.nonvacuous}, counterexamples {len(rep.counterexamples)}")
    assert ok


def test_criterion_7_tilting_lift(say):
    start = time.perf_counter()
    s = H.shipped("tensor-A2")
    rep = H.run_theorem("thm3.5", s, n=1)
    secs = time.perf_counter() - start
    tor_checked = all("tor" in c["info"] and len(c["info"]["tor"]) == 2 for c in rep.cases)
    regular = [c for c in rep.cases if c["status"] == "pass" and c["info"]["lifted_is_tilting"]
               and c["checks"]["n_tilting"]["rhs"]]
    lifts_to_t = any(is_isomorphic(C.functor_l(s.inst, m).module, Module.regular(s.inst.total))
                     for idx, m in H.basic_modules(s.cat_r) if m.name in {c["object"] for c in regular})
    ok = rep.passed and tor_checked and regular and lifts_to_t and secs < 300
    say(7, ok, secs, f"verdict {rep.verdict}, tilting lifts {[c['object'] for c in regular]}, l(R) ≅ T {lifts_to_t}")
    assert ok


def test_criterion_8a_descent(say):
    start = time.perf_counter()
    reps = [H.run_theorem(t, H.shipped(k)) for t in ("thm3.8", "cor4.7") for k in H.SHIPPED]
    secs = time.perf_counter() - start
    cex = sum(len(r.counterexamples) for r in reps)
    ok = all(r.passed for r in reps) and secs < 600
    say("8 (descent)", ok, secs, f"cases {sum(len(r.cases) for r in reps)}, "
        f"non-vacuous {sum(r.nonvacuous for r in reps)}, counterexamples {cex}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the support τ-tilting biconditional has counterexamples on the kA_2 "
                                       "instances (Y = S_2 for D(R)); see the decisions ledger")
def test_criterion_8b_tau_tilting_lift(say):
    start = time.perf_counter()
    reps = {k: H.run_theorem("cor4.6", H.shipped(k)) for k in ("trivial-kA2", "triangular")}
    secs = time.perf_counter() - start
    bridge = all(c["checks"]["bridge_D_sigma_vs_hom_tau"]["agree"] for r in reps.values() for c in r.cases)
    cex = {k: [(c["object"], c["failed"]) for c in r.counterexamples] for k, r in reps.items()}
    ok = all(r.passed for r in reps.values()) and bridge and secs < 600
    say("8 (support τ-tilting lift)", ok, secs, f"bridge agrees {bridge}, counterexamples {cex}")
    assert ok


def _corrupt(a: Algebra, idx):
    mult = a.mult.copy()
    mult[idx] = (mult[idx] + 1) % a.p
    return Algebra(mult, a.unit, a.idempotents, a.radical, a.p, a.labels, a.vertices, a.name)


def _caught(inst) -> bool:
    return not inst.validate().ok


def test_criterion_9_mutation(say):
    start = time.perf_counter()
    missed, tried = [], 0
    for key in H.SHIPPED:
        inst = H.shipped(key).inst
        for idx in np.ndindex(*inst.base.mult.shape):
            tried += 1
            if not _caught(C.CleftInstance(_corrupt(inst.base, idx), inst.theta, inst.total)):
                missed.append((key, "R", idx))
        for idx in np.ndindex(*inst.total.mult.shape):
            tried += 1
            if not _caught(C.CleftInstance(inst.base, inst.theta, _corrupt(inst.total, idx))):
                missed.append((key, "T", idx))
        for idx in np.ndindex(*inst.theta.table.shape):
            tried += 1
            t = inst.theta.table.copy()
            t[idx] = (t[idx] + 1) % inst.p
            bad = C.CleftInstance(inst.base, ThetaData(inst.bimodule, t, inst.theta.nilpotency), inst.total)
            if not _caught(bad):
                missed.append((key, "θ", idx))
    s = H.shipped("trivial-kA2")
    t = s.inst.theta.table.copy()
    t[0, 0, 0] = 1
    bad = C.CleftInstance(s.inst.base, ThetaData(s.inst.bimodule, t, s.inst.theta.nilpotency), s.inst.total)
    try:
        H.run_theorem("thm3.3", H.Shipped("bad", "", bad, s.cat_r, s.cat_t))
        guarded = False
    except C.InstanceError:
        guarded = True
    secs = time.perf_counter() - start
    ok = not missed and guarded
    say(9, ok, secs, f"{tried} single-entry corruptions, undetected {missed[:3]}, verification guarded {guarded}")
    assert ok
