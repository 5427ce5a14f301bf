"""Catalogs, enumeration oracles, shipped instances and verification reports."""
from __future__ import annotations

import itertools
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import cleft as C
from . import linalg as la
from .algebra import Algebra, field_algebra, path_algebra, Quiver, Relation, semisimple, type_a
from .homology import ext_dims, minimal_presentation, pd_upto, projective, resolution, tau, tor_dims
from .rep import (Bimodule, Module, ModuleLawError, decompose, direct_sum_module, dual, hom_dim, hom_space,
                  is_indecomposable, is_isomorphic, iso_indecomposable)
from .silting import (Catalog, in_D_sigma, in_gen, is_cosilting, is_n_tilting, is_partial_silting,
                      is_silting, is_support_tau_tilting, is_tau_rigid, silting_presentation, support_vertices)


class BudgetExceeded(RuntimeError):
    pass


PREAMBLE = [
    "quantifiers over modules range over the listed catalog of indecomposables; closure under finite sums is used",
    "coproduct preservation by i and e holds for module categories and is not re-checked",
    "Gen membership is decided by traces, which is exact for finitely generated modules",
]


# ------------------------------------------------------------------ catalogs

def catalog_typeA(n: int, orientation=None, p: int = 2, algebra: Algebra | None = None) -> Catalog:
    """The ``n(n+1)/2`` interval modules of a type ``A_n`` quiver."""
    if n > 6:
        raise ValueError("analytic catalogs are provided for n <= 6")
    a = algebra or type_a(n, p, orientation)
    mods = []
    for i in range(n):
        for j in range(i, n):
            dims = [1 if i <= v <= j else 0 for v in range(n)]
            maps = {f"a{k + 1}": [[1]] for k in range(i, j)}
            mods.append(Module.from_vertex_maps(a, dims, maps, name=f"[{i + 1},{j + 1}]"))
    return Catalog(a, mods, n, "analytic", True)


def _dim_vectors(nv: int, bound: int):
    for total in range(1, bound + 1):
        for dv in itertools.product(range(total + 1), repeat=nv):
            if sum(dv) == total:
                yield dv


def catalog_bruteforce(a: Algebra, bound: int, seed: int = 0, budget: int = 200_000,
                       complete: bool = False) -> Catalog:
    """All indecomposables of total dimension ``<= bound``, up to isomorphism.

    Every tuple of arrow matrices on every dimension vector is tried, filtered
    by the module law, tested for indecomposability and deduplicated.
    ``complete`` records outside knowledge that no indecomposable is larger.
    """
    p = a.p
    arrows = a.arrows
    plan = []
    total = 0
    for dv in _dim_vectors(a.n_vertices, bound):
        shapes = [(dv[t], dv[s]) for _, s, t, _ in arrows]
        entries = sum(r * c for r, c in shapes)
        total += p ** entries
        plan.append((dv, shapes, entries))
    if total > budget:
        raise BudgetExceeded(f"brute-force search needs {total} candidates, budget is {budget}")
    found: list = []
    for dv, shapes, entries in plan:
        for flat in itertools.product(range(p), repeat=entries):
            maps, pos = {}, 0
            for (_, _, _, label), (r, c) in zip(arrows, shapes):
                maps[label] = np.array(flat[pos:pos + r * c], dtype=np.int64).reshape(r, c)
                pos += r * c
            try:
                m = Module.from_vertex_maps(a, dv, maps, check=True)
            except ModuleLawError:
                continue
            if not is_indecomposable(m, seed):
                continue
            if any(f.vertex_dims == m.vertex_dims and iso_indecomposable(f, m) for f in found):
                continue
            m.name = f"M{len(found) + 1}{tuple(dv)}"
            found.append(m)
    return Catalog(a, found, bound, "brute-force", complete)


def basic_modules(cat: Catalog, include_zero: bool = False, max_summands: int | None = None):
    """``(indices, module)`` for every direct sum of distinct catalog entries."""
    n = len(cat)
    top = n if max_summands is None else min(n, max_summands)
    if include_zero:
        yield (), Module.zero(cat.algebra)
    for k in range(1, top + 1):
        for idx in itertools.combinations(range(n), k):
            m = direct_sum_module([cat[i] for i in idx], cat.algebra)
            m.name = "⊕".join(cat[i].name for i in idx)
            yield idx, m


# -------------------------------------------------------------- enumeration

def enumerate_support_tau_tilting(a: Algebra, cat: Catalog, seed: int = 0) -> list:
    """Basic support τ-tilting modules assembled from the catalog (``0`` included)."""
    out = []
    for idx, m in basic_modules(cat, include_zero=True, max_summands=a.n_vertices):
        if is_support_tau_tilting(m, seed):
            out.append((idx, m))
    return out


def enumerate_silting_sweep(a: Algebra, cat: Catalog) -> list:
    """Basic modules ``Y`` with ``Gen(Y) = D_σ`` on the catalog for ``σ = σ_min ⊕ (P_S -> 0)``
    and some vertex set ``S``; an oracle independent of τ-rigidity."""
    out = []
    verts = range(a.n_vertices)
    for idx, m in basic_modules(cat, include_zero=True, max_summands=a.n_vertices):
        pres = minimal_presentation(m)
        for r in range(a.n_vertices + 1):
            hit = False
            for S in itertools.combinations(verts, r):
                sigma = pres.augmented(list(S)) if S else pres
                if is_silting(m, sigma, cat):
                    hit = True
                    break
            if hit:
                out.append((idx, m))
                break
    return out


def enumerate_silting_predicate(a: Algebra, cat: Catalog) -> list:
    """Basic modules silting with respect to their support-augmented presentation."""
    return [(idx, m) for idx, m in basic_modules(cat, include_zero=True, max_summands=a.n_vertices)
            if is_silting(m, silting_presentation(m), cat)]


# ------------------------------------------------------------------ reports

@dataclass
class VerificationReport:
    theorem: str
    instance: dict
    cases: list = field(default_factory=list)
    catalogs: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    runtime: float | None = None
    announced: int | None = None

    @property
    def counterexamples(self) -> list:
        return [c for c in self.cases if c["status"] == "counterexample"]

    @property
    def skipped(self) -> list:
        return [c for c in self.cases if c["status"] == "skipped"]

    @property
    def nonvacuous(self) -> int:
        return sum(1 for c in self.cases if c["status"] == "pass")

    @property
    def verdict(self) -> str:
        if self.counterexamples:
            return "fail"
        return "pass" if self.nonvacuous else "vacuous"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def summary(self) -> dict:
        out = {
            "summary": True,
            "theorem": self.theorem,
            "instance": self.instance,
            "verdict": self.verdict,
            "cases": len(self.cases),
            "announced": self.announced if self.announced is not None else len(self.cases),
            "nonvacuous": self.nonvacuous,
            "skipped": len(self.skipped),
            "counterexamples": [c["index"] for c in self.counterexamples],
            "catalogs": self.catalogs,
            "notes": PREAMBLE + self.notes,
        }
        if self.runtime is not None:
            out["runtime_s"] = round(self.runtime, 3)
        return out

    def to_jsonl(self) -> str:
        lines = [json.dumps(_clean(c), sort_keys=True, ensure_ascii=False) for c in self.cases]
        lines.append(json.dumps(_clean(self.summary()), sort_keys=True, ensure_ascii=False))
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        s = self.summary()
        lines = [f"{self.theorem} on {self.instance.get('name')}: {s['verdict'].upper()}",
                 f"  cases {s['cases']} (non-vacuous {s['nonvacuous']}, skipped {s['skipped']}, "
                 f"counterexamples {len(s['counterexamples'])})"]
        for c in self.counterexamples[:10]:
            lines.append(f"  counterexample #{c['index']}: {c['object']}  {c.get('failed')}")
        return "\n".join(lines)


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return x


def _threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    try:
        return max(1, int(os.environ.get("CLEFTLAB_THREADS", "1")))
    except ValueError:
        return 1


def _run_cases(fn, items, threads=None) -> list:
    n = _threads(threads)
    if n == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _instance_info(inst: C.CleftInstance) -> dict:
    return {
        "name": inst.name,
        "R": {"name": inst.base.name, "dim": inst.base.dim, "vertices": list(inst.base.vertices)},
        "M": {"dim": inst.nM, "theta_zero": not inst.theta.table.any(), "nilpotency": inst.theta.nilpotency},
        "T": {"dim": inst.total.dim},
        "p": inst.p,
    }


def _case(index, obj, checks: dict, info=None, status=None) -> dict:
    """A case holding named biconditionals ``{name: (lhs, rhs)}``."""
    sides = {k: {"lhs": bool(l), "rhs": bool(r), "agree": bool(l) == bool(r)} for k, (l, r) in checks.items()}
    failed = [k for k, v in sides.items() if not v["agree"]]
    if status is None:
        status = "counterexample" if failed else "pass"
    out = {"index": index, "object": obj, "checks": sides, "status": status}
    if failed:
        out["failed"] = failed
    if info:
        out["info"] = info
    return out


def _guard(inst: C.CleftInstance) -> None:
    rep = inst.validate()
    if not rep.ok:
        raise C.InstanceError(f"instance {inst.name!r} invalid: {[c.name for c in rep.failures]}", rep)


def _finish(rep: VerificationReport, start: float, timing: bool) -> VerificationReport:
    if timing:
        rep.runtime = time.perf_counter() - start
    return rep


# ----------------------------------------------------------- verifications

def verify_thm_3_3(inst: C.CleftInstance, cat_r: Catalog, cat_t: Catalog, seed: int = 0,
                   threads=None, timing=False) -> VerificationReport:
    """``l`` lifts (partial) silting exactly when ``F(Y)`` lies in ``D_σ`` (resp. ``Gen Y``).

    Both the minimal presentation and its support augmentation are used.
    """
    _guard(inst)
    start = time.perf_counter()
    items = list(basic_modules(cat_r))
    jobs = [(idx, y, kind) for idx, y in items for kind in ("minimal", "augmented")]

    def run(job):
        idx, y, kind = job
        sigma = minimal_presentation(y) if kind == "minimal" else silting_presentation(y)
        F = C.functor_F(inst, y)
        lifted = C.lift_presentation(inst, sigma)
        ly = lifted.lifted_module.module
        checks = {
            "partial_silting": (is_partial_silting(ly, lifted, cat_t),
                                is_partial_silting(y, sigma, cat_r) and in_D_sigma(sigma, F)),
            "silting": (is_silting(ly, lifted, cat_t), is_silting(y, sigma, cat_r) and in_gen(y, F)),
        }
        info = {"sigma": kind, "lifted_sigma_minimal": lifted.minimal, "F_dim": F.dim}
        return checks, info

    results = _run_cases(run, jobs, threads)
    rep = VerificationReport("thm3.3", _instance_info(inst),
                             catalogs={"R": cat_r.metadata(), "T": cat_t.metadata()}, announced=len(jobs))
    for k, ((idx, y, kind), (checks, info)) in enumerate(zip(jobs, results)):
        rep.cases.append(_case(k, f"{y.name} [{kind}]", checks, info))
    return _finish(rep, start, timing)


def verify_thm_3_5(inst: C.CleftInstance, n: int, cat_r: Catalog, cat_t: Catalog | None = None,
                   pd_bound: int = 12, seed: int = 0, threads=None, timing=False) -> VerificationReport:
    """``l(X)`` is ``n``-tilting iff ``X`` is and ``F(X) ∈ X^{⊥n}``, for ``X`` with vanishing Tor."""
    _guard(inst)
    start = time.perf_counter()
    nil = inst.theta._nilpotent_at(inst.theta.nilpotency)
    items = list(basic_modules(cat_r))

    def run(item):
        idx, x = item
        tors = tor_dims(inst.bimodule, x, n + 1)[1:]
        if any(tors):
            return None, {"tor": tors}
        lx = C.functor_l(inst, x).module
        F = C.functor_F(inst, x)
        perp = all(e == 0 for e in ext_dims(x, F, n)[1:]) if n >= 1 else True
        lhs = is_n_tilting(lx, n, seed)
        rhs = is_n_tilting(x, n, seed) and perp
        return {"n_tilting": (lhs, rhs)}, {"tor": tors, "pd_X": pd_upto(x, pd_bound), "F_in_perp": perp,
                                           "lifted_is_tilting": bool(lhs)}

    results = _run_cases(run, items, threads)
    rep = VerificationReport(f"thm3.5(n={n})", _instance_info(inst), catalogs={"R": cat_r.metadata()},
                             announced=len(items))
    rep.notes.append(f"M nilpotent at the stated index: {nil} (so Ker q = 0)")
    rep.notes.append(f"projective dimensions reported up to bound {pd_bound}")
    if not nil:
        rep.notes.append("nilpotency hypothesis fails; no case is checked")
    for k, ((idx, x), (checks, info)) in enumerate(zip(items, results)):
        if checks is None or not nil:
            rep.cases.append(_case(k, x.name, {}, info, status="skipped") | {"reason": "Tor hypothesis fails"
                                                                            if checks is None else "M not nilpotent"})
        else:
            rep.cases.append(_case(k, x.name, checks, info))
    return _finish(rep, start, timing)


def verify_cor_4_4(inst: C.CleftInstance, cat_r: Catalog, cat_t: Catalog, n: int = 1, seed: int = 0,
                   threads=None, timing=False) -> VerificationReport:
    """Lifting along a tensor ring stated with the individual tensor powers ``N^{⊗i}``."""
    _guard(inst)
    start = time.perf_counter()
    powers = inst.extras.get("tensor_powers")
    if powers is None:
        raise ValueError("instance is not a tensor ring")
    m = inst.extras["nilpotency"]
    items = list(basic_modules(cat_r))

    def run(item):
        idx, y = item
        sigma = minimal_presentation(y)
        lifted = C.lift_presentation(inst, sigma)
        ly = lifted.lifted_module.module
        parts = [C.tensor(pw, y).module for pw in powers[:m - 1]]
        checks = {
            "partial_silting": (is_partial_silting(ly, lifted, cat_t),
                                is_partial_silting(y, sigma, cat_r) and all(in_D_sigma(sigma, f) for f in parts)),
            "silting": (is_silting(ly, lifted, cat_t),
                        is_silting(y, sigma, cat_r) and all(in_gen(y, f) for f in parts)),
        }
        tors = [tor_dims(pw, y, n + 1)[1:] for pw in powers[:m - 1]]
        info = {"tor": tors}
        if not any(any(t) for t in tors):
            perp = all(all(e == 0 for e in ext_dims(y, f, n)[1:]) for f in parts)
            checks[f"{n}_tilting"] = (is_n_tilting(ly, n, seed), is_n_tilting(y, n, seed) and perp)
        return checks, info

    results = _run_cases(run, items, threads)
    rep = VerificationReport("cor4.4", _instance_info(inst), catalogs={"R": cat_r.metadata(), "T": cat_t.metadata()},
                             announced=len(items))
    rep.notes.append(f"N is {m}-nilpotent; tensor powers 1..{m - 1} are used")
    for k, ((idx, y), (checks, info)) in enumerate(zip(items, results)):
        rep.cases.append(_case(k, y.name, checks, info))
    return _finish(rep, start, timing)


def _q_parts(inst, a):
    q, _, _ = C.functor_q(inst, a)
    return q


def verify_thm_3_8(inst: C.CleftInstance, cat_r: Catalog, cat_t: Catalog, seed: int = 0,
                   parts=("silting", "partial_silting", "tau_rigid", "support_tau_tilting"),
                   theorem: str = "thm3.8", threads=None, timing=False) -> VerificationReport:
    """One-directional descent along ``q``: premises over ``T`` imply conclusions over ``R``."""
    _guard(inst)
    start = time.perf_counter()
    items = list(basic_modules(cat_t))

    def run(item):
        idx, a = item
        qa = _q_parts(inst, a)
        implications = {}
        if "silting" in parts or "partial_silting" in parts:
            delta = C.l_form_presentation(inst, a)
            support, _ = support_vertices(a)
            missing = [i for i in range(inst.total.n_vertices) if i not in support]
            deltas = [("minimal", delta)]
            if missing:
                deltas.append(("augmented", C.augment_l_form(inst, delta, missing)))
            for name, d in deltas:
                qd = C.descend_presentation(inst, d)
                if "silting" in parts:
                    if is_silting(a, d, cat_t):
                        implications[f"silting[{name}]"] = (True, is_silting(qd.module, qd, cat_r))
                if "partial_silting" in parts:
                    if is_partial_silting(a, d, cat_t):
                        implications[f"partial_silting[{name}]"] = (True, is_partial_silting(qd.module, qd, cat_r))
        if "tau_rigid" in parts and is_tau_rigid(a):
            implications["tau_rigid"] = (True, is_tau_rigid(qa))
        if "support_tau_tilting" in parts and is_support_tau_tilting(a, seed):
            implications["support_tau_tilting"] = (True, is_support_tau_tilting(qa, seed))
        return implications, {"q_dim": qa.dim}

    results = _run_cases(run, items, threads)
    rep = VerificationReport(theorem, _instance_info(inst), catalogs={"R": cat_r.metadata(), "T": cat_t.metadata()},
                             announced=len(items))
    rep.notes.append("descent only: a false premise makes the case vacuous")
    for k, ((idx, a), (impl, info)) in enumerate(zip(items, results)):
        if not impl:
            rep.cases.append(_case(k, a.name, {}, info, status="skipped") | {"reason": "no premise holds"})
        else:
            rep.cases.append(_case(k, a.name, impl, info))
    return _finish(rep, start, timing)


def verify_cor_4_6(inst: C.CleftInstance, cat_r: Catalog, cat_t: Catalog | None = None, seed: int = 0,
                   threads=None, timing=False) -> VerificationReport:
    """``l(Y)`` is (τ-rigid) support τ-tilting iff ``Y`` is and ``Hom(F(Y), τY) = 0``."""
    _guard(inst)
    start = time.perf_counter()
    items = list(basic_modules(cat_r, include_zero=True))

    def run(item):
        idx, y = item
        ly = C.functor_l(inst, y).module
        F = C.functor_F(inst, y)
        ty = tau(y)
        hom_zero = F.dim == 0 or ty.dim == 0 or hom_dim(F, ty) == 0
        in_d = in_D_sigma(minimal_presentation(y), F)
        sty = is_support_tau_tilting(y, seed)
        checks = {
            "support_tau_tilting": (is_support_tau_tilting(ly, seed), sty and hom_zero),
            "tau_rigid": (is_tau_rigid(ly), is_tau_rigid(y) and hom_zero),
            "bridge_D_sigma_vs_hom_tau": (in_d, hom_zero),
        }
        info = {"F_dim": F.dim, "tau_dim": ty.dim, "hom_F_tau_zero": hom_zero,
                "gen_variant_rhs": bool(sty and in_gen(y, F))}
        return checks, info

    results = _run_cases(run, items, threads)
    rep = VerificationReport("cor4.6", _instance_info(inst), catalogs={"R": cat_r.metadata()}, announced=len(items))
    rep.notes.append("|Y| counts non-isomorphic indecomposable summands; |R| is the number of simples")
    for k, ((idx, y), (checks, info)) in enumerate(zip(items, results)):
        rep.cases.append(_case(k, y.name or "0", checks, info))
    return _finish(rep, start, timing)


def functor_r(inst: C.CleftInstance, b: Module) -> Module:
    """``r(B) = Hom_R(T, B)`` with ``(t.φ)(s) = φ(s t)``."""
    t = inst.total
    p = inst.p
    tr = Module(inst.base, t.left_regular[:inst.nR], check=False)
    H = hom_space(tr, b)
    k = H.shape[0]
    if k == 0:
        return Module.zero(t)
    flat = np.stack([h.reshape(-1) for h in H], axis=1)
    act = np.zeros((t.dim, k, k), dtype=np.int64)
    for i in range(t.dim):
        imgs = np.stack([((h @ t.right_regular[i]) % p).reshape(-1) for h in H], axis=1)
        act[i] = la.solve(flat, imgs, p)
    return Module(t, act, check=True)


def verify_lemma_suite(inst: C.CleftInstance, cat_r: Catalog, cat_t: Catalog, seed: int = 0,
                       threads=None, timing=False, budget_iso: int = 256) -> VerificationReport:
    """Adjunction dimensions, projective lifts, ``D_σ`` transport along ``l`` and ``q``,
    Tor versus derived ``l``, the split sequence, and the cosilting dual."""
    _guard(inst)
    start = time.perf_counter()
    rep = VerificationReport("lemmas", _instance_info(inst), catalogs={"R": cat_r.metadata(), "T": cat_t.metadata()})
    cases = []

    def add(obj, checks, info=None):
        cases.append((obj, checks, info))

    lifts = {id(y): C.functor_l(inst, y) for y in cat_r}
    incs = {id(y): C.functor_i(inst, y).module for y in cat_r}
    # adjunctions l ⊣ e and q ⊣ i
    for y in cat_r:
        for x in cat_t:
            add(f"adjunction {y.name} / {x.name}", {
                "hom_l_e": (hom_dim(lifts[id(y)].module, x), hom_dim(y, C.functor_e(inst, x))),
                "hom_q_i": (hom_dim(C.functor_q(inst, x)[0], y), hom_dim(x, incs[id(y)])),
            })
    # projective lifts
    tproj = [projective(inst.total, i) for i in range(inst.total.n_vertices)]
    for i in range(inst.base.n_vertices):
        lp = C.lifted_projective(inst, i).module
        summands = decompose(lp, seed)
        add(f"l(P({inst.base.vertices[i]}))", {
            "iso_to_T_projective": (is_isomorphic(lp, tproj[i], seed, budget_iso), True),
            "summands_projective": (all(any(iso_indecomposable(s, q) for q in tproj) for s in summands), True),
        })
    # every indecomposable T-projective is a summand of some l(P)
    for i, q in enumerate(tproj):
        found = any(iso_indecomposable(q, s) for j in range(inst.base.n_vertices)
                    for s in decompose(C.lifted_projective(inst, j).module, seed))
        add(f"P_T({inst.total.vertices[i]}) summand of l(P)", {"found": (found, True)})
    # D_σ transport along l
    sigmas = []
    for y in cat_r:
        sigmas.append((f"σ({y.name})", minimal_presentation(y)))
        aug = silting_presentation(y)
        if aug is not sigmas[-1][1] and aug.p1 != sigmas[-1][1].p1:
            sigmas.append((f"σ+({y.name})", aug))
    for name, s in sigmas:
        ls = C.lift_presentation(inst, s)
        for x in cat_t:
            add(f"D_l(σ) {name} / {x.name}", {"D_sigma_along_l": (in_D_sigma(ls, x), in_D_sigma(s, C.functor_e(inst, x)))})
    # D_δ versus D_q(δ) along i
    for x in cat_t:
        d = C.l_form_presentation(inst, x)
        qd = C.descend_presentation(inst, d)
        for y in cat_r:
            add(f"D_δ({x.name}) / i({y.name})", {"D_delta_along_i": (in_D_sigma(d, incs[id(y)]), in_D_sigma(qd, y))})
    # Tor versus homology of l applied to a resolution, j = 1, 2
    for y in cat_r:
        res = resolution(y, 3)
        lts = [C.functor_l(inst, res.term(j)) for j in range(4)]
        ranks = [0]
        for j in range(1, 4):
            if j - 1 < len(res.diffs):
                ranks.append(C.functor_l_map(inst, res.diffs[j - 1], lts[j], lts[j - 1]).rank)
            else:
                ranks.append(0)
        hl = [lts[j].module.dim - ranks[j] - ranks[j + 1] for j in range(1, 3)]
        td = tor_dims(inst.bimodule, y, 2)[1:]
        add(f"Tor({y.name})", {"tor_vs_derived_l_j1": (hl[0], td[0]), "tor_vs_derived_l_j2": (hl[1], td[1])})
    # split sequence, q l = id, q i = id, counit
    for y in cat_r:
        ly = lifts[id(y)]
        F = C.functor_F(inst, y)
        mu, _ = C.counit_mu(inst, ly)
        add(f"functors on {y.name}", {
            "e_l_split": (is_isomorphic(C.functor_e(inst, ly), direct_sum_module([y, F], inst.base), seed, budget_iso), True),
            "q_l_identity": (is_isomorphic(C.functor_q(inst, ly)[0], y, seed, budget_iso), True),
            "q_i_identity": (C.unit_eta(inst, y).rank == y.dim, True),
            "counit_epic": (mu.is_surjective(), True),
        })
    for x in cat_t:
        mu, le = C.counit_mu(inst, x)
        add(f"counit on {x.name}", {"kernel_dim": (mu.source.dim - mu.rank, le.dim - x.dim)})
    # cosilting through the opposite instance: r(B) is dual to l^op(D B)
    op = inst.opposite
    cat_rd, cat_td = cat_r.dual(), cat_t.dual()
    for idx, b in basic_modules(cat_r):
        db = dual(b)
        rb = functor_r(inst, b)
        lop = C.functor_l(op, db).module
        sigma = silting_presentation(db)
        lsig = C.lift_presentation(op, sigma)
        F_op = C.functor_F(op, db)
        add(f"cosilting {b.name}", {
            "r_dual_to_lop": (is_isomorphic(dual(rb), lop, seed, budget_iso), True),
            "cosilting_lift_dual": (is_silting(lsig.lifted_module.module, lsig, cat_td),
                           is_silting(db, sigma, cat_rd) and in_gen(db, F_op)),
            "cosilting_via_dual": (is_cosilting(b, cat_r, seed), is_silting(db, sigma, cat_rd)),
        })
    for k, (obj, checks, info) in enumerate(cases):
        rep.cases.append(_case(k, obj, {n: (l == r, True) if not isinstance(l, bool) else (l, r)
                                        for n, (l, r) in checks.items()}, info))
        for n, (l, r) in checks.items():
            if not isinstance(l, bool):
                rep.cases[-1]["checks"][n]["values"] = [int(l), int(r)]
    rep.announced = len(cases)
    return _finish(rep, start, timing)


THEOREMS = {
    "thm3.3": "silting lift along l",
    "thm3.5": "n-tilting lift along l under Tor vanishing",
    "thm3.8": "silting descent along q",
    "cor4.4": "silting and tilting lift to tensor rings",
    "cor4.6": "support τ-tilting lift to θ-extensions",
    "cor4.7": "τ-rigid and support τ-tilting descent",
    "lemmas": "functor identities and transport lemmas",
}


# ----------------------------------------------------------------- instances

@dataclass
class Shipped:
    key: str
    description: str
    inst: C.CleftInstance
    cat_r: Catalog
    cat_t: Catalog | None


def _kx2(p):
    return path_algebra(Quiver(("1",), (("x", "1", "1"),)), [Relation(((1, ("x", "x")),))], 2, p, name="k[x]/x^2")


def _catalog(a: Algebra, bound: int, complete: bool, seed=0) -> Catalog:
    return catalog_bruteforce(a, bound, seed, complete=complete)


def _build(key: str, p: int) -> Shipped:
    k = field_algebra(p)
    if key == "trivial-k":
        inst = C.trivial_extension(k, Bimodule.regular(k), "k⋉k")
        return Shipped(key, "R = k, M = k, θ = 0 (T ≅ k[x]/x²)", inst,
                       _catalog(k, 1, True), _catalog(inst.total, 2, True))
    if key == "trivial-kA2":
        a = type_a(2, p)
        inst = C.trivial_extension(a, Bimodule.dual_regular(a), "kA2⋉D(kA2)")
        return Shipped(key, "R = kA_2, M = D(R), θ = 0", inst, catalog_typeA(2, p=p, algebra=a),
                       _catalog(inst.total, 3, True))
    if key == "tensor-A2":
        r = semisimple(2, p)
        inst = C.tensor_ring(r, C.arrow_bimodule(r, [("1", "2")]), 2, "T(k×k, arrow)")
        return Shipped(key, "tensor ring of k×k by one arrow, m = 2 (T ≅ kA_2)", inst,
                       _catalog(r, 1, True), _catalog(inst.total, 2, True))
    if key == "tensor-A3":
        r = semisimple(3, p)
        inst = C.tensor_ring(r, C.arrow_bimodule(r, [("1", "2"), ("2", "3")]), 3, "T(k³, A3 arrows)")
        return Shipped(key, "tensor ring of k×k×k by the A_3 arrows, m = 3 (T ≅ kA_3)", inst,
                       _catalog(r, 1, True), _catalog(inst.total, 3, True))
    if key == "triangular":
        a = type_a(2, p)
        m = Bimodule.from_left_module(projective(a, 0), k)
        m.name = "P(1)"
        inst = C.triangular_matrix(a, k, m, "[kA2 P(1); 0 k]")
        return Shipped(key, "triangular matrix algebra of kA_2 and k by P(1)", inst,
                       _catalog(inst.base, 2, True), _catalog(inst.total, 3, True))
    if key == "tor-obstruction":
        r = _kx2(p)
        s = Module.from_vertex_maps(r, [1], {"x": [[0]]})
        m = Bimodule(r, r, s.action, s.action, ["m"], name="k")
        inst = C.trivial_extension(r, m, "k[x]/x²⋉k")
        return Shipped(key, "R = k[x]/x², M = k (x acts by 0 on both sides), θ = 0", inst,
                       _catalog(r, 2, True), None)
    raise KeyError(f"unknown instance {key!r}; known: {', '.join(SHIPPED)}")


SHIPPED = ("trivial-k", "trivial-kA2", "tensor-A2", "tensor-A3", "triangular")
TEST_ONLY = ("tor-obstruction",)


@lru_cache(maxsize=None)
def shipped(key: str, p: int = 2) -> Shipped:
    return _build(key, p)


def run_theorem(theorem: str, s: Shipped, seed: int = 0, n: int = 1, pd_bound: int = 12, threads=None,
                timing=False, budget_iso: int = 256) -> VerificationReport:
    if theorem == "thm3.3":
        return verify_thm_3_3(s.inst, s.cat_r, s.cat_t, seed, threads, timing)
    if theorem == "thm3.5":
        return verify_thm_3_5(s.inst, n, s.cat_r, s.cat_t, pd_bound, seed, threads, timing)
    if theorem == "thm3.8":
        return verify_thm_3_8(s.inst, s.cat_r, s.cat_t, seed, ("silting", "partial_silting"), "thm3.8",
                              threads, timing)
    if theorem == "cor4.7":
        return verify_thm_3_8(s.inst, s.cat_r, s.cat_t, seed, ("tau_rigid", "support_tau_tilting"),
                              "cor4.7", threads, timing)
    if theorem == "cor4.4":
        return verify_cor_4_4(s.inst, s.cat_r, s.cat_t, n, seed, threads, timing)
    if theorem == "cor4.6":
        return verify_cor_4_6(s.inst, s.cat_r, s.cat_t, seed, threads, timing)
    if theorem == "lemmas":
        return verify_lemma_suite(s.inst, s.cat_r, s.cat_t, seed, threads, timing, budget_iso)
    raise KeyError(f"unknown theorem id {theorem!r}; known: {', '.join(THEOREMS)}")
