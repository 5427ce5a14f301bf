"""Silting-theoretic predicates decided over a finite catalog of indecomposables."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra, IdealIsWholeAlgebra, quotient_by_ideal
from .homology import (Presentation, ext_dims, minimal_presentation, pd_upto, projective, tau)
from .rep import (AlgebraMismatch, Module, Morphism, build_extension, cokernel_module,
                  count_nonisomorphic_summands, decompose, dual, extension_cocycles, hom_space,
                  iso_indecomposable, isoclasses, power, trace_of_in)


class CrossCheckError(AssertionError):
    """Two routes that must agree did not; this is a bug, not a finding."""


@dataclass
class Catalog:
    """Pairwise non-isomorphic indecomposables standing in for ``mod A``.

    ``complete`` means every indecomposable is listed (representation-finite
    and all of dimension at most ``complete_up_to``).
    """

    algebra: Algebra
    indecomposables: list
    complete_up_to: int
    provenance: str
    complete: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.indecomposables)

    def __iter__(self):
        return iter(self.indecomposables)

    def __getitem__(self, k):
        return self.indecomposables[k]

    def metadata(self) -> dict:
        return {"algebra": self.algebra.name, "size": len(self), "complete_up_to": self.complete_up_to,
                "complete": self.complete, "provenance": self.provenance}

    def index_of(self, m: Module):
        for k, c in enumerate(self.indecomposables):
            if iso_indecomposable(c, m):
                return k
        return None

    def dual(self) -> "Catalog":
        d = self._cache.get("dual")
        if d is None:
            d = Catalog(self.algebra.opposite, [dual(m) for m in self.indecomposables], self.complete_up_to,
                        f"dual of {self.provenance}", self.complete)
            d._cache["dual"] = self
            self._cache["dual"] = d
        return d


def _sigma(s) -> Morphism:
    return s.sigma if isinstance(s, Presentation) else s


# ---------------------------------------------------------------- D_σ and Gen

def in_D_sigma(sigma, l: Module) -> bool:
    """``Hom(σ, l): Hom(P0, l) -> Hom(P1, l)`` is surjective."""
    s = _sigma(sigma)
    if not s.source.algebra.same_as(l.algebra):
        raise AlgebraMismatch("presentation and module live over different algebras")
    if l.dim == 0 or s.source.dim == 0:
        return True
    h1 = hom_space(s.source, l).shape[0]
    if h1 == 0:
        return True
    H0 = hom_space(s.target, l)
    if H0.shape[0] < h1:
        return False
    imgs = np.stack([((h @ s.matrix) % l.p).reshape(-1) for h in H0], axis=1)
    return la.rank(imgs, l.p) == h1


def in_gen(x: Module, l: Module) -> bool:
    return trace_of_in(x, l)[1]


def in_cogen(x: Module, l: Module) -> bool:
    """``l`` embeds in a finite power of ``x``."""
    if l.dim == 0:
        return True
    H = hom_space(l, x)
    if H.shape[0] == 0:
        return False
    common = la.kernel(np.concatenate(list(H), axis=0), l.p)
    return common.shape[1] == 0


def is_tau_rigid(y: Module) -> bool:
    t = tau(y)
    return t.dim == 0 or hom_space(y, t).shape[0] == 0


def support_vertices(y: Module) -> tuple[list, np.ndarray]:
    a = y.algebra
    support = y.support()
    e0 = np.zeros(a.dim, dtype=np.int64)
    for i in range(a.n_vertices):
        if i not in support:
            e0 = (e0 + a.idempotents[i]) % a.p
    return support, e0


def restrict_to_quotient(y: Module, b: Algebra) -> Module:
    """``y`` (annihilated by the ideal) as a module over ``b = A/I``."""
    return Module(b, y.action[list(b.lift_indices)], check=True, name=y.name)


def support_quotient(y: Module) -> tuple[Algebra, Module] | None:
    """``(A/<e0>, y over it)``; ``None`` if ``y = 0``."""
    support, e0 = support_vertices(y)
    if y.dim == 0:
        return None
    if not e0.any():
        return y.algebra, y
    cache = y.algebra.__dict__.setdefault("_support_quotients", {})
    key = tuple(support)
    if key not in cache:
        cache[key] = quotient_by_ideal(y.algebra, [e0])[0]
    b = cache[key]
    return b, restrict_to_quotient(y, b)


def is_support_tau_tilting(y: Module, seed: int = 0) -> bool:
    if y.dim == 0:
        return True
    try:
        b, yb = support_quotient(y)
    except IdealIsWholeAlgebra:  # pragma: no cover - y != 0 rules this out
        return False
    if not is_tau_rigid(yb):
        return False
    return count_nonisomorphic_summands(yb, seed) == b.n_vertices


def is_tau_tilting(y: Module, seed: int = 0) -> bool:
    return is_tau_rigid(y) and count_nonisomorphic_summands(y, seed) == y.algebra.n_vertices


# -------------------------------------------------------------------- silting

def silting_presentation(y: Module) -> Presentation:
    """Minimal presentation augmented by ``P_S -> 0`` for the non-support vertices ``S``."""
    pres = minimal_presentation(y)
    support, _ = support_vertices(y)
    missing = [i for i in range(y.algebra.n_vertices) if i not in support]
    return pres.augmented(missing) if missing else pres


def silting_witness(y: Module, sigma, cat: Catalog):
    """First module on which ``Gen(y)`` and ``D_σ`` disagree, or ``None``."""
    for l in [y] + list(cat):
        g, d = in_gen(y, l), in_D_sigma(sigma, l)
        if g != d:
            return {"module": l, "in_gen": g, "in_D_sigma": d}
    return None


def is_silting(y: Module, sigma, cat: Catalog) -> bool:
    return silting_witness(y, sigma, cat) is None


def _sigma_key(sigma) -> tuple:
    s = _sigma(sigma)
    return (s.source.dim, s.target.dim, s.matrix.tobytes(),
            s.source.action.tobytes(), s.target.action.tobytes())


def d_sigma_closure_witness(sigma, cat: Catalog):
    """Check that ``D_σ ∩ cat`` is closed under cokernels of catalog maps and
    under extensions between its members.  Returns a witness or ``None``."""
    cache = cat._cache.setdefault("closure", {})
    key = _sigma_key(sigma)
    if key in cache:
        return cache[key]
    members = [l for l in cat if in_D_sigma(sigma, l)]
    witness = None
    for l in members:
        for src in cat:
            for f in hom_space(src, l):
                q, _ = cokernel_module(Morphism(src, l, f, check=False))
                if not in_D_sigma(sigma, q):
                    witness = {"kind": "quotient", "of": l, "quotient": q}
                    break
            if witness:
                break
        if witness:
            break
    if witness is None:
        for z in members:
            for x in members:
                for c in extension_cocycles(z, x):
                    e, _, _ = build_extension(z, x, c)
                    if not in_D_sigma(sigma, e):
                        witness = {"kind": "extension", "left": x, "right": z, "middle": e}
                        break
                if witness:
                    break
            if witness:
                break
    cache[key] = witness
    return witness


def is_partial_silting(y: Module, sigma, cat: Catalog) -> bool:
    """``y ∈ D_σ`` plus finite torsion-class evidence for ``D_σ``.

    When ``sigma`` is the minimal presentation of ``y`` the verdict must agree
    with τ-rigidity; a disagreement raises :class:`CrossCheckError`.
    """
    verdict = in_D_sigma(sigma, y) and d_sigma_closure_witness(sigma, cat) is None
    if isinstance(sigma, Presentation) and sigma.minimal and sigma.module is y:
        rigid = is_tau_rigid(y)
        if rigid != verdict:
            raise CrossCheckError(f"partial silting ({verdict}) disagrees with τ-rigidity ({rigid})")
    return verdict


# ---------------------------------------------------------------- n-tilting

def in_add(x_classes: list, c: Module, seed: int = 0) -> bool:
    """Is ``c`` a direct sum of modules isomorphic to the given indecomposables?"""
    if c.dim == 0:
        return True
    for s in decompose(c, seed):
        if not any(iso_indecomposable(s, r) for r in x_classes):
            return False
    return True


def _left_approximation(c: Module, x: Module):
    """Left ``add x``-approximation ``c -> x^m`` and its cokernel.

    Hom basis elements are kept only when they are not already ``End(x)``-
    combinations of the kept ones, so every map ``c -> x`` still factors.
    """
    p = c.p
    H = hom_space(c, x)
    E = hom_space(x, x)
    kept, span = [], la.zeros(x.dim * c.dim, 0)
    for h in H:
        if span.shape[1] and la.in_span(span, h.reshape(-1), p):
            continue
        kept.append(h)
        new = np.stack([((e @ h) % p).reshape(-1) for e in E], axis=1)
        span = la.column_space(np.concatenate([span, new], axis=1), p)
    target = power(x, len(kept))
    mat = np.concatenate(kept, axis=0) if kept else la.zeros(0, c.dim)
    f = Morphism(c, target, mat, check=False)
    return f, cokernel_module(f)[0]


def tilting_conditions(x: Module, n: int, seed: int = 0) -> dict:
    """Evaluate (T1), (T2), (T3) separately."""
    a = x.algebra
    pd = pd_upto(x, n)
    t1 = pd is not None
    exts = ext_dims(x, x, n) if n >= 1 else [0]
    t2 = all(e == 0 for e in exts[1:])
    classes = [r for r, _ in isoclasses(decompose(x, seed))]
    t3 = True
    failing = None
    for i in range(a.n_vertices):
        c = projective(a, i)
        ok = False
        for step in range(n + 1):
            if in_add(classes, c, seed):
                ok = True
                break
            if step == n:
                break
            f, c = _left_approximation(c, x)
            if not f.is_injective():
                break
        if not ok:
            t3, failing = False, a.vertices[i]
            break
    return {"T1": t1, "pd": pd, "T2": t2, "ext": exts[1:], "T3": t3, "T3_failing_vertex": failing}


def is_n_tilting(x: Module, n: int, seed: int = 0) -> bool:
    if x.dim == 0:
        return False
    c = tilting_conditions(x, n, seed)
    return c["T1"] and c["T2"] and c["T3"]


# ---------------------------------------------------------------- cosilting

def cosilting_presentation(x: Module) -> Presentation:
    """Presentation over the opposite algebra dual to an injective copresentation of ``x``."""
    return silting_presentation(dual(x))


def is_cosilting(x: Module, cat: Catalog, seed: int = 0) -> bool:
    """``Cogen(x) = C_ξ``, decided as silting of ``D x`` over the opposite algebra."""
    dx = dual(x)
    return is_silting(dx, silting_presentation(dx), cat.dual())
