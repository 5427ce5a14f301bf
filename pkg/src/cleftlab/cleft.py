"""θ-extensions ``T = R ⋉_θ M`` and the functors between ``mod R`` and ``mod T``.

The basis of ``T`` is the basis of ``R`` followed by the basis of ``M``.  A
``T``-module is the same thing as a pair ``(X, α)``: an ``R``-module ``X``
with a balanced map ``α: M ⊗ X -> X``.  Here ``α`` is stored on the plain
vector-space tensor ``M ⊗_k X`` as ``alpha_tilde`` (index ``a * dim X + j``),
so block ``a`` of ``alpha_tilde`` is the action of the basis vector ``m_a``.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import Algebra, AlgebraError, ValidationReport, product
from .homology import Presentation, _projective_data, top_generators
from .rep import (Bimodule, Module, ModuleLawError, Morphism, TensorProduct, ThetaData, direct_sum_module,
                  is_isomorphic, kernel_module, quotient_module, tensor, tensor_bimodules)


class InstanceError(AlgebraError):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class CleftInstance:
    """The data ``(R, M, θ, T)`` with the split maps ``R -> T -> R``."""

    def __init__(self, base: Algebra, theta: ThetaData, total: Algebra, name: str = "", extras=None):
        self.base = base
        self.theta = theta
        self.bimodule = theta.bimodule
        self.total = total
        self.name = name
        self.nR = base.dim
        self.nM = self.bimodule.dim
        self.p = base.p
        self.extras = dict(extras or {})

    def __repr__(self):
        return f"<CleftInstance {self.name} R dim {self.nR}, M dim {self.nM}>"

    @property
    def injection(self) -> np.ndarray:
        m = la.zeros(self.total.dim, self.nR)
        m[:self.nR] = la.identity(self.nR)
        return m

    @property
    def projection(self) -> np.ndarray:
        m = la.zeros(self.nR, self.total.dim)
        m[:, :self.nR] = la.identity(self.nR)
        return m

    def expected_mult(self) -> np.ndarray:
        return _extension_mult(self.base, self.theta)

    def validate(self) -> ValidationReport:
        rep = ValidationReport(f"cleft instance {self.name}".strip())
        rep.extend(self.base.validate(), "R.")
        rep.extend(self.theta.validate(), "theta.")
        rep.extend(self.total.validate(), "T.")
        p = self.p
        want = self.expected_mult()
        if want.shape != self.total.mult.shape:
            rep.add("total_matches_extension_formula", False, want.shape)
        else:
            bad = np.argwhere(want != self.total.mult)
            lab = self.total.labels
            rep.add("total_matches_extension_formula", bad.size == 0,
                    None if bad.size == 0 else tuple(lab[int(i)] for i in bad[0]))
        pi = (self.projection @ self.injection) % p
        rep.add("projection_after_injection_is_identity", np.array_equal(pi, la.identity(self.nR)))
        # M is an ideal of T with M^m = 0
        t = self.total
        mcols = la.zeros(t.dim, self.nM)
        mcols[self.nR:] = la.identity(self.nM)
        ideal_ok = True
        for a in range(self.nM):
            for b in range(t.dim):
                for prod in (t.mul(mcols[:, a], la.identity(t.dim)[b]), t.mul(la.identity(t.dim)[b], mcols[:, a])):
                    if prod[:self.nR].any():
                        ideal_ok = False
        rep.add("M_is_ideal", ideal_ok)
        rad = la.column_space(np.concatenate([self._embedded_radical(), mcols], axis=1), p)
        rep.add("radical_is_radR_plus_M", la.rank(np.concatenate([rad, t.radical], axis=1), p) == rad.shape[1]
                == t.radical.shape[1])
        return rep

    def _embedded_radical(self) -> np.ndarray:
        r = la.zeros(self.total.dim, self.base.radical.shape[1])
        r[:self.nR] = self.base.radical
        return r

    @cached_property
    def opposite(self) -> "CleftInstance":
        """``T^op = R^op ⋉ M^op`` with ``θ^op(m ⊗ m') = θ(m' ⊗ m)``."""
        mop = self.bimodule.opposite()
        top = ThetaData(mop, self.theta.table.transpose(1, 0, 2), self.theta.nilpotency)
        inst = CleftInstance(self.base.opposite, top, self.total.opposite, f"{self.name}^op")
        inst.__dict__["opposite"] = self
        return inst

    # -- modules
    def theta_matrix(self, a: int) -> np.ndarray:
        """``Θ_a[:, b] = θ(m_a ⊗ m_b)``."""
        return self.theta.table[a].T.copy()


def _extension_mult(r: Algebra, th: ThetaData) -> np.ndarray:
    m = th.bimodule
    nR, nM = r.dim, m.dim
    n = nR + nM
    mult = np.zeros((n, n, n), dtype=np.int64)
    mult[:nR, :nR, :nR] = r.mult
    if nM:
        # r_i . m_b = left[i][:, b]; m_a . r_j = right[j][:, a]
        mult[:nR, nR:, nR:] = m.left.transpose(0, 2, 1)
        mult[nR:, :nR, nR:] = m.right.transpose(2, 0, 1)
        mult[nR:, nR:, nR:] = th.table
    return mult % r.p


def theta_extension(r: Algebra, th: ThetaData, name: str = "", validate: bool = True) -> CleftInstance:
    m = th.bimodule
    if not (m.left_algebra.same_as(r) and m.right_algebra.same_as(r)):
        raise InstanceError("bimodule is not over (R, R)")
    if validate:
        rep = th.validate()
        if not rep.ok:
            raise InstanceError(f"θ data invalid: {[c.name for c in rep.failures]}", rep)
    nM = m.dim
    mult = _extension_mult(r, th)
    unit = np.concatenate([r.unit, np.zeros(nM, dtype=np.int64)])
    idem = [np.concatenate([e, np.zeros(nM, dtype=np.int64)]) for e in r.idempotents]
    rad = la.block_diag(r.radical, la.identity(nM))
    mlabels = [l if l not in r.labels else f"m:{l}" for l in m.labels]
    t = Algebra(mult, unit, idem, rad, r.p, list(r.labels) + mlabels, r.vertices,
                name=f"{r.name}⋉{m.name}" if not name else f"T[{name}]")
    inst = CleftInstance(r, th, t, name or t.name)
    if validate:
        rep = inst.validate()
        if not rep.ok:
            raise InstanceError(f"θ-extension invalid: {[c.name for c in rep.failures]}", rep)
    return inst


def trivial_extension(r: Algebra, m: Bimodule, name: str = "") -> CleftInstance:
    return theta_extension(r, ThetaData.zero(m), name)


def arrow_bimodule(r: Algebra, arrows) -> Bimodule:
    """Bimodule over a semisimple ``r`` with one basis vector per arrow ``(source, target)``,
    acted on by ``e_target`` from the left and ``e_source`` from the right."""
    if r.radical.shape[1]:
        raise AlgebraError("arrow bimodules are defined over semisimple algebras")
    idx = {v: i for i, v in enumerate(r.vertices)}
    arrows = [(idx.get(s, s), idx.get(t, t)) for s, t in arrows]
    d = len(arrows)
    left = np.zeros((r.dim, d, d), dtype=np.int64)
    right = np.zeros((r.dim, d, d), dtype=np.int64)
    for a, (s, t) in enumerate(arrows):
        for b in range(r.dim):
            left[b, a, a] = r.idempotents[t][b]
            right[b, a, a] = r.idempotents[s][b]
    labels = [f"n{a + 1}" for a in range(d)]
    return Bimodule(r, r, left, right, labels, name="N")


def tensor_powers(n: Bimodule, upto: int) -> list:
    """``[(N^{⊗1}, None), (N^{⊗2}, TensorProduct), ...]`` built as ``N ⊗ N^{⊗(k-1)}``."""
    out = [(n, None)]
    while len(out) < upto:
        prev = out[-1][0]
        bm, tp = tensor_bimodules(n, prev)
        kept = [int(np.flatnonzero(tp.section[:, k])[0]) for k in range(tp.section.shape[1])]
        bm.labels = tuple(f"{n.labels[i // prev.dim]}⊗{prev.labels[i % prev.dim]}" for i in kept)
        bm.name = f"N^{len(out) + 1}"
        out.append((bm, tp))
    return out


def tensor_ring(r: Algebra, n: Bimodule, m: int, name: str = "") -> CleftInstance:
    """``T_R(N)`` for an ``m``-nilpotent ``N`` (``N^{⊗m} = 0``), as ``R ⋉_θ M'``."""
    if m < 1:
        raise InstanceError("nilpotency index must be positive")
    powers = tensor_powers(n, m)
    if powers[m - 1][0].dim:
        raise InstanceError(f"N is not {m}-nilpotent: N^{m} has dimension {powers[m - 1][0].dim}")
    blocks = [powers[k][0] for k in range(m - 1)]  # degrees 1 .. m-1
    dims = [b.dim for b in blocks]
    offs = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    D = int(offs[-1])
    p = r.p
    left = np.zeros((r.dim, D, D), dtype=np.int64)
    right = np.zeros((r.dim, D, D), dtype=np.int64)
    labels = []
    for k, b in enumerate(blocks):
        left[:, offs[k]:offs[k + 1], offs[k]:offs[k + 1]] = b.left
        right[:, offs[k]:offs[k + 1], offs[k]:offs[k + 1]] = b.right
        labels += list(b.labels)
    # concatenation maps c[(k, l)]: N^k ⊗_k N^l -> N^(k+l), degrees counted from 1
    conc = {}

    def concat(k, l):
        if (k, l) in conc:
            return conc[(k, l)]
        tgt_tp = powers[k + l - 1][1]
        if k == 1:
            c = tgt_tp.proj.copy()
        else:
            sec = powers[k - 1][1].section
            inner = concat(k - 1, l)
            c = (tgt_tp.proj @ np.kron(la.identity(n.dim), inner) @ np.kron(sec, la.identity(powers[l - 1][0].dim))) % p
        conc[(k, l)] = c
        return c

    table = np.zeros((D, D, D), dtype=np.int64)
    for k in range(1, m):
        for l in range(1, m - k):
            c = concat(k, l)
            dk, dl = dims[k - 1], dims[l - 1]
            for i in range(dk):
                for j in range(dl):
                    table[offs[k - 1] + i, offs[l - 1] + j, offs[k + l - 1]:offs[k + l]] = c[:, i * dl + j]
    mb = Bimodule(r, r, left, right, labels, name="M'")
    th = ThetaData(mb, table, m if D else 1)
    inst = theta_extension(r, th, name or f"T_{r.name}(N)")
    inst.extras["tensor_powers"] = [b for b, _ in powers]
    inst.extras["nilpotency"] = m
    return inst


def triangular_matrix(a: Algebra, b: Algebra, m: Bimodule, name: str = "") -> CleftInstance:
    """``[[a, m], [0, b]]`` for an ``(a, b)``-bimodule ``m``, as ``(a × b) ⋉ m``."""
    if not (m.left_algebra.same_as(a) and m.right_algebra.same_as(b)):
        raise InstanceError("bimodule is not over (a, b)")
    r = product(a, b)
    d = m.dim
    left = np.zeros((r.dim, d, d), dtype=np.int64)
    right = np.zeros((r.dim, d, d), dtype=np.int64)
    left[:a.dim] = m.left
    right[a.dim:] = m.right
    mb = Bimodule(r, r, left, right, m.labels, name=m.name or "M")
    return trivial_extension(r, mb, name or f"[{a.name} {m.name}; 0 {b.name}]")


# ---------------------------------------------------------------- pair modules

class PairModule:
    """A ``T``-module as ``(X, α)``."""

    def __init__(self, inst: CleftInstance, x: Module, alpha_tilde, check: bool = True):
        self.inst = inst
        self.x = x
        self.alpha_tilde = np.asarray(alpha_tilde, dtype=np.int64).reshape(x.dim, inst.nM * x.dim) % inst.p
        if check:
            bad = [k for k, ok in self.law().items() if not ok]
            if bad:
                raise ModuleLawError(f"pair law fails: {bad}", bad)

    @property
    def dim(self) -> int:
        return self.x.dim

    def block(self, a: int) -> np.ndarray:
        d = self.x.dim
        return self.alpha_tilde[:, a * d:(a + 1) * d]

    def law(self) -> dict:
        """The ``T``-module law split into its ``R``/``M`` components."""
        c, p, d = self.inst, self.inst.p, self.x.dim
        m = c.bimodule
        A = np.stack([self.block(a) for a in range(c.nM)]) if c.nM else np.zeros((0, d, d), dtype=np.int64)
        X = self.x.action
        out = {}
        # α is left linear: r . α(m ⊗ x) = α(r.m ⊗ x)
        lhs = np.einsum("rij,ajk->raik", X, A)
        rhs = np.einsum("rca,cik->raik", m.left, A)
        out["left_linear"] = not np.any((lhs - rhs) % p)
        # α is balanced: α(m.r ⊗ x) = α(m ⊗ r.x)
        lhs = np.einsum("rca,cik->raik", m.right, A)
        rhs = np.einsum("aij,rjk->raik", A, X)
        out["balanced"] = not np.any((lhs - rhs) % p)
        # α∘(1⊗α) = α∘(θ⊗1)
        lhs = np.einsum("aij,bjk->abik", A, A)
        rhs = np.einsum("abc,cik->abik", c.theta.table, A)
        out["associative"] = not np.any((lhs - rhs) % p)
        return out

    @cached_property
    def tensor(self) -> TensorProduct:
        return tensor(self.inst.bimodule, self.x)

    @cached_property
    def alpha(self) -> Morphism:
        tp = self.tensor
        return Morphism(tp.module, self.x, (self.alpha_tilde @ tp.section) % self.inst.p, check=False)

    @cached_property
    def module(self) -> Module:
        c = self.inst
        d = self.x.dim
        act = np.zeros((c.total.dim, d, d), dtype=np.int64)
        act[:c.nR] = self.x.action
        for a in range(c.nM):
            act[c.nR + a] = self.block(a)
        return Module(c.total, act, check=False)

    @classmethod
    def from_module(cls, inst: CleftInstance, t: Module, check: bool = True) -> "PairModule":
        if not t.algebra.same_as(inst.total):
            raise ModuleLawError("module is not over the θ-extension")
        x = Module(inst.base, t.action[:inst.nR], check=check)
        at = np.concatenate([t.action[inst.nR + a] for a in range(inst.nM)], axis=1) if inst.nM \
            else la.zeros(t.dim, 0)
        pm = cls(inst, x, at, check=check)
        pm.__dict__["module"] = t
        return pm


def _tmod(pm) -> Module:
    return pm.module if isinstance(pm, PairModule) else pm


def _pair(inst, pm) -> PairModule:
    return pm if isinstance(pm, PairModule) else PairModule.from_module(inst, pm)


def as_pair(inst: CleftInstance, t: Module) -> PairModule:
    return PairModule.from_module(inst, t)


def functor_F(inst: CleftInstance, y: Module) -> Module:
    """``F(Y) = M ⊗_R Y``."""
    return tensor(inst.bimodule, y).module


class LiftedModule(PairModule):
    """``l(Y) = (Y ⊕ M⊗Y, [[0, 0], [1, θ⊗1]])``, remembering ``Y`` and the tensor data."""

    def __init__(self, inst: CleftInstance, y: Module):
        p = inst.p
        tp = tensor(inst.bimodule, y)
        F = tp.module
        dy, q = y.dim, F.dim
        x = direct_sum_module([y, F], inst.base)
        blocks = []
        for a in range(inst.nM):
            A = la.zeros(dy + q, dy + q)
            A[dy:, :dy] = tp.proj[:, a * dy:(a + 1) * dy]
            if q:
                A[dy:, dy:] = (tp.proj @ np.kron(inst.theta_matrix(a), la.identity(dy)) @ tp.section) % p
            blocks.append(A)
        at = np.concatenate(blocks, axis=1) if blocks else la.zeros(dy + q, 0)
        super().__init__(inst, x, at, check=True)
        self.y = y
        self.F = tp
        # validate the assembled T-module exactly
        w = self.module.law_violation()
        if w is not None:
            raise ModuleLawError(f"l(Y) violates the T-module law at {w}", w)


def functor_l(inst: CleftInstance, y: Module) -> LiftedModule:
    if not y.algebra.same_as(inst.base):
        raise ModuleLawError("module is not over R")
    return LiftedModule(inst, y)


def functor_l_map(inst: CleftInstance, f: Morphism, src: LiftedModule | None = None,
                  tgt: LiftedModule | None = None) -> Morphism:
    """``l(f) = f ⊕ (1_M ⊗ f)``."""
    src = src or functor_l(inst, f.source)
    tgt = tgt or functor_l(inst, f.target)
    mat = la.block_diag(f.matrix, src.F.map(f, tgt.F))
    return Morphism(src.module, tgt.module, mat, check=True)


def functor_e(inst: CleftInstance, t) -> Module:
    """Restriction along ``R -> T``."""
    return _pair(inst, t).x


def functor_i(inst: CleftInstance, y: Module) -> PairModule:
    """``i(Y) = (Y, 0)``."""
    return PairModule(inst, y, la.zeros(y.dim, inst.nM * y.dim), check=True)


def functor_q(inst: CleftInstance, t) -> tuple[Module, Morphism, np.ndarray]:
    """``q(X, α) = Coker α = X / M X`` with projection and a linear section."""
    pm = _pair(inst, t)
    q, proj, section = quotient_module(pm.x, la.column_space(pm.alpha_tilde, inst.p))
    return q, proj, section


def functor_q_map(inst: CleftInstance, f: Morphism, src=None, tgt=None) -> Morphism:
    """``q(f)`` for a ``T``-linear map ``f``."""
    src = src or functor_q(inst, f.source)
    tgt = tgt or functor_q(inst, f.target)
    mat = (tgt[1].matrix @ f.matrix @ src[2]) % inst.p
    return Morphism(src[0], tgt[0], mat, check=True)


def functor_e_map(inst: CleftInstance, f: Morphism) -> Morphism:
    return Morphism(functor_e(inst, f.source), functor_e(inst, f.target), f.matrix, check=True)


def counit_mu(inst: CleftInstance, t) -> tuple[Morphism, LiftedModule]:
    """``μ: l(e(X)) -> X``, ``(x, m ⊗ x') ↦ x + α(m ⊗ x')``."""
    pm = _pair(inst, t)
    le = functor_l(inst, pm.x)
    mat = np.concatenate([la.identity(pm.dim), (pm.alpha_tilde @ le.F.section) % inst.p], axis=1)
    mu = Morphism(le.module, pm.module, mat, check=True)
    if not mu.is_surjective():
        raise ModuleLawError("counit is not an epimorphism")
    return mu, le


def unit_eta(inst: CleftInstance, y: Module) -> Morphism:
    """``η: q(i(Y)) -> Y``; an isomorphism."""
    q, proj, section = functor_q(inst, functor_i(inst, y))
    eta = Morphism(q, y, section, check=True)
    if eta.rank != y.dim or q.dim != y.dim:
        raise ModuleLawError("unit is not an isomorphism")
    return eta


# --------------------------------------------------------------- presentations

def lift_presentation(inst: CleftInstance, sigma: Presentation) -> Presentation:
    """``l(P1) --l(σ)--> l(P0) -> l(Y) -> 0``."""
    lp1 = functor_l(inst, sigma.sigma.source)
    lp0 = functor_l(inst, sigma.sigma.target)
    ly = functor_l(inst, sigma.module)
    ls = functor_l_map(inst, sigma.sigma, lp1, lp0)
    lc = functor_l_map(inst, sigma.cover, lp0, ly)
    pres = Presentation(ls, lc, list(sigma.p1), list(sigma.p0), minimal=False, standard=False)
    checks = pres.check()
    if not all(checks.values()):
        raise ModuleLawError(f"lifted presentation is not exact: {checks}")
    pres.minimal = True
    pres.minimal = all(pres.check().values())
    pres.lifted_from = sigma
    pres.lifted_module = ly
    return pres


def lifted_projective(inst: CleftInstance, i: int) -> LiftedModule:
    cache = inst.__dict__.setdefault("_lifted_projectives", {})
    if i not in cache:
        cache[i] = functor_l(inst, _projective_data(inst.base)[i][0])
    return cache[i]


def _lifted_generator(inst: CleftInstance, i: int) -> np.ndarray:
    lp = lifted_projective(inst, i)
    e = _projective_data(inst.base)[i][2]
    return np.concatenate([e, np.zeros(lp.dim - e.shape[0], dtype=np.int64)])


def map_from_cyclic(src: Module, g, tgt: Module, v) -> np.ndarray:
    """Matrix of the module map ``src -> tgt`` with ``g ↦ v`` (``src`` generated by ``g``)."""
    a, p = src.algebra, src.p
    G = np.stack([src.act(a.basis_vector(k)) @ g for k in range(a.dim)], axis=1) % p
    V = np.stack([tgt.act(a.basis_vector(k)) @ v for k in range(a.dim)], axis=1) % p
    coords = la.solve(G, la.identity(src.dim), p)
    if coords is None:
        raise ModuleLawError("source is not cyclic on the given generator")
    return (V @ coords) % p


def _l_cover(inst: CleftInstance, t: Module):
    """Projective cover of a ``T``-module by a sum of ``l(P(i))``."""
    gens = top_generators(t)
    mods = [lifted_projective(inst, i) for i, _ in gens]
    blocks = [map_from_cyclic(lp.module, _lifted_generator(inst, i), t, v) for lp, (i, v) in zip(mods, gens)]
    P = direct_sum_module([lp.module for lp in mods], inst.total)
    mat = np.concatenate(blocks, axis=1) if blocks else la.zeros(t.dim, 0)
    return P, Morphism(P, t, mat, check=True), [i for i, _ in gens]


def l_form_presentation(inst: CleftInstance, t) -> Presentation:
    """Minimal presentation of a ``T``-module with terms written as ``l(P)``."""
    t = _tmod(t)
    P0, eps, v0 = _l_cover(inst, t)
    K, inc = kernel_module(eps)
    P1, eps1, v1 = _l_cover(inst, K)
    sigma = Morphism(P1, P0, (inc.matrix @ eps1.matrix) % inst.p, check=False)
    return Presentation(sigma, eps, v1, v0, minimal=True, standard=False)


def augment_l_form(inst: CleftInstance, pres: Presentation, vertices) -> Presentation:
    """``δ ⊕ (l(P_S) -> 0)``."""
    extra = [lifted_projective(inst, i).module for i in vertices]
    P1 = direct_sum_module([pres.sigma.source] + extra, inst.total)
    mat = np.concatenate([pres.sigma.matrix, la.zeros(pres.sigma.target.dim, P1.dim - pres.sigma.source.dim)],
                         axis=1)
    return Presentation(Morphism(P1, pres.sigma.target, mat, check=False), pres.cover,
                        list(pres.p1) + list(vertices), list(pres.p0), minimal=False, standard=False)


def descend_presentation(inst: CleftInstance, delta: Presentation) -> Presentation:
    """``q(δ)``: apply ``q`` to a ``T``-presentation."""
    s1 = functor_q(inst, delta.sigma.source)
    s0 = functor_q(inst, delta.sigma.target)
    sx = functor_q(inst, delta.module)
    qs = functor_q_map(inst, delta.sigma, s1, s0)
    qc = functor_q_map(inst, delta.cover, s0, sx)
    return Presentation(qs, qc, list(delta.p1), list(delta.p0), minimal=False, standard=False)


def lifted_projective_splits(inst: CleftInstance, i: int, seed: int = 0) -> bool:
    """``l(P(i))`` is isomorphic to the indecomposable projective ``T e_i``."""
    return is_isomorphic(lifted_projective(inst, i).module, _projective_data(inst.total)[i][0], seed)
