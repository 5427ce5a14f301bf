"""Projective covers, minimal resolutions, Ext/Tor, the Nakayama functor and τ.

Projectives are always handled as ordered direct sums of the indecomposable
projectives ``P(i) = A e_i``, remembered by their vertex lists.  That keeps
the Nakayama functor functorial on explicit matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra
from .rep import Bimodule, Module, Morphism, direct_sum_module, dual, hom_space, kernel_module, submodule, tensor

DEFAULT_PD_BOUND = 12


class NotProjective(ValueError):
    pass


# ------------------------------------------------------------- projectives

def _projective_data(a: Algebra):
    data = a.__dict__.get("_projective_data")
    if data is not None:
        return data
    reg = Module.regular(a)
    out = []
    for i, e in enumerate(a.idempotents):
        basis = la.column_space(a.right_mult(e), a.p)  # A e_i
        mod, _ = submodule(reg, basis)
        mod.name = f"P({a.vertices[i]})"
        e_coord = la.solve(basis, e, a.p)
        rbasis = la.column_space(a.left_mult(e), a.p)  # e_i A
        out.append((mod, basis, e_coord, rbasis))
    a.__dict__["_projective_data"] = out
    return out


def indecomposable_projectives(a: Algebra) -> list:
    return [d[0] for d in _projective_data(a)]


def projective(a: Algebra, i: int) -> Module:
    return _projective_data(a)[i][0]


def projective_sum(a: Algebra, vertices) -> Module:
    return direct_sum_module([projective(a, i) for i in vertices], a)


def injective(a: Algebra, i: int) -> Module:
    return nakayama(a, [i])


def simple(a: Algebra, i: int) -> Module:
    dims = [0] * a.n_vertices
    dims[i] = 1
    return Module.from_vertex_maps(a, dims, {}, check=False, name=f"S({a.vertices[i]})")


def radical_basis(x: Module) -> np.ndarray:
    """Basis of ``rad(A) . x``."""
    a = x.algebra
    if x.dim == 0:
        return la.zeros(0, 0)
    cols = [(x.act(a.radical[:, k])) for k in range(a.radical.shape[1])]
    if not cols:
        return la.zeros(x.dim, 0)
    return la.column_space(np.concatenate(cols, axis=1), x.p)


def _map_from_projective(x: Module, i: int, v) -> np.ndarray:
    """Matrix of ``P(i) -> x, a e_i ↦ a . v``."""
    a = x.algebra
    basis = _projective_data(a)[i][1]
    return np.stack([x.act(basis[:, k]) @ v for k in range(basis.shape[1])], axis=1) % x.p \
        if basis.shape[1] else la.zeros(x.dim, 0)


def top_generators(x: Module) -> list:
    """``(vertex, vector)`` pairs whose images form a basis of ``x / rad x``."""
    a, p = x.algebra, x.p
    current = radical_basis(x)
    out = []
    for i, e in enumerate(a.idempotents):
        block = la.column_space(x.act(e), p)
        for k in range(block.shape[1]):
            v = block[:, k]
            if la.in_span(current, v, p):
                continue
            current = np.concatenate([current, v.reshape(-1, 1)], axis=1)
            out.append((i, v))
    return out


def projective_cover(x: Module) -> tuple[Module, Morphism, list]:
    """``(P, epi, vertices)`` with ``P = ⊕ P(vertices[k])``."""
    a = x.algebra
    gens = top_generators(x)
    verts = [i for i, _ in gens]
    P = projective_sum(a, verts)
    blocks = [_map_from_projective(x, i, v) for i, v in gens]
    mat = np.concatenate(blocks, axis=1) if blocks else la.zeros(x.dim, 0)
    epi = Morphism(P, x, mat, check=False)
    return P, epi, verts


# ------------------------------------------------------------ presentations

@dataclass
class Presentation:
    """``P1 --sigma--> P0 --cover--> x -> 0`` with projectives as vertex lists."""

    sigma: Morphism
    cover: Morphism
    p1: list
    p0: list
    minimal: bool = False
    standard: bool = True  # terms are literally projective_sum(A, p1/p0)

    @property
    def algebra(self) -> Algebra:
        return self.sigma.source.algebra

    @property
    def module(self) -> Module:
        return self.cover.target

    def augmented(self, vertices) -> "Presentation":
        """``sigma ⊕ (P_S -> 0)`` for a list of vertices ``S``."""
        if not self.standard:
            raise NotProjective("augmentation needs a presentation by standard projectives")
        a = self.algebra
        extra = projective_sum(a, vertices)
        p1 = list(self.p1) + list(vertices)
        P1 = projective_sum(a, p1)
        mat = np.concatenate([self.sigma.matrix, la.zeros(self.sigma.target.dim, extra.dim)], axis=1)
        return Presentation(Morphism(P1, self.sigma.target, mat, check=False), self.cover, p1,
                            list(self.p0), minimal=False)

    def check(self) -> dict:
        s, c = self.sigma, self.cover
        p = s.p
        out = {
            "cover_surjective": c.is_surjective(),
            "composite_zero": la.is_zero((c.matrix @ s.matrix) % p),
            "exact_at_P0": la.rank(s.matrix, p) == s.target.dim - c.rank if s.target.dim else True,
        }
        if self.minimal:
            rad0 = radical_basis(s.target)
            out["image_in_radical"] = all(la.in_span(rad0, s.matrix[:, k], p) for k in range(s.source.dim))
            kc = la.kernel(c.matrix, p) if s.target.dim else la.zeros(0, 0)
            out["cover_kernel_in_radical"] = all(la.in_span(rad0, kc[:, k], p) for k in range(kc.shape[1]))
            rad1 = radical_basis(s.source)
            ks = la.kernel(s.matrix, p) if s.source.dim else la.zeros(0, 0)
            out["sigma_kernel_in_radical"] = all(la.in_span(rad1, ks[:, k], p) for k in range(ks.shape[1]))
        return out


def minimal_presentation(x: Module) -> Presentation:
    P0, eps, v0 = projective_cover(x)
    K, inc = kernel_module(eps)
    P1, eps1, v1 = projective_cover(K)
    sigma = Morphism(P1, P0, (inc.matrix @ eps1.matrix) % x.p, check=False)
    pres = Presentation(sigma, eps, v1, v0, minimal=True)
    bad = [k for k, ok in pres.check().items() if not ok]
    if bad:
        raise AssertionError(f"minimal presentation fails {bad}")
    return pres


@dataclass
class Resolution:
    """Minimal projective resolution ``... -> P_1 -> P_0 -> x``, truncated.

    ``diffs[j]`` is ``d_{j+1}: P_{j+1} -> P_j``.  ``terminated`` means the
    syzygy after the last computed term is zero.
    """

    module: Module
    terms: list
    vertices: list
    diffs: list
    augmentation: Morphism
    terminated: bool
    minimal: bool = True
    syzygies: list = field(default_factory=list)

    def length(self) -> int | None:
        return len(self.terms) - 1 if self.terminated else None

    def term(self, j: int) -> Module:
        if j < len(self.terms):
            return self.terms[j]
        return Module.zero(self.module.algebra)

    def is_exact(self) -> bool:
        p = self.module.p
        if self.augmentation.rank != self.module.dim:
            return False
        outgoing = [self.augmentation.rank] + [d.rank for d in self.diffs]
        for j, P in enumerate(self.terms):
            incoming = outgoing[j + 1] if j + 1 < len(outgoing) else 0
            last = j == len(self.terms) - 1
            if (not last or self.terminated) and P.dim - outgoing[j] != incoming:
                return False
        prev = self.augmentation.matrix
        for d in self.diffs:
            if not la.is_zero((prev @ d.matrix) % p):
                return False
            prev = d.matrix
        return True


def resolution(x: Module, n: int) -> Resolution:
    """Minimal resolution through homological degree ``n``."""
    p = x.p
    P0, eps, v0 = projective_cover(x)
    terms, verts, diffs = [P0], [v0], []
    K, inc = kernel_module(eps)
    syz = [K]
    while len(terms) <= n and K.dim:
        P, cov, v = projective_cover(K)
        d = Morphism(P, terms[-1], (inc.matrix @ cov.matrix) % p, check=False)
        terms.append(P)
        verts.append(v)
        diffs.append(d)
        K, inc = kernel_module(cov)
        syz.append(K)
    if x.dim == 0:
        terms, verts = [], []
    return Resolution(x, terms, verts, diffs, eps, K.dim == 0, True, syz)


def pd_upto(x: Module, bound: int = DEFAULT_PD_BOUND) -> int | None:
    """Projective dimension if at most ``bound``; ``None`` means "> bound"."""
    if x.dim == 0:
        return 0
    r = resolution(x, bound)
    return r.length()


def syzygy(x: Module, n: int = 1) -> Module:
    r = resolution(x, n)
    return r.syzygies[n - 1] if n - 1 < len(r.syzygies) else Module.zero(x.algebra)


# -------------------------------------------------------------------- Ext/Tor

def _hom_cochain_ranks(res: Resolution, y: Module, upto: int):
    dims, ranks = [], []
    p = y.p
    for j in range(upto + 1):
        P = res.term(j)
        H = hom_space(P, y) if P.dim else np.zeros((0, y.dim, 0), dtype=np.int64)
        dims.append(H.shape[0])
        if j < len(res.diffs) and H.shape[0]:
            d = res.diffs[j].matrix
            imgs = np.stack([((h @ d) % p).reshape(-1) for h in H], axis=1)
            ranks.append(la.rank(imgs, p))
        else:
            ranks.append(0)
    return dims, ranks


def ext_dim(x: Module, y: Module, j: int) -> int:
    if j < 0:
        raise ValueError("Ext degree must be nonnegative")
    res = resolution(x, j + 1)
    dims, ranks = _hom_cochain_ranks(res, y, j)
    return dims[j] - ranks[j] - (ranks[j - 1] if j else 0)


def ext_dims(x: Module, y: Module, upto: int) -> list:
    """``[dim Ext^0, ..., dim Ext^upto]`` from one resolution."""
    res = resolution(x, upto + 1)
    dims, ranks = _hom_cochain_ranks(res, y, upto)
    return [dims[j] - ranks[j] - (ranks[j - 1] if j else 0) for j in range(upto + 1)]


def tor_dims(m: Bimodule, y: Module, upto: int) -> list:
    """``[dim Tor_0, ..., dim Tor_upto]`` of ``M ⊗ -`` along a resolution of ``y``."""
    p = y.p
    res = resolution(y, upto + 1)
    tps = [tensor(m, res.term(j)) for j in range(upto + 2)]
    ranks = [0]  # image of M⊗d_0 := 0
    for j in range(1, upto + 2):
        if j - 1 < len(res.diffs):
            ranks.append(la.rank(tps[j].map(res.diffs[j - 1], tps[j - 1]), p))
        else:
            ranks.append(0)
    return [tps[j].module.dim - ranks[j] - ranks[j + 1] for j in range(upto + 1)]


def tor_dim(m: Bimodule, y: Module, j: int) -> int:
    if j < 0:
        raise ValueError("Tor degree must be nonnegative")
    return tor_dims(m, y, j)[j]


# ------------------------------------------------------------------ Nakayama

def nakayama(a: Algebra, vertices) -> Module:
    """``ν(⊕ P(i)) = ⊕ D(e_i A)``."""
    mods = []
    for i in vertices:
        key = f"_injective_{i}"
        mod = a.__dict__.get(key)
        if mod is None:
            C = _projective_data(a)[i][3]
            acts = np.concatenate([(a.right_regular[b] @ C) % a.p for b in range(a.dim)], axis=1)
            coords = la.solve(C, acts, a.p)
            k = C.shape[1]
            R = coords.reshape(k, a.dim, k).transpose(1, 0, 2)
            mod = Module(a, R.transpose(0, 2, 1), check=False, name=f"I({a.vertices[i]})")
            a.__dict__[key] = mod
        mods.append(mod)
    return direct_sum_module(mods, a)


def nakayama_map(a: Algebra, src: list, tgt: list, matrix) -> np.ndarray:
    """``ν f`` for ``f: ⊕P(src) -> ⊕P(tgt)`` given in the standard bases."""
    p = a.p
    data = _projective_data(a)
    matrix = np.asarray(matrix, dtype=np.int64)
    srow = np.cumsum([0] + [data[i][1].shape[1] for i in src])
    trow = np.cumsum([0] + [data[j][1].shape[1] for j in tgt])
    isrc = np.cumsum([0] + [data[i][3].shape[1] for i in src])
    itgt = np.cumsum([0] + [data[j][3].shape[1] for j in tgt])
    out = la.zeros(int(itgt[-1]), int(isrc[-1]))
    for s, i in enumerate(src):
        for t, j in enumerate(tgt):
            blk = matrix[trow[t]:trow[t + 1], srow[s]:srow[s + 1]]
            if not blk.any():
                continue
            # f(x) = x c with c = f(e_i) ∈ e_i A e_j
            c = (data[j][1] @ blk @ data[i][2]) % p
            Ci, Cj = data[i][3], data[j][3]
            lc = la.solve(Ci, (a.left_mult(c) @ Cj) % p, p)
            if lc is None:
                raise NotProjective("block is not a map between indecomposable projectives")
            out[itgt[t]:itgt[t + 1], isrc[s]:isrc[s + 1]] = lc.T
    return out


def nakayama_morphism(pres_or_sigma, src=None, tgt=None) -> Morphism:
    if isinstance(pres_or_sigma, Presentation):
        if not pres_or_sigma.standard:
            raise NotProjective("Nakayama functor needs a presentation by standard projectives")
        sigma, src, tgt = pres_or_sigma.sigma, pres_or_sigma.p1, pres_or_sigma.p0
    else:
        sigma = pres_or_sigma
    a = sigma.source.algebra
    return Morphism(nakayama(a, src), nakayama(a, tgt), nakayama_map(a, src, tgt, sigma.matrix), check=False)


def tau(x: Module) -> Module:
    """Auslander-Reiten translate: kernel of ``ν σ`` for the minimal presentation."""
    pres = minimal_presentation(x)
    if not pres.p1:
        return Module.zero(x.algebra)
    k, _ = kernel_module(nakayama_morphism(pres))
    return k


def tau_inverse(x: Module) -> Module:
    """``τ^{-1} x = D τ_{A^op} D x``."""
    t = tau(dual(x))
    return dual(t)


def is_projective(x: Module) -> bool:
    return x.dim == 0 or not minimal_presentation(x).p1
