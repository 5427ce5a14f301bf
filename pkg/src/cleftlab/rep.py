"""Modules, morphisms and bimodules over an :class:`~cleftlab.algebra.Algebra`.

A module stores one action matrix per algebra basis element (``action[i] @ v
== e_i . v``); morphism matrices are ``target.dim x source.dim``.  Every
randomised routine takes an explicit seed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import Algebra, ValidationReport, field_algebra


class ModuleLawError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class AlgebraMismatch(ValueError):
    pass


class DecompositionError(RuntimeError):
    pass


class Inconclusive(RuntimeError):
    """A search ran out of budget without deciding the question."""


def _same(a: Algebra, b: Algebra, what="modules"):
    if not a.same_as(b):
        raise AlgebraMismatch(f"{what} live over different algebras ({a.name!r} vs {b.name!r})")


def law_residual(algebra: Algebra, action: np.ndarray) -> np.ndarray:
    """``action_i action_j - sum_k c_ijk action_k`` for all basis pairs."""
    p = algebra.p
    lhs = np.einsum("iab,jbc->ijac", action, action)
    rhs = np.einsum("ijk,kac->ijac", algebra.mult, action)
    return (lhs - rhs) % p


def actions_from_generators(algebra: Algebra, gen_mats) -> np.ndarray:
    """Action of every basis element, given matrices for ``algebra.generators``."""
    p = algebra.p
    words, coef = algebra.word_table
    d = gen_mats[0].shape[0] if len(gen_mats) else 0
    word_mats = []
    for w in words:
        m = la.identity(d)
        for g in w:
            m = (m @ gen_mats[g]) % p
        word_mats.append(m)
    wm = np.stack(word_mats) if word_mats else np.zeros((0, d, d), dtype=np.int64)
    return np.einsum("wi,wab->iab", coef, wm) % p


class Module:
    """A finite-dimensional left module given by action matrices."""

    def __init__(self, algebra: Algebra, action, check: bool = True, name: str = ""):
        self.algebra = algebra
        self.p = algebra.p
        act = np.array(action, dtype=np.int64) % self.p
        if act.ndim != 3 or act.shape[0] != algebra.dim or act.shape[1] != act.shape[2]:
            raise ModuleLawError(f"action array has shape {act.shape}, expected ({algebra.dim}, d, d)")
        self.action = act
        self.action.setflags(write=False)
        self.dim = act.shape[1]
        self.name = name
        if check:
            w = self.law_violation()
            if w is not None:
                raise ModuleLawError(f"module law fails for basis pair {w}", w)

    def __repr__(self):
        nm = f"{self.name} " if self.name else ""
        return f"<Module {nm}dim={self.dim} dimvec={self.vertex_dims} over {self.algebra.name}>"

    # -- construction
    @classmethod
    def zero(cls, algebra: Algebra) -> "Module":
        return cls(algebra, np.zeros((algebra.dim, 0, 0), dtype=np.int64), check=False, name="0")

    @classmethod
    def regular(cls, algebra: Algebra) -> "Module":
        return cls(algebra, algebra.left_regular, check=False, name="A")

    @classmethod
    def from_generators(cls, algebra: Algebra, gen_mats, check=True, name="") -> "Module":
        """Build from matrices for the idempotents followed by the radical generators.

        ``gen_mats`` may be a list in ``algebra.generators`` order or a dict
        keyed by ``algebra.generator_labels``.
        """
        if isinstance(gen_mats, dict):
            gen_mats = [gen_mats[k] for k in algebra.generator_labels]
        mats = [np.asarray(g, dtype=np.int64) % algebra.p for g in gen_mats]
        act = actions_from_generators(algebra, mats)
        mod = cls(algebra, act, check=check, name=name)
        if check:
            for g, (gv, m) in enumerate(zip(algebra.generators, mats)):
                if np.any(mod.act(gv) != m):
                    raise ModuleLawError(
                        f"generator {algebra.generator_labels[g]} does not act as supplied", g)
        return mod

    @classmethod
    def from_vertex_maps(cls, algebra: Algebra, vertex_dims, arrow_maps, check=True, name="") -> "Module":
        """Representation form: a dimension per vertex and a matrix per arrow."""
        dims = [int(vertex_dims.get(v, 0)) if isinstance(vertex_dims, dict) else int(vertex_dims[i])
                for i, v in enumerate(algebra.vertices)]
        off = np.concatenate([[0], np.cumsum(dims)]).astype(int)
        d = int(off[-1])
        gens = []
        for i in range(algebra.n_vertices):
            m = la.zeros(d, d)
            m[off[i]:off[i + 1], off[i]:off[i + 1]] = la.identity(dims[i])
            gens.append(m)
        for vec, s, t, label in algebra.arrows:
            m = la.zeros(d, d)
            block = np.asarray(arrow_maps.get(label, la.zeros(dims[t], dims[s])), dtype=np.int64)
            block = block.reshape(dims[t], dims[s]) if block.size else la.zeros(dims[t], dims[s])
            m[off[t]:off[t + 1], off[s]:off[s + 1]] = block % algebra.p
            gens.append(m)
        return cls.from_generators(algebra, gens, check=check, name=name)

    # -- basic queries
    def act(self, element) -> np.ndarray:
        return np.einsum("i,iab->ab", np.asarray(element, dtype=np.int64), self.action) % self.p

    def law_violation(self):
        if self.dim == 0:
            return None
        res = law_residual(self.algebra, self.action)
        bad = np.argwhere(res.any(axis=(2, 3)))
        if bad.size:
            i, j = bad[0]
            return (self.algebra.labels[i], self.algebra.labels[j])
        if np.any(self.act(self.algebra.unit) != la.identity(self.dim)):
            return ("unit",)
        return None

    @cached_property
    def gen_matrices(self) -> list:
        return [self.act(g) for g in self.algebra.generators]

    @cached_property
    def frame(self):
        """Basis adapted to the vertex decomposition ``X = ⊕ e_i X``."""
        blocks = [la.column_space(self.act(e), self.p) for e in self.algebra.idempotents]
        dims = tuple(b.shape[1] for b in blocks)
        P = np.concatenate(blocks, axis=1) if blocks else la.zeros(0, 0)
        Pinv = la.inverse(P, self.p) if self.dim else la.zeros(0, 0)
        off = tuple(int(x) for x in np.concatenate([[0], np.cumsum(dims)]))
        return P, Pinv, dims, off

    @property
    def vertex_dims(self) -> tuple:
        return self.frame[2]

    @cached_property
    def arrow_blocks(self) -> list:
        P, Pinv, dims, off = self.frame
        out = []
        for vec, s, t, _ in self.algebra.arrows:
            g = (Pinv @ self.act(vec) @ P) % self.p
            out.append(g[off[t]:off[t + 1], off[s]:off[s + 1]])
        return out

    def support(self) -> list:
        return [i for i, d in enumerate(self.vertex_dims) if d]


class Morphism:
    def __init__(self, source: Module, target: Module, matrix, check: bool = True):
        _same(source.algebra, target.algebra)
        self.source, self.target = source, target
        self.p = source.p
        m = np.array(matrix, dtype=np.int64) % self.p
        self.matrix = m.reshape(target.dim, source.dim)
        if check and not self.is_homomorphism():
            raise ModuleLawError("matrix does not intertwine the actions")

    def is_homomorphism(self) -> bool:
        f = self.matrix
        lhs = np.einsum("ab,ibc->iac", f, self.source.action)
        rhs = np.einsum("iab,bc->iac", self.target.action, f)
        return not np.any((lhs - rhs) % self.p)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return compose(self, other)

    @property
    def rank(self) -> int:
        return la.rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def __repr__(self):
        return f"<Morphism {self.source.dim}->{self.target.dim} rank={self.rank}>"


def identity_morphism(x: Module) -> Morphism:
    return Morphism(x, x, la.identity(x.dim), check=False)


def zero_morphism(x: Module, y: Module) -> Morphism:
    return Morphism(x, y, la.zeros(y.dim, x.dim), check=False)


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``f ∘ g``."""
    if g.target.dim != f.source.dim:
        raise ModuleLawError("morphisms are not composable")
    return Morphism(g.source, f.target, (f.matrix @ g.matrix) % f.p, check=False)


# ------------------------------------------------------------------- hom spaces

def hom_space(x: Module, y: Module) -> np.ndarray:
    """Basis of ``Hom(x, y)`` as an array of shape ``(k, y.dim, x.dim)``."""
    _same(x.algebra, y.algebra)
    p = x.p
    if x.dim == 0 or y.dim == 0:
        return np.zeros((0, y.dim, x.dim), dtype=np.int64)
    Px, Pxi, dx, ox = x.frame
    Py, Pyi, dy, oy = y.frame
    nv = len(dx)
    uoff = [0]
    for i in range(nv):
        uoff.append(uoff[-1] + dy[i] * dx[i])
    nu = uoff[-1]
    if nu == 0:
        return np.zeros((0, y.dim, x.dim), dtype=np.int64)
    rows = []
    for k, (vec, s, t, _) in enumerate(x.algebra.arrows):
        A = x.arrow_blocks[k]
        B = y.arrow_blocks[k]
        if dy[t] * dx[s] == 0:
            continue
        eq = la.zeros(dy[t] * dx[s], nu)
        # vec(F_t A) = (A^T ⊗ I) vec(F_t), column-major vec
        if dx[t] * dy[t]:
            eq[:, uoff[t]:uoff[t + 1]] += np.kron(A.T, la.identity(dy[t]))
        if dx[s] * dy[s]:
            eq[:, uoff[s]:uoff[s + 1]] -= np.kron(la.identity(dx[s]), B)
        rows.append(eq % p)
    sysm = np.concatenate(rows, axis=0) if rows else la.zeros(0, nu)
    ker = la.kernel(sysm, p)
    out = np.zeros((ker.shape[1], y.dim, x.dim), dtype=np.int64)
    for c in range(ker.shape[1]):
        F = la.zeros(y.dim, x.dim)
        for i in range(nv):
            blk = ker[uoff[i]:uoff[i + 1], c].reshape(dx[i], dy[i]).T
            F[oy[i]:oy[i + 1], ox[i]:ox[i + 1]] = blk
        out[c] = (Py @ F @ Pxi) % p
    return out


def hom_dim(x: Module, y: Module) -> int:
    return hom_space(x, y).shape[0]


def hom_basis(x: Module, y: Module) -> list:
    return [Morphism(x, y, m, check=False) for m in hom_space(x, y)]


# -------------------------------------------------- sub, quotient, kernel, ...

def submodule(x: Module, basis) -> tuple[Module, Morphism]:
    """The submodule spanned by the (independent, invariant) columns of ``basis``."""
    p = x.p
    basis = la.columns(basis, x.dim) % p
    k = basis.shape[1]
    if k == 0:
        z = Module.zero(x.algebra)
        return z, Morphism(z, x, la.zeros(x.dim, 0), check=False)
    images = np.concatenate([(x.action[i] @ basis) % p for i in range(x.algebra.dim)], axis=1)
    coords = la.solve(basis, images, p)
    if coords is None:
        raise ModuleLawError("subspace is not a submodule")
    act = coords.reshape(k, x.algebra.dim, k).transpose(1, 0, 2)
    sub = Module(x.algebra, act, check=False)
    return sub, Morphism(sub, x, basis, check=False)


def quotient_module(x: Module, sub_basis) -> tuple[Module, Morphism, np.ndarray]:
    """``x / span(sub_basis)`` with its projection and a linear section."""
    p = x.p
    sub = la.column_space(la.columns(sub_basis, x.dim), p)
    proj, section, dim = la.quotient_with_section(x.dim, sub, p)
    act = (proj @ x.action @ section) % p
    q = Module(x.algebra, act, check=False)
    return q, Morphism(x, q, proj, check=False), section


def kernel_module(f: Morphism) -> tuple[Module, Morphism]:
    return submodule(f.source, la.kernel(f.matrix, f.p) if f.source.dim else la.zeros(0, 0))


def cokernel_module(f: Morphism) -> tuple[Module, Morphism]:
    q, proj, _ = quotient_module(f.target, f.matrix)
    return q, proj


def image_module(f: Morphism) -> tuple[Module, Morphism, Morphism]:
    """Image with the factorisation ``f = incl ∘ corestriction``."""
    im, incl = submodule(f.target, la.column_space(f.matrix, f.p))
    core = la.solve(incl.matrix, f.matrix, f.p) if im.dim else la.zeros(0, f.source.dim)
    return im, incl, Morphism(f.source, im, core, check=False)


def direct_sum(xs) -> tuple[Module, list, list]:
    xs = list(xs)
    if not xs:
        raise ValueError("direct_sum of an empty list needs an algebra; use Module.zero")
    a = xs[0].algebra
    for x in xs[1:]:
        _same(a, x.algebra)
    dims = [x.dim for x in xs]
    d = sum(dims)
    act = np.zeros((a.dim, d, d), dtype=np.int64)
    off = 0
    inj, proj = [], []
    for x in xs:
        act[:, off:off + x.dim, off:off + x.dim] = x.action
        off += x.dim
    s = Module(a, act, check=False)
    off = 0
    for x in xs:
        i = la.zeros(d, x.dim)
        i[off:off + x.dim] = la.identity(x.dim)
        inj.append(Morphism(x, s, i, check=False))
        proj.append(Morphism(s, x, i.T.copy(), check=False))
        off += x.dim
    return s, inj, proj


def direct_sum_module(xs, algebra: Algebra | None = None) -> Module:
    xs = list(xs)
    if not xs:
        return Module.zero(algebra)
    return direct_sum(xs)[0]


def power(x: Module, n: int) -> Module:
    return direct_sum_module([x] * n, x.algebra)


def block_morphism(sources, targets, blocks) -> np.ndarray:
    """Assemble a matrix from ``blocks[t][s]`` between direct sums."""
    rows = [sum(t.dim for t in targets[:k]) for k in range(len(targets) + 1)]
    cols = [sum(s.dim for s in sources[:k]) for k in range(len(sources) + 1)]
    m = la.zeros(rows[-1], cols[-1])
    for ti in range(len(targets)):
        for si in range(len(sources)):
            b = blocks[ti][si]
            if b is not None:
                m[rows[ti]:rows[ti + 1], cols[si]:cols[si + 1]] = b
    return m


# ------------------------------------------------------------- decomposition

def _fitting_split(f: np.ndarray, p: int):
    d = f.shape[0]
    eye = la.identity(d)
    for lam in range(p):
        g = la.matpow((f - lam * eye) % p, d, p)
        r = la.rank(g, p)
        if 0 < r < d:
            return la.kernel(g, p), la.column_space(g, p)
    return None


def _shift_to_nilpotent(f: np.ndarray, p: int):
    d = f.shape[0]
    eye = la.identity(d)
    for lam in range(p):
        if la.is_zero(la.matpow((f - lam * eye) % p, d, p)):
            return lam
    return None


def _local_certificate(E: np.ndarray, p: int) -> bool | None:
    """True if ``End`` is certified local with residue field F_p; ``None`` if undecided."""
    m, d, _ = E.shape
    eye = la.identity(d)
    shifted = []
    for f in E:
        lam = _shift_to_nilpotent(f, p)
        if lam is None:
            return None
        shifted.append(((f - lam * eye) % p).reshape(-1))
    W = la.span(shifted, d * d, p)
    if W.shape[1] != m - 1 or la.in_span(W, eye.reshape(-1), p):
        return None
    wm = [W[:, k].reshape(d, d) for k in range(W.shape[1])]
    for a in wm:
        for b in wm:
            if not la.in_span(W, ((a @ b) % p).reshape(-1), p):
                return None
    power = wm
    for _ in range(d + 1):
        if not power:
            return True
        prods = [((a @ b) % p).reshape(-1) for a in power for b in wm]
        pw = la.span(prods, d * d, p)
        power = [pw[:, k].reshape(d, d) for k in range(pw.shape[1])]
    return None


def split_once(x: Module, seed: int = 0, tries: int = 200):
    """``None`` if ``x`` is certified indecomposable, else two complementary
    submodule bases ``(K, I)`` with ``x = K ⊕ I``."""
    p = x.p
    if x.dim <= 1:
        return None
    E = hom_space(x, x)
    if E.shape[0] == 1:
        return None
    for f in E:
        s = _fitting_split(f, p)
        if s is not None:
            return s
    cert = _local_certificate(E, p)
    if cert:
        return None
    rng = np.random.default_rng(seed)
    m = E.shape[0]
    candidates = (np.einsum("k,kab->ab", rng.integers(0, p, m), E) % p for _ in range(tries))
    for f in itertools.chain(((a @ b) % p for a in E for b in E), candidates):
        s = _fitting_split(f, p)
        if s is not None:
            return s
    if p ** m <= 4096:
        for coeffs in itertools.product(range(p), repeat=m):
            s = _fitting_split(np.einsum("k,kab->ab", np.array(coeffs), E) % p, p)
            if s is not None:
                return s
        raise DecompositionError(
            f"End of a {x.dim}-dimensional module is not split-local yet has no splitting element")
    raise DecompositionError(f"could not certify (in)decomposability of a {x.dim}-dimensional module")


def decompose_with_maps(x: Module, seed: int = 0) -> list:
    """Indecomposable summands with their inclusion matrices into ``x``."""
    if x.dim == 0:
        return []
    out = []
    stack = [(x, la.identity(x.dim))]
    k = 0
    while stack:
        m, incl = stack.pop()
        s = split_once(m, seed + k)
        k += 1
        if s is None:
            out.append((m, incl))
            continue
        for basis in s:
            sub, i = submodule(m, basis)
            stack.append((sub, (incl @ i.matrix) % x.p))
    out.reverse()
    return out


def decompose(x: Module, seed: int = 0) -> list:
    return [m for m, _ in decompose_with_maps(x, seed)]


def is_indecomposable(x: Module, seed: int = 0) -> bool:
    return x.dim > 0 and split_once(x, seed) is None


def iso_indecomposable(x: Module, y: Module) -> bool:
    """Exact test for indecomposables: ``x ≅ y`` iff some ``g∘f`` over hom
    bases is invertible (End is local, so non-invertibles form a subspace)."""
    _same(x.algebra, y.algebra)
    if x.dim != y.dim or x.vertex_dims != y.vertex_dims:
        return False
    if x.dim == 0:
        return True
    H, G = hom_space(x, y), hom_space(y, x)
    for f in H:
        for g in G:
            if la.rank((g @ f) % x.p, x.p) == x.dim:
                return True
    return False


def is_isomorphic(x: Module, y: Module, seed: int = 0, budget: int = 256) -> bool:
    """Decide ``x ≅ y``.

    Dimension filters first, then hom-basis elements and seeded random
    combinations, then an exhaustive sweep when ``p**dim Hom <= budget``,
    and finally a Krull-Schmidt comparison of certified decompositions.
    Raises :class:`Inconclusive` when none of these can decide.
    """
    _same(x.algebra, y.algebra)
    p = x.p
    if x.dim != y.dim or x.vertex_dims != y.vertex_dims:
        return False
    if x.dim == 0:
        return True
    H = hom_space(x, y)
    m = H.shape[0]
    if m == 0:
        return False
    d = x.dim
    for f in H:
        if la.rank(f, p) == d:
            return True
    rng = np.random.default_rng(seed)
    for _ in range(16):
        f = np.einsum("k,kab->ab", rng.integers(0, p, m), H) % p
        if la.rank(f, p) == d:
            return True
    if p ** m <= budget:
        for coeffs in itertools.product(range(p), repeat=m):
            if la.rank(np.einsum("k,kab->ab", np.array(coeffs), H) % p, p) == d:
                return True
        return False
    try:
        return _krull_schmidt_equal(decompose(x, seed), decompose(y, seed))
    except DecompositionError as exc:
        raise Inconclusive(str(exc)) from exc


def _krull_schmidt_equal(xs, ys) -> bool:
    if len(xs) != len(ys):
        return False
    remaining = list(ys)
    for a in xs:
        for k, b in enumerate(remaining):
            if iso_indecomposable(a, b):
                remaining.pop(k)
                break
        else:
            return False
    return True


def isoclasses(modules) -> list:
    """Group indecomposables into isomorphism classes; returns ``[(rep, count)]``."""
    classes: list = []
    for m in modules:
        for k, (rep, c) in enumerate(classes):
            if iso_indecomposable(rep, m):
                classes[k] = (rep, c + 1)
                break
        else:
            classes.append((m, 1))
    return classes


def count_nonisomorphic_summands(x: Module, seed: int = 0) -> int:
    return len(isoclasses(decompose(x, seed)))


# ------------------------------------------------------------ bimodules, theta

class Bimodule:
    """An ``A``-``B``-bimodule: ``left[i] @ m == a_i . m`` and ``right[j] @ m == m . b_j``."""

    def __init__(self, left_algebra: Algebra, right_algebra: Algebra, left, right, labels=None,
                 check=True, name=""):
        self.left_algebra, self.right_algebra = left_algebra, right_algebra
        self.p = left_algebra.p
        self.left = np.array(left, dtype=np.int64) % self.p
        self.right = np.array(right, dtype=np.int64) % self.p
        self.dim = self.left.shape[1]
        self.labels = tuple(labels) if labels is not None else tuple(f"m{i}" for i in range(self.dim))
        self.name = name
        if check:
            rep = self.validate()
            if not rep.ok:
                raise ModuleLawError(rep.render(), rep.failures[0].witness)

    def __repr__(self):
        return f"<Bimodule {self.name} dim={self.dim}>"

    def validate(self) -> ValidationReport:
        rep = ValidationReport(f"bimodule {self.name}".strip())
        p = self.p
        la_, ra = self.left_algebra, self.right_algebra
        if self.dim == 0:
            rep.add("left_module_law", True)
            rep.add("right_module_law", True)
            rep.add("actions_commute", True)
            return rep
        res = law_residual(la_, self.left)
        bad = np.argwhere(res.any(axis=(2, 3)))
        unit_ok = np.array_equal(np.einsum("i,iab->ab", la_.unit, self.left) % p, la.identity(self.dim))
        rep.add("left_module_law", bad.size == 0 and unit_ok,
                None if bad.size == 0 else tuple(la_.labels[i] for i in bad[0]))
        # right action is a left action of the opposite algebra
        res = law_residual(ra.opposite, self.right)
        bad = np.argwhere(res.any(axis=(2, 3)))
        unit_ok = np.array_equal(np.einsum("i,iab->ab", ra.unit, self.right) % p, la.identity(self.dim))
        rep.add("right_module_law", bad.size == 0 and unit_ok,
                None if bad.size == 0 else tuple(ra.labels[i] for i in bad[0]))
        comm = (np.einsum("iab,jbc->ijac", self.left, self.right)
                - np.einsum("jab,ibc->ijac", self.right, self.left)) % p
        bad = np.argwhere(comm.any(axis=(2, 3)))
        rep.add("actions_commute", bad.size == 0,
                None if bad.size == 0 else (la_.labels[bad[0][0]], ra.labels[bad[0][1]]))
        return rep

    def left_act(self, r) -> np.ndarray:
        return np.einsum("i,iab->ab", r, self.left) % self.p

    def right_act(self, r) -> np.ndarray:
        return np.einsum("i,iab->ab", r, self.right) % self.p

    def as_left_module(self) -> Module:
        return Module(self.left_algebra, self.left, check=False)

    def as_right_module(self) -> Module:
        """The right module viewed as a left module over the opposite algebra."""
        return Module(self.right_algebra.opposite, self.right, check=False)

    @classmethod
    def zero(cls, left_algebra, right_algebra):
        return cls(left_algebra, right_algebra, np.zeros((left_algebra.dim, 0, 0)),
                   np.zeros((right_algebra.dim, 0, 0)), check=False, name="0")

    @classmethod
    def regular(cls, a: Algebra) -> "Bimodule":
        return cls(a, a, a.left_regular, a.right_regular, a.labels, check=False, name=f"{a.name}")

    @classmethod
    def dual_regular(cls, a: Algebra) -> "Bimodule":
        """``D(A) = Hom_k(A, k)`` with ``(r.φ.s)(x) = φ(s x r)``."""
        left = a.right_regular.transpose(0, 2, 1)
        right = a.left_regular.transpose(0, 2, 1)
        return cls(a, a, left, right, [f"{l}*" for l in a.labels], check=False, name=f"D({a.name})")

    @classmethod
    def from_left_module(cls, x: Module, right_algebra: Algebra | None = None) -> "Bimodule":
        """A left module as an ``A``-``k`` bimodule."""
        k = right_algebra or field_algebra(x.p)
        if k.dim != 1:
            raise AlgebraMismatch("right algebra must be the ground field")
        right = la.identity(x.dim).reshape(1, x.dim, x.dim)
        return cls(x.algebra, k, x.action, right, name=x.name or "M")

    def opposite(self) -> "Bimodule":
        """The same space as a ``B^op``-``A^op`` bimodule (sides swapped)."""
        return Bimodule(self.right_algebra.opposite, self.left_algebra.opposite, self.right, self.left,
                        self.labels, check=False, name=f"{self.name}^op")


class ThetaData:
    """An associative bimodule map ``θ: M ⊗_R M -> M``; ``table[i, j] = θ(m_i ⊗ m_j)``."""

    def __init__(self, bimodule: Bimodule, table, nilpotency: int | None = None):
        self.bimodule = bimodule
        self.p = bimodule.p
        d = bimodule.dim
        self.table = np.array(table, dtype=np.int64).reshape(d, d, d) % self.p
        self.nilpotency = nilpotency

    @classmethod
    def zero(cls, bimodule: Bimodule) -> "ThetaData":
        d = bimodule.dim
        return cls(bimodule, np.zeros((d, d, d), dtype=np.int64), 2 if d else 1)

    def theta(self, u, v) -> np.ndarray:
        return np.einsum("a,b,abk->k", u, v, self.table) % self.p

    def left_matrix(self, i: int) -> np.ndarray:
        """Matrix of ``m ↦ θ(m_i ⊗ m)``."""
        return self.table[i].T.copy()

    def validate(self) -> ValidationReport:
        m, t, p = self.bimodule, self.table, self.p
        d = m.dim
        rep = ValidationReport("theta")
        rep.extend(m.validate(), "bimodule.")
        if not m.left_algebra.same_as(m.right_algebra):
            rep.add("same_algebra_both_sides", False)
            return rep
        if d == 0:
            for name in ("balanced", "left_linear", "right_linear", "associative", "nilpotent"):
                rep.add(name, True)
            return rep
        # θ(m.r ⊗ m') == θ(m ⊗ r.m')
        lhs = np.einsum("rcb,cjk->rbjk", m.right, t)
        rhs = np.einsum("rcj,bck->rbjk", m.left, t)
        bad = np.argwhere(((lhs - rhs) % p).any(axis=3))
        rep.add("balanced", bad.size == 0, None if bad.size == 0 else tuple(int(x) for x in bad[0]))
        # θ(r.m ⊗ m') == r.θ(m ⊗ m')
        lhs = np.einsum("rca,cbk->rabk", m.left, t)
        rhs = np.einsum("rkc,abc->rabk", m.left, t)
        bad = np.argwhere(((lhs - rhs) % p).any(axis=3))
        rep.add("left_linear", bad.size == 0, None if bad.size == 0 else tuple(int(x) for x in bad[0]))
        # θ(m ⊗ m'.r) == θ(m ⊗ m').r
        lhs = np.einsum("rcb,ack->rabk", m.right, t)
        rhs = np.einsum("rkc,abc->rabk", m.right, t)
        bad = np.argwhere(((lhs - rhs) % p).any(axis=3))
        rep.add("right_linear", bad.size == 0, None if bad.size == 0 else tuple(int(x) for x in bad[0]))
        left = np.einsum("abm,mck->abck", t, t) % p
        right = np.einsum("bcm,amk->abck", t, t) % p
        bad = np.argwhere((left != right).any(axis=3))
        rep.add("associative", bad.size == 0,
                None if bad.size == 0 else tuple(m.labels[int(x)] for x in bad[0]))
        rep.add("nilpotent", self._nilpotent_at(self.nilpotency), self.nilpotency,
                "" if self._nilpotent_at(self.nilpotency) else "θ-products do not vanish at the stated index")
        return rep

    def _nilpotent_at(self, m: int | None) -> bool:
        if m is None:
            return False
        d = self.bimodule.dim
        if m <= 1:
            return d == 0
        cur = la.identity(d)
        for _ in range(m - 1):
            prods = [self.theta(cur[:, i], la.identity(d)[j]) for i in range(cur.shape[1]) for j in range(d)]
            cur = la.span(prods, d, self.p)
            if cur.shape[1] == 0:
                return True
        return cur.shape[1] == 0


# -------------------------------------------------------------------- tensor

@dataclass
class TensorProduct:
    """``M ⊗_B Y`` as a quotient of ``M ⊗_k Y`` (index ``i * dim Y + j``)."""

    module: Module
    proj: np.ndarray
    section: np.ndarray
    bimodule: Bimodule
    factor: Module

    def map(self, f, other: "TensorProduct") -> np.ndarray:
        """Matrix of ``1_M ⊗ f`` from this tensor product to ``other``."""
        fm = f.matrix if isinstance(f, Morphism) else np.asarray(f)
        return (other.proj @ np.kron(la.identity(self.bimodule.dim), fm) @ self.section) % self.module.p

    def morphism(self, f, other: "TensorProduct") -> Morphism:
        return Morphism(self.module, other.module, self.map(f, other), check=False)


def _balancing_span(m: Bimodule, yact: np.ndarray, dy: int) -> np.ndarray:
    p = m.p
    cols = []
    eye_m, eye_y = la.identity(m.dim), la.identity(dy)
    for r in range(m.right_algebra.dim):
        rel = (np.kron(m.right[r], eye_y) - np.kron(eye_m, yact[r])) % p
        cols.append(rel)
    big = np.concatenate(cols, axis=1) if cols else la.zeros(m.dim * dy, 0)
    return la.column_space(big, p)


def tensor(m, y: Module) -> TensorProduct:
    """``M ⊗_B Y`` with its induced left action (``m`` a Bimodule or ThetaData)."""
    if isinstance(m, ThetaData):
        m = m.bimodule
    _same(m.right_algebra, y.algebra, "bimodule and module")
    p = m.p
    n = m.dim * y.dim
    rel = _balancing_span(m, y.action, y.dim)
    proj, section, dim = la.quotient_with_section(n, rel, p)
    eye_y = la.identity(y.dim)
    act = np.stack([(proj @ np.kron(m.left[i], eye_y) @ section) % p for i in range(m.left_algebra.dim)]) \
        if dim else np.zeros((m.left_algebra.dim, 0, 0), dtype=np.int64)
    mod = Module(m.left_algebra, act, check=False)
    return TensorProduct(mod, proj, section, m, y)


def tensor_bimodules(n: Bimodule, q: Bimodule) -> tuple[Bimodule, TensorProduct]:
    """``N ⊗_B Q`` as a bimodule (left of ``N``, right of ``Q``)."""
    tp = tensor(n, q.as_left_module())
    p = n.p
    eye_n = la.identity(n.dim)
    right = np.stack([(tp.proj @ np.kron(eye_n, q.right[j]) @ tp.section) % p
                      for j in range(q.right_algebra.dim)]) if tp.module.dim else \
        np.zeros((q.right_algebra.dim, 0, 0), dtype=np.int64)
    bm = Bimodule(n.left_algebra, q.right_algebra, tp.module.action, right, check=False,
                  name=f"{n.name}⊗{q.name}")
    return bm, tp


# ---------------------------------------------------------------------- dual

def dual(x: Module) -> Module:
    """``D x = Hom_k(x, k)`` as a module over the opposite algebra."""
    return Module(x.algebra.opposite, x.action.transpose(0, 2, 1), check=False,
                  name=f"D({x.name})" if x.name else "")


def dual_morphism(f: Morphism, dsource: Module | None = None, dtarget: Module | None = None) -> Morphism:
    dsource = dsource or dual(f.target)
    dtarget = dtarget or dual(f.source)
    return Morphism(dsource, dtarget, f.matrix.T.copy(), check=False)


# --------------------------------------------------------------------- trace

def trace_of_in(x: Module, l: Module) -> tuple[np.ndarray, bool]:
    """Sum of images of all maps ``x -> l``; ``is_all`` iff ``l ∈ Gen(x)``."""
    H = hom_space(x, l)
    if H.shape[0] == 0:
        return la.zeros(l.dim, 0), l.dim == 0
    basis = la.column_space(np.concatenate(list(H), axis=1), x.p)
    return basis, basis.shape[1] == l.dim


# ---------------------------------------------------------------- extensions

class CocycleError(ModuleLawError):
    pass


def _extension_gens(z: Module, x: Module, cocycle) -> list:
    a = x.algebra
    labels = a.generator_labels
    if isinstance(cocycle, dict):
        cocycle = [cocycle.get(k) for k in labels]
    gens = []
    for g in range(len(labels)):
        c = cocycle[g] if cocycle is not None and cocycle[g] is not None else la.zeros(x.dim, z.dim)
        c = np.asarray(c, dtype=np.int64).reshape(x.dim, z.dim)
        top = np.concatenate([x.gen_matrices[g], c], axis=1)
        bot = np.concatenate([la.zeros(z.dim, x.dim), z.gen_matrices[g]], axis=1)
        gens.append(np.concatenate([top, bot], axis=0) % x.p)
    return gens


def build_extension(z: Module, x: Module, cocycle=None) -> tuple[Module, Morphism, Morphism]:
    """Middle term of ``0 -> x -> E -> z -> 0`` with generator actions
    ``[[x_g, c_g], [0, z_g]]``."""
    _same(z.algebra, x.algebra)
    a = x.algebra
    gens = _extension_gens(z, x, cocycle)
    d = x.dim + z.dim
    if d == 0:
        e = Module.zero(a)
    else:
        act = actions_from_generators(a, gens)
        e = Module(a, act, check=False)
        w = e.law_violation()
        if w is not None:
            raise CocycleError(f"cocycle violates the relation between basis elements {w}", w)
        for g, gv in enumerate(a.generators):
            if np.any(e.act(gv) != gens[g]):
                raise CocycleError(f"cocycle is inconsistent at generator {a.generator_labels[g]}",
                                   a.generator_labels[g])
    inc = la.zeros(d, x.dim)
    inc[:x.dim] = la.identity(x.dim)
    pr = la.zeros(z.dim, d)
    pr[:, x.dim:] = la.identity(z.dim)
    return e, Morphism(x, e, inc, check=False), Morphism(e, z, pr, check=False)


def _extension_defect(z: Module, x: Module, flat: np.ndarray) -> np.ndarray:
    a = x.algebra
    ng = len(a.generators)
    blocks = flat.reshape(ng, x.dim, z.dim)
    gens = _extension_gens(z, x, list(blocks))
    act = actions_from_generators(a, gens)
    res = law_residual(a, act)[:, :, :x.dim, x.dim:]
    consist = np.stack([(np.einsum("i,iab->ab", gv, act) - gens[g]) % a.p
                        for g, gv in enumerate(a.generators)])[:, :x.dim, x.dim:]
    return np.concatenate([res.reshape(-1), consist.reshape(-1)])


def extension_cocycles(z: Module, x: Module) -> list:
    """Cocycles representing a basis of ``Ext^1(z, x)`` (as per-generator blocks)."""
    _same(z.algebra, x.algebra)
    a, p = x.algebra, x.p
    ng = len(a.generators)
    nu = ng * x.dim * z.dim
    if nu == 0:
        return []
    cols = []
    for u in range(nu):
        e = np.zeros(nu, dtype=np.int64)
        e[u] = 1
        cols.append(_extension_defect(z, x, e))
    Z = la.kernel(np.stack(cols, axis=1) % p, p)
    B = []
    for u in range(x.dim * z.dim):
        h = np.zeros(x.dim * z.dim, dtype=np.int64)
        h[u] = 1
        h = h.reshape(x.dim, z.dim)
        B.append(np.concatenate([((x.gen_matrices[g] @ h - h @ z.gen_matrices[g]) % p).reshape(-1)
                                 for g in range(ng)]))
    current = la.span(B, nu, p)
    reps = []
    for k in range(Z.shape[1]):
        v = Z[:, k]
        if la.in_span(current, v, p):
            continue
        current = np.concatenate([current, v.reshape(-1, 1)], axis=1)
        reps.append(list(v.reshape(ng, x.dim, z.dim)))
    return reps
