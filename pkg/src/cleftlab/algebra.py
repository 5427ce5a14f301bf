"""Finite-dimensional split basic algebras given by structure constants.

An :class:`Algebra` stores its multiplication table ``mult[i, j] = e_i * e_j``
(a vector in the basis), together with certified structural data: a complete
set of primitive orthogonal idempotents (one per vertex) and a basis of the
Jacobson radical.  Constructors always know these, so the radical is never
computed from scratch.

Path conventions: an arrow ``a: s -> t`` satisfies ``a = e_t a e_s``; a path is
written as the list of its arrows in traversal order, and the algebra product
``b * a`` of composable arrows is the path ``[a, b]``.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la


class AlgebraError(ValueError):
    pass


class InadmissibleBound(AlgebraError):
    def __init__(self, msg, witness):
        super().__init__(msg)
        self.witness = witness


class IdealIsWholeAlgebra(AlgebraError):
    pass


class RelationError(AlgebraError):
    pass


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # (name, source, target)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("vertex labels must be distinct")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("arrow names must be distinct")
        for name, s, t in self.arrows:
            if s not in self.vertices or t not in self.vertices:
                raise AlgebraError(f"arrow {name!r} has an endpoint outside the vertex set")

    def arrow(self, name):
        for a in self.arrows:
            if a[0] == name:
                return a
        raise RelationError(f"unknown arrow {name!r}")


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths, each of length at least 2."""

    terms: tuple  # (coefficient, path-as-tuple-of-arrow-names)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(c), tuple(path)) for c, path in self.terms))

    def check(self, quiver: Quiver):
        ends = set()
        for _, path in self.terms:
            if len(path) < 2:
                raise RelationError(f"relation path {list(path)} has length < 2")
            arrows = [quiver.arrow(a) for a in path]
            for x, y in zip(arrows, arrows[1:]):
                if x[2] != y[1]:
                    raise RelationError(f"path {list(path)} is not composable at {x[0]}, {y[0]}")
            ends.add((arrows[0][1], arrows[-1][2]))
        if len(ends) > 1:
            raise RelationError(
                "relation paths are not parallel: " + ", ".join(str(list(p)) for _, p in self.terms))


class Algebra:
    """Split basic algebra over F_p with certified idempotents and radical."""

    def __init__(self, mult, unit, idempotents, radical, p, labels=None, vertices=None, name=""):
        self.p = p
        self.mult = np.array(mult, dtype=np.int64) % p
        self.dim = self.mult.shape[0]
        n = self.dim
        if self.mult.shape != (n, n, n):
            raise AlgebraError(f"structure constants have shape {self.mult.shape}")
        self.unit = np.array(unit, dtype=np.int64).reshape(n) % p
        self.idempotents = np.array(idempotents, dtype=np.int64).reshape(-1, n) % p
        self.radical = np.array(radical, dtype=np.int64).reshape(n, -1) % p
        self.labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(n))
        nv = self.idempotents.shape[0]
        self.vertices = tuple(vertices) if vertices is not None else tuple(str(i + 1) for i in range(nv))
        self.name = name
        for arr in (self.mult, self.unit, self.idempotents, self.radical):
            arr.setflags(write=False)

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, p={self.p}, vertices={list(self.vertices)})"

    @cached_property
    def key(self) -> str:
        h = hashlib.sha1()
        h.update(str((self.p, self.dim)).encode())
        h.update(self.mult.tobytes())
        return h.hexdigest()

    def same_as(self, other: "Algebra") -> bool:
        return self is other or self.key == other.key

    @property
    def n_vertices(self) -> int:
        return self.idempotents.shape[0]

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def index(self, label) -> int:
        return self.labels.index(label)

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.p

    @cached_property
    def left_regular(self) -> np.ndarray:
        # left_regular[i] @ v == e_i * v
        return np.ascontiguousarray(self.mult.transpose(0, 2, 1))

    @cached_property
    def right_regular(self) -> np.ndarray:
        # right_regular[i] @ v == v * e_i
        return np.ascontiguousarray(self.mult.transpose(1, 2, 0))

    def left_mult(self, x) -> np.ndarray:
        return np.einsum("i,iab->ab", x, self.left_regular) % self.p

    def right_mult(self, x) -> np.ndarray:
        return np.einsum("i,iab->ab", x, self.right_regular) % self.p

    def corner(self, t: int, x, s: int) -> np.ndarray:
        """``e_t x e_s``."""
        return self.mul(self.mul(self.idempotents[t], x), self.idempotents[s])

    @cached_property
    def radical_square(self) -> np.ndarray:
        r = self.radical
        prods = [self.mul(r[:, i], r[:, j]) for i in range(r.shape[1]) for j in range(r.shape[1])]
        return la.span(prods, self.dim, self.p)

    @cached_property
    def arrows(self) -> tuple:
        """Homogeneous algebra generators of the radical: ``(vector, source, target, label)``.

        For each vertex pair a complement of ``e_t rad^2 e_s`` in ``e_t rad e_s``
        is chosen; for path algebras these are exactly the arrows.
        """
        out = []
        p = self.p
        r2 = self.radical_square
        count = 0
        for s in range(self.n_vertices):
            for t in range(self.n_vertices):
                v = la.span([self.corner(t, self.radical[:, k], s) for k in range(self.radical.shape[1])],
                            self.dim, p)
                w = la.span([self.corner(t, r2[:, k], s) for k in range(r2.shape[1])], self.dim, p)
                current = w
                for k in range(v.shape[1]):
                    vec = v[:, k]
                    if la.in_span(current, vec, p):
                        continue
                    current = np.concatenate([current, vec.reshape(-1, 1)], axis=1)
                    nz = np.flatnonzero(vec)
                    if nz.size == 1 and vec[nz[0]] == 1:
                        label = self.labels[nz[0]]
                    else:
                        label = f"g{count}"
                    count += 1
                    out.append((vec.copy(), s, t, label))
        return tuple(out)

    @property
    def generators(self) -> list:
        """Idempotents followed by the radical generators, as vectors."""
        return [e for e in self.idempotents] + [a[0] for a in self.arrows]

    @property
    def generator_labels(self) -> list:
        return [f"e{v}" for v in self.vertices] + [a[3] for a in self.arrows]

    @cached_property
    def word_table(self) -> tuple[list, np.ndarray]:
        """Words in the generators spanning the algebra, and the coefficient
        matrix ``coef`` with ``basis_i = sum_w coef[w, i] * word_w``."""
        p, n = self.p, self.dim
        gens = self.generators
        words = [()]
        vecs = [self.unit.copy()]
        current = la.span(vecs, n, p)
        queue = [((), self.unit.copy())]
        while queue and current.shape[1] < n:
            nxt = []
            for w, v in queue:
                for g, gv in enumerate(gens):
                    u = self.mul(gv, v)
                    if la.in_span(current, u, p):
                        continue
                    words.append((g,) + w)
                    vecs.append(u)
                    current = np.concatenate([current, u.reshape(-1, 1)], axis=1)
                    nxt.append(((g,) + w, u))
            queue = nxt
        if current.shape[1] < n:
            raise AlgebraError("idempotents and radical generators do not generate the algebra")
        wmat = np.stack(vecs, axis=1)
        coef = la.solve(wmat, la.identity(n), p)
        return words, coef

    @cached_property
    def opposite(self) -> "Algebra":
        op = Algebra(self.mult.transpose(1, 0, 2), self.unit, self.idempotents, self.radical, self.p,
                     self.labels, self.vertices, name=f"{self.name}^op")
        op.__dict__["opposite"] = self
        return op

    def validate(self) -> "ValidationReport":
        return validate(self)


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None
    message: str = ""


@dataclass
class ValidationReport:
    subject: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def add(self, name, passed, witness=None, message=""):
        self.checks.append(Check(name, bool(passed), witness, message))

    def extend(self, other: "ValidationReport", prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.message))

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": _jsonable(c.witness), "message": c.message}
                for c in self.checks
            ],
        }

    def render(self) -> str:
        lines = [f"validate {self.subject}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{'ok' if c.passed else 'FAIL'}] {c.name}"
            if not c.passed:
                line += f"  witness={c.witness!r}"
                if c.message:
                    line += f"  ({c.message})"
            lines.append(line)
        return "\n".join(lines)


def _jsonable(x):
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, np.integer):
        return int(x)
    return str(x)


def _first_mismatch(a, b):
    bad = np.argwhere(a != b)
    return None if bad.size == 0 else tuple(int(i) for i in bad[0])


def validate(a: Algebra) -> ValidationReport:
    """Check every structural invariant; never raises."""
    p, n, c = a.p, a.dim, a.mult
    rep = ValidationReport(f"algebra {a.name or ''} (dim {n})".strip())
    lab = a.labels

    left = np.einsum("ijm,mkl->ijkl", c, c) % p
    right = np.einsum("jkm,iml->ijkl", c, c) % p
    w = _first_mismatch(left, right)
    rep.add("associativity", w is None, None if w is None else tuple(lab[i] for i in w[:3]))

    lu = np.einsum("i,ijk->jk", a.unit, c) % p
    ru = np.einsum("j,ijk->ik", a.unit, c) % p
    eye = la.identity(n)
    w1, w2 = _first_mismatch(lu, eye), _first_mismatch(ru, eye)
    rep.add("unit_left", w1 is None, None if w1 is None else lab[w1[0]])
    rep.add("unit_right", w2 is None, None if w2 is None else lab[w2[0]])

    e = a.idempotents
    bad = None
    for i in range(e.shape[0]):
        for j in range(e.shape[0]):
            prod = a.mul(e[i], e[j])
            want = e[i] if i == j else np.zeros(n, dtype=np.int64)
            if np.any(prod != want):
                bad = (a.vertices[i], a.vertices[j])
                break
        if bad:
            break
    rep.add("orthogonal_idempotents", bad is None, bad)
    rep.add("idempotents_sum_to_unit", np.array_equal(e.sum(axis=0) % p, a.unit), None)

    r = a.radical
    rk = la.rank(r.T, p) if r.shape[1] else 0
    rep.add("radical_independent", rk == r.shape[1], None)
    bad = None
    for k in range(r.shape[1]):
        for i in range(n):
            for prod in (a.mul(r[:, k], eye[i]), a.mul(eye[i], r[:, k])):
                if not la.in_span(r, prod, p):
                    bad = (k, lab[i])
                    break
            if bad:
                break
        if bad:
            break
    rep.add("radical_two_sided_ideal", bad is None, bad)

    power = r
    nilpotent = False
    for _ in range(n + 1):
        if power.shape[1] == 0:
            nilpotent = True
            break
        prods = [a.mul(power[:, i], r[:, j]) for i in range(power.shape[1]) for j in range(r.shape[1])]
        power = la.span(prods, n, p)
    rep.add("radical_nilpotent", nilpotent, None)

    maximal = n - rk == e.shape[0]
    rep.add("radical_maximal", maximal, n - rk,
            "" if maximal else "radical not maximal-nilpotent among supplied data")

    split_ok, witness = True, None
    if rk == r.shape[1]:
        proj, section, qd = la.quotient_with_section(n, r, p)
        for i in range(e.shape[0]):
            for j in range(e.shape[0]):
                vecs = [proj @ a.mul(a.mul(e[i], eye[b]), e[j]) % p for b in range(n)]
                d = la.rank(np.stack(vecs), p) if vecs else 0
                if d != (1 if i == j else 0):
                    split_ok, witness = False, (a.vertices[i], a.vertices[j], d)
                    break
            if not split_ok:
                break
    else:
        split_ok = False
    rep.add("split_basic", split_ok, witness)
    return rep


# ---------------------------------------------------------------- constructors

def _paths(quiver: Quiver, max_len: int) -> list[tuple]:
    """Vertex paths ``('@', v)`` followed by arrow paths in traversal order, by length."""
    out = [("@", v) for v in quiver.vertices]
    layer = [(a[0],) for a in quiver.arrows]
    length = 1
    while layer and length <= max_len:
        out.extend(layer)
        nxt = []
        for path in layer:
            end = quiver.arrow(path[-1])[2]
            for a in quiver.arrows:
                if a[1] == end:
                    nxt.append(path + (a[0],))
        layer = nxt
        length += 1
    return out


def _path_len(path) -> int:
    return 0 if path[0] == "@" else len(path)


def _endpoints(quiver: Quiver, path):
    if path[0] == "@":
        return path[1], path[1]
    return quiver.arrow(path[0])[1], quiver.arrow(path[-1])[2]


def _compose(quiver: Quiver, first, then):
    """Traverse ``first`` then ``then``; ``None`` if not composable."""
    s1, t1 = _endpoints(quiver, first)
    s2, t2 = _endpoints(quiver, then)
    if t1 != s2:
        return None
    if first[0] == "@":
        return then
    if then[0] == "@":
        return first
    return first + then


def _path_label(path) -> str:
    if path[0] == "@":
        return f"e{path[1]}"
    return "*".join(reversed(path))


def _ideal_span(quiver, rels, paths, index, max_len, p):
    n = len(paths)
    vecs = []
    for rel in rels:
        s, t = _endpoints(quiver, rel.terms[0][1])
        for w in paths:
            if _endpoints(quiver, w)[1] != s:
                continue
            for u in paths:
                if _endpoints(quiver, u)[0] != t:
                    continue
                if _path_len(w) + _path_len(u) + 2 > max_len:
                    continue
                v = np.zeros(n, dtype=np.int64)
                for coeff, rp in rel.terms:
                    full = _compose(quiver, _compose(quiver, w, rp), u)
                    if _path_len(full) <= max_len:
                        v[index[full]] += coeff
                if np.any(v % p):
                    vecs.append(v % p)
    return la.span(vecs, n, p)


def path_algebra(quiver: Quiver, relations=(), length_bound: int = 2, p: int = 2, name="") -> Algebra:
    """Path algebra ``kQ / (relations + paths of length >= length_bound)``.

    Raises :class:`InadmissibleBound` (with a witness path) when some path of
    length ``length_bound`` is not in the ideal generated by the relations.
    """
    if length_bound < 1:
        raise AlgebraError("length_bound must be positive")
    rels = [r if isinstance(r, Relation) else Relation(r) for r in relations]
    for r in rels:
        r.check(quiver)

    # admissibility: every path of length length_bound must lie in the ideal
    long_paths = _paths(quiver, length_bound)
    idx = {q: i for i, q in enumerate(long_paths)}
    top = [q for q in long_paths if _path_len(q) == length_bound]
    if top:
        ideal = _ideal_span(quiver, rels, long_paths, idx, length_bound, p)
        for q in top:
            if not la.in_span(ideal, np.eye(len(long_paths), dtype=np.int64)[idx[q]], p):
                raise InadmissibleBound(
                    f"path {list(q)} of length {length_bound} is not killed by the relations", list(q))

    paths = _paths(quiver, length_bound - 1)
    n0 = len(paths)
    index = {q: i for i, q in enumerate(paths)}
    ideal = _ideal_span(quiver, rels, paths, index, length_bound - 1, p)
    # prefer long paths as pivots so normal forms are in short paths
    order = list(range(n0))[::-1]
    proj_r, section_r, dim = la.quotient_with_section(n0, ideal[order], p)
    proj = np.zeros((dim, n0), dtype=np.int64)
    proj[:, order] = proj_r
    old_of = [order[int(np.flatnonzero(section_r[:, k])[0])] for k in range(dim)]
    perm = sorted(range(dim), key=lambda k: old_of[k])
    proj = proj[perm]
    kept = [old_of[k] for k in perm]
    basis_paths = [paths[i] for i in kept]

    mult = np.zeros((dim, dim, dim), dtype=np.int64)
    for i, x in enumerate(basis_paths):
        for j, y in enumerate(basis_paths):
            prod = _compose(quiver, y, x)  # x * y: traverse y then x
            if prod is None or _path_len(prod) >= length_bound:
                continue
            mult[i, j] = proj[:, index[prod]]
    nv = len(quiver.vertices)
    unit = np.zeros(dim, dtype=np.int64)
    unit[:nv] = 1
    idem = np.eye(dim, dtype=np.int64)[:nv]
    rad = np.eye(dim, dtype=np.int64)[:, nv:]
    return Algebra(mult, unit, idem, rad, p, [_path_label(q) for q in basis_paths],
                   quiver.vertices, name=name)


def field_algebra(p: int = 2) -> Algebra:
    return path_algebra(Quiver(["1"], []), [], 1, p, name="k")


def linear_quiver(n: int, orientation=None) -> Quiver:
    """A_n with arrows ``a1..a_{n-1}``; orientation ``'r'`` means ``i -> i+1``."""
    orientation = orientation or "r" * (n - 1)
    arrows = []
    for i, o in enumerate(orientation, start=1):
        s, t = (str(i), str(i + 1)) if o == "r" else (str(i + 1), str(i))
        arrows.append((f"a{i}", s, t))
    return Quiver([str(i) for i in range(1, n + 1)], arrows)


def type_a(n: int, p: int = 2, orientation=None) -> Algebra:
    return path_algebra(linear_quiver(n, orientation), [], max(n, 1), p, name=f"kA{n}")


def quotient_by_ideal(a: Algebra, gens) -> tuple[Algebra, np.ndarray]:
    """Quotient by the two-sided ideal generated by ``gens``.

    Returns the quotient algebra and the projection matrix (``dim B x dim A``).
    The quotient basis is a subset of the original basis; the chosen indices
    are recorded in ``B.lift_indices``.
    """
    p, n = a.p, a.dim
    eye = la.identity(n)
    vecs = []
    for g in gens:
        g = np.asarray(g, dtype=np.int64) % p
        for i in range(n):
            left = a.mul(eye[i], g)
            for j in range(n):
                vecs.append(a.mul(left, eye[j]))
    ideal = la.span(vecs, n, p)
    if la.in_span(ideal, a.unit, p):
        raise IdealIsWholeAlgebra("the ideal contains the unit")
    proj, section, dim = la.quotient_with_section(n, ideal, p)
    kept = [int(np.flatnonzero(section[:, k])[0]) for k in range(dim)]
    mult = np.zeros((dim, dim, dim), dtype=np.int64)
    for x, i in enumerate(kept):
        for y, j in enumerate(kept):
            mult[x, y] = proj @ a.mult[i, j] % p
    idem = [proj @ e % p for e in a.idempotents]
    keep_v = [k for k, e in enumerate(idem) if np.any(e)]
    rad = la.column_space(proj @ a.radical % p, p)
    b = Algebra(mult, proj @ a.unit % p, [idem[k] for k in keep_v], rad, p,
                [a.labels[i] for i in kept], [a.vertices[k] for k in keep_v],
                name=f"{a.name}/I")
    b.lift_indices = kept
    b.vertex_indices = keep_v
    return b, proj


def opposite(a: Algebra) -> Algebra:
    return a.opposite


def product(a: Algebra, b: Algebra) -> Algebra:
    """The direct product algebra ``a x b``."""
    if a.p != b.p:
        raise AlgebraError("factors over different fields")
    na, nb = a.dim, b.dim
    n = na + nb
    mult = np.zeros((n, n, n), dtype=np.int64)
    mult[:na, :na, :na] = a.mult
    mult[na:, na:, na:] = b.mult
    unit = np.concatenate([a.unit, b.unit])
    idem = [np.concatenate([e, np.zeros(nb, dtype=np.int64)]) for e in a.idempotents]
    idem += [np.concatenate([np.zeros(na, dtype=np.int64), e]) for e in b.idempotents]
    rad = la.block_diag(a.radical, b.radical)
    va = list(a.vertices)
    vb = [v if v not in va else f"{v}'" for v in b.vertices]
    la_ = list(a.labels)
    lb = [x if x not in la_ else f"{x}'" for x in b.labels]
    return Algebra(mult, unit, idem, rad, a.p, la_ + lb, va + vb, name=f"{a.name}x{b.name}")


def semisimple(n: int, p: int = 2) -> Algebra:
    """``k x ... x k`` (n factors), as the path algebra of n isolated vertices."""
    return path_algebra(Quiver([str(i) for i in range(1, n + 1)], []), [], 1, p, name=f"k^{n}")


def isomorphic_by_permutation(a: Algebra, b: Algebra, max_dim: int = 8):
    """Search for a basis permutation carrying the structure constants of ``a``
    onto those of ``b``.  Returns the permutation or ``None``."""
    if a.dim != b.dim or a.p != b.p or a.dim > max_dim:
        return None
    n = a.dim
    for perm in itertools.permutations(range(n)):
        pa = np.array(perm)
        # b[perm i, perm j, perm k] == a[i, j, k]
        if np.array_equal(b.mult[np.ix_(pa, pa, pa)], a.mult):
            return perm
    return None
